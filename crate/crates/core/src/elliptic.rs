//! Elliptic integrals of the first kind and the Weierstrass ℘ function.
//!
//! Complete integrals go through the arithmetic-geometric mean, incomplete
//! ones through Carlson's symmetric RF form; both accept the complementary
//! parameter 1-k^2 directly so that moduli exponentially close to 1 (the
//! z -> 0 regime) lose no digits. Below `tol::ABEL_SWITCH` the complete
//! integral switches to the log expansion K = A(k) + ln(1-k) B(k) with A,
//! B truncated at second order. ℘ and ℘' are evaluated through theta
//! quotients with the nome chosen from the better-conditioned basis of the
//! period lattice; the raw lattice-sum definition is kept in tests as a
//! coarse cross-check.

use crate::error::{Error, Result};
use crate::{tol, Cplx};

const LN2: f64 = std::f64::consts::LN_2;

/// Arithmetic-geometric mean of 1 and b > 0.
fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..60 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 1e-17 * an {
            return an;
        }
        a = an;
        b = bn;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral K from the complementary parameter
/// m1 = 1 - k^2 = k'^2.
pub fn ellip_k_complement(m1: f64) -> Result<f64> {
    if !(m1 > 0.0 && m1 <= 1.0) {
        return Err(Error::ModulusOutOfRange(1.0 - m1));
    }
    let kp = m1.sqrt();
    // 1 - k without cancellation
    let delta = m1 / (1.0 + (1.0 - m1).max(0.0).sqrt());
    if delta < tol::ABEL_SWITCH {
        return Ok(abel_k(delta));
    }
    Ok(std::f64::consts::FRAC_PI_2 / agm(1.0, kp))
}

/// Log expansion of K near k = 1: K = A(k) + ln(1-k) B(k), with
/// A(k) = (3/2)ln2 + ((k-1)/4)(1 - 3ln2) + O((k-1)^2),
/// B(k) = -1/2 + (k-1)/4 + O((k-1)^2); delta = 1 - k.
fn abel_k(delta: f64) -> f64 {
    let a = 1.5 * LN2 + (-delta / 4.0) * (1.0 - 3.0 * LN2);
    let b = -0.5 - delta / 4.0;
    a + delta.ln() * b
}

/// Complete elliptic integral of the first kind, modulus convention.
pub fn ellip_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::ModulusOutOfRange(k));
    }
    ellip_k_complement((1.0 - k) * (1.0 + k))
}

/// Carlson symmetric integral RF(x, y, z) for non-negative arguments, at
/// most one of them zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || (x + y) == 0.0 || (y + z) == 0.0 || (z + x) == 0.0 {
        return Err(Error::ArgumentOutOfRange(x.min(y).min(z), "RF domain"));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let mut mu;
    loop {
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        mu = (x + y + z) / 3.0;
        let eps = ((x - mu).abs().max((y - mu).abs()).max((z - mu).abs())) / mu;
        if eps < 1e-4 {
            break;
        }
    }
    let dx = 1.0 - x / mu;
    let dy = 1.0 - y / mu;
    let dz = 1.0 - z / mu;
    let e2 = dx * dy + dy * dz + dz * dx;
    let e3 = dx * dy * dz;
    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt())
}

/// Incomplete elliptic integral F(w, k) = int_0^w dt / sqrt((1-t^2)(1-k^2 t^2)).
pub fn ellip_f(w: f64, k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::ArgumentOutOfRange(w, "w in [0, 1]"));
    }
    if !(0.0..1.0).contains(&k) {
        return Err(Error::ModulusOutOfRange(k));
    }
    if w == 0.0 {
        return Ok(0.0);
    }
    if w == 1.0 {
        return ellip_k(k);
    }
    let w2c = (1.0 - w) * (1.0 + w);
    let m1 = (1.0 - k) * (1.0 + k);
    ellip_f_stable(w, w2c, m1)
}

/// F(w, k) from pre-computed complements 1-w^2 and 1-k^2, which the period
/// pipeline obtains cancellation-free from branch-point cross-ratios.
pub fn ellip_f_stable(w: f64, w2_complement: f64, m1: f64) -> Result<f64> {
    if w == 0.0 {
        return Ok(0.0);
    }
    if w2_complement <= 0.0 {
        return ellip_k_complement(m1);
    }
    // 1 - k^2 w^2 = m1 + k^2 (1 - w^2)
    let y = m1 + (1.0 - m1) * w2_complement;
    Ok(w * carlson_rf(w2_complement, y, 1.0)?)
}

/// Period lattice spanned by a purely imaginary omega1 and a real omega2.
#[derive(Debug, Clone, Copy)]
pub struct Weierstrass {
    pub omega1: Cplx,
    pub omega2: Cplx,
    /// half of the basis generator used for the theta expansion
    half: Cplx,
    /// nome exp(i pi B2 / B1)
    q: Cplx,
    /// theta1'''(0)/theta1'(0)
    c3: Cplx,
}

impl Weierstrass {
    pub fn new(omega1: Cplx, omega2: Cplx) -> Result<Self> {
        if omega1.norm() == 0.0 || omega2.norm() == 0.0 {
            return Err(Error::DegenerateMap("zero period".into()));
        }
        let ratio = omega1 / omega2;
        if ratio.im.abs() < 1e-12 {
            return Err(Error::DegenerateMap("periods linearly dependent".into()));
        }
        // pick the basis orientation whose nome is smaller
        let (b1, b2) = if ratio.im.abs() >= 1.0 {
            (omega2, omega1 * ratio.im.signum())
        } else {
            let inv = omega2 / omega1;
            (omega1, omega2 * inv.im.signum())
        };
        let tau = b2 / b1;
        let q = (Cplx::i() * std::f64::consts::PI * tau).exp();
        // theta1'''(0)/theta1'(0) from the sine series
        let mut num = Cplx::new(0.0, 0.0);
        let mut den = Cplx::new(0.0, 0.0);
        let mut qp = Cplx::new(1.0, 0.0); // q^{n(n+1)}
        let mut sign = 1.0;
        for n in 0..40u32 {
            let m = (2 * n + 1) as f64;
            den += sign * qp * m;
            num += sign * qp * m * m * m;
            if qp.norm() < 1e-20 && n > 2 {
                break;
            }
            qp = qp * q.powu(2 * (n + 1));
            sign = -sign;
        }
        let c3 = -num / den;
        Ok(Weierstrass {
            omega1,
            omega2,
            half: b1 / 2.0,
            q,
            c3,
        })
    }

    /// Reduce z modulo the lattice into the cell centered at the origin.
    pub fn reduce_centered(&self, z: Cplx) -> Cplx {
        let a = z.re / self.omega2.re;
        let b = z.im / self.omega1.im;
        let fa = a - a.round();
        let fb = b - b.round();
        Cplx::new(fa * self.omega2.re, fb * self.omega1.im)
    }

    fn theta_sums(&self, u: Cplx) -> (Cplx, Cplx, Cplx, Cplx) {
        let mut s0 = Cplx::new(0.0, 0.0);
        let mut s1 = Cplx::new(0.0, 0.0);
        let mut s2 = Cplx::new(0.0, 0.0);
        let mut s3 = Cplx::new(0.0, 0.0);
        let mut qp = Cplx::new(1.0, 0.0);
        let mut sign = 1.0;
        for n in 0..60u32 {
            let m = (2 * n + 1) as f64;
            let (sin_mu, cos_mu) = ((u * m).sin(), (u * m).cos());
            let w = sign * qp;
            s0 += w * sin_mu;
            s1 += w * m * cos_mu;
            s2 -= w * m * m * sin_mu;
            s3 -= w * m * m * m * cos_mu;
            let done = (w * m * m * m).norm() < 1e-18 * (s0.norm() + 1.0) && n > 3;
            if done {
                break;
            }
            qp = qp * self.q.powu(2 * (n + 1));
            sign = -sign;
        }
        (s0, s1, s2, s3)
    }

    /// ℘(z) and ℘'(z).
    pub fn eval(&self, z: Cplx) -> Result<(Cplx, Cplx)> {
        let zr = self.reduce_centered(z);
        let scale = self.omega1.norm() + self.omega2.norm();
        if zr.norm() < 1e-12 * scale {
            return Err(Error::LatticePole);
        }
        let u = zr * std::f64::consts::PI / (2.0 * self.half);
        let (s0, s1, s2, s3) = self.theta_sums(u);
        if s0.norm() < 1e-280 {
            return Err(Error::LatticePole);
        }
        let l1 = s1 / s0;
        let l2 = s2 / s0 - l1 * l1;
        let l3 = s3 / s0 - 3.0 * (s2 / s0) * l1 + 2.0 * l1 * l1 * l1;
        let fac = std::f64::consts::PI / (2.0 * self.half);
        let p = fac * fac * (self.c3 / 3.0 - l2);
        let dp = -fac * fac * fac * l3;
        Ok((p, dp))
    }

    pub fn p(&self, z: Cplx) -> Result<Cplx> {
        Ok(self.eval(z)?.0)
    }

    /// Values at the three half-periods (e1, e2, e3) for the basis
    /// (omega2/2, (omega1+omega2)/2, omega1/2).
    pub fn half_period_values(&self) -> Result<(Cplx, Cplx, Cplx)> {
        let e1 = self.p(self.omega2 / 2.0)?;
        let e2 = self.p((self.omega1 + self.omega2) / 2.0)?;
        let e3 = self.p(self.omega1 / 2.0)?;
        Ok((e1, e2, e3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tanh_sinh;
    use num_complex::ComplexFloat;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn complete_integral_anchors() {
        assert!((ellip_k(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        // quadrature oracle at k = 0.5
        let k = 0.5;
        let oracle = tanh_sinh(
            |t, _, db| 1.0 / (db * (1.0 + t) * (1.0 - k * k * t * t)).sqrt(),
            0.0,
            1.0,
            1e-14,
        )
        .unwrap()
        .value;
        assert!((ellip_k(k).unwrap() - oracle).abs() < 1e-12);
        assert!(ellip_k(1.0).is_err());
        assert!(ellip_k(-0.1).is_err());
    }

    #[test]
    fn incomplete_integral_anchors() {
        assert_eq!(ellip_f(0.0, 0.7).unwrap(), 0.0);
        // k = 0 reduces to arcsin
        for &w in &[0.1, 0.5, 0.9] {
            assert!((ellip_f(w, 0.0).unwrap() - w.asin()).abs() < 1e-14);
        }
        // w = 1 reduces to K
        for &k in &[0.2, 0.6, 0.95] {
            assert!((ellip_f(1.0, k).unwrap() - ellip_k(k).unwrap()).abs() < 1e-13);
        }
        // quadrature oracle at (0.9, 0.9); integrand regular on (0, 0.9)
        let (w, k) = (0.9, 0.9);
        let oracle = tanh_sinh(
            |t, _, _| 1.0 / ((1.0 - t * t) * (1.0 - k * k * t * t)).sqrt(),
            0.0,
            w,
            1e-14,
        )
        .unwrap()
        .value;
        assert!((ellip_f(w, k).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn additivity_against_tail_integral() {
        // F(w, k) = K(k) - int_w^1
        let (w, k) = (0.75, 0.6);
        let tail = tanh_sinh(
            |t, _, db| 1.0 / (db * (1.0 + t) * (1.0 - k * k * t * t)).sqrt(),
            w,
            1.0,
            1e-14,
        )
        .unwrap()
        .value;
        let f = ellip_f(w, k).unwrap();
        assert!((f + tail - ellip_k(k).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn agm_matches_quadrature_across_moduli() {
        for i in 1..10 {
            let k = i as f64 / 10.0;
            let oracle = tanh_sinh(
                |t, _, db| 1.0 / (db * (1.0 + t) * (1.0 - k * k * t * t)).sqrt(),
                0.0,
                1.0,
                1e-14,
            )
            .unwrap()
            .value;
            assert!((ellip_k(k).unwrap() - oracle).abs() < 1e-11, "k = {}", k);
        }
        let k = 0.99;
        let oracle = tanh_sinh(
            |t, _, db| 1.0 / (db * (1.0 + t) * (1.0 - k * k * t * t)).sqrt(),
            0.0,
            1.0,
            1e-14,
        )
        .unwrap()
        .value;
        assert!((ellip_k(k).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn abel_branch_is_continuous_at_switch() {
        // slightly above the switch the AGM route runs; compare with the
        // expansion there
        let delta = 2.0 * tol::ABEL_SWITCH;
        let m1 = delta * (2.0 - delta);
        let agm_route = ellip_k_complement(m1).unwrap();
        let series = abel_k(delta);
        assert!((agm_route - series).abs() < 1e-12 * agm_route.abs());
    }

    fn sample_lattice() -> Weierstrass {
        Weierstrass::new(Cplx::new(0.0, 1.3), Cplx::new(2.1, 0.0)).unwrap()
    }

    #[test]
    fn p_is_even_and_periodic() {
        let w = sample_lattice();
        let z = Cplx::new(0.31, 0.41);
        let (p, dp) = w.eval(z).unwrap();
        let (pm, dpm) = w.eval(-z).unwrap();
        assert!((p - pm).norm() < 1e-12 * p.norm().max(1.0));
        assert!((dp + dpm).norm() < 1e-11 * dp.norm().max(1.0));
        for shift in [w.omega1, w.omega2, w.omega1 + 2.0 * w.omega2] {
            let (ps, _) = w.eval(z + shift).unwrap();
            assert!((p - ps).norm() < 1e-11 * p.norm().max(1.0));
        }
    }

    #[test]
    fn p_differential_equation() {
        // (P1): p'^2 = 4 (p - e1)(p - e2)(p - e3)
        let w = sample_lattice();
        let (e1, e2, e3) = w.half_period_values().unwrap();
        // e-values of a rectangular lattice are real and ordered
        assert!(e1.im.abs() < 1e-10 && e2.im.abs() < 1e-10 && e3.im.abs() < 1e-10);
        assert!(e1.re > e2.re && e2.re > e3.re);
        assert!((e1 + e2 + e3).norm() < 1e-9);
        for i in 0..20 {
            for j in 0..20 {
                let z = Cplx::new(
                    (i as f64 + 0.37) / 20.0 * w.omega2.re,
                    (j as f64 + 0.41) / 20.0 * w.omega1.im,
                );
                let (p, dp) = w.eval(z).unwrap();
                let lhs = dp * dp;
                let rhs = 4.0 * (p - e1) * (p - e2) * (p - e3);
                let scale = lhs.norm().max(rhs.norm()).max(1.0);
                assert!((lhs - rhs).norm() < 1e-9 * scale, "P1 fails at {}", z);
            }
        }
    }

    #[test]
    fn p_addition_theorem() {
        // (P3): p(a+b) = -p(a) - p(b) + ((p'(a)-p'(b))/(4(p(a)-p(b)))^... )
        let w = sample_lattice();
        let mut rng: u64 = 0x9e3779b97f4a7c15;
        let mut unit = || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut checked = 0;
        while checked < 100 {
            let a = Cplx::new(unit() * w.omega2.re, unit() * w.omega1.im);
            let b = Cplx::new(unit() * w.omega2.re, unit() * w.omega1.im);
            let (Ok((pa, dpa)), Ok((pb, dpb)), Ok((pab, _))) =
                (w.eval(a), w.eval(b), w.eval(a + b))
            else {
                continue;
            };
            if (pa - pb).norm() < 1e-3 {
                continue; // near-degenerate pair, the quotient blows up
            }
            let quot = (dpa - dpb) / (pa - pb);
            let rhs = -pa - pb + 0.25 * quot * quot;
            let scale = pab.norm().max(rhs.norm()).max(1.0);
            assert!((pab - rhs).norm() < 1e-8 * scale);
            checked += 1;
        }
    }

    #[test]
    fn p_period_division_identity() {
        // (P2) with p = 2: Weierstrass function of the lattice with the
        // second period halved equals p(z) + p(z + w2/2) - p(w2/2)
        let w = sample_lattice();
        let half = Weierstrass::new(w.omega1, w.omega2 / 2.0).unwrap();
        for n in 0..50 {
            let z = Cplx::new(
                (n as f64 + 0.29) / 50.0 * w.omega2.re,
                ((n * 7 % 50) as f64 + 0.53) / 50.0 * w.omega1.im,
            );
            let lhs = half.p(z).unwrap();
            let rhs =
                w.p(z).unwrap() + w.p(z + w.omega2 / 2.0).unwrap() - w.p(w.omega2 / 2.0).unwrap();
            assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0), "P2 fails at {}", z);
        }
    }

    #[test]
    fn p_matches_lattice_sum_definition() {
        let w = sample_lattice();
        // symmetrized raw lattice sum, tail O(1/R^2)
        let lattice_sum = |z: Cplx, r: i64| -> Cplx {
            let mut acc = 1.0 / (z * z);
            for m in 0..=r {
                for n in -r..=r {
                    if m == 0 && n <= 0 {
                        continue;
                    }
                    let l = w.omega2 * m as f64 + w.omega1 * n as f64;
                    acc += 1.0 / ((z - l) * (z - l)) + 1.0 / ((z + l) * (z + l))
                        - 2.0 / (l * l);
                }
            }
            acc
        };
        for z in [Cplx::new(0.7, 0.33), Cplx::new(1.1, 0.9)] {
            let p = w.p(z).unwrap();
            let s = lattice_sum(z, 120);
            assert!((p - s).norm() < 1e-4 * (1.0 + p.norm()), "definition check at {}", z);
        }
    }

    #[test]
    fn lattice_pole_detected() {
        let w = sample_lattice();
        assert!(matches!(w.eval(Cplx::new(0.0, 0.0)), Err(Error::LatticePole)));
        assert!(matches!(
            w.eval(w.omega1 + 3.0 * w.omega2),
            Err(Error::LatticePole)
        ));
    }

    #[test]
    fn elongated_lattice_uses_swapped_basis() {
        // aspect ratio far from 1 in both directions still evaluates
        for (o1, o2) in [
            (Cplx::new(0.0, 8.0), Cplx::new(1.0, 0.0)),
            (Cplx::new(0.0, 0.125), Cplx::new(1.0, 0.0)),
        ] {
            let w = Weierstrass::new(o1, o2).unwrap();
            let z = Cplx::new(0.4 * o2.re, 0.3 * o1.im);
            let (p, dp) = w.eval(z).unwrap();
            let (p2, dp2) = w.eval(z + o1).unwrap();
            assert!((p - p2).norm() < 1e-10 * p.norm().max(1.0));
            assert!((dp - dp2).norm() < 1e-9 * dp.norm().max(1.0));
        }
    }
}

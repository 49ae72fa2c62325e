//! The covering map ω ↦ (x(ω), y(ω)) of the kernel curve.
//!
//! x is the Weierstrass function of the period lattice pushed through a
//! Moebius (or affine, when the fourth branch point is infinite) change of
//! variable built from the discriminant derivatives at x4; y is the same
//! construction shifted by half the third period and built from the
//! y-discriminant at y4. The lifted Galois involutions act as explicit
//! affine maps of ω.

use crate::elliptic::Weierstrass;
use crate::error::{Error, Result};
use crate::kernel::{BranchPoints, KernelData};
use crate::periods::Periods;
use crate::sphere::SpherePoint;
use crate::{tol, Cplx};

/// One-dimensional coordinate map g with its inverse.
#[derive(Debug, Clone, Copy)]
enum GMap {
    /// g(t) = c + slope / (t - pole), pole at the finite fourth branch point
    Moebius { pole: f64, c: f64, slope: f64 },
    /// g(t) = c + slope * t, for an infinite fourth branch point
    Affine { c: f64, slope: f64 },
}

impl GMap {
    fn from_disc(disc: &crate::poly::Poly<f64>, fourth: SpherePoint, axis: &str) -> Result<GMap> {
        match fourth {
            SpherePoint::Finite(v) => {
                let t = v.re;
                let d1 = disc.derivative();
                let d2 = d1.derivative();
                let slope = d1.eval(t);
                if slope.abs() < 1e-14 {
                    return Err(Error::DegenerateMap(format!(
                        "d'({}) vanishes on the {} axis",
                        t, axis
                    )));
                }
                Ok(GMap::Moebius {
                    pole: t,
                    c: d2.eval(t) / 6.0,
                    slope,
                })
            }
            SpherePoint::Infinity => {
                // d''(0)/6 = d_2/3, d'''(0)/6 = d_3
                let c = disc.coeff(2) / 3.0;
                let slope = disc.coeff(3);
                if slope.abs() < 1e-300 {
                    return Err(Error::DegenerateMap(format!(
                        "cubic coefficient vanishes on the {} axis",
                        axis
                    )));
                }
                Ok(GMap::Affine { c, slope })
            }
        }
    }

    /// g^{-1}(p); p = infinity means a pole of the Weierstrass function.
    fn inverse(&self, p: SpherePoint) -> SpherePoint {
        match (*self, p) {
            (GMap::Moebius { pole, .. }, SpherePoint::Infinity) => SpherePoint::finite(pole, 0.0),
            (GMap::Moebius { pole, c, slope }, SpherePoint::Finite(v)) => {
                let den = v - c;
                if den.norm() < tol::MOEBIUS_POLE * (1.0 + slope.abs()) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::classify(pole + slope / den)
                }
            }
            (GMap::Affine { .. }, SpherePoint::Infinity) => SpherePoint::Infinity,
            (GMap::Affine { c, slope }, SpherePoint::Finite(v)) => {
                SpherePoint::classify((v - c) / slope)
            }
        }
    }

    /// derivative of g^{-1}(p(omega)) given (p, p').
    fn inverse_derivative(&self, p: Cplx, dp: Cplx) -> Cplx {
        match *self {
            GMap::Moebius { c, slope, .. } => {
                let den = p - Cplx::new(c, 0.0);
                -slope * dp / (den * den)
            }
            GMap::Affine { slope, .. } => dp / slope,
        }
    }
}

/// The uniformizing covering of one kernel curve.
#[derive(Debug, Clone)]
pub struct Uniformizer {
    pub kd: KernelData,
    pub bp: BranchPoints,
    pub periods: Periods,
    pub wp: Weierstrass,
    gx: GMap,
    gy: GMap,
}

pub fn build_uniformizer(kd: &KernelData, b: &BranchPoints, p: &Periods) -> Result<Uniformizer> {
    let gx = GMap::from_disc(&kd.disc_x, b.x[3], "x")?;
    let gy = GMap::from_disc(&kd.disc_y, b.y[3], "y")?;
    let wp = Weierstrass::new(p.omega1, Cplx::new(p.omega2, 0.0))?;
    Ok(Uniformizer {
        kd: kd.clone(),
        bp: *b,
        periods: *p,
        wp,
        gx,
        gy,
    })
}

impl Uniformizer {
    pub fn omega1(&self) -> Cplx {
        self.periods.omega1
    }
    pub fn omega2(&self) -> f64 {
        self.periods.omega2
    }
    pub fn omega3(&self) -> f64 {
        self.periods.omega3
    }

    /// anchor points omega_{x_l} for l = 1..4
    pub fn x_anchors(&self) -> [Cplx; 4] {
        let w1 = self.periods.omega1;
        let w2 = Cplx::new(self.periods.omega2, 0.0);
        [w2 / 2.0, (w1 + w2) / 2.0, w1 / 2.0, Cplx::new(0.0, 0.0)]
    }

    /// anchor points omega_{y_l} = omega_{x_l} + omega3/2
    pub fn y_anchors(&self) -> [Cplx; 4] {
        let s = Cplx::new(self.periods.omega3 / 2.0, 0.0);
        let xa = self.x_anchors();
        [xa[0] + s, xa[1] + s, xa[2] + s, xa[3] + s]
    }

    fn p_at(&self, omega: Cplx) -> SpherePoint {
        match self.wp.eval(omega) {
            Ok((p, _)) => SpherePoint::classify(p),
            Err(_) => SpherePoint::Infinity,
        }
    }

    pub fn x_of(&self, omega: Cplx) -> SpherePoint {
        self.gx.inverse(self.p_at(omega))
    }

    pub fn y_of(&self, omega: Cplx) -> SpherePoint {
        let shifted = omega - Cplx::new(self.periods.omega3 / 2.0, 0.0);
        self.gy.inverse(self.p_at(shifted))
    }

    pub fn point(&self, omega: Cplx) -> (SpherePoint, SpherePoint) {
        (self.x_of(omega), self.y_of(omega))
    }

    /// dx/domega, None at poles of x.
    pub fn x_derivative(&self, omega: Cplx) -> Option<Cplx> {
        let (p, dp) = self.wp.eval(omega).ok()?;
        Some(self.gx.inverse_derivative(p, dp))
    }

    /// dy/domega, None at poles of y.
    pub fn y_derivative(&self, omega: Cplx) -> Option<Cplx> {
        let shifted = omega - Cplx::new(self.periods.omega3 / 2.0, 0.0);
        let (p, dp) = self.wp.eval(shifted).ok()?;
        Some(self.gy.inverse_derivative(p, dp))
    }

    /// lifted Galois involution fixing x: omega -> -omega + 2 omega_{x2}
    pub fn hat_xi(&self, omega: Cplx) -> Cplx {
        self.periods.omega1 + Cplx::new(self.periods.omega2, 0.0) - omega
    }

    /// lifted Galois involution fixing y: omega -> -omega + 2 omega_{y2}
    pub fn hat_eta(&self, omega: Cplx) -> Cplx {
        self.periods.omega1 + Cplx::new(self.periods.omega2 + self.periods.omega3, 0.0) - omega
    }

    /// the composition eta-hat xi-hat, a shift by the third period
    pub fn shift_eta_xi(&self, omega: Cplx) -> Cplx {
        omega + Cplx::new(self.periods.omega3, 0.0)
    }

    /// Verify the eight distinguished-point identities; returns the
    /// largest chordal deviation.
    pub fn verify_anchors(&self) -> f64 {
        let mut worst = 0.0f64;
        for (l, &w) in self.x_anchors().iter().enumerate() {
            let got = self.x_of(w);
            worst = worst.max(got.chordal(&self.bp.x[l]));
        }
        for (l, &w) in self.y_anchors().iter().enumerate() {
            let got = self.y_of(w);
            worst = worst.max(got.chordal(&self.bp.y[l]));
        }
        worst
    }

    /// Reduce omega into the fundamental cell omega1 [0,1) + omega2 [0,1).
    pub fn reduce_to_cell(&self, omega: Cplx) -> Cplx {
        let a = omega.re / self.periods.omega2;
        let b = omega.im / self.periods.omega1.im;
        let fa = a - a.floor();
        let fb = b - b.floor();
        Cplx::new(fa * self.periods.omega2, fb * self.periods.omega1.im)
    }

    /// Reduce only the omega1 coordinate (legal for the lifted sections,
    /// which are omega1-periodic but not omega2-periodic).
    pub fn reduce_mod_omega1(&self, omega: Cplx) -> Cplx {
        let b = omega.im / self.periods.omega1.im;
        let fb = b - b.floor();
        Cplx::new(omega.re, fb * self.periods.omega1.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kernel_data;
    use crate::periods::periods_closed_form;
    use crate::stepset::StepSet;

    fn build(text: &str, z: f64) -> Uniformizer {
        let s = StepSet::parse(text).unwrap();
        let kd = kernel_data(s, z).unwrap();
        let b = kd.branch_points().unwrap();
        let p = periods_closed_form(&kd, &b).unwrap();
        build_uniformizer(&kd, &b, &p).unwrap()
    }

    const MODELS: [(&str, f64); 5] = [
        ("1,0;-1,0;0,1;0,-1", 0.15),
        ("1,1;-1,0;0,-1", 0.2),
        ("1,0;-1,0;1,1;-1,-1", 0.12),
        ("-1,0;-1,1;0,1;1,-1", 0.1),
        ("1,1;1,-1;-1,1;-1,-1", 0.13),
    ];

    #[test]
    fn anchors_hold_for_all_sample_models() {
        for (s, z) in MODELS {
            let u = build(s, z);
            let worst = u.verify_anchors();
            assert!(worst < 1e-8, "anchor deviation {:.3e} for {}", worst, s);
        }
    }

    #[test]
    fn covering_lands_on_kernel_curve() {
        for (s, z) in MODELS {
            let u = build(s, z);
            for i in 0..20 {
                for j in 0..20 {
                    let w = Cplx::new(
                        (i as f64 + 0.41) / 20.0 * u.omega2(),
                        (j as f64 + 0.37) / 20.0 * u.omega1().im,
                    );
                    let (x, y) = u.point(w);
                    let res = u.kd.residual(x, y);
                    assert!(res < 1e-8, "residual {:.3e} at {} for {}", res, w, s);
                }
            }
        }
    }

    #[test]
    fn coordinates_are_doubly_periodic() {
        let u = build("-1,0;-1,1;0,1;1,-1", 0.1);
        let w = Cplx::new(0.3 * u.omega2(), 0.6 * u.omega1().im);
        let (x0, y0) = u.point(w);
        for shift in [
            u.omega1(),
            Cplx::new(u.omega2(), 0.0),
            u.omega1() + Cplx::new(2.0 * u.omega2(), 0.0),
        ] {
            let (x, y) = u.point(w + shift);
            assert!(x.chordal(&x0) < 1e-9);
            assert!(y.chordal(&y0) < 1e-9);
        }
    }

    #[test]
    fn omega_zero_maps_to_fourth_branch_point() {
        let u = build("1,1;-1,0;0,-1", 0.2);
        let x = u.x_of(Cplx::new(0.0, 0.0));
        assert!(x.chordal(&u.bp.x[3]) < 1e-8);
        // worked model has x4 = infinity
        let u = build("-1,0;-1,1;0,1;1,-1", 0.1);
        assert!(u.x_of(Cplx::new(0.0, 0.0)).is_infinite());
    }

    #[test]
    fn lifted_involutions_fix_coordinates() {
        let u = build("1,0;-1,0;1,1;-1,-1", 0.12);
        for n in 0..100 {
            let w = Cplx::new(
                ((n * 13 % 100) as f64 + 0.23) / 100.0 * u.omega2(),
                ((n * 29 % 100) as f64 + 0.57) / 100.0 * u.omega1().im,
            );
            // xi-hat fixes x
            let (x, y) = u.point(w);
            let (xx, yx) = u.point(u.hat_xi(w));
            assert!(xx.chordal(&x) < 1e-9, "x(xi w) != x(w) at {}", w);
            // y(xi w) * y(w) = c(x)/a(x)
            if let (Some(x), Some(y), Some(yx)) = (x.as_finite(), y.as_finite(), yx.as_finite()) {
                let c = u.kd.c.eval_complex(x);
                let a = u.kd.a.eval_complex(x);
                let prod = y * yx;
                assert!(
                    (prod - c / a).norm() < 1e-8 * (1.0 + (c / a).norm()),
                    "product identity fails at {}",
                    w
                );
            }
            // eta-hat fixes y
            let (_, yy) = u.point(u.hat_eta(w));
            assert!(yy.chordal(&y) < 1e-9, "y(eta w) != y(w) at {}", w);
        }
    }

    #[test]
    fn involution_algebra_is_exact() {
        let u = build("1,1;-1,0;0,-1", 0.15);
        let w = Cplx::new(0.234, 0.456);
        assert!((u.hat_xi(u.hat_xi(w)) - w).norm() < 1e-15);
        assert!((u.hat_eta(u.hat_eta(w)) - w).norm() < 1e-15);
        let composed = u.hat_eta(u.hat_xi(w));
        assert!((composed - u.shift_eta_xi(w)).norm() < 1e-14);
        let other = u.hat_xi(u.hat_eta(w));
        assert!((other - (w - Cplx::new(u.omega3(), 0.0))).norm() < 1e-14);
    }

    #[test]
    fn imaginary_axis_maps_to_outer_cut() {
        // the line through omega_{x4} parallel to omega1 is the cut
        // [x3, x4]: x-values there are real (or infinite)
        let u = build("1,0;-1,0;0,1;0,-1", 0.2);
        let x3 = u.bp.x_real(2);
        let x4 = u.bp.x_real(3);
        for n in 1..10 {
            let w = Cplx::new(0.0, n as f64 / 10.0 * u.omega1().im);
            if let SpherePoint::Finite(v) = u.x_of(w) {
                assert!(v.im.abs() < 1e-8 * (1.0 + v.re.abs()), "Im x = {:.3e}", v.im);
                assert!(v.re >= x3 - 1e-9 && v.re <= x4 + 1e-9);
            }
        }
    }
}

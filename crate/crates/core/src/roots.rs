//! Roots of real polynomials of degree <= 4.
//!
//! Closed-form solves (quadratic / Cardano / Ferrari) are used only to seed
//! a complex Newton polish run on the original coefficients. Seeds are
//! gathered in two frames, the polynomial itself and its reversal (whose
//! roots are the reciprocals), because at small kernel weights the branch
//! points spread over many orders of magnitude and each frame resolves one
//! end of the spectrum. Exact zero roots are stripped structurally before
//! any floating-point work.

use crate::Cplx;

const ZERO_STRIP: f64 = 0.0; // roots at 0 are structural, stripped exactly

/// All complex roots of the polynomial with the given coefficients
/// (lowest degree first, true degree = len - 1, leading coefficient
/// non-zero). Multiple roots appear with multiplicity.
pub fn roots(coeffs: &[f64]) -> Vec<Cplx> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let mut out = Vec::new();
    // strip exact roots at the origin
    while c.len() > 1 && c[0] == ZERO_STRIP {
        out.push(Cplx::new(0.0, 0.0));
        c.remove(0);
    }
    let n = c.len() - 1;
    if n == 0 {
        return out;
    }
    if n > 4 {
        panic!("root solver limited to degree 4, got {}", n);
    }

    let mut candidates = closed_form(&c);
    let mut rev: Vec<f64> = c.clone();
    rev.reverse();
    if rev.last().copied().unwrap_or(0.0) != 0.0 {
        for u in closed_form(&rev) {
            if u.norm() > 1e-300 {
                candidates.push(u.inv());
            }
        }
    }
    for cand in candidates.iter_mut() {
        *cand = polish(&c, &rev, *cand);
    }

    // pick the n most credible, pairwise-distinct candidates
    let mut scored: Vec<(f64, Cplx)> = candidates
        .into_iter()
        .map(|r| (backward_error(&c, r), r))
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut picked: Vec<Cplx> = Vec::with_capacity(n);
    for &(_, r) in &scored {
        if picked.len() == n {
            break;
        }
        let distinct = picked
            .iter()
            .all(|p| (p - r).norm() > 1e-8 * (p.norm() + r.norm() + 1e-300));
        if distinct {
            picked.push(r);
        }
    }
    // coincident candidates left over indicate genuine multiplicity
    for &(_, r) in &scored {
        if picked.len() == n {
            break;
        }
        picked.push(r);
    }
    out.extend(picked);
    out
}

/// Relative backward error |p(x)| / sum |c_k x^k|, evaluated in the frame
/// better conditioned for the magnitude of x.
fn backward_error(c: &[f64], x: Cplx) -> f64 {
    let (val, scale) = if x.norm() > 1.0 {
        let mut rev = c.to_vec();
        rev.reverse();
        horner_scaled(&rev, x.inv())
    } else {
        horner_scaled(c, x)
    };
    val.norm() / (scale + 1e-300)
}

/// Horner evaluation returning (p(x), sum |c_k x^k|).
fn horner_scaled(c: &[f64], x: Cplx) -> (Cplx, f64) {
    let mut acc = Cplx::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let xn = x.norm();
    for &ck in c.iter().rev() {
        acc = acc * x + ck;
        scale = scale * xn + ck.abs();
    }
    (acc, scale)
}

/// Newton polish in the frame matching the candidate's magnitude.
fn polish(c: &[f64], rev: &[f64], mut x: Cplx) -> Cplx {
    if x.norm() > 1.0 && rev.last().copied().unwrap_or(0.0) != 0.0 {
        let mut u = x.inv();
        u = newton(rev, u);
        if u.norm() > 1e-300 {
            x = u.inv();
        }
        x
    } else {
        newton(c, x)
    }
}

fn newton(c: &[f64], mut x: Cplx) -> Cplx {
    for _ in 0..60 {
        let mut p = Cplx::new(0.0, 0.0);
        let mut dp = Cplx::new(0.0, 0.0);
        for &ck in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + ck;
        }
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.norm() <= 1e-16 * (x.norm() + 1e-300) {
            break;
        }
    }
    x
}

/// Closed-form roots of a degree <= 4 polynomial with non-zero leading
/// coefficient. Seeds only; accuracy comes from the polish.
fn closed_form(c: &[f64]) -> Vec<Cplx> {
    let n = c.len() - 1;
    let lead = c[n];
    let m: Vec<f64> = c.iter().map(|&x| x / lead).collect();
    match n {
        1 => vec![Cplx::new(-m[0], 0.0)],
        2 => quadratic(m[0], m[1]),
        3 => cubic(m[0], m[1], m[2]),
        4 => quartic(m[0], m[1], m[2], m[3]),
        _ => vec![],
    }
}

/// Roots of x^2 + bx + c.
fn quadratic(c0: f64, b: f64) -> Vec<Cplx> {
    let disc = Cplx::new(b * b - 4.0 * c0, 0.0);
    let sq = disc.sqrt();
    // avoid cancellation: pick the sign enlarging |b + s*sq|
    let bb = Cplx::new(b, 0.0);
    let q = if (bb + sq).norm() >= (bb - sq).norm() {
        -(bb + sq) / 2.0
    } else {
        -(bb - sq) / 2.0
    };
    if q.norm() > 0.0 {
        vec![q, Cplx::new(c0, 0.0) / q]
    } else {
        vec![Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0)]
    }
}

/// Roots of x^3 + a2 x^2 + a1 x + a0.
fn cubic(a0: f64, a1: f64, a2: f64) -> Vec<Cplx> {
    // depress: x = t - a2/3, t^3 + p t + q
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = a0 - a1 * a2 / 3.0 + 2.0 * a2 * a2 * a2 / 27.0;
    let half_q = Cplx::new(q / 2.0, 0.0);
    let disc = half_q * half_q + Cplx::new(p * p * p / 27.0, 0.0);
    let sq = disc.sqrt();
    let u3a = -half_q + sq;
    let u3b = -half_q - sq;
    let u3 = if u3a.norm() >= u3b.norm() { u3a } else { u3b };
    let u = u3.powf(1.0 / 3.0);
    let rot = Cplx::new(-0.5, 0.75f64.sqrt());
    let mut out = Vec::with_capacity(3);
    let mut uk = u;
    for _ in 0..3 {
        let t = if uk.norm() > 1e-300 {
            uk - Cplx::new(p / 3.0, 0.0) / uk
        } else {
            Cplx::new(0.0, 0.0)
        };
        out.push(t - shift);
        uk *= rot;
    }
    out
}

/// Roots of x^4 + a3 x^3 + a2 x^2 + a1 x + a0 via Ferrari's resolvent.
fn quartic(a0: f64, a1: f64, a2: f64, a3: f64) -> Vec<Cplx> {
    // depress: x = y - a3/4, y^4 + p y^2 + q y + r
    let shift = a3 / 4.0;
    let p = a2 - 3.0 * a3 * a3 / 8.0;
    let q = a1 - a3 * a2 / 2.0 + a3 * a3 * a3 / 8.0;
    let r = a0 - a3 * a1 / 4.0 + a3 * a3 * a2 / 16.0 - 3.0 * a3 * a3 * a3 * a3 / 256.0;
    // (y^2 + m)^2 = (2m - p) y^2 - q y + (m^2 - r) must be a square:
    // resolvent 2m^3 - p m^2 - 2 r m + (p r - q^2/4) = 0
    let res = cubic(
        (p * r - q * q / 4.0) / 2.0,
        -r,
        -p / 2.0,
    );
    // pick the resolvent root with largest |2m - p|
    let m = res
        .iter()
        .copied()
        .max_by(|a, b| {
            let fa = (2.0 * a - p).norm();
            let fb = (2.0 * b - p).norm();
            fa.partial_cmp(&fb).unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    let two_m_p = 2.0 * m - p;
    let mut out = Vec::with_capacity(4);
    if two_m_p.norm() < 1e-280 {
        // biquadratic fallback: y^4 + p y^2 + r = 0 (q ~ 0)
        let w = quadratic(r, p);
        for y2 in w {
            let y = y2.sqrt();
            out.push(y - shift);
            out.push(-y - shift);
        }
        return out;
    }
    let s = two_m_p.sqrt();
    let t = -q / (2.0 * s);
    // y^2 + m = +- (s y + t)
    for &(sg_s, sg_t) in &[(1.0, 1.0), (-1.0, -1.0)] {
        // y^2 - sg*s y + (m - sg*t) = 0
        let b = -s * sg_s;
        let cc = m - t * sg_t;
        let disc = (b * b - 4.0 * cc).sqrt();
        let bpos = if (b + disc).norm() >= (b - disc).norm() {
            -(b + disc) / 2.0
        } else {
            -(b - disc) / 2.0
        };
        let other = if bpos.norm() > 1e-300 {
            cc / bpos
        } else {
            Cplx::new(0.0, 0.0)
        };
        out.push(bpos - shift);
        out.push(other - shift);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_from_roots(rs: &[Cplx]) -> Vec<f64> {
        let mut c = vec![Cplx::new(1.0, 0.0)];
        for &r in rs {
            let mut next = vec![Cplx::new(0.0, 0.0); c.len() + 1];
            for (k, &ck) in c.iter().enumerate() {
                next[k + 1] += ck;
                next[k] -= ck * r;
            }
            c = next;
        }
        c.iter().map(|v| v.re).collect()
    }

    fn assert_roots_match(found: &[Cplx], expected: &[Cplx], rel: f64) {
        assert_eq!(found.len(), expected.len());
        let mut used = vec![false; expected.len()];
        for f in found {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for (k, e) in expected.iter().enumerate() {
                if used[k] {
                    continue;
                }
                let d = (f - e).norm();
                if d < best_d {
                    best_d = d;
                    best = k;
                }
            }
            assert!(
                best_d <= rel * (expected[best].norm() + 1.0),
                "root {} missed {} by {:.3e}",
                f,
                expected[best],
                best_d
            );
            used[best] = true;
        }
    }

    #[test]
    fn quartic_known_real_roots() {
        let expected = [
            Cplx::new(-3.0, 0.0),
            Cplx::new(0.5, 0.0),
            Cplx::new(2.0, 0.0),
            Cplx::new(7.0, 0.0),
        ];
        let c = poly_from_roots(&expected);
        assert_roots_match(&roots(&c), &expected, 1e-12);
    }

    #[test]
    fn quartic_conjugate_pairs() {
        let expected = [
            Cplx::new(1.0, 2.0),
            Cplx::new(1.0, -2.0),
            Cplx::new(-0.25, 0.5),
            Cplx::new(-0.25, -0.5),
        ];
        let c = poly_from_roots(&expected);
        assert_roots_match(&roots(&c), &expected, 1e-12);
    }

    #[test]
    fn wide_magnitude_spread() {
        // close pair near 1e-6 plus a root near 2.5e11, the shape the
        // kernel discriminants take as z -> 0
        let z = 1e-6f64;
        let expected = [
            Cplx::new(z - 2.0 * z * z, 0.0),
            Cplx::new(z + 2.0 * z * z, 0.0),
            Cplx::new(0.25 / (z * z), 0.0),
        ];
        let c = poly_from_roots(&expected);
        let got = roots(&c);
        let mut small: Vec<f64> = got
            .iter()
            .filter(|r| r.norm() < 1.0)
            .map(|r| r.re)
            .collect();
        small.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(small.len(), 2);
        assert!((small[0] - (z - 2.0 * z * z)).abs() < 1e-15);
        assert!((small[1] - (z + 2.0 * z * z)).abs() < 1e-15);
        // the pair separation itself must be accurate
        assert!(((small[1] - small[0]) - 4.0 * z * z).abs() < 1e-16);
    }

    #[test]
    fn exact_zero_roots_are_stripped() {
        // x^2 (x^2 - 1)
        let c = vec![0.0, 0.0, -1.0, 0.0, 1.0];
        let got = roots(&c);
        let zeros = got.iter().filter(|r| r.norm() == 0.0).count();
        assert_eq!(zeros, 2);
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn cubic_and_quadratic_and_linear() {
        let expected = [Cplx::new(-1.5, 0.0), Cplx::new(0.25, 0.0), Cplx::new(4.0, 0.0)];
        let c = poly_from_roots(&expected);
        assert_roots_match(&roots(&c), &expected, 1e-12);
        assert_roots_match(
            &roots(&[2.0, -3.0, 1.0]),
            &[Cplx::new(1.0, 0.0), Cplx::new(2.0, 0.0)],
            1e-12,
        );
        assert_roots_match(&roots(&[-7.0, 2.0]), &[Cplx::new(3.5, 0.0)], 1e-14);
    }
}

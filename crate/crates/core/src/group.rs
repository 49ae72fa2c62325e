//! Group-of-the-walk detection and holonomy classification.
//!
//! The group order is probed by iterating the composed Galois maps on the
//! kernel curve in the chordal metric, the period-ratio rationality by
//! continued-fraction convergents under an explicit denominator cap and
//! tolerance (numerics can never certify irrationality, only report it at
//! a tolerance), and the z -> 0 behaviour of the ratio by a least-squares
//! fit against 1/ln z with a curvature nuisance term.

use crate::error::{Error, Result};
use crate::kernel::{kernel_data, KernelData};
use crate::periods::periods_closed_form;
use crate::sphere::SpherePoint;
use crate::stepset::StepSet;
use crate::uniformization::Uniformizer;
use crate::{tol, Cplx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum GroupOrder {
    Finite(usize),
    Infinite,
}

impl GroupOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, GroupOrder::Finite(_))
    }
}

/// Smallest k <= max_order with (eta xi)^k returning the seed, order = 2k.
/// Three seeds are iterated and must agree.
pub fn group_order_on_curve(
    kd: &KernelData,
    return_tol: f64,
    max_order: usize,
) -> Result<GroupOrder> {
    let mut found: Vec<Option<usize>> = Vec::new();
    for &theta in &[0.83f64, 1.91, 2.77] {
        let x0 = Cplx::new(0.77 * theta.cos(), 0.77 * theta.sin());
        let Ok(y0) = kd.branch_y(x0, 0) else {
            continue;
        };
        let seed = (SpherePoint::Finite(x0), y0);
        let mut p = seed;
        let mut hit = None;
        for k in 1..=max_order {
            let Ok(q) = kd.galois_xi(p) else {
                hit = None;
                break;
            };
            let Ok(q) = kd.galois_eta(q) else {
                hit = None;
                break;
            };
            p = q;
            let dist = seed.0.chordal(&p.0).max(seed.1.chordal(&p.1));
            if dist < return_tol {
                hit = Some(k);
                break;
            }
        }
        found.push(hit);
    }
    if found.is_empty() {
        return Err(Error::SeedDegenerate);
    }
    let first = found[0];
    if found.iter().any(|f| *f != first) {
        return Err(Error::SeedDegenerate);
    }
    Ok(match first {
        Some(k) => GroupOrder::Finite(2 * k),
        None => GroupOrder::Infinite,
    })
}

/// Model-level group order: the curve-restricted order must agree at two
/// generic weights for the group of the model itself to be finite.
pub fn model_group_order(s: StepSet, max_order: usize) -> Result<GroupOrder> {
    let mut orders = Vec::new();
    for f in [0.31, 0.67] {
        let kd = kernel_data(s, f / s.len() as f64)?;
        orders.push(group_order_on_curve(&kd, tol::GROUP_RETURN_TOL, max_order)?);
    }
    if orders[0] == orders[1] {
        Ok(orders[0])
    } else {
        Ok(GroupOrder::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum Rationality {
    Rational { p: i64, q: i64, residual: f64 },
    IrrationalAtTolerance { dmax: u64, tol: f64 },
}

/// Best rational approximation with denominator <= dmax via continued
/// fractions; rational verdicts are tolerance-conditional by construction.
pub fn ratio_rationality(ratio: f64, dmax: u64, tol: f64) -> Rationality {
    let mut best: Option<(i64, i64, f64)> = None;
    let (mut h0, mut k0, mut h1, mut k1) = (1i64, 0i64, ratio.floor() as i64, 1i64);
    let mut frac = ratio - ratio.floor();
    let mut consider = |h: i64, k: i64| {
        if k > 0 && (k as u64) <= dmax {
            let r = (ratio - h as f64 / k as f64).abs();
            if best.map_or(true, |(_, _, b)| r < b) {
                best = Some((h, k, r));
            }
        }
    };
    consider(h1, k1);
    for _ in 0..40 {
        if frac.abs() < 1e-15 {
            break;
        }
        let x = 1.0 / frac;
        let a = x.floor();
        frac = x - a;
        let a = a as i64;
        let h2 = a.checked_mul(h1).and_then(|v| v.checked_add(h0));
        let k2 = a.checked_mul(k1).and_then(|v| v.checked_add(k0));
        let (Some(h2), Some(k2)) = (h2, k2) else {
            break;
        };
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
        consider(h1, k1);
        if k1 as u64 > dmax {
            break;
        }
    }
    match best {
        Some((p, q, residual)) if residual < tol => Rationality::Rational { p, q, residual },
        _ => Rationality::IrrationalAtTolerance { dmax, tol },
    }
}

/// Lemma-8 table value selected by the detected order and covariance sign.
pub fn finite_group_table_ratio(order: usize, covariance: i64) -> Option<(i64, i64)> {
    match order {
        4 => Some((2, 1)),
        6 => Some(if covariance > 0 { (3, 2) } else { (3, 1) }),
        8 => Some(if covariance > 0 { (4, 3) } else { (4, 1) }),
        _ => None,
    }
}

/// Alternating orbit sum of xy over the dihedral group of order 2k.
pub fn orbit_sum(u: &Uniformizer, order: &GroupOrder, omega: Cplx) -> Result<Cplx> {
    let GroupOrder::Finite(n) = order else {
        return Err(Error::InfiniteGroup);
    };
    let k = n / 2;
    let mut acc = Cplx::new(0.0, 0.0);
    for m in 0..k {
        let w = omega + Cplx::new(m as f64 * u.omega3(), 0.0);
        for (sign, ww) in [(1.0, w), (-1.0, u.hat_xi(w))] {
            let (x, y) = u.point(ww);
            match (x.as_finite(), y.as_finite()) {
                (Some(x), Some(y)) => acc += sign * x * y,
                _ => return Err(Error::LatticePole),
            }
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Algebraic,
    HolonomicNonAlgebraic,
    HolonomicAtThisZ,
    NonHolonomicAtThisZ,
}

pub fn holonomy_verdict(order: &GroupOrder, covariance: i64, rationality: &Rationality) -> Verdict {
    match order {
        GroupOrder::Finite(_) => {
            if covariance > 0 {
                Verdict::Algebraic
            } else {
                Verdict::HolonomicNonAlgebraic
            }
        }
        GroupOrder::Infinite => match rationality {
            Rationality::Rational { .. } => Verdict::HolonomicAtThisZ,
            Rationality::IrrationalAtTolerance { .. } => Verdict::NonHolonomicAtThisZ,
        },
    }
}

#[derive(Debug, Clone)]
pub struct GroupReport {
    pub step_set: StepSet,
    pub z: f64,
    pub order: GroupOrder,
    pub covariance: i64,
    pub covariance_reduced: i64,
    pub ratio: f64,
    pub rationality: Rationality,
    pub orbit_sum_zero: Option<bool>,
    pub verdict: Verdict,
}

/// Full group classification of one model at one weight.
pub fn group_report(s: StepSet, z: f64, max_order: usize) -> Result<GroupReport> {
    let kd = kernel_data(s, z)?;
    let b = kd.branch_points()?;
    let p = periods_closed_form(&kd, &b)?;
    let order = model_group_order(s, max_order)?;
    let (covariance, covariance_reduced) = s.covariance_full();
    let ratio = p.ratio();
    let rationality = ratio_rationality(ratio, tol::RATIONALITY_DMAX, tol::RATIONALITY_TOL);
    let orbit_sum_zero = match order {
        GroupOrder::Finite(_) => {
            let u = crate::uniformization::build_uniformizer(&kd, &b, &p)?;
            let mut max_abs = 0.0f64;
            let mut samples = 0;
            let mut n = 0u64;
            while samples < 20 && n < 200 {
                n += 1;
                let w = Cplx::new(
                    ((n * 37 % 97) as f64 / 97.0) * u.omega2(),
                    (0.07 + (n * 53 % 89) as f64 / 89.0 * 0.86) * u.omega1().im,
                );
                match orbit_sum(&u, &order, w) {
                    Ok(v) => {
                        max_abs = max_abs.max(v.norm());
                        samples += 1;
                    }
                    Err(_) => continue,
                }
            }
            Some(max_abs < 1e-8)
        }
        GroupOrder::Infinite => None,
    };
    let verdict = holonomy_verdict(&order, covariance, &rationality);
    Ok(GroupReport {
        step_set: s,
        z,
        order,
        covariance,
        covariance_reduced,
        ratio,
        rationality,
        orbit_sum_zero,
        verdict,
    })
}

#[derive(Debug, Clone)]
pub struct AsymptoticFit {
    pub l: f64,
    pub l_tilde: f64,
    pub curvature: f64,
    pub l_snapped: (i64, i64),
    pub snap_residual: f64,
    /// max deviation from the two-term model l + l_tilde / ln z
    pub residual: f64,
    pub z_grid: Vec<f64>,
}

/// Geometric grid of n points spanning [z_min, z_max].
pub fn geometric_grid(z_min: f64, z_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            z_min * (z_max / z_min).powf(t)
        })
        .collect()
}

/// Least-squares fit of the period ratio against 1/ln z, with a quadratic
/// nuisance term absorbing the O((1/ln z)^2) remainder so the reported
/// slope is unbiased.
pub fn asymptotic_scan(s: StepSet, z_grid: &[f64]) -> Result<AsymptoticFit> {
    if z_grid.len() < 6 {
        return Err(Error::InvalidInput(
            "asymptotic scan needs at least 6 grid points".into(),
        ));
    }
    if z_grid.iter().any(|&z| !(z > 0.0 && z <= 1e-2)) {
        return Err(Error::InvalidInput(
            "asymptotic grid must lie in (0, 1e-2]".into(),
        ));
    }
    let span = z_grid.iter().cloned().fold(f64::INFINITY, f64::min)
        / z_grid.iter().cloned().fold(0.0f64, f64::max);
    if span > 1e-3 {
        return Err(Error::InvalidInput(
            "asymptotic grid must span at least 3 decades".into(),
        ));
    }
    let mut us = Vec::with_capacity(z_grid.len());
    let mut rs = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let kd = kernel_data(s, z)?;
        let b = kd.branch_points()?;
        let p = periods_closed_form(&kd, &b)?;
        us.push(1.0 / z.ln());
        rs.push(p.ratio());
    }
    // normal equations for r = b0 + b1 u + b2 u^2
    let n = us.len() as f64;
    let (mut s1, mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0, 0.0);
    let (mut t0, mut t1, mut t2) = (0.0, 0.0, 0.0);
    for (&u, &r) in us.iter().zip(&rs) {
        s1 += u;
        s2 += u * u;
        s3 += u * u * u;
        s4 += u * u * u * u;
        t0 += r;
        t1 += r * u;
        t2 += r * u * u;
    }
    let a = [[n, s1, s2], [s1, s2, s3], [s2, s3, s4]];
    let rhs = [t0, t1, t2];
    let beta = solve3(a, rhs).ok_or_else(|| Error::InvalidInput("degenerate fit grid".into()))?;
    let (l, l_tilde, curvature) = (beta[0], beta[1], beta[2]);
    let residual = us
        .iter()
        .zip(&rs)
        .map(|(&u, &r)| (r - (l + l_tilde * u)).abs())
        .fold(0.0, f64::max);
    let max_u2 = us.iter().map(|u| u * u).fold(0.0f64, f64::max);
    if residual > 10.0 * max_u2 {
        return Err(Error::FitUnstable {
            residual,
            scale: max_u2,
        });
    }
    let (p, q, snap_residual) = match ratio_rationality(l, tol::L_SNAP_DENOMINATOR, f64::INFINITY) {
        Rationality::Rational { p, q, residual } => (p, q, residual),
        Rationality::IrrationalAtTolerance { .. } => (l.round() as i64, 1, (l - l.round()).abs()),
    };
    Ok(AsymptoticFit {
        l,
        l_tilde,
        curvature,
        l_snapped: (p, q),
        snap_residual,
        residual,
        z_grid: z_grid.to_vec(),
    })
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut m = a;
        for row in 0..3 {
            m[row][k] = b[row];
        }
        out[k] = det(m) / d;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::periods_closed_form;
    use crate::uniformization::build_uniformizer;

    fn simple() -> StepSet {
        StepSet::parse("1,0;-1,0;0,1;0,-1").unwrap()
    }
    fn kreweras() -> StepSet {
        StepSet::parse("1,1;-1,0;0,-1").unwrap()
    }
    fn gessel() -> StepSet {
        StepSet::parse("1,0;-1,0;1,1;-1,-1").unwrap()
    }
    fn worked_iid() -> StepSet {
        StepSet::parse("-1,0;-1,1;0,1;1,-1").unwrap()
    }

    #[test]
    fn classical_group_orders() {
        let kd = kernel_data(simple(), 0.1).unwrap();
        assert_eq!(
            group_order_on_curve(&kd, 1e-9, 100).unwrap(),
            GroupOrder::Finite(4)
        );
        let kd = kernel_data(kreweras(), 0.15).unwrap();
        assert_eq!(
            group_order_on_curve(&kd, 1e-9, 100).unwrap(),
            GroupOrder::Finite(6)
        );
        let kd = kernel_data(gessel(), 0.12).unwrap();
        assert_eq!(
            group_order_on_curve(&kd, 1e-9, 100).unwrap(),
            GroupOrder::Finite(8)
        );
        let kd = kernel_data(worked_iid(), 0.1).unwrap();
        assert_eq!(
            group_order_on_curve(&kd, 1e-9, 100).unwrap(),
            GroupOrder::Infinite
        );
    }

    #[test]
    fn rationality_detection() {
        match ratio_rationality(1.5, 50, 1e-9) {
            Rationality::Rational { p, q, .. } => assert_eq!((p, q), (3, 2)),
            _ => panic!("3/2 not detected"),
        }
        match ratio_rationality(4.0 / 3.0 + 2e-10, 50, 1e-9) {
            Rationality::Rational { p, q, .. } => assert_eq!((p, q), (4, 3)),
            _ => panic!("4/3 not detected"),
        }
        // sqrt(2) has no close rational with small denominator
        assert!(matches!(
            ratio_rationality(std::f64::consts::SQRT_2, 50, 1e-7),
            Rationality::IrrationalAtTolerance { .. }
        ));
    }

    #[test]
    fn worked_model_ratio_is_irrational_at_tolerance() {
        let kd = kernel_data(worked_iid(), 0.1).unwrap();
        let b = kd.branch_points().unwrap();
        let p = periods_closed_form(&kd, &b).unwrap();
        assert!(matches!(
            ratio_rationality(p.ratio(), 50, 1e-7),
            Rationality::IrrationalAtTolerance { .. }
        ));
    }

    #[test]
    fn orbit_sum_vanishes_iff_covariance_positive() {
        // Kreweras: covariance 1 > 0, orbit sum identically zero
        let s = kreweras();
        let kd = kernel_data(s, 0.15).unwrap();
        let b = kd.branch_points().unwrap();
        let p = periods_closed_form(&kd, &b).unwrap();
        let u = build_uniformizer(&kd, &b, &p).unwrap();
        let order = GroupOrder::Finite(6);
        let mut checked = 0;
        for n in 1..100u64 {
            let w = Cplx::new(
                (n * 31 % 83) as f64 / 83.0 * u.omega2(),
                (0.06 + (n * 17 % 79) as f64 / 79.0 * 0.88) * u.omega1().im,
            );
            if let Ok(v) = orbit_sum(&u, &order, w) {
                assert!(v.norm() < 1e-8, "orbit sum {:.3e} at {}", v.norm(), w);
                checked += 1;
                if checked == 20 {
                    break;
                }
            }
        }
        assert!(checked >= 20);
        // simple walk: covariance 0, orbit sum not identically zero
        let s = simple();
        let kd = kernel_data(s, 0.1).unwrap();
        let b = kd.branch_points().unwrap();
        let p = periods_closed_form(&kd, &b).unwrap();
        let u = build_uniformizer(&kd, &b, &p).unwrap();
        let order = GroupOrder::Finite(4);
        let mut max_abs = 0.0f64;
        for n in 1..40u64 {
            let w = Cplx::new(
                (n * 29 % 71) as f64 / 71.0 * u.omega2(),
                (0.1 + (n * 41 % 61) as f64 / 61.0 * 0.8) * u.omega1().im,
            );
            if let Ok(v) = orbit_sum(&u, &order, w) {
                max_abs = max_abs.max(v.norm());
            }
        }
        assert!(max_abs > 1e-3, "orbit sum stayed below 1e-3");
    }

    #[test]
    fn orbit_sum_shift_invariance() {
        let s = kreweras();
        let kd = kernel_data(s, 0.2).unwrap();
        let b = kd.branch_points().unwrap();
        let p = periods_closed_form(&kd, &b).unwrap();
        let u = build_uniformizer(&kd, &b, &p).unwrap();
        let order = GroupOrder::Finite(6);
        let w = Cplx::new(0.21 * u.omega2(), 0.43 * u.omega1().im);
        let a = orbit_sum(&u, &order, w).unwrap();
        let bsum = orbit_sum(&u, &order, w + Cplx::new(u.omega3(), 0.0)).unwrap();
        assert!((a - bsum).norm() < 1e-8 * (1.0 + a.norm()));
    }

    #[test]
    fn verdict_table() {
        let irr = Rationality::IrrationalAtTolerance { dmax: 50, tol: 1e-7 };
        let rat = Rationality::Rational { p: 3, q: 2, residual: 0.0 };
        assert_eq!(
            holonomy_verdict(&GroupOrder::Finite(8), 2, &rat),
            Verdict::Algebraic
        );
        assert_eq!(
            holonomy_verdict(&GroupOrder::Finite(4), 0, &rat),
            Verdict::HolonomicNonAlgebraic
        );
        assert_eq!(
            holonomy_verdict(&GroupOrder::Infinite, 1, &rat),
            Verdict::HolonomicAtThisZ
        );
        assert_eq!(
            holonomy_verdict(&GroupOrder::Infinite, 1, &irr),
            Verdict::NonHolonomicAtThisZ
        );
    }

    #[test]
    fn group_report_for_gessel() {
        let r = group_report(gessel(), 0.12, 100).unwrap();
        assert_eq!(r.order, GroupOrder::Finite(8));
        assert_eq!(r.covariance, 2);
        assert_eq!(r.verdict, Verdict::Algebraic);
        assert_eq!(r.orbit_sum_zero, Some(true));
        match r.rationality {
            Rationality::Rational { p, q, .. } => assert_eq!((p, q), (4, 3)),
            _ => panic!("expected rational ratio"),
        }
    }

    #[test]
    fn asymptotic_scan_worked_model() {
        let grid = geometric_grid(1e-6, 1e-3, 13);
        let fit = asymptotic_scan(worked_iid(), &grid).unwrap();
        assert!((fit.l - 4.0).abs() < 0.08, "L = {}", fit.l);
        assert_eq!(fit.l_snapped, (4, 1));
        assert!(fit.snap_residual < 1e-3);
    }

    #[test]
    fn asymptotic_scan_finite_group_is_flat() {
        let grid = geometric_grid(1e-6, 1e-3, 13);
        let fit = asymptotic_scan(simple(), &grid).unwrap();
        // pair-difference rounding at z = 1e-6 limits the flatness to
        // a few parts in 1e5
        assert!((fit.l - 2.0).abs() < 1e-4, "L = {}", fit.l);
        assert!(fit.l_tilde.abs() < 5e-3);
        assert_eq!(fit.l_snapped, (2, 1));
    }

    #[test]
    fn asymptotic_scan_validates_grid() {
        assert!(asymptotic_scan(simple(), &[1e-3, 1e-4]).is_err());
        let bad: Vec<f64> = geometric_grid(1e-3, 9e-3, 8);
        assert!(asymptotic_scan(simple(), &bad).is_err());
    }
}

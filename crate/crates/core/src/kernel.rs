//! Kernel algebra of a walk model at fixed weight z.
//!
//! The kernel K(x,y) = xyz[sum_S x^i y^j - 1/z] is quadratic in each
//! variable; this module holds its six coefficient polynomials, the two
//! discriminants, the branch points with their modulus ordering, the
//! two-valued algebraic branches Y(x) and X(y), the Galois involutions on
//! the curve, the six special limit points, and the sign-based subcase
//! classifier for infinite-group models.

use crate::error::{Error, Result};
use crate::poly::{Poly, Scalar};
use crate::roots;
use crate::sphere::SpherePoint;
use crate::stepset::StepSet;
use crate::{tol, Cplx};
use num_complex::ComplexFloat;
use num_traits::FromPrimitive;

/// The six kernel coefficient polynomials over any coefficient ring:
/// `(a, b, c)` in x (kernel read as a quadratic in y) and
/// `(a~, b~, c~)` in y (kernel read as a quadratic in x).
pub fn kernel_polys<T>(s: StepSet, z: T) -> [Poly<T>; 6]
where
    T: Scalar + FromPrimitive,
{
    let ind = |di: i8, dj: i8| -> T {
        if s.contains(di, dj) {
            T::one()
        } else {
            T::zero()
        }
    };
    let mk = |c0: T, c1: T, c2: T| Poly::new(vec![c0 * z.clone(), c1 * z.clone(), c2 * z.clone()]);
    let a = mk(ind(-1, 1), ind(0, 1), ind(1, 1));
    let mut b_coeffs = vec![
        ind(-1, 0) * z.clone(),
        ind(0, 0) * z.clone() - T::one(),
        ind(1, 0) * z.clone(),
    ];
    let b = Poly::new(std::mem::take(&mut b_coeffs));
    let c = mk(ind(-1, -1), ind(0, -1), ind(1, -1));
    let at = mk(ind(1, -1), ind(1, 0), ind(1, 1));
    let bt = Poly::new(vec![
        ind(0, -1) * z.clone(),
        ind(0, 0) * z.clone() - T::one(),
        ind(0, 1) * z.clone(),
    ]);
    let ct = mk(ind(-1, -1), ind(-1, 0), ind(-1, 1));
    [a, b, c, at, bt, ct]
}

/// Kernel data of one model at one weight.
#[derive(Debug, Clone)]
pub struct KernelData {
    pub step_set: StepSet,
    pub z: f64,
    /// y-quadratic coefficients: K = a(x) y^2 + b(x) y + c(x)
    pub a: Poly<f64>,
    pub b: Poly<f64>,
    pub c: Poly<f64>,
    /// x-quadratic coefficients: K = a~(y) x^2 + b~(y) x + c~(y)
    pub a_t: Poly<f64>,
    pub b_t: Poly<f64>,
    pub c_t: Poly<f64>,
    /// d(x) = b^2 - 4ac
    pub disc_x: Poly<f64>,
    /// d~(y) = b~^2 - 4 a~ c~
    pub disc_y: Poly<f64>,
}

pub fn kernel_data(s: StepSet, z: f64) -> Result<KernelData> {
    let size = s.len();
    if !(z > 0.0 && z < 1.0 / size as f64) {
        return Err(Error::WeightOutOfRange { z, size });
    }
    let [a, b, c, a_t, b_t, c_t] = kernel_polys(s, z);
    let disc_x = Poly::discriminant_combination(&a, &b, &c);
    let disc_y = Poly::discriminant_combination(&a_t, &b_t, &c_t);
    Ok(KernelData {
        step_set: s,
        z,
        a,
        b,
        c,
        a_t,
        b_t,
        c_t,
        disc_x,
        disc_y,
    })
}

impl KernelData {
    /// K(x, y) evaluated directly.
    pub fn eval(&self, x: Cplx, y: Cplx) -> Cplx {
        self.a.eval_complex(x) * y * y + self.b.eval_complex(x) * y + self.c.eval_complex(x)
    }

    /// |K(x,y)| normalized by the term magnitudes, so the residual stays
    /// meaningful when the coordinates are large.
    pub fn residual(&self, x: SpherePoint, y: SpherePoint) -> f64 {
        let (x, y) = match (x, y) {
            (SpherePoint::Finite(x), SpherePoint::Finite(y)) => (x, y),
            // the curve passes through coordinate poles; nothing to check
            _ => return 0.0,
        };
        let mag = |p: &Poly<f64>, v: Cplx| -> f64 {
            let vn = v.abs();
            let mut m = 0.0;
            for &ck in p.coeffs().iter().rev() {
                m = m * vn + ck.abs();
            }
            m
        };
        let k = self.eval(x, y);
        let yn = y.abs();
        let scale = mag(&self.a, x) * yn * yn + mag(&self.b, x) * yn + mag(&self.c, x);
        k.abs() / (scale + self.z)
    }

    /// K(x, 0) = c(x), the section kernel factor in x.
    pub fn k_x0(&self, x: Cplx) -> Cplx {
        self.c.eval_complex(x)
    }

    /// K(0, y) = c~(y), the section kernel factor in y.
    pub fn k_0y(&self, y: Cplx) -> Cplx {
        self.c_t.eval_complex(y)
    }

    /// K(0, 0) = z when (-1,-1) is a step, else 0.
    pub fn k_00(&self) -> f64 {
        self.z * self.step_set.indicator(-1, -1) as f64
    }

    pub fn branch_points(&self) -> Result<BranchPoints> {
        let x = ordered_branch_points(&self.disc_x, "x")?;
        let y = ordered_branch_points(&self.disc_y, "y")?;
        Ok(BranchPoints { x, y })
    }

    /// The two y-roots of the kernel at fixed x, sorted by modulus
    /// (sheet 0 is the smaller). Degenerate leading coefficient yields the
    /// single finite root plus infinity.
    pub fn y_roots(&self, x: SpherePoint) -> [SpherePoint; 2] {
        fiber_roots(&self.a, &self.b, &self.c, x)
    }

    /// The two x-roots of the kernel at fixed y, sorted by modulus.
    pub fn x_roots(&self, y: SpherePoint) -> [SpherePoint; 2] {
        fiber_roots(&self.a_t, &self.b_t, &self.c_t, y)
    }

    /// Branch Y_sheet(x) with the Lemma-2 modulus ordering. Errors when x
    /// sits on a branch cut, where the ordering degenerates.
    pub fn branch_y(&self, x: Cplx, sheet: usize) -> Result<SpherePoint> {
        let b = self.branch_points()?;
        if on_cut(x, b.x[0], b.x[1]) || on_cut_outer(x, b.x[2], b.x[3]) {
            return Err(Error::OnCut(x));
        }
        Ok(self.y_roots(SpherePoint::Finite(x))[sheet.min(1)])
    }

    /// Branch X_sheet(y), mirror of [`branch_y`].
    pub fn branch_x(&self, y: Cplx, sheet: usize) -> Result<SpherePoint> {
        let b = self.branch_points()?;
        if on_cut(y, b.y[0], b.y[1]) || on_cut_outer(y, b.y[2], b.y[3]) {
            return Err(Error::OnCut(y));
        }
        Ok(self.x_roots(SpherePoint::Finite(y))[sheet.min(1)])
    }

    /// X(y_l) at a branch point of d~, where the two x-branches coincide:
    /// -b~(y)/(2 a~(y)), no square-root branch involved.
    pub fn x_at_y_branch_point(&self, y: SpherePoint) -> SpherePoint {
        let minus_bt = self.b_t.scale(-1.0);
        let two_at = self.a_t.scale(2.0);
        Poly::eval_ratio(&minus_bt, &two_at, y)
    }

    /// Y(x_l) at a branch point of d.
    pub fn y_at_x_branch_point(&self, x: SpherePoint) -> SpherePoint {
        let minus_b = self.b.scale(-1.0);
        let two_a = self.a.scale(2.0);
        Poly::eval_ratio(&minus_b, &two_a, x)
    }

    /// Galois involution fixing x: swaps the two y-roots over x(s).
    pub fn galois_xi(
        &self,
        p: (SpherePoint, SpherePoint),
    ) -> Result<(SpherePoint, SpherePoint)> {
        self.check_on_curve(p)?;
        let [r0, r1] = self.y_roots(p.0);
        Ok((p.0, conjugate_root(p.1, r0, r1)))
    }

    /// Galois involution fixing y: swaps the two x-roots over y(s).
    pub fn galois_eta(
        &self,
        p: (SpherePoint, SpherePoint),
    ) -> Result<(SpherePoint, SpherePoint)> {
        self.check_on_curve(p)?;
        let [r0, r1] = self.x_roots(p.1);
        Ok((conjugate_root(p.0, r0, r1), p.1))
    }

    fn check_on_curve(&self, p: (SpherePoint, SpherePoint)) -> Result<()> {
        let res = self.residual(p.0, p.1);
        if res > tol::CURVE_RESIDUAL {
            let x = p.0.as_finite().unwrap_or_default();
            let y = p.1.as_finite().unwrap_or_default();
            return Err(Error::OffCurve { x, y, residual: res });
        }
        Ok(())
    }

    /// The six special limit points of Eq-level curve analysis. The x
    /// limits are the fiber values over y = infinity (projective roots of
    /// a(x)), the y-circ/bullet pair the fiber over x = infinity, and
    /// y*, y** the companion y-values on those fibers.
    pub fn special_points(&self) -> SpecialPoints {
        let xs = projective_quadratic_roots(&self.a);
        let ys = projective_quadratic_roots(&self.a_t);
        // larger modulus (infinity first) gets the star label
        let (x_star, x_starstar) = order_by_modulus_desc(xs[0], xs[1]);
        // smaller modulus keeps the circ label
        let (y_circ, y_bullet) = order_by_modulus_asc(ys[0], ys[1]);
        let companion = |x: SpherePoint| -> SpherePoint {
            match x {
                SpherePoint::Infinity => y_circ,
                SpherePoint::Finite(_) => {
                    let minus_c = self.c.scale(-1.0);
                    Poly::eval_ratio(&minus_c, &self.b, x)
                }
            }
        };
        SpecialPoints {
            x_star,
            x_starstar,
            y_star: companion(x_star),
            y_starstar: companion(x_starstar),
            y_circ,
            y_bullet,
        }
    }
}

/// Branch points ordered as |x1| < x2 < 1 < x3 < |x4| (and likewise in y),
/// with the fourth entry infinite when the discriminant has degree three.
#[derive(Debug, Clone, Copy)]
pub struct BranchPoints {
    pub x: [SpherePoint; 4],
    pub y: [SpherePoint; 4],
}

impl BranchPoints {
    pub fn x_real(&self, l: usize) -> f64 {
        self.x[l].as_finite().map(|v| v.re).unwrap_or(f64::INFINITY)
    }
    pub fn y_real(&self, l: usize) -> f64 {
        self.y[l].as_finite().map(|v| v.re).unwrap_or(f64::INFINITY)
    }
}

fn ordered_branch_points(disc: &Poly<f64>, axis: &str) -> Result<[SpherePoint; 4]> {
    let deg = disc.degree();
    if deg < 3 {
        return Err(Error::SingularWalk(format!(
            "{}-discriminant has degree {} < 3",
            axis, deg
        )));
    }
    let rs = roots::roots(disc.coeffs());
    // reality check: branch points of non-singular walks are real
    for r in &rs {
        if r.im.abs() > 1e-8 * (1.0 + r.re.abs()) {
            return Err(Error::SingularWalk(format!(
                "complex {}-branch point {}",
                axis, r
            )));
        }
    }
    let mut inner: Vec<f64> = Vec::new();
    let mut outer: Vec<f64> = Vec::new();
    for r in &rs {
        let m = r.norm();
        if (m - 1.0).abs() <= tol::ROOT_TIE {
            return Err(Error::SingularWalk(format!(
                "{}-branch point on the unit circle",
                axis
            )));
        }
        if m < 1.0 {
            inner.push(r.re);
        } else {
            outer.push(r.re);
        }
    }
    if inner.len() != 2 || outer.len() + (4 - deg.min(4)) != 2 {
        return Err(Error::SingularWalk(format!(
            "{}-branch points split {} inside / {} outside the unit disc",
            axis,
            inner.len(),
            outer.len()
        )));
    }
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (r1, r2) = (inner[0], inner[1]);
    // x2 is the positive branch point in (0,1); |x1| <= x2 with equality
    // only for value-symmetric configurations
    if !(r2 > tol::ROOT_TIE && r2 < 1.0 && r1.abs() <= r2 * (1.0 + 1e-9) + tol::ROOT_TIE) {
        return Err(Error::SingularWalk(format!(
            "{}-branch point ordering |{:.4e}| <= {:.4e} < 1 failed",
            axis, r1, r2
        )));
    }
    outer.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let (r3, r4) = match outer.len() {
        1 => (outer[0], f64::INFINITY),
        _ => {
            if outer[0] > 0.0 {
                (outer[0], outer[1])
            } else if outer[1] > 0.0 {
                (outer[1], outer[0])
            } else {
                return Err(Error::SingularWalk(format!(
                    "no positive outer {}-branch point",
                    axis
                )));
            }
        }
    };
    if !(r3 > 1.0 && r3 <= r4.abs() * (1.0 + 1e-9)) {
        return Err(Error::SingularWalk(format!(
            "{}-branch point ordering 1 < {:.4e} <= |{:.4e}| failed",
            axis, r3, r4
        )));
    }
    let fourth = if r4.is_infinite() {
        SpherePoint::Infinity
    } else {
        SpherePoint::finite(r4, 0.0)
    };
    Ok([
        SpherePoint::finite(r1, 0.0),
        SpherePoint::finite(r2, 0.0),
        SpherePoint::finite(r3, 0.0),
        fourth,
    ])
}

/// Operational singularity probe: the branch-point ordering must fail at
/// the probe weight and again at half of it.
pub fn is_singular(s: StepSet, z_probe: f64) -> bool {
    let fails = |z: f64| -> bool {
        match kernel_data(s, z) {
            Ok(k) => k.branch_points().is_err(),
            Err(_) => true,
        }
    };
    fails(z_probe) && fails(z_probe / 2.0)
}

/// Both roots of p2 t^2 + p1 t + p0 = 0 with x substituted into the
/// polynomial coefficients, projectively (roots at infinity when the
/// leading coefficient vanishes), sorted by modulus.
fn fiber_roots(
    pa: &Poly<f64>,
    pb: &Poly<f64>,
    pc: &Poly<f64>,
    at: SpherePoint,
) -> [SpherePoint; 2] {
    let (a, b, c) = match at {
        SpherePoint::Finite(x) if x.abs() <= 1.0 => (
            pa.eval_complex(x),
            pb.eval_complex(x),
            pc.eval_complex(x),
        ),
        SpherePoint::Finite(x) => {
            // evaluate via reversed polynomials at 1/x, scaled by x^m
            let m = pa.degree().max(pb.degree()).max(pc.degree());
            let u = x.inv();
            let up = |p: &Poly<f64>| -> Cplx {
                let mut acc = Cplx::new(0.0, 0.0);
                for k in (0..=m).rev() {
                    acc = acc * u + p.coeff(m - k); // coefficient of x^(m-k)... see below
                }
                acc
            };
            // up computes sum_k p_k x^(k-m) = p(x)/x^m with k ascending in u powers:
            // p(x)/x^m = sum_k p_k u^(m-k)
            (up(pa), up(pb), up(pc))
        }
        SpherePoint::Infinity => {
            let m = pa.degree().max(pb.degree()).max(pc.degree());
            (
                Cplx::new(pa.coeff(m), 0.0),
                Cplx::new(pb.coeff(m), 0.0),
                Cplx::new(pc.coeff(m), 0.0),
            )
        }
    };
    projective_roots(a, b, c)
}

fn projective_roots(a: Cplx, b: Cplx, c: Cplx) -> [SpherePoint; 2] {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return [SpherePoint::Infinity, SpherePoint::Infinity];
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    if a.abs() < tol::MOEBIUS_POLE {
        if b.abs() < tol::MOEBIUS_POLE {
            return [SpherePoint::Infinity, SpherePoint::Infinity];
        }
        return [SpherePoint::classify(-c / b), SpherePoint::Infinity];
    }
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q = if (b + disc).abs() >= (b - disc).abs() {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    let (r0, r1) = if q.abs() < 1e-300 {
        (Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0))
    } else {
        (c / q, q / a)
    };
    if r0.abs() <= r1.abs() {
        [SpherePoint::classify(r0), SpherePoint::classify(r1)]
    } else {
        [SpherePoint::classify(r1), SpherePoint::classify(r0)]
    }
}

/// Projective roots of a stored polynomial of degree <= 2.
fn projective_quadratic_roots(p: &Poly<f64>) -> [SpherePoint; 2] {
    projective_roots(
        Cplx::new(p.coeff(2), 0.0),
        Cplx::new(p.coeff(1), 0.0),
        Cplx::new(p.coeff(0), 0.0),
    )
}

/// Of the two fiber roots, the one conjugate to the given value: the root
/// farther from it (at a branch point both coincide and the point is its
/// own conjugate).
fn conjugate_root(y: SpherePoint, r0: SpherePoint, r1: SpherePoint) -> SpherePoint {
    if y.chordal(&r0) >= y.chordal(&r1) {
        r0
    } else {
        r1
    }
}

fn order_by_modulus_desc(a: SpherePoint, b: SpherePoint) -> (SpherePoint, SpherePoint) {
    let na = a.as_finite().map(|v| v.abs()).unwrap_or(f64::INFINITY);
    let nb = b.as_finite().map(|v| v.abs()).unwrap_or(f64::INFINITY);
    if na >= nb {
        (a, b)
    } else {
        (b, a)
    }
}

fn order_by_modulus_asc(a: SpherePoint, b: SpherePoint) -> (SpherePoint, SpherePoint) {
    let (hi, lo) = order_by_modulus_desc(a, b);
    (lo, hi)
}

/// Distance-based membership in the finite cut [p, q] on the real axis,
/// within the given radius.
fn on_cut_radius(x: Cplx, p: SpherePoint, q: SpherePoint, radius: f64) -> bool {
    let (p, q) = match (p.as_finite(), q.as_finite()) {
        (Some(p), Some(q)) => (p.re.min(q.re), p.re.max(q.re)),
        _ => return false,
    };
    x.im.abs() < radius && x.re > p - radius && x.re < q + radius
}

/// Membership in the outer cut [x3, x4], which passes through infinity
/// when x4 is negative or infinite.
fn on_cut_outer_radius(x: Cplx, p3: SpherePoint, p4: SpherePoint, radius: f64) -> bool {
    let x3 = match p3.as_finite() {
        Some(v) => v.re,
        None => return false,
    };
    match p4 {
        SpherePoint::Infinity => x.im.abs() < radius && x.re > x3 - radius,
        SpherePoint::Finite(v) if v.re < 0.0 => {
            x.im.abs() < radius && (x.re > x3 - radius || x.re < v.re + radius)
        }
        SpherePoint::Finite(v) => on_cut_radius(x, p3, SpherePoint::Finite(v), radius),
    }
}

fn on_cut(x: Cplx, p: SpherePoint, q: SpherePoint) -> bool {
    on_cut_radius(x, p, q, 1e-9 * (1.0 + x.abs()))
}

fn on_cut_outer(x: Cplx, p3: SpherePoint, p4: SpherePoint) -> bool {
    on_cut_outer_radius(x, p3, p4, 1e-9 * (1.0 + x.abs()))
}

impl BranchPoints {
    /// Whether v lies within the radius of either x-cut.
    pub fn near_x_cut(&self, v: Cplx, radius: f64) -> bool {
        on_cut_radius(v, self.x[0], self.x[1], radius)
            || on_cut_outer_radius(v, self.x[2], self.x[3], radius)
    }

    /// Whether v lies within the radius of either y-cut.
    pub fn near_y_cut(&self, v: Cplx, radius: f64) -> bool {
        on_cut_radius(v, self.y[0], self.y[1], radius)
            || on_cut_outer_radius(v, self.y[2], self.y[3], radius)
    }

    pub fn on_x_cut(&self, v: Cplx) -> bool {
        self.near_x_cut(v, 1e-9 * (1.0 + v.abs()))
    }

    pub fn on_y_cut(&self, v: Cplx) -> bool {
        self.near_y_cut(v, 1e-9 * (1.0 + v.abs()))
    }
}

/// The six special limit points (x*, x**), (y*, y**), (y-circ, y-bullet).
#[derive(Debug, Clone, Copy)]
pub struct SpecialPoints {
    pub x_star: SpherePoint,
    pub x_starstar: SpherePoint,
    pub y_star: SpherePoint,
    pub y_starstar: SpherePoint,
    pub y_circ: SpherePoint,
    pub y_bullet: SpherePoint,
}

/// Sign/infiniteness subcase tags for the infinite-group taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SubcaseTag {
    IA,
    IB,
    IC,
    IIA,
    IIB,
    IIC,
    IID,
    III,
}

impl std::fmt::Display for SubcaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SubcaseTag::IA => "I.A",
            SubcaseTag::IB => "I.B",
            SubcaseTag::IC => "I.C",
            SubcaseTag::IIA => "II.A",
            SubcaseTag::IIB => "II.B",
            SubcaseTag::IIC => "II.C",
            SubcaseTag::IID => "II.D",
            SubcaseTag::III => "III",
        };
        write!(f, "{}", s)
    }
}

/// Symbolic pole-curve predictions; the continuation module resolves them
/// to point sets once the covering is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PredictedCurve {
    /// image of the horizontal line through a1 in the x-plane
    IxA1,
    /// image of the horizontal line through b1 in the x-plane
    IxB1,
    IyA1,
    IyB1,
    /// R minus the open interval between x1 and x4
    XRealOutside,
    /// the open interval between x4 and x1 (x4 < 0)
    XRealBetween,
    YRealOutside,
    YRealBetween,
}

#[derive(Debug, Clone)]
pub struct Subcase {
    pub tag: SubcaseTag,
    pub x_curves: Vec<PredictedCurve>,
    pub y_curves: Vec<PredictedCurve>,
}

/// Sign classifier for the infinite-group models. The x4 sign is cross-
/// checked against the step-indicator formula before use.
pub fn classify_subcase(
    k: &KernelData,
    b: &BranchPoints,
    p: &SpecialPoints,
    finite_group: bool,
) -> Result<Subcase> {
    if finite_group {
        return Err(Error::NotApplicable(
            "subcase taxonomy is defined for infinite-group models".into(),
        ));
    }
    let sign_of = |pt: SpherePoint| -> i8 {
        match pt {
            SpherePoint::Infinity => 0,
            SpherePoint::Finite(v) => {
                if v.re > 0.0 {
                    1
                } else {
                    -1
                }
            }
        }
    };
    let x4 = sign_of(b.x[3]);
    let y4 = sign_of(b.y[3]);
    let s = k.step_set;
    let x4_indicator = s.indicator(1, 0) - 4 * s.indicator(1, 1) * s.indicator(1, -1);
    let expected = if x4_indicator > 0 {
        1
    } else if x4_indicator < 0 {
        -1
    } else {
        0
    };
    if x4 != expected {
        return Err(Error::NotApplicable(format!(
            "x4 sign {} disagrees with indicator formula {}",
            x4, expected
        )));
    }
    let infinite = |pt: SpherePoint| pt.is_infinite();
    let tag = if y4 == 0 {
        SubcaseTag::III
    } else if y4 < 0 {
        match x4 {
            -1 => SubcaseTag::IA,
            0 => SubcaseTag::IB,
            _ => SubcaseTag::IC,
        }
    } else {
        match x4 {
            -1 => SubcaseTag::IIA,
            0 => {
                // at x4 = infinity the two Y-limits merge into Y(x4)
                if infinite(p.y_circ) {
                    SubcaseTag::IID
                } else {
                    SubcaseTag::IIC
                }
            }
            _ => {
                if infinite(p.y_circ) != infinite(p.y_bullet) {
                    SubcaseTag::IIB
                } else {
                    SubcaseTag::IIC
                }
            }
        }
    };
    let (x_curves, y_curves) = match tag {
        SubcaseTag::IA => (
            vec![PredictedCurve::IxA1, PredictedCurve::IxB1],
            vec![PredictedCurve::IyA1, PredictedCurve::IyB1],
        ),
        SubcaseTag::IB | SubcaseTag::IC => (
            vec![PredictedCurve::IxA1, PredictedCurve::XRealOutside],
            vec![PredictedCurve::IyA1, PredictedCurve::YRealBetween],
        ),
        SubcaseTag::IIA => (
            vec![PredictedCurve::IxB1, PredictedCurve::XRealBetween],
            vec![PredictedCurve::IyB1, PredictedCurve::YRealOutside],
        ),
        _ => (
            vec![PredictedCurve::XRealOutside],
            vec![PredictedCurve::YRealOutside],
        ),
    };
    Ok(Subcase {
        tag,
        x_curves,
        y_curves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple() -> StepSet {
        StepSet::parse("1,0;-1,0;0,1;0,-1").unwrap()
    }
    fn kreweras() -> StepSet {
        StepSet::parse("1,1;-1,0;0,-1").unwrap()
    }
    fn worked_iid() -> StepSet {
        StepSet::parse("-1,0;-1,1;0,1;1,-1").unwrap()
    }

    #[test]
    fn simple_walk_coefficients() {
        let k = kernel_data(simple(), 0.1).unwrap();
        // a(x) = zx, b(x) = -x + z(1 + x^2), c(x) = zx
        assert_eq!(k.a.coeffs(), &[0.0, 0.1]);
        assert_eq!(k.b.coeffs(), &[0.1, -1.0, 0.1]);
        assert_eq!(k.c.coeffs(), &[0.0, 0.1]);
    }

    #[test]
    fn kreweras_coefficients() {
        let k = kernel_data(kreweras(), 0.2).unwrap();
        // a(x) = zx^2, b(x) = -x + z, c(x) = zx
        assert_eq!(k.a.coeffs(), &[0.0, 0.0, 0.2]);
        assert_eq!(k.b.coeffs(), &[0.2, -1.0]);
        assert_eq!(k.c.coeffs(), &[0.0, 0.2]);
    }

    #[test]
    fn weight_out_of_range() {
        assert!(matches!(
            kernel_data(simple(), 0.25),
            Err(Error::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            kernel_data(simple(), 0.0),
            Err(Error::WeightOutOfRange { .. })
        ));
    }

    #[test]
    fn simple_walk_branch_point_symmetry() {
        // palindromic discriminant forces x1 x4 = 1 and x2 x3 = 1
        for &z in &[0.05, 0.1, 0.2, 0.24] {
            let k = kernel_data(simple(), z).unwrap();
            let b = k.branch_points().unwrap();
            let x: Vec<f64> = (0..4).map(|l| b.x_real(l)).collect();
            assert!((x[0] * x[3] - 1.0).abs() < 1e-9, "x1 x4 != 1 at z={}", z);
            assert!((x[1] * x[2] - 1.0).abs() < 1e-9, "x2 x3 != 1 at z={}", z);
        }
    }

    #[test]
    fn worked_model_branch_expansions() {
        let z = 1e-3;
        let k = kernel_data(worked_iid(), z).unwrap();
        let b = k.branch_points().unwrap();
        let x1 = z - 2.0 * z * z + 3.0 * z * z * z;
        let x2 = z + 2.0 * z * z + 5.0 * z * z * z;
        let x3 = 1.0 / (4.0 * z * z) - 1.0 - 2.0 * z;
        assert!((b.x_real(0) - x1).abs() < 1e-9);
        assert!((b.x_real(1) - x2).abs() < 1e-9);
        assert!((b.x_real(2) - x3).abs() < 1e-4 * x3.abs());
        assert!(b.x[3].is_infinite());
    }

    #[test]
    fn branch_y_satisfies_kernel_and_ordering() {
        let k = kernel_data(worked_iid(), 0.1).unwrap();
        for n in 0..100 {
            let t = 2.0 * std::f64::consts::PI * (n as f64 + 0.3) / 100.0;
            let x = Cplx::new(t.cos(), t.sin()); // |x| = 1 is off the cuts
            let y0 = k.branch_y(x, 0).unwrap();
            let y1 = k.branch_y(x, 1).unwrap();
            let m0 = y0.as_finite().map(|v| v.abs()).unwrap_or(f64::INFINITY);
            let m1 = y1.as_finite().map(|v| v.abs()).unwrap_or(f64::INFINITY);
            assert!(m0 <= m1 + 1e-12);
            assert!(m0 < 1.0 && m1 > 1.0, "unit-circle separation failed");
            if let Some(y) = y0.as_finite() {
                assert!(k.eval(x, y).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn branch_y_rejects_cut_points() {
        let k = kernel_data(simple(), 0.2).unwrap();
        let b = k.branch_points().unwrap();
        let mid = 0.5 * (b.x_real(0) + b.x_real(1));
        assert!(matches!(k.branch_y(Cplx::new(mid, 0.0), 0), Err(Error::OnCut(_))));
    }

    #[test]
    fn vieta_products_off_cut() {
        let k = kernel_data(kreweras(), 0.15).unwrap();
        for n in 0..50 {
            let t = 2.0 * std::f64::consts::PI * (n as f64 + 0.41) / 50.0;
            let x = Cplx::new(0.9 * t.cos(), 0.9 * t.sin());
            let y0 = k.branch_y(x, 0).unwrap().as_finite().unwrap();
            let y1 = k.branch_y(x, 1).unwrap();
            let a = k.a.eval_complex(x);
            let b = k.b.eval_complex(x);
            let c = k.c.eval_complex(x);
            if let Some(y1) = y1.as_finite() {
                assert!((y0 * y1 - c / a).norm() < 1e-10 * (1.0 + (c / a).norm()));
                assert!((y0 + y1 + b / a).norm() < 1e-10 * (1.0 + (b / a).norm()));
            }
        }
    }

    #[test]
    fn galois_maps_are_involutions_on_curve() {
        let k = kernel_data(worked_iid(), 0.12).unwrap();
        for n in 0..100 {
            let t = 2.0 * std::f64::consts::PI * (n as f64 + 0.17) / 100.0;
            let x = Cplx::new(1.1 * t.cos(), 1.1 * t.sin());
            let Ok(y) = k.branch_y(x, 0) else { continue };
            let p = (SpherePoint::Finite(x), y);
            let q = k.galois_xi(p).unwrap();
            let back = k.galois_xi(q).unwrap();
            assert!(p.1.chordal(&back.1) < 1e-8);
            assert!(k.residual(q.0, q.1) < 1e-9);
            let r = k.galois_eta(p).unwrap();
            let back = k.galois_eta(r).unwrap();
            assert!(p.0.chordal(&back.0) < 1e-8);
            assert!(k.residual(r.0, r.1) < 1e-9);
        }
    }

    #[test]
    fn galois_xi_fixes_branch_point() {
        let k = kernel_data(simple(), 0.2).unwrap();
        let b = k.branch_points().unwrap();
        let x2 = b.x[1];
        let y = k.y_at_x_branch_point(x2);
        let p = k.galois_xi((x2, y)).unwrap();
        assert!(p.1.chordal(&y) < 1e-6);
    }

    #[test]
    fn galois_rejects_off_curve() {
        let k = kernel_data(simple(), 0.2).unwrap();
        let p = (SpherePoint::finite(0.5, 0.0), SpherePoint::finite(0.9, 0.0));
        assert!(matches!(k.galois_xi(p), Err(Error::OffCurve { .. })));
    }

    #[test]
    fn singular_detection() {
        assert!(!is_singular(simple(), 0.1));
        assert!(!is_singular(kreweras(), 0.1));
        let fig2 = StepSet::parse("-1,1;1,1;1,-1").unwrap();
        assert!(is_singular(fig2, 0.1));
        let degenerate = StepSet::parse("-1,1;1,-1").unwrap();
        assert!(is_singular(degenerate, 0.2));
    }

    #[test]
    fn worked_model_special_points() {
        let k = kernel_data(worked_iid(), 0.1).unwrap();
        let p = k.special_points();
        assert!(p.x_star.is_infinite());
        assert!(p.y_star.is_infinite());
        assert!(!p.x_starstar.is_infinite());
        assert!(!p.y_starstar.is_infinite());
        // x** is the root of a(x) = z(1+x), y** = -c/b there
        let xs = p.x_starstar.as_finite().unwrap();
        assert!((xs - Cplx::new(-1.0, 0.0)).norm() < 1e-12);
        let ys = p.y_starstar.as_finite().unwrap();
        let z = 0.1;
        assert!((ys - Cplx::new(-z / (1.0 + z), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn special_points_match_branch_formula_limits() {
        // the set {x*, x**} must agree with the two X-branch values at
        // large |y|
        for s in [worked_iid(), StepSet::parse("1,1;1,-1;-1,1;-1,-1").unwrap()] {
            let k = kernel_data(s, 0.5 / s.len() as f64).unwrap();
            let p = k.special_points();
            let probe = k.x_roots(SpherePoint::finite(1e9, 0.0));
            let direct = p.x_star.chordal(&probe[1]) + p.x_starstar.chordal(&probe[0]);
            let crossed = p.x_star.chordal(&probe[0]) + p.x_starstar.chordal(&probe[1]);
            assert!(direct.min(crossed) < 1e-6);
        }
    }

    #[test]
    fn subcase_of_worked_model_is_iid() {
        let k = kernel_data(worked_iid(), 0.1).unwrap();
        let b = k.branch_points().unwrap();
        let p = k.special_points();
        let sc = classify_subcase(&k, &b, &p, false).unwrap();
        assert_eq!(sc.tag, SubcaseTag::IID);
        assert_eq!(sc.x_curves, vec![PredictedCurve::XRealOutside]);
    }

    #[test]
    fn subcase_ia_from_diagonal_steps() {
        // (1,1),(1,-1) force x4 < 0 and (1,1),(-1,1) force y4 < 0
        let s = StepSet::parse("1,1;1,-1;-1,1;-1,-1").unwrap();
        let k = kernel_data(s, 0.1).unwrap();
        let b = k.branch_points().unwrap();
        assert!(b.x_real(3) < 0.0 && b.y_real(3) < 0.0);
        let p = k.special_points();
        let sc = classify_subcase(&k, &b, &p, false).unwrap();
        assert_eq!(sc.tag, SubcaseTag::IA);
    }

    #[test]
    fn subcase_rejects_finite_group() {
        let k = kernel_data(simple(), 0.1).unwrap();
        let b = k.branch_points().unwrap();
        let p = k.special_points();
        assert!(matches!(
            classify_subcase(&k, &b, &p, true),
            Err(Error::NotApplicable(_))
        ));
    }
}

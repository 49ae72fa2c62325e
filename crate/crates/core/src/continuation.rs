//! Meromorphic continuation of the section generating functions over the
//! covering, branch enumeration, special-point lifting and pole-curve
//! sampling.
//!
//! The sections are seeded from the truncated counting series on the
//! strips where the respective coordinate lies in the unit disc, extended
//! across the union strip by the global identity, and continued to
//! arbitrary ω by telescoping the explicit increment functions along
//! third-period shifts. Every continued value carries an accumulated
//! accuracy estimate; increments that blow up are flagged or reported as
//! near-pole errors, never silently summed.

use crate::counting::CountTable;
use crate::error::{Error, Result};
use crate::kernel::{PredictedCurve, Subcase};
use crate::sphere::SpherePoint;
use crate::uniformization::Uniformizer;
use crate::{tol, Cplx};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    X,
    Y,
}

/// A continued section value with its accuracy ledger.
#[derive(Debug, Clone, Copy)]
pub struct ContinuedValue {
    pub value: Cplx,
    pub accuracy: f64,
    /// increment location and magnitude when some step came near a pole
    pub near_pole: Option<(Cplx, f64)>,
}

/// Both lifted sections of one model at one weight.
pub struct LiftedSections<'a> {
    pub u: &'a Uniformizer,
    pub table: &'a CountTable,
    k00_q00: Cplx,
    seed_bound: f64,
}

pub fn seed_sections<'a>(u: &'a Uniformizer, table: &'a CountTable) -> Result<LiftedSections<'a>> {
    if table.step_set != u.kd.step_set {
        return Err(Error::InvalidInput(
            "count table belongs to a different step set".into(),
        ));
    }
    let q00 = table.eval_q00(u.kd.z)?;
    Ok(LiftedSections {
        u,
        table,
        k00_q00: Cplx::new(u.kd.k_00(), 0.0) * q00.value,
        seed_bound: q00.truncation_bound,
    })
}

impl<'a> LiftedSections<'a> {
    pub fn k00_q00(&self) -> Cplx {
        self.k00_q00
    }

    fn finite_coords(&self, omega: Cplx) -> Option<(Cplx, Cplx)> {
        let (x, y) = self.u.point(omega);
        Some((x.as_finite()?, y.as_finite()?))
    }

    /// Membership in the base strip where |x| < 1.
    pub fn in_delta_x(&self, omega: Cplx) -> bool {
        let w2 = self.u.omega2();
        if !(omega.re > 0.0 && omega.re < w2) {
            return false;
        }
        match self.u.x_of(omega) {
            SpherePoint::Finite(v) => v.norm() < 1.0,
            SpherePoint::Infinity => false,
        }
    }

    /// Membership in the base strip where |y| < 1.
    pub fn in_delta_y(&self, omega: Cplx) -> bool {
        let w2 = self.u.omega2();
        let s = self.u.omega3() / 2.0;
        if !(omega.re > s && omega.re < s + w2) {
            return false;
        }
        match self.u.y_of(omega) {
            SpherePoint::Finite(v) => v.norm() < 1.0,
            SpherePoint::Infinity => false,
        }
    }

    pub fn in_delta(&self, omega: Cplx) -> bool {
        self.in_delta_x(omega) || self.in_delta_y(omega)
    }

    /// Seed values (r_x, r_y) on the union strip.
    fn seed(&self, omega: Cplx) -> Result<(Cplx, Cplx, f64)> {
        let z = self.u.kd.z;
        let (x, y) = self
            .finite_coords(omega)
            .ok_or(Error::NearPole {
                omega,
                magnitude: f64::INFINITY,
            })?;
        let in_x = self.in_delta_x(omega);
        let in_y = self.in_delta_y(omega);
        if in_x && in_y {
            let qx = self.table.eval_qx0(x, z)?;
            let qy = self.table.eval_q0y(y, z)?;
            let rx = self.u.kd.k_x0(x) * qx.value;
            let ry = self.u.kd.k_0y(y) * qy.value;
            let acc = qx.truncation_bound + qy.truncation_bound + self.seed_bound;
            Ok((rx, ry, acc))
        } else if in_x {
            let qx = self.table.eval_qx0(x, z)?;
            let rx = self.u.kd.k_x0(x) * qx.value;
            let ry = -rx + self.k00_q00 + x * y;
            let acc = 2.0 * qx.truncation_bound + self.seed_bound + 1e-14 * (x * y).norm();
            Ok((rx, ry, acc))
        } else if in_y {
            let qy = self.table.eval_q0y(y, z)?;
            let ry = self.u.kd.k_0y(y) * qy.value;
            let rx = -ry + self.k00_q00 + x * y;
            let acc = 2.0 * qy.truncation_bound + self.seed_bound + 1e-14 * (x * y).norm();
            Ok((rx, ry, acc))
        } else {
            Err(Error::OutsideSeedDomain(omega))
        }
    }

    /// Increment f_y(w) = x(w) [y(xi-hat w) - y(w)] of the rightward
    /// continuation of r_y.
    pub fn f_y(&self, omega: Cplx) -> Result<Cplx> {
        let (x, y) = self.finite_coords(omega).ok_or(Error::NearPole {
            omega,
            magnitude: f64::INFINITY,
        })?;
        let yx = self
            .u
            .y_of(self.u.hat_xi(omega))
            .as_finite()
            .ok_or(Error::NearPole {
                omega,
                magnitude: f64::INFINITY,
            })?;
        Ok(x * (yx - y))
    }

    /// Increment f_x(w) = y(w) [x(eta-hat w) - x(w)] of the leftward
    /// continuation of r_x.
    pub fn f_x(&self, omega: Cplx) -> Result<Cplx> {
        let (x, y) = self.finite_coords(omega).ok_or(Error::NearPole {
            omega,
            magnitude: f64::INFINITY,
        })?;
        let xe = self
            .u
            .x_of(self.u.hat_eta(omega))
            .as_finite()
            .ok_or(Error::NearPole {
                omega,
                magnitude: f64::INFINITY,
            })?;
        Ok(y * (xe - x))
    }

    /// Shift count with smallest |n| such that omega - n omega3 lies in
    /// the seed strip.
    fn reduction_shift(&self, omega: Cplx) -> Result<i64> {
        let w3 = self.u.omega3();
        let cap = ((omega.re.abs() + self.u.omega2() + w3) / w3).ceil() as i64 + 3;
        for a in 0..=cap {
            for n in [a, -a] {
                let base = omega - Cplx::new(n as f64 * w3, 0.0);
                if self.in_delta(base) {
                    return Ok(n);
                }
            }
        }
        Err(Error::OutsideSeedDomain(omega))
    }

    /// Value of the chosen section at an arbitrary point of the covering.
    pub fn eval(&self, section: Section, omega: Cplx) -> Result<ContinuedValue> {
        let omega = self.u.reduce_mod_omega1(omega);
        let n = self.reduction_shift(omega)?;
        let w3 = Cplx::new(self.u.omega3(), 0.0);
        let base = omega - w3 * n as f64;
        let (rx0, ry0, seed_acc) = self.seed(base)?;
        let mut value = match section {
            Section::X => rx0,
            Section::Y => ry0,
        };
        let mut accuracy = seed_acc;
        let mut near_pole: Option<(Cplx, f64)> = None;
        let add = |value: &mut Cplx,
                       accuracy: &mut f64,
                       near_pole: &mut Option<(Cplx, f64)>,
                       sign: f64,
                       at: Cplx,
                       f: Result<Cplx>|
         -> Result<()> {
            let f = f?;
            let mag = f.norm();
            if mag > tol::NEAR_POLE_ABORT {
                return Err(Error::NearPole { omega: at, magnitude: mag });
            }
            if mag > tol::NEAR_POLE_FLAG && near_pole.map_or(true, |(_, m)| mag > m) {
                *near_pole = Some((at, mag));
            }
            *value += sign * f;
            *accuracy += 1e-15 * (mag + value.norm());
            Ok(())
        };
        match section {
            Section::X => {
                if n > 0 {
                    // r_x(w) = r_x(base) - sum_{j=1..n} f_x(base + j w3)
                    for j in 1..=n {
                        let at = base + w3 * j as f64;
                        add(&mut value, &mut accuracy, &mut near_pole, -1.0, at, self.f_x(at))?;
                    }
                } else {
                    // r_x(w) = r_x(base) + sum_{j=0..m-1} f_x(base - j w3)
                    for j in 0..(-n) {
                        let at = base - w3 * j as f64;
                        add(&mut value, &mut accuracy, &mut near_pole, 1.0, at, self.f_x(at))?;
                    }
                }
            }
            Section::Y => {
                if n > 0 {
                    // r_y(w) = r_y(base) + sum_{j=0..n-1} f_y(base + j w3)
                    for j in 0..n {
                        let at = base + w3 * j as f64;
                        add(&mut value, &mut accuracy, &mut near_pole, 1.0, at, self.f_y(at))?;
                    }
                } else {
                    // r_y(w) = r_y(base) - sum_{j=1..m} f_y(base - j w3)
                    for j in 1..=(-n) {
                        let at = base - w3 * j as f64;
                        add(&mut value, &mut accuracy, &mut near_pole, -1.0, at, self.f_y(at))?;
                    }
                }
            }
        }
        Ok(ContinuedValue {
            value,
            accuracy,
            near_pole,
        })
    }

    /// Residual of the global identity r_x + r_y - K(0,0)Q(0,0) - xy at a
    /// point, evaluated through both independent continuations.
    pub fn identity_residual(&self, omega: Cplx) -> Result<f64> {
        let (x, y) = self.finite_coords(omega).ok_or(Error::NearPole {
            omega,
            magnitude: f64::INFINITY,
        })?;
        let rx = self.eval(Section::X, omega)?;
        let ry = self.eval(Section::Y, omega)?;
        Ok((rx.value + ry.value - self.k00_q00 - x * y).norm())
    }

    /// Unique preimage of the coordinate in the k-th branch half-cell,
    /// found by coarse grid seeding plus Newton, then moved into the cell
    /// by evenness and periodicity.
    fn invert_coordinate(&self, section: Section, k: usize, coord: Cplx) -> Result<Cplx> {
        let u = self.u;
        let w2 = u.omega2();
        let h1 = u.omega1().im;
        let center = match section {
            Section::X => Cplx::new(0.0, 0.0),
            Section::Y => Cplx::new(u.omega3() / 2.0, 0.0),
        };
        let coord_of = |w: Cplx| -> SpherePoint {
            match section {
                Section::X => u.x_of(w),
                Section::Y => u.y_of(w),
            }
        };
        let deriv_of = |w: Cplx| -> Option<Cplx> {
            match section {
                Section::X => u.x_derivative(w),
                Section::Y => u.y_derivative(w),
            }
        };
        let target = SpherePoint::classify(coord);
        // coarse grid over one fundamental cell anchored at the section
        // center, best few seeds
        let mut seeds: Vec<(f64, Cplx)> = Vec::new();
        for i in 0..24 {
            for j in 0..12 {
                let w = center
                    + Cplx::new(
                        (i as f64 + 0.5) / 24.0 * w2,
                        (j as f64 + 0.5) / 12.0 * h1,
                    );
                let d = coord_of(w).chordal(&target);
                seeds.push((d, w));
            }
        }
        seeds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut converged: Option<Cplx> = None;
        for &(_, seed) in seeds.iter().take(6) {
            let mut w = seed;
            for _ in 0..40 {
                let SpherePoint::Finite(v) = coord_of(w) else {
                    break;
                };
                let Some(d) = deriv_of(w) else { break };
                if d.norm() < 1e-14 {
                    break;
                }
                let step = (v - coord) / d;
                w -= step;
                if step.norm() < 1e-14 * (1.0 + w.norm()) {
                    break;
                }
            }
            if let SpherePoint::Finite(v) = coord_of(w) {
                if (v - coord).norm() < 1e-9 * (1.0 + coord.norm()) {
                    converged = Some(w);
                    break;
                }
            }
        }
        let w = converged.ok_or(Error::NoPreimageInCell(coord))?;
        // the coordinate map is even about the section center and
        // lattice-periodic: select the representative in the k-th half-cell
        let delta = u.reduce_to_cell(w - center);
        let mirror = u.reduce_to_cell(-delta);
        let (left, right) = if delta.re < w2 / 2.0 {
            (delta, mirror)
        } else {
            (mirror, delta)
        };
        let m = (k / 2) as f64;
        let rep = if k % 2 == 0 { left } else { right };
        Ok(center + rep + Cplx::new(m * w2, 0.0))
    }

    /// The k-th branch of Q(x,0) (section X) or Q(0,y) (section Y) at the
    /// given coordinate.
    pub fn branch_eval(&self, section: Section, k: usize, coord: Cplx) -> Result<ContinuedValue> {
        if k < 1 {
            return Err(Error::InvalidInput("branch index starts at 1".into()));
        }
        let kd = &self.u.kd;
        let bp = &self.u.bp;
        let on_cut = match section {
            Section::X => bp.on_x_cut(coord),
            Section::Y => bp.on_y_cut(coord),
        };
        if on_cut {
            return Err(Error::OnCut(coord));
        }
        let kernel_factor = match section {
            Section::X => kd.k_x0(coord),
            Section::Y => kd.k_0y(coord),
        };
        if kernel_factor.norm() < 1e-12 * (1.0 + coord.norm()) * kd.z {
            return Err(Error::KernelZero(coord));
        }
        let w = self.invert_coordinate(section, k, coord)?;
        let r = self.eval(section, w)?;
        Ok(ContinuedValue {
            value: r.value / kernel_factor,
            accuracy: r.accuracy / kernel_factor.norm(),
            near_pole: r.near_pole,
        })
    }
}

/// Labels of the six distinguished continuation-increment poles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SpecialPointLabel {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
}

/// omega-locations of the special points inside the base y-cell.
#[derive(Debug, Clone)]
pub struct LiftedSpecialPoints {
    pub points: Vec<(SpecialPointLabel, Cplx)>,
}

impl LiftedSpecialPoints {
    pub fn get(&self, label: SpecialPointLabel) -> Option<Cplx> {
        self.points
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, w)| *w)
    }
}

/// Reduce omega into the base y-cell, with poles on the left edge placed
/// on the right edge instead (the convention the cell pictures use).
fn reduce_into_pi_y(u: &Uniformizer, omega: Cplx) -> Cplx {
    let w2 = u.omega2();
    let lo = u.omega3() / 2.0;
    let mut re = omega.re;
    while re < lo + 1e-12 * w2 {
        re += w2;
    }
    while re >= lo + w2 + 1e-12 * w2 {
        re -= w2;
    }
    let h1 = u.omega1().im;
    let mut im = omega.im;
    im -= (im / h1).floor() * h1;
    Cplx::new(re, im)
}

/// Find the poles of the given coordinate inside the base y-cell by grid
/// search plus Newton on the reciprocal.
fn coordinate_poles(u: &Uniformizer, section: Section) -> Vec<Cplx> {
    let w2 = u.omega2();
    let h1 = u.omega1().im;
    let lo = u.omega3() / 2.0;
    let coord_of = |w: Cplx| -> SpherePoint {
        match section {
            Section::X => u.x_of(w),
            Section::Y => u.y_of(w),
        }
    };
    let deriv_of = |w: Cplx| -> Option<Cplx> {
        match section {
            Section::X => u.x_derivative(w),
            Section::Y => u.y_derivative(w),
        }
    };
    // structural poles: x has a double pole at the lattice point when x4
    // is infinite, y likewise at omega3/2 when y4 is infinite
    let structural = match section {
        Section::X => u.bp.x[3].is_infinite().then(|| Cplx::new(0.0, 0.0)),
        Section::Y => u.bp.y[3].is_infinite().then(|| Cplx::new(u.omega3() / 2.0, 0.0)),
    };
    if let Some(p) = structural {
        return vec![reduce_into_pi_y(u, p)];
    }
    let mut found: Vec<Cplx> = Vec::new();
    fn push_distinct(found: &mut Vec<Cplx>, wr: Cplx, w2: f64, h1: f64) {
        let dup = found.iter().any(|p| {
            let d = *p - wr;
            let dre = d.re.abs().min((d.re.abs() - w2).abs());
            let dim = d.im.abs().min((d.im.abs() - h1).abs());
            dre < 1e-6 * w2 && dim < 1e-6 * h1
        });
        if !dup {
            found.push(wr);
        }
    }
    let mut cells: Vec<(f64, Cplx)> = Vec::new();
    for i in 0..48 {
        for j in 0..24 {
            let w = Cplx::new(
                lo + (i as f64 + 0.5) / 48.0 * w2,
                (j as f64 + 0.5) / 24.0 * h1,
            );
            let m = match coord_of(w) {
                SpherePoint::Finite(v) => v.norm(),
                SpherePoint::Infinity => f64::INFINITY,
            };
            cells.push((m, w));
        }
    }
    cells.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    for &(_, seed) in cells.iter().take(10) {
        // Newton on 1/coordinate: w <- w + coord/coord'
        let mut w = seed;
        let mut ok = false;
        for _ in 0..50 {
            let c = coord_of(w);
            let Some(d) = deriv_of(w) else { break };
            match c {
                SpherePoint::Infinity => {
                    ok = true;
                    break;
                }
                SpherePoint::Finite(v) => {
                    if d.norm() < 1e-280 {
                        break;
                    }
                    let step = v / d;
                    w += step;
                    if step.norm() < 1e-13 * (1.0 + w.norm()) {
                        ok = true;
                        break;
                    }
                }
            }
        }
        if ok {
            let m = match coord_of(w) {
                SpherePoint::Finite(v) => v.norm(),
                SpherePoint::Infinity => f64::INFINITY,
            };
            if m > tol::COORD_INFINITY / 10.0 {
                push_distinct(&mut found, reduce_into_pi_y(u, w), w2, h1);
            }
        }
        if found.len() == 2 {
            break;
        }
    }
    found
}

/// Locate a1..a4, b1, b2 in the base y-cell and verify their coordinate
/// signatures against the special-point values.
pub fn lift_special_points(
    u: &Uniformizer,
    sp: &crate::kernel::SpecialPoints,
) -> Result<LiftedSpecialPoints> {
    let w3 = Cplx::new(u.omega3(), 0.0);
    let y_poles = coordinate_poles(u, Section::Y);
    if y_poles.is_empty() {
        return Err(Error::SignatureMismatch(Cplx::new(0.0, 0.0)));
    }
    let (a1, a2) = if y_poles.len() == 1 {
        (y_poles[0], y_poles[0])
    } else {
        let (p, q) = (y_poles[0], y_poles[1]);
        if (p.re - q.re).abs() >= (p.im - q.im).abs() {
            // horizontal configuration: a1 is the right one
            if p.re >= q.re {
                (p, q)
            } else {
                (q, p)
            }
        } else {
            // vertical configuration: a1 is the lower one
            if p.im <= q.im {
                (p, q)
            } else {
                (q, p)
            }
        }
    };
    let a3 = reduce_into_pi_y(u, a1 - w3);
    let a4 = reduce_into_pi_y(u, a2 - w3);
    let x_poles = coordinate_poles(u, Section::X);
    let (b1, b2) = match x_poles.len() {
        0 => return Err(Error::SignatureMismatch(Cplx::new(0.0, 0.0))),
        1 => (x_poles[0], x_poles[0]),
        _ => {
            let (p, q) = (x_poles[0], x_poles[1]);
            if (p.re - q.re).abs() >= (p.im - q.im).abs() {
                if p.re >= q.re {
                    (p, q)
                } else {
                    (q, p)
                }
            } else if p.im <= q.im {
                (p, q)
            } else {
                (q, p)
            }
        }
    };
    // signature checks: the x-values over the y-poles must form the
    // {x*, x**} pair, the y-values over the x-poles the {y-circ, y-bullet}
    // pair, and the omega3-predecessors must land on the companion fibres
    let xa1 = u.x_of(a1);
    let xa2 = u.x_of(a2);
    let direct = xa1.chordal(&sp.x_star) + xa2.chordal(&sp.x_starstar);
    let crossed = xa1.chordal(&sp.x_starstar) + xa2.chordal(&sp.x_star);
    if direct.min(crossed) > 1e-5 {
        return Err(Error::SignatureMismatch(a1));
    }
    let yb1 = u.y_of(b1);
    let yb2 = u.y_of(b2);
    let direct = yb1.chordal(&sp.y_circ) + yb2.chordal(&sp.y_bullet);
    let crossed = yb1.chordal(&sp.y_bullet) + yb2.chordal(&sp.y_circ);
    if direct.min(crossed) > 1e-5 {
        return Err(Error::SignatureMismatch(b1));
    }
    // x(a3) shares the fibre of a2 and x(a4) that of a1
    if u.x_of(a3).chordal(&xa2) > 1e-5 || u.x_of(a4).chordal(&xa1) > 1e-5 {
        return Err(Error::SignatureMismatch(a3));
    }
    Ok(LiftedSpecialPoints {
        points: vec![
            (SpecialPointLabel::A1, a1),
            (SpecialPointLabel::A2, a2),
            (SpecialPointLabel::A3, a3),
            (SpecialPointLabel::A4, a4),
            (SpecialPointLabel::B1, b1),
            (SpecialPointLabel::B2, b2),
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PoleVerdict {
    Verified,
    Inconclusive,
    Absent,
}

#[derive(Debug, Clone)]
pub struct PoleSample {
    pub n: usize,
    pub omega: Cplx,
    pub x: SpherePoint,
    pub y: SpherePoint,
    pub verdict: PoleVerdict,
    pub dist_x: Option<f64>,
    pub dist_y: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PoleCurveSample {
    pub source: (SpecialPointLabel, Cplx),
    pub samples: Vec<PoleSample>,
}

/// Distance from a sphere point to a predicted pole curve.
pub fn curve_distance(
    u: &Uniformizer,
    lifted: &LiftedSpecialPoints,
    curve: PredictedCurve,
    p: SpherePoint,
) -> Option<f64> {
    let v = p.as_finite()?;
    let bp = &u.bp;
    let interval_outside = |lo: f64, hi: SpherePoint, v: Cplx| -> f64 {
        // distance to { re <= lo } union { re >= hi }
        match hi {
            SpherePoint::Infinity => {
                let d_re = (v.re - lo).max(0.0);
                (v.im * v.im + d_re * d_re).sqrt()
            }
            SpherePoint::Finite(h) => {
                let d1 = (v.re - lo).max(0.0);
                let d2 = (h.re - v.re).max(0.0);
                let d_re = d1.min(d2);
                (v.im * v.im + d_re * d_re).sqrt()
            }
        }
    };
    let interval_between = |lo: f64, hi: f64, v: Cplx| -> f64 {
        let d_re = if v.re < lo {
            lo - v.re
        } else if v.re > hi {
            v.re - hi
        } else {
            0.0
        };
        (v.im * v.im + d_re * d_re).sqrt()
    };
    let image_distance = |level: Cplx, section: Section, v: Cplx| -> f64 {
        let samples = 1024;
        let mut best = f64::INFINITY;
        let mut best_s = 0.0;
        for i in 0..samples {
            let s = i as f64 / samples as f64 * u.omega2();
            let w = Cplx::new(s, level.im);
            let c = match section {
                Section::X => u.x_of(w),
                Section::Y => u.y_of(w),
            };
            if let SpherePoint::Finite(c) = c {
                let d = (c - v).norm();
                if d < best {
                    best = d;
                    best_s = s;
                }
            }
        }
        // local refinement by ternary search around the best sample
        let h = u.omega2() / samples as f64;
        let (mut a, mut b) = (best_s - h, best_s + h);
        for _ in 0..60 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            let d = |s: f64| -> f64 {
                let w = Cplx::new(s, level.im);
                let c = match section {
                    Section::X => u.x_of(w),
                    Section::Y => u.y_of(w),
                };
                match c {
                    SpherePoint::Finite(c) => (c - v).norm(),
                    SpherePoint::Infinity => f64::INFINITY,
                }
            };
            if d(m1) <= d(m2) {
                b = m2;
            } else {
                a = m1;
            }
        }
        best.min({
            let s = 0.5 * (a + b);
            let w = Cplx::new(s, level.im);
            let c = match section {
                Section::X => u.x_of(w),
                Section::Y => u.y_of(w),
            };
            match c {
                SpherePoint::Finite(c) => (c - v).norm(),
                SpherePoint::Infinity => f64::INFINITY,
            }
        })
    };
    Some(match curve {
        PredictedCurve::XRealOutside => interval_outside(bp.x_real(0), bp.x[3], v),
        PredictedCurve::YRealOutside => interval_outside(bp.y_real(0), bp.y[3], v),
        PredictedCurve::XRealBetween => interval_between(bp.x_real(3), bp.x_real(0), v),
        PredictedCurve::YRealBetween => interval_between(bp.y_real(3), bp.y_real(0), v),
        PredictedCurve::IxA1 => {
            image_distance(lifted.get(SpecialPointLabel::A1)?, Section::X, v)
        }
        PredictedCurve::IxB1 => {
            image_distance(lifted.get(SpecialPointLabel::B1)?, Section::X, v)
        }
        PredictedCurve::IyA1 => {
            image_distance(lifted.get(SpecialPointLabel::A1)?, Section::Y, v)
        }
        PredictedCurve::IyB1 => {
            image_distance(lifted.get(SpecialPointLabel::B1)?, Section::Y, v)
        }
    })
}

/// Sweep omega0 + n omega3 for n = 1..n_max, verify each as a pole of the
/// continued sections and measure the distance to the predicted curves.
pub fn sample_pole_curve(
    sections: &LiftedSections<'_>,
    lifted: &LiftedSpecialPoints,
    subcase: &Subcase,
    source: (SpecialPointLabel, Cplx),
    n_max: usize,
    rationality: &crate::group::Rationality,
) -> Result<PoleCurveSample> {
    if matches!(rationality, crate::group::Rationality::Rational { .. }) {
        return Err(Error::RationalRatio);
    }
    let u = sections.u;
    let w3 = Cplx::new(u.omega3(), 0.0);
    let mut samples = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let psi = source.1 + w3 * n as f64;
        let (x, y) = u.point(psi);
        // probe the section magnitude on a shrinking offset fan
        let mut max_mag = 0.0f64;
        for &delta in &[1e-4, 3e-5, 1e-5] {
            let probe = psi + Cplx::new(0.6, 0.8) * (delta * u.omega2());
            match sections.eval(Section::Y, probe) {
                Ok(v) => max_mag = max_mag.max(v.value.norm()),
                Err(Error::NearPole { magnitude, .. }) => {
                    max_mag = max_mag.max(magnitude);
                }
                Err(_) => {}
            }
        }
        let verdict = if max_mag > tol::POLE_VERIFY_THRESHOLD {
            PoleVerdict::Verified
        } else if max_mag > 1e3 {
            PoleVerdict::Inconclusive
        } else {
            PoleVerdict::Absent
        };
        let dist_x = subcase
            .x_curves
            .iter()
            .filter_map(|&c| curve_distance(u, lifted, c, x))
            .fold(None, |acc: Option<f64>, d| {
                Some(acc.map_or(d, |a| a.min(d)))
            });
        let dist_y = subcase
            .y_curves
            .iter()
            .filter_map(|&c| curve_distance(u, lifted, c, y))
            .fold(None, |acc: Option<f64>, d| {
                Some(acc.map_or(d, |a| a.min(d)))
            });
        samples.push(PoleSample {
            n,
            omega: reduce_into_pi_y(u, psi),
            x,
            y,
            verdict,
            dist_x,
            dist_y,
        });
    }
    Ok(PoleCurveSample { source, samples })
}

/// Report of the first-branch singularity scan and the branch-2 pole
/// count stability check.
#[derive(Debug, Clone)]
pub struct FirstBranchReport {
    pub max_offcut_magnitude: f64,
    pub series_max_deviation: f64,
    pub series_tolerance: f64,
    pub k2_pole_count_coarse: usize,
    pub k2_pole_count_fine: usize,
}

/// Scan branch 1 of Q(x, 0) over the cut plane and branch 2 for poles.
pub fn first_branch_singularity_check(
    sections: &LiftedSections<'_>,
    grid_n: usize,
) -> Result<FirstBranchReport> {
    let u = sections.u;
    let bp = &u.bp;
    let z = u.kd.z;
    let mut max_offcut = 0.0f64;
    for i in 0..grid_n {
        for j in 0..grid_n {
            let x = Cplx::new(
                -2.0 + 4.0 * (i as f64 + 0.5) / grid_n as f64,
                -2.0 + 4.0 * (j as f64 + 0.5) / grid_n as f64,
            );
            if x.norm() > 2.0 {
                continue;
            }
            // skip the cut neighborhoods and the section kernel zeros
            if bp.near_x_cut(x, 1e-3) {
                continue;
            }
            if u.kd.k_x0(x).norm() < 1e-3 * z {
                continue;
            }
            match sections.branch_eval(Section::X, 1, x) {
                Ok(v) => max_offcut = max_offcut.max(v.value.norm()),
                Err(Error::NoPreimageInCell(_)) => continue,
                Err(Error::NearPole { .. }) => {
                    max_offcut = f64::INFINITY;
                }
                Err(_) => continue,
            }
        }
    }
    // agreement with the convergent series inside the unit disc
    let mut series_dev = 0.0f64;
    let mut series_tol = 0.0f64;
    for n in 0..40 {
        let t = 2.0 * std::f64::consts::PI * (n as f64 + 0.29) / 40.0;
        let r = 0.35 + 0.4 * ((n * 7 % 13) as f64 / 13.0);
        let x = Cplx::new(r * t.cos(), r * t.sin());
        if u.kd.k_x0(x).norm() < 1e-6 {
            continue;
        }
        let Ok(direct) = sections.table.eval_qx0(x, z) else {
            continue;
        };
        let Ok(branch) = sections.branch_eval(Section::X, 1, x) else {
            continue;
        };
        series_dev = series_dev.max((branch.value - direct.value).norm());
        series_tol = series_tol.max(
            direct.truncation_bound + branch.accuracy + 1e-8,
        );
    }
    // branch-2 pole count on the second half-cell, grid-refined
    let count_poles = |g: usize| -> usize {
        let w2 = u.omega2();
        let h1 = u.omega1().im;
        let mut hits: Vec<(usize, usize)> = Vec::new();
        for i in 0..g {
            for j in 0..g {
                let w = Cplx::new(
                    w2 + (i as f64 + 0.5) / g as f64 * (w2 / 2.0),
                    (j as f64 + 0.5) / g as f64 * h1,
                );
                let big = match sections.eval(Section::X, w) {
                    Ok(v) => v.value.norm() > tol::POLE_VERIFY_THRESHOLD,
                    Err(Error::NearPole { .. }) => true,
                    Err(_) => false,
                };
                if big {
                    hits.push((i, j));
                }
            }
        }
        // cluster 8-connected hits
        let mut used = vec![false; hits.len()];
        let mut clusters = 0;
        for s in 0..hits.len() {
            if used[s] {
                continue;
            }
            clusters += 1;
            let mut stack = vec![s];
            used[s] = true;
            while let Some(t) = stack.pop() {
                for v in 0..hits.len() {
                    if !used[v] {
                        let di = hits[t].0 as i64 - hits[v].0 as i64;
                        let dj = hits[t].1 as i64 - hits[v].1 as i64;
                        if di.abs() <= 1 && dj.abs() <= 1 {
                            used[v] = true;
                            stack.push(v);
                        }
                    }
                }
            }
        }
        clusters
    };
    // branch 2 lives on M_{2,0}: Re in [omega2, 3 omega2 / 2)
    let coarse = count_poles(28);
    let fine = count_poles(42);
    Ok(FirstBranchReport {
        max_offcut_magnitude: max_offcut,
        series_max_deviation: series_dev,
        series_tolerance: series_tol,
        k2_pole_count_coarse: coarse,
        k2_pole_count_fine: fine,
    })
}

//! The three uniformization periods, by two independent routes.
//!
//! The quadrature route integrates 1/sqrt(|d|) between branch points with
//! the discriminant evaluated in factored form, so the integrable endpoint
//! singularities cost no accuracy. The closed-form route assembles the
//! periods from the complete and incomplete elliptic integrals of the
//! branch-point cross-ratios, scaled by the leading-coefficient factor M.
//! Both the modulus k and the argument w are carried together with their
//! unit complements, computed cancellation-free from root differences, so
//! the route stays accurate when k approaches 1 exponentially fast as
//! z -> 0.

use crate::elliptic::{ellip_f_stable, ellip_k_complement};
use crate::error::{Error, Result};
use crate::kernel::{BranchPoints, KernelData};
use crate::quad::tanh_sinh;
use crate::sphere::SpherePoint;
use crate::Cplx;

/// Closed-form ingredients of the period computation.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm {
    pub k: f64,
    pub k2_complement: f64,
    pub w: f64,
    pub w2_complement: f64,
    pub m_scale: f64,
    pub omega2_cap: f64,
    pub omega3_cap: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Periods {
    /// purely imaginary
    pub omega1: Cplx,
    pub omega2: f64,
    pub omega3: f64,
    pub closed_form: ClosedForm,
}

impl Periods {
    pub fn ratio(&self) -> f64 {
        self.omega2 / self.omega3
    }
}

/// x-coordinate of the lower limit of the third-period integral: the
/// single-valued X at the branch point y1.
pub fn x_at_y1(kd: &KernelData, b: &BranchPoints) -> SpherePoint {
    kd.x_at_y_branch_point(b.y[0])
}

/// Closed-form periods from branch-point cross-ratios.
pub fn periods_closed_form(kd: &KernelData, b: &BranchPoints) -> Result<Periods> {
    let x1 = b.x_real(0);
    let x2 = b.x_real(1);
    let x3 = b.x_real(2);
    let x4 = b.x[3];
    let xy1 = x_at_y1(kd, b);
    let xy1_re = match xy1 {
        SpherePoint::Finite(v) => {
            if v.im.abs() > 1e-8 * (1.0 + v.re.abs()) {
                return Err(Error::QuadratureFailure(format!(
                    "X(y1) = {} is not real",
                    v
                )));
            }
            Some(v.re)
        }
        SpherePoint::Infinity => None,
    };

    // k^2 = (x4-x1)(x3-x2) / ((x4-x2)(x3-x1));  1-k^2 = (x4-x3)(x2-x1) / (same)
    let (k2, k2c) = match x4 {
        SpherePoint::Infinity => {
            let den = x3 - x1;
            ((x3 - x2) / den, (x2 - x1) / den)
        }
        SpherePoint::Finite(v) => {
            let x4 = v.re;
            let den = (x4 - x2) * (x3 - x1);
            ((x4 - x1) * (x3 - x2) / den, (x4 - x3) * (x2 - x1) / den)
        }
    };
    // w^2 = (x4-x2)(x1-X)/((x4-x1)(x2-X));  1-w^2 = (x2-x1)(x4-X)/((x4-x1)(x2-X))
    let (w2, w2c) = match (x4, xy1_re) {
        (SpherePoint::Infinity, Some(xx)) => {
            ((x1 - xx) / (x2 - xx), (x2 - x1) / (x2 - xx))
        }
        (SpherePoint::Infinity, None) => (1.0, 0.0),
        (SpherePoint::Finite(v), Some(xx)) => {
            let x4 = v.re;
            let den = (x4 - x1) * (x2 - xx);
            ((x4 - x2) * (x1 - xx) / den, (x2 - x1) * (x4 - xx) / den)
        }
        (SpherePoint::Finite(v), None) => {
            let x4 = v.re;
            ((x4 - x2) / (x4 - x1), (x2 - x1) / (x4 - x1))
        }
    };
    // validate through the complements; k^2 itself rounds to 1 once the
    // complement drops below machine precision
    if !(k2c > 0.0 && k2c < 1.0 && k2 > 0.0) {
        return Err(Error::QuadratureFailure(format!(
            "modulus out of range: k^2 = {:.6e}, complement {:.6e}",
            k2, k2c
        )));
    }
    if !(w2 >= 0.0 && w2c >= 0.0) {
        return Err(Error::QuadratureFailure(format!(
            "argument out of range: w^2 = {:.6e}, complement {:.6e}",
            w2, w2c
        )));
    }
    let k = (1.0 - k2c).max(0.0).sqrt();
    let w = (1.0 - w2c).max(0.0).sqrt();

    // scale factor M: 2 / sqrt(d4 (x4-x2)(x3-x1)) for a quartic
    // discriminant, 2 / sqrt(-d3 (x3-x1)) for a cubic one
    let m_scale = match x4 {
        SpherePoint::Finite(v) => {
            let d4 = kd.disc_x.coeff(4);
            let prod = d4 * (v.re - x2) * (x3 - x1);
            if prod <= 0.0 {
                return Err(Error::QuadratureFailure(
                    "scale factor radicand not positive".into(),
                ));
            }
            2.0 / prod.sqrt()
        }
        SpherePoint::Infinity => {
            let d3 = kd.disc_x.coeff(3);
            let prod = -d3 * (x3 - x1);
            if prod <= 0.0 {
                return Err(Error::QuadratureFailure(
                    "scale factor radicand not positive".into(),
                ));
            }
            2.0 / prod.sqrt()
        }
    };
    let omega2_cap = ellip_k_complement(k2c)?;
    let omega3_cap = ellip_f_stable(w, w2c, k2c)?;
    // companion period: i M K(k'), the complement of k' beingature k itself
    let omega1 = Cplx::new(0.0, m_scale * ellip_k_complement(k2)?);
    Ok(Periods {
        omega1,
        omega2: m_scale * omega2_cap,
        omega3: m_scale * omega3_cap,
        closed_form: ClosedForm {
            k,
            k2_complement: k2c,
            w,
            w2_complement: w2c,
            m_scale,
            omega2_cap,
            omega3_cap,
        },
    })
}

/// 1/sqrt(|disc|) with the discriminant in factored form; the distances to
/// the interval endpoints replace the factors whose roots sit there.
fn factored_inv_sqrt(
    lead_abs: f64,
    roots: &[f64],
    lo_root: Option<usize>,
    hi_root: Option<usize>,
) -> impl Fn(f64, f64, f64) -> f64 + '_ {
    move |x: f64, da: f64, db: f64| {
        let mut prod = lead_abs;
        for (i, &r) in roots.iter().enumerate() {
            let factor = if Some(i) == lo_root {
                da
            } else if Some(i) == hi_root {
                db
            } else {
                (x - r).abs()
            };
            prod *= factor;
        }
        if prod <= 0.0 {
            return 0.0;
        }
        1.0 / prod.sqrt()
    }
}

/// Quadrature periods (omega1, omega2, omega3) straight from the defining
/// integrals.
pub fn periods_quadrature(kd: &KernelData, b: &BranchPoints) -> Result<(Cplx, f64, f64)> {
    let x1 = b.x_real(0);
    let x2 = b.x_real(1);
    let x3 = b.x_real(2);
    let mut roots = vec![x1, x2, x3];
    if let Some(v) = b.x[3].as_finite() {
        roots.push(v.re);
    }
    let lead_abs = kd.disc_x.leading().abs();
    let rel = 1e-12;

    let w1 = tanh_sinh(
        factored_inv_sqrt(lead_abs, &roots, Some(0), Some(1)),
        x1,
        x2,
        rel,
    )?;
    let w2 = tanh_sinh(
        factored_inv_sqrt(lead_abs, &roots, Some(1), Some(2)),
        x2,
        x3,
        rel,
    )?;

    let xy1 = x_at_y1(kd, b);
    let w3 = match xy1 {
        SpherePoint::Finite(v) => {
            let xx = v.re;
            if !(xx < x1) {
                return Err(Error::QuadratureFailure(format!(
                    "X(y1) = {:.6e} does not precede x1 = {:.6e}",
                    xx, x1
                )));
            }
            tanh_sinh(
                factored_inv_sqrt(lead_abs, &roots, None, Some(0)),
                xx,
                x1,
                rel,
            )?
            .value
        }
        SpherePoint::Infinity => {
            // substitute x = x1 - u/(1-u) to map (-inf, x1] onto [0, 1)
            let f = factored_inv_sqrt(lead_abs, &roots, None, None);
            let roots_ref = &roots;
            let lead = lead_abs;
            tanh_sinh(
                move |_u: f64, da: f64, db: f64| {
                    let xi = da / db; // distance below x1
                    if !(xi.is_finite()) || xi > 1e140 {
                        return 0.0;
                    }
                    let x = x1 - xi;
                    let mut prod = lead;
                    for (i, &r) in roots_ref.iter().enumerate() {
                        prod *= if i == 0 { xi } else { (x - r).abs() };
                    }
                    let _ = &f;
                    if prod <= 0.0 {
                        return 0.0;
                    }
                    (1.0 / prod.sqrt()) / (db * db)
                },
                0.0,
                1.0,
                rel,
            )?
            .value
        }
    };
    Ok((Cplx::new(0.0, w1.value), w2.value, w3))
}

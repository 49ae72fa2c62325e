//! Points on the Riemann sphere with an explicit infinity tag.
//!
//! The Galois maps and the covering coordinates legitimately take the value
//! infinity; carrying an explicit tag keeps downstream consumers from ever
//! seeing a large float masquerading as a pole.

use crate::{tol, Cplx};
use num_complex::ComplexFloat;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Cplx),
    Infinity,
}

impl SpherePoint {
    pub fn finite(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Cplx::new(re, im))
    }

    /// Classify a raw complex value, tagging anything beyond the
    /// magnitude threshold as infinite.
    pub fn classify(v: Cplx) -> Self {
        if !v.re.is_finite() || !v.im.is_finite() || v.norm() > tol::COORD_INFINITY {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(v)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<Cplx> {
        match self {
            SpherePoint::Finite(v) => Some(*v),
            SpherePoint::Infinity => None,
        }
    }

    /// Chordal distance on the Riemann sphere, in [0, sqrt(2)].
    pub fn chordal(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(p), SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite(p)) => {
                2.0 / (1.0 + p.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite(p), SpherePoint::Finite(q)) => {
                2.0 * (p - q).abs() / ((1.0 + p.norm_sqr()).sqrt() * (1.0 + q.norm_sqr()).sqrt())
            }
        }
    }

    pub fn recip(&self) -> SpherePoint {
        match self {
            SpherePoint::Infinity => SpherePoint::Finite(Cplx::new(0.0, 0.0)),
            SpherePoint::Finite(v) if v.norm() < tol::MOEBIUS_POLE => SpherePoint::Infinity,
            SpherePoint::Finite(v) => SpherePoint::Finite(v.inv()),
        }
    }
}

impl From<Cplx> for SpherePoint {
    fn from(v: Cplx) -> Self {
        SpherePoint::classify(v)
    }
}

impl From<f64> for SpherePoint {
    fn from(v: f64) -> Self {
        SpherePoint::classify(Cplx::new(v, 0.0))
    }
}

impl std::fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(v) => write!(f, "{}", v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chordal_metric_basics() {
        let zero = SpherePoint::finite(0.0, 0.0);
        let inf = SpherePoint::Infinity;
        assert_eq!(zero.chordal(&inf), 2.0);
        assert_eq!(inf.chordal(&inf), 0.0);
        // symmetric
        let p = SpherePoint::finite(1.0, 2.0);
        let q = SpherePoint::finite(-0.5, 0.25);
        assert!((p.chordal(&q) - q.chordal(&p)).abs() < 1e-15);
        // large points approach infinity
        let big = SpherePoint::Finite(Cplx::new(1e7, 0.0));
        assert!(big.chordal(&inf) < 1e-6);
    }

    #[test]
    fn classify_tags_large_values() {
        assert!(SpherePoint::classify(Cplx::new(1e9, 0.0)).is_infinite());
        assert!(SpherePoint::classify(Cplx::new(f64::NAN, 0.0)).is_infinite());
        assert!(!SpherePoint::classify(Cplx::new(1e7, 0.0)).is_infinite());
    }

    #[test]
    fn recip_swaps_zero_and_infinity() {
        assert_eq!(
            SpherePoint::Infinity.recip(),
            SpherePoint::finite(0.0, 0.0)
        );
        assert!(SpherePoint::finite(0.0, 0.0).recip().is_infinite());
    }
}

//! Numerical analysis engine for quarter-plane lattice-walk models with
//! small steps.
//!
//! Given a step set `S ⊆ {-1,0,1}² \ {(0,0)}` and a weight `z ∈ (0, 1/|S|)`,
//! the crate computes the algebraic data of the walk kernel (coefficient
//! polynomials, discriminants, branch points, the two-valued branches and
//! their Galois involutions), the elliptic uniformization of the kernel
//! curve (periods by quadrature and in closed form, Weierstrass ℘), the
//! group-of-the-walk classification (order, covariance, orbit sums,
//! period-ratio rationality, holonomy verdicts), the meromorphic
//! continuation of the section generating functions across branches, and
//! the pole curves and z→0 period-ratio asymptotics those branches predict.
//!
//! Exact integer enumeration of the walks themselves (the counting oracle)
//! lives in [`counting`]; everything downstream consumes it only through
//! truncated series with certified tail bounds.

pub mod batch;
pub mod continuation;
pub mod counting;
pub mod elliptic;
pub mod error;
pub mod group;
pub mod kernel;
pub mod periods;
pub mod poly;
pub mod quad;
pub mod report;
pub mod roots;
pub mod sphere;
pub mod stepset;
pub mod tol;
pub mod uniformization;

/// Scalar used by the analytic layer.
pub type Real = f64;
/// Complex scalar used by the analytic layer.
pub type Cplx = num_complex::Complex<f64>;

pub use error::Error;
pub use sphere::SpherePoint;
pub use stepset::StepSet;

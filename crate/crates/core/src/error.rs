//! Error type shared by all modules.

use crate::Cplx;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid step `{0}`: steps must be in {{-1,0,1}}^2 minus (0,0)")]
    InvalidStep(String),
    #[error("empty step set")]
    EmptyStepSet,
    #[error("weight z = {z} outside (0, 1/{size}) for this step set")]
    WeightOutOfRange { z: f64, size: usize },
    #[error("singular walk: {0}")]
    SingularWalk(String),
    #[error("point {0} lies on a branch cut")]
    OnCut(Cplx),
    #[error("point ({x}, {y}) is not on the kernel curve (residual {residual:.3e})")]
    OffCurve { x: Cplx, y: Cplx, residual: f64 },
    #[error("evaluation point outside the certified series region: {0}")]
    OutsideCertifiedRegion(String),
    #[error("point is not on the kernel curve")]
    NotOnCurve,
    #[error("elliptic modulus {0} outside [0, 1)")]
    ModulusOutOfRange(f64),
    #[error("argument {0} outside the admissible range {1}")]
    ArgumentOutOfRange(f64, &'static str),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("degenerate uniformizing map: {0}")]
    DegenerateMap(String),
    #[error("argument within tolerance of a lattice pole of the elliptic function")]
    LatticePole,
    #[error("every trial seed hit a pole of the Galois maps")]
    SeedDegenerate,
    #[error("operation requires a finite group; this model's group did not close")]
    InfiniteGroup,
    #[error("asymptotic fit unstable: residual {residual:.3e} exceeds 10x scale {scale:.3e}")]
    FitUnstable { residual: f64, scale: f64 },
    #[error("omega = {0} reduces into neither seed strip nor their extensions")]
    OutsideSeedDomain(Cplx),
    #[error("continuation increment at omega_k = {omega} blew up (|f| = {magnitude:.3e})")]
    NearPole { omega: Cplx, magnitude: f64 },
    #[error("no preimage of coordinate {0} in the requested branch cell")]
    NoPreimageInCell(Cplx),
    #[error("section kernel factor vanishes at coordinate {0}")]
    KernelZero(Cplx),
    #[error("pole at omega = {0} matches no special-point signature")]
    SignatureMismatch(Cplx),
    #[error("period ratio is rational at this z; pole-curve sampling is ill-defined")]
    RationalRatio,
    #[error("classification not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

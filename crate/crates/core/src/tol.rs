//! Central tolerances and thresholds.
//!
//! Every threshold used by more than one module is pinned here so the test
//! suites and the library agree on the same numbers.

/// Tie tolerance for branch-point modulus ordering.
pub const ROOT_TIE: f64 = 1e-12;

/// Residual below which a point counts as lying on the kernel curve.
pub const CURVE_RESIDUAL: f64 = 1e-8;

/// Relative agreement required between the quadrature and closed-form
/// period routes.
pub const PERIOD_ROUTE_AGREEMENT: f64 = 1e-9;

/// Switch point for the log-expansion branch of the complete elliptic
/// integral: used once 1 - k drops below this.
pub const ABEL_SWITCH: f64 = 1e-10;

/// Coordinates larger than this in magnitude are reported as infinite.
pub const COORD_INFINITY: f64 = 1e8;

/// Proximity to a Moebius-inverse pole treated as mapping to infinity.
pub const MOEBIUS_POLE: f64 = 1e-12;

/// Default denominator cap for period-ratio rationality probing.
pub const RATIONALITY_DMAX: u64 = 50;

/// Default tolerance for period-ratio rationality probing.
pub const RATIONALITY_TOL: f64 = 1e-7;

/// Denominator cap when snapping the fitted asymptotic constant L to a
/// rational.
pub const L_SNAP_DENOMINATOR: u64 = 12;

/// Magnitude above which a continued-section value verifies a pole.
pub const POLE_VERIFY_THRESHOLD: f64 = 1e6;

/// Probe radius around a candidate pole location.
pub const POLE_PROBE_RADIUS: f64 = 1e-4;

/// Increment magnitude above which continuation aborts with `NearPole`
/// instead of flagging and summing.
pub const NEAR_POLE_ABORT: f64 = 1e14;

/// Increment magnitude that sets the pole-proximity flag on a continued
/// value.
pub const NEAR_POLE_FLAG: f64 = 1e6;

/// Default maximum walk length for counting tables.
pub const DEFAULT_COUNT_N: usize = 60;

/// Default group-order iteration cap.
pub const DEFAULT_MAX_ORDER: usize = 100;

/// Chordal-metric tolerance for group-orbit return detection.
pub const GROUP_RETURN_TOL: f64 = 1e-9;

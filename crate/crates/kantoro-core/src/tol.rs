//! Central numeric tolerances.
//!
//! Every comparison in the crate routes through these constants so that a
//! tolerance change is a one-line edit, not a scavenger hunt.

/// Total mass of a probability vector may deviate from 1 by this much.
pub const TAU_MASS: f64 = 1e-9;

/// Row/column sums of a transport plan may deviate from the prescribed
/// marginals by this much.
pub const TAU_MARG: f64 = 1e-9;

/// Metric certification: diagonal, symmetry and triangle checks use this.
/// Distances assembled from f64 coordinates are exact to ~1e-15, so 1e-12
/// leaves three orders of headroom without masking real violations.
pub const TAU_METRIC: f64 = 1e-12;

/// Objective values from two exact solvers must agree to this.
pub const TAU_OBJ: f64 = 1e-9;

/// Primal-dual gap at a certified optimum.
pub const TAU_GAP: f64 = 1e-9;

/// Plan entries above this count as support when checking tightness of a
/// potential; entries below are pivot debris.
pub const TAU_SUPPORT: f64 = 1e-12;

/// Reduced-cost threshold inside the simplex solvers. This is a pivoting
/// tolerance, not a user-facing one.
pub const TAU_PIVOT: f64 = 1e-12;

/// A strict inequality `x < eps` is realized as `x <= eps - STRICT_MARGIN`.
pub const STRICT_MARGIN: f64 = 1e-12;

/// Triangle inequality is checked exhaustively up to this many points;
/// larger spaces are spot-checked on a deterministic sample of triples.
pub const TRIANGLE_EXHAUSTIVE_MAX: usize = 128;

//! Transport distances between finite measures, and the structures built
//! from them.
//!
//! The center of the crate is [`transport::solve_mk`]: the least total cost
//! of moving one distribution onto another, solved as a small linear
//! program together with its dual certificate. Around it:
//!
//! - [`line`] — closed-form distance and monotone rearrangement for
//!   measures on `[0, 1]`.
//! - [`krnorm`] — the induced norm on zero-charge signed measures, with an
//!   independent dual solver as a cross-check.
//! - [`assignment`] — permutation matching; agrees with the relaxed
//!   problem on uniform empirical measures.
//! - [`matdist`] — distance matrices sampled from a law, their empirical
//!   transport estimates, and convergence experiments.
//! - [`dbar`] — stationary-chain comparison over growing horizons, and a
//!   discretization entropy under a transport tolerance.
//! - [`tower`] — nested partitions with iterated quotient metrics.
//!
//! Shared vocabulary lives in [`measures`] (distributions, signed measures,
//! cost spaces, plans, dual potentials), [`matrix`], [`sampling`]
//! (deterministic seed-indexed draws), and [`tol`] (every tolerance used
//! anywhere, with rationale).

#![forbid(unsafe_code)]

pub mod assignment;
pub mod dbar;
pub mod error;
pub mod krnorm;
pub mod line;
pub mod matdist;
pub mod matrix;
pub mod measures;
pub mod sampling;
mod simplex;
pub mod tol;
pub mod tower;
pub mod transport;

pub use assignment::{solve_assignment, strong_mk_empirical, Assignment};
pub use dbar::{
    conditional_future, dbar_criterion, epsilon_entropy, hamming_cost, secondary_entropy_curve,
    word_count, EpsilonEntropy, FutureDistribution, MarkovChain, WORD_CAP,
};
pub use error::{Error, Result};
pub use krnorm::{kr_norm, lipschitz_dual, LipschitzDual};
pub use line::{k1_line, line_costs, quantile_map, LineDistribution, QuantilePair};
pub use matdist::{
    k_n_estimate, ks_statistic, nested_fragment_estimates, rescaled_uniform_triple,
    run_convergence, sample_matrix, shifted_matrix, square_law_triple, two_point_triple,
    uniform01_triple, ConvergenceReport, MatrixSample, ShiftMap,
};
pub use matrix::Matrix;
pub use measures::{
    empirical_distribution, jordan_decompose, validate_metric, CostSpace, DualPotential,
    FiniteDistribution, MetricReport, MetricViolation, SampledTriple, SignedMeasure,
    TransportPlan,
};
pub use tower::{
    barycenter_project, dyadic_iid_tree, level_space, quotient_step, quotient_steps,
    tower_profile, tower_statistic, LevelMetricSpace, PartitionTree, QuotientStep,
};
pub use transport::{
    duality_gap, solve_kp, solve_mk, verify_optimal, MkCost, OptimalityReport, TransportSolution,
};

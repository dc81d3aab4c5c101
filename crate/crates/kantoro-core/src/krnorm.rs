//! The transport norm of a zero-charge signed measure, computed two ways.
//!
//! `kr_norm` splits the measure into positive and negative parts and ships
//! one onto the other with the transportation solver. `lipschitz_dual`
//! maximizes Σ u_i m_i over 1-Lipschitz potentials by solving the
//! transshipment LP in `simplex` — a separate algorithm on a separate
//! formulation, so the two agreeing is evidence, not tautology.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{jordan_decompose, CostSpace, DualPotential, FiniteDistribution, SignedMeasure};
use crate::simplex::solve_transshipment;
use crate::transport::solve_mk;

fn check_inputs(m: &SignedMeasure, cost: &CostSpace) -> Result<()> {
    if m.len() != cost.size() {
        return Err(Error::DimensionMismatch { expected: cost.size(), actual: m.len() });
    }
    if !cost.is_metric() {
        return Err(Error::NotMetric { reason: "transport norm needs a metric cost".into() });
    }
    m.ensure_zero_charge()
}

/// ‖m‖ as the transport cost between the Jordan parts of `m`.
pub fn kr_norm(m: &SignedMeasure, cost: &CostSpace) -> Result<f64> {
    check_inputs(m, cost)?;
    let (pos, neg, mass) = jordan_decompose(m);
    if mass == 0.0 {
        return Ok(0.0);
    }
    let mu = FiniteDistribution::new(pos.iter().map(|w| w / mass).collect())?;
    let nu = FiniteDistribution::new(neg.iter().map(|w| w / mass).collect())?;
    let sol = solve_mk(cost, &mu, &nu)?;
    Ok(sol.value * mass)
}

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzDual {
    pub value: f64,
    pub witness: DualPotential,
    pub iterations: usize,
}

/// max Σ u_i m_i over potentials with u_i - u_j <= cost_ij, witness included.
///
/// The witness is normalized to u_0 = 0, which costs nothing because the
/// constraint set and the zero-charge objective are both shift-invariant.
pub fn lipschitz_dual(m: &SignedMeasure, cost: &CostSpace) -> Result<LipschitzDual> {
    check_inputs(m, cost)?;
    let lp = solve_transshipment(cost.costs(), &m.weights)?;
    let witness = DualPotential::new(lp.node_potentials).normalize_at_zero();
    let value: f64 = witness
        .values
        .iter()
        .zip(&m.weights)
        .map(|(u, w)| u * w)
        .sum();
    // The witness must reproduce the shipping cost exactly (strong duality);
    // a gap here means the basis or the recovered potentials are wrong.
    debug_assert!(
        (value - lp.value).abs() <= crate::tol::TAU_OBJ * (1.0 + lp.value.abs()),
        "dual value {} drifted from shipping cost {}",
        value,
        lp.value
    );
    Ok(LipschitzDual { value, witness, iterations: lp.iterations })
}

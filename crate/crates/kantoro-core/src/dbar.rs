//! Process distances for finite-state Markov chains.
//!
//! A stationary chain is observed through its conditional futures: the law
//! of the next n symbols given the current state. Averaging the transport
//! distance (under the normalized Hamming cost on words) between the futures
//! of two independently drawn pasts gives `dbar_criterion`; chains whose
//! value decays in the horizon behave like independent processes, while a
//! deterministic rotation keeps the value bounded away from zero.
//!
//! `epsilon_entropy` is the smallest entropy among discrete measures within
//! transport distance ε of a given one, searched over a bounded but
//! exhaustively enumerated family (see the notes on `epsilon_entropy`);
//! `secondary_entropy_curve` applies it to the law of the conditional-future
//! map itself, with ground distances that are themselves transport values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::{CostSpace, FiniteDistribution};
use crate::tol;
use crate::transport::solve_mk;

/// Enumeration cap: never materialize more than this many words (the
/// induced transport instances are cap × cap).
pub const WORD_CAP: usize = 4096;

/// Number of enumerated words s^n, guarded by `WORD_CAP`.
pub fn word_count(states: usize, horizon: usize) -> Result<usize> {
    let n = u32::try_from(horizon)
        .map_err(|_| Error::ResourceCap { reason: format!("horizon {horizon} is absurdly large") })?;
    match states.checked_pow(n) {
        Some(m) if m <= WORD_CAP => Ok(m),
        _ => Err(Error::ResourceCap {
            reason: format!("{states}^{horizon} words exceed the cap of {WORD_CAP}"),
        }),
    }
}

/// A stationary finite-state Markov chain. The stationary distribution is
/// verified when supplied and computed from the transition matrix when not.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovChain {
    states: usize,
    transition: Matrix,
    stationary: FiniteDistribution,
}

impl MarkovChain {
    pub fn new(transition: Matrix, stationary: Option<FiniteDistribution>) -> Result<Self> {
        if transition.rows() != transition.cols() {
            return Err(Error::NonSquare { rows: transition.rows(), cols: transition.cols() });
        }
        let s = transition.rows();
        if s == 0 {
            return Err(Error::EmptySupport);
        }
        transition.ensure_finite()?;
        for i in 0..s {
            let row = transition.row(i);
            if let Some(j) = row.iter().position(|&p| p < 0.0) {
                return Err(Error::invalid(format!("transition[{i}][{j}] is negative")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol::TAU_MASS {
                return Err(Error::invalid(format!("transition row {i} sums to {sum}")));
            }
        }
        let stationary = match stationary {
            Some(pi) => {
                if pi.len() != s {
                    return Err(Error::DimensionMismatch { expected: s, actual: pi.len() });
                }
                verify_stationary(&transition, &pi)?;
                pi
            }
            None => solve_stationary(&transition)?,
        };
        Ok(MarkovChain { states: s, transition, stationary })
    }

    /// The i.i.d. chain emitting `q` regardless of state.
    pub fn iid(q: &FiniteDistribution) -> Result<Self> {
        let s = q.len();
        let transition = Matrix::from_fn(s, s, |_, j| q.weight(j));
        MarkovChain::new(transition, Some(q.clone()))
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    pub fn stationary(&self) -> &FiniteDistribution {
        &self.stationary
    }
}

fn verify_stationary(transition: &Matrix, pi: &FiniteDistribution) -> Result<()> {
    let s = transition.rows();
    for b in 0..s {
        let mut acc = 0.0;
        for a in 0..s {
            acc += pi.weight(a) * transition.get(a, b);
        }
        let residual = (acc - pi.weight(b)).abs();
        if residual > tol::TAU_MASS {
            return Err(Error::invalid(format!(
                "measure is not stationary: residual {residual:e} at state {b}"
            )));
        }
    }
    Ok(())
}

/// Solve pi·P = pi, Σ pi = 1 by replacing one balance equation (they are
/// linearly dependent) with the normalization row.
fn solve_stationary(transition: &Matrix) -> Result<FiniteDistribution> {
    let s = transition.rows();
    let mut a = Matrix::zeros(s, s);
    let mut b = vec![0.0; s];
    for eq in 0..s - 1 {
        for col in 0..s {
            let mut v = transition.get(col, eq);
            if col == eq {
                v -= 1.0;
            }
            a.set(eq, col, v);
        }
    }
    for col in 0..s {
        a.set(s - 1, col, 1.0);
    }
    b[s - 1] = 1.0;
    let mut pi = crate::matrix::solve_linear(&a, &b).map_err(|_| Error::Singular {
        reason: "stationary system is singular (chain may be reducible); supply the stationary \
                 distribution explicitly"
            .into(),
    })?;
    for w in &mut pi {
        // The solve can leave harmless negative dust on transient states.
        if *w < 0.0 {
            if *w < -tol::TAU_MASS {
                return Err(Error::Singular {
                    reason: format!("stationary solve produced negative mass {w}"),
                });
            }
            *w = 0.0;
        }
    }
    let total: f64 = pi.iter().sum();
    if total != 1.0 {
        for w in &mut pi {
            *w /= total;
        }
    }
    let pi = FiniteDistribution::new(pi)?;
    let transition_check = verify_stationary(transition, &pi);
    transition_check.map(|_| pi)
}

/// The law of the next `horizon` symbols from a fixed current state, as a
/// distribution over lexicographically enumerated words (first symbol most
/// significant).
#[derive(Debug, Clone, Serialize)]
pub struct FutureDistribution {
    pub horizon: usize,
    pub weights: FiniteDistribution,
}

pub fn conditional_future(chain: &MarkovChain, state: usize, horizon: usize) -> Result<FutureDistribution> {
    if horizon == 0 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    if state >= chain.states {
        return Err(Error::BadPosition { index: state });
    }
    let s = chain.states;
    let m = word_count(s, horizon)?;
    let mut weights = Vec::with_capacity(m);
    for w in 0..m {
        let mut p = 1.0;
        let mut prev = state;
        let mut rest = w;
        let mut scale = m / s;
        for _ in 0..horizon {
            let symbol = rest / scale;
            rest %= scale;
            scale = (scale / s).max(1);
            p *= chain.transition.get(prev, symbol);
            prev = symbol;
        }
        weights.push(p);
    }
    // Row sums are 1 only to tolerance, and the drift compounds across the
    // horizon; rescale, exactly preserving already-exact inputs (x / 1.0 = x).
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 64.0 * tol::TAU_MASS {
        return Err(Error::invalid(format!("future mass drifted to {total}")));
    }
    if total != 1.0 {
        for w in &mut weights {
            *w /= total;
        }
    }
    Ok(FutureDistribution { horizon, weights: FiniteDistribution::new(weights)? })
}

/// Normalized Hamming cost on the s^n enumerated words: the fraction of
/// coordinates where two words disagree.
pub fn hamming_cost(horizon: usize, states: usize) -> Result<CostSpace> {
    if horizon == 0 {
        return Err(Error::domain("horizon must be at least 1"));
    }
    if states == 0 {
        return Err(Error::EmptySupport);
    }
    let m = word_count(states, horizon)?;
    // Digit tables make the m² distance fills branch-light.
    let mut digits = vec![0u16; m * horizon];
    for w in 0..m {
        let mut rest = w;
        for k in (0..horizon).rev() {
            digits[w * horizon + k] = (rest % states) as u16;
            rest /= states;
        }
    }
    let inv = 1.0 / horizon as f64;
    let matrix = Matrix::from_fn(m, m, |i, j| {
        let (a, b) = (&digits[i * horizon..(i + 1) * horizon], &digits[j * horizon..(j + 1) * horizon]);
        let mismatches = a.iter().zip(b).filter(|(x, y)| x != y).count();
        mismatches as f64 * inv
    });
    let space = CostSpace::new(matrix)?;
    debug_assert!(space.is_metric());
    Ok(space)
}

/// Average transport distance between the conditional futures of two
/// independently drawn current states:
/// Σ_{a,b} pi_a pi_b k_hamming(future_a, future_b).
pub fn dbar_criterion(chain: &MarkovChain, horizon: usize) -> Result<f64> {
    let space = hamming_cost(horizon, chain.states)?;
    let mut futures = Vec::with_capacity(chain.states);
    for state in 0..chain.states {
        futures.push(conditional_future(chain, state, horizon)?);
    }
    let pi = chain.stationary();
    let mut value = 0.0;
    for a in 0..chain.states {
        for b in a + 1..chain.states {
            let mass = pi.weight(a) * pi.weight(b);
            if mass == 0.0 {
                continue;
            }
            let k = solve_mk(&space, &futures[a].weights, &futures[b].weights)?.value;
            // The distance is symmetric, so each unordered pair counts twice.
            value += 2.0 * mass * k;
        }
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Epsilon-entropy.

/// Entropy-minimizing measure within transport distance ε, over the searched
/// family. `upper_bound` is always true: the search family — measures on at
/// most [`MAX_SUPPORT`] of ν's own support points with gridded weights — is
/// exhausted, but the true infimum ranges over all discrete measures, so the
/// result certifies only an upper bound.
#[derive(Debug, Clone, Serialize)]
pub struct EpsilonEntropy {
    pub value: f64,
    pub achieving: FiniteDistribution,
    pub upper_bound: bool,
}

/// Largest candidate support size the search enumerates.
pub const MAX_SUPPORT: usize = 4;

/// Weight grids per support size. Size 2 uses the fine 1e-3 grid; larger
/// supports use coarser grids to keep the enumeration exhaustive yet finite.
const GRID_2: usize = 1000;
const GRID_3: usize = 100;
const GRID_4: usize = 50;

/// Cap on enumerated candidates; sizes whose full enumeration would blow
/// past it are dropped wholesale (never truncated mid-size), keeping the
/// searched family well-defined and deterministic.
const CANDIDATE_BUDGET: usize = 500_000;

fn entropy_of(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| -w * w.ln())
        .sum()
}

/// All positive integer compositions of `total` into `parts` parts, emitted
/// as weight vectors divided by `total` and paired with their entropy.
fn gridded_weights(total: usize, parts: usize) -> Vec<(f64, Vec<f64>)> {
    let mut out = Vec::new();
    let mut current = vec![0usize; parts];
    fn recurse(
        total_left: usize,
        slot: usize,
        current: &mut Vec<usize>,
        total: usize,
        out: &mut Vec<(f64, Vec<f64>)>,
    ) {
        let parts = current.len();
        if slot == parts - 1 {
            current[slot] = total_left;
            let w: Vec<f64> = current.iter().map(|&c| c as f64 / total as f64).collect();
            out.push((entropy_of(&w), w));
            return;
        }
        let reserve = parts - slot - 1; // at least 1 unit per remaining slot
        for c in 1..=total_left - reserve {
            current[slot] = c;
            recurse(total_left - c, slot + 1, current, total, out);
        }
    }
    recurse(total, 0, &mut current, total, &mut out);
    // Ascending entropy so the search can stop scanning a support's weight
    // list as soon as entropies reach the incumbent.
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite entropies"));
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Smallest entropy among searched measures l with transport distance to
/// `nu` strictly below `eps` (implemented as ≤ eps − 1e−12). `nu` itself is
/// always feasible, so the search cannot come back empty and the value never
/// exceeds H(nu).
pub fn epsilon_entropy(nu: &FiniteDistribution, cost: &CostSpace, eps: f64) -> Result<EpsilonEntropy> {
    if nu.len() != cost.size() {
        return Err(Error::DimensionMismatch { expected: cost.size(), actual: nu.len() });
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    let n = nu.len();
    let threshold = eps - tol::STRICT_MARGIN;

    let mut best_value = entropy_of(nu.weights());
    let mut best_measure = nu.clone();

    let feasible = |l: &FiniteDistribution| -> Result<bool> {
        Ok(solve_mk(cost, l, nu)?.value <= threshold)
    };

    // Singletons: H = 0, so the first feasible atom is globally optimal.
    if best_value > 0.0 {
        for i in 0..n {
            let mut w = vec![0.0; n];
            w[i] = 1.0;
            let l = FiniteDistribution::new(w)?;
            if feasible(&l)? {
                return Ok(EpsilonEntropy { value: 0.0, achieving: l, upper_bound: true });
            }
        }
    }

    // Larger supports, whole sizes only, within the candidate budget.
    let mut budget = CANDIDATE_BUDGET;
    let sizes: [(usize, usize, usize); 3] = [
        (2, GRID_2, GRID_2 - 1),
        (3, GRID_3, binomial(GRID_3 - 1, 2)),
        (4, GRID_4, binomial(GRID_4 - 1, 3)),
    ];
    for &(size, grid_total, grid_len) in &sizes {
        if size > n {
            break;
        }
        let combos = binomial(n, size).saturating_mul(grid_len);
        if combos > budget {
            break;
        }
        budget -= combos;
        let grid = gridded_weights(grid_total, size);

        let mut support = vec![0usize; size];
        enumerate_supports(n, size, &mut support, 0, 0, &mut |support| -> Result<()> {
            for (h, weights) in &grid {
                if *h >= best_value {
                    break;
                }
                let mut w = vec![0.0; n];
                for (slot, &point) in support.iter().enumerate() {
                    w[point] = weights[slot];
                }
                let l = FiniteDistribution::new(w)?;
                if feasible(&l)? {
                    best_value = *h;
                    best_measure = l;
                    break;
                }
            }
            Ok(())
        })?;
    }

    Ok(EpsilonEntropy { value: best_value, achieving: best_measure, upper_bound: true })
}

/// Lexicographic enumeration of all ascending index tuples of length `size`
/// from 0..n, calling `visit` on each.
fn enumerate_supports(
    n: usize,
    size: usize,
    support: &mut Vec<usize>,
    slot: usize,
    start: usize,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if slot == size {
        return visit(support);
    }
    for i in start..=n - (size - slot) {
        support[slot] = i;
        enumerate_supports(n, size, support, slot + 1, i + 1, visit)?;
    }
    Ok(())
}

/// Epsilon-entropy of the law of the conditional-future map, per horizon.
///
/// The measure lives on the chain's states, one support point per state's
/// future; ground distances between support points are transport distances
/// under the Hamming cost.
pub fn secondary_entropy_curve(
    chain: &MarkovChain,
    horizons: &[usize],
    eps: f64,
) -> Result<Vec<(usize, f64)>> {
    if horizons.is_empty() {
        return Err(Error::domain("need at least one horizon"));
    }
    let s = chain.states;
    let mut out = Vec::with_capacity(horizons.len());
    for &n in horizons {
        let space = hamming_cost(n, s)?;
        let mut futures = Vec::with_capacity(s);
        for state in 0..s {
            futures.push(conditional_future(chain, state, n)?);
        }
        let mut ground = Matrix::zeros(s, s);
        for a in 0..s {
            for b in a + 1..s {
                let k = solve_mk(&space, &futures[a].weights, &futures[b].weights)?.value;
                ground.set(a, b, k);
                ground.set(b, a, k);
            }
        }
        // Transport distances between distributions form a (pseudo)metric;
        // certification should never fail beyond floating-point dust.
        let ground_space = CostSpace::new(ground)?;
        let measure = chain.stationary().clone();
        let h = epsilon_entropy(&measure, &ground_space, eps)?;
        out.push((n, h.value));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn flip_chain() -> MarkovChain {
        let t = Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        MarkovChain::new(t, None).unwrap()
    }

    fn lazy_chain(stay: f64) -> MarkovChain {
        let t = Matrix::from_rows(vec![vec![stay, 1.0 - stay], vec![1.0 - stay, stay]]).unwrap();
        MarkovChain::new(t, None).unwrap()
    }

    #[test]
    fn stationary_of_flip_chain_is_uniform() {
        let chain = flip_chain();
        assert_relative_eq!(chain.stationary().weight(0), 0.5, epsilon = 1e-12);
        assert_relative_eq!(chain.stationary().weight(1), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_transition_rows() {
        let t = Matrix::from_rows(vec![vec![0.5, 0.6], vec![0.5, 0.5]]).unwrap();
        assert!(MarkovChain::new(t, None).is_err());
        let neg = Matrix::from_rows(vec![vec![1.5, -0.5], vec![0.5, 0.5]]).unwrap();
        assert!(MarkovChain::new(neg, None).is_err());
    }

    #[test]
    fn rejects_non_stationary_measure() {
        let t = Matrix::from_rows(vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let pi = FiniteDistribution::new(vec![0.9, 0.1]).unwrap();
        assert!(MarkovChain::new(t, Some(pi)).is_err());
    }

    #[test]
    fn identity_chain_needs_explicit_stationary() {
        let t = Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(MarkovChain::new(t.clone(), None), Err(Error::Singular { .. })));
        let pi = FiniteDistribution::new(vec![0.25, 0.75]).unwrap();
        assert!(MarkovChain::new(t, Some(pi)).is_ok());
    }

    #[test]
    fn hamming_examples() {
        let space = hamming_cost(1, 2).unwrap();
        assert_eq!(space.costs().to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);

        let space3 = hamming_cost(3, 2).unwrap();
        // words 010 (index 2) and 011 (index 3) differ in one of three slots
        assert_relative_eq!(space3.cost(2, 3), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(space3.cost(5, 5), 0.0);
        assert!(space3.is_metric());
    }

    #[test]
    fn hamming_cap_is_enforced() {
        assert!(hamming_cost(7, 3).is_ok()); // 3^7 = 2187
        assert!(matches!(hamming_cost(8, 3), Err(Error::ResourceCap { .. }))); // 6561
        assert!(matches!(hamming_cost(13, 2), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn iid_futures_are_products_and_state_free() {
        let q = FiniteDistribution::new(vec![0.3, 0.7]).unwrap();
        let chain = MarkovChain::iid(&q).unwrap();
        let f0 = conditional_future(&chain, 0, 2).unwrap();
        let f1 = conditional_future(&chain, 1, 2).unwrap();
        assert_eq!(f0.weights.weights(), f1.weights.weights());
        // lexicographic order 00, 01, 10, 11
        assert_relative_eq!(f0.weights.weight(0), 0.09, epsilon = 1e-12);
        assert_relative_eq!(f0.weights.weight(1), 0.21, epsilon = 1e-12);
        assert_relative_eq!(f0.weights.weight(2), 0.21, epsilon = 1e-12);
        assert_relative_eq!(f0.weights.weight(3), 0.49, epsilon = 1e-12);
    }

    #[test]
    fn flip_future_is_deterministic() {
        let chain = flip_chain();
        let f = conditional_future(&chain, 0, 3).unwrap();
        // From state 0 the path is forced: 1, 0, 1 — word index 101₂ = 5.
        for (w, &weight) in f.weights.weights().iter().enumerate() {
            assert_eq!(weight, if w == 5 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn lazy_futures_are_transition_products() {
        let chain = lazy_chain(0.9);
        let f = conditional_future(&chain, 0, 2).unwrap();
        // over (00, 01, 10, 11): .9·.9, .9·.1, .1·.1, .1·.9
        assert_relative_eq!(f.weights.weight(0), 0.81, epsilon = 1e-12);
        assert_relative_eq!(f.weights.weight(1), 0.09, epsilon = 1e-12);
        assert_relative_eq!(f.weights.weight(2), 0.01, epsilon = 1e-12);
        assert_relative_eq!(f.weights.weight(3), 0.09, epsilon = 1e-12);
    }

    #[test]
    fn dbar_of_iid_chain_is_exactly_zero() {
        let q = FiniteDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let chain = MarkovChain::iid(&q).unwrap();
        for n in 1..=4 {
            assert_eq!(dbar_criterion(&chain, n).unwrap(), 0.0);
        }
    }

    #[test]
    fn dbar_of_flip_chain_at_even_horizons() {
        let chain = flip_chain();
        assert_relative_eq!(dbar_criterion(&chain, 2).unwrap(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(dbar_criterion(&chain, 4).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn dbar_of_lazy_chain_matches_the_coalescing_value() {
        // Both futures' t-step marginals differ by 0.8^t in total variation,
        // and a coupling that coalesces at rate 0.2 per step attains the
        // bound coordinate-wise, so d̄(n) = (1/2n) Σ_{t≤n} 0.8^t.
        let chain = lazy_chain(0.9);
        for n in 1..=3 {
            let expect: f64 =
                (1..=n).map(|t| 0.8f64.powi(t as i32)).sum::<f64>() / (2.0 * n as f64);
            assert_relative_eq!(dbar_criterion(&chain, n).unwrap(), expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn entropy_search_basics() {
        let space = hamming_cost(1, 2).unwrap();
        let nu = FiniteDistribution::new(vec![0.5, 0.5]).unwrap();
        // Any single atom is at distance 0.5; eps above that admits H = 0.
        let wide = epsilon_entropy(&nu, &space, 0.6).unwrap();
        assert_eq!(wide.value, 0.0);
        assert_eq!(wide.achieving.support().len(), 1);
        // Tiny eps pins the measure to nu itself.
        let tight = epsilon_entropy(&nu, &space, 1e-6).unwrap();
        assert_relative_eq!(tight.value, std::f64::consts::LN_2, epsilon = 1e-12);
        assert!(tight.upper_bound);
    }

    #[test]
    fn entropy_grid_finds_the_shaded_pair() {
        let space = hamming_cost(1, 2).unwrap();
        let nu = FiniteDistribution::new(vec![0.5, 0.5]).unwrap();
        // Feasibility means |w - 1/2| < 1/4, so the grid's extreme feasible
        // point is w = 0.251 and the minimum entropy is H(0.251, 0.749).
        let got = epsilon_entropy(&nu, &space, 0.25).unwrap();
        let expect = entropy_of(&[0.251, 0.749]);
        assert_relative_eq!(got.value, expect, epsilon = 1e-12);
    }

    #[test]
    fn entropy_is_monotone_in_eps_and_bounded() {
        let space = hamming_cost(2, 2).unwrap();
        let nu = FiniteDistribution::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let h_nu = entropy_of(nu.weights());
        let mut last = f64::INFINITY;
        for eps in [0.01, 0.05, 0.1, 0.2, 0.4, 0.8] {
            let h = epsilon_entropy(&nu, &space, eps).unwrap().value;
            assert!(h <= h_nu + 1e-12);
            assert!(h <= last + 1e-12, "entropy rose from {last} to {h} at eps={eps}");
            last = h;
        }
    }

    #[test]
    fn secondary_curve_of_iid_chain_is_zero() {
        let q = FiniteDistribution::new(vec![0.3, 0.7]).unwrap();
        let chain = MarkovChain::iid(&q).unwrap();
        let curve = secondary_entropy_curve(&chain, &[1, 2, 3], 0.1).unwrap();
        assert!(curve.iter().all(|&(_, v)| v == 0.0));
    }

    #[test]
    fn secondary_curve_of_flip_chain_is_constant() {
        // The two futures are point masses at complementary words, ground
        // distance exactly 1; the law is (1/2, 1/2) at every horizon, so the
        // curve is constant: the entropy of the extreme feasible shading
        // (0.401, 0.599) at eps = 0.1.
        let chain = flip_chain();
        let curve = secondary_entropy_curve(&chain, &[1, 2, 3], 0.1).unwrap();
        let expect = entropy_of(&[0.401, 0.599]);
        for &(_, v) in &curve {
            assert_relative_eq!(v, expect, epsilon = 1e-12);
        }
    }
}

//! Exact solver for the finite transportation problem.
//!
//! `solve_mk` runs a transportation simplex: a northwest-corner start, then
//! tree pivots with most-negative-reduced-cost entering arcs, falling back to
//! Bland's rule if degenerate pivoting ever stalls. The returned solution
//! carries the primal plan, the LP row/column duals, and — when the cost is a
//! certified metric — a Lipschitz-1 potential obtained by conjugating the
//! column duals, which certifies optimality in the sense of `verify_optimal`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::{CostSpace, DualPotential, FiniteDistribution, TransportPlan};
use crate::tol;

/// Cost input for `solve_mk`: a certified square space or a bare matrix
/// (rectangular allowed, no metric assumptions).
#[derive(Clone, Copy)]
pub enum MkCost<'a> {
    Space(&'a CostSpace),
    Matrix(&'a Matrix),
}

impl<'a> From<&'a CostSpace> for MkCost<'a> {
    fn from(space: &'a CostSpace) -> Self {
        MkCost::Space(space)
    }
}

impl<'a> From<&'a Matrix> for MkCost<'a> {
    fn from(matrix: &'a Matrix) -> Self {
        MkCost::Matrix(matrix)
    }
}

impl<'a> MkCost<'a> {
    fn matrix(&self) -> &'a Matrix {
        match self {
            MkCost::Space(s) => s.costs(),
            MkCost::Matrix(m) => m,
        }
    }

    fn is_metric(&self) -> bool {
        matches!(self, MkCost::Space(s) if s.is_metric())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportSolution {
    pub plan: TransportPlan,
    pub value: f64,
    /// Lipschitz-1 potential; present when the cost was a certified metric.
    pub potential: Option<DualPotential>,
    /// LP duals of the row (source) and column (target) constraints.
    pub row_duals: Vec<f64>,
    pub col_duals: Vec<f64>,
    pub iterations: usize,
}

impl TransportSolution {
    /// LP dual objective Σ u_i mu_i + Σ v_j nu_j; equals `value` at optimum
    /// for any cost matrix, metric or not.
    pub fn lp_dual_value(&self) -> f64 {
        let mu = self.plan.source().weights();
        let nu = self.plan.target().weights();
        let u: f64 = self.row_duals.iter().zip(mu).map(|(d, w)| d * w).sum();
        let v: f64 = self.col_duals.iter().zip(nu).map(|(d, w)| d * w).sum();
        u + v
    }
}

/// Primal value minus the potential's dual objective. Solutions without a
/// potential are scored against the zero potential, which is feasible for
/// any nonnegative cost.
pub fn duality_gap(sol: &TransportSolution, mu: &FiniteDistribution, nu: &FiniteDistribution) -> f64 {
    let dual = match &sol.potential {
        Some(p) => p.objective(mu, nu),
        None => 0.0,
    };
    sol.value - dual
}

/// Minimize Σ plan_ij cost_ij over couplings of (mu, nu).
pub fn solve_mk<'a>(
    cost: impl Into<MkCost<'a>>,
    mu: &FiniteDistribution,
    nu: &FiniteDistribution,
) -> Result<TransportSolution> {
    let cost = cost.into();
    let matrix = cost.matrix();
    if matrix.rows() != mu.len() {
        return Err(Error::DimensionMismatch { expected: mu.len(), actual: matrix.rows() });
    }
    if matrix.cols() != nu.len() {
        return Err(Error::DimensionMismatch { expected: nu.len(), actual: matrix.cols() });
    }
    matrix.ensure_finite()?;

    let mut simplex = Simplex::new(matrix, mu.weights(), nu.weights());
    let iterations = simplex.run()?;
    let (entries, row_duals, col_duals) = simplex.into_parts();

    let mut value = 0.0;
    for i in 0..entries.rows() {
        for j in 0..entries.cols() {
            let mass = entries.get(i, j);
            if mass != 0.0 {
                value += mass * matrix.get(i, j);
            }
        }
    }

    let potential = if cost.is_metric() && mu.len() == nu.len() {
        Some(conjugate_potential(matrix, &col_duals).normalize_at_zero())
    } else {
        None
    };

    let plan = TransportPlan::new(entries, mu.clone(), nu.clone())?;
    Ok(TransportSolution { plan, value, potential, row_duals, col_duals, iterations })
}

/// Turn LP column duals into a Lipschitz-1 potential on a metric space:
/// u_i = min_j (cost_ij - v_j). The triangle inequality makes u 1-Lipschitz,
/// and at the LP optimum the conjugate pair (u, -u) attains the same dual
/// objective, so u certifies the optimal value.
fn conjugate_potential(costs: &Matrix, col_duals: &[f64]) -> DualPotential {
    let n = costs.rows();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let row = costs.row(i);
        let mut best = f64::INFINITY;
        for (j, &v) in col_duals.iter().enumerate() {
            let cand = row[j] - v;
            if cand < best {
                best = cand;
            }
        }
        values.push(best);
    }
    DualPotential::new(values)
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimalityReport {
    pub optimal: bool,
    pub violations: Vec<String>,
}

/// Certificate audit on a solver output: the potential must be Lipschitz-1
/// feasible everywhere and tight (u_i - u_j = cost_ij) on every plan entry
/// carrying mass above `TAU_SUPPORT`.
pub fn verify_optimal(sol: &TransportSolution, cost: &CostSpace) -> Result<OptimalityReport> {
    if !cost.is_metric() {
        return Err(Error::NotMetric { reason: "optimality certificate requires a metric cost".into() });
    }
    let entries = sol.plan.entries();
    if entries.rows() != cost.size() || entries.cols() != cost.size() {
        return Err(Error::DimensionMismatch { expected: cost.size(), actual: entries.rows() });
    }
    // Re-check feasibility rather than trusting the embedded marginals.
    TransportPlan::new(entries.clone(), sol.plan.source().clone(), sol.plan.target().clone())
        .map_err(|e| Error::InfeasiblePlan { reason: e.to_string() })?;

    let mut violations = Vec::new();
    let potential = match &sol.potential {
        Some(p) => p,
        None => {
            return Ok(OptimalityReport {
                optimal: false,
                violations: vec!["solution carries no potential".into()],
            })
        }
    };
    if potential.len() != cost.size() {
        return Err(Error::DimensionMismatch { expected: cost.size(), actual: potential.len() });
    }
    for (i, j, excess) in potential.feasibility_violations(cost.costs(), tol::TAU_GAP) {
        violations.push(format!("potential not 1-Lipschitz at ({i}, {j}): excess {excess:e}"));
    }
    for i in 0..entries.rows() {
        for j in 0..entries.cols() {
            if entries.get(i, j) > tol::TAU_SUPPORT {
                let slack = cost.cost(i, j) - (potential.values[i] - potential.values[j]);
                if slack.abs() > tol::TAU_GAP {
                    violations.push(format!(
                        "potential not tight on support entry ({i}, {j}): slack {slack:e}"
                    ));
                }
            }
        }
    }
    Ok(OptimalityReport { optimal: violations.is_empty(), violations })
}

/// [min_L Σ cost^p L]^(1/p); the analog of an L_p norm on couplings.
pub fn solve_kp(
    cost: &CostSpace,
    mu: &FiniteDistribution,
    nu: &FiniteDistribution,
    p: f64,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p must be >= 1, got {p}")));
    }
    if p == 1.0 {
        return Ok(solve_mk(cost, mu, nu)?.value);
    }
    let powered = cost.costs().map(|c| c.powf(p));
    let sol = solve_mk(&powered, mu, nu)?;
    Ok(sol.value.powf(1.0 / p))
}

// ---------------------------------------------------------------------------
// Transportation simplex internals. Node ids: row i is node i, column j is
// node n + j.

struct Simplex<'a> {
    n: usize,
    m: usize,
    cost: &'a Matrix,
    supply: Vec<f64>,
    demand: Vec<f64>,
    // Basis cells (spanning tree of the bipartite node set) and their flows.
    basis: Vec<(usize, usize)>,
    flow: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl<'a> Simplex<'a> {
    fn new(cost: &'a Matrix, supply: &[f64], demand: &[f64]) -> Self {
        Simplex {
            n: supply.len(),
            m: demand.len(),
            cost,
            supply: supply.to_vec(),
            demand: demand.to_vec(),
            basis: Vec::new(),
            flow: Vec::new(),
            u: vec![0.0; supply.len()],
            v: vec![0.0; demand.len()],
        }
    }

    /// Northwest-corner start: exactly n + m - 1 basic cells forming a
    /// staircase spanning tree, degenerate zero cells included.
    fn northwest_corner(&mut self) {
        let (n, m) = (self.n, self.m);
        let mut ra = self.supply.clone();
        let mut rb = self.demand.clone();
        let (mut i, mut j) = (0usize, 0usize);
        for _ in 0..n + m - 1 {
            // Exhaust the row when it is the binding constraint (or the
            // staircase has hit the last column), else exhaust the column.
            // Exactly one index advances per step, so the walk lays down
            // n + m - 1 cells forming a spanning tree, zero cells included.
            if (ra[i] <= rb[j] && i < n - 1) || j == m - 1 {
                let x = ra[i].max(0.0);
                self.basis.push((i, j));
                self.flow.push(x);
                rb[j] -= x;
                ra[i] = 0.0;
                i += 1;
            } else {
                let x = rb[j].max(0.0);
                self.basis.push((i, j));
                self.flow.push(x);
                ra[i] -= x;
                rb[j] = 0.0;
                j += 1;
            }
        }
    }

    /// Recompute duals from the basis tree: u_i + v_j = cost_ij on basic
    /// cells, rooted at u_0 = 0.
    fn compute_duals(&mut self) {
        let (n, m) = (self.n, self.m);
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
        for (k, &(i, j)) in self.basis.iter().enumerate() {
            adj[i].push(k);
            adj[n + j].push(k);
        }
        let mut known = vec![false; n + m];
        let mut stack = vec![0usize];
        self.u[0] = 0.0;
        known[0] = true;
        while let Some(node) = stack.pop() {
            for &k in &adj[node] {
                let (i, j) = self.basis[k];
                let (ri, cj) = (i, n + j);
                if known[ri] && !known[cj] {
                    self.v[j] = self.cost.get(i, j) - self.u[i];
                    known[cj] = true;
                    stack.push(cj);
                } else if known[cj] && !known[ri] {
                    self.u[i] = self.cost.get(i, j) - self.v[j];
                    known[ri] = true;
                    stack.push(ri);
                }
            }
        }
        debug_assert!(known.iter().all(|&k| k), "basis is not a spanning tree");
    }

    /// Most negative reduced cost (Dantzig) or first negative (Bland).
    fn entering(&self, bland: bool) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_rc = -tol::TAU_PIVOT;
        for i in 0..self.n {
            let row = self.cost.row(i);
            let ui = self.u[i];
            for j in 0..self.m {
                let rc = row[j] - ui - self.v[j];
                if rc < best_rc {
                    if bland {
                        return Some((i, j));
                    }
                    best_rc = rc;
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Unique tree path from row node `i` to column node `j`, as basis-cell
    /// indexes in path order.
    fn tree_path(&self, i: usize, j: usize) -> Vec<usize> {
        let (n, m) = (self.n, self.m);
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
        for (k, &(bi, bj)) in self.basis.iter().enumerate() {
            adj[bi].push(k);
            adj[n + bj].push(k);
        }
        let start = i;
        let goal = n + j;
        let mut parent_edge: Vec<Option<usize>> = vec![None; n + m];
        let mut parent_node: Vec<usize> = vec![usize::MAX; n + m];
        let mut seen = vec![false; n + m];
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(node) = queue.pop_front() {
            if node == goal {
                break;
            }
            for &k in &adj[node] {
                let (bi, bj) = self.basis[k];
                let other = if node == bi { n + bj } else { bi };
                if !seen[other] {
                    seen[other] = true;
                    parent_edge[other] = Some(k);
                    parent_node[other] = node;
                    queue.push_back(other);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = goal;
        while node != start {
            let k = parent_edge[node].expect("path exists in spanning tree");
            path.push(k);
            node = parent_node[node];
        }
        path.reverse();
        path
    }

    fn pivot(&mut self, enter: (usize, usize)) {
        let path = self.tree_path(enter.0, enter.1);
        // Signs alternate around the cycle starting with + on the entering
        // cell; path edges walked from the entering row start at -.
        let mut theta = f64::INFINITY;
        let mut leave_pos = usize::MAX;
        for (step, &k) in path.iter().enumerate() {
            if step % 2 == 0 {
                let f = self.flow[k];
                if f < theta || (f == theta && (leave_pos == usize::MAX || self.basis[k] < self.basis[leave_pos])) {
                    theta = f;
                    leave_pos = k;
                }
            }
        }
        debug_assert!(leave_pos != usize::MAX);
        let theta = theta.max(0.0);
        for (step, &k) in path.iter().enumerate() {
            if step % 2 == 0 {
                self.flow[k] -= theta;
                if self.flow[k] < 0.0 {
                    debug_assert!(self.flow[k] > -1e-9, "flow went negative: {}", self.flow[k]);
                    self.flow[k] = 0.0;
                }
            } else {
                self.flow[k] += theta;
            }
        }
        self.flow[leave_pos] = 0.0;
        self.basis[leave_pos] = enter;
        self.flow[leave_pos] = theta;
    }

    fn run(&mut self) -> Result<usize> {
        self.northwest_corner();
        let dantzig_budget = 1000 + 60 * (self.n + self.m);
        let bland_budget = 400_000 + 400 * (self.n + self.m);
        let mut pivots = 0usize;
        loop {
            self.compute_duals();
            let bland = pivots >= dantzig_budget;
            match self.entering(bland) {
                None => return Ok(pivots),
                Some(cell) => {
                    self.pivot(cell);
                    pivots += 1;
                    if pivots > bland_budget {
                        return Err(Error::SolverStall { pivots });
                    }
                }
            }
        }
    }

    fn into_parts(self) -> (Matrix, Vec<f64>, Vec<f64>) {
        let mut entries = Matrix::zeros(self.n, self.m);
        for (k, &(i, j)) in self.basis.iter().enumerate() {
            let f = self.flow[k];
            if f != 0.0 {
                entries.set(i, j, entries.get(i, j) + f);
            }
        }
        (entries, self.u, self.v)
    }
}

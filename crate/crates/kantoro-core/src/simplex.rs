//! Dense tableau simplex for the single-commodity transshipment problem
//!
//!   minimize Σ cost_ij f_ij   subject to   Σ_j f_ij - Σ_j f_ji = net_i,  f >= 0
//!
//! over all ordered pairs i != j. One node balance is redundant (net sums to
//! zero), so node 0's row is dropped; its dual is pinned at 0 and the
//! remaining duals come out of the final cost row. The star arcs through
//! node 0 give a signed-identity starting basis, so no phase-1 is needed.
//!
//! This is deliberately a plain dense LP rather than a network code: it
//! serves as an independently-derived counterpart to the transportation
//! simplex in `transport`, so agreement between the two is a meaningful
//! cross-check rather than the same algorithm answering twice.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::tol;

pub(crate) struct TransshipmentSolution {
    pub value: f64,
    /// Node potentials u with u[0] = 0; feasible for u_i - u_j <= cost_ij.
    pub node_potentials: Vec<f64>,
    pub iterations: usize,
}

pub(crate) fn solve_transshipment(costs: &Matrix, net: &[f64]) -> Result<TransshipmentSolution> {
    let n = net.len();
    if costs.rows() != n || costs.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: costs.rows() });
    }
    if n == 1 {
        return Ok(TransshipmentSolution { value: 0.0, node_potentials: vec![0.0], iterations: 0 });
    }

    // Arc a = (i, j), i != j, in row-major order.
    let mut arcs = Vec::with_capacity(n * (n - 1));
    let mut arc_cost = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                arcs.push((i, j));
                arc_cost.push(costs.get(i, j));
            }
        }
    }
    let n_arcs = arcs.len();
    let rows = n - 1; // constraint row r <-> node r + 1

    let arc_index = |i: usize, j: usize| -> usize {
        // Offset within row i of the (i, j) arc list, skipping the diagonal.
        i * (n - 1) + j - usize::from(j > i)
    };

    // Starting basis: node i's star arc through node 0, oriented to make the
    // basic flow |net_i| nonnegative. The basis matrix is diag(sign), so the
    // initial tableau is the constraint matrix with rows sign-flipped.
    let mut basis = Vec::with_capacity(rows);
    let mut sign = Vec::with_capacity(rows);
    for node in 1..n {
        if net[node] >= 0.0 {
            basis.push(arc_index(node, 0));
            sign.push(1.0);
        } else {
            basis.push(arc_index(0, node));
            sign.push(-1.0);
        }
    }

    // Tableau T = B^-1 A and rhs = B^-1 b, stored dense.
    let mut tableau = vec![vec![0.0f64; n_arcs]; rows];
    let mut rhs = vec![0.0f64; rows];
    for r in 0..rows {
        let node = r + 1;
        for (a, &(i, j)) in arcs.iter().enumerate() {
            let mut coeff = 0.0;
            if i == node {
                coeff += 1.0;
            }
            if j == node {
                coeff -= 1.0;
            }
            tableau[r][a] = sign[r] * coeff;
        }
        rhs[r] = sign[r] * net[node];
        rhs[r] = rhs[r].max(0.0);
    }

    // Reduced costs c - c_B^T B^-1 A, updated in place by every pivot.
    let mut reduced = arc_cost.clone();
    for r in 0..rows {
        let cb = arc_cost[basis[r]];
        if cb != 0.0 {
            for a in 0..n_arcs {
                reduced[a] -= cb * tableau[r][a];
            }
        }
    }

    let dantzig_budget = 2000 + 40 * n;
    let bland_budget = 500_000;
    let mut pivots = 0usize;
    loop {
        let bland = pivots >= dantzig_budget;
        let mut enter = usize::MAX;
        let mut best = -tol::TAU_PIVOT;
        for a in 0..n_arcs {
            if reduced[a] < best {
                enter = a;
                if bland {
                    break;
                }
                best = reduced[a];
            }
        }
        if enter == usize::MAX {
            break;
        }

        // Ratio test; ties resolved toward the smallest basic arc index so
        // the Bland fallback is genuinely anti-cycling.
        let mut leave = usize::MAX;
        let mut theta = f64::INFINITY;
        for r in 0..rows {
            let t = tableau[r][enter];
            if t > 1e-11 {
                let ratio = rhs[r] / t;
                if ratio < theta - 1e-15 || (ratio <= theta + 1e-15 && (leave == usize::MAX || basis[r] < basis[leave])) {
                    theta = ratio;
                    leave = r;
                }
            }
        }
        if leave == usize::MAX {
            // Nonnegative costs bound the objective, so a truly increasing
            // ray cannot exist; reaching this means the tableau degraded.
            return Err(Error::Singular { reason: "transshipment column with no positive pivot".into() });
        }

        let piv = tableau[leave][enter];
        let inv = 1.0 / piv;
        for a in 0..n_arcs {
            tableau[leave][a] *= inv;
        }
        rhs[leave] *= inv;
        for r in 0..rows {
            if r != leave {
                let f = tableau[r][enter];
                if f != 0.0 {
                    for a in 0..n_arcs {
                        tableau[r][a] -= f * tableau[leave][a];
                    }
                    rhs[r] -= f * rhs[leave];
                    if rhs[r] < 0.0 {
                        rhs[r] = 0.0;
                    }
                }
            }
        }
        let f = reduced[enter];
        if f != 0.0 {
            for a in 0..n_arcs {
                reduced[a] -= f * tableau[leave][a];
            }
        }
        basis[leave] = enter;

        pivots += 1;
        if pivots > bland_budget {
            return Err(Error::SolverStall { pivots });
        }
    }

    let mut value = 0.0;
    for r in 0..rows {
        value += arc_cost[basis[r]] * rhs[r];
    }

    // Node duals from the star arcs: their final reduced cost is
    // c_star - sign * y_node, and y_0 is pinned at 0 by the dropped row.
    let mut potentials = vec![0.0f64; n];
    for node in 1..n {
        let (a, s) = if net[node] >= 0.0 {
            (arc_index(node, 0), 1.0)
        } else {
            (arc_index(0, node), -1.0)
        };
        potentials[node] = s * (arc_cost[a] - reduced[a]);
    }

    Ok(TransshipmentSolution { value, node_potentials: potentials, iterations: pivots })
}

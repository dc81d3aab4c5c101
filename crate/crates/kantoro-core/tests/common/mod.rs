//! Independent oracles and instance generators shared by the integration
//! tests. Everything here deliberately avoids the library's solver paths:
//! transport by polytope-vertex enumeration, assignment by permutation
//! sweep, towers by the closed-form two-point coupling.

#![allow(dead_code)]

use itertools::Itertools;
use kantoro_core::Matrix;
use rand::Rng;

/// Minimum transport cost by enumerating basic feasible solutions: every
/// vertex of the transport polytope is supported on a spanning tree of the
/// bipartite supply/demand graph, i.e. on rows+cols-1 cells. Exhaustive and
/// solver-free; usable up to roughly 4x4.
pub fn transport_vertex_minimum(cost: &Matrix, mu: &[f64], nu: &[f64]) -> f64 {
    let n = mu.len();
    let m = nu.len();
    assert_eq!(cost.rows(), n);
    assert_eq!(cost.cols(), m);
    let cells: Vec<(usize, usize)> = (0..n).cartesian_product(0..m).collect();
    let mut best = f64::INFINITY;
    for subset in cells.iter().copied().combinations(n + m - 1) {
        if let Some(value) = tree_flow_cost(cost, mu, nu, &subset) {
            best = best.min(value);
        }
    }
    best
}

/// Solve the flow forced by a candidate spanning tree by peeling leaves.
/// Returns the cost if the subset is a tree carrying nonnegative flow that
/// meets both marginals, and None otherwise.
fn tree_flow_cost(cost: &Matrix, mu: &[f64], nu: &[f64], subset: &[(usize, usize)]) -> Option<f64> {
    let n = mu.len();
    let m = nu.len();
    let nodes = n + m;
    let mut degree = vec![0usize; nodes];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (e, &(i, j)) in subset.iter().enumerate() {
        degree[i] += 1;
        degree[n + j] += 1;
        incident[i].push(e);
        incident[n + j].push(e);
    }
    let mut residual: Vec<f64> = mu.iter().chain(nu.iter()).copied().collect();
    let mut done = vec![false; subset.len()];
    let mut total = 0.0;
    let mut leaves: Vec<usize> = (0..nodes).filter(|&v| degree[v] == 1).collect();
    let mut processed = 0;
    while let Some(v) = leaves.pop() {
        if degree[v] != 1 {
            continue;
        }
        let &e = incident[v].iter().find(|&&e| !done[e]).expect("degree says one open edge");
        let (i, j) = subset[e];
        let flow = residual[v];
        if flow < -1e-12 {
            return None;
        }
        total += flow * cost.get(i, j);
        for &node in &[i, n + j] {
            residual[node] -= flow;
            degree[node] -= 1;
            if degree[node] == 1 {
                leaves.push(node);
            }
        }
        done[e] = true;
        processed += 1;
    }
    if processed < subset.len() {
        return None; // a cycle survived the peeling
    }
    if residual.iter().any(|r| r.abs() > 1e-9) {
        return None; // disconnected or inconsistent
    }
    Some(total)
}

/// Cheapest permutation by exhaustive sweep; usable up to roughly 8x8.
pub fn assignment_minimum(cost: &Matrix) -> f64 {
    let n = cost.rows();
    assert_eq!(n, cost.cols());
    (0..n)
        .permutations(n)
        .map(|p| p.iter().enumerate().map(|(i, &j)| cost.get(i, j)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Iterated quotient metrics for the equal-mass dyadic suffix tree, by the
/// closed form for coupling two half-half conditionals: pair the members
/// one way or the other, whichever is cheaper. Returns the metric matrix at
/// every level, starting from the base.
pub fn dyadic_tower_metrics(base: &Matrix, depth: usize) -> Vec<Matrix> {
    assert_eq!(base.rows(), 1 << depth);
    let mut metrics = vec![base.clone()];
    let mut current = base.clone();
    for level in 0..depth {
        let half = 1 << (depth - level - 1); // classes after this merge
        let next = Matrix::from_fn(half, half, |s, u| {
            let straight = current.get(s, u) + current.get(s + half, u + half);
            let crossed = current.get(s, u + half) + current.get(s + half, u);
            0.5 * straight.min(crossed)
        });
        metrics.push(next.clone());
        current = next;
    }
    metrics
}

/// Mean pairwise distance under uniform masses.
pub fn uniform_mean_pairwise(metric: &Matrix) -> f64 {
    let n = metric.rows();
    let w = 1.0 / n as f64;
    let mut acc = 0.0;
    for a in 0..n {
        for b in 0..n {
            acc += w * w * metric.get(a, b);
        }
    }
    acc
}

/// Random points in the unit square with their Euclidean distance matrix —
/// a certified metric for any point set.
pub fn euclidean_instance<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    Matrix::from_fn(n, n, |i, j| {
        let (xi, yi) = points[i];
        let (xj, yj) = points[j];
        ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt()
    })
}

/// Random metric by shortest-path closure of a random symmetric cost table.
/// Produces non-geometric metrics with plenty of tight triangles.
pub fn path_closure_instance<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let c = 0.05 + rng.gen::<f64>();
            d.set(i, j, c);
            d.set(j, i, c);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d.get(i, k) + d.get(k, j);
                if via < d.get(i, j) {
                    d.set(i, j, via);
                }
            }
        }
    }
    d
}

/// Random probability vector with strictly positive entries.
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

//! Exact minimum-cost assignment and the empirical matching distance.
//!
//! The solver is the O(n³) Hungarian method in its shortest-augmenting-path
//! form: rows are inserted one at a time, each insertion growing an
//! alternating tree of tight arcs under dual potentials (u, v) until a free
//! column is reached, then augmenting along the recorded path.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Serialize)]
pub struct Assignment {
    /// permutation[i] is the column assigned to row i.
    pub permutation: Vec<usize>,
    pub value: f64,
}

/// Minimize Σ_i cost(i, σ(i)) over permutations σ.
pub fn solve_assignment(cost: &Matrix) -> Result<Assignment> {
    if cost.rows() != cost.cols() {
        return Err(Error::NonSquare { rows: cost.rows(), cols: cost.cols() });
    }
    let n = cost.rows();
    if n == 0 {
        return Err(Error::EmptySupport);
    }
    cost.ensure_finite()?;

    // 1-based arrays; index 0 is the virtual unmatched column.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched = vec![0usize; n + 1]; // matched[j] = row occupying column j
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost.get(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            // Grow the duals by the bottleneck slack; tight arcs stay tight.
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        // Augment: walk the alternating path back to the root.
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut permutation = vec![0usize; n];
    for j in 1..=n {
        permutation[matched[j] - 1] = j - 1;
    }
    let value = permutation
        .iter()
        .enumerate()
        .map(|(i, &j)| cost.get(i, j))
        .sum();
    Ok(Assignment { permutation, value })
}

/// Empirical matching distance between equal-size samples: the optimal
/// one-to-one pairing cost averaged over the n points. For uniform empirical
/// marginals this equals the transport optimum — the LP attains its minimum
/// at a permutation vertex of the bistochastic polytope.
pub fn strong_mk_empirical<T>(xs: &[T], ys: &[T], metric: impl Fn(&T, &T) -> f64) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), actual: ys.len() });
    }
    if xs.is_empty() {
        return Err(Error::EmptySupport);
    }
    let n = xs.len();
    let cost = Matrix::from_fn(n, n, |i, j| metric(&xs[i], &ys[j]));
    let assignment = solve_assignment(&cost)?;
    Ok(assignment.value / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use itertools::Itertools;

    fn brute_force(cost: &Matrix) -> f64 {
        let n = cost.rows();
        (0..n)
            .permutations(n)
            .map(|p| p.iter().enumerate().map(|(i, &j)| cost.get(i, j)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn zero_diagonal_picks_identity() {
        let cost = Matrix::from_rows(vec![
            vec![0.0, 5.0, 5.0],
            vec![5.0, 0.0, 5.0],
            vec![5.0, 5.0, 0.0],
        ])
        .unwrap();
        let a = solve_assignment(&cost).unwrap();
        assert_eq!(a.permutation, vec![0, 1, 2]);
        assert_eq!(a.value, 0.0);
    }

    #[test]
    fn one_by_one() {
        let cost = Matrix::from_rows(vec![vec![3.5]]).unwrap();
        let a = solve_assignment(&cost).unwrap();
        assert_eq!(a.permutation, vec![0]);
        assert_relative_eq!(a.value, 3.5, epsilon = 1e-15);
    }

    #[test]
    fn matches_exhaustive_search() {
        let cost = Matrix::from_rows(vec![
            vec![4.0, 1.0, 3.0, 2.0],
            vec![2.0, 0.0, 5.0, 3.0],
            vec![3.0, 2.0, 2.0, 1.0],
            vec![1.0, 3.0, 4.0, 4.0],
        ])
        .unwrap();
        let a = solve_assignment(&cost).unwrap();
        assert_relative_eq!(a.value, brute_force(&cost), epsilon = 1e-12);
        let recomputed: f64 = a
            .permutation
            .iter()
            .enumerate()
            .map(|(i, &j)| cost.get(i, j))
            .sum();
        assert_relative_eq!(a.value, recomputed, epsilon = 1e-12);
    }

    #[test]
    fn permutation_is_a_bijection() {
        let cost = Matrix::from_rows(vec![
            vec![0.2, 0.9, 0.4],
            vec![0.8, 0.1, 0.7],
            vec![0.3, 0.6, 0.5],
        ])
        .unwrap();
        let a = solve_assignment(&cost).unwrap();
        let mut seen = a.permutation.clone();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2]);
    }

    #[test]
    fn row_and_column_shifts_change_value_predictably() {
        let cost = Matrix::from_rows(vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ])
        .unwrap();
        let base = solve_assignment(&cost).unwrap();
        // Adding a constant to one full row shifts every permutation's cost
        // by that constant, so the argmin is unchanged.
        let mut shifted = cost.clone();
        for j in 0..3 {
            shifted.set(1, j, shifted.get(1, j) + 7.25);
        }
        let a = solve_assignment(&shifted).unwrap();
        assert_relative_eq!(a.value, base.value + 7.25, epsilon = 1e-12);
        assert_relative_eq!(a.value, brute_force(&shifted), epsilon = 1e-12);
    }

    #[test]
    fn rejects_non_square() {
        let cost = Matrix::from_rows(vec![vec![1.0, 2.0]]).unwrap();
        assert!(matches!(solve_assignment(&cost), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn empirical_distance_examples() {
        let xs = [0.1, 0.5, 0.9];
        let metric = |a: &f64, b: &f64| (a - b).abs();
        assert_eq!(strong_mk_empirical(&xs, &xs, metric).unwrap(), 0.0);

        let singleton = strong_mk_empirical(&[0.2], &[0.7], metric).unwrap();
        assert_relative_eq!(singleton, 0.5, epsilon = 1e-15);

        assert!(strong_mk_empirical(&xs, &xs[..2], metric).is_err());
    }
}

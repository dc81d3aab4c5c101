//! Distributions on the unit interval and the closed-form distance between
//! them: the L1 distance of their distribution functions, evaluated exactly
//! by piecewise-constant integration over the merged breakpoint grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measures::FiniteDistribution;

/// An atomic probability distribution on [0, 1] with strictly increasing
/// support positions. Construction merges exact duplicate positions by
/// summing their weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LineDistribution {
    positions: Vec<f64>,
    weights: FiniteDistribution,
}

impl LineDistribution {
    pub fn new(positions: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if positions.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: positions.len(),
                actual: weights.len(),
            });
        }
        if positions.is_empty() {
            return Err(Error::EmptySupport);
        }
        for (idx, &x) in positions.iter().enumerate() {
            if !x.is_finite() || !(0.0..=1.0).contains(&x) {
                return Err(Error::BadPosition { index: idx });
            }
        }
        let mut merged_pos: Vec<f64> = Vec::with_capacity(positions.len());
        let mut merged_w: Vec<f64> = Vec::with_capacity(positions.len());
        for (idx, (&x, &w)) in positions.iter().zip(&weights).enumerate() {
            match merged_pos.last() {
                Some(&prev) if x == prev => *merged_w.last_mut().unwrap() += w,
                Some(&prev) if x < prev => {
                    return Err(Error::domain(format!(
                        "positions must be nondecreasing; position {idx} ({x}) follows {prev}"
                    )))
                }
                _ => {
                    merged_pos.push(x);
                    merged_w.push(w);
                }
            }
        }
        let weights = FiniteDistribution::new(merged_w)?;
        Ok(LineDistribution { positions: merged_pos, weights })
    }

    pub fn delta(x: f64) -> Result<Self> {
        LineDistribution::new(vec![x], vec![1.0])
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn weights(&self) -> &FiniteDistribution {
        &self.weights
    }

    /// Smallest support position whose cumulative weight reaches `u`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !u.is_finite() || !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!("quantile level must lie in [0, 1], got {u}")));
        }
        let mut acc = 0.0;
        for (idx, &x) in self.positions.iter().enumerate() {
            acc += self.weights.weight(idx);
            if acc >= u {
                return Ok(x);
            }
        }
        // Cumulative mass can fall short of u by the mass tolerance.
        Ok(*self.positions.last().expect("nonempty support"))
    }

    /// Shift every position by `delta`; errors if the support leaves [0, 1].
    pub fn translate(&self, delta: f64) -> Result<Self> {
        let positions: Vec<f64> = self.positions.iter().map(|&x| x + delta).collect();
        LineDistribution::new(positions, self.weights.weights().to_vec())
    }
}

/// ∫ |F_a(t) - F_b(t)| dt, the transport distance for the cost |x - y|.
pub fn k1_line(a: &LineDistribution, b: &LineDistribution) -> f64 {
    // Sweep the merged breakpoint grid; between consecutive breakpoints both
    // distribution functions are constant.
    let mut grid: Vec<f64> = a.positions.iter().chain(b.positions.iter()).copied().collect();
    grid.sort_by(|x, y| x.partial_cmp(y).expect("positions are finite"));
    grid.dedup();

    let mut total = 0.0;
    let (mut fa, mut fb) = (0.0, 0.0);
    let (mut ia, mut ib) = (0usize, 0usize);
    for w in grid.windows(2) {
        let (t, t_next) = (w[0], w[1]);
        while ia < a.len() && a.positions[ia] <= t {
            fa += a.weights.weight(ia);
            ia += 1;
        }
        while ib < b.len() && b.positions[ib] <= t {
            fb += b.weights.weight(ib);
            ib += 1;
        }
        total += (fa - fb).abs() * (t_next - t);
    }
    total
}

/// One matched slab of the monotone rearrangement: `mass` moved from the
/// source position `from` to the target position `to`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantilePair {
    pub from: f64,
    pub to: f64,
    pub mass: f64,
}

/// Pair the two distributions quantile-by-quantile. The result pushes `a`'s
/// weights onto `b`'s support: masses on each `from` position sum to `a`'s
/// weight there, and likewise for `to` and `b`.
pub fn quantile_map(a: &LineDistribution, b: &LineDistribution) -> Vec<QuantilePair> {
    let mut pairs = Vec::new();
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut ra = a.weights.weight(0);
    let mut rb = b.weights.weight(0);
    while ia < a.len() && ib < b.len() {
        let mass = ra.min(rb);
        if mass > 0.0 {
            pairs.push(QuantilePair { from: a.positions[ia], to: b.positions[ib], mass });
        }
        ra -= mass;
        rb -= mass;
        // On exact ties advance both sides so zero-mass slabs are not emitted.
        if ra <= 0.0 {
            ia += 1;
            if ia < a.len() {
                ra = a.weights.weight(ia);
            }
        }
        if rb <= 0.0 {
            ib += 1;
            if ib < b.len() {
                rb = b.weights.weight(ib);
            }
        }
    }
    pairs
}

/// The |x - y| cost matrix between two line supports, for routing a pair of
/// LineDistributions through the general solver.
pub fn line_costs(a: &LineDistribution, b: &LineDistribution) -> Matrix {
    Matrix::from_fn(a.len(), b.len(), |i, j| (a.positions[i] - b.positions[j]).abs())
}

//! Deterministic instance builders for the benchmarks: point clouds with
//! Euclidean costs, random marginals, and line distributions, all seeded.

use kantoro_core::{CostSpace, FiniteDistribution, LineDistribution, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn euclidean_space(seed: u64, n: usize) -> CostSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let costs = Matrix::from_fn(n, n, |i, j| {
        let (xi, yi) = points[i];
        let (xj, yj) = points[j];
        ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt()
    });
    CostSpace::new(costs).expect("euclidean costs are metric")
}

pub fn random_cost(seed: u64, n: usize) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(n, n, |_, _| rng.gen())
}

pub fn random_weights(seed: u64, n: usize) -> FiniteDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    FiniteDistribution::new(raw.into_iter().map(|w| w / total).collect()).unwrap()
}

pub fn random_line(seed: u64, atoms: usize) -> LineDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<f64> = (0..atoms).map(|_| rng.gen()).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    let n = xs.len();
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    LineDistribution::new(xs, raw.into_iter().map(|w| w / total).collect()).unwrap()
}

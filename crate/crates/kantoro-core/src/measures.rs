//! Shared domain types: distributions, signed measures, cost spaces,
//! transport plans, dual potentials, and sampled triples.
//!
//! Everything is immutable after construction and indexed densely by
//! 0..n-1; labels are decorative. Validation happens in constructors so the
//! solvers can assume well-formed inputs.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sampling::unit_draw;
use crate::tol;

/// Probability vector over an indexed support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteDistribution {
    weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl FiniteDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySupport);
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::invalid(format!("weight {i} is not finite")));
            }
            if w < 0.0 {
                return Err(Error::invalid(format!("weight {i} is negative ({w:e})")));
            }
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > tol::TAU_MASS {
            return Err(Error::invalid(format!("total mass {mass} is not 1 within {:e}", tol::TAU_MASS)));
        }
        Ok(FiniteDistribution { weights, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Point mass at `index`.
    pub fn delta(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::DimensionMismatch { expected: n, actual: index });
        }
        let mut weights = vec![0.0; n];
        weights[index] = 1.0;
        FiniteDistribution::new(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Indices carrying strictly positive mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.weights[i] > 0.0).collect()
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| -w * w.ln())
            .sum()
    }
}

/// Uniform weights 1/n over an n-point support.
pub fn empirical_distribution(n: usize) -> Result<FiniteDistribution> {
    if n == 0 {
        return Err(Error::EmptySupport);
    }
    FiniteDistribution::new(vec![1.0 / n as f64; n])
}

/// Signed mass vector; inputs to the KR norm must carry zero total charge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedMeasure {
    pub weights: Vec<f64>,
}

impl SignedMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySupport);
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::invalid(format!("weight {i} is not finite")));
        }
        Ok(SignedMeasure { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn charge(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn ensure_zero_charge(&self) -> Result<()> {
        let charge = self.charge();
        if charge.abs() > tol::TAU_MASS {
            return Err(Error::NonzeroCharge { charge });
        }
        Ok(())
    }
}

/// Hahn–Jordan split into positive and negative parts.
///
/// `mass` is the total positive variation; for zero-charge inputs it equals
/// the negative one.
pub fn jordan_decompose(m: &SignedMeasure) -> (Vec<f64>, Vec<f64>, f64) {
    let pos: Vec<f64> = m.weights.iter().map(|&w| w.max(0.0)).collect();
    let neg: Vec<f64> = m.weights.iter().map(|&w| (-w).max(0.0)).collect();
    let mass = pos.iter().sum();
    (pos, neg, mass)
}

/// A single failed metric axiom, with enough context to locate it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MetricViolation {
    Negative { i: usize, j: usize, value: f64 },
    Diagonal { i: usize, value: f64 },
    Asymmetry { i: usize, j: usize, delta: f64 },
    Triangle { i: usize, j: usize, via: usize, excess: f64 },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::Negative { i, j, value } => {
                write!(f, "negative entry {value:e} at ({i}, {j})")
            }
            MetricViolation::Diagonal { i, value } => {
                write!(f, "nonzero diagonal {value:e} at {i}")
            }
            MetricViolation::Asymmetry { i, j, delta } => {
                write!(f, "asymmetry |c[{i}][{j}] - c[{j}][{i}]| = {delta:e}")
            }
            MetricViolation::Triangle { i, j, via, excess } => {
                write!(f, "triangle violation c[{i}][{j}] > c[{i}][{via}] + c[{via}][{j}] by {excess:e}")
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub violations: Vec<MetricViolation>,
    /// Whether the triangle inequality was checked on all triples or on a
    /// deterministic sample (spaces larger than `TRIANGLE_EXHAUSTIVE_MAX`).
    pub exhaustive: bool,
}

impl MetricReport {
    pub fn is_metric(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check zero diagonal, symmetry, and the triangle inequality within
/// `TAU_METRIC`. Spaces up to `TRIANGLE_EXHAUSTIVE_MAX` points get all n³
/// triples; larger ones get a seeded sample of 32·n² triples, capped at two
/// million so validation never dominates the work it is guarding.
pub fn validate_metric(costs: &Matrix) -> Result<MetricReport> {
    if !costs.is_square() {
        return Err(Error::NonSquare { rows: costs.rows(), cols: costs.cols() });
    }
    costs.ensure_finite()?;
    let n = costs.rows();
    let mut violations = Vec::new();
    for i in 0..n {
        let d = costs.get(i, i);
        if d.abs() > tol::TAU_METRIC {
            violations.push(MetricViolation::Diagonal { i, value: d });
        }
        for j in 0..n {
            let c = costs.get(i, j);
            if c < 0.0 {
                violations.push(MetricViolation::Negative { i, j, value: c });
            }
            if j > i {
                let delta = (c - costs.get(j, i)).abs();
                if delta > tol::TAU_METRIC {
                    violations.push(MetricViolation::Asymmetry { i, j, delta });
                }
            }
        }
    }
    let exhaustive = n <= tol::TRIANGLE_EXHAUSTIVE_MAX;
    let check_triple = |i: usize, j: usize, k: usize, violations: &mut Vec<MetricViolation>| {
        let excess = costs.get(i, j) - costs.get(i, k) - costs.get(k, j);
        if excess > tol::TAU_METRIC {
            violations.push(MetricViolation::Triangle { i, j, via: k, excess });
        }
    };
    if exhaustive {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    check_triple(i, j, k, &mut violations);
                }
            }
        }
    } else {
        // Deterministic sample; enough to catch systematic violations in
        // large generated spaces without cubic cost.
        let samples = (32 * n * n).min(2_000_000);
        for s in 0..samples as u64 {
            let i = (unit_draw(0x7472_6961, 3 * s) * n as f64) as usize % n;
            let j = (unit_draw(0x7472_6961, 3 * s + 1) * n as f64) as usize % n;
            let k = (unit_draw(0x7472_6961, 3 * s + 2) * n as f64) as usize % n;
            check_triple(i, j, k, &mut violations);
        }
    }
    Ok(MetricReport { violations, exhaustive })
}

/// Square nonnegative cost matrix, optionally carrying a metric certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostSpace {
    costs: Matrix,
    is_metric: bool,
}

impl CostSpace {
    /// Build and certify: the metric flag is set by `validate_metric`.
    pub fn new(costs: Matrix) -> Result<Self> {
        if !costs.is_square() {
            return Err(Error::NonSquare { rows: costs.rows(), cols: costs.cols() });
        }
        costs.ensure_finite()?;
        if let Some(bad) = (0..costs.rows())
            .flat_map(|i| (0..costs.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| costs.get(i, j) < 0.0)
        {
            return Err(Error::invalid(format!("negative cost at {bad:?}")));
        }
        let report = validate_metric(&costs)?;
        Ok(CostSpace { costs, is_metric: report.is_metric() })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        CostSpace::new(Matrix::from_rows(rows)?)
    }

    pub fn size(&self) -> usize {
        self.costs.rows()
    }

    pub fn costs(&self) -> &Matrix {
        &self.costs
    }

    pub fn is_metric(&self) -> bool {
        self.is_metric
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.costs.get(i, j)
    }
}

/// Coupling matrix with prescribed marginals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    entries: Matrix,
    source: FiniteDistribution,
    target: FiniteDistribution,
}

impl TransportPlan {
    pub fn new(entries: Matrix, source: FiniteDistribution, target: FiniteDistribution) -> Result<Self> {
        if entries.rows() != source.len() {
            return Err(Error::DimensionMismatch { expected: source.len(), actual: entries.rows() });
        }
        if entries.cols() != target.len() {
            return Err(Error::DimensionMismatch { expected: target.len(), actual: entries.cols() });
        }
        entries.ensure_finite()?;
        for i in 0..entries.rows() {
            for j in 0..entries.cols() {
                if entries.get(i, j) < 0.0 {
                    return Err(Error::InfeasiblePlan {
                        reason: format!("negative mass {:e} at ({i}, {j})", entries.get(i, j)),
                    });
                }
            }
        }
        for (i, (&sum, &want)) in entries.row_sums().iter().zip(source.weights()).enumerate() {
            if (sum - want).abs() > tol::TAU_MARG {
                return Err(Error::InfeasiblePlan {
                    reason: format!("row {i} sums to {sum}, marginal is {want}"),
                });
            }
        }
        for (j, (&sum, &want)) in entries.col_sums().iter().zip(target.weights()).enumerate() {
            if (sum - want).abs() > tol::TAU_MARG {
                return Err(Error::InfeasiblePlan {
                    reason: format!("column {j} sums to {sum}, marginal is {want}"),
                });
            }
        }
        Ok(TransportPlan { entries, source, target })
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn source(&self) -> &FiniteDistribution {
        &self.source
    }

    pub fn target(&self) -> &FiniteDistribution {
        &self.target
    }

    /// Transport cost of this plan under the given costs.
    pub fn cost_against(&self, costs: &Matrix) -> Result<f64> {
        if costs.rows() != self.entries.rows() || costs.cols() != self.entries.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.entries.rows() * self.entries.cols(),
                actual: costs.rows() * costs.cols(),
            });
        }
        let mut total = 0.0;
        for i in 0..self.entries.rows() {
            for j in 0..self.entries.cols() {
                let mass = self.entries.get(i, j);
                if mass != 0.0 {
                    total += mass * costs.get(i, j);
                }
            }
        }
        Ok(total)
    }
}

/// Lipschitz-1 potential, defined up to an additive constant; normalize with
/// `normalize_at_zero` for deterministic output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPotential {
    pub values: Vec<f64>,
}

impl DualPotential {
    pub fn new(values: Vec<f64>) -> Self {
        DualPotential { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Shift so the first value is exactly 0.
    pub fn normalize_at_zero(mut self) -> Self {
        if let Some(&first) = self.values.first() {
            for v in &mut self.values {
                *v -= first;
            }
            if let Some(v) = self.values.first_mut() {
                *v = 0.0;
            }
        }
        self
    }

    /// All (i, j) with values_i - values_j > cost_ij + tol.
    pub fn feasibility_violations(&self, costs: &Matrix, tol: f64) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.values.len() {
            for j in 0..self.values.len() {
                let excess = self.values[i] - self.values[j] - costs.get(i, j);
                if excess > tol {
                    out.push((i, j, excess));
                }
            }
        }
        out
    }

    pub fn is_feasible(&self, costs: &Matrix, tol: f64) -> bool {
        self.feasibility_violations(costs, tol).is_empty()
    }

    /// Dual objective Σ values_i (mu_i - nu_i).
    pub fn objective(&self, mu: &FiniteDistribution, nu: &FiniteDistribution) -> f64 {
        self.values
            .iter()
            .zip(mu.weights().iter().zip(nu.weights()))
            .map(|(u, (&a, &b))| u * (a - b))
            .sum()
    }
}

pub type SamplerFn = dyn Fn(u64, u64) -> f64 + Send + Sync;
pub type MetricFn = dyn Fn(f64, f64) -> f64 + Send + Sync;
pub type RealFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Empirical stand-in for a metric triple (X, rho, mu): a deterministic
/// point sampler plus a metric evaluator.
///
/// The sampler is a pure function of (seed, draw index); see `sampling`.
/// `cdf`/`quantile` are present for laws on the real line that know their
/// distribution function; they unlock closed-form references and
/// measure-preserving maps. `unit_line` marks triples supported in [0, 1]
/// whose metric is |x - y|, the case with an exact 1D reference value.
#[derive(Clone)]
pub struct SampledTriple {
    pub sampler: Arc<SamplerFn>,
    pub metric: Arc<MetricFn>,
    pub description: String,
    pub metric_certified: bool,
    pub cdf: Option<Arc<RealFn>>,
    pub quantile: Option<Arc<RealFn>>,
    pub unit_line: bool,
}

impl fmt::Debug for SampledTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledTriple")
            .field("description", &self.description)
            .field("metric_certified", &self.metric_certified)
            .field("has_cdf", &self.cdf.is_some())
            .field("has_quantile", &self.quantile.is_some())
            .field("unit_line", &self.unit_line)
            .finish()
    }
}

impl SampledTriple {
    /// A 1D law given by its quantile function, sampled by inversion, with
    /// metric |x - y|.
    pub fn from_quantile(
        description: impl Into<String>,
        quantile: Arc<RealFn>,
        cdf: Option<Arc<RealFn>>,
        unit_line: bool,
    ) -> Self {
        let q = Arc::clone(&quantile);
        SampledTriple {
            sampler: Arc::new(move |seed, index| q(unit_draw(seed, index))),
            metric: Arc::new(|x: f64, y: f64| (x - y).abs()),
            description: description.into(),
            metric_certified: true,
            cdf,
            quantile: Some(quantile),
            unit_line,
        }
    }

    pub fn draw(&self, seed: u64, index: u64) -> f64 {
        (self.sampler)(seed, index)
    }

    pub fn distance(&self, x: f64, y: f64) -> f64 {
        (self.metric)(x, y)
    }
}

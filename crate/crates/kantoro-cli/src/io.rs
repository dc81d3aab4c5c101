//! File plumbing: instance/measure/chain JSON, cost-matrix and line CSV,
//! and the `--out -` convention.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use kantoro_core::{CostSpace, FiniteDistribution, LineDistribution, MarkovChain, Matrix};

use crate::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Write to the path, or to standard output for `-`.
pub fn write_output(out: &str, payload: &str) -> Result<(), CliError> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(payload.as_bytes())
            .and_then(|()| stdout.flush())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
    } else {
        fs::write(out, payload)
            .map_err(|source| CliError::Io { path: out.to_string(), source })
    }
}

fn parse_error(path: &Path, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.display().to_string(), message: message.into() }
}

/// The shared instance schema: a cost table with optional marginals. The
/// `metric` flag asks for certification up front instead of at first use.
#[derive(Deserialize)]
pub struct InstanceJson {
    pub n: usize,
    pub cost: Vec<Vec<f64>>,
    #[serde(default)]
    pub mu: Vec<f64>,
    #[serde(default)]
    pub nu: Vec<f64>,
    #[serde(default)]
    pub metric: bool,
}

pub struct Instance {
    pub cost: Matrix,
    pub space: Option<CostSpace>,
    pub mu: Option<FiniteDistribution>,
    pub nu: Option<FiniteDistribution>,
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let raw: InstanceJson = serde_json::from_str(&read_text(path)?)
        .map_err(|e| parse_error(path, e.to_string()))?;
    let cost = Matrix::from_rows(raw.cost)?;
    if cost.rows() != raw.n {
        return Err(parse_error(
            path,
            format!("\"n\" is {} but the cost table has {} rows", raw.n, cost.rows()),
        ));
    }
    let space = if raw.metric {
        let space = CostSpace::new(cost.clone())?;
        if !space.is_metric() {
            return Err(parse_error(path, "\"metric\" is set but the costs fail the axioms"));
        }
        Some(space)
    } else {
        None
    };
    let mu = if raw.mu.is_empty() { None } else { Some(FiniteDistribution::new(raw.mu)?) };
    let nu = if raw.nu.is_empty() { None } else { Some(FiniteDistribution::new(raw.nu)?) };
    if let Some(mu) = &mu {
        if mu.len() != cost.rows() {
            return Err(parse_error(path, "\"mu\" length does not match the cost rows"));
        }
    }
    if let Some(nu) = &nu {
        if nu.len() != cost.cols() {
            return Err(parse_error(path, "\"nu\" length does not match the cost columns"));
        }
    }
    Ok(Instance { cost, space, mu, nu })
}

/// Marginals are optional in the schema but not for solving.
pub fn require_marginals<'a>(
    instance: &'a Instance,
    path: &Path,
) -> Result<(&'a FiniteDistribution, &'a FiniteDistribution), CliError> {
    match (&instance.mu, &instance.nu) {
        (Some(mu), Some(nu)) => Ok((mu, nu)),
        _ => Err(parse_error(path, "instance needs both \"mu\" and \"nu\"")),
    }
}

#[derive(Deserialize)]
struct MeasureJson {
    weights: Vec<f64>,
}

pub fn read_signed_measure(path: &Path) -> Result<kantoro_core::SignedMeasure, CliError> {
    let raw: MeasureJson = serde_json::from_str(&read_text(path)?)
        .map_err(|e| parse_error(path, e.to_string()))?;
    Ok(kantoro_core::SignedMeasure::new(raw.weights)?)
}

#[derive(Deserialize)]
struct ChainJson {
    states: usize,
    transition: Vec<Vec<f64>>,
    #[serde(default)]
    stationary: Option<Vec<f64>>,
}

pub fn read_chain(path: &Path) -> Result<MarkovChain, CliError> {
    let raw: ChainJson = serde_json::from_str(&read_text(path)?)
        .map_err(|e| parse_error(path, e.to_string()))?;
    if raw.transition.len() != raw.states {
        return Err(parse_error(
            path,
            format!("\"states\" is {} but the transition table has {} rows", raw.states, raw.transition.len()),
        ));
    }
    let transition = Matrix::from_rows(raw.transition)?;
    let stationary = raw.stationary.map(FiniteDistribution::new).transpose()?;
    Ok(MarkovChain::new(transition, stationary)?)
}

/// Cost matrix from JSON (bare rows or `{"cost": rows}`) or CSV rows.
pub fn read_cost_matrix(path: &Path) -> Result<Matrix, CliError> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("csv")) {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Result<Vec<f64>, _> =
                line.split(',').map(|cell| cell.trim().parse::<f64>()).collect();
            let row = row.map_err(|e| parse_error(path, format!("line {}: {e}", lineno + 1)))?;
            rows.push(row);
        }
        Ok(Matrix::from_rows(rows)?)
    } else {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum CostJson {
            Wrapped { cost: Vec<Vec<f64>> },
            Bare(Vec<Vec<f64>>),
        }
        let raw: CostJson = serde_json::from_str(&text)
            .map_err(|e| parse_error(path, e.to_string()))?;
        let rows = match raw {
            CostJson::Wrapped { cost } => cost,
            CostJson::Bare(rows) => rows,
        };
        Ok(Matrix::from_rows(rows)?)
    }
}

/// `position,weight` per line, with an optional header line.
pub fn read_line_distribution(path: &Path) -> Result<LineDistribution, CliError> {
    let text = read_text(path)?;
    let mut positions = Vec::new();
    let mut weights = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("position")) {
            continue;
        }
        let mut cells = line.split(',');
        let bad = |e: std::num::ParseFloatError| parse_error(path, format!("line {}: {e}", lineno + 1));
        let position = cells
            .next()
            .ok_or_else(|| parse_error(path, format!("line {}: missing position", lineno + 1)))?
            .trim()
            .parse::<f64>()
            .map_err(bad)?;
        let weight = cells
            .next()
            .ok_or_else(|| parse_error(path, format!("line {}: missing weight", lineno + 1)))?
            .trim()
            .parse::<f64>()
            .map_err(bad)?;
        if cells.next().is_some() {
            return Err(parse_error(path, format!("line {}: expected two columns", lineno + 1)));
        }
        positions.push(position);
        weights.push(weight);
    }
    Ok(LineDistribution::new(positions, weights)?)
}

/// Two-column CSV with a header, one row per record.
pub fn two_column_csv(header: (&str, &str), rows: &[(usize, f64)]) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (key, value) in rows {
        out.push_str(&format!("{key},{value}\n"));
    }
    out
}

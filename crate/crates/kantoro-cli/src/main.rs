//! `kantoro` — every solver in the toolkit behind one binary with
//! file-based I/O. Outputs are pure functions of the command line: no
//! timestamps, no environment lookups, one published seed default.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use kantoro_core::{
    dbar_criterion, duality_gap, dyadic_iid_tree, kr_norm, lipschitz_dual, quantile_map,
    run_convergence, secondary_entropy_curve, solve_assignment, solve_kp, solve_mk,
    square_law_triple, tower_profile, tower_statistic, two_point_triple, uniform01_triple,
    verify_optimal, CostSpace, Error as CoreError, PartitionTree, SampledTriple, ShiftMap,
};

/// Seed used whenever none is given; part of the output contract.
const DEFAULT_SEED: u64 = 1_000_003;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for anything the caller got wrong, 3 for instances we refuse to
    /// attempt because they blow past a resource cap.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::ResourceCap { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "kantoro", version, about = "Transport distances between finite measures")]
struct Cli {
    /// Output destination; `-` writes to standard output.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    /// Master seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Least-cost coupling between the marginals of an instance file.
    Solve {
        /// Instance JSON: {"n", "cost", "mu", "nu", "metric"}.
        #[arg(long)]
        instance: PathBuf,
        /// Also dump the plan as CSV (row,col,mass).
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Root-mean transport cost of order p (metric instances only).
    Kp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Distance between two distributions on the unit line.
    Line {
        /// CSV with `position,weight` rows.
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        /// Also dump the monotone rearrangement as CSV (from,to,mass).
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Norm of a zero-charge signed measure, with the dual witness.
    Krnorm {
        /// Signed-measure JSON: {"weights": [...]}.
        #[arg(long)]
        measure: PathBuf,
        /// Instance JSON providing the metric costs.
        #[arg(long)]
        instance: PathBuf,
    },
    /// Cheapest permutation for a square cost matrix.
    Assign {
        /// Cost matrix as JSON rows, {"cost": rows}, or CSV.
        #[arg(long)]
        cost: PathBuf,
    },
    /// Convergence experiment for sampled distance matrices.
    Matdist {
        /// Source law: uniform01 | square | twopoint:P.
        #[arg(long)]
        mu: String,
        /// Target law for the rearrangement map, or `identity`.
        #[arg(long, default_value = "identity")]
        map: String,
        /// Sample sizes, ascending.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Horizon profile comparing a chain's conditional futures.
    Dbar {
        /// Chain JSON: {"states", "transition", "stationary"?}.
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
        /// Switch to the discretization-entropy curve at this tolerance.
        #[arg(long)]
        secondary_eps: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Quotient-statistic profile of a partition tree.
    Tower {
        /// Tree JSON: {"leaves", "masses", "base_cost", "levels"}.
        #[arg(long, conflicts_with = "benchmark")]
        tree: Option<PathBuf>,
        /// Use the built-in dyadic benchmark of this depth instead.
        #[arg(long)]
        benchmark: Option<usize>,
        /// Report a single level instead of the whole profile.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Re-solve an instance and audit the optimality certificate.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        /// Duality-gap tolerance for the `optimal` verdict.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn emit_json(out: &str, payload: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(payload)
        .expect("serde_json can always print its own values");
    text.push('\n');
    io::write_output(out, &text)
}

fn parse_triple(name: &str) -> Result<SampledTriple, CliError> {
    match name {
        "uniform01" => Ok(uniform01_triple()),
        "square" => Ok(square_law_triple()),
        _ => {
            if let Some(rest) = name.strip_prefix("twopoint") {
                let arg = rest
                    .trim_start_matches([':', '('])
                    .trim_end_matches(')');
                let p: f64 = arg.parse().map_err(|_| {
                    CliError::Usage(format!("cannot read a mass out of `{name}`"))
                })?;
                Ok(two_point_triple(p)?)
            } else {
                Err(CliError::Usage(format!(
                    "unknown law `{name}` (expected uniform01, square, or twopoint:P)"
                )))
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.as_str();
    match cli.command {
        Command::Solve { instance, plan } => {
            let inst = io::read_instance(&instance)?;
            let (mu, nu) = io::require_marginals(&inst, &instance)?;
            let sol = match &inst.space {
                Some(space) => solve_mk(space, mu, nu)?,
                None => solve_mk(&inst.cost, mu, nu)?,
            };
            if let Some(path) = plan {
                let mut csv = String::from("row,col,mass\n");
                let entries = sol.plan.entries();
                for i in 0..entries.rows() {
                    for j in 0..entries.cols() {
                        let mass = entries.get(i, j);
                        if mass > 0.0 {
                            csv.push_str(&format!("{i},{j},{mass}\n"));
                        }
                    }
                }
                io::write_output(path.display().to_string().as_str(), &csv)?;
            }
            emit_json(
                out,
                &json!({
                    "value": sol.value,
                    "plan": sol.plan.entries(),
                    "potential": sol.potential.as_ref().map(|p| &p.values),
                    "gap": duality_gap(&sol, mu, nu),
                }),
            )
        }
        Command::Kp { instance, p } => {
            let inst = io::read_instance(&instance)?;
            let (mu, nu) = io::require_marginals(&inst, &instance)?;
            let space = metric_space(&inst)?;
            let value = solve_kp(&space, mu, nu, p)?;
            emit_json(out, &json!({ "value": value, "p": p }))
        }
        Command::Line { mu, nu, plan } => {
            let a = io::read_line_distribution(&mu)?;
            let b = io::read_line_distribution(&nu)?;
            if let Some(path) = plan {
                let mut csv = String::from("from,to,mass\n");
                for leg in quantile_map(&a, &b) {
                    csv.push_str(&format!("{},{},{}\n", leg.from, leg.to, leg.mass));
                }
                io::write_output(path.display().to_string().as_str(), &csv)?;
            }
            emit_json(out, &json!({ "k1": kantoro_core::k1_line(&a, &b) }))
        }
        Command::Krnorm { measure, instance } => {
            let m = io::read_signed_measure(&measure)?;
            let inst = io::read_instance(&instance)?;
            let space = metric_space(&inst)?;
            let norm = kr_norm(&m, &space)?;
            let dual = lipschitz_dual(&m, &space)?;
            emit_json(
                out,
                &json!({ "norm": norm, "dual": dual.value, "witness": dual.witness.values }),
            )
        }
        Command::Assign { cost } => {
            let matrix = io::read_cost_matrix(&cost)?;
            let best = solve_assignment(&matrix)?;
            emit_json(out, &json!({ "value": best.value, "permutation": best.permutation }))
        }
        Command::Matdist { mu, map, n, trials, format } => {
            let source = parse_triple(&mu)?;
            let target = if map == "identity" { None } else { Some(parse_triple(&map)?) };
            let shift = match &target {
                Some(t) => ShiftMap::Rearrange(t),
                None => ShiftMap::Identity,
            };
            let report = run_convergence(&source, shift, &n, trials, cli.seed)?;
            match format {
                Format::Json => emit_json(out, &serde_json::to_value(&report).unwrap()),
                Format::Csv => {
                    let mut csv = String::from("n,trial,estimate\n");
                    for (g, row) in report.estimates.iter().enumerate() {
                        for (t, estimate) in row.iter().enumerate() {
                            csv.push_str(&format!("{},{t},{estimate}\n", report.n_grid[g]));
                        }
                    }
                    io::write_output(out, &csv)
                }
            }
        }
        Command::Dbar { chain, horizons, secondary_eps, format } => {
            let chain = io::read_chain(&chain)?;
            let curve: Vec<(usize, f64)> = match secondary_eps {
                Some(eps) => secondary_entropy_curve(&chain, &horizons, eps)?,
                None => horizons
                    .iter()
                    .map(|&n| Ok((n, dbar_criterion(&chain, n)?)))
                    .collect::<Result<_, CoreError>>()?,
            };
            match format {
                Format::Csv => io::write_output(out, &io::two_column_csv(("n", "value"), &curve)),
                Format::Json => {
                    let rows: Vec<_> =
                        curve.iter().map(|(n, value)| json!({ "n": n, "value": value })).collect();
                    emit_json(out, &json!({ "curve": rows }))
                }
            }
        }
        Command::Tower { tree, benchmark, level, format } => {
            let tree = load_tree(tree.as_deref(), benchmark)?;
            let profile: Vec<(usize, f64)> = match level {
                Some(k) => vec![(k, tower_statistic(&tree, k)?)],
                None => tower_profile(&tree)?,
            };
            match format {
                Format::Csv => {
                    io::write_output(out, &io::two_column_csv(("level", "value"), &profile))
                }
                Format::Json => {
                    let rows: Vec<_> = profile
                        .iter()
                        .map(|(k, value)| json!({ "level": k, "value": value }))
                        .collect();
                    emit_json(out, &json!({ "profile": rows }))
                }
            }
        }
        Command::Verify { instance, tol } => {
            let inst = io::read_instance(&instance)?;
            let (mu, nu) = io::require_marginals(&inst, &instance)?;
            let space = metric_space(&inst)?;
            let sol = solve_mk(&space, mu, nu)?;
            let gap = duality_gap(&sol, mu, nu);
            let report = verify_optimal(&sol, &space)?;
            emit_json(
                out,
                &json!({
                    "value": sol.value,
                    "gap": gap,
                    "optimal": report.optimal && gap.abs() <= tol,
                    "violations": report.violations,
                }),
            )
        }
    }
}

/// The instance as a cost space, certifying on the spot when the file did
/// not ask for certification up front.
fn metric_space(inst: &io::Instance) -> Result<CostSpace, CliError> {
    match &inst.space {
        Some(space) => Ok(space.clone()),
        None => Ok(CostSpace::new(inst.cost.clone())?),
    }
}

fn load_tree(tree: Option<&Path>, benchmark: Option<usize>) -> Result<PartitionTree, CliError> {
    match (tree, benchmark) {
        (Some(path), None) => {
            let text = io::read_text(path)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
        }
        (None, Some(depth)) => Ok(dyadic_iid_tree(depth)?),
        _ => Err(CliError::Usage("pass exactly one of --tree or --benchmark".into())),
    }
}

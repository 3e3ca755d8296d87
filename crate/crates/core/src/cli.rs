//! Command-line front end. [`run`] holds the whole program so it can be
//! driven from tests; the binary only forwards its arguments and exit code.
//!
//! Exit codes: 0 on success, 2 for usage, input and configuration errors,
//! 3 when the estimator is undefined at the requested point.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::bootstrap::{run_ci_pipeline, stream_rng, BootstrapMode, BootstrapPlan, StepRule, WeightScheme};
use crate::error::Error;
use crate::estimators::{estimate, Dataset, Kind, DEFAULT_GRID};
use crate::mc::{emit_report, generate_dgp, run_simulation_with_threads, DgpModel, ReportFormat, SimConfig};
use crate::mean_function::QMode;

/// Environment variable overriding the simulation thread count.
pub const THREADS_ENV: &str = "SHAPEBOOT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "shapeboot", version, about = "Monotone estimation with bootstrap confidence intervals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Point estimate at one location.
    Estimate(EstimateArgs),
    /// Bootstrap confidence interval at one location.
    Ci(CiArgs),
    /// Monte Carlo coverage experiment from a JSON config.
    Simulate(SimulateArgs),
    /// Write a dataset from one of the simulation designs.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// CSV file with a header row.
    #[arg(long)]
    input: PathBuf,
    /// density, isoreg, censored, hazard or current_status.
    #[arg(long)]
    kind: Kind,
    /// Evaluation point.
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum BootstrapArg {
    Reshaped,
    Naive,
    Moon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum QArg {
    Robust,
    Known(u32),
}

impl std::str::FromStr for QArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "robust" {
            return Ok(QArg::Robust);
        }
        s.parse::<u32>()
            .map(QArg::Known)
            .map_err(|_| format!("q must be 'robust' or a positive odd integer, got '{s}'"))
    }
}

#[derive(Debug, Args)]
struct CiArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = BootstrapArg::Reshaped)]
    bootstrap: BootstrapArg,
    /// Bootstrap replications.
    #[arg(long = "B", default_value_t = 2000)]
    b: usize,
    #[arg(long, default_value = "robust")]
    q: QArg,
    #[arg(long, default_value_t = 3)]
    qbar: u32,
    /// `rot` or `fixed:<eps>`.
    #[arg(long, default_value = "rot")]
    step: StepRule,
    /// Resample size for the m-out-of-n bootstrap.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value = "multinomial")]
    weights: WeightScheme,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "json")]
    format: ReportFormat,
    /// Worker threads; defaults to the environment override, then all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    model: u8,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Library(e) if e.is_domain_error() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Library(e) => write!(f, "{e}"),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Runs the program on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let res = match cli.command {
        Command::Estimate(a) => cmd_estimate(a),
        Command::Ci(a) => cmd_ci(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match res {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn column_names(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Density => &["x"],
        Kind::Isoreg => &["x", "y"],
        Kind::CensoredDensity | Kind::Hazard => &["time", "status"],
        Kind::CurrentStatus => &["c", "delta"],
    }
}

/// Reads a dataset of the given kind from a headed CSV file.
pub fn read_dataset(path: &Path, kind: Kind) -> Result<Dataset<f64>, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    let names = column_names(kind);
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| format!("missing column '{n}' for kind {kind}"))
        })
        .collect::<Result<_, _>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        for (k, &i) in idx.iter().enumerate() {
            let field = rec.get(i).unwrap_or("");
            let v: f64 = field
                .parse()
                .map_err(|_| format!("row {}: cannot parse '{field}' as a number", row + 1))?;
            if !v.is_finite() {
                return Err(format!("row {}: non-finite value", row + 1));
            }
            cols[k].push(v);
        }
    }
    let binary = |v: &[f64], name: &str| -> Result<(), String> {
        match v.iter().position(|&s| s != 0.0 && s != 1.0) {
            Some(r) => Err(format!("row {}: {name} must be 0 or 1", r + 1)),
            None => Ok(()),
        }
    };
    let mut cols = cols.into_iter();
    let first = cols.next().unwrap_or_default();
    let second = cols.next().unwrap_or_default();
    Ok(match kind {
        Kind::Density => Dataset::Density { samples: first },
        Kind::Isoreg => Dataset::Isoreg { x: first, y: second },
        Kind::CensoredDensity | Kind::Hazard => {
            binary(&second, "status")?;
            let is_event = second.iter().map(|&s| s == 1.0).collect();
            if kind == Kind::Hazard {
                Dataset::Hazard { times: first, is_event }
            } else {
                Dataset::CensoredDensity { times: first, is_event }
            }
        }
        Kind::CurrentStatus => {
            binary(&second, "delta")?;
            Dataset::CurrentStatus { check_times: first, indicators: second }
        }
    })
}

fn load(input: &InputArgs) -> Result<Dataset<f64>, Failure> {
    let data = read_dataset(&input.input, input.kind).map_err(Failure::Usage)?;
    if data.is_empty() {
        return Err(usage("input has no data rows"));
    }
    Ok(data)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string(v).expect("JSON values always serialize"));
}

fn cmd_estimate(a: EstimateArgs) -> CmdResult {
    let data = load(&a.input)?;
    let theta = estimate(&data, a.input.x)?;
    print_json(&json!({
        "theta_hat": theta,
        "n": data.len(),
        "kind": a.input.kind.as_str(),
        "x": a.input.x,
    }));
    Ok(())
}

fn ci_plan(a: &CiArgs) -> Result<BootstrapPlan, Failure> {
    let q_mode = match a.q {
        QArg::Robust => QMode::Robust(a.qbar),
        QArg::Known(q) => QMode::Known(q),
    };
    q_mode.validate()?;
    if a.m.is_some() && a.bootstrap != BootstrapArg::Moon {
        return Err(usage("--m only applies to --bootstrap moon"));
    }
    let mode = match a.bootstrap {
        BootstrapArg::Reshaped => BootstrapMode::Reshaped,
        BootstrapArg::Naive => BootstrapMode::Naive,
        BootstrapArg::Moon => {
            if matches!(q_mode, QMode::Robust(_)) {
                return Err(usage("--bootstrap moon needs a known rate: pass --q <odd integer>"));
            }
            BootstrapMode::MOutOfN { m: a.m }
        }
    };
    let plan = BootstrapPlan {
        replications: a.b,
        scheme: a.weights,
        mode,
        q_mode,
        step: a.step,
        alpha: a.alpha,
        seed: a.seed,
        grid_points: a.grid,
        ..BootstrapPlan::default()
    };
    plan.validate().map_err(|e| usage(e.to_string()))?;
    Ok(plan)
}

fn cmd_ci(a: CiArgs) -> CmdResult {
    let plan = ci_plan(&a)?;
    let data = load(&a.input)?;
    let ci = run_ci_pipeline(&data, a.input.x, &plan)?;
    let d: BTreeMap<String, f64> = ci.d_estimates.iter().map(|(j, v)| (j.to_string(), *v)).collect();
    print_json(&json!({
        "theta_hat": ci.theta_hat,
        "ci_lo": ci.lo,
        "ci_hi": ci.hi,
        "alpha": ci.alpha,
        "B": plan.replications,
        "d_estimates": d,
        "seed": plan.seed,
    }));
    Ok(())
}

fn thread_count(flag: Option<usize>) -> Result<usize, Failure> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| usage(format!("{THREADS_ENV} must be a positive integer")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(usage("thread count must be positive"));
    }
    Ok(n)
}

fn cmd_simulate(a: SimulateArgs) -> CmdResult {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| usage(format!("{}: {e}", a.config.display())))?;
    let config: SimConfig =
        serde_json::from_str(&text).map_err(|e| usage(format!("invalid config: {e}")))?;
    config.validate().map_err(|e| usage(format!("invalid config: {e}")))?;
    let threads = thread_count(a.threads)?;
    let start = std::time::Instant::now();
    let report = run_simulation_with_threads(&config, threads)?;
    let body = emit_report(&report, a.format)?;
    fs::write(&a.out, body).map_err(|e| usage(format!("{}: {e}", a.out.display())))?;
    eprintln!(
        "model {} n={} S={} B={} on {threads} threads in {:.1}s",
        report.model,
        report.n,
        report.replications,
        report.bootstrap_replications,
        start.elapsed().as_secs_f64()
    );
    for row in &report.rows {
        eprintln!(
            "{:>12}: coverage {:.3}  avg length {:.3}  failures {}",
            row.method, row.coverage, row.avg_length, row.failures
        );
        print_json(&json!({
            "method": row.method,
            "coverage": row.coverage,
            "avg_length": row.avg_length,
        }));
    }
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> CmdResult {
    let dgp = DgpModel::new(a.model).map_err(|e| usage(e.to_string()))?;
    if a.n == 0 {
        return Err(usage("--n must be positive"));
    }
    let (x, y) = generate_dgp(&dgp, a.n, &mut stream_rng(a.seed, 0));
    let mut out = String::from("x,y\n");
    for (xi, yi) in x.iter().zip(&y) {
        out.push_str(&format!("{xi},{yi}\n"));
    }
    match &a.out {
        Some(p) => fs::write(p, out).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => print!("{out}"),
    }
    Ok(())
}

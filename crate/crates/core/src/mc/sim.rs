use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{
    derive_seed, run_ci_pipeline, stream_rng, BootstrapMode, BootstrapPlan, StepRule, WeightScheme,
};
use crate::error::{Error, Result};
use crate::estimators::{Dataset, DEFAULT_GRID};
use crate::mc::{generate_dgp, DgpModel, EVAL_POINT};
use crate::mean_function::QMode;

/// Inference procedure compared in a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Reshaped bootstrap with the true exponent and the true `D_q`.
    Oracle,
    /// Reshaped bootstrap with the true exponent and an estimated `D_q`.
    KnownQ,
    /// Reshaped bootstrap without knowledge of the exponent.
    Robust,
    /// Standard nonparametric bootstrap.
    Naive,
    /// m-out-of-n bootstrap with the true rate.
    MOutOfN { m: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub name: String,
    pub method: Method,
}

/// A Monte Carlo experiment. Field names match the JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub model: u8,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_s")]
    pub replications: usize,
    #[serde(default = "default_s")]
    pub bootstrap_replications: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_methods")]
    pub methods: Vec<MethodSpec>,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default)]
    pub scheme: WeightScheme,
    #[serde(default)]
    pub step: StepRule,
    #[serde(default = "default_qbar")]
    pub qbar: u32,
    /// Stop at the first failed replication instead of counting it.
    #[serde(default = "default_true")]
    pub abort_on_failure: bool,
}

fn default_n() -> usize {
    500
}
fn default_s() -> usize {
    400
}
fn default_alpha() -> f64 {
    0.05
}
fn default_grid() -> usize {
    DEFAULT_GRID
}
fn default_qbar() -> u32 {
    3
}
fn default_true() -> bool {
    true
}
fn default_methods() -> Vec<MethodSpec> {
    [("oracle", Method::Oracle), ("known_q", Method::KnownQ), ("robust", Method::Robust)]
        .into_iter()
        .map(|(name, method)| MethodSpec { name: name.into(), method })
        .collect()
}

impl SimConfig {
    /// Desk-scale defaults for `model`.
    pub fn desk(model: u8) -> Self {
        SimConfig {
            model,
            n: default_n(),
            replications: default_s(),
            bootstrap_replications: default_s(),
            alpha: default_alpha(),
            master_seed: 0,
            methods: default_methods(),
            grid_points: default_grid(),
            scheme: WeightScheme::default(),
            step: StepRule::default(),
            qbar: default_qbar(),
            abort_on_failure: true,
        }
    }

    pub fn validate(&self) -> Result<DgpModel> {
        let dgp = DgpModel::new(self.model)?;
        if self.n < 50 {
            return Err(Error::InvalidArgument(format!("n = {} below 50", self.n)));
        }
        if self.replications == 0 || self.bootstrap_replications == 0 {
            return Err(Error::InvalidArgument("replication counts must be positive".into()));
        }
        for spec in &self.methods {
            self.plan_for(&dgp, spec.method, 0).validate()?;
        }
        Ok(dgp)
    }

    /// Bootstrap plan for one method in one replication.
    pub fn plan_for(&self, dgp: &DgpModel, method: Method, seed: u64) -> BootstrapPlan {
        let known = QMode::Known(dgp.q_true);
        let (mode, q_mode, d_override) = match method {
            Method::Oracle => (
                BootstrapMode::Reshaped,
                known,
                Some(BTreeMap::from([(dgp.q_true, dgp.d_true)])),
            ),
            Method::KnownQ => (BootstrapMode::Reshaped, known, None),
            Method::Robust => (BootstrapMode::Reshaped, QMode::Robust(self.qbar), None),
            Method::Naive => (BootstrapMode::Naive, known, None),
            Method::MOutOfN { m } => (BootstrapMode::MOutOfN { m }, known, None),
        };
        BootstrapPlan {
            replications: self.bootstrap_replications,
            scheme: self.scheme,
            mode,
            q_mode,
            step: self.step,
            alpha: self.alpha,
            seed,
            grid_points: self.grid_points,
            d_override,
            ..BootstrapPlan::default()
        }
    }
}

/// Aggregates for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRow {
    pub method: String,
    pub d1_avg: Option<f64>,
    pub d3_avg: Option<f64>,
    pub coverage: f64,
    pub avg_length: f64,
    pub successes: usize,
    pub failures: usize,
}

/// Result of a simulation. Contains no timing data, so equal inputs give
/// byte-identical serializations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub model: u8,
    pub n: usize,
    pub replications: usize,
    pub bootstrap_replications: usize,
    pub alpha: f64,
    pub master_seed: u64,
    pub theta0: f64,
    pub rows: Vec<MethodRow>,
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    covered: bool,
    length: f64,
    d1: Option<f64>,
    d3: Option<f64>,
}

/// Dataset used in replication `s`.
pub fn replication_data(config: &SimConfig, dgp: &DgpModel, s: usize) -> Dataset<f64> {
    let (x, y) = generate_dgp(dgp, config.n, &mut stream_rng(config.master_seed, s as u64));
    Dataset::Isoreg { x, y }
}

/// Runs the experiment on the current rayon pool.
pub fn run_simulation(config: &SimConfig) -> Result<SimReport> {
    let dgp = config.validate()?;
    let per_rep: Vec<Vec<Result<Outcome>>> = (0..config.replications)
        .into_par_iter()
        .map(|s| {
            let data = replication_data(config, &dgp, s);
            let seed = derive_seed(config.master_seed, &[s as u64]);
            config
                .methods
                .iter()
                .map(|spec| {
                    let ci = run_ci_pipeline(&data, EVAL_POINT, &config.plan_for(&dgp, spec.method, seed))?;
                    Ok(Outcome {
                        covered: ci.contains(dgp.theta0),
                        length: ci.length(),
                        d1: ci.d_estimates.get(&1).copied(),
                        d3: ci.d_estimates.get(&3).copied(),
                    })
                })
                .collect()
        })
        .collect();

    let mut rows = Vec::with_capacity(config.methods.len());
    for (k, spec) in config.methods.iter().enumerate() {
        let mut ok = Vec::new();
        let mut failures = 0;
        for (s, outcomes) in per_rep.iter().enumerate() {
            match &outcomes[k] {
                Ok(o) => ok.push(*o),
                Err(e) if config.abort_on_failure => {
                    return Err(Error::InvalidData(format!(
                        "replication {s}, method '{}': {e}",
                        spec.name
                    )))
                }
                Err(_) => failures += 1,
            }
        }
        let count = ok.len() as f64;
        let avg = |f: &dyn Fn(&Outcome) -> Option<f64>| {
            let vals: Vec<f64> = ok.iter().filter_map(f).collect();
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
        };
        rows.push(MethodRow {
            method: spec.name.clone(),
            d1_avg: avg(&|o| o.d1),
            d3_avg: avg(&|o| o.d3),
            coverage: if ok.is_empty() { f64::NAN } else { ok.iter().filter(|o| o.covered).count() as f64 / count },
            avg_length: if ok.is_empty() { f64::NAN } else { ok.iter().map(|o| o.length).sum::<f64>() / count },
            successes: ok.len(),
            failures,
        });
    }
    Ok(SimReport {
        model: config.model,
        n: config.n,
        replications: config.replications,
        bootstrap_replications: config.bootstrap_replications,
        alpha: config.alpha,
        master_seed: config.master_seed,
        theta0: dgp.theta0,
        rows,
    })
}

/// Runs the experiment on a dedicated pool of `threads` workers.
pub fn run_simulation_with_threads(config: &SimConfig, threads: usize) -> Result<SimReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| run_simulation(config))
}

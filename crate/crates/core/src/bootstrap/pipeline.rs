use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bootstrap::{
    draw_weights, m_of_n_ci, naive_draw, percentile_ci, reshaped_draw, stream_rng, BootstrapMode,
    BootstrapPlan, CiResult, StepRule,
};
use crate::error::{Error, Result};
use crate::estimators::{generalized_grenander, Dataset, MonotoneModel};
use crate::mean_function::{
    build_perturbation, estimate_d, rot_step_size, rot_step_size_density, step_or_fallback,
    upsilon_hat, NdSpec, PerturbationPoly, QMode,
};
use crate::scalar::Scalar;

/// Derivative estimates and the step sizes behind them, keyed by order.
pub type DerivativeEstimates<T> = (BTreeMap<u32, T>, BTreeMap<u32, T>);

/// Step for `D_j`: the plan's rule, shrunk so every offset stays in the
/// model's admissible domain.
pub fn step_size<T: Scalar>(
    data: &Dataset<T>,
    model: &MonotoneModel<T>,
    j: u32,
    plan: &BootstrapPlan,
) -> Result<T> {
    let x = model.x_eval();
    let n = data.len();
    let mut eps = match plan.step {
        StepRule::Fixed(e) => T::lit(e),
        StepRule::Rot => {
            if let Some((xs, ys)) = data.regression_pairs() {
                step_or_fallback(rot_step_size(xs, ys, x, j), n)?
            } else if let Some(s) = data.sample_values() {
                step_or_fallback(rot_step_size_density(s, x, j), n)?
            } else {
                return Err(Error::InvalidData("dataset has no observations".into()));
            }
        }
    };
    let (lo, hi) = model.nd_domain();
    for &c in &plan.offsets {
        let c = T::lit(c);
        if c < T::zero() && lo.is_finite() {
            eps = eps.min((x - lo) / -c);
        } else if c > T::zero() && hi.is_finite() {
            eps = eps.min((hi - x) / c);
        }
    }
    if !(eps > T::zero()) {
        return Err(Error::StepOutOfDomain(x.to_f64_lossy()));
    }
    Ok(eps)
}

/// Bias-reduced estimates of every `D_j` the plan's exponent mode needs,
/// or the plan's fixed values when it carries them.
pub fn derivative_estimates<T: Scalar>(
    data: &Dataset<T>,
    model: &MonotoneModel<T>,
    theta_hat: T,
    plan: &BootstrapPlan,
) -> Result<DerivativeEstimates<T>> {
    let orders = plan.q_mode.required_orders();
    if let Some(fixed) = &plan.d_override {
        let mut d = BTreeMap::new();
        for j in orders {
            let v = fixed.get(&j).ok_or(Error::IncompleteDEstimates(j))?;
            d.insert(j, T::lit(*v));
        }
        return Ok((d, BTreeMap::new()));
    }
    let ups = upsilon_hat(model, theta_hat);
    let offsets: Vec<T> = plan.offsets.iter().map(|&c| T::lit(c)).collect();
    let s_lower = offsets.len() as u32 - 1;
    let mut d = BTreeMap::new();
    let mut steps = BTreeMap::new();
    for j in orders {
        let eps = step_size(data, model, j, plan)?;
        let spec = NdSpec::br(j, s_lower, offsets.clone(), eps);
        d.insert(j, estimate_d(&ups, &spec, model.x_eval())?);
        steps.insert(j, eps);
    }
    Ok((d, steps))
}

/// Centred reshaped draws `theta* - theta_hat`, in replication order.
pub fn reshaped_draws<T: Scalar>(
    model: &MonotoneModel<T>,
    theta_hat: T,
    pert: &PerturbationPoly<T>,
    plan: &BootstrapPlan,
) -> Result<Vec<T>> {
    let n = model.n();
    (0..plan.replications)
        .into_par_iter()
        .map(|b| {
            let w: Vec<T> = draw_weights(plan.scheme, n, &mut stream_rng(plan.seed, b as u64));
            reshaped_draw(model, theta_hat, pert, &w, plan).map(|v| v - theta_hat)
        })
        .collect()
}

/// Centred naive draws `theta* - theta_hat`, in replication order.
pub fn naive_draws<T: Scalar>(
    model: &MonotoneModel<T>,
    theta_hat: T,
    plan: &BootstrapPlan,
) -> Result<Vec<T>> {
    let n = model.n();
    (0..plan.replications)
        .into_par_iter()
        .map(|b| {
            let w: Vec<T> = draw_weights(plan.scheme, n, &mut stream_rng(plan.seed, b as u64));
            naive_draw(model, &w, plan).map(|v| v - theta_hat)
        })
        .collect()
}

/// Dataset to confidence interval at `x_eval`. Deterministic given the data
/// and `plan.seed`, whatever the size of the thread pool.
pub fn run_ci_pipeline<T: Scalar>(
    data: &Dataset<T>,
    x_eval: T,
    plan: &BootstrapPlan,
) -> Result<CiResult<T>> {
    plan.validate()?;
    let model = data.build(x_eval)?;
    let theta_hat = generalized_grenander(&model)?;
    match plan.mode {
        BootstrapMode::Reshaped => {
            let (d, steps) = derivative_estimates(data, &model, theta_hat, plan)?;
            let pert = build_perturbation(&d, plan.q_mode)?;
            let draws = reshaped_draws(&model, theta_hat, &pert, plan)?;
            let mut ci = percentile_ci(&draws, theta_hat, plan.alpha)?;
            ci.d_estimates = d;
            ci.steps = steps;
            Ok(ci)
        }
        BootstrapMode::Naive => {
            let draws = naive_draws(&model, theta_hat, plan)?;
            percentile_ci(&draws, theta_hat, plan.alpha)
        }
        BootstrapMode::MOutOfN { m } => {
            let q = match plan.q_mode {
                QMode::Known(q) => q,
                QMode::Robust(_) => {
                    return Err(Error::InvalidArgument(
                        "m-out-of-n bootstrap needs a known characteristic exponent".into(),
                    ))
                }
            };
            let n = model.n();
            let m = m.unwrap_or_else(|| (n as f64).sqrt().ceil() as usize);
            m_of_n_ci(&model, theta_hat, m, q, plan.alpha, plan.replications, plan.seed, plan.grid_points)
        }
    }
}

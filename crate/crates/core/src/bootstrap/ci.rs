use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{convergence_rate, multinomial_counts, naive_draw, stream_rng, BootstrapPlan};
use crate::error::{Error, Result};
use crate::estimators::MonotoneModel;
use crate::scalar::Scalar;

/// Order-statistic summary of the centred draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawSummary<T> {
    pub count: usize,
    pub min: T,
    pub q_lower: T,
    pub median: T,
    pub q_upper: T,
    pub max: T,
}

/// A percentile confidence interval with the ingredients that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiResult<T> {
    pub lo: T,
    pub hi: T,
    pub theta_hat: T,
    pub alpha: f64,
    pub summary: DrawSummary<T>,
    /// Derivative values used for the mean perturbation, by order.
    pub d_estimates: BTreeMap<u32, T>,
    /// Step sizes used by the derivative estimators, by order.
    pub steps: BTreeMap<u32, T>,
}

impl<T: Scalar> CiResult<T> {
    pub fn length(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Type-1 empirical quantile `inf{Q : #(draws <= Q)/B >= a}` of sorted draws.
pub fn type1_quantile<T: Scalar>(sorted: &[T], a: f64) -> Result<T> {
    if sorted.is_empty() {
        return Err(Error::EmptyDraws);
    }
    let b = sorted.len();
    // The offset absorbs rounding in a*B when it is an integer in exact arithmetic.
    let k = ((a * b as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(sorted[k.min(b) - 1])
}

fn sorted_finite<T: Scalar>(draws: &[T]) -> Result<Vec<T>> {
    if draws.is_empty() {
        return Err(Error::EmptyDraws);
    }
    if let Some(i) = draws.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mut s = draws.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(s)
}

fn summarize<T: Scalar>(sorted: &[T], alpha: f64) -> Result<DrawSummary<T>> {
    Ok(DrawSummary {
        count: sorted.len(),
        min: sorted[0],
        q_lower: type1_quantile(sorted, alpha / 2.0)?,
        median: type1_quantile(sorted, 0.5)?,
        q_upper: type1_quantile(sorted, 1.0 - alpha / 2.0)?,
        max: sorted[sorted.len() - 1],
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha = {alpha} not in (0, 1)")))
    }
}

/// Percentile interval `[theta - Q_{1-alpha/2}, theta - Q_{alpha/2}]` from
/// centred draws `theta* - theta`. Input order does not matter.
pub fn percentile_ci<T: Scalar>(draws: &[T], theta_hat: T, alpha: f64) -> Result<CiResult<T>> {
    check_alpha(alpha)?;
    let sorted = sorted_finite(draws)?;
    let summary = summarize(&sorted, alpha)?;
    Ok(CiResult {
        lo: theta_hat - summary.q_upper,
        hi: theta_hat - summary.q_lower,
        theta_hat,
        alpha,
        summary,
        d_estimates: BTreeMap::new(),
        steps: BTreeMap::new(),
    })
}

/// m-out-of-n bootstrap interval with a known exponent `q`.
///
/// Each replication resamples `m` observations with replacement; the draws
/// `r_m (theta*_m - theta)` are mapped back with `1 / r_n`.
#[allow(clippy::too_many_arguments)]
pub fn m_of_n_ci<T: Scalar>(
    model: &MonotoneModel<T>,
    theta_hat: T,
    m: usize,
    q: u32,
    alpha: f64,
    replications: usize,
    seed: u64,
    grid_points: usize,
) -> Result<CiResult<T>> {
    check_alpha(alpha)?;
    let n = model.n();
    if m == 0 || m > n {
        return Err(Error::BadSubsampleSize { m, n });
    }
    if replications == 0 {
        return Err(Error::EmptyDraws);
    }
    let plan = BootstrapPlan { grid_points, ..BootstrapPlan::default() };
    let r_m = T::lit(convergence_rate(m, q));
    let r_n = T::lit(convergence_rate(n, q));
    let draws: Vec<T> = (0..replications)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let w: Vec<T> = multinomial_counts(m, n, &mut rng);
            naive_draw(model, &w, &plan).map(|v| r_m * (v - theta_hat))
        })
        .collect::<Result<_>>()?;
    let sorted = sorted_finite(&draws)?;
    let summary = summarize(&sorted, alpha)?;
    Ok(CiResult {
        lo: theta_hat - summary.q_upper / r_n,
        hi: theta_hat - summary.q_lower / r_n,
        theta_hat,
        alpha,
        summary,
        d_estimates: BTreeMap::new(),
        steps: BTreeMap::new(),
    })
}

use crate::error::{Error, Result};
use crate::estimators::model::{Components, Kind, MonotoneModel};
use crate::estimators::survival::risk_sets;
use crate::scalar::Scalar;

/// Handling of repeated abscissae in regression-type data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Pool tied observations into one cusum step (multiplicity-weighted mean).
    #[default]
    Pool,
    /// Reject data with repeated abscissae.
    Reject,
}

fn check_finite<T: Scalar>(v: &[T], what: &str) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::InvalidData(format!("non-finite {what} at row {i}"))),
        None => Ok(()),
    }
}

/// Sorted distinct values and the slot of each input value.
fn group<T: Scalar>(v: &[T]) -> (Vec<T>, Vec<usize>) {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).expect("finite"));
    let mut knots: Vec<T> = Vec::new();
    let mut slot = vec![0; v.len()];
    for &i in &order {
        if knots.last() != Some(&v[i]) {
            knots.push(v[i]);
        }
        slot[i] = knots.len() - 1;
    }
    (knots, slot)
}

/// Grenander estimator of a nondecreasing density on `[0, u]`.
pub fn build_density<T: Scalar>(samples: &[T], x_eval: T) -> Result<MonotoneModel<T>> {
    if samples.is_empty() {
        return Err(Error::EmptyData);
    }
    check_finite(samples, "sample")?;
    if samples.iter().any(|&s| s < T::zero()) {
        return Err(Error::InvalidData("density samples must be nonnegative".into()));
    }
    if !(x_eval > T::zero()) {
        return Err(Error::BoundaryEvaluation(format!("x = {x_eval} must be positive")));
    }
    let (knots, slot) = group(samples);
    let hi = knots[knots.len() - 1].max(x_eval);
    MonotoneModel::from_components(
        Kind::Density,
        x_eval,
        Components::Density { knots, slot, lo: T::zero(), hi },
    )
}

/// Isotonic regression of `y` on `x`, ties pooled.
pub fn build_isoreg<T: Scalar>(x: &[T], y: &[T], x_eval: T) -> Result<MonotoneModel<T>> {
    build_isoreg_with(x, y, x_eval, TiePolicy::Pool)
}

pub fn build_isoreg_with<T: Scalar>(
    x: &[T],
    y: &[T],
    x_eval: T,
    ties: TiePolicy,
) -> Result<MonotoneModel<T>> {
    regression(Kind::Isoreg, x, y, x_eval, ties)
}

/// Current-status estimator of a distribution function from inspection
/// times and indicators of an event before inspection.
pub fn build_current_status<T: Scalar>(
    check_times: &[T],
    indicators: &[T],
    x_eval: T,
) -> Result<MonotoneModel<T>> {
    if let Some(i) = indicators
        .iter()
        .position(|&d| d != T::zero() && d != T::one())
    {
        return Err(Error::InvalidData(format!("indicator at row {i} must be 0 or 1")));
    }
    regression(Kind::CurrentStatus, check_times, indicators, x_eval, TiePolicy::Pool)
}

fn regression<T: Scalar>(
    kind: Kind,
    x: &[T],
    y: &[T],
    x_eval: T,
    ties: TiePolicy,
) -> Result<MonotoneModel<T>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(Error::EmptyData);
    }
    check_finite(x, "abscissa")?;
    check_finite(y, "response")?;
    if !x_eval.is_finite() {
        return Err(Error::InvalidArgument("evaluation point must be finite".into()));
    }
    let (knots, slot) = group(x);
    if ties == TiePolicy::Reject && knots.len() < x.len() {
        let mut seen = vec![false; knots.len()];
        for &s in &slot {
            if seen[s] {
                return Err(Error::DuplicateAbscissae(knots[s].to_f64_lossy()));
            }
            seen[s] = true;
        }
    }
    MonotoneModel::from_components(
        kind,
        x_eval,
        Components::Regression { knots, slot, y: y.to_vec() },
    )
}

fn survival_model<T: Scalar>(
    kind: Kind,
    times: &[T],
    is_event: &[bool],
    x_eval: T,
) -> Result<MonotoneModel<T>> {
    if !(x_eval > T::zero()) || !x_eval.is_finite() {
        return Err(Error::BoundaryEvaluation(format!("x = {x_eval} must be positive")));
    }
    let risk = risk_sets(times, is_event)?;
    let ones = vec![T::one(); times.len()];
    let (d, r) = risk.weighted_counts(&ones);
    let mut surv = Vec::with_capacity(d.len());
    let mut s = T::one();
    for (&dk, &rk) in d.iter().zip(&r) {
        if dk > T::zero() {
            s = s * (T::one() - dk / rk);
        }
        surv.push(s);
    }
    let hi = risk.times[risk.times.len() - 1].max(x_eval);
    MonotoneModel::from_components(
        kind,
        x_eval,
        Components::Survival { risk, d, r, surv, hi, hazard: kind == Kind::Hazard },
    )
}

/// Density estimator from right-censored data, `Gamma = 1 - Kaplan-Meier`.
pub fn build_censored_density<T: Scalar>(
    times: &[T],
    is_event: &[bool],
    x_eval: T,
) -> Result<MonotoneModel<T>> {
    survival_model(Kind::CensoredDensity, times, is_event, x_eval)
}

/// Hazard estimator: `Gamma = 1 - Kaplan-Meier`, `Phi = int_0^x S`.
pub fn build_hazard<T: Scalar>(
    times: &[T],
    is_event: &[bool],
    x_eval: T,
) -> Result<MonotoneModel<T>> {
    survival_model(Kind::Hazard, times, is_event, x_eval)
}

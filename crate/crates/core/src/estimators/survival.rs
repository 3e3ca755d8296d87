use crate::error::{Error, Result};
use crate::gcm::StepFn;
use crate::scalar::Scalar;

/// Product-limit fit on the distinct observed times.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalFit<T> {
    /// Distinct observed times, ascending.
    pub times: Vec<T>,
    /// Kaplan-Meier survival; stays at its last value after the largest time.
    pub survival: StepFn<T>,
    pub at_risk: Vec<usize>,
    pub events: Vec<usize>,
}

/// Observations grouped by distinct time.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RiskSets<T> {
    pub times: Vec<T>,
    /// Distinct-time index of each observation.
    pub slot: Vec<usize>,
    pub is_event: Vec<bool>,
}

pub(crate) fn risk_sets<T: Scalar>(times: &[T], is_event: &[bool]) -> Result<RiskSets<T>> {
    if times.len() != is_event.len() {
        return Err(Error::LengthMismatch(times.len(), is_event.len()));
    }
    if times.is_empty() {
        return Err(Error::EmptyData);
    }
    if let Some(i) = times.iter().position(|t| !(t.is_finite() && *t > T::zero())) {
        return Err(Error::InvalidData(format!("time at row {i} must be positive and finite")));
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].partial_cmp(&times[b]).expect("finite"));
    let mut distinct: Vec<T> = Vec::new();
    let mut slot = vec![0; times.len()];
    for &i in &order {
        if distinct.last() != Some(&times[i]) {
            distinct.push(times[i]);
        }
        slot[i] = distinct.len() - 1;
    }
    Ok(RiskSets { times: distinct, slot, is_event: is_event.to_vec() })
}

impl<T: Scalar> RiskSets<T> {
    /// Weighted event counts and risk-set sizes per distinct time.
    pub fn weighted_counts(&self, w: &[T]) -> (Vec<T>, Vec<T>) {
        let k = self.times.len();
        let mut d = vec![T::zero(); k];
        let mut at = vec![T::zero(); k];
        for (i, &s) in self.slot.iter().enumerate() {
            at[s] = at[s] + w[i];
            if self.is_event[i] {
                d[s] = d[s] + w[i];
            }
        }
        let mut r = vec![T::zero(); k];
        let mut acc = T::zero();
        for s in (0..k).rev() {
            acc = acc + at[s];
            r[s] = acc;
        }
        (d, r)
    }
}

/// Kaplan-Meier estimator `S(t) = prod_{t_i <= t} (1 - d_i / r_i)`.
pub fn kaplan_meier<T: Scalar>(times: &[T], is_event: &[bool]) -> Result<SurvivalFit<T>> {
    let rs = risk_sets(times, is_event)?;
    let ones = vec![T::one(); times.len()];
    let (d, r) = rs.weighted_counts(&ones);
    let mut values = Vec::with_capacity(rs.times.len());
    let mut s = T::one();
    for (&dk, &rk) in d.iter().zip(&r) {
        if dk > T::zero() {
            s = s * (T::one() - dk / rk);
        }
        values.push(s);
    }
    let hi = *rs.times.last().unwrap();
    let survival = StepFn::from_parts(rs.times.clone(), values, T::zero(), hi, T::one());
    let to_count = |v: &T| v.to_usize().expect("integral count");
    Ok(SurvivalFit {
        times: rs.times,
        survival,
        at_risk: r.iter().map(to_count).collect(),
        events: d.iter().map(to_count).collect(),
    })
}

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Right-continuous step function on `[domain_lo, domain_hi]`.
///
/// The value on `[domain_lo, knots[0])` is `value_before_first`; the value on
/// `[knots[i], knots[i + 1])` is `values[i]`. Evaluation outside the domain
/// follows the same rule, so the function extends as a constant on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFn<T> {
    knots: Vec<T>,
    values: Vec<T>,
    domain_lo: T,
    domain_hi: T,
    value_before_first: T,
}

impl<T: Scalar> StepFn<T> {
    pub fn new(
        knots: Vec<T>,
        values: Vec<T>,
        domain_lo: T,
        domain_hi: T,
        value_before_first: T,
    ) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::LengthMismatch(knots.len(), values.len()));
        }
        for (i, w) in knots.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::UnsortedInput(i + 1));
            }
        }
        if let Some(i) = knots
            .iter()
            .chain(values.iter())
            .position(|v| !v.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        if !value_before_first.is_finite() || !domain_lo.is_finite() || !domain_hi.is_finite() {
            return Err(Error::NonFinite(0));
        }
        if domain_lo > domain_hi {
            return Err(Error::InvalidArgument("domain_lo > domain_hi".into()));
        }
        if let (Some(&first), Some(&last)) = (knots.first(), knots.last()) {
            if first < domain_lo || last > domain_hi {
                return Err(Error::OutOfDomain {
                    value: if first < domain_lo { first } else { last }.to_f64_lossy(),
                    lo: domain_lo.to_f64_lossy(),
                    hi: domain_hi.to_f64_lossy(),
                });
            }
        }
        Ok(Self::from_parts(knots, values, domain_lo, domain_hi, value_before_first))
    }

    /// Constructor for callers that already guarantee the invariants.
    pub(crate) fn from_parts(
        knots: Vec<T>,
        values: Vec<T>,
        domain_lo: T,
        domain_hi: T,
        value_before_first: T,
    ) -> Self {
        debug_assert_eq!(knots.len(), values.len());
        StepFn {
            knots,
            values,
            domain_lo,
            domain_hi,
            value_before_first,
        }
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn domain(&self) -> (T, T) {
        (self.domain_lo, self.domain_hi)
    }

    pub fn value_before_first(&self) -> T {
        self.value_before_first
    }

    /// Nondecreasing values, including the step from `value_before_first`.
    pub fn is_monotone(&self) -> bool {
        let mut prev = self.value_before_first;
        for &v in &self.values {
            if v < prev {
                return false;
            }
            prev = v;
        }
        true
    }

    /// Largest value taken by a monotone step function.
    pub fn sup(&self) -> T {
        self.values.last().copied().unwrap_or(self.value_before_first)
    }

    pub fn eval(&self, x: T) -> T {
        let idx = self.knots.partition_point(|&k| k <= x);
        if idx == 0 {
            self.value_before_first
        } else {
            self.values[idx - 1]
        }
    }

    pub fn left_limit(&self, x: T) -> T {
        let idx = self.knots.partition_point(|&k| k < x);
        if idx == 0 {
            self.value_before_first
        } else {
            self.values[idx - 1]
        }
    }

    /// `inf{u in [domain_lo, domain_hi] : f(u) >= y}` for a monotone `f`.
    pub fn generalized_inverse(&self, y: T) -> Result<T> {
        if y <= self.eval(self.domain_lo) {
            return Ok(self.domain_lo);
        }
        let idx = self.values.partition_point(|&v| v < y);
        if idx == self.values.len() {
            return Err(Error::AboveRange(y.to_f64_lossy()));
        }
        Ok(self.knots[idx].max(self.domain_lo))
    }

    /// `inf{u : f(u) > y}`, the abscissa reached by the inverse from the right.
    pub fn generalized_inverse_right(&self, y: T) -> Option<T> {
        if y < self.eval(self.domain_lo) {
            return Some(self.domain_lo);
        }
        let idx = self.values.partition_point(|&v| v <= y);
        self.knots.get(idx).map(|&k| k.max(self.domain_lo))
    }

    /// Pointwise combination of two step functions sharing the same knots.
    pub fn zip_with(&self, other: &StepFn<T>, f: impl Fn(T, T) -> T) -> Result<StepFn<T>> {
        if self.knots != other.knots {
            return Err(Error::InvalidArgument("step functions have different knots".into()));
        }
        Ok(StepFn {
            knots: self.knots.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            domain_lo: self.domain_lo,
            domain_hi: self.domain_hi,
            value_before_first: f(self.value_before_first, other.value_before_first),
        })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> StepFn<T> {
        StepFn {
            knots: self.knots.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            domain_lo: self.domain_lo,
            domain_hi: self.domain_hi,
            value_before_first: f(self.value_before_first),
        }
    }

    /// True when every value (including the one before the first knot) is zero.
    pub fn is_zero(&self) -> bool {
        self.value_before_first == T::zero() && self.values.iter().all(|&v| v == T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cdf() -> StepFn<f64> {
        StepFn::new(vec![1.0, 2.0, 3.0], vec![1.0 / 3.0, 2.0 / 3.0, 1.0], 0.0, 4.0, 0.0).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let f = cdf();
        assert_eq!(f.generalized_inverse(0.5).unwrap(), 2.0);
        assert_eq!(f.generalized_inverse(0.0).unwrap(), 0.0);
        assert_eq!(f.generalized_inverse(1.0).unwrap(), 3.0);
        assert!(matches!(f.generalized_inverse(1.5), Err(Error::AboveRange(_))));
    }

    #[test]
    fn eval_and_limits() {
        let f = cdf();
        assert_eq!(f.eval(0.5), 0.0);
        assert_eq!(f.eval(1.0), 1.0 / 3.0);
        assert_eq!(f.left_limit(1.0), 0.0);
        assert_eq!(f.eval(10.0), 1.0);
        assert_eq!(f.generalized_inverse_right(1.0 / 3.0), Some(2.0));
        assert_eq!(f.generalized_inverse_right(1.0), None);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            StepFn::new(vec![1.0, 1.0], vec![0.0, 1.0], 0.0, 2.0, 0.0),
            Err(Error::UnsortedInput(1))
        ));
        assert!(StepFn::new(vec![3.0], vec![1.0], 0.0, 2.0, 0.0).is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::scalar::Scalar;

/// A function that can be evaluated on an interval.
pub trait Evaluable<T: Scalar> {
    fn eval(&self, x: T) -> T;
    /// Interval on which `eval` is defined; bounds may be infinite.
    fn domain(&self) -> (T, T);
}

/// Wraps a closure as an [`Evaluable`] on `[lo, hi]`.
pub struct FnEval<F> {
    pub f: F,
    pub lo: f64,
    pub hi: f64,
}

impl<T: Scalar, F: Fn(T) -> T> Evaluable<T> for FnEval<F> {
    fn eval(&self, x: T) -> T {
        (self.f)(x)
    }
    fn domain(&self) -> (T, T) {
        (T::lit(self.lo), T::lit(self.hi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NdMethod {
    /// Monomial approximation from a single forward increment.
    Ma,
    /// Forward difference of order `j + 1`.
    Fd,
    /// Bias-reduced combination of increments at `c_k * eps`.
    Br,
}

/// Numerical-derivative specification targeting `D_j = d^{j+1} Upsilon / (j+1)!`.
#[derive(Debug, Clone, PartialEq)]
pub struct NdSpec<T> {
    pub method: NdMethod,
    pub j: u32,
    pub s_lower: u32,
    pub c: Vec<T>,
    pub eps: T,
}

impl<T: Scalar> NdSpec<T> {
    pub fn ma(j: u32, eps: T) -> Self {
        NdSpec { method: NdMethod::Ma, j, s_lower: j, c: Vec::new(), eps }
    }

    pub fn fd(j: u32, eps: T) -> Self {
        NdSpec { method: NdMethod::Fd, j, s_lower: j, c: Vec::new(), eps }
    }

    pub fn br(j: u32, s_lower: u32, c: Vec<T>, eps: T) -> Self {
        NdSpec { method: NdMethod::Br, j, s_lower, c, eps }
    }

    /// Bias-reduced estimator with `s_lower = 3` and `c = (1, -1, 2, -2)`.
    pub fn default_br(j: u32, eps: T) -> Self {
        Self::br(j, 3, default_offsets(), eps)
    }

    /// Multiples of `eps` at which the function is evaluated.
    pub fn offsets(&self) -> Vec<T> {
        match self.method {
            NdMethod::Ma => vec![T::one()],
            NdMethod::Fd => (1..=self.j + 1).map(|k| T::from_count(k as usize)).collect(),
            NdMethod::Br => self.c.clone(),
        }
    }
}

/// Symmetric offsets `(1, -1, 2, -2)`.
pub fn default_offsets<T: Scalar>() -> Vec<T> {
    [1.0, -1.0, 2.0, -2.0].iter().map(|&v| T::lit(v)).collect()
}

/// Weights `lambda` with `sum_k lambda_k c_k^p = 1{p = j + 1}` for `p = 1..=s_lower + 1`.
pub fn br_coefficients<T: Scalar>(j: u32, s_lower: u32, c: &[T]) -> Result<Vec<T>> {
    let m = s_lower as usize + 1;
    if c.len() != m {
        return Err(Error::InvalidArgument(format!(
            "need {m} offsets for s_lower = {s_lower}, got {}",
            c.len()
        )));
    }
    if j == 0 || j > s_lower {
        return Err(Error::InvalidArgument(format!(
            "order j = {j} must satisfy 1 <= j <= s_lower = {s_lower}"
        )));
    }
    let a: Vec<Vec<T>> = (1..=m)
        .map(|p| c.iter().map(|&ck| ck.powi(p as i32)).collect())
        .collect();
    let mut rhs = vec![T::zero(); m];
    rhs[j as usize] = T::one();
    let lambda = solve(a, rhs).ok_or(Error::SingularCoefficientSystem)?;
    let residual = (1..=m)
        .map(|p| {
            let s: T = lambda.iter().zip(c).map(|(&l, &ck)| l * ck.powi(p as i32)).sum();
            let target = if p == j as usize + 1 { T::one() } else { T::zero() };
            (s - target).abs()
        })
        .fold(T::zero(), T::max);
    let scale = c.iter().fold(T::one(), |s, v| s.max(v.abs())).powi(m as i32);
    if !(residual <= T::lit(1e-6).max(T::epsilon() * T::lit(1e3)) * scale) {
        return Err(Error::SingularCoefficientSystem);
    }
    Ok(lambda)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Numerical-derivative estimate of `D_j` at `x_eval`.
///
/// The forward-difference form is divided by `(j+1)!` so that all three
/// methods target the same coefficient.
pub fn estimate_d<T: Scalar, E: Evaluable<T> + ?Sized>(
    ups: &E,
    spec: &NdSpec<T>,
    x_eval: T,
) -> Result<T> {
    if !(spec.eps > T::zero()) || !spec.eps.is_finite() {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    if spec.j == 0 {
        return Err(Error::InvalidArgument("order j must be at least 1".into()));
    }
    let (lo, hi) = ups.domain();
    let offsets = spec.offsets();
    for &o in &offsets {
        let z = x_eval + o * spec.eps;
        if z < lo || z > hi {
            return Err(Error::StepOutOfDomain(z.to_f64_lossy()));
        }
    }
    let base = ups.eval(x_eval);
    let incr = |o: T| ups.eval(x_eval + o * spec.eps) - base;
    let scale = spec.eps.powi(spec.j as i32 + 1);
    let total = match spec.method {
        NdMethod::Ma => incr(T::one()),
        NdMethod::Fd => {
            let m = spec.j + 1;
            let s = (1..=m).fold(T::zero(), |acc, k| {
                let sign = if (k + spec.j + 1).is_multiple_of(2) { T::one() } else { -T::one() };
                acc + sign * T::lit(binomial(m, k)) * incr(T::from_count(k as usize))
            });
            s / T::lit(factorial(m))
        }
        NdMethod::Br => {
            let lambda = br_coefficients(spec.j, spec.s_lower, &spec.c)?;
            lambda
                .iter()
                .zip(&offsets)
                .fold(T::zero(), |acc, (&l, &o)| acc + l * incr(o))
        }
    };
    Ok(total / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn default_offset_weights() {
        let c = default_offsets::<f64>();
        let l1 = br_coefficients(1, 3, &c).unwrap();
        for (got, want) in l1.iter().zip([2.0 / 3.0, 2.0 / 3.0, -1.0 / 24.0, -1.0 / 24.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        let l3 = br_coefficients(3, 3, &c).unwrap();
        for (got, want) in l3.iter().zip([-1.0 / 6.0, -1.0 / 6.0, 1.0 / 24.0, 1.0 / 24.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_by_two_system() {
        let l = br_coefficients(1, 1, &[1.0, 2.0]).unwrap();
        assert_abs_diff_eq!(l[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn singular_offsets() {
        assert_eq!(
            br_coefficients(1, 3, &[1.0, 1.0, 2.0, -2.0]),
            Err(Error::SingularCoefficientSystem)
        );
        assert_eq!(
            br_coefficients(1, 1, &[0.0, 2.0]),
            Err(Error::SingularCoefficientSystem)
        );
    }

    fn poly(coefs: &'static [f64]) -> FnEval<impl Fn(f64) -> f64> {
        FnEval {
            f: move |x: f64| coefs.iter().rev().fold(0.0, |acc, &c| acc * x + c),
            lo: -10.0,
            hi: 10.0,
        }
    }

    #[test]
    fn monomials_are_exact_for_every_method() {
        let sq = poly(&[0.0, 0.0, 1.0]);
        for eps in [0.05, 0.3] {
            assert_abs_diff_eq!(estimate_d(&sq, &NdSpec::ma(1, eps), 0.0).unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(estimate_d(&sq, &NdSpec::fd(1, eps), 0.0).unwrap(), 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(
                estimate_d(&sq, &NdSpec::default_br(1, eps), 0.0).unwrap(),
                1.0,
                epsilon = 1e-9
            );
        }
        let quart = poly(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_abs_diff_eq!(
            estimate_d(&quart, &NdSpec::default_br(3, 0.1), 0.0).unwrap(),
            1.0,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(estimate_d(&quart, &NdSpec::fd(3, 0.1), 0.0).unwrap(), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(estimate_d(&quart, &NdSpec::ma(3, 0.1), 0.0).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn offsets_must_stay_in_domain() {
        let f = FnEval { f: |x: f64| x * x, lo: 0.0, hi: 1.0 };
        assert!(matches!(
            estimate_d(&f, &NdSpec::default_br(1, 0.2), 0.1),
            Err(Error::StepOutOfDomain(_))
        ));
    }
}

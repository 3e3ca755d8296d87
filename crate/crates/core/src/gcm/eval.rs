use crate::error::{Error, Result};
use crate::gcm::{PwLinear, StepFn};
use crate::mean_function::PerturbationPoly;
use crate::scalar::Scalar;

/// A right-continuous function with computable one-sided limits.
pub trait Piecewise<T: Scalar> {
    fn value(&self, x: T) -> T;
    fn left_limit(&self, x: T) -> T;
    fn right_limit(&self, x: T) -> T {
        self.value(x)
    }
}

impl<T: Scalar> Piecewise<T> for StepFn<T> {
    fn value(&self, x: T) -> T {
        self.eval(x)
    }
    fn left_limit(&self, x: T) -> T {
        StepFn::left_limit(self, x)
    }
}

impl<T: Scalar> Piecewise<T> for PwLinear<T> {
    fn value(&self, x: T) -> T {
        self.eval(x)
    }
    fn left_limit(&self, x: T) -> T {
        self.eval(x)
    }
}

/// `x -> step(x) + linear(x) + poly(x - center)`.
///
/// This is the objective whose composite with a generalized inverse is fed to
/// the hull: the step part carries empirical jumps, the optional linear part
/// carries continuous-scale corrections and the polynomial is the mean
/// perturbation of the reshaped bootstrap.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalFn<T> {
    pub step: StepFn<T>,
    pub linear: Option<PwLinear<T>>,
    pub poly: Option<PerturbationPoly<T>>,
    pub center: T,
}

impl<T: Scalar> EvalFn<T> {
    pub fn from_step(step: StepFn<T>) -> Self {
        let center = step.domain().0;
        EvalFn {
            step,
            linear: None,
            poly: None,
            center,
        }
    }

    /// True when the function has a non-constant continuous component.
    pub fn has_smooth_part(&self) -> bool {
        self.linear.as_ref().is_some_and(|l| !l.is_zero())
            || self.poly.as_ref().is_some_and(|p| !p.is_zero())
    }

    fn smooth(&self, x: T) -> T {
        let mut s = T::zero();
        if let Some(l) = &self.linear {
            s = s + l.eval(x);
        }
        if let Some(p) = &self.poly {
            s = s + p.eval(x - self.center);
        }
        s
    }

    /// Left derivative of the continuous component at `x`.
    pub fn smooth_left_derivative(&self, x: T) -> T {
        let mut d = T::zero();
        if let Some(l) = &self.linear {
            d = d + l.left_slope(x);
        }
        if let Some(p) = &self.poly {
            d = d + p.derivative(x - self.center);
        }
        d
    }
}

impl<T: Scalar> Piecewise<T> for EvalFn<T> {
    fn value(&self, x: T) -> T {
        self.step.eval(x) + self.smooth(x)
    }
    fn left_limit(&self, x: T) -> T {
        self.step.left_limit(x) + self.smooth(x)
    }
}

/// `y -> gamma(phi^-(y))` for two step functions, viewed as a function of `y`.
#[derive(Debug, Clone, Copy)]
pub struct Composition<'a, T> {
    pub gamma: &'a StepFn<T>,
    pub phi: &'a StepFn<T>,
}

impl<T: Scalar> Composition<'_, T> {
    fn inverse(&self, y: T) -> T {
        self.phi
            .generalized_inverse(y)
            .unwrap_or_else(|_| self.phi.domain().1)
    }
}

impl<T: Scalar> Piecewise<T> for Composition<'_, T> {
    fn value(&self, y: T) -> T {
        self.gamma.eval(self.inverse(y))
    }
    // The generalized inverse is left-continuous.
    fn left_limit(&self, y: T) -> T {
        self.value(y)
    }
    fn right_limit(&self, y: T) -> T {
        match self.phi.generalized_inverse_right(y) {
            Some(x) => self.gamma.eval(x),
            None => self.value(y),
        }
    }
}

/// Evaluation points whose lower hull is the GCM of the lower semicontinuous
/// minorant of `h` on `[lo, hi]`, for `h` affine between breakpoints.
///
/// Interior breakpoints take the smallest of the three one-sided values;
/// `lo` and `hi` are always included with their raw values.
pub fn lsc_breakpoint_values<T: Scalar, F: Piecewise<T> + ?Sized>(
    h: &F,
    breakpoints: &[T],
    lo: T,
    hi: T,
) -> Result<Vec<(T, T)>> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument("lo must be below hi".into()));
    }
    for (i, &b) in breakpoints.iter().enumerate() {
        if b < lo || b > hi {
            return Err(Error::OutOfDomain {
                value: b.to_f64_lossy(),
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
            });
        }
        if i > 0 && breakpoints[i - 1] > b {
            return Err(Error::UnsortedInput(i));
        }
    }
    let mut out = Vec::with_capacity(breakpoints.len() + 2);
    out.push((lo, h.value(lo)));
    for &b in breakpoints {
        if b == lo || b == hi || b == out[out.len() - 1].0 {
            continue;
        }
        let v = h.left_limit(b).min(h.value(b)).min(h.right_limit(b));
        out.push((b, v));
    }
    out.push((hi, h.value(hi)));
    Ok(out)
}

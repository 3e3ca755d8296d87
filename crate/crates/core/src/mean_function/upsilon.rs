use crate::estimators::MonotoneModel;
use crate::gcm::{Scale, StepFn};
use crate::mean_function::Evaluable;
use crate::scalar::Scalar;

/// `x -> gamma(x) - theta * phi(x)` for a fitted model.
#[derive(Debug, Clone, Copy)]
pub struct Upsilon<'a, T> {
    gamma: &'a StepFn<T>,
    phi: &'a Scale<T>,
    theta: T,
    domain: (T, T),
}

impl<T: Scalar> Upsilon<'_, T> {
    pub fn theta(&self) -> T {
        self.theta
    }
}

impl<T: Scalar> Evaluable<T> for Upsilon<'_, T> {
    fn eval(&self, x: T) -> T {
        self.gamma.eval(x) - self.theta * self.phi.eval(x)
    }
    fn domain(&self) -> (T, T) {
        self.domain
    }
}

/// Builds the centred primitive used by the derivative estimators.
pub fn upsilon_hat<T: Scalar>(model: &MonotoneModel<T>, theta_hat: T) -> Upsilon<'_, T> {
    Upsilon {
        gamma: model.gamma(),
        phi: model.phi(),
        theta: theta_hat,
        domain: model.nd_domain(),
    }
}

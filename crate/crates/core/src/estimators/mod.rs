//! Generalized Grenander-type estimators.

mod builders;
mod model;
mod survival;

pub use builders::{
    build_censored_density, build_current_status, build_density, build_hazard, build_isoreg,
    build_isoreg_with, TiePolicy,
};
pub use model::{Kind, MonotoneModel};
pub use survival::{kaplan_meier, SurvivalFit};

use crate::error::Result;
use crate::gcm::{gcm_left_slope, EvalFn};
use crate::scalar::Scalar;

/// Default number of uniform grid cells used when the composite has a
/// smooth part.
pub const DEFAULT_GRID: usize = 2048;

/// `theta(x) = left derivative of GCM_[0,u](Gamma o Phi^-) at Phi(x)`.
pub fn generalized_grenander<T: Scalar>(model: &MonotoneModel<T>) -> Result<T> {
    let h = EvalFn::from_step(model.gamma().clone());
    gcm_left_slope(&h, model.phi(), model.u_hat(), model.x_eval(), DEFAULT_GRID)
}

/// Raw observations for one of the estimator kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset<T> {
    Density { samples: Vec<T> },
    Isoreg { x: Vec<T>, y: Vec<T> },
    CensoredDensity { times: Vec<T>, is_event: Vec<bool> },
    Hazard { times: Vec<T>, is_event: Vec<bool> },
    CurrentStatus { check_times: Vec<T>, indicators: Vec<T> },
}

impl<T: Scalar> Dataset<T> {
    pub fn kind(&self) -> Kind {
        match self {
            Dataset::Density { .. } => Kind::Density,
            Dataset::Isoreg { .. } => Kind::Isoreg,
            Dataset::CensoredDensity { .. } => Kind::CensoredDensity,
            Dataset::Hazard { .. } => Kind::Hazard,
            Dataset::CurrentStatus { .. } => Kind::CurrentStatus,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Dataset::Density { samples } => samples.len(),
            Dataset::Isoreg { x, .. } => x.len(),
            Dataset::CensoredDensity { times, .. } | Dataset::Hazard { times, .. } => times.len(),
            Dataset::CurrentStatus { check_times, .. } => check_times.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn build(&self, x_eval: T) -> Result<MonotoneModel<T>> {
        match self {
            Dataset::Density { samples } => build_density(samples, x_eval),
            Dataset::Isoreg { x, y } => build_isoreg(x, y, x_eval),
            Dataset::CensoredDensity { times, is_event } => {
                build_censored_density(times, is_event, x_eval)
            }
            Dataset::Hazard { times, is_event } => build_hazard(times, is_event, x_eval),
            Dataset::CurrentStatus { check_times, indicators } => {
                build_current_status(check_times, indicators, x_eval)
            }
        }
    }

    /// Regression pairs, when the kind has them.
    pub fn regression_pairs(&self) -> Option<(&[T], &[T])> {
        match self {
            Dataset::Isoreg { x, y } => Some((x, y)),
            Dataset::CurrentStatus { check_times, indicators } => Some((check_times, indicators)),
            _ => None,
        }
    }

    /// Observed times or samples for the density-type kinds.
    pub fn sample_values(&self) -> Option<&[T]> {
        match self {
            Dataset::Density { samples } => Some(samples),
            Dataset::CensoredDensity { times, .. } | Dataset::Hazard { times, .. } => Some(times),
            _ => None,
        }
    }
}

/// Convenience wrapper: build and evaluate in one call.
pub fn estimate<T: Scalar>(data: &Dataset<T>, x_eval: T) -> Result<T> {
    let model = data.build(x_eval)?;
    generalized_grenander(&model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::gcm::Scale;

    #[test]
    fn isoreg_hand_example() {
        let m = build_isoreg::<f64>(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0], 3.0).unwrap();
        assert_eq!(generalized_grenander(&m).unwrap(), 2.0);
        let m = build_isoreg::<f64>(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0], 1.0).unwrap();
        assert_eq!(generalized_grenander(&m).unwrap(), 2.0);
    }

    #[test]
    fn isoreg_cusums() {
        let m = build_isoreg::<f64>(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 2.0).unwrap();
        assert_eq!(m.gamma().eval(2.0), 1.0);
        assert!((m.phi().eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.u_hat(), 1.0);
        for (i, &x) in [1.0, 2.0, 3.0].iter().enumerate() {
            let m = build_isoreg::<f64>(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], x).unwrap();
            assert!((generalized_grenander(&m).unwrap() - (i as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_responses_are_handled() {
        let m = build_isoreg::<f64>(&[1.0, 2.0], &[-1.0, -1.0], 1.5).unwrap();
        assert!((generalized_grenander(&m).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicates_are_pooled_or_rejected() {
        let m = build_isoreg::<f64>(&[1.0, 1.0, 2.0], &[0.0, 2.0, 3.0], 1.0).unwrap();
        assert!((generalized_grenander(&m).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            build_isoreg_with::<f64>(&[1.0, 1.0, 2.0], &[0.0, 2.0, 3.0], 1.0, TiePolicy::Reject),
            Err(Error::DuplicateAbscissae(_))
        ));
    }

    #[test]
    fn isoreg_boundary() {
        let m = build_isoreg::<f64>(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 0.5).unwrap();
        assert!(matches!(generalized_grenander(&m), Err(Error::BoundaryEvaluation(_))));
        let m = build_isoreg::<f64>(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 3.5).unwrap();
        assert!(matches!(generalized_grenander(&m), Err(Error::BoundaryEvaluation(_))));
    }

    #[test]
    fn density_hand_example() {
        let m = build_density::<f64>(&[0.25, 0.5, 0.75], 0.5).unwrap();
        assert_eq!(m.u_hat(), 0.75);
        assert!((generalized_grenander(&m).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let m = build_density::<f64>(&[0.25, 0.5, 0.75], 0.9).unwrap();
        assert_eq!(m.u_hat(), 0.9);
    }

    #[test]
    fn censored_matches_density_without_censoring() {
        let t = [0.2, 0.9, 0.4, 1.3, 0.6];
        let a = build_density::<f64>(&t, 0.7).unwrap();
        let b = build_censored_density::<f64>(&t, &[true; 5], 0.7).unwrap();
        let (ta, tb) = (generalized_grenander(&a).unwrap(), generalized_grenander(&b).unwrap());
        assert!((ta - tb).abs() < 1e-12);
        for &q in &[0.1, 0.5, 1.0, 1.4] {
            assert!((a.gamma().eval(q) - b.gamma().eval(q)).abs() < 1e-15);
        }
    }

    #[test]
    fn censored_hand_value() {
        let m = build_censored_density::<f64>(&[1.0, 2.0, 3.0], &[true, false, true], 1.5).unwrap();
        assert!((m.gamma().eval(1.5) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.u_hat(), 3.0);
    }

    #[test]
    fn hazard_single_event() {
        let m = build_hazard::<f64>(&[1.0], &[true], 0.5).unwrap();
        match m.phi() {
            Scale::Linear(l) => {
                assert_eq!(l.eval(0.5), 0.5);
                assert_eq!(l.eval(1.0), 1.0);
            }
            Scale::Step(_) => panic!("hazard scale must be continuous"),
        }
        assert_eq!(m.u_hat(), 1.0);
    }

    #[test]
    fn current_status_degenerate() {
        let c = [0.1, 0.5, 0.9, 0.3];
        let m = build_current_status::<f64>(&c, &[1.0; 4], 0.5).unwrap();
        assert!((generalized_grenander(&m).unwrap() - 1.0).abs() < 1e-12);
        let m = build_current_status::<f64>(&c, &[0.0; 4], 0.5).unwrap();
        assert_eq!(generalized_grenander(&m).unwrap(), 0.0);
        assert!(build_current_status::<f64>(&c, &[0.0, 2.0, 1.0, 0.0], 0.5).is_err());
    }
}

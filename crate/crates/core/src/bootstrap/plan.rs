use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bootstrap::WeightScheme;
use crate::error::{Error, Result};
use crate::mean_function::QMode;

/// How bootstrap draws are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BootstrapMode {
    /// Reweighted primitives recentred with the estimated mean perturbation.
    #[default]
    Reshaped,
    /// Estimator recomputed on the reweighted primitives.
    Naive,
    /// Resamples of size `m` (default `ceil(sqrt(n))`) rescaled with the known rate.
    MOutOfN { m: Option<usize> },
}

/// Step-size rule for the derivative estimators.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Parametric rule of thumb.
    #[default]
    Rot,
    Fixed(f64),
}

impl std::str::FromStr for StepRule {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "rot" {
            return Ok(StepRule::Rot);
        }
        match s.strip_prefix("fixed:").map(str::parse::<f64>) {
            Some(Ok(e)) if e > 0.0 && e.is_finite() => Ok(StepRule::Fixed(e)),
            _ => Err(format!("step must be 'rot' or 'fixed:<positive number>', got '{s}'")),
        }
    }
}

/// Everything needed to turn a dataset into a confidence interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapPlan {
    /// Number of bootstrap draws `B`.
    pub replications: usize,
    pub scheme: WeightScheme,
    pub mode: BootstrapMode,
    pub q_mode: QMode,
    pub step: StepRule,
    pub alpha: f64,
    pub seed: u64,
    pub grid_points: usize,
    /// Derivative values used instead of estimates (oracle plans).
    pub d_override: Option<BTreeMap<u32, f64>>,
    /// Offsets of the bias-reduced derivative estimator.
    pub offsets: Vec<f64>,
}

impl Default for BootstrapPlan {
    fn default() -> Self {
        BootstrapPlan {
            replications: 2000,
            scheme: WeightScheme::Multinomial,
            mode: BootstrapMode::Reshaped,
            q_mode: QMode::Robust(3),
            step: StepRule::Rot,
            alpha: 0.05,
            seed: 0,
            grid_points: crate::estimators::DEFAULT_GRID,
            d_override: None,
            offsets: vec![1.0, -1.0, 2.0, -2.0],
        }
    }
}

impl BootstrapPlan {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidArgument("at least one replication is required".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha = {} not in (0, 1)", self.alpha)));
        }
        if self.grid_points == 0 {
            return Err(Error::InvalidArgument("grid_points must be positive".into()));
        }
        if let StepRule::Fixed(e) = self.step {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidArgument("fixed step must be positive".into()));
            }
        }
        if matches!(self.mode, BootstrapMode::MOutOfN { .. })
            && matches!(self.q_mode, QMode::Robust(_))
        {
            return Err(Error::InvalidArgument(
                "m-out-of-n bootstrap needs a known characteristic exponent".into(),
            ));
        }
        Ok(())
    }
}

/// Localization rate `a_n = n^{1/(1+2q)}`.
pub fn localization_rate(n: usize, q: u32) -> f64 {
    (n as f64).powf(1.0 / (1.0 + 2.0 * f64::from(q)))
}

/// Convergence rate `r_n = n^{q/(1+2q)}`.
pub fn convergence_rate(n: usize, q: u32) -> f64 {
    (n as f64).powf(f64::from(q) / (1.0 + 2.0 * f64::from(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_defaults() {
        let plan: BootstrapPlan =
            serde_json::from_str(r#"{"mode": "naive", "step": {"fixed": 0.1}}"#).unwrap();
        assert_eq!(plan.mode, BootstrapMode::Naive);
        assert_eq!(plan.step, StepRule::Fixed(0.1));
        assert_eq!(plan.replications, 2000);
        let back: BootstrapPlan = serde_json::from_str(&serde_json::to_string(&plan).unwrap()).unwrap();
        assert_eq!(back, plan);
    }

    #[test]
    fn validation() {
        let mut p = BootstrapPlan::default();
        assert!(p.validate().is_ok());
        p.mode = BootstrapMode::MOutOfN { m: None };
        assert!(p.validate().is_err());
        p.q_mode = QMode::Known(1);
        assert!(p.validate().is_ok());
        p.alpha = 1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn rates() {
        assert!((convergence_rate(1000, 1) - 10.0).abs() < 1e-12);
        assert!((localization_rate(1000, 1) - 10.0).abs() < 1e-12);
        assert!((convergence_rate(128, 3) - 128f64.powf(3.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn step_rule_parsing() {
        assert_eq!("rot".parse::<StepRule>().unwrap(), StepRule::Rot);
        assert_eq!("fixed:0.25".parse::<StepRule>().unwrap(), StepRule::Fixed(0.25));
        assert!("fixed:-1".parse::<StepRule>().is_err());
    }
}

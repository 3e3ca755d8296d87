use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the three regression designs of the simulation study, all with
/// `X ~ U(0,1)`, `eps ~ N(0,1)` and evaluation point `0.5`.
///
/// * Model 1: `Y = 2 exp(X - 0.5) + eps`
/// * Model 2: `Y = 2 (X - 0.5) + exp(X) eps`
/// * Model 3: `Y = 24 exp(X - 0.5) - 24 (X - 0.5) - 12 (X - 0.5)^2 + 0.1 eps`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgpModel {
    pub id: u8,
    /// Regression function at the evaluation point.
    pub theta0: f64,
    /// Characteristic exponent at the evaluation point.
    pub q_true: u32,
    /// Limiting mean-function coefficient `D_q` at the evaluation point.
    pub d_true: f64,
}

/// Evaluation point shared by all models.
pub const EVAL_POINT: f64 = 0.5;

impl DgpModel {
    pub fn new(id: u8) -> Result<Self> {
        let (theta0, q_true) = match id {
            1 => (2.0, 1),
            2 => (0.0, 1),
            3 => (24.0, 3),
            _ => return Err(Error::InvalidArgument(format!("model id {id} not in 1..=3"))),
        };
        // f0 = 1 and the first nonzero derivative gives D_q = 1 in every model.
        Ok(DgpModel { id, theta0, q_true, d_true: 1.0 })
    }

    /// Regression function.
    pub fn mean(&self, x: f64) -> f64 {
        let v = x - 0.5;
        match self.id {
            1 => 2.0 * v.exp(),
            2 => 2.0 * v,
            _ => 24.0 * v.exp() - 24.0 * v - 12.0 * v * v,
        }
    }

    /// Noise scale at `x`.
    pub fn noise_sd(&self, x: f64) -> f64 {
        match self.id {
            1 => 1.0,
            2 => x.exp(),
            _ => 0.1,
        }
    }
}

/// `n` i.i.d. pairs from `model`, as `(x, y)` columns.
pub fn generate_dgp<R: Rng + ?Sized>(model: &DgpModel, n: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let xi: f64 = rng.random();
        let e: f64 = StandardNormal.sample(rng);
        x.push(xi);
        y.push(model.mean(xi) + model.noise_sd(xi) * e);
    }
    (x, y)
}

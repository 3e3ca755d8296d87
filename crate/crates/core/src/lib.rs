#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Generalized Grenander-type monotone estimators with bootstrap-assisted
//! confidence intervals.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`. The Monte Carlo harness and the command
//! line work in `f64`.

pub mod bootstrap;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod gcm;
mod linalg;
pub mod mc;
pub mod mean_function;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type StepFn64 = gcm::StepFn<f64>;
pub type PwLinear64 = gcm::PwLinear<f64>;
pub type Hull64 = gcm::Hull<f64>;
pub type EvalFn64 = gcm::EvalFn<f64>;
pub type Scale64 = gcm::Scale<f64>;
pub type MonotoneModel64 = estimators::MonotoneModel<f64>;
pub type Dataset64 = estimators::Dataset<f64>;
pub type PerturbationPoly64 = mean_function::PerturbationPoly<f64>;
pub type CiResult64 = bootstrap::CiResult<f64>;

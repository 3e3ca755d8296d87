//! Ingredients of the estimated mean perturbation: the centred primitive,
//! numerical-derivative estimators, the perturbation polynomial and step sizes.

mod nd;
mod perturbation;
mod step;
mod upsilon;

pub use nd::{br_coefficients, default_offsets, estimate_d, Evaluable, FnEval, NdMethod, NdSpec};
pub use perturbation::{build_perturbation, PerturbationPoly, QMode};
pub use step::{
    mse_optimal_step, rot_constants, rot_fallback, rot_fit, rot_step_from_constants,
    rot_step_size, rot_step_size_density, step_for_bias_order, step_or_fallback, RotFit,
    StepSizeConstants,
};
pub use upsilon::{upsilon_hat, Upsilon};

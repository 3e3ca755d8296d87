//! Exchangeable-weight bootstrap: weights, reshaped and naive draws,
//! m-out-of-n resampling and percentile intervals.

mod ci;
mod draws;
mod pipeline;
mod plan;
mod weights;

pub use ci::{m_of_n_ci, percentile_ci, type1_quantile, CiResult, DrawSummary};
pub use draws::{naive_draw, reshaped_draw};
pub use pipeline::{
    derivative_estimates, naive_draws, reshaped_draws, run_ci_pipeline, step_size,
    DerivativeEstimates,
};
pub use plan::{convergence_rate, localization_rate, BootstrapMode, BootstrapPlan, StepRule};
pub use weights::{derive_seed, draw_weights, multinomial_counts, stream_rng, WeightScheme};

//! Monte Carlo harness: the three regression designs, the coverage
//! experiment and report rendering.

mod dgp;
mod report;
mod sim;
mod stats;

pub use dgp::{generate_dgp, DgpModel, EVAL_POINT};
pub use report::{emit_report, ReportFormat};
pub use sim::{
    replication_data, run_simulation, run_simulation_with_threads, Method, MethodRow, MethodSpec,
    SimConfig, SimReport,
};
pub use stats::{ks_two_sample, median};

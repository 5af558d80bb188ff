pub mod block;
pub mod config;
pub mod run;
pub mod step;

pub use block::BlockTridiagonal;
pub use config::SolverConfig;
pub use run::{renormalisation_residual, run_steady, run_unsteady, SteadyResult, Trajectory};
pub use step::{ContinuityOutcome, Diagnostics, Solver, StepOutcome};

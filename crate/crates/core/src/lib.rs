//! Viscous multi-constituent mixture flow in one space dimension.
//!
//! Each constituent carries its own density `rho_i` and velocity `u_i`.
//! Constituents are coupled through a viscosity matrix, a momentum exchange
//! matrix and, in the modified model, a common pressure and a common
//! transport velocity.

pub mod error;
pub mod grid;
pub mod io;
pub mod model;
pub mod registry;
pub mod solver;
pub mod state;

pub use error::{Error, Result};
pub use grid::{BoundaryCondition, Grid1D, Reflection};
pub use model::{
    ExchangeMatrix, MixtureModel, MixtureParams, ModelVariant, PressureLaw, ViscosityMatrices,
};
pub use solver::{run_steady, run_unsteady, Solver, SolverConfig};
pub use state::{Field1D, MixtureState};

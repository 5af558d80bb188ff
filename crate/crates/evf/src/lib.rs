//! Periodic spectral laboratory for the effective viscous flux machinery:
//! inverse Laplacian, second-order Riesz transforms, the commutator
//! `Comm(a, b) = (R a) b - a (R b)`, cut-offs and weak-limit experiments.
//!
//! All fields live on `[0, 2 pi)²` sampled on a power-of-two grid.

pub mod field;
pub mod identities;
pub mod profile;
pub mod random;
pub mod report;
pub mod spectral;
pub mod weak_limit;

pub use field::{PeriodicField2D, SymTensor2D, VectorField2D};
pub use identities::{
    check_selfadjoint, comm, comm_expansion_residual, comm_vector, cutoff, cutoff_field,
    div_identity_residual, effective_viscous_flux, renorm_residual, CommExpansion, RenormResidual,
};
pub use random::{FieldSampler, Taper};
pub use report::EvfReport;
pub use spectral::SpectralOps;
pub use weak_limit::{weak_limit_experiment, OscillatorySequenceSpec, WeakLimitTable};

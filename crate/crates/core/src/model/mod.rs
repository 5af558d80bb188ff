pub mod exchange;
pub mod mixture;
pub mod params;
pub mod pressure;
pub mod variant;
pub mod viscosity;

pub use exchange::{momentum_exchange, ExchangeMatrix};
pub use mixture::{
    average_velocity, compensated_sum, concentrations, dissipation_density, total_density,
    viscous_flux_1d,
};
pub use params::{BodyForce, MixtureParams};
pub use pressure::{
    pressure_eval, pressure_potential, pressure_registry, LawParams, Polytropic, PressureLaw,
    TabulatedMonotone, EXISTENCE_GAMMA_THRESHOLD,
};
pub use variant::{model_by_name, model_registry, MixtureModel, ModelVariant, ModifiedModel, OriginalModel};
pub use viscosity::{validate_viscosity, AdmissibilityReport, MatrixStructure, ViscosityMatrices};

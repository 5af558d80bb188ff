pub mod config;
pub mod manufactured;
pub mod output;
pub mod profile;

pub use config::{parse_config, set_parameter, ConfigErrors, ConfigIssue, ParsedConfig, RunConfig, Scenario};
pub use manufactured::{manufactured_case, manufactured_forcing, manufactured_residual, ManufacturedCase};
pub use output::{read_table, write_snapshot, write_timeseries};

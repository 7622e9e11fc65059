//! Configuration, experiment dispatch, figure presets and table output for
//! the `czirok` command-line tool.

pub mod config;
mod error;
pub mod presets;
pub mod run;
pub mod table;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::HarnessError;
pub use presets::{preset, run_preset, Preset};
pub use run::{cell_seed, run_config, run_config_with_threads};
pub use table::{emit, Format, ResultTable};

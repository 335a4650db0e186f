//! Config-driven experiments over the aliasing decomposition: parameter
//! sweeps, the Fourier closed form, the Legendre-Gauss design comparison,
//! ridge bounds, the periodic-chain cluster basis and the unstructured
//! invertibility error.

pub mod config;
pub mod output;
pub mod recipes;
pub mod run;

pub use config::{parse_config, parse_config_str, RunConfig};
pub use run::{run, RunError, RunOptions};

//! Config-driven jobs over the `spinsync` library: steady states, parameter
//! sweeps, phase distributions, blockade loci and perturbative coefficients.

pub mod config;
pub mod output;
pub mod quantity;
pub mod run;

pub use config::{parse_config, ConfigError, JobSpec, Mode};
pub use quantity::Quantity;
pub use run::{execute, JobOutput, Table};

/// Executes `spec` and writes its tables; returns the files created.
pub fn run_job(spec: &JobSpec) -> anyhow::Result<Vec<std::path::PathBuf>> {
    let output = execute(spec)?;
    output::write_output(spec, &output)
}

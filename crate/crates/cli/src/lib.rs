//! Experiment runner behind the `engel` binary.
//!
//! Each subcommand maps a [`RunConfig`] to a [`RunReport`] plus CSV/JSON data files.
//! Nothing here reads the clock except [`RunReport::wall_time`], which is kept out of
//! the serialized report so identical configs produce identical bytes.

mod config;
pub mod fuzzing;
mod output;
mod report;
mod run;

pub use config::{Params, RunConfig};
pub use output::{fmt_float, CsvTable};
pub use report::{Check, RunReport};
pub use run::{run, sweep, DataFile, RunOutput, Subcommand};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed config: {0}")]
    Config(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown subcommand `{0}`")]
    UnknownSubcommand(String),
    #[error(transparent)]
    Core(#[from] engel_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_error!(
    engel_core::algebra::AlgebraError,
    engel_core::spectral::SpectralError,
    engel_core::dispersion::DispersionError,
    engel_core::fourier::FourierError,
    engel_core::wavepacket::WavePacketError
);

//! Wave packets on the Engel group: the ansatz with its correctors, the effective profile
//! flow, residual scaling, transport along X₂ and the second-microlocal profile.

mod packet;
pub mod profile;
mod residual;
mod smicro;

use thiserror::Error;

pub use packet::{build_wavepacket, AnsatzOrder, PhaseAndCenter, ProbeVector, Sigma2, WavePacket, WavePacketSpec};
pub use profile::{gaussian_evolved, gaussian_width_squared, profile_evolve, GaussianProfile, ProfileState};
pub use residual::{
    residual, residual_all_orders, residual_scaling_experiment, transport_demo, FdSteps, ResidualEstimate, ScalingReport, TransportReport, TransportRow,
};
pub use smicro::{second_microlocal_profile_demo, SmicroReport};

#[derive(Debug, Error, PartialEq)]
pub enum WavePacketError {
    #[error("invalid wave-packet spec: {0}")]
    InvalidSpec(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("Φ₁ is not an eigenvector: ‖Hφ − μφ‖ = {0:e}")]
    NotEigenvector(f64),
    #[error("shift {shift} exceeds the grid margin {margin}")]
    ShiftOutOfGrid { shift: f64, margin: f64 },
    #[error("profile mass {fraction:e} near the periodic boundary exceeds {limit:e}")]
    WrapAround { fraction: f64, limit: f64 },
    #[error("finite-difference step {step:e} exceeds ℏ^(3/2)/10 = {limit:e}")]
    StepTooLarge { step: f64, limit: f64 },
    #[error("grid spacing {spacing} does not resolve phase frequency {frequency}; raise the node count")]
    UnderResolved { spacing: f64, frequency: f64 },
    #[error("need at least {needed} values of ℏ, got {got}")]
    TooFewScales { needed: usize, got: usize },
    #[error("sample count must be positive")]
    NoSamples,
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
    #[error(transparent)]
    Dispersion(#[from] crate::dispersion::DispersionError),
}

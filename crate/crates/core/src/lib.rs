//! Numerical and exact laboratory for semiclassical analysis on the Engel group.
//!
//! * [`algebra`]: group law, dilations, BCH, left-invariant fields, PBW normal ordering.
//! * [`spectral`]: finite-difference Montgomery operators, eigen-branches, projectors.
//! * [`dispersion`]: critical points of the branches, cones, Strichartz exponents.
//! * [`fourier`]: representations, group Fourier transform of Gaussians, Plancherel.
//! * [`wavepacket`]: wave-packet ansatz with correctors, residual and transport experiments.

pub mod algebra;
pub mod dispersion;
pub mod dual;
pub mod fourier;
pub mod spectral;
pub mod wavepacket;

mod error;

pub use error::Error;

pub type Complex = num_complex::Complex64;

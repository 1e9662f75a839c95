//! Concrete unitary dual: representations on grid vectors, Fourier transforms of
//! product-Gaussian kernels, Plancherel calibration and the difference-operator identities.

pub mod kernel;
pub mod plancherel;
pub mod rep;
pub mod spline;

use thiserror::Error;

pub use crate::dual::RepParam;
pub use kernel::{difference_op_check, fourier_gaussian, fourier_gaussian_sum, GaussianKernelSpec, OperatorKernel};
pub use plancherel::{default_kernels, plancherel_calibrate, CalibrationReport, PlancherelQuadrature};
pub use rep::{infinitesimal, matrix_coefficient, rep_apply, GridOperator};

#[derive(Debug, Error, PartialEq)]
pub enum FourierError {
    #[error("invalid representation parameter {0:?}")]
    InvalidParam(RepParam),
    #[error("operation needs a generic representation, got {0:?}")]
    NotGeneric(RepParam),
    #[error("shift by {shift} moves a fraction {lost_fraction:e} of the mass off the grid")]
    ShiftOutOfGrid { shift: f64, lost_fraction: f64 },
    #[error("generator index {0} outside 1..=4")]
    GeneratorIndex(usize),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("grid half-width {available} below the kernel reach {needed}")]
    InsufficientMargin { needed: f64, available: f64 },
    #[error("calibration needs at least two kernels")]
    TooFewKernels,
    #[error("invalid quadrature box: {0}")]
    BadQuadrature(String),
    #[error("Hilbert-Schmidt mass near the box edge is {fraction:e}, above {limit:e}")]
    TailMass { fraction: f64, limit: f64 },
    #[error("difference index {0} not in {{1, 2}}")]
    DifferenceIndex(usize),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
}

pub(crate) fn generic_parts(param: &RepParam) -> Result<(f64, f64), FourierError> {
    match *param {
        RepParam::Generic { delta, beta } if param.is_valid() => Ok((delta, beta)),
        RepParam::Generic { .. } => Err(FourierError::InvalidParam(*param)),
        _ => Err(FourierError::NotGeneric(*param)),
    }
}

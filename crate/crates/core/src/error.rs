use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::dispersion::DispersionError;
use crate::fourier::FourierError;
use crate::spectral::SpectralError;
use crate::wavepacket::WavePacketError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Dispersion(#[from] DispersionError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    WavePacket(#[from] WavePacketError),
}

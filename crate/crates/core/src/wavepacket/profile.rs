//! The effective profile equation `i∂_t a + κ ∂₂² a = 0` along the x₂ line.

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::WavePacketError;
use crate::Complex;

/// Mass allowed in the outer tenth of the periodic box on each side.
pub const WRAP_LIMIT: f64 = 1e-8;

/// A profile sampled on a uniform periodic x₂ grid at time `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileState {
    pub x2_min: f64,
    pub spacing: f64,
    pub values: Vec<Complex>,
    pub t: f64,
}

impl ProfileState {
    /// Sample `f` on `nodes` points of `[-half_width, half_width)`.
    pub fn sample(half_width: f64, nodes: usize, f: impl Fn(f64) -> Complex) -> Result<Self, WavePacketError> {
        if !(half_width > 0.0 && half_width.is_finite()) || nodes < 8 {
            return Err(WavePacketError::InvalidProfile(format!("half-width {half_width}, {nodes} nodes")));
        }
        let spacing = 2.0 * half_width / nodes as f64;
        let values = (0..nodes).map(|k| f(-half_width + k as f64 * spacing)).collect();
        Ok(Self {
            x2_min: -half_width,
            spacing,
            values,
            t: 0.0,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.values.len()).map(|k| self.x2_min + k as f64 * self.spacing).collect()
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.spacing
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Fraction of the mass in the outer tenth of the box at either end.
    pub fn edge_fraction(&self) -> f64 {
        let n = self.values.len();
        let strip = (n / 10).max(1);
        let edge: f64 = self.values[..strip].iter().chain(&self.values[n - strip..]).map(|z| z.norm_sqr()).sum();
        let total: f64 = self.values.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            0.0
        } else {
            edge / total
        }
    }
}

/// Evolve by `t` under `i∂_t a + coeff ∂₂² a = 0`, exactly in the discrete Fourier basis.
pub fn profile_evolve(state: &ProfileState, t: f64, coeff: f64) -> Result<ProfileState, WavePacketError> {
    if !t.is_finite() || !coeff.is_finite() {
        return Err(WavePacketError::InvalidProfile(format!("t = {t}, coeff = {coeff}")));
    }
    let check = |s: &ProfileState| {
        let fraction = s.edge_fraction();
        if fraction < WRAP_LIMIT {
            Ok(())
        } else {
            Err(WavePacketError::WrapAround { fraction, limit: WRAP_LIMIT })
        }
    };
    check(state)?;
    let n = state.values.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf = state.values.clone();
    forward.process(&mut buf);
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * state.spacing);
    let half = n / 2;
    for (j, v) in buf.iter_mut().enumerate() {
        let m = if j < half { j as f64 } else { j as f64 - n as f64 };
        let k = m * dk;
        *v *= Complex::from_polar(1.0 / n as f64, -coeff * k * k * t);
    }
    inverse.process(&mut buf);
    let out = ProfileState {
        x2_min: state.x2_min,
        spacing: state.spacing,
        values: buf,
        t: state.t + t,
    };
    check(&out)?;
    Ok(out)
}

/// Closed-form solution of the profile equation from `exp(−y²/(2w²))`.
pub fn gaussian_evolved(width: f64, coeff: f64, t: f64, y: f64) -> Complex {
    let s = Complex::new(width * width, 2.0 * coeff * t);
    (Complex::new(width * width, 0.0) / s).sqrt() * (-(y * y) / (2.0 * s)).exp()
}

/// Squared width of `|a(t)|² ∝ exp(−y²/W²)` for the Gaussian started at width `w`.
pub fn gaussian_width_squared(width: f64, coeff: f64, t: f64) -> f64 {
    width * width + (2.0 * coeff * t / width).powi(2)
}

/// Product profile `a(t, y) = A(t, y₂) G(y₄)` with Gaussian factors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianProfile {
    pub width_x2: f64,
    pub width_x4: f64,
}

impl Default for GaussianProfile {
    fn default() -> Self {
        Self { width_x2: 1.0, width_x4: 1.0 }
    }
}

/// `A, ∂₂A, ∂₂²A, G, G', G''` at one point.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ProfileJet {
    pub a: Complex,
    pub a2: Complex,
    pub a22: Complex,
    pub g: f64,
    pub g1: f64,
    pub g2: f64,
}

impl GaussianProfile {
    pub fn validate(&self) -> Result<(), WavePacketError> {
        if self.width_x2 > 0.0 && self.width_x4 > 0.0 && self.width_x2.is_finite() && self.width_x4.is_finite() {
            Ok(())
        } else {
            Err(WavePacketError::InvalidProfile(format!("{self:?}")))
        }
    }

    pub fn value(&self, coeff: f64, t: f64, y2: f64, y4: f64) -> Complex {
        let j = self.jet(coeff, t, y2, y4);
        j.a * j.g
    }

    pub(crate) fn jet(&self, coeff: f64, t: f64, y2: f64, y4: f64) -> ProfileJet {
        let w = self.width_x2;
        let s = Complex::new(w * w, 2.0 * coeff * t);
        let a = gaussian_evolved(w, coeff, t, y2);
        let a2 = -a * y2 / s;
        let a22 = a * (y2 * y2 / (s * s) - 1.0 / s);
        let w4 = self.width_x4 * self.width_x4;
        let g = (-y4 * y4 / (2.0 * w4)).exp();
        ProfileJet {
            a,
            a2,
            a22,
            g,
            g1: -g * y4 / w4,
            g2: g * (y4 * y4 / (w4 * w4) - 1.0 / w4),
        }
    }

    /// `|A(t,·)|² ∝ exp(−y₂²/W²)`: returns `W`.
    pub fn width_at(&self, coeff: f64, t: f64) -> f64 {
        gaussian_width_squared(self.width_x2, coeff, t).sqrt()
    }
}

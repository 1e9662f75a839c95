use serde::{Deserialize, Serialize};

use super::SpectralError;

/// Uniform symmetric grid on `[-L, L]` with `N` nodes and Dirichlet walls just outside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub half_width: f64,
    pub nodes: usize,
}

impl SpectralGrid {
    pub fn new(half_width: f64, nodes: usize) -> Result<Self, SpectralError> {
        if nodes < 3 || !(half_width > 0.0) || !half_width.is_finite() {
            return Err(SpectralError::InvalidGrid { half_width, nodes });
        }
        Ok(Self { half_width, nodes })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.nodes - 1) as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.nodes).map(|k| self.node(k)).collect()
    }

    /// Same box with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            nodes: 2 * self.nodes - 1,
        }
    }

    /// Same spacing on a box of twice the width.
    pub fn widened(&self) -> Self {
        Self {
            half_width: 2.0 * self.half_width,
            nodes: 2 * self.nodes - 1,
        }
    }

    /// Inner product `Σ a_k b_k h` for real grid functions.
    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * self.spacing()
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        self.dot(a, a).sqrt()
    }
}

//! Parametrization of the irreducible unitary representations.

use serde::{Deserialize, Serialize};

/// A point of the unitary dual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepParam {
    /// Infinite-dimensional, parametrized by `δ ≠ 0` and `β`.
    Generic { delta: f64, beta: f64 },
    /// Factors through the Heisenberg quotient, `λ ≠ 0`.
    Schrodinger { lambda: f64 },
    /// One-dimensional character `exp(i(α1 x1 + α2 x2))`.
    Character { alpha1: f64, alpha2: f64 },
}

impl RepParam {
    pub fn generic(delta: f64, beta: f64) -> Self {
        RepParam::Generic { delta, beta }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            RepParam::Generic { delta, beta } => delta != 0.0 && delta.is_finite() && beta.is_finite(),
            RepParam::Schrodinger { lambda } => lambda != 0.0 && lambda.is_finite(),
            RepParam::Character { alpha1, alpha2 } => alpha1.is_finite() && alpha2.is_finite(),
        }
    }

    /// Dual action of the dilation by `r`: `π(r · x)` is equivalent to the returned parameter.
    pub fn dilate(&self, r: f64) -> Self {
        match *self {
            RepParam::Generic { delta, beta } => RepParam::Generic {
                delta: r.powi(3) * delta,
                beta: r * beta,
            },
            RepParam::Schrodinger { lambda } => RepParam::Schrodinger { lambda: r * r * lambda },
            RepParam::Character { alpha1, alpha2 } => RepParam::Character {
                alpha1: r * alpha1,
                alpha2: r * alpha2,
            },
        }
    }
}

/// Real cube root, negative for negative input.
pub fn real_cbrt(x: f64) -> f64 {
    x.cbrt()
}

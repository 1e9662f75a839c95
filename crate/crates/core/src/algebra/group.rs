//! Group law of the Engel group in semidirect coordinates.
//!
//! A point `x = (x1, x2, x3, x4)` stands for `Exp(x1 X1 + x3 X3 + x4 X4) Exp(x2 X2)`.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, Scalar};

/// Weights of the four coordinates under the dilations.
pub const WEIGHTS: [u32; 4] = [1, 1, 2, 3];

/// Sum of the weights.
pub const HOMOGENEOUS_DIMENSION: u32 = 7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement<T = f64> {
    pub x1: T,
    pub x2: T,
    pub x3: T,
    pub x4: T,
}

impl Copy for GroupElement<f64> {}

pub type ExactElement = GroupElement<BigRational>;

impl<T: Scalar> GroupElement<T> {
    pub fn new(x1: T, x2: T, x3: T, x4: T) -> Self {
        Self { x1, x2, x3, x4 }
    }

    pub fn identity() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    /// `Exp(t X_i)` for a basis direction `i` in `1..=4`.
    pub fn generator(i: usize, t: T) -> Self {
        let z = T::zero;
        match i {
            1 => Self::new(t, z(), z(), z()),
            2 => Self::new(z(), t, z(), z()),
            3 => Self::new(z(), z(), t, z()),
            4 => Self::new(z(), z(), z(), t),
            _ => panic!("generator index {i} outside 1..=4"),
        }
    }

    pub fn multiply(&self, y: &Self) -> Self {
        let x = self;
        let half = T::half();
        GroupElement {
            x1: x.x1.clone() + y.x1.clone(),
            x2: x.x2.clone() + y.x2.clone(),
            x3: x.x3.clone() + y.x3.clone() - x.x2.clone() * y.x1.clone(),
            x4: x.x4.clone() + y.x4.clone() + half.clone() * (x.x1.clone() * y.x3.clone() - x.x3.clone() * y.x1.clone())
                - half * x.x1.clone() * x.x2.clone() * y.x1.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            x1: -self.x1.clone(),
            x2: -self.x2.clone(),
            x3: -self.x3.clone() - self.x2.clone() * self.x1.clone(),
            x4: -self.x4.clone(),
        }
    }

    pub fn coords(&self) -> [T; 4] {
        [self.x1.clone(), self.x2.clone(), self.x3.clone(), self.x4.clone()]
    }

    pub fn from_coords(c: [T; 4]) -> Self {
        let [x1, x2, x3, x4] = c;
        Self { x1, x2, x3, x4 }
    }

    /// Apply the dilation of factor `r`.
    pub fn dilate(&self, r: &Dilation<T>) -> Self {
        let r = &r.0;
        let r2 = r.clone() * r.clone();
        let r3 = r2.clone() * r.clone();
        GroupElement {
            x1: r.clone() * self.x1.clone(),
            x2: r.clone() * self.x2.clone(),
            x3: r2 * self.x3.clone(),
            x4: r3 * self.x4.clone(),
        }
    }
}

impl GroupElement<f64> {
    pub fn norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coords().iter().zip(other.coords().iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl ExactElement {
    pub fn from_ints(c: [i64; 4]) -> Self {
        Self::from_coords(c.map(|v| BigRational::from_integer(v.into())))
    }

    pub fn to_f64(&self) -> GroupElement<f64> {
        use num_traits::ToPrimitive;
        GroupElement::from_coords(self.coords().map(|v| v.to_f64().unwrap_or(f64::NAN)))
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for GroupElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x1, self.x2, self.x3, self.x4)
    }
}

/// A positive dilation factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Dilation<T = f64>(T);

impl<T: Scalar> Dilation<T> {
    pub fn new(r: T) -> Result<Self, AlgebraError> {
        if r > T::zero() {
            Ok(Self(r))
        } else {
            Err(AlgebraError::NonPositiveDilation)
        }
    }

    pub fn factor(&self) -> &T {
        &self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0.clone() * other.0.clone())
    }

    /// Jacobian determinant `r^7` of the dilation.
    pub fn jacobian(&self) -> T {
        let mut j = T::one();
        for _ in 0..HOMOGENEOUS_DIMENSION {
            j = j * self.0.clone();
        }
        j
    }
}

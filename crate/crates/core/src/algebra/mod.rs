//! Exact and floating arithmetic on the Engel group and its Lie algebra.

pub mod group;
pub mod lie;
pub mod pbw;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use group::{Dilation, ExactElement, GroupElement, HOMOGENEOUS_DIMENSION, WEIGHTS};
pub use lie::{bch, exp_to_semidirect, semidirect_to_exp, ExactVector, LieVector};
pub use pbw::{normal_form, ParsePbwError, PbwPolynomial, RewriteOrder, Word};

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("dilation factor must be positive")]
    NonPositiveDilation,
    #[error("finite-difference step must be positive, got {0}")]
    BadStep(f64),
}

/// Coefficient field shared by the floating and the exact code paths.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Shorthand for the rational `n / d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Coefficients of the left-invariant field `X_i` at `x` in the coordinate basis `∂1..∂4`.
pub fn left_invariant_field(x: &GroupElement, i: usize) -> [f64; 4] {
    match i {
        1 => [1.0, 0.0, -x.x2, -0.5 * (x.x3 + x.x1 * x.x2)],
        2 => [0.0, 1.0, 0.0, 0.0],
        3 => [0.0, 0.0, 1.0, 0.5 * x.x1],
        4 => [0.0, 0.0, 0.0, 1.0],
        _ => panic!("direction index {i} outside 1..=4"),
    }
}

/// Right-invariant counterpart of `X2`, i.e. `∂2 − x1 ∂3`.
pub fn right_invariant_x2(x: &GroupElement) -> [f64; 4] {
    [0.0, 1.0, -x.x1, 0.0]
}

pub fn default_step(x: &GroupElement) -> f64 {
    1e-5 * x.norm().max(1.0)
}

/// Central difference of `t ↦ f(x · Exp(t X_i))` at `t = 0`.
pub fn left_invariant_derivative<F>(f: F, x: &GroupElement, i: usize, h: Option<f64>) -> Result<f64, AlgebraError>
where
    F: Fn(&GroupElement) -> f64,
{
    let h = h.unwrap_or_else(|| default_step(x));
    if !(h > 0.0) {
        return Err(AlgebraError::BadStep(h));
    }
    let fwd = f(&x.multiply(&GroupElement::generator(i, h)));
    let bwd = f(&x.multiply(&GroupElement::generator(i, -h)));
    Ok((fwd - bwd) / (2.0 * h))
}

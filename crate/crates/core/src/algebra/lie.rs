//! The Lie algebra `span(X1..X4)` with `[X1,X2] = X3`, `[X1,X3] = X4`.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::group::GroupElement;
use super::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieVector<T = f64> {
    pub v1: T,
    pub v2: T,
    pub v3: T,
    pub v4: T,
}

impl Copy for LieVector<f64> {}

pub type ExactVector = LieVector<BigRational>;

impl<T: Scalar> LieVector<T> {
    pub fn new(v1: T, v2: T, v3: T, v4: T) -> Self {
        Self { v1, v2, v3, v4 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn basis(i: usize) -> Self {
        let g = GroupElement::<T>::generator(i, T::one());
        Self::new(g.x1, g.x2, g.x3, g.x4)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.v1.clone() + o.v1.clone(),
            self.v2.clone() + o.v2.clone(),
            self.v3.clone() + o.v3.clone(),
            self.v4.clone() + o.v4.clone(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            s.clone() * self.v1.clone(),
            s.clone() * self.v2.clone(),
            s.clone() * self.v3.clone(),
            s.clone() * self.v4.clone(),
        )
    }

    /// Lie bracket from the structure constants.
    pub fn bracket(&self, o: &Self) -> Self {
        let (a, b) = (self, o);
        let c3 = a.v1.clone() * b.v2.clone() - a.v2.clone() * b.v1.clone();
        let c4 = a.v1.clone() * b.v3.clone() - a.v3.clone() * b.v1.clone();
        Self::new(T::zero(), T::zero(), c3, c4)
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// `log(exp(a) exp(b))`. The series stops at triple brackets since the algebra has step 3.
pub fn bch<T: Scalar>(a: &LieVector<T>, b: &LieVector<T>) -> LieVector<T> {
    let ab = a.bracket(b);
    let twelve = T::from_i64(12);
    let triple = a.bracket(&ab).add(&b.bracket(&b.bracket(a)));
    a.add(b).add(&ab.scale(&T::half())).add(&triple.scale(&(T::one() / twelve)))
}

/// Semidirect coordinates of `Exp(v)`.
pub fn exp_to_semidirect<T: Scalar>(v: &LieVector<T>) -> GroupElement<T> {
    // Exp(v) Exp(-v2 X2) lies in the subgroup generated by X1, X3, X4.
    let tail = LieVector::new(T::zero(), -v.v2.clone(), T::zero(), T::zero());
    let head = bch(v, &tail);
    GroupElement::new(head.v1, v.v2.clone(), head.v3, head.v4)
}

/// Exponential coordinates of a point given in semidirect coordinates.
pub fn semidirect_to_exp<T: Scalar>(x: &GroupElement<T>) -> LieVector<T> {
    let head = LieVector::new(x.x1.clone(), T::zero(), x.x3.clone(), x.x4.clone());
    let tail = LieVector::new(T::zero(), x.x2.clone(), T::zero(), T::zero());
    bch(&head, &tail)
}

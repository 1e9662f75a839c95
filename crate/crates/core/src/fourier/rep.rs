//! Action of the irreducible representations on grid vectors in `L²(ℝ_ξ)`.

use super::spline::Spline;
use super::FourierError;
use crate::algebra::GroupElement;
use crate::dual::RepParam;
use crate::spectral::SpectralGrid;
use crate::Complex;

/// Mass fraction that a shift may push off the grid before `rep_apply` refuses.
pub const SHIFT_MASS_TOLERANCE: f64 = 1e-12;

fn cis(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

/// Multiplier `m(ξ)` with `π(x)φ(ξ) = m(ξ) φ(ξ + x1)`.
pub fn multiplier(param: &RepParam, x: &GroupElement, xi: f64) -> Complex {
    match *param {
        RepParam::Generic { delta, beta } => {
            let s = xi + x.x1;
            cis(delta * (x.x4 + xi * x.x3 + 0.5 * x.x1 * x.x3) + (beta + 0.5 * delta * s * s) * x.x2)
        }
        RepParam::Schrodinger { lambda } => cis(lambda * (x.x3 + xi * x.x2 + 0.5 * x.x1 * x.x2)),
        RepParam::Character { alpha1, alpha2 } => cis(alpha1 * x.x1 + alpha2 * x.x2),
    }
}

fn check(param: &RepParam) -> Result<(), FourierError> {
    if param.is_valid() {
        Ok(())
    } else {
        Err(FourierError::InvalidParam(*param))
    }
}

pub fn norm(grid: &SpectralGrid, v: &[Complex]) -> f64 {
    (v.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.spacing()).sqrt()
}

/// `⟨a, b⟩ = Σ a_k conj(b_k) h`.
pub fn inner(grid: &SpectralGrid, a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex>() * grid.spacing()
}

/// `π(x)φ` with the shift `ξ ↦ ξ + x1` done by cubic spline interpolation.
pub fn rep_apply(param: &RepParam, x: &GroupElement, grid: &SpectralGrid, phi: &[Complex]) -> Result<Vec<Complex>, FourierError> {
    check(param)?;
    let pts = grid.points();
    if let RepParam::Character { .. } = param {
        let m = multiplier(param, x, 0.0);
        return Ok(phi.iter().map(|v| m * v).collect());
    }
    let l = grid.half_width;
    let total: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    let lost: f64 = pts.iter().zip(phi).filter(|(eta, _)| (*eta - x.x1).abs() > l).map(|(_, z)| z.norm_sqr()).sum();
    if lost > SHIFT_MASS_TOLERANCE * total {
        return Err(FourierError::ShiftOutOfGrid {
            shift: x.x1,
            lost_fraction: lost / total,
        });
    }
    let spline = Spline::new(grid, phi);
    Ok(pts.iter().map(|&xi| multiplier(param, x, xi) * spline.eval(xi + x.x1)).collect())
}

/// `⟨π(x)Φ1, Φ2⟩` by the trapezoid rule; `Φ1` is extended by zero off the grid.
pub fn matrix_coefficient(param: &RepParam, x: &GroupElement, grid: &SpectralGrid, phi1: &[Complex], phi2: &[Complex]) -> Result<Complex, FourierError> {
    check(param)?;
    let spline = Spline::new(grid, phi1);
    Ok(coefficient_with(param, x, grid, &spline, phi2))
}

/// Matrix coefficient against a pre-built spline of `Φ1`.
pub fn coefficient_with(param: &RepParam, x: &GroupElement, grid: &SpectralGrid, spline: &Spline, phi2: &[Complex]) -> Complex {
    if let RepParam::Character { .. } = param {
        let m = multiplier(param, x, 0.0);
        return grid.points().iter().zip(phi2).map(|(&xi, b)| m * spline.eval(xi) * b.conj()).sum::<Complex>() * grid.spacing();
    }
    let h = grid.spacing();
    let mut acc = Complex::new(0.0, 0.0);
    for (k, b) in phi2.iter().enumerate() {
        if *b == Complex::new(0.0, 0.0) {
            continue;
        }
        let xi = grid.node(k);
        acc += multiplier(param, x, xi) * spline.eval(xi + x.x1) * b.conj();
    }
    acc * h
}

/// A differential or multiplication operator on grid vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum GridOperator {
    /// Central difference `∂_ξ`, zero outside the grid.
    Derivative,
    /// Pointwise multiplication.
    Multiply(Vec<Complex>),
    /// Multiple of the identity.
    Scalar(Complex),
}

impl GridOperator {
    pub fn apply(&self, grid: &SpectralGrid, v: &[Complex]) -> Vec<Complex> {
        match self {
            GridOperator::Derivative => central_difference(grid, v),
            GridOperator::Multiply(m) => m.iter().zip(v).map(|(a, b)| a * b).collect(),
            GridOperator::Scalar(s) => v.iter().map(|b| s * b).collect(),
        }
    }
}

pub fn central_difference(grid: &SpectralGrid, v: &[Complex]) -> Vec<Complex> {
    let n = v.len();
    let inv = 0.5 / grid.spacing();
    let zero = Complex::new(0.0, 0.0);
    (0..n)
        .map(|k| {
            let r = if k + 1 < n { v[k + 1] } else { zero };
            let l = if k > 0 { v[k - 1] } else { zero };
            (r - l) * inv
        })
        .collect()
}

/// `dπ(X_i)` as a grid operator.
pub fn infinitesimal(param: &RepParam, i: usize, grid: &SpectralGrid) -> Result<GridOperator, FourierError> {
    check(param)?;
    if !(1..=4).contains(&i) {
        return Err(FourierError::GeneratorIndex(i));
    }
    let ii = Complex::new(0.0, 1.0);
    let pts = grid.points();
    Ok(match (*param, i) {
        (RepParam::Generic { .. } | RepParam::Schrodinger { .. }, 1) => GridOperator::Derivative,
        (RepParam::Generic { delta, beta }, 2) => GridOperator::Multiply(pts.iter().map(|&xi| ii * (beta + 0.5 * delta * xi * xi)).collect()),
        (RepParam::Generic { delta, .. }, 3) => GridOperator::Multiply(pts.iter().map(|&xi| ii * delta * xi).collect()),
        (RepParam::Generic { delta, .. }, _) => GridOperator::Scalar(ii * delta),
        (RepParam::Schrodinger { lambda }, 2) => GridOperator::Multiply(pts.iter().map(|&xi| ii * lambda * xi).collect()),
        (RepParam::Schrodinger { lambda }, 3) => GridOperator::Scalar(ii * lambda),
        (RepParam::Schrodinger { .. }, _) => GridOperator::Scalar(Complex::new(0.0, 0.0)),
        (RepParam::Character { alpha1, .. }, 1) => GridOperator::Scalar(ii * alpha1),
        (RepParam::Character { alpha2, .. }, 2) => GridOperator::Scalar(ii * alpha2),
        (RepParam::Character { .. }, _) => GridOperator::Scalar(Complex::new(0.0, 0.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(grid: &SpectralGrid, c: f64, k: f64) -> Vec<Complex> {
        let v: Vec<Complex> = grid.points().iter().map(|&x| Complex::from_polar((-(x - c) * (x - c)).exp(), k * x)).collect();
        let n = norm(grid, &v);
        v.into_iter().map(|z| z / n).collect()
    }

    #[test]
    fn identity_and_center_phase() {
        let g = SpectralGrid::new(10.0, 1001).unwrap();
        let p = RepParam::generic(1.7, -0.4);
        let phi = gaussian(&g, 0.3, 1.0);
        let out = rep_apply(&p, &GroupElement::identity(), &g, &phi).unwrap();
        assert!(out.iter().zip(&phi).all(|(a, b)| (a - b).norm() < 1e-14));
        let x = GroupElement::new(0.0, 0.0, 0.0, 0.9);
        let c = matrix_coefficient(&p, &x, &g, &phi, &phi).unwrap();
        assert!((c - cis(1.7 * 0.9)).norm() < 1e-12);
    }

    #[test]
    fn x2_is_pointwise_phase() {
        let g = SpectralGrid::new(10.0, 1001).unwrap();
        let (d, b) = (0.8, 0.25);
        let p = RepParam::generic(d, b);
        let phi = gaussian(&g, -0.5, 0.0);
        let x2 = 1.3;
        let out = rep_apply(&p, &GroupElement::new(0.0, x2, 0.0, 0.0), &g, &phi).unwrap();
        for (k, z) in out.iter().enumerate() {
            let xi = g.node(k);
            assert!((z - cis((b + 0.5 * d * xi * xi) * x2) * phi[k]).norm() < 1e-13);
        }
    }

    #[test]
    fn out_of_grid_shift_rejected() {
        let g = SpectralGrid::new(5.0, 501).unwrap();
        let phi = gaussian(&g, 0.0, 0.0);
        let r = rep_apply(&RepParam::generic(1.0, 0.0), &GroupElement::new(4.0, 0.0, 0.0, 0.0), &g, &phi);
        assert!(matches!(r, Err(FourierError::ShiftOutOfGrid { .. })));
        let bad = rep_apply(&RepParam::generic(0.0, 1.0), &GroupElement::identity(), &g, &phi);
        assert!(matches!(bad, Err(FourierError::InvalidParam(_))));
    }

    #[test]
    fn x4_generator() {
        let g = SpectralGrid::new(5.0, 101).unwrap();
        let phi = gaussian(&g, 0.0, 0.5);
        let op = infinitesimal(&RepParam::generic(-2.5, 1.0), 4, &g).unwrap();
        let out = op.apply(&g, &phi);
        assert!(out.iter().zip(&phi).all(|(a, b)| (a - Complex::new(0.0, -2.5) * b).norm() < 1e-15));
    }
}

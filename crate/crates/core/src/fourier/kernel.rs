//! Group Fourier transform `∫ κ(x) π(x)* dx` of product-Gaussian kernels as integral operators.
//!
//! For `κ(x) = Π g_i(x_i)` the transform at `π^{δ,β}` has the integral kernel
//! `K(ξ,η) = g1(ξ−η) ĝ2(β+δξ²/2) ĝ3(δ(ξ+η)/2) ĝ4(δ)` with `ĝ(k) = ∫ g(s) e^{−iks} ds`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{generic_parts, FourierError, RepParam};
use crate::spectral::SpectralGrid;
use crate::Complex;

/// Largest monomial power accepted per coordinate.
pub const MAX_POWER: u32 = 4;

/// `amplitude · Π x_i^{p_i} exp(−(x_i − c_i)²/(2 w_i²))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernelSpec {
    pub amplitude: f64,
    pub centers: [f64; 4],
    pub widths: [f64; 4],
    #[serde(default)]
    pub powers: [u32; 4],
}

/// One factor `s^p exp(−(s−c)²/(2w²))`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Factor {
    pub c: f64,
    pub w: f64,
    pub p: u32,
}

impl Factor {
    pub fn value(&self, s: f64) -> f64 {
        let z = (s - self.c) / self.w;
        s.powi(self.p as i32) * (-0.5 * z * z).exp()
    }

    /// `∫ s^p g(s) e^{−iks} ds` through `F_{p+1} = (c − ikw²) F_p + p w² F_{p−1}`.
    pub fn fourier(&self, k: f64) -> Complex {
        let w2 = self.w * self.w;
        let f0 = Complex::from_polar(self.w * (2.0 * PI).sqrt() * (-0.5 * k * k * w2).exp(), -k * self.c);
        let m = Complex::new(self.c, -k * w2);
        let (mut prev, mut cur) = (Complex::new(0.0, 0.0), f0);
        for q in 0..self.p {
            let next = m * cur + prev * (q as f64 * w2);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Half-length of the interval outside which the factor is below `e^{-32}` of its peak scale.
    pub fn reach(&self) -> f64 {
        self.c.abs() + 8.0 * self.w + self.p as f64 * self.w
    }

    fn quadrature(&self, f: impl Fn(f64) -> f64) -> f64 {
        // trapezoid on a Gaussian is spectrally accurate
        let a = self.c - 14.0 * self.w - 2.0 * self.p as f64 * self.w;
        let b = self.c + 14.0 * self.w + 2.0 * self.p as f64 * self.w;
        let n = 4000;
        let h = (b - a) / n as f64;
        (0..=n).map(|j| f(a + j as f64 * h)).sum::<f64>() * h
    }

    pub fn l1(&self) -> f64 {
        self.quadrature(|s| self.value(s).abs())
    }

    pub fn l2_squared(&self) -> f64 {
        self.quadrature(|s| self.value(s).powi(2))
    }
}

impl GaussianKernelSpec {
    pub fn new(amplitude: f64, centers: [f64; 4], widths: [f64; 4]) -> Self {
        Self {
            amplitude,
            centers,
            widths,
            powers: [0; 4],
        }
    }

    pub fn validate(&self) -> Result<(), FourierError> {
        if !self.amplitude.is_finite() || self.centers.iter().any(|c| !c.is_finite()) {
            return Err(FourierError::InvalidKernel("non-finite amplitude or center".into()));
        }
        if self.widths.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(FourierError::InvalidKernel("widths must be positive".into()));
        }
        if self.powers.iter().any(|p| *p > MAX_POWER) {
            return Err(FourierError::InvalidKernel(format!("powers above {MAX_POWER}")));
        }
        Ok(())
    }

    pub(crate) fn factor(&self, i: usize) -> Factor {
        Factor {
            c: self.centers[i],
            w: self.widths[i],
            p: self.powers[i],
        }
    }

    pub fn value(&self, x: &[f64; 4]) -> f64 {
        self.amplitude * (0..4).map(|i| self.factor(i).value(x[i])).product::<f64>()
    }

    /// `(−x_i) κ`, the kernel whose transform is the difference operator `Δ_i` of this one.
    pub fn times_minus_coordinate(&self, i: usize) -> Result<Self, FourierError> {
        if !(1..=4).contains(&i) {
            return Err(FourierError::GeneratorIndex(i));
        }
        let mut s = self.clone();
        s.amplitude = -s.amplitude;
        s.powers[i - 1] += 1;
        s.validate()?;
        Ok(s)
    }

    pub fn l1_norm(&self) -> f64 {
        self.amplitude.abs() * (0..4).map(|i| self.factor(i).l1()).product::<f64>()
    }

    pub fn l2_norm_squared(&self) -> f64 {
        self.amplitude.powi(2) * (0..4).map(|i| self.factor(i).l2_squared()).product::<f64>()
    }

    /// Kernel of `κ(r⁻¹ · x)`; only monomial-free kernels stay in the family.
    pub fn dilate(&self, r: f64) -> Result<Self, FourierError> {
        if !(r > 0.0) || self.powers != [0; 4] {
            return Err(FourierError::InvalidKernel("dilation needs r > 0 and no monomial factors".into()));
        }
        let scale = [r, r, r * r, r * r * r];
        let mut s = self.clone();
        for i in 0..4 {
            s.centers[i] *= scale[i];
            s.widths[i] *= scale[i];
        }
        Ok(s)
    }

    /// Entry `K(ξ, η)` of the transform at the generic point `(δ, β)`.
    pub fn kernel_entry(&self, delta: f64, beta: f64, xi: f64, eta: f64) -> Complex {
        let g1 = self.factor(0).value(xi - eta);
        if g1 == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        self.factor(1).fourier(beta + 0.5 * delta * xi * xi)
            * self.factor(2).fourier(0.5 * delta * (xi + eta))
            * self.factor(3).fourier(delta)
            * (self.amplitude * g1)
    }
}

/// Dense integral kernel on a grid; acts by `(Kφ)(ξ_j) = Σ_k K_{jk} φ_k h`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorKernel {
    pub grid: SpectralGrid,
    /// Row-major `N × N` entries.
    pub entries: Vec<Complex>,
}

impl OperatorKernel {
    pub fn zeros(grid: SpectralGrid) -> Self {
        Self {
            grid,
            entries: vec![Complex::new(0.0, 0.0); grid.nodes * grid.nodes],
        }
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex {
        self.entries[j * self.grid.nodes + k]
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        let n = self.grid.nodes;
        let h = self.grid.spacing();
        self.entries
            .par_chunks(n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<Complex>() * h)
            .collect()
    }

    fn apply_adjoint(&self, v: &[Complex]) -> Vec<Complex> {
        let n = self.grid.nodes;
        let h = self.grid.spacing();
        let mut out = vec![Complex::new(0.0, 0.0); n];
        for (j, row) in self.entries.chunks(n).enumerate() {
            let vj = v[j];
            out.iter_mut().zip(row).for_each(|(o, a)| *o += a.conj() * vj);
        }
        out.iter_mut().for_each(|o| *o *= h);
        out
    }

    /// Kernel of the composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.grid.nodes;
        let h = self.grid.spacing();
        let entries = self
            .entries
            .par_chunks(n)
            .flat_map_iter(|row| {
                let mut out = vec![Complex::new(0.0, 0.0); n];
                for (m, a) in row.iter().enumerate() {
                    let b = &other.entries[m * n..(m + 1) * n];
                    out.iter_mut().zip(b).for_each(|(o, bk)| *o += a * bk);
                }
                out.into_iter().map(move |z| z * h)
            })
            .collect();
        Self { grid: self.grid, entries }
    }

    pub fn combine(&self, other: &Self, a: Complex, b: Complex) -> Self {
        Self {
            grid: self.grid,
            entries: self.entries.iter().zip(&other.entries).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn hs_norm(&self) -> f64 {
        let h = self.grid.spacing();
        (self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt() * h
    }

    /// Largest singular value by power iteration on `K*K`.
    pub fn operator_norm(&self) -> f64 {
        let n = self.grid.nodes;
        let mut v: Vec<Complex> = (0..n).map(|k| Complex::new(1.0 + 0.1 * ((k * 7) % 11) as f64, 0.3)).collect();
        let mut estimate = 0.0;
        for _ in 0..300 {
            let w = self.apply_adjoint(&self.apply(&v));
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let nw = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nw == 0.0 {
                return 0.0;
            }
            let next = (nw / nv).sqrt();
            v = w.into_iter().map(|z| z / nw).collect();
            if (next - estimate).abs() <= 1e-12 * next {
                return next;
            }
            estimate = next;
        }
        estimate
    }

    /// `max |K(ξ,η) − conj K(η,ξ)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.nodes;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in j..n {
                worst = worst.max((self.entry(j, k) - self.entry(k, j).conj()).norm());
            }
        }
        worst
    }
}

fn check_margin(spec: &GaussianKernelSpec, grid: &SpectralGrid) -> Result<(), FourierError> {
    let needed = spec.factor(0).reach();
    if needed >= 2.0 * grid.half_width {
        return Err(FourierError::InsufficientMargin {
            needed,
            available: grid.half_width,
        });
    }
    Ok(())
}

/// Transform of one product Gaussian at a generic representation.
pub fn fourier_gaussian(spec: &GaussianKernelSpec, param: &RepParam, grid: &SpectralGrid) -> Result<OperatorKernel, FourierError> {
    fourier_gaussian_sum(std::slice::from_ref(spec), param, grid)
}

/// Transform of a finite sum of product Gaussians.
pub fn fourier_gaussian_sum(specs: &[GaussianKernelSpec], param: &RepParam, grid: &SpectralGrid) -> Result<OperatorKernel, FourierError> {
    let (delta, beta) = generic_parts(param)?;
    for s in specs {
        s.validate()?;
        check_margin(s, grid)?;
    }
    let n = grid.nodes;
    let pts = grid.points();
    let entries = (0..n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let pts = &pts;
            (0..n).map(move |k| specs.iter().map(|s| s.kernel_entry(delta, beta, pts[j], pts[k])).sum())
        })
        .collect();
    Ok(OperatorKernel { grid: *grid, entries })
}

/// Step of the central β-difference used for `Δ2`.
pub const BETA_STEP: f64 = 1e-3;

/// Relative Hilbert–Schmidt deviation between `𝓕((−x_i)κ)` and its closed form.
///
/// `i = 1`: `(i/δ)[π(X3), 𝓕κ]`, a multiplication by `−(ξ−η)` of the kernel.
/// `i = 2`: `(1/i) ∂_β 𝓕κ` by a central difference with step [`BETA_STEP`].
pub fn difference_op_check(specs: &[GaussianKernelSpec], index: usize, param: &RepParam, grid: &SpectralGrid) -> Result<f64, FourierError> {
    let (delta, beta) = generic_parts(param)?;
    if index != 1 && index != 2 {
        return Err(FourierError::DifferenceIndex(index));
    }
    let weighted: Vec<GaussianKernelSpec> = specs.iter().map(|s| s.times_minus_coordinate(index)).collect::<Result<_, _>>()?;
    let lhs = fourier_gaussian_sum(&weighted, param, grid)?;
    let rhs = if index == 1 {
        let base = fourier_gaussian_sum(specs, param, grid)?;
        let ii = Complex::new(0.0, 1.0);
        let n = grid.nodes;
        let pts = grid.points();
        let pi_x3: Vec<Complex> = pts.iter().map(|&xi| ii * delta * xi).collect();
        let mut out = base.clone();
        for j in 0..n {
            for k in 0..n {
                out.entries[j * n + k] = (ii / delta) * (pi_x3[j] - pi_x3[k]) * base.entry(j, k);
            }
        }
        out
    } else {
        let up = fourier_gaussian_sum(specs, &RepParam::generic(delta, beta + BETA_STEP), grid)?;
        let down = fourier_gaussian_sum(specs, &RepParam::generic(delta, beta - BETA_STEP), grid)?;
        let c = Complex::new(0.0, -1.0) / (2.0 * BETA_STEP);
        up.combine(&down, c, -c)
    };
    let diff = lhs.combine(&rhs, Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0));
    let scale = rhs.hs_norm().max(f64::MIN_POSITIVE);
    Ok(diff.hs_norm() / scale)
}

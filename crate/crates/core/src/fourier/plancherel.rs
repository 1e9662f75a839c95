//! Calibration of the Plancherel constant `c` in `‖κ‖² = c ∫∫ ‖𝓕κ(π^{δ,β})‖²_HS |δ| dδ dβ`.
//!
//! The δ axis is a trapezoid over `[−δmax, δmax]` whose nodes inside `|δ| < δmin` are replaced by
//! an `a + bδ²` fit through the two innermost computed nodes on each side. Since the integrand
//! decays like a Gaussian at both ends, the trapezoid is spectrally accurate there.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::GaussianKernelSpec;
use super::FourierError;

/// Fraction of the HS mass allowed in the outer fifth of the box.
pub const TAIL_LIMIT: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlancherelQuadrature {
    pub delta_min: f64,
    pub delta_max: f64,
    pub delta_step: f64,
    pub beta_box: f64,
    pub beta_step: f64,
}

impl Default for PlancherelQuadrature {
    fn default() -> Self {
        Self {
            delta_min: 0.1,
            delta_max: 6.0,
            delta_step: 0.05,
            beta_box: 20.0,
            beta_step: 0.25,
        }
    }
}

impl PlancherelQuadrature {
    pub fn validate(&self) -> Result<(), FourierError> {
        let ok = self.delta_min > 0.0
            && self.delta_max > self.delta_min + 2.0 * self.delta_step
            && self.delta_step > 0.0
            && self.beta_box > 0.0
            && self.beta_step > 0.0
            && self.beta_step < self.beta_box
            && [self.delta_min, self.delta_max, self.delta_step, self.beta_box, self.beta_step]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(FourierError::BadQuadrature(format!("{self:?}")))
        }
    }

    /// Twice the box in δ and β and half the excluded strip, same steps.
    pub fn doubled(&self) -> Self {
        Self {
            delta_min: 0.5 * self.delta_min,
            delta_max: 2.0 * self.delta_max,
            beta_box: 2.0 * self.beta_box,
            ..*self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub kernels: Vec<GaussianKernelSpec>,
    pub c_estimates: Vec<f64>,
    pub mean: f64,
    /// `(max − min) / mean` over the kernels.
    pub relative_spread: f64,
    #[serde(rename = "box")]
    pub quadrature: PlancherelQuadrature,
    /// Worst fraction of HS mass in the outer fifth of the box.
    pub tail_estimate: f64,
    /// Worst fraction of the total carried by the fitted strip `|δ| < δmin`.
    pub strip_fraction: f64,
}

struct Integral {
    total: f64,
    edge: f64,
    strip: f64,
}

/// `|δ| ∫ ‖𝓕κ(π^{δ,β})‖²_HS dβ` and its part with `|β| > 0.8 B`.
///
/// `|K|² = |g1(x1)|² |ĝ2(β+δξ²/2)|² |ĝ3(δ(ξ − x1/2))|² |ĝ4(δ)|²` in the variables `(ξ, x1 = ξ − η)`,
/// integrated by trapezoids on grids adapted to `δ`.
fn beta_integrated(spec: &GaussianKernelSpec, q: &PlancherelQuadrature, delta: f64) -> (f64, f64) {
    let (f1, f2, f3, f4) = (spec.factor(0), spec.factor(1), spec.factor(2), spec.factor(3));
    let ad = delta.abs();
    let reach1 = f1.reach();
    let k2 = (7.0 + 2.0 * f2.p as f64) / f2.w;
    let k3 = (7.0 + 2.0 * f3.p as f64) / f3.w;
    let xi_beta = (2.0 * (q.beta_box + k2) / ad).sqrt();
    let half = (k3 / ad).min(xi_beta) + reach1;
    let h_xi = (0.5 / (f2.w * ad * xi_beta)).min(0.25 * f1.w).min(0.5 / (ad * f3.w));
    let h_x1 = (0.25 * f1.w).min(0.5 / (ad * f3.w));
    let n_xi = (2.0 * half / h_xi).ceil() as usize + 1;
    let h_xi = 2.0 * half / (n_xi - 1) as f64;
    let n_x1 = (2.0 * reach1 / h_x1).ceil() as usize + 1;
    let h_x1 = 2.0 * reach1 / (n_x1 - 1) as f64;
    let x1s: Vec<f64> = (0..n_x1).map(|k| f1.c - reach1 + k as f64 * h_x1).collect();
    let g1sq: Vec<f64> = x1s.iter().map(|&s| f1.value(s).powi(2)).collect();
    let xis: Vec<f64> = (0..n_xi).map(|j| -half + j as f64 * h_xi).collect();
    let reduced: Vec<f64> = xis
        .iter()
        .map(|&xi| {
            h_x1 * x1s
                .iter()
                .zip(&g1sq)
                .map(|(&s, g)| g * f3.fourier(delta * (xi - 0.5 * s)).norm_sqr())
                .sum::<f64>()
        })
        .collect();
    let n_beta = (2.0 * q.beta_box / q.beta_step).round() as usize;
    let h_beta = 2.0 * q.beta_box / n_beta as f64;
    let (mut total, mut edge) = (0.0, 0.0);
    for m in 0..=n_beta {
        let beta = -q.beta_box + m as f64 * h_beta;
        let w = if m == 0 || m == n_beta { 0.5 } else { 1.0 };
        let s: f64 = xis
            .iter()
            .zip(&reduced)
            .filter(|(_, r)| **r > 0.0)
            .map(|(&xi, r)| r * f2.fourier(beta + 0.5 * delta * xi * xi).norm_sqr())
            .sum::<f64>()
            * h_xi
            * h_beta
            * w;
        total += s;
        if beta.abs() > 0.8 * q.beta_box {
            edge += s;
        }
    }
    let scale = spec.amplitude.powi(2) * f4.fourier(delta).norm_sqr() * ad;
    (scale * total, scale * edge)
}

fn integrate(spec: &GaussianKernelSpec, q: &PlancherelQuadrature) -> Integral {
    let n_side = (q.delta_max / q.delta_step).round() as i64;
    let step = q.delta_max / n_side as f64;
    let nodes: Vec<i64> = (-n_side..=n_side).filter(|k| (*k as f64 * step).abs() >= q.delta_min).collect();
    let values: Vec<(i64, (f64, f64))> = nodes.par_iter().map(|&k| (k, beta_integrated(spec, q, k as f64 * step))).collect();
    let lookup = |k: i64| values.iter().find(|(j, _)| *j == k).map(|(_, v)| v.0).unwrap_or(0.0);
    // innermost computed node on each side
    let inner_pos = values.iter().filter(|(k, _)| *k > 0).map(|(k, _)| *k).min().unwrap_or(1);
    let fit = |k0: i64, k1: i64| {
        let (d0, d1) = ((k0 as f64 * step).powi(2), (k1 as f64 * step).powi(2));
        let (v0, v1) = (lookup(k0), lookup(k1));
        let b = (v1 - v0) / (d1 - d0);
        (v0 - b * d0, b)
    };
    let (ap, bp) = fit(inner_pos, inner_pos + 1);
    let (an, bn) = fit(-inner_pos, -inner_pos - 1);
    let mut strip = 0.0;
    for k in -inner_pos + 1..inner_pos {
        let d2 = (k as f64 * step).powi(2);
        strip += match k.cmp(&0) {
            std::cmp::Ordering::Greater => ap + bp * d2,
            std::cmp::Ordering::Less => an + bn * d2,
            std::cmp::Ordering::Equal => 0.5 * (ap + an),
        };
    }
    strip *= step;
    let mut total = strip;
    let mut edge = 0.0;
    for (k, (v, e)) in &values {
        let w = if k.abs() == n_side { 0.5 * step } else { step };
        total += w * v;
        edge += w * e;
        if (*k as f64 * step).abs() > 0.8 * q.delta_max {
            edge += w * (v - e);
        }
    }
    Integral { total, edge, strip }
}

/// Estimate `c = ‖κ‖² / ∫∫ ‖𝓕κ‖²_HS |δ| dδ dβ` for each kernel.
pub fn plancherel_calibrate(kernels: &[GaussianKernelSpec], q: &PlancherelQuadrature) -> Result<CalibrationReport, FourierError> {
    if kernels.len() < 2 {
        return Err(FourierError::TooFewKernels);
    }
    q.validate()?;
    for k in kernels {
        k.validate()?;
    }
    let mut c_estimates = Vec::with_capacity(kernels.len());
    let (mut tail, mut strip) = (0.0f64, 0.0f64);
    for k in kernels {
        let i = integrate(k, q);
        let fraction = i.edge / i.total;
        if !(fraction <= TAIL_LIMIT) {
            return Err(FourierError::TailMass { fraction, limit: TAIL_LIMIT });
        }
        tail = tail.max(fraction);
        strip = strip.max(i.strip / i.total);
        c_estimates.push(k.l2_norm_squared() / i.total);
    }
    let mean = c_estimates.iter().sum::<f64>() / c_estimates.len() as f64;
    let max = c_estimates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = c_estimates.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(CalibrationReport {
        kernels: kernels.to_vec(),
        c_estimates,
        mean,
        relative_spread: (max - min) / mean,
        quadrature: *q,
        tail_estimate: tail,
        strip_fraction: strip,
    })
}

/// A default family of three distinct product Gaussians.
pub fn default_kernels() -> Vec<GaussianKernelSpec> {
    vec![
        GaussianKernelSpec::new(1.0, [0.0, 0.0, 0.0, 0.0], [1.0, 1.0, 1.5, 1.0]),
        GaussianKernelSpec::new(0.7, [0.4, -0.3, 0.8, 0.2], [0.8, 1.2, 1.7, 0.9]),
        GaussianKernelSpec::new(2.1, [-0.6, 0.5, -0.2, -0.7], [1.3, 0.9, 2.0, 1.2]),
    ]
}

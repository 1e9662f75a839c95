//! Free one-dimensional dispersion along the x₂ line with the effective-mass coefficient
//! `μ̃_n″(ν₀)/2` of a critical point.

use serde::{Deserialize, Serialize};

use super::profile::{gaussian_evolved, profile_evolve, ProfileState};
use super::WavePacketError;
use crate::dispersion::{curvature_consistency, richardson_derivative, CURVATURE_STEP};
use crate::spectral::{SolverConfig, Symbol};

/// Dilations on which the coefficient is cross-checked.
pub const CONE_DELTAS: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmicroReport {
    pub n: usize,
    pub nu0: f64,
    /// `μ̃_n″(ν₀)`.
    pub curvature: f64,
    pub coefficient: f64,
    /// `(δ, ½∂_β²μ_n(δ, ν₀δ^{1/3}))`.
    pub cone_coefficients: Vec<(f64, f64)>,
    pub max_coefficient_deviation: f64,
    pub t: f64,
    pub mass_initial: f64,
    pub mass_final: f64,
    /// Largest deviation from the closed-form evolution, when the initial profile is a centred Gaussian.
    pub analytic_deviation: Option<f64>,
    pub x2: Vec<f64>,
    pub density_initial: Vec<f64>,
    pub density_t: Vec<f64>,
}

/// Evolve `profile` by `t` with coefficient `μ̃_n″(ν₀)/2`.
///
/// `gaussian_width`, when given, states that `profile` is `exp(−x₂²/(2w²))` so the result can
/// be compared with the closed form.
pub fn second_microlocal_profile_demo(
    config: &SolverConfig,
    n: usize,
    nu0: f64,
    profile: &ProfileState,
    t: f64,
    gaussian_width: Option<f64>,
) -> Result<SmicroReport, WavePacketError> {
    let grid = config.grid_for(&Symbol::montgomery(nu0), n)?;
    let dmu = |nu: f64| config.branch_point_on(&Symbol::montgomery(nu), n, false, grid).map(|p| p.dmu);
    let curvature = richardson_derivative(dmu, nu0, CURVATURE_STEP)?;
    let coefficient = 0.5 * curvature;
    let cone = curvature_consistency(config, n, nu0, curvature, &CONE_DELTAS, false)?;
    let cone_coefficients: Vec<(f64, f64)> = cone.rows.iter().map(|r| (r.delta, 0.5 * r.curvature)).collect();
    let max_coefficient_deviation = cone_coefficients.iter().map(|(_, c)| (c - coefficient).abs()).fold(0.0, f64::max);
    let evolved = profile_evolve(profile, t, coefficient)?;
    let analytic_deviation = gaussian_width.map(|w| {
        evolved
            .points()
            .iter()
            .zip(&evolved.values)
            .map(|(&y, v)| (v - gaussian_evolved(w, coefficient, t, y)).norm())
            .fold(0.0, f64::max)
    });
    Ok(SmicroReport {
        n,
        nu0,
        curvature,
        coefficient,
        cone_coefficients,
        max_coefficient_deviation,
        t,
        mass_initial: profile.mass(),
        mass_final: evolved.mass(),
        analytic_deviation,
        x2: evolved.points(),
        density_initial: profile.density(),
        density_t: evolved.density(),
    })
}

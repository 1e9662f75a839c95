//! Critical points of the Montgomery branches, cone sections, and Strichartz arithmetic.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dual::real_cbrt;
use crate::spectral::{SolverConfig, SpectralError, SpectralGrid, Symbol};

#[derive(Debug, Error, PartialEq)]
pub enum DispersionError {
    #[error("invalid scan: {0}")]
    InvalidScan(String),
    #[error("exponent {0} outside [2, ∞]")]
    ExponentRange(f64),
    #[error("invalid report: {0}")]
    InvalidReport(String),
    #[error("empty δ list")]
    EmptyDeltaList,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Step of the central differences of `μ̃_n′` used for the curvature.
pub const CURVATURE_STEP: f64 = 1e-3;

/// Roots closer than this are merged.
pub const MERGE_DISTANCE: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Minimum,
    Maximum,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersionReport {
    pub n: usize,
    pub nu_c: f64,
    pub mu_at_c: f64,
    pub curvature: f64,
    pub bracket: [f64; 2],
    /// Sign changes of `μ̃_n′` seen on the whole scan.
    pub certificate: usize,
    #[serde(default = "default_step")]
    pub curvature_step: f64,
    #[serde(default)]
    pub dmu_at_c: f64,
    #[serde(default = "default_kind")]
    pub kind: CriticalKind,
}

fn default_step() -> f64 {
    CURVATURE_STEP
}

fn default_kind() -> CriticalKind {
    CriticalKind::Degenerate
}

impl DispersionReport {
    pub fn validate(&self) -> Result<(), DispersionError> {
        let finite = [
            self.nu_c,
            self.mu_at_c,
            self.curvature,
            self.bracket[0],
            self.bracket[1],
            self.curvature_step,
            self.dmu_at_c,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(DispersionError::InvalidReport("non-finite field".into()));
        }
        if self.n == 0 {
            return Err(DispersionError::InvalidReport("mode index 0".into()));
        }
        if !(self.bracket[0] <= self.nu_c && self.nu_c <= self.bracket[1]) {
            return Err(DispersionError::InvalidReport("critical point outside its bracket".into()));
        }
        if !(self.curvature_step > 0.0) {
            return Err(DispersionError::InvalidReport("curvature step must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, DispersionError> {
        let r: Self = serde_json::from_str(s).map_err(|e| DispersionError::InvalidReport(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalSearch {
    pub n: usize,
    pub scan: [f64; 2],
    pub samples: usize,
    /// Bisection stops once the bracket is narrower than this.
    pub tol: f64,
}

impl CriticalSearch {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            scan: [-4.0, 4.0],
            samples: 161,
            tol: 1e-10,
        }
    }

    fn validate(&self) -> Result<(), DispersionError> {
        if self.n == 0 {
            return Err(SpectralError::ModeIndex.into());
        }
        if !(self.scan[0] < self.scan[1]) || !self.scan.iter().all(|v| v.is_finite()) {
            return Err(DispersionError::InvalidScan(format!("bad interval {:?}", self.scan)));
        }
        if self.samples < 2 {
            return Err(DispersionError::InvalidScan("need at least two samples".into()));
        }
        if !(self.tol > 0.0) {
            return Err(DispersionError::InvalidScan("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalScan {
    pub reports: Vec<DispersionReport>,
    pub sign_changes: usize,
    pub advisory: Option<String>,
    pub grid: SpectralGrid,
}

/// `μ̃_n(ν)` and `μ̃_n′(ν)` on a fixed grid.
fn montgomery_point(config: &SolverConfig, n: usize, nu: f64, grid: SpectralGrid) -> Result<(f64, f64), SpectralError> {
    let p = config.branch_point_on(&Symbol::montgomery(nu), n, false, grid)?;
    Ok((p.mu, p.dmu))
}

/// One grid that confines level `n` over the whole scan.
pub fn scan_grid(config: &SolverConfig, n: usize, scan: [f64; 2]) -> Result<SpectralGrid, SpectralError> {
    let mut best: Option<SpectralGrid> = None;
    for nu in [scan[0], 0.5 * (scan[0] + scan[1]), scan[1]] {
        let g = config.grid_for(&Symbol::montgomery(nu), n)?;
        if best.is_none_or(|b| g.half_width > b.half_width) {
            best = Some(g);
        }
    }
    Ok(best.expect("three candidates"))
}

/// Central difference of `f′` with Richardson halving of the step.
pub fn richardson_derivative(f: impl Fn(f64) -> Result<f64, SpectralError>, x: f64, step: f64) -> Result<f64, SpectralError> {
    let c = |s: f64| -> Result<f64, SpectralError> { Ok((f(x + s)? - f(x - s)?) / (2.0 * s)) };
    let coarse = c(step)?;
    let fine = c(0.5 * step)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Roots of `μ̃_n′` on the scan, isolated by sign changes and bisected.
pub fn critical_points(config: &SolverConfig, search: &CriticalSearch) -> Result<CriticalScan, DispersionError> {
    search.validate()?;
    let grid = match config.half_width {
        Some(_) => config.grid_for(&Symbol::montgomery(search.scan[0]), search.n)?,
        None => scan_grid(config, search.n, search.scan)?,
    };
    critical_points_on(config, search, grid)
}

pub fn critical_points_on(config: &SolverConfig, search: &CriticalSearch, grid: SpectralGrid) -> Result<CriticalScan, DispersionError> {
    search.validate()?;
    let n = search.n;
    let [a, b] = search.scan;
    let step = (b - a) / (search.samples - 1) as f64;
    let nus: Vec<f64> = (0..search.samples)
        .map(|k| if k + 1 == search.samples { b } else { a + k as f64 * step })
        .collect();
    let derivs: Vec<f64> = nus
        .par_iter()
        .map(|&nu| montgomery_point(config, n, nu, grid).map(|p| p.1))
        .collect::<Result<_, _>>()?;
    let dmu = |nu: f64| montgomery_point(config, n, nu, grid).map(|p| p.1);
    let mut brackets = Vec::new();
    for k in 0..nus.len() - 1 {
        let (d0, d1) = (derivs[k], derivs[k + 1]);
        if d0 == 0.0 {
            brackets.push((nus[k], nus[k]));
        } else if d0 * d1 < 0.0 {
            brackets.push((nus[k], nus[k + 1]));
        }
    }
    if let Some(&last) = derivs.last() {
        if last == 0.0 {
            brackets.push((b, b));
        }
    }
    let sign_changes = brackets.len();
    let roots: Vec<(f64, [f64; 2])> = brackets
        .par_iter()
        .map(|&(mut lo, mut hi)| -> Result<(f64, [f64; 2]), SpectralError> {
            let bracket = [lo, hi];
            let mut dlo = dmu(lo)?;
            while hi - lo > search.tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let dm = dmu(mid)?;
                if dm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if dm * dlo < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    dlo = dm;
                }
            }
            Ok((0.5 * (lo + hi), bracket))
        })
        .collect::<Result<_, _>>()?;
    let mut merged: Vec<(f64, [f64; 2])> = Vec::new();
    for r in roots {
        match merged.last_mut() {
            Some(m) if (r.0 - m.0).abs() <= MERGE_DISTANCE => m.1[1] = r.1[1],
            _ => merged.push(r),
        }
    }
    let reports = merged
        .into_iter()
        .map(|(nu_c, bracket)| -> Result<DispersionReport, SpectralError> {
            let (mu_at_c, dmu_at_c) = montgomery_point(config, n, nu_c, grid)?;
            let curvature = richardson_derivative(dmu, nu_c, CURVATURE_STEP)?;
            let kind = if curvature > 0.0 {
                CriticalKind::Minimum
            } else if curvature < 0.0 {
                CriticalKind::Maximum
            } else {
                CriticalKind::Degenerate
            };
            Ok(DispersionReport {
                n,
                nu_c,
                mu_at_c,
                curvature,
                bracket,
                certificate: sign_changes,
                curvature_step: CURVATURE_STEP,
                dmu_at_c,
                kind,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let advisory = if reports.is_empty() {
        Some(format!("no sign change of the derivative of branch {n} on [{a}, {b}]; widen the scan"))
    } else {
        None
    };
    Ok(CriticalScan {
        reports,
        sign_changes,
        advisory,
        grid,
    })
}

/// Dilation-invariant set `β = ν₀ δ^{1/3}` of the generic dual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSection {
    pub nu0: f64,
    pub delta_range: [f64; 2],
}

impl ConeSection {
    pub fn beta(&self, delta: f64) -> f64 {
        self.nu0 * real_cbrt(delta)
    }

    pub fn contains(&self, delta: f64, beta: f64, tol: f64) -> bool {
        (beta - self.beta(delta)).abs() <= tol * (1.0 + beta.abs())
    }

    /// Evenly spaced points `(δ, β(δ))` of the section.
    pub fn sample(&self, count: usize) -> Vec<(f64, f64)> {
        let [a, b] = self.delta_range;
        (0..count)
            .map(|k| {
                let d = if count == 1 { a } else { a + (b - a) * k as f64 / (count - 1) as f64 };
                (d, self.beta(d))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub delta: f64,
    pub beta: f64,
    /// `∂_β²μ_n` from central differences of the FH derivative.
    pub curvature: f64,
    /// `∂_β²μ_n` from the differentiated FH sum.
    pub curvature_sum: Option<f64>,
    pub dmu: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureConsistency {
    pub n: usize,
    pub nu0: f64,
    pub reference: f64,
    pub rows: Vec<CurvatureRow>,
    pub max_deviation: f64,
    pub max_abs_dmu: f64,
}

/// Compare `∂_β²μ_n(δ, ν₀δ^{1/3})` with `μ̃_n″(ν₀)` along the cone.
pub fn curvature_consistency(
    config: &SolverConfig,
    n: usize,
    nu0: f64,
    reference: f64,
    deltas: &[f64],
    with_sum: bool,
) -> Result<CurvatureConsistency, DispersionError> {
    if deltas.is_empty() {
        return Err(DispersionError::EmptyDeltaList);
    }
    let cone = ConeSection { nu0, delta_range: [0.0, 0.0] };
    let rows = deltas
        .par_iter()
        .map(|&delta| -> Result<CurvatureRow, SpectralError> {
            let beta = cone.beta(delta);
            let sym = Symbol::generic(delta, beta);
            let levels = if with_sum { config.m_max.max(n) + 1 } else { n };
            let grid = config.grid_for(&sym, levels)?;
            let centre = config.branch_point_on(&sym, n, with_sum, grid)?;
            let dmu = |b: f64| config.branch_point_on(&Symbol::generic(delta, b), n, false, grid).map(|p| p.dmu);
            let curvature = richardson_derivative(dmu, beta, CURVATURE_STEP)?;
            Ok(CurvatureRow {
                delta,
                beta,
                curvature,
                curvature_sum: centre.d2mu,
                dmu: centre.dmu,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_deviation = rows.iter().map(|r| (r.curvature - reference).abs()).fold(0.0, f64::max);
    let max_abs_dmu = rows.iter().map(|r| r.dmu.abs()).fold(0.0, f64::max);
    Ok(CurvatureConsistency {
        n,
        nu0,
        reference,
        rows,
        max_deviation,
        max_abs_dmu,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrichartzClass {
    NotAdmissible,
    AdmissibleButObstructed,
    Allowed,
}

/// Tolerance on the scaling line `2/q + 7/p = 7/2`.
pub const ADMISSIBILITY_TOL: f64 = 1e-12;

pub fn strichartz_admissible(q: f64, p: f64) -> Result<StrichartzClass, DispersionError> {
    for e in [q, p] {
        if e.is_nan() || e < 2.0 {
            return Err(DispersionError::ExponentRange(e));
        }
    }
    let line = 2.0 / q + 7.0 / p - 3.5;
    if line.abs() > ADMISSIBILITY_TOL {
        return Ok(StrichartzClass::NotAdmissible);
    }
    let close = |a: f64, b: f64| (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= ADMISSIBILITY_TOL;
    if (close(q, f64::INFINITY) && close(p, 2.0)) || (close(q, 2.0) && close(p, 2.8)) {
        Ok(StrichartzClass::Allowed)
    } else {
        Ok(StrichartzClass::AdmissibleButObstructed)
    }
}

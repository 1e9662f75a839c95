use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::CliError;

/// Everything a run depends on. Identical configs give identical output bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[derive(Default)]
pub struct RunConfig {
    #[serde(default)]
    pub experiment: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Mode index for single-branch experiments.
    pub n: usize,
    /// Modes covered by `sweep`.
    pub modes: Vec<usize>,
    pub nu_range: [f64; 2],
    pub nu_step: f64,
    /// Cone and rescaling checks run over these δ.
    pub deltas: Vec<f64>,
    /// Generic frequency of the wave packet.
    pub delta: f64,
    pub beta: f64,
    pub hbar_ladder: Vec<f64>,
    pub residual_t: f64,
    pub transport_times: Vec<f64>,
    pub transport_hbar: f64,
    pub samples: usize,
    /// Solver nodes; wave packets keep their own default when absent.
    pub grid_n: Option<usize>,
    pub grid_l: Option<f64>,
    pub tol: f64,
    pub profile_t: f64,
    pub profile_width: f64,
    pub profile_nodes: usize,
    pub profile_half_width: f64,
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub full_slope_window: [f64; 2],
    pub leading_slope_window: [f64; 2],
}

impl Default for Params {
    fn default() -> Self {
        Self {
            n: 1,
            modes: vec![1, 2, 3, 4],
            nu_range: [-4.0, 4.0],
            nu_step: 0.05,
            deltas: vec![0.5, 1.0, 2.0, 8.0],
            delta: 1.0,
            beta: 0.5,
            hbar_ladder: vec![0.1, 0.05, 0.025, 0.0125],
            residual_t: 0.25,
            transport_times: vec![0.0, 0.25, 0.5],
            transport_hbar: 0.0125,
            samples: 10_000,
            grid_n: None,
            grid_l: None,
            tol: 1e-10,
            profile_t: 3.0,
            profile_width: 1.0,
            profile_nodes: 2048,
            profile_half_width: 60.0,
            q: None,
            p: None,
            full_slope_window: [1.35, 1.65],
            leading_slope_window: [0.85, 1.15],
        }
    }
}

fn finite(name: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be finite, got {x}")))
    }
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {x}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let c: Self = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.params;
        if p.n == 0 || p.modes.contains(&0) {
            return Err(CliError::Config("mode indices start at 1".into()));
        }
        if p.n > 64 || p.modes.iter().any(|&m| m > 64) {
            return Err(CliError::Config("mode indices above 64 are not supported".into()));
        }
        for (name, x) in [
            ("nu_range[0]", p.nu_range[0]),
            ("nu_range[1]", p.nu_range[1]),
            ("beta", p.beta),
            ("residual_t", p.residual_t),
            ("profile_t", p.profile_t),
        ] {
            finite(name, x)?;
        }
        if p.nu_range[0] > p.nu_range[1] {
            return Err(CliError::Config("nu_range must be increasing".into()));
        }
        positive("nu_step", p.nu_step)?;
        if (p.nu_range[1] - p.nu_range[0]) / p.nu_step > 1e6 {
            return Err(CliError::Config("nu grid has more than a million points".into()));
        }
        for &d in &p.deltas {
            positive("deltas", d.abs())?;
        }
        positive("|delta|", p.delta.abs())?;
        for &h in &p.hbar_ladder {
            positive("hbar_ladder", h)?;
        }
        positive("transport_hbar", p.transport_hbar)?;
        for &t in &p.transport_times {
            finite("transport_times", t)?;
        }
        if p.samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if let Some(n) = p.grid_n {
            if !(16..=1 << 22).contains(&n) {
                return Err(CliError::Config(format!("grid_n {n} outside [16, 2^22]")));
            }
        }
        if let Some(l) = p.grid_l {
            positive("grid_l", l)?;
        }
        positive("tol", p.tol)?;
        positive("profile_width", p.profile_width)?;
        positive("profile_half_width", p.profile_half_width)?;
        if !(8..=1 << 22).contains(&p.profile_nodes) {
            return Err(CliError::Config(format!("profile_nodes {} outside [8, 2^22]", p.profile_nodes)));
        }
        for w in [p.full_slope_window, p.leading_slope_window] {
            finite("slope window", w[0])?;
            finite("slope window", w[1])?;
            if w[0] > w[1] {
                return Err(CliError::Config("slope windows must be increasing".into()));
            }
        }
        Ok(())
    }

    /// ν samples `lo, lo + step, …` up to `hi` inclusive (within rounding).
    pub fn nu_grid(&self) -> Vec<f64> {
        let [lo, hi] = self.params.nu_range;
        let count = ((hi - lo) / self.params.nu_step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| lo + k as f64 * self.params.nu_step).collect()
    }
}

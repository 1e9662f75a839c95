//! Monte-Carlo estimates of the Schrödinger residual `iℏ∂_tψ + ℏ²Δψ` and of the x₂-centroid.
//!
//! Samples live in the offset `u = x(t)^{-1}x` and follow the packet: `u₁ ~ ℏ` (shift support
//! of the matrix coefficient), `u₂ ~ ℏ^{1/2}` and `u₄ ~ ℏ^{3/2}` (profile), `u₃` from the
//! stationary-phase wedge `|z₃| ≲ ξ_ext |z₂|`. `u₂, u₄` come from Gaussians twice as wide in
//! variance as `|a|²` and `u₃` uniformly from the wedge, with importance weights.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::packet::{AnsatzOrder, WavePacket, WavePacketSpec};
use super::WavePacketError;
use crate::algebra::GroupElement;
use crate::Complex;

/// Profile widths covered by the box in the x₂ and x₄ directions.
const PROFILE_EXTENT: f64 = 6.0;
/// Decay allowance for the matrix coefficient in `δz₃` beyond the wedge.
const WEDGE_MARGIN: f64 = 40.0;

/// Finite-difference steps as multiples of ℏ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdSteps {
    pub space: f64,
    pub time: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self { space: 1e-3, time: 1e-4 }
    }
}

impl FdSteps {
    fn absolute(&self, hbar: f64) -> Result<(f64, f64), WavePacketError> {
        let (h, dt) = (self.space * hbar, self.time * hbar);
        let limit = hbar.powf(1.5) / 10.0;
        if !(h > 0.0 && dt > 0.0) {
            return Err(WavePacketError::InvalidSpec(format!("{self:?}")));
        }
        if h > limit {
            return Err(WavePacketError::StepTooLarge { step: h, limit });
        }
        Ok((h, dt))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEstimate {
    pub order: AnsatzOrder,
    pub hbar: f64,
    pub t: f64,
    pub samples: usize,
    /// `‖iℏ∂_tψ + ℏ²Δψ‖ / ‖ψ‖`.
    pub residual: f64,
    pub sampling_error: f64,
    pub norm: f64,
    pub absolute: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub order: AnsatzOrder,
    pub rows: Vec<ResidualEstimate>,
    pub slope: f64,
    pub intercept: f64,
}

/// Importance density shared by the residual and centroid integrals.
struct Sampler {
    b1: f64,
    s2: f64,
    s4: f64,
    ct: f64,
    hbar: f64,
    xi_extent: f64,
    margin: f64,
}

impl Sampler {
    fn new(packet: &WavePacket, t: f64) -> Self {
        let h = packet.hbar();
        Self {
            b1: 2.0 * packet.xi_extent * h,
            s2: packet.spec.profile.width_at(packet.coeff, t) * h.sqrt(),
            s4: packet.spec.profile.width_x4 * h.powf(1.5),
            ct: packet.speed() * t,
            hbar: h,
            xi_extent: packet.xi_extent,
            margin: WEDGE_MARGIN / packet.spec.delta.abs(),
        }
    }

    /// Half-width in `z₃` of the wedge at offset `u₂`; even in `u₂` so that the antithetic map
    /// `(u₁, u₂, u₃, u₄) ↦ (u₁, −u₂, 2ct u₁ − u₃, −u₄)` preserves the sampling density.
    fn wedge(&self, u2: f64) -> f64 {
        self.xi_extent * (self.ct.abs() + u2.abs()) / self.hbar + self.margin
    }

    fn check(&self, packet: &WavePacket) -> Result<(), WavePacketError> {
        let u2 = PROFILE_EXTENT * self.s2;
        packet.check_resolution((self.ct.abs() + u2) / self.hbar, self.wedge(u2))
    }

    fn partner(&self, u: &GroupElement) -> GroupElement {
        GroupElement::new(u.x1, -u.x2, 2.0 * self.ct * u.x1 - u.x3, -u.x4)
    }

    /// Gaussian truncated at `PROFILE_EXTENT` standard deviations; returns the value and `1/pdf`.
    fn normal(rng: &mut ChaCha8Rng, s: f64) -> (f64, f64) {
        loop {
            let g: f64 = rng.sample(StandardNormal);
            if g.abs() <= PROFILE_EXTENT {
                return (g * s, s * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * g * g).exp());
            }
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> (GroupElement, f64) {
        let u1 = rng.gen_range(-self.b1..=self.b1);
        let (u2, w2) = Self::normal(rng, self.s2);
        let (u4, w4) = Self::normal(rng, self.s4);
        let h2 = self.hbar * self.hbar;
        let half = self.wedge(u2);
        let z3 = rng.gen_range(-half..=half);
        let u3 = self.ct * u1 + h2 * z3;
        (GroupElement::new(u1, u2, u3, u4), 2.0 * self.b1 * w2 * w4 * 2.0 * half * h2)
    }
}

/// `(|ψ|², |iℏ∂_tψ + ℏ²Δψ|²)` for the three orders at one offset.
fn sample_terms(packet: &WavePacket, t: f64, u: &GroupElement, h: f64, dt: f64) -> [[f64; 2]; 3] {
    let hbar = packet.hbar();
    let mut m = [Complex::new(0.0, 0.0); 9];
    packet.matrix_coefficients(&packet.rep_point(t, u), &mut m);
    let centre = packet.combine(t, &packet.profile_point(u), &m);
    let mut lap = [Complex::new(0.0, 0.0); 3];
    for i in [1, 2] {
        for s in [h, -h] {
            let v = packet.values_at_offset(t, &u.multiply(&GroupElement::generator(i, s)));
            for o in 0..3 {
                lap[o] += v[o];
            }
        }
    }
    // moving t at fixed x leaves z unchanged and shifts u along X₂ on the left
    let c = packet.speed();
    let shifted = |d: f64| {
        let v = GroupElement::generator(2, -c * d).multiply(u);
        packet.combine(t + d, &packet.profile_point(&v), &m)
    };
    let (up, down) = (shifted(dt), shifted(-dt));
    let mut out = [[0.0; 2]; 3];
    for o in 0..3 {
        let delta = (lap[o] - 4.0 * centre[o]) / (h * h);
        let dt_psi = (up[o] - down[o]) / (2.0 * dt);
        let r = Complex::new(0.0, hbar) * dt_psi + hbar * hbar * delta;
        out[o] = [centre[o].norm_sqr(), r.norm_sqr()];
    }
    out
}

/// Residual estimates of the three orders from one set of samples.
pub fn residual_all_orders(packet: &WavePacket, t: f64, samples: usize, seed: u64, steps: FdSteps) -> Result<[ResidualEstimate; 3], WavePacketError> {
    if samples < 2 {
        return Err(WavePacketError::NoSamples);
    }
    let hbar = packet.hbar();
    let (h, dt) = steps.absolute(hbar)?;
    let sampler = Sampler::new(packet, t);
    sampler.check(packet)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(GroupElement, f64)> = (0..samples).map(|_| sampler.draw(&mut rng)).collect();
    let terms: Vec<[[f64; 2]; 3]> = points
        .par_iter()
        .map(|(u, w)| sample_terms(packet, t, u, h, dt).map(|[p, q]| [w * p, w * q]))
        .collect();
    let n = samples as f64;
    let estimate = |o: usize| {
        let p = terms.iter().map(|s| s[o][0]).sum::<f64>() / n;
        let q = terms.iter().map(|s| s[o][1]).sum::<f64>() / n;
        let rho = q / p;
        // delta method for the ratio of means
        let var = terms.iter().map(|s| (s[o][1] - rho * s[o][0]).powi(2)).sum::<f64>() / (n - 1.0);
        let rho_err = (var / n).sqrt() / p;
        let residual = rho.sqrt();
        ResidualEstimate {
            order: AnsatzOrder::ALL[o],
            hbar,
            t,
            samples,
            residual,
            sampling_error: if residual > 0.0 { 0.5 * rho_err / residual } else { 0.0 },
            norm: p.sqrt(),
            absolute: q.sqrt(),
        }
    };
    Ok([estimate(0), estimate(1), estimate(2)])
}

pub fn residual(packet: &WavePacket, order: AnsatzOrder, t: f64, samples: usize, seed: u64, steps: FdSteps) -> Result<ResidualEstimate, WavePacketError> {
    Ok(residual_all_orders(packet, t, samples, seed, steps)?[order.index()])
}

/// Least-squares slope and intercept of `ln y` against `ln x`.
fn log_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Residuals of all orders over an ℏ ladder and their log-log slopes.
pub fn residual_scaling_experiment(
    spec: &WavePacketSpec,
    hbars: &[f64],
    t: f64,
    samples: usize,
    seed: u64,
    steps: FdSteps,
) -> Result<Vec<ScalingReport>, WavePacketError> {
    if hbars.len() < 4 {
        return Err(WavePacketError::TooFewScales { needed: 4, got: hbars.len() });
    }
    let base = WavePacket::new(spec)?;
    let mut per_order: Vec<Vec<ResidualEstimate>> = vec![Vec::new(); 3];
    for &hbar in hbars {
        let packet = base.with_hbar(hbar)?;
        for (o, e) in residual_all_orders(&packet, t, samples, seed, steps)?.into_iter().enumerate() {
            per_order[o].push(e);
        }
    }
    Ok(per_order
        .into_iter()
        .enumerate()
        .map(|(o, rows)| {
            let (slope, intercept) = log_fit(&rows.iter().map(|r| (r.hbar, r.residual)).collect::<Vec<_>>());
            ScalingReport {
                order: AnsatzOrder::ALL[o],
                rows,
                slope,
                intercept,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportRow {
    pub hbar: f64,
    pub t: f64,
    pub centroid_x2: f64,
    pub predicted_x2: f64,
    pub sampling_error: f64,
    /// Standard deviation of the x₂-marginal of the leading profile.
    pub width: f64,
    /// `|drift − ∂_βμ t| / |∂_βμ t|`, absent when the predicted drift is below the packet width.
    pub relative_drift_error: Option<f64>,
    /// `|centroid − prediction| / width`.
    pub width_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportReport {
    pub delta: f64,
    pub beta: f64,
    pub n: usize,
    pub speed: f64,
    pub order: AnsatzOrder,
    pub rows: Vec<TransportRow>,
}

fn centroid(packet: &WavePacket, order: AnsatzOrder, t: f64, samples: usize, seed: u64) -> Result<TransportRow, WavePacketError> {
    if samples < 2 {
        return Err(WavePacketError::NoSamples);
    }
    let sampler = Sampler::new(packet, t);
    sampler.check(packet)?;
    let centre_x2 = packet.flow.center(t).x2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(GroupElement, f64)> = (0..samples).map(|_| sampler.draw(&mut rng)).collect();
    let pairs: Vec<(f64, f64)> = points
        .par_iter()
        .map(|(u, w)| {
            let p = packet.values_at_offset(t, u)[order.index()].norm_sqr();
            let q = packet.values_at_offset(t, &sampler.partner(u))[order.index()].norm_sqr();
            (w * (p + q), w * u.x2 * (p - q))
        })
        .collect();
    let mass: f64 = pairs.iter().map(|p| p.0).sum();
    let moment: f64 = pairs.iter().map(|p| p.1).sum();
    let offset = moment / mass;
    let spread = pairs.iter().map(|(m, x)| (x - offset * m).powi(2)).sum::<f64>().sqrt();
    let hbar = packet.hbar();
    let width = packet.spec.profile.width_at(packet.coeff, t) * (hbar / 2.0).sqrt();
    let predicted = centre_x2;
    let centroid_x2 = centre_x2 + offset;
    let predicted_drift = packet.speed() * t;
    let drift = centroid_x2 - packet.spec.x0.x2;
    Ok(TransportRow {
        hbar,
        t,
        centroid_x2,
        predicted_x2: predicted,
        sampling_error: spread / mass,
        width,
        relative_drift_error: (predicted_drift.abs() > width).then(|| (drift - predicted_drift).abs() / predicted_drift.abs()),
        width_fraction: offset.abs() / width,
    })
}

/// x₂-centroid of `|ψ|²` against the predicted center for each `(ℏ, t)`.
pub fn transport_demo(
    spec: &WavePacketSpec,
    times: &[f64],
    hbars: &[f64],
    order: AnsatzOrder,
    samples: usize,
    seed: u64,
) -> Result<TransportReport, WavePacketError> {
    let base = WavePacket::new(spec)?;
    let mut rows = Vec::new();
    for &hbar in hbars {
        let packet = base.with_hbar(hbar)?;
        for &t in times {
            rows.push(centroid(&packet, order, t, samples, seed)?);
        }
    }
    Ok(TransportReport {
        delta: spec.delta,
        beta: spec.beta,
        n: spec.n,
        speed: base.speed(),
        order,
        rows,
    })
}

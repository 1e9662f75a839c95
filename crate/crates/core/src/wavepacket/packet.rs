//! The ansatz `ℏ^{-7/4} e^{iS/ℏ} ⟨π(ℏ^{-1}·(x₀^{-1}x)) v, Φ₂⟩` with
//! `v = aΦ₁ + ℏ^{1/2}σ₁Φ₁ + ℏσ₂Φ₁` evaluated at `y = ℏ^{-1/2}·(x(t)^{-1}x)`.
//!
//! Every term of `v` is a scalar function of `(t, y)` times one of nine fixed grid vectors, so
//! a point evaluation needs nine matrix coefficients sharing one multiplier.

use serde::{Deserialize, Serialize};

use super::profile::{GaussianProfile, ProfileJet};
use super::WavePacketError;
use crate::algebra::GroupElement;
use crate::fourier::spline::SplineBank;
use crate::spectral::{ProjectorPair, SolverConfig, SpectralGrid, Symbol};
use crate::Complex;

const QUARTER_DIMENSION: f64 = 1.75;
const EIGEN_TOLERANCE: f64 = 1e-8;
/// Nodes where `|Φ₂|` is below this fraction of its peak are skipped in matrix coefficients.
const SUPPORT_CUTOFF: f64 = 1e-14;
/// Defines the ξ-extent used to size sampling boxes.
const EXTENT_CUTOFF: f64 = 1e-8;
const VECTORS: usize = 9;

const I: Complex = Complex::new(0.0, 1.0);
const ZERO: Complex = Complex::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzOrder {
    Leading,
    WithSigma1,
    WithSigma1And2,
}

impl AnsatzOrder {
    pub const ALL: [AnsatzOrder; 3] = [AnsatzOrder::Leading, AnsatzOrder::WithSigma1, AnsatzOrder::WithSigma1And2];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Exponent of ℏ expected for the relative residual.
    pub fn expected_exponent(self) -> f64 {
        0.5 * (self.index() + 1) as f64
    }
}

/// Choice of the second vector in the matrix coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProbeVector {
    #[default]
    Eigenvector,
    Gaussian {
        center: f64,
        width: f64,
    },
}

fn default_nodes() -> usize {
    8192
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavePacketSpec {
    pub x0: GroupElement,
    pub delta: f64,
    pub beta: f64,
    pub n: usize,
    #[serde(default)]
    pub profile: GaussianProfile,
    #[serde(default)]
    pub probe: ProbeVector,
    pub hbar: f64,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default)]
    pub half_width: Option<f64>,
}

impl WavePacketSpec {
    pub fn new(delta: f64, beta: f64, n: usize, hbar: f64) -> Self {
        Self {
            x0: GroupElement::identity(),
            delta,
            beta,
            n,
            profile: GaussianProfile::default(),
            probe: ProbeVector::Eigenvector,
            hbar,
            nodes: default_nodes(),
            half_width: None,
        }
    }

    pub fn validate(&self) -> Result<(), WavePacketError> {
        let bad = |m: &str| Err(WavePacketError::InvalidSpec(m.to_string()));
        if !(self.delta != 0.0 && self.delta.is_finite() && self.beta.is_finite()) {
            return bad("δ must be finite and nonzero, β finite");
        }
        if self.n == 0 {
            return bad("mode index starts at 1");
        }
        if !(self.hbar > 0.0 && self.hbar <= 1.0) {
            return bad("ℏ must lie in (0, 1]");
        }
        if self.x0.coords().iter().any(|c| !c.is_finite()) {
            return bad("x₀ must be finite");
        }
        if self.nodes < 64 {
            return bad("too few grid nodes");
        }
        if let ProbeVector::Gaussian { center, width } = self.probe {
            if !(width > 0.0 && width.is_finite() && center.is_finite()) {
                return bad("probe Gaussian needs a finite center and positive width");
            }
        }
        self.profile.validate()
    }
}

/// Phase `S(t) = −μ t` and center `x(t) = x₀·Exp(∂_βμ t X₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseAndCenter {
    pub x0: GroupElement,
    pub mu: f64,
    pub speed: f64,
}

impl PhaseAndCenter {
    pub fn phase(&self, t: f64) -> f64 {
        -self.mu * t
    }

    pub fn center(&self, t: f64) -> GroupElement {
        self.x0.multiply(&GroupElement::generator(2, self.speed * t))
    }
}

/// `σ₂Φ₁` at one point, with the size of the diagonal part `Π_n R Π_n Φ₁` it had to cancel.
#[derive(Clone, Debug)]
pub struct Sigma2 {
    pub vector: Vec<Complex>,
    pub diagonal: f64,
}

/// Scalar coefficients of the corrector terms at one point.
#[derive(Clone, Copy, Debug)]
struct Jet {
    a: Complex,
    s1: Complex,
    s2: Complex,
    x1s1: Complex,
    x1s2: Complex,
    x2s1: Complex,
    x2s2: Complex,
    r2s1: Complex,
    r2s2: Complex,
    /// `i∂_t a + Δa`
    source: Complex,
}

/// A wave packet with its spectral data, ready for point evaluation.
#[derive(Clone, Debug)]
pub struct WavePacket {
    pub spec: WavePacketSpec,
    pub grid: SpectralGrid,
    pub projector: ProjectorPair,
    pub flow: PhaseAndCenter,
    /// `½∂_β²μ_n`, the coefficient of the profile equation.
    pub coeff: f64,
    pub eigen_residual: f64,
    /// ξ beyond which `Φ₁` and `Φ₂` are negligible.
    pub xi_extent: f64,
    phi2: Vec<f64>,
    /// `Φ₁, B₁, B₂, π(X₁)B₁, π(X₁)B₂, π(X₂)B₁, π(X₂)B₂` with `B₁ = π(X₃)Φ₁`, `B₂ = ∂_βΠ Φ₁`.
    raw: Vec<Vec<Complex>>,
    /// `Φ₁, B₁, B₂` followed by the reduced resolvent of each of the six raw vectors after `Φ₁`.
    bank: SplineBank,
    support: std::ops::Range<usize>,
}

/// Fourth-order central difference, zero outside the grid.
fn derivative4(grid: &SpectralGrid, v: &[Complex]) -> Vec<Complex> {
    let n = v.len();
    let at = |k: isize| if k >= 0 && (k as usize) < n { v[k as usize] } else { ZERO };
    let s = 1.0 / (12.0 * grid.spacing());
    (0..n as isize)
        .map(|k| (at(k - 2) - at(k - 1) * 8.0 + at(k + 1) * 8.0 - at(k + 2)) * s)
        .collect()
}

impl WavePacket {
    pub fn new(spec: &WavePacketSpec) -> Result<Self, WavePacketError> {
        spec.validate()?;
        let symbol = Symbol::generic(spec.delta, spec.beta);
        let config = SolverConfig::default().with_nodes(spec.nodes).with_half_width(spec.half_width);
        let grid = config.grid_for(&symbol, spec.n + 4)?;
        let projector = ProjectorPair::new(&symbol, spec.n, &grid, spec.n + 2)?.with_resolvent_derivative()?;
        let op = projector.hamiltonian()?;
        let hphi = op.apply(&projector.phi);
        let diff: Vec<f64> = hphi.iter().zip(&projector.phi).map(|(a, b)| a - projector.mu * b).collect();
        let eigen_residual = grid.norm(&diff);
        if !(eigen_residual <= EIGEN_TOLERANCE) {
            return Err(WavePacketError::NotEigenvector(eigen_residual));
        }
        let pts = grid.points();
        let phi2: Vec<f64> = match spec.probe {
            ProbeVector::Eigenvector => projector.phi.clone(),
            ProbeVector::Gaussian { center, width } => {
                let v: Vec<f64> = pts.iter().map(|&x| (-(x - center).powi(2) / (2.0 * width * width)).exp()).collect();
                let nv = grid.norm(&v);
                v.into_iter().map(|x| x / nv).collect()
            }
        };
        let (delta, beta) = (spec.delta, spec.beta);
        let phi1: Vec<Complex> = projector.phi.iter().map(|&p| Complex::new(p, 0.0)).collect();
        let b1: Vec<Complex> = pts.iter().zip(&projector.phi).map(|(&x, &p)| I * delta * x * p).collect();
        let b2: Vec<Complex> = projector.dphi.iter().map(|&p| Complex::new(p, 0.0)).collect();
        let x2_mult: Vec<Complex> = pts.iter().map(|&x| I * (beta + 0.5 * delta * x * x)).collect();
        let times = |m: &[Complex], v: &[Complex]| -> Vec<Complex> { m.iter().zip(v).map(|(a, b)| a * b).collect() };
        let raw = vec![
            phi1.clone(),
            b1.clone(),
            b2.clone(),
            derivative4(&grid, &b1),
            derivative4(&grid, &b2),
            times(&x2_mult, &b1),
            times(&x2_mult, &b2),
        ];
        let mut bank_vectors = vec![phi1, b1, b2];
        for v in &raw[1..] {
            bank_vectors.push(projector.reduced_resolvent(v)?);
        }
        debug_assert_eq!(bank_vectors.len(), VECTORS);
        let bank = SplineBank::new(&grid, &bank_vectors);
        let peak = phi2.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let start = phi2.iter().position(|v| v.abs() > SUPPORT_CUTOFF * peak).unwrap_or(0);
        let end = phi2.iter().rposition(|v| v.abs() > SUPPORT_CUTOFF * peak).map_or(0, |k| k + 1);
        let peak1 = projector.phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let xi_extent = pts
            .iter()
            .zip(projector.phi.iter().zip(&phi2))
            .filter(|(_, (a, b))| a.abs() > EXTENT_CUTOFF * peak1 || b.abs() > EXTENT_CUTOFF * peak)
            .map(|(x, _)| x.abs())
            .fold(0.0, f64::max);
        let flow = PhaseAndCenter {
            x0: spec.x0,
            mu: projector.mu,
            speed: projector.dmu,
        };
        Ok(Self {
            spec: spec.clone(),
            grid,
            coeff: 0.5 * projector.d2mu,
            projector,
            flow,
            eigen_residual,
            xi_extent,
            phi2,
            raw,
            bank,
            support: start..end,
        })
    }

    /// Same packet at another ℏ; no spectral work is redone.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self, WavePacketError> {
        let mut out = self.clone();
        out.spec.hbar = hbar;
        out.spec.validate()?;
        Ok(out)
    }

    pub fn hbar(&self) -> f64 {
        self.spec.hbar
    }

    pub fn speed(&self) -> f64 {
        self.flow.speed
    }

    /// `y = ℏ^{-1/2}·u`.
    pub(crate) fn profile_point(&self, u: &GroupElement) -> [f64; 4] {
        let s = self.hbar().powf(-0.5);
        [u.x1 * s, u.x2 * s, u.x3 * s * s, u.x4 * s * s * s]
    }

    /// `z = ℏ^{-1}·(x₀^{-1}x)` from `u = x(t)^{-1}x`, using `x₀^{-1}x(t) = Exp(ct X₂)`.
    pub(crate) fn rep_point(&self, t: f64, u: &GroupElement) -> GroupElement {
        let h = self.hbar();
        let ct = self.flow.speed * t;
        GroupElement::new(u.x1 / h, (ct + u.x2) / h, (u.x3 - ct * u.x1) / (h * h), u.x4 / (h * h * h))
    }

    /// Bound on the ξ-frequency `δ(z₃ + z₂(ξ + z₁))` of the multiplier where both vectors live.
    pub(crate) fn phase_frequency(&self, z2: f64, z3: f64) -> f64 {
        self.spec.delta.abs() * (self.xi_extent * z2.abs() + z3.abs())
    }

    /// Trapezoid sums of the matrix coefficients need `h·ω` safely below π.
    pub(crate) fn check_resolution(&self, z2: f64, z3: f64) -> Result<(), WavePacketError> {
        let frequency = self.phase_frequency(z2, z3);
        let spacing = self.grid.spacing();
        if spacing * frequency > 2.5 {
            return Err(WavePacketError::UnderResolved { spacing, frequency });
        }
        Ok(())
    }

    /// `⟨π(z)V_k, Φ₂⟩` for the nine bank vectors.
    pub(crate) fn matrix_coefficients(&self, z: &GroupElement, out: &mut [Complex; VECTORS]) {
        let (delta, beta) = (self.spec.delta, self.spec.beta);
        let h = self.grid.spacing();
        // θ(ξ) = c0 + c1 ξ + c2 ξ²
        let c2 = 0.5 * delta * z.x2;
        let c1 = delta * z.x3 + delta * z.x1 * z.x2;
        let c0 = delta * (z.x4 + 0.5 * z.x1 * z.x3) + (beta + 0.5 * delta * z.x1 * z.x1) * z.x2;
        let theta = |xi: f64| c0 + xi * (c1 + c2 * xi);
        let start = self.support.start;
        let grid = &self.grid;
        let phi2 = &self.phi2;
        let step = Complex::from_polar(1.0, 2.0 * c2 * h * h);
        let mut e = ZERO;
        let mut r = ZERO;
        self.bank.shifted_sums(
            z.x1,
            self.support.clone(),
            |j| {
                let k = j - start;
                if k.is_multiple_of(64) {
                    let xi = grid.node(j);
                    e = Complex::from_polar(1.0, theta(xi));
                    r = Complex::from_polar(1.0, (c1 + 2.0 * c2 * xi) * h + c2 * h * h);
                } else {
                    e *= r;
                    r *= step;
                }
                e * phi2[j]
            },
            out,
        );
        out.iter_mut().for_each(|v| *v *= h);
    }

    fn jet(&self, t: f64, y: &[f64; 4]) -> Jet {
        let k = self.coeff;
        let delta = self.spec.delta;
        let ProfileJet { a, a2, a22, g, g1, g2 } = self.spec.profile.jet(k, t, y[1], y[3]);
        let p = y[2] + y[0] * y[1];
        let x1a = -0.5 * p * a * g1;
        let x2a = a2 * g;
        let x1x1a = 0.25 * p * p * a * g2;
        let x1x2a = -0.5 * p * a2 * g1;
        let x2x1a = -0.5 * y[0] * a * g1 - 0.5 * p * a2 * g1;
        let x2x2a = a22 * g;
        // right-invariant X̃₂ = ∂₂ − y₁∂₃
        let r2x1a = -0.5 * p * a2 * g1;
        let r2x2a = a22 * g;
        let i_over_delta = I / delta;
        let dta = I * k * a22 * g;
        Jet {
            a: a * g,
            s1: i_over_delta * x1a,
            s2: -I * x2a,
            x1s1: i_over_delta * x1x1a,
            x1s2: -I * x1x2a,
            x2s1: i_over_delta * x2x1a,
            x2s2: -I * x2x2a,
            r2s1: i_over_delta * r2x1a,
            r2s2: -I * r2x2a,
            source: I * dta + x1x1a + x2x2a,
        }
    }

    /// Scalar coefficients of the nine bank vectors, ℏ-powers included.
    pub(crate) fn scalar_coefficients(&self, t: f64, y: &[f64; 4]) -> [Complex; VECTORS] {
        let j = self.jet(t, y);
        let h = self.hbar();
        let (sh, ic) = (h.sqrt(), I * self.flow.speed);
        [
            j.a,
            sh * j.s1,
            sh * j.s2,
            h * ic * j.r2s1,
            h * ic * j.r2s2,
            h * -2.0 * j.x1s1,
            h * -2.0 * j.x1s2,
            h * -2.0 * j.x2s1,
            h * -2.0 * j.x2s2,
        ]
    }

    /// `ℏ^{-7/4} e^{iS(t)/ℏ}`.
    pub(crate) fn prefactor(&self, t: f64) -> Complex {
        let h = self.hbar();
        Complex::from_polar(h.powf(-QUARTER_DIMENSION), self.flow.phase(t) / h)
    }

    /// The three truncations from precomputed matrix coefficients.
    pub(crate) fn combine(&self, t: f64, y: &[f64; 4], m: &[Complex; VECTORS]) -> [Complex; 3] {
        let c = self.scalar_coefficients(t, y);
        let p = self.prefactor(t);
        let lead = c[0] * m[0];
        let first = lead + c[1] * m[1] + c[2] * m[2];
        let full = first + (3..VECTORS).map(|k| c[k] * m[k]).sum::<Complex>();
        [p * lead, p * first, p * full]
    }

    /// Ansatz values of all orders at `u = x(t)^{-1}x`.
    pub(crate) fn values_at_offset(&self, t: f64, u: &GroupElement) -> [Complex; 3] {
        let mut m = [ZERO; VECTORS];
        self.matrix_coefficients(&self.rep_point(t, u), &mut m);
        self.combine(t, &self.profile_point(u), &m)
    }

    fn check_shift(&self, z1: f64) -> Result<(), WavePacketError> {
        let margin = 2.0 * self.grid.half_width;
        if z1.abs() > margin {
            return Err(WavePacketError::ShiftOutOfGrid { shift: z1, margin });
        }
        Ok(())
    }

    pub fn ansatz_value(&self, order: AnsatzOrder, t: f64, x: &GroupElement) -> Result<Complex, WavePacketError> {
        let u = self.flow.center(t).inverse().multiply(x);
        self.check_shift(self.rep_point(t, &u).x1)?;
        Ok(self.values_at_offset(t, &u)[order.index()])
    }

    fn local(&self, t: f64, x: &GroupElement) -> (GroupElement, [f64; 4]) {
        let u = self.flow.center(t).inverse().multiply(x);
        let y = self.profile_point(&u);
        (self.rep_point(t, &u), y)
    }

    /// `σ₁Φ₁ = (i/δ)X₁a·π(X₃)Φ₁ − iX₂a·∂_βΠ Φ₁` at the point `x`.
    pub fn corrector_sigma1(&self, t: f64, x: &GroupElement) -> Vec<Complex> {
        let (_, y) = self.local(t, x);
        let j = self.jet(t, &y);
        self.raw[1].iter().zip(&self.raw[2]).map(|(b1, b2)| j.s1 * b1 + j.s2 * b2).collect()
    }

    /// The right side `RΦ₁` of the second-order equation.
    pub fn second_order_source(&self, t: f64, x: &GroupElement) -> Vec<Complex> {
        let (_, y) = self.local(t, x);
        let j = self.jet(t, &y);
        let ic = I * self.flow.speed;
        let coef = [-j.source, ic * j.r2s1, ic * j.r2s2, -2.0 * j.x1s1, -2.0 * j.x1s2, -2.0 * j.x2s1, -2.0 * j.x2s2];
        (0..self.grid.nodes).map(|q| coef.iter().zip(&self.raw).map(|(c, v)| c * v[q]).sum()).collect()
    }

    /// `σ₂Φ₁ = (μ − H)^{-1} Π^⊥ RΦ₁`, with `|⟨RΦ₁, Φ₁⟩|` as a consistency diagnostic.
    pub fn corrector_sigma2(&self, t: f64, x: &GroupElement) -> Result<Sigma2, WavePacketError> {
        let r = self.second_order_source(t, x);
        let diagonal = (r.iter().zip(&self.projector.phi).map(|(a, p)| a * p).sum::<Complex>() * self.grid.spacing()).norm();
        Ok(Sigma2 {
            vector: self.projector.reduced_resolvent(&r)?,
            diagonal,
        })
    }

    /// `Φ₁` on the grid.
    pub fn eigenvector(&self) -> &[f64] {
        &self.projector.phi
    }

    pub fn probe(&self) -> &[f64] {
        &self.phi2
    }
}

/// `ℏ^{-7/4} a₀(ℏ^{-1/2}·(x₀^{-1}x)) ⟨π(ℏ^{-1}·(x₀^{-1}x))Φ₁, Φ₂⟩`.
pub fn build_wavepacket(packet: &WavePacket, x: &GroupElement) -> Result<Complex, WavePacketError> {
    packet.ansatz_value(AnsatzOrder::Leading, 0.0, x)
}

//! Spectral projector of one level, its parameter derivative, and the reduced resolvent.

use serde::{Deserialize, Serialize};

use super::tridiag::TriLu;
use super::{build_hamiltonian, eigen_lowest, OperatorMatrix, SpectralError, SpectralGrid, Symbol};
use crate::Complex;

/// Minimal gap accepted around the level of interest.
pub const GAP_THRESHOLD: f64 = 1e-6;

/// `Π_n = |φ_n⟩⟨φ_n|` and `∂_βΠ_n = |u⟩⟨φ_n| + |φ_n⟩⟨u|` with `u = ∂_βΠ_n φ_n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectorPair {
    pub n: usize,
    pub symbol: Symbol,
    pub grid: SpectralGrid,
    /// Grid eigenvalue (not extrapolated) so that `μ_n − H` annihilates `φ_n` to round-off.
    pub mu: f64,
    pub dmu: f64,
    pub d2mu: f64,
    pub gap: f64,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub m_max: usize,
    /// Sum of `|⟨∂H φ_n, φ_m⟩| / |μ_m − μ_n|` over the last eight retained levels.
    pub tail: f64,
}

impl ProjectorPair {
    pub fn new(symbol: &Symbol, n: usize, grid: &SpectralGrid, m_max: usize) -> Result<Self, SpectralError> {
        if n == 0 {
            return Err(SpectralError::ModeIndex);
        }
        if m_max < n {
            return Err(SpectralError::TruncationTooShort {
                requested: n,
                available: m_max,
            });
        }
        let op = build_hamiltonian(symbol, grid)?;
        let pairs = eigen_lowest(&op, m_max + 1)?;
        let j = n - 1;
        let gap = pairs.gap(j);
        if gap < GAP_THRESHOLD {
            return Err(SpectralError::GapTooSmall {
                level: n,
                gap,
                threshold: GAP_THRESHOLD,
            });
        }
        let phi = pairs.vectors[j].clone();
        let grad: Vec<f64> = grid.points().iter().map(|&xi| symbol.parameter_gradient(xi)).collect::<Result<_, _>>()?;
        let gphi: Vec<f64> = grad.iter().zip(&phi).map(|(a, b)| a * b).collect();
        let mut dphi = vec![0.0; phi.len()];
        let mut s2 = 0.0;
        let mut tail = 0.0;
        for m in 0..=m_max {
            if m == j {
                continue;
            }
            let c = grid.dot(&gphi, &pairs.vectors[m]);
            let denom = pairs.values[j] - pairs.values[m];
            let coef = c / denom;
            dphi.iter_mut().zip(&pairs.vectors[m]).for_each(|(d, v)| *d += coef * v);
            s2 += c * c / denom;
            if m + 8 > m_max {
                tail += coef.abs();
            }
        }
        Ok(Self {
            n,
            symbol: *symbol,
            grid: *grid,
            mu: pairs.values[j],
            dmu: grid.dot(&gphi, &phi),
            d2mu: 2.0 + 2.0 * s2,
            gap,
            phi,
            dphi,
            m_max,
            tail,
        })
    }

    fn dot_c(&self, v: &[Complex], w: &[f64]) -> Complex {
        v.iter().zip(w).map(|(a, b)| a * b).sum::<Complex>() * self.grid.spacing()
    }

    pub fn project(&self, v: &[Complex]) -> Vec<Complex> {
        let c = self.dot_c(v, &self.phi);
        self.phi.iter().map(|p| c * p).collect()
    }

    pub fn complement(&self, v: &[Complex]) -> Vec<Complex> {
        let p = self.project(v);
        v.iter().zip(p).map(|(a, b)| a - b).collect()
    }

    /// `∂_βΠ_n v`.
    pub fn derivative_apply(&self, v: &[Complex]) -> Vec<Complex> {
        let a = self.dot_c(v, &self.phi);
        let b = self.dot_c(v, &self.dphi);
        self.dphi.iter().zip(&self.phi).map(|(u, p)| a * u + b * p).collect()
    }

    /// `|⟨φ_n, φ_n⟩ − 1|`, the operator-norm defect of `Π_n² = Π_n` for a rank-one projector.
    pub fn idempotent_defect(&self) -> f64 {
        (self.grid.dot(&self.phi, &self.phi) - 1.0).abs()
    }

    /// Operator norm of `Π_n ∂_βΠ_n Π_n`.
    pub fn restricted_derivative_norm(&self) -> f64 {
        2.0 * self.grid.dot(&self.phi, &self.dphi).abs()
    }

    /// `‖(H − μ_n)∂_βΠ_n φ_n − (∂_βμ_n − ∂_βH)φ_n‖`.
    pub fn fh1_residual(&self) -> Result<f64, SpectralError> {
        let op = build_hamiltonian(&self.symbol, &self.grid)?;
        let hu = op.apply(&self.dphi);
        let pts = self.grid.points();
        let mut r = Vec::with_capacity(pts.len());
        for k in 0..pts.len() {
            let lhs = hu[k] - self.mu * self.dphi[k];
            let rhs = (self.dmu - self.symbol.parameter_gradient(pts[k])?) * self.phi[k];
            r.push(lhs - rhs);
        }
        Ok(self.grid.norm(&r))
    }

    /// Replace the truncated sums by exact reduced-resolvent solves:
    /// `u = (μ_n − H)^{-1}Π^⊥ ∂_βH φ_n` and `∂_β²μ_n = 2 + 2⟨∂_βH φ_n, u⟩`.
    pub fn with_resolvent_derivative(mut self) -> Result<Self, SpectralError> {
        let op = self.hamiltonian()?;
        let gphi: Vec<f64> = self
            .grid
            .points()
            .iter()
            .zip(&self.phi)
            .map(|(&xi, p)| self.symbol.parameter_gradient(xi).map(|g| g * p))
            .collect::<Result<_, _>>()?;
        let u = reduced_resolvent_solve(&op, self.mu, &self.phi, self.gap, &gphi)?;
        self.d2mu = 2.0 + 2.0 * self.grid.dot(&gphi, &u);
        self.dphi = u;
        self.tail = 0.0;
        Ok(self)
    }

    pub fn hamiltonian(&self) -> Result<OperatorMatrix, SpectralError> {
        build_hamiltonian(&self.symbol, &self.grid)
    }

    /// Reduced resolvent `(μ_n − H)^{-1} Π_n^⊥` on a complex vector.
    pub fn reduced_resolvent(&self, rhs: &[Complex]) -> Result<Vec<Complex>, SpectralError> {
        let op = self.hamiltonian()?;
        let re: Vec<f64> = rhs.iter().map(|z| z.re).collect();
        let im: Vec<f64> = rhs.iter().map(|z| z.im).collect();
        let ur = reduced_resolvent_solve(&op, self.mu, &self.phi, self.gap, &re)?;
        let ui = reduced_resolvent_solve(&op, self.mu, &self.phi, self.gap, &im)?;
        Ok(ur.into_iter().zip(ui).map(|(a, b)| Complex::new(a, b)).collect())
    }
}

/// Solve `(μ_n − H) u = Π^⊥ rhs` with `⟨u, φ_n⟩ = 0`.
///
/// Iterates `((μ_n + τ) − H) u_{k+1} = Π^⊥ rhs + τ u_k` with `τ = gap/100`, which contracts by
/// about `τ / gap` on every other level and never inverts the singular direction.
pub fn reduced_resolvent_solve(op: &OperatorMatrix, mu: f64, phi: &[f64], gap: f64, rhs: &[f64]) -> Result<Vec<f64>, SpectralError> {
    if !(gap >= GAP_THRESHOLD) {
        return Err(SpectralError::GapTooSmall {
            level: 0,
            gap,
            threshold: GAP_THRESHOLD,
        });
    }
    let g = &op.grid;
    let project_out = |v: &mut Vec<f64>| {
        let c = g.dot(v, phi);
        v.iter_mut().zip(phi).for_each(|(x, p)| *x -= c * p);
    };
    let mut b = rhs.to_vec();
    project_out(&mut b);
    let bnorm = g.norm(&b);
    if bnorm == 0.0 {
        return Ok(vec![0.0; rhs.len()]);
    }
    let tau = 0.01 * gap;
    let lu = TriLu::factor(&op.diag, op.off, mu + tau);
    let mut u = vec![0.0; rhs.len()];
    for _ in 0..60 {
        // (H − (μ+τ)) x = −(b + τu)
        let mut x: Vec<f64> = b.iter().zip(&u).map(|(bi, ui)| -(bi + tau * ui)).collect();
        lu.solve(&mut x);
        project_out(&mut x);
        let change = g.norm(&x.iter().zip(&u).map(|(a, c)| a - c).collect::<Vec<_>>());
        u = x;
        if change <= 1e-15 * g.norm(&u) {
            break;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvector_right_side() {
        let grid = SpectralGrid::new(7.0, 1200).unwrap();
        let sym = Symbol::montgomery(0.3);
        let op = build_hamiltonian(&sym, &grid).unwrap();
        let p = eigen_lowest(&op, 4).unwrap();
        let u = reduced_resolvent_solve(&op, p.values[0], &p.vectors[0], p.gap(0), &p.vectors[2]).unwrap();
        let expect: Vec<f64> = p.vectors[2].iter().map(|v| v / (p.values[0] - p.values[2])).collect();
        let err = grid.norm(&u.iter().zip(&expect).map(|(a, b)| a - b).collect::<Vec<_>>());
        assert!(err < 1e-10, "{err}");
        let z = reduced_resolvent_solve(&op, p.values[0], &p.vectors[0], p.gap(0), &vec![0.0; 1200]).unwrap();
        assert!(z.iter().all(|v| *v == 0.0));
    }
}

//! Finite-difference spectral theory of the operators `-∂² + V(ξ)` attached to the dual.
//!
//! Generic symbols carry `V = (β + δξ²/2)²`, the rescaled Montgomery family
//! `V = (ν + ξ²/2)²`, the Heisenberg symbol `V = λ²ξ²`.

pub mod grid;
pub mod projector;
pub mod tridiag;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::dual::RepParam;
pub use grid::SpectralGrid;
pub use projector::{reduced_resolvent_solve, ProjectorPair};

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("invalid grid: half-width {half_width}, {nodes} nodes")]
    InvalidGrid { half_width: f64, nodes: usize },
    #[error("representation {0:?} has no operator symbol; use a Generic or Schrodinger parameter")]
    NoSymbol(RepParam),
    #[error("generic parameter requires δ ≠ 0")]
    DegenerateGeneric,
    #[error("no parameter derivative for this symbol")]
    NoParameterDerivative,
    #[error("level {level} not confined: V(±L) = {edge} vs eigenvalue {eigenvalue}; enlarge L")]
    Confinement { level: usize, edge: f64, eigenvalue: f64 },
    #[error("near-degenerate levels {level} and {next}: gap {gap}")]
    NearDegenerate { level: usize, next: usize, gap: f64 },
    #[error("mode index must be at least 1")]
    ModeIndex,
    #[error("spectral gap {gap} at level {level} below threshold {threshold}")]
    GapTooSmall { level: usize, gap: f64, threshold: f64 },
    #[error("requested {requested} levels but the projector sum only holds {available}")]
    TruncationTooShort { requested: usize, available: usize },
}

/// A one-parameter family of potentials on the ξ-line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Symbol {
    Rep(RepParam),
    Montgomery { nu: f64 },
}

impl Symbol {
    pub fn generic(delta: f64, beta: f64) -> Self {
        Symbol::Rep(RepParam::generic(delta, beta))
    }

    pub fn montgomery(nu: f64) -> Self {
        Symbol::Montgomery { nu }
    }

    pub fn validate(&self) -> Result<(), SpectralError> {
        match *self {
            Symbol::Rep(RepParam::Generic { delta, .. }) if delta == 0.0 => Err(SpectralError::DegenerateGeneric),
            Symbol::Rep(p @ RepParam::Character { .. }) => Err(SpectralError::NoSymbol(p)),
            Symbol::Rep(p @ RepParam::Schrodinger { lambda }) if lambda == 0.0 => Err(SpectralError::NoSymbol(p)),
            _ => Ok(()),
        }
    }

    /// The quantity squared in the potential, when the potential is a square of a polynomial in β or ν.
    fn inner(&self, xi: f64) -> Option<f64> {
        match *self {
            Symbol::Rep(RepParam::Generic { delta, beta }) => Some(beta + 0.5 * delta * xi * xi),
            Symbol::Montgomery { nu } => Some(nu + 0.5 * xi * xi),
            _ => None,
        }
    }

    pub fn potential(&self, xi: f64) -> f64 {
        match *self {
            Symbol::Rep(RepParam::Schrodinger { lambda }) => lambda * lambda * xi * xi,
            _ => self.inner(xi).map(|w| w * w).unwrap_or(f64::NAN),
        }
    }

    /// `∂V/∂β` (generic) or `∂V/∂ν` (Montgomery).
    pub fn parameter_gradient(&self, xi: f64) -> Result<f64, SpectralError> {
        self.inner(xi).map(|w| 2.0 * w).ok_or(SpectralError::NoParameterDerivative)
    }

    /// Move the β or ν parameter by `d`.
    pub fn shifted(&self, d: f64) -> Result<Self, SpectralError> {
        match *self {
            Symbol::Rep(RepParam::Generic { delta, beta }) => Ok(Symbol::generic(delta, beta + d)),
            Symbol::Montgomery { nu } => Ok(Symbol::Montgomery { nu: nu + d }),
            _ => Err(SpectralError::NoParameterDerivative),
        }
    }

    /// Natural ξ length scale of the symbol.
    pub fn length_scale(&self) -> f64 {
        match *self {
            Symbol::Rep(RepParam::Generic { delta, .. }) => delta.abs().powf(-1.0 / 3.0),
            Symbol::Rep(RepParam::Schrodinger { lambda }) => lambda.abs().powf(-0.5),
            _ => 1.0,
        }
    }

    /// Scalar parameter that derivatives refer to.
    pub fn parameter(&self) -> f64 {
        match *self {
            Symbol::Rep(RepParam::Generic { beta, .. }) => beta,
            Symbol::Rep(RepParam::Schrodinger { lambda }) => lambda,
            Symbol::Rep(RepParam::Character { alpha1, .. }) => alpha1,
            Symbol::Montgomery { nu } => nu,
        }
    }
}

/// Symmetric tridiagonal matrix `-D_h² + V` with off-diagonal `-1/h²`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub grid: SpectralGrid,
    pub diag: Vec<f64>,
    pub off: f64,
    pub symbol: Symbol,
}

pub fn build_hamiltonian(symbol: &Symbol, grid: &SpectralGrid) -> Result<OperatorMatrix, SpectralError> {
    symbol.validate()?;
    let h = grid.spacing();
    let diag = grid.points().iter().map(|&xi| 2.0 / (h * h) + symbol.potential(xi)).collect();
    Ok(OperatorMatrix {
        grid: *grid,
        diag,
        off: -1.0 / (h * h),
        symbol: *symbol,
    })
}

impl OperatorMatrix {
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        tridiag::apply(&self.diag, self.off, v)
    }

    /// Potential at the outermost nodes.
    pub fn edge_potential(&self) -> f64 {
        let l = self.grid.half_width;
        self.symbol.potential(l).min(self.symbol.potential(-l))
    }
}

/// Lowest eigenpairs on one grid; vectors are normalized with weight `h`.
#[derive(Clone, Debug)]
pub struct Eigenpairs {
    pub grid: SpectralGrid,
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Eigenpairs {
    /// Distance from level `j` (0-based) to its computed neighbours.
    pub fn gap(&self, j: usize) -> f64 {
        let mut g = f64::INFINITY;
        if j > 0 {
            g = g.min(self.values[j] - self.values[j - 1]);
        }
        if j + 1 < self.values.len() {
            g = g.min(self.values[j + 1] - self.values[j]);
        }
        g
    }
}

/// Relative gap below which two levels are reported as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Flip the sign so that the leftmost node of maximal modulus is positive.
fn fix_sign(v: &mut [f64]) {
    let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if let Some(x) = v.iter().find(|x| x.abs() >= m * (1.0 - 1e-6)) {
        if *x < 0.0 {
            v.iter_mut().for_each(|y| *y = -*y);
        }
    }
}

/// The `k` lowest eigenpairs.
pub fn eigen_lowest(op: &OperatorMatrix, k: usize) -> Result<Eigenpairs, SpectralError> {
    if k == 0 {
        return Err(SpectralError::ModeIndex);
    }
    let values = tridiag::lowest_eigenvalues(&op.diag, op.off, k);
    let top = *values.last().expect("k >= 1");
    let edge = op.edge_potential();
    if edge <= top {
        return Err(SpectralError::Confinement {
            level: k,
            edge,
            eigenvalue: top,
        });
    }
    for j in 1..values.len() {
        let gap = values[j] - values[j - 1];
        if gap <= DEGENERACY_THRESHOLD * values[j].abs().max(1.0) {
            return Err(SpectralError::NearDegenerate { level: j, next: j + 1, gap });
        }
    }
    let scale = 1.0 / op.grid.spacing().sqrt();
    let mut unit: Vec<Vec<f64>> = Vec::with_capacity(k);
    for &lam in &values {
        let v = tridiag::inverse_iteration(&op.diag, op.off, lam, &unit);
        unit.push(v);
    }
    let vectors = unit
        .into_iter()
        .map(|mut v| {
            v.iter_mut().for_each(|x| *x *= scale);
            fix_sign(&mut v);
            v
        })
        .collect();
    Ok(Eigenpairs {
        grid: op.grid,
        values,
        vectors,
    })
}

/// Smallest half-width at which level energy `mu` sits under a barrier of WKB action `action`
/// and below a quarter of the wall potential.
fn confining_half_width(symbol: &Symbol, mu: f64, action: f64) -> f64 {
    let s = symbol.length_scale();
    let step = s / 400.0;
    let mut xi = 0.0;
    let mut acc = 0.0;
    let mut prev = (symbol.potential(0.0) - mu).max(0.0).sqrt();
    loop {
        xi += step;
        let v = symbol.potential(xi);
        let cur = (v - mu).max(0.0).sqrt();
        if v <= mu {
            acc = 0.0;
        } else {
            acc += 0.5 * (prev + cur) * step;
        }
        prev = cur;
        if acc >= action && v >= 4.0 * mu {
            return xi;
        }
        if xi > 1e6 * s {
            return xi;
        }
    }
}

/// Solver settings shared by the branch computations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Nodes of the coarse grid; the Richardson partner has `2N − 1`.
    pub nodes: usize,
    /// Fixed box half-width; adaptive when absent.
    pub half_width: Option<f64>,
    /// Combine spacings `h` and `h/2` to cancel the `O(h²)` error.
    pub richardson: bool,
    /// Levels kept in projector sums.
    pub m_max: usize,
    /// WKB barrier action required beyond the top requested level.
    pub barrier_action: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            nodes: 4096,
            half_width: None,
            richardson: true,
            m_max: 64,
            barrier_action: 20.0,
        }
    }
}

/// Eigenvalue and β- (or ν-) derivatives of one branch at one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub n: usize,
    pub symbol: Symbol,
    pub mu: f64,
    pub dmu: f64,
    pub d2mu: Option<f64>,
    pub grid: SpectralGrid,
}

impl SolverConfig {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_half_width(mut self, l: Option<f64>) -> Self {
        self.half_width = l;
        self
    }

    /// Grid on which the lowest `levels` eigenvalues of `symbol` are confined.
    pub fn grid_for(&self, symbol: &Symbol, levels: usize) -> Result<SpectralGrid, SpectralError> {
        symbol.validate()?;
        if let Some(l) = self.half_width {
            return SpectralGrid::new(l, self.nodes);
        }
        let mut l = 6.0 * symbol.length_scale();
        for _ in 0..40 {
            let grid = SpectralGrid::new(l, self.nodes)?;
            let op = build_hamiltonian(symbol, &grid)?;
            let top = *tridiag::lowest_eigenvalues(&op.diag, op.off, levels).last().expect("levels >= 1");
            let need = confining_half_width(symbol, top, self.barrier_action);
            if l >= need && l <= 1.25 * need {
                return Ok(grid);
            }
            l = 1.1 * need;
        }
        SpectralGrid::new(l, self.nodes)
    }

    fn grids(&self, base: SpectralGrid) -> Vec<SpectralGrid> {
        if self.richardson {
            vec![base, base.refined()]
        } else {
            vec![base]
        }
    }

    fn combine(&self, vals: &[f64]) -> f64 {
        if self.richardson {
            (4.0 * vals[1] - vals[0]) / 3.0
        } else {
            vals[0]
        }
    }

    /// The `k` lowest eigenvalues on `grid`, extrapolated when enabled.
    pub fn eigenvalues_on(&self, symbol: &Symbol, grid: SpectralGrid, k: usize) -> Result<Vec<f64>, SpectralError> {
        let per_grid: Vec<Vec<f64>> = self
            .grids(grid)
            .iter()
            .map(|g| {
                let op = build_hamiltonian(symbol, g)?;
                let vals = tridiag::lowest_eigenvalues(&op.diag, op.off, k);
                let top = *vals.last().expect("k >= 1");
                if op.edge_potential() <= top {
                    return Err(SpectralError::Confinement {
                        level: k,
                        edge: op.edge_potential(),
                        eigenvalue: top,
                    });
                }
                Ok(vals)
            })
            .collect::<Result<_, _>>()?;
        Ok((0..k).map(|j| self.combine(&per_grid.iter().map(|v| v[j]).collect::<Vec<_>>())).collect())
    }

    pub fn eigenvalues(&self, symbol: &Symbol, k: usize) -> Result<Vec<f64>, SpectralError> {
        if k == 0 {
            return Err(SpectralError::ModeIndex);
        }
        let grid = self.grid_for(symbol, k)?;
        self.eigenvalues_on(symbol, grid, k)
    }

    /// `μ_n` and its Feynman–Hellmann derivative; the second derivative from the
    /// differentiated sum over `m ≤ m_max` when `second` is set.
    pub fn branch_point(&self, symbol: &Symbol, n: usize, second: bool) -> Result<BranchPoint, SpectralError> {
        if n == 0 {
            return Err(SpectralError::ModeIndex);
        }
        let levels = if second { self.m_max.max(n) + 1 } else { n };
        let grid = self.grid_for(symbol, levels)?;
        self.branch_point_on(symbol, n, second, grid)
    }

    pub fn branch_point_on(&self, symbol: &Symbol, n: usize, second: bool, grid: SpectralGrid) -> Result<BranchPoint, SpectralError> {
        if n == 0 {
            return Err(SpectralError::ModeIndex);
        }
        let levels = if second { self.m_max.max(n) + 1 } else { n };
        let mut mus = Vec::new();
        let mut dmus = Vec::new();
        let mut d2mus = Vec::new();
        for g in self.grids(grid) {
            let op = build_hamiltonian(symbol, &g)?;
            let pairs = eigen_lowest(&op, levels)?;
            let phi = &pairs.vectors[n - 1];
            let grad: Vec<f64> = g.points().iter().map(|&xi| symbol.parameter_gradient(xi)).collect::<Result<_, _>>()?;
            let gphi: Vec<f64> = grad.iter().zip(phi).map(|(a, b)| a * b).collect();
            mus.push(pairs.values[n - 1]);
            dmus.push(g.dot(&gphi, phi));
            if second {
                let mut s = 0.0;
                for m in 0..levels {
                    if m == n - 1 {
                        continue;
                    }
                    let c = g.dot(&gphi, &pairs.vectors[m]);
                    s += c * c / (pairs.values[n - 1] - pairs.values[m]);
                }
                // the potential is a square, so its second parameter derivative is 2
                d2mus.push(2.0 + 2.0 * s);
            }
        }
        Ok(BranchPoint {
            n,
            symbol: *symbol,
            mu: self.combine(&mus),
            dmu: self.combine(&dmus),
            d2mu: if second { Some(self.combine(&d2mus)) } else { None },
            grid,
        })
    }
}

/// `⟨∂_βH φ_n, φ_n⟩` on a fixed grid, Richardson-combined per `config`.
pub fn mu_beta_derivative(config: &SolverConfig, delta: f64, beta: f64, n: usize, grid: SpectralGrid) -> Result<f64, SpectralError> {
    Ok(config.branch_point_on(&Symbol::generic(delta, beta), n, false, grid)?.dmu)
}

/// Projector `Π_n` and its β-derivative at a generic point.
pub fn projector_derivative(delta: f64, beta: f64, n: usize, grid: &SpectralGrid, m_max: usize) -> Result<ProjectorPair, SpectralError> {
    ProjectorPair::new(&Symbol::generic(delta, beta), n, grid, m_max)
}

/// `μ_n(δ, β)` predicted from the Montgomery branch: `δ^{2/3} μ̃_n(β δ^{-1/3})`, real cube roots.
pub fn rescaled_parameter(delta: f64, beta: f64) -> (f64, f64) {
    let c = delta.cbrt();
    (c * c, beta / c)
}

/// Sampled branch with its derivatives, one row per parameter value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenBranch {
    pub n: usize,
    pub samples: Vec<BranchPoint>,
}

impl EigenBranch {
    pub fn sample(config: &SolverConfig, n: usize, symbols: &[Symbol], second: bool) -> Result<Self, SpectralError> {
        use rayon::prelude::*;
        let samples = symbols.par_iter().map(|s| config.branch_point(s, n, second)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { n, samples })
    }

    pub const CSV_HEADER: [&'static str; 8] = ["n", "delta", "beta_or_nu", "mu", "dmu_dbeta", "d2mu_dbeta2", "grid_L", "grid_N"];
}

impl BranchPoint {
    /// `(δ, β)` for generic symbols, `(NaN, ν)` for the Montgomery family.
    pub fn coordinates(&self) -> (f64, f64) {
        match self.symbol {
            Symbol::Rep(RepParam::Generic { delta, beta }) => (delta, beta),
            Symbol::Montgomery { nu } => (f64::NAN, nu),
            s => (f64::NAN, s.parameter()),
        }
    }
}

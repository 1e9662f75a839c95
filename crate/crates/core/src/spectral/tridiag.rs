//! Symmetric tridiagonal eigenproblems with a constant off-diagonal.
//!
//! Eigenvalues come from Sturm-count bisection, eigenvectors from inverse iteration.

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let e2 = off * off;
    let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + off.abs());
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for &a in &diag[1..] {
        if q == 0.0 {
            q = tiny;
        }
        q = a - x - e2 / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin enclosure of the spectrum.
pub fn spectrum_bounds(diag: &[f64], off: f64) -> (f64, f64) {
    let r = 2.0 * off.abs();
    let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
    let hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
    (lo, hi)
}

/// The `k` smallest eigenvalues in increasing order, each bisected to round-off.
pub fn lowest_eigenvalues(diag: &[f64], off: f64, k: usize) -> Vec<f64> {
    let k = k.min(diag.len());
    let (lo0, hi0) = spectrum_bounds(diag, off);
    let mut lower = vec![lo0; k];
    let mut upper = vec![hi0; k];
    for j in 0..k {
        let (mut lo, mut hi) = (lower[j], upper[j]);
        loop {
            let mid = 0.5 * (lo + hi);
            let width = hi - lo;
            if mid <= lo || mid >= hi || width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
            let c = sturm_count(diag, off, mid);
            // a count also tightens the brackets of later eigenvalues
            for i in j..k {
                if i < c {
                    upper[i] = upper[i].min(mid);
                } else {
                    lower[i] = lower[i].max(mid);
                }
            }
            if c > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lower[j] = lo;
        upper[j] = hi;
    }
    (0..k).map(|j| 0.5 * (lower[j] + upper[j])).collect()
}

/// LU factors with partial pivoting of a general tridiagonal matrix.
pub struct TriLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TriLu {
    /// Factor `diag - shift` with constant off-diagonal `off`.
    pub fn factor(diag: &[f64], off: f64, shift: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|a| a - shift).collect();
        let mut dl = vec![off; n.saturating_sub(1)];
        let mut du = vec![off; n.saturating_sub(1)];
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let tiny = f64::EPSILON * (1.0 + diag.iter().fold(0.0f64, |m, a| m.max(a.abs())) + off.abs());
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = f;
                let t = du[i];
                du[i] = d[i + 1];
                d[i + 1] = t - f * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -f;
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        Self { dl, d, du, du2, swapped }
    }

    pub fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.dl[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * b[i + 2];
            }
            b[i] = s / self.d[i];
        }
    }
}

/// Solve `(T - shift) x = b` for the tridiagonal `T`.
pub fn solve_shifted(diag: &[f64], off: f64, shift: f64, b: &[f64]) -> Vec<f64> {
    let lu = TriLu::factor(diag, off, shift);
    let mut x = b.to_vec();
    lu.solve(&mut x);
    x
}

pub fn apply(diag: &[f64], off: f64, v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * v[i];
            if i > 0 {
                s += off * v[i - 1];
            }
            if i + 1 < n {
                s += off * v[i + 1];
            }
            s
        })
        .collect()
}

/// Eigenvector for an eigenvalue already known to round-off, unit Euclidean norm.
///
/// `previous` holds already computed eigenvectors that the result is kept orthogonal to.
pub fn inverse_iteration(diag: &[f64], off: f64, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
    let n = diag.len();
    let scale = lambda.abs().max(off.abs()).max(1.0);
    let lu = TriLu::factor(diag, off, lambda + 8.0 * f64::EPSILON * scale);
    // deterministic, non-symmetric start so that both parities are represented
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64 * 0.7548776662).fract() - 0.5)).collect();
    for _ in 0..3 {
        for p in previous {
            let c: f64 = p.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(p).for_each(|(x, y)| *x -= c * y);
        }
        lu.solve(&mut v);
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    for p in previous {
        let c: f64 = p.iter().zip(&v).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(p).for_each(|(x, y)| *x -= c * y);
    }
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    v
}

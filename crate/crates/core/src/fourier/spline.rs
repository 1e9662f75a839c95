//! Natural cubic spline of a complex grid function, extended by zero outside the grid.

use crate::spectral::tridiag::TriLu;
use crate::spectral::SpectralGrid;
use crate::Complex;

#[derive(Clone, Debug)]
pub struct Spline {
    x0: f64,
    h: f64,
    values: Vec<Complex>,
    second: Vec<Complex>,
}

fn second_derivatives(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let mut rhs: Vec<f64> = (1..n - 1).map(|i| 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h)).collect();
    let lu = TriLu::factor(&vec![4.0; n - 2], 1.0, 0.0);
    lu.solve(&mut rhs);
    m[1..n - 1].copy_from_slice(&rhs);
    m
}

impl Spline {
    pub fn new(grid: &SpectralGrid, values: &[Complex]) -> Self {
        let h = grid.spacing();
        let re: Vec<f64> = values.iter().map(|z| z.re).collect();
        let im: Vec<f64> = values.iter().map(|z| z.im).collect();
        let mr = second_derivatives(&re, h);
        let mi = second_derivatives(&im, h);
        Self {
            x0: grid.node(0),
            h,
            values: values.to_vec(),
            second: mr.into_iter().zip(mi).map(|(a, b)| Complex::new(a, b)).collect(),
        }
    }

    pub fn from_real(grid: &SpectralGrid, values: &[f64]) -> Self {
        let v: Vec<Complex> = values.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::new(grid, &v)
    }

    pub fn eval(&self, x: f64) -> Complex {
        let n = self.values.len();
        let u = (x - self.x0) / self.h;
        if !(u >= 0.0) || u > (n - 1) as f64 {
            return Complex::new(0.0, 0.0);
        }
        let i = (u.floor() as usize).min(n - 2);
        let t = u - i as f64;
        let s = 1.0 - t;
        let c = self.h * self.h / 6.0;
        self.values[i] * s + self.values[i + 1] * t + (self.second[i] * (s * s * s - s) + self.second[i + 1] * (t * t * t - t)) * c
    }
}

/// Several splines on one grid, node-major, evaluated together at a common shift.
#[derive(Clone, Debug)]
pub struct SplineBank {
    h: f64,
    nodes: usize,
    count: usize,
    /// `[value, second derivative]` per node and vector.
    data: Vec<[Complex; 2]>,
}

impl SplineBank {
    pub fn new(grid: &SpectralGrid, vectors: &[Vec<Complex>]) -> Self {
        let nodes = grid.nodes;
        let count = vectors.len();
        let mut data = vec![[Complex::new(0.0, 0.0); 2]; nodes * count];
        for (k, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), nodes, "vector length must match the grid");
            let s = Spline::new(grid, v);
            for j in 0..nodes {
                data[j * count + k] = [s.values[j], s.second[j]];
            }
        }
        Self {
            h: grid.spacing(),
            nodes,
            count,
            data,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `Σ_j w_j f_k(ξ_j + shift)` for every vector `k`, over the nodes `j` in `range`.
    ///
    /// `weight(j)` is called once per node in increasing order.
    pub fn shifted_sums(&self, shift: f64, range: std::ops::Range<usize>, mut weight: impl FnMut(usize) -> Complex, out: &mut [Complex]) {
        out.iter_mut().for_each(|o| *o = Complex::new(0.0, 0.0));
        let u = shift / self.h;
        let base = u.floor();
        let t = u - base;
        let s = 1.0 - t;
        let c = self.h * self.h / 6.0;
        let (ws, wt, wms, wmt) = (s, t, c * (s * s * s - s), c * (t * t * t - t));
        let off = base as i64;
        let last = self.nodes as i64 - 1;
        for j in range {
            let w = weight(j);
            let i = j as i64 + off;
            if i < 0 || i > last || (i == last && t > 0.0) {
                continue;
            }
            let i = i as usize;
            let lo = &self.data[i * self.count..(i + 1) * self.count];
            if i == last as usize {
                for (o, a) in out.iter_mut().zip(lo) {
                    *o += w * a[0];
                }
                continue;
            }
            let hi = &self.data[(i + 1) * self.count..(i + 2) * self.count];
            for ((o, a), b) in out.iter_mut().zip(lo).zip(hi) {
                *o += w * (a[0] * ws + b[0] * wt + a[1] * wms + b[1] * wmt);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_order_interior() {
        let err_at = |n: usize| {
            let g = SpectralGrid::new(8.0, n).unwrap();
            let v: Vec<Complex> = g.points().iter().map(|&x| Complex::new((-x * x).exp(), x * (-x * x).exp())).collect();
            let s = Spline::new(&g, &v);
            (0..200)
                .map(|k| {
                    let x = -2.0 + 0.0201 * k as f64;
                    (s.eval(x) - Complex::new((-x * x).exp(), x * (-x * x).exp())).norm()
                })
                .fold(0.0, f64::max)
        };
        let (a, b) = (err_at(201), err_at(401));
        let g = SpectralGrid::new(8.0, 401).unwrap();
        let v: Vec<Complex> = g.points().iter().map(|&x| Complex::new((-x * x).exp(), x.sin() * (-x * x).exp())).collect();
        let bank = SplineBank::new(&g, &[v.clone(), v.iter().map(|z| z * 2.0).collect()]);
        let single = Spline::new(&g, &v);
        let mut out = [Complex::new(0.0, 0.0); 2];
        bank.shifted_sums(0.7331, 0..401, |j| Complex::new(1.0, 0.1 * j as f64), &mut out);
        let direct: Complex = (0..401).map(|j| Complex::new(1.0, 0.1 * j as f64) * single.eval(g.node(j) + 0.7331)).sum();
        assert!((out[0] - direct).norm() < 1e-10 * direct.norm().max(1.0));
        assert!((out[1] - direct * 2.0).norm() < 1e-10 * direct.norm().max(1.0));
        assert!(a / b > 12.0, "{a} {b}");
        assert!(b < 1e-6);
    }
}

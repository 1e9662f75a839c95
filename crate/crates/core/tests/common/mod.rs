//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};

/// Montgomery operator `−∂² + (ν + ξ²/2)²` in a scaled Hermite-function basis.
pub struct HermiteGalerkin {
    size: usize,
    x2: DMatrix<f64>,
    x4: DMatrix<f64>,
    p2: DMatrix<f64>,
    scale: f64,
}

impl HermiteGalerkin {
    pub fn new(size: usize, scale: f64) -> Self {
        let big = size + 4;
        let mut x = DMatrix::zeros(big, big);
        for k in 0..big - 1 {
            let v = ((k + 1) as f64 / 2.0).sqrt();
            x[(k, k + 1)] = v;
            x[(k + 1, k)] = v;
        }
        let x2 = &x * &x;
        let x4 = &x2 * &x2;
        let mut p2 = -x2.clone();
        for k in 0..big {
            p2[(k, k)] += (2 * k + 1) as f64;
        }
        let cut = |m: &DMatrix<f64>| m.view((0, 0), (size, size)).into_owned();
        Self {
            size,
            x2: cut(&x2),
            x4: cut(&x4),
            p2: cut(&p2),
            scale,
        }
    }

    fn matrix(&self, nu: f64) -> DMatrix<f64> {
        let s = self.scale;
        let mut h = &self.p2 / (s * s) + &self.x2 * (nu * s * s) + &self.x4 * (0.25 * s.powi(4));
        for k in 0..self.size {
            h[(k, k)] += nu * nu;
        }
        h
    }

    /// Sorted eigenvalues.
    pub fn eigenvalues(&self, nu: f64) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.matrix(nu)).eigenvalues.iter().cloned().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    pub fn level(&self, nu: f64, n: usize) -> f64 {
        self.eigenvalues(nu)[n - 1]
    }

    /// Feynman–Hellmann derivative `⟨(2ν + ξ²) v, v⟩` of level `n`.
    pub fn derivative(&self, nu: f64, n: usize) -> f64 {
        let eig = SymmetricEigen::new(self.matrix(nu));
        let mut idx: Vec<usize> = (0..self.size).collect();
        idx.sort_by(|a, b| eig.eigenvalues[*a].partial_cmp(&eig.eigenvalues[*b]).unwrap());
        let v = eig.eigenvectors.column(idx[n - 1]);
        let g = &self.x2 * (self.scale * self.scale);
        2.0 * nu + (v.transpose() * g * v)[(0, 0)]
    }

    /// Root of the derivative by bisection on `[a, b]`.
    pub fn critical_point(&self, n: usize, mut a: f64, mut b: f64) -> f64 {
        let mut fa = self.derivative(a, n);
        while b - a > 1e-13 {
            let m = 0.5 * (a + b);
            let fm = self.derivative(m, n);
            if fm * fa > 0.0 {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    /// Golden-section minimum of level `n` on `[a, b]`.
    pub fn minimize(&self, n: usize, mut a: f64, mut b: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (self.level(c, n), self.level(d, n));
        while b - a > 1e-9 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = self.level(c, n);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = self.level(d, n);
            }
        }
        0.5 * (a + b)
    }

    /// Second derivative of level `n` by Richardson-combined second differences.
    pub fn curvature(&self, n: usize, nu: f64) -> f64 {
        let d2 = |h: f64| (self.level(nu + h, n) - 2.0 * self.level(nu, n) + self.level(nu - h, n)) / (h * h);
        (4.0 * d2(0.01) - d2(0.02)) / 3.0
    }
}

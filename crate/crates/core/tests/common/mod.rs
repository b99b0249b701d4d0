//! Oracles written independently of the library: direct product formulas,
//! plain quadrature sums and nalgebra eigen-solves.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use tto_core::linalg::CMatrix;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `front · Π (|a|/a)(a − z)/(1 − conj(a) z)`, with `z` for `a = 0`.
pub fn blaschke(front: Complex64, zeros: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = front;
    for &a in zeros {
        acc *= if a == c(0.0, 0.0) {
            z
        } else {
            (a.norm() / a) * (a - z) / (1.0 - a.conj() * z)
        };
    }
    acc
}

/// `k`-th Takenaka–Malmquist function at `z`.
pub fn malmquist(zeros: &[Complex64], k: usize, z: Complex64) -> Complex64 {
    let a = zeros[k];
    let lead = (1.0 - a.norm_sqr()).sqrt() / (1.0 - a.conj() * z);
    lead * blaschke(c(1.0, 0.0), &zeros[..k], z)
}

pub fn nodes(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64))
        .collect()
}

pub fn to_nalgebra(m: &CMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Largest singular value from a dense Hermitian eigen-solve of `M*M`.
pub fn eigen_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues.iter().copied().fold(0.0, f64::max).sqrt()
}

/// Operator matrix `⟨φ e_j, e_i⟩` by a direct trapezoid sum on `n` nodes.
pub fn operator_matrix(
    zeros: &[Complex64],
    phi: impl Fn(Complex64) -> Complex64,
    n: usize,
) -> DMatrix<Complex64> {
    let d = zeros.len();
    let pts = nodes(n);
    let e: Vec<Vec<Complex64>> = (0..d)
        .map(|k| pts.iter().map(|&z| malmquist(zeros, k, z)).collect())
        .collect();
    let p: Vec<Complex64> = pts.iter().map(|&z| phi(z)).collect();
    DMatrix::from_fn(d, d, |i, j| {
        (0..n)
            .map(|t| p[t] * e[j][t] * e[i][t].conj())
            .sum::<Complex64>()
            / n as f64
    })
}

/// Pass/fail bookkeeping for one criterion.
pub struct Criterion {
    pub label: String,
    pub trials: usize,
    pub worst_ratio: f64,
    pub failures: Vec<String>,
    pub info: Vec<String>,
}

impl Criterion {
    pub fn new(label: &str) -> Self {
        Self {
            label: label.to_string(),
            trials: 0,
            worst_ratio: 0.0,
            failures: Vec::new(),
            info: Vec::new(),
        }
    }

    /// Records `measured ≤ allowed`.
    pub fn le(&mut self, measured: f64, allowed: f64, what: impl FnOnce() -> String) {
        let ratio = if allowed > 0.0 {
            measured / allowed
        } else if measured <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        self.worst_ratio = self
            .worst_ratio
            .max(if ratio.is_nan() { f64::INFINITY } else { ratio });
        if !(measured <= allowed) {
            self.failures
                .push(format!("{}: {measured:.3e} > {allowed:.3e}", what()));
        }
    }

    pub fn ok(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            self.failures.push(what());
        }
    }

    pub fn unwrap<T, E: std::fmt::Display>(&mut self, r: Result<T, E>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "{} {} (trials={}, worst measured/allowed={:.3e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.label,
            self.trials,
            self.worst_ratio
        );
        for i in &self.info {
            s.push_str(&format!("\n      {i}"));
        }
        for f in self.failures.iter().take(5) {
            s.push_str(&format!("\n      ! {f}"));
        }
        if self.failures.len() > 5 {
            s.push_str(&format!("\n      ! ... {} more", self.failures.len() - 5));
        }
        s
    }
}

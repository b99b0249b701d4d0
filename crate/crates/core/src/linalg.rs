//! Small dense complex matrices and the spectral-norm iteration.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, DEFAULT_SEED};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self { rows, cols, data }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols, |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            self.cols,
            x.len(),
            "vector length differs from column count"
        );
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Settings for [`spectral_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Upper limit on repeated squarings of `M*M` applied to each start
    /// vector before plain iteration begins. Squaring stops early once the
    /// normalized power is numerically rank one.
    pub squarings: u32,
    pub seed: u64,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: 10_000,
            squarings: 64,
            seed: DEFAULT_SEED,
        }
    }
}

/// Largest singular value of `m` via power iteration on `M*M`.
///
/// Two start vectors are tried, both drawn from a seeded generator; the larger
/// Rayleigh quotient wins. Each start is first multiplied by
/// `(M*M)^(2^squarings)` (formed by normalized repeated squaring) so that
/// slowly separating eigenvalues do not exhaust the iteration budget.
pub fn spectral_norm(m: &CMatrix, opts: &PowerIteration) -> Result<f64> {
    let n = m.cols();
    if n == 0 || m.rows() == 0 {
        return Ok(0.0);
    }
    let gram = m.adjoint().matmul(m);
    let trace = gram.trace().re;
    if trace <= f64::MIN_POSITIVE {
        return Ok(0.0);
    }

    let mut accelerator = gram.scale(Complex64::new(1.0 / trace, 0.0));
    for _ in 0..opts.squarings {
        let sq = accelerator.matmul(&accelerator);
        let t = sq.trace().re;
        if !(t > f64::MIN_POSITIVE) {
            break;
        }
        accelerator = sq.scale(Complex64::new(1.0 / t, 0.0));
        // With unit trace, tr(A²) = 1 exactly when A has rank one.
        if (t - 1.0).abs() < 1e-15 {
            break;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    let mut failure = None;
    for _start in 0..2 {
        let x0: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut v = accelerator.mul_vec(&x0);
        if vec_norm(&v) < 1e-300 {
            v = x0;
        }
        match rayleigh_iteration(&gram, v, opts) {
            Ok((rho, vec)) => {
                if best.as_ref().is_none_or(|(b, _)| rho > *b) {
                    best = Some((rho, vec));
                }
            }
            Err(e) => failure = Some(e),
        }
    }
    match (best, failure) {
        (Some((rho, _)), _) => Ok(rho.max(0.0).sqrt()),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("at least one start ran"),
    }
}

fn rayleigh_iteration(
    gram: &CMatrix,
    mut v: Vec<Complex64>,
    opts: &PowerIteration,
) -> Result<(f64, Vec<Complex64>)> {
    normalize(&mut v);
    let mut rho = dot(&v, &gram.mul_vec(&v)).re;
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let mut w = gram.mul_vec(&v);
        let len = vec_norm(&w);
        if len == 0.0 {
            return Ok((0.0, v));
        }
        w.iter_mut().for_each(|x| *x /= len);
        let next = dot(&w, &gram.mul_vec(&w)).re;
        change = (next - rho).abs() / next.abs().max(f64::MIN_POSITIVE);
        v = w;
        rho = next;
        if change <= opts.rel_tol {
            return Ok((rho, v));
        }
    }
    Err(Error::NonConvergence {
        estimate: rho.max(0.0).sqrt(),
        residual: change,
        best_vector: v,
    })
}

fn normalize(v: &mut [Complex64]) {
    let len = vec_norm(v);
    if len > 0.0 {
        v.iter_mut().for_each(|x| *x /= len);
    }
}

/// Eigenvalues (ascending) of a Hermitian matrix by cyclic Jacobi rotations on
/// its real symmetric embedding `[[A, −B], [B, A]]`, each eigenvalue of which
/// appears twice.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.rows();
    let size = 2 * n;
    let mut a = vec![vec![0.0; size]; size];
    for i in 0..n {
        for j in 0..n {
            let v = h[(i, j)];
            a[i][j] = v.re;
            a[i + n][j + n] = v.re;
            a[i][j + n] = -v.im;
            a[i + n][j] = v.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..size)
            .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..size {
            for q in p + 1..size {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..size {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..size {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..size).map(|i| a[i][i]).collect();
    eig.sort_by(f64::total_cmp);
    eig.into_iter().step_by(2).collect()
}

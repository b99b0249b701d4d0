//! Quadrature on the unit circle.
//!
//! Integrals against normalized arc length `|dζ|/2π` are computed with the
//! trapezoid rule on `N` uniform nodes, which is exact for trigonometric
//! polynomials of degree below `N` and spectrally accurate for the rational
//! functions that live in finite-dimensional model spaces.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `N` uniform nodes `exp(2πij/N)` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct CircleGrid {
    size: usize,
}

impl CircleGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 16 || !size.is_multiple_of(2) {
            return Err(Error::InvalidGrid(size));
        }
        Ok(Self { size })
    }

    /// Smallest power of two that is at least `min_size` (and at least 16).
    pub fn power_of_two_at_least(min_size: usize) -> Self {
        Self {
            size: min_size.max(16).next_power_of_two(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.size as f64
    }

    pub fn node(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angle(j))
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = Complex64> + '_ {
        (0..self.size).map(|j| self.node(j))
    }

    pub fn sample(&self, f: impl Fn(Complex64) -> Complex64) -> SampledFunction {
        SampledFunction {
            grid: *self,
            values: self.nodes().map(f).collect(),
        }
    }

    pub fn sample_fallible(
        &self,
        f: impl Fn(Complex64) -> Result<Complex64>,
    ) -> Result<SampledFunction> {
        let values = self.nodes().map(f).collect::<Result<Vec<_>>>()?;
        Ok(SampledFunction {
            grid: *self,
            values,
        })
    }

    pub(crate) fn ensure_same(&self, other: &CircleGrid) -> Result<()> {
        if self.size != other.size {
            return Err(Error::GridMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(())
    }
}

impl TryFrom<usize> for CircleGrid {
    type Error = Error;

    fn try_from(size: usize) -> Result<Self> {
        Self::new(size)
    }
}

impl From<CircleGrid> for usize {
    fn from(grid: CircleGrid) -> usize {
        grid.size
    }
}

/// Complex samples of a function on the nodes of a [`CircleGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: CircleGrid,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::GridMismatch {
                left: grid.size(),
                right: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: CircleGrid, c: Complex64) -> Self {
        Self {
            grid,
            values: vec![c; grid.size()],
        }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    /// Pointwise combination of two sampled functions on the same grid.
    pub fn zip_with(
        &self,
        other: &SampledFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &SampledFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &SampledFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SampledFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// L² norm with respect to normalized arc length.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64).sqrt()
    }
}

/// `(1/N) Σ_j f(ζ_j)`, the trapezoid approximation of `∫ f |dζ|/2π`.
pub fn quadrature_mean(f: &SampledFunction) -> Complex64 {
    f.values.iter().sum::<Complex64>() / f.values.len() as f64
}

/// `⟨f, g⟩ = ∫ f ḡ |dζ|/2π`.
pub fn inner_product(f: &SampledFunction, g: &SampledFunction) -> Result<Complex64> {
    f.grid.ensure_same(&g.grid)?;
    let sum: Complex64 = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(&a, &b)| a * b.conj())
        .sum();
    Ok(sum / f.values.len() as f64)
}

/// Fourier coefficient `f̂(k) = ∫ f(ζ) ζ^{-k} |dζ|/2π`.
pub fn fourier_coefficient(f: &SampledFunction, k: i64) -> Result<Complex64> {
    let n = f.grid.size();
    if 2 * k.unsigned_abs() as usize >= n {
        return Err(Error::Aliasing(format!(
            "Fourier index {k} is not resolvable on {n} nodes"
        )));
    }
    let sum: Complex64 = f
        .values
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let idx = (j as i64 * k).rem_euclid(n as i64) as usize;
            v * f.grid.node(idx).conj()
        })
        .sum();
    Ok(sum / n as f64)
}

/// Harmonic extension `(𝔓φ)(λ) = ∫ φ(ζ) (1−|λ|²)/|ζ−λ|² |dζ|/2π`.
pub fn poisson_extension(phi: &SampledFunction, lambda: Complex64) -> Result<Complex64> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Ok(quadrature_mean(phi));
    }
    let weights = poisson_weights(phi.grid, lambda)?;
    Ok(phi.values.iter().zip(&weights).map(|(&v, &w)| v * w).sum())
}

/// Discrete Poisson weights `(1/N)(1−|λ|²)/|ζ_j−λ|²`; they sum to one up to
/// quadrature error.
pub fn poisson_weights(grid: CircleGrid, lambda: Complex64) -> Result<Vec<f64>> {
    let r2 = lambda.norm_sqr();
    if r2 >= 1.0 {
        return Err(Error::Domain(format!(
            "Poisson extension needs |λ| < 1, got {}",
            lambda.norm()
        )));
    }
    let n = grid.size() as f64;
    Ok(grid
        .nodes()
        .map(|z| (1.0 - r2) / (z - lambda).norm_sqr() / n)
        .collect())
}

/// Trigonometric polynomial `Σ_{k=-m}^{m} c_k ζ^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolynomialRepr", into = "TrigPolynomialRepr")]
pub struct TrigPolynomial {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TrigPolynomialRepr {
    m: usize,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<TrigPolynomialRepr> for TrigPolynomial {
    type Error = Error;

    fn try_from(repr: TrigPolynomialRepr) -> Result<Self> {
        if repr.coeffs.len() != 2 * repr.m + 1 {
            return Err(Error::Parse(format!(
                "trig polynomial with m = {} needs {} coefficients, found {}",
                repr.m,
                2 * repr.m + 1,
                repr.coeffs.len()
            )));
        }
        Ok(Self {
            coeffs: repr
                .coeffs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        })
    }
}

impl From<TrigPolynomial> for TrigPolynomialRepr {
    fn from(p: TrigPolynomial) -> Self {
        Self {
            m: p.degree(),
            coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TrigPolynomial {
    /// Coefficients listed from `c_{-m}` up to `c_m`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::Invalid(format!(
                "expected an odd number of coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn monomial(k: i64, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.set_coeff(k, c);
        p
    }

    /// Analytic polynomial `Σ_{k≥0} a_k ζ^k`.
    pub fn analytic(coeffs: &[Complex64]) -> Self {
        let mut p = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            p.set_coeff(k as i64, c);
        }
        p
    }

    /// `cos θ = (ζ + ζ̄)/2`.
    pub fn cos() -> Self {
        let half = Complex64::new(0.5, 0.0);
        Self {
            coeffs: vec![half, Complex64::new(0.0, 0.0), half],
        }
    }

    /// `Re ζ`; the same function as [`TrigPolynomial::cos`].
    pub fn re_z() -> Self {
        Self::cos()
    }

    /// `2 + cos θ`.
    pub fn shifted_cos() -> Self {
        let mut p = Self::cos();
        p.set_coeff(0, Complex64::new(2.0, 0.0));
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let m = self.degree() as i64;
        if k.abs() > m {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + m) as usize]
        }
    }

    pub fn set_coeff(&mut self, k: i64, c: Complex64) {
        let m = self.degree() as i64;
        if k.abs() > m {
            let new_m = k.unsigned_abs() as usize;
            let pad = new_m - m as usize;
            let zero = Complex64::new(0.0, 0.0);
            let mut coeffs = vec![zero; pad];
            coeffs.extend_from_slice(&self.coeffs);
            coeffs.extend(std::iter::repeat_n(zero, pad));
            self.coeffs = coeffs;
        }
        let m = self.degree() as i64;
        self.coeffs[(k + m) as usize] = c;
    }

    /// True when every coefficient with negative index vanishes.
    pub fn is_analytic(&self) -> bool {
        let m = self.degree();
        self.coeffs[..m].iter().all(|c| c.norm() == 0.0)
    }

    pub fn add(&self, other: &TrigPolynomial) -> Self {
        let m = self.degree().max(other.degree()) as i64;
        let coeffs = (-m..=m).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&v| v * c).collect(),
        }
    }

    /// Value at a point of the unit circle.
    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        let m = self.degree();
        // Horner in ζ for the nonnegative part and in ζ̄ for the negative part.
        let mut pos = Complex64::new(0.0, 0.0);
        for c in self.coeffs[m..].iter().rev() {
            pos = pos * zeta + c;
        }
        let zbar = zeta.conj();
        let mut neg = Complex64::new(0.0, 0.0);
        for c in self.coeffs[..m].iter() {
            neg = (neg + c) * zbar;
        }
        pos + neg
    }

    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        self.eval(Complex64::from_polar(1.0, theta))
    }

    pub fn sample(&self, grid: CircleGrid) -> SampledFunction {
        grid.sample(|z| self.eval(z))
    }

    /// Recovers `c_{-m}..c_m` from samples through [`fourier_coefficient`].
    pub fn from_samples(f: &SampledFunction, m: usize) -> Result<Self> {
        let coeffs = (-(m as i64)..=m as i64)
            .map(|k| fourier_coefficient(f, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coeffs })
    }

    /// Estimate of `‖f‖_∞` (see [`sup_norm`]).
    pub fn sup_norm(&self, refinement: usize) -> f64 {
        sup_norm(self, refinement)
    }
}

/// Lower estimate of `max_θ |f(e^{iθ})|`.
///
/// The maximum over a grid of `refinement·max(256, 16·deg)` angles is polished
/// by successive three-point parabolic steps around each competitive grid peak.
pub fn sup_norm(f: &TrigPolynomial, refinement: usize) -> f64 {
    let base = refinement.max(1) * 256usize.max(16 * f.degree());
    maximize_on_circle(|theta| f.eval_angle(theta).norm(), base).1
}

/// Maximizes a smooth periodic function of the angle: grid scan on `base`
/// angles, then parabolic refinement of every grid local maximum within 1% of
/// the best one. Returns `(θ*, value)`; the value is always an attained sample.
pub fn maximize_on_circle(f: impl Fn(f64) -> f64, base: usize) -> (f64, f64) {
    let base = base.max(8);
    let h = TAU / base as f64;
    let samples: Vec<f64> = (0..base).map(|j| f(h * j as f64)).collect();
    let top = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cutoff = top - 0.01 * top.abs();

    let mut best = (0.0, f64::NEG_INFINITY);
    for j in 0..base {
        let prev = samples[(j + base - 1) % base];
        let next = samples[(j + 1) % base];
        let here = samples[j];
        if here < cutoff || here < prev || here < next {
            continue;
        }
        let candidate = parabolic_polish(&f, h * j as f64, here, h);
        if candidate.1 > best.1 {
            best = candidate;
        }
    }
    if best.1 == f64::NEG_INFINITY {
        // Flat sample set: every point ties.
        best = (0.0, samples[0]);
    }
    best
}

fn parabolic_polish(f: &impl Fn(f64) -> f64, theta0: f64, value0: f64, h0: f64) -> (f64, f64) {
    let (mut theta, mut value, mut h) = (theta0, value0, h0);
    for _ in 0..60 {
        if h < 1e-13 {
            break;
        }
        let left = f(theta - h);
        let right = f(theta + h);
        if left > value {
            theta -= h;
            value = left;
            continue;
        }
        if right > value {
            theta += h;
            value = right;
            continue;
        }
        let curvature = left - 2.0 * value + right;
        if curvature < 0.0 {
            let offset = 0.5 * h * (left - right) / curvature;
            let candidate = theta + offset.clamp(-h, h);
            let cv = f(candidate);
            if cv > value {
                theta = candidate;
                value = cv;
            }
            h = (offset.abs() * 2.0).clamp(h * 1e-3, h * 0.5);
        } else {
            h *= 0.5;
        }
    }
    (theta.rem_euclid(TAU), value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_rejects_small_or_odd() {
        assert!(CircleGrid::new(8).is_err());
        assert!(CircleGrid::new(17).is_err());
        assert!(CircleGrid::new(16).is_ok());
    }

    #[test]
    fn quadrature_examples() {
        let grid = CircleGrid::new(64).unwrap();
        assert!(
            (quadrature_mean(&SampledFunction::constant(grid, c(1.0, 0.0))) - 1.0).norm() < 1e-15
        );
        assert!(quadrature_mean(&grid.sample(|z| z)).norm() < 1e-15);
        let f = TrigPolynomial::shifted_cos().sample(grid);
        assert!((quadrature_mean(&f) - 2.0).norm() < 1e-14);
    }

    #[test]
    fn inner_product_examples() {
        let grid = CircleGrid::new(32).unwrap();
        let one = SampledFunction::constant(grid, c(1.0, 0.0));
        let z = grid.sample(|z| z);
        assert!((inner_product(&one, &one).unwrap() - 1.0).norm() < 1e-15);
        assert!((inner_product(&z, &z).unwrap() - 1.0).norm() < 1e-15);
        assert!(inner_product(&z, &one).unwrap().norm() < 1e-15);
        let other = SampledFunction::constant(CircleGrid::new(64).unwrap(), c(1.0, 0.0));
        assert!(matches!(
            inner_product(&one, &other),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn fourier_examples() {
        let grid = CircleGrid::new(32).unwrap();
        let cos = TrigPolynomial::cos().sample(grid);
        assert!((fourier_coefficient(&cos, 1).unwrap() - 0.5).norm() < 1e-15);
        let one = SampledFunction::constant(grid, c(1.0, 0.0));
        assert!((fourier_coefficient(&one, 0).unwrap() - 1.0).norm() < 1e-15);
        let z2 = grid.sample(|z| z * z);
        assert!(fourier_coefficient(&z2, -2).unwrap().norm() < 1e-15);
        assert!(matches!(
            fourier_coefficient(&z2, 16),
            Err(Error::Aliasing(_))
        ));
        assert!(fourier_coefficient(&z2, 15).is_ok());
    }

    #[test]
    fn sup_norm_examples() {
        assert!((TrigPolynomial::constant(c(3.0, 4.0)).sup_norm(1) - 5.0).abs() < 1e-15);
        assert!((TrigPolynomial::cos().sup_norm(1) - 1.0).abs() < 1e-15);
        assert!((TrigPolynomial::shifted_cos().sup_norm(1) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn sup_norm_off_grid_peak() {
        // |1 + e^{i(θ-θ0)}| peaks at θ0 = 0.123, which is not a grid angle.
        let p = TrigPolynomial::new(vec![
            c(0.0, 0.0),
            c(1.0, 0.0),
            Complex64::from_polar(1.0, -0.123),
        ])
        .unwrap();
        assert!((p.sup_norm(1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn poisson_examples() {
        let grid = CircleGrid::new(256).unwrap();
        let one = SampledFunction::constant(grid, c(1.0, 0.0));
        assert!((poisson_extension(&one, c(0.3, -0.4)).unwrap() - 1.0).norm() < 1e-13);
        let re = TrigPolynomial::re_z().sample(grid);
        assert!((poisson_extension(&re, c(0.5, 0.0)).unwrap() - 0.5).norm() < 1e-13);
        assert!(poisson_extension(&re, c(0.0, 0.3)).unwrap().norm() < 1e-13);
        assert!(matches!(
            poisson_extension(&re, c(1.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn poisson_at_origin_is_mean() {
        let grid = CircleGrid::new(64).unwrap();
        let f = grid.sample(|z| z * z + z.conj() * 3.0 + 0.25);
        assert_eq!(
            poisson_extension(&f, c(0.0, 0.0)).unwrap(),
            quadrature_mean(&f)
        );
    }

    #[test]
    fn trig_json_round_trip() {
        let p = TrigPolynomial::shifted_cos();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"m":1,"coeffs":[[0.5,0.0],[2.0,0.0],[0.5,0.0]]}"#);
        let back: TrigPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<TrigPolynomial>(r#"{"m":1,"coeffs":[[1,0]]}"#).is_err());
    }
}

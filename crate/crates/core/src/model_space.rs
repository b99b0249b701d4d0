//! The model space `K_Θ`: reproducing kernels, an orthonormal basis, the
//! orthogonal projection `P_Θ` and the conjugation `Cf = conj(z f) Θ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::circle::{inner_product, maximize_on_circle, CircleGrid, SampledFunction};
use crate::linalg::{vec_norm, CMatrix};
use crate::{Error, Result};

const GRAM_TOLERANCE: f64 = 1e-10;

/// Coordinates of an element of `K_Θ` in a [`ModelBasis`]; serialized as an
/// array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Coords(pub Vec<Complex64>);

impl From<Vec<[f64; 2]>> for Coords {
    fn from(pairs: Vec<[f64; 2]>) -> Self {
        Coords(
            pairs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<Coords> for Vec<[f64; 2]> {
    fn from(c: Coords) -> Self {
        c.0.iter().map(|v| [v.re, v.im]).collect()
    }
}

impl Coords {
    pub fn zeros(n: usize) -> Self {
        Coords(vec![Complex64::new(0.0, 0.0); n])
    }

    /// The `k`-th basis vector.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut c = Self::zeros(n);
        c.0[k] = Complex64::new(1.0, 0.0);
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Coords(self.0.iter().map(|&v| v * a).collect())
    }

    pub fn add(&self, other: &Coords) -> Self {
        Coords(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Coords) -> Self {
        Coords(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Euclidean length, which is the `H²` norm since the basis is orthonormal.
    pub fn h2_norm(&self) -> f64 {
        vec_norm(&self.0)
    }
}

/// Samples of the reproducing kernel `k_λ` on a grid.
#[derive(Debug, Clone)]
pub struct KernelFunction {
    pub theta: BlaschkeProduct,
    pub lambda: Complex64,
    pub samples: SampledFunction,
}

/// `k_λ(z) = (1 − conj(Θ(λ)) Θ(z)) / (1 − conj(λ) z)`.
pub fn reproducing_kernel(
    theta: &BlaschkeProduct,
    lambda: Complex64,
    grid: CircleGrid,
) -> Result<KernelFunction> {
    check_interior(lambda)?;
    let theta_lambda = theta.value(lambda);
    let samples = grid.sample(|z| kernel_value(theta, lambda, theta_lambda, z));
    Ok(KernelFunction {
        theta: theta.clone(),
        lambda,
        samples,
    })
}

pub(crate) fn kernel_value(
    theta: &BlaschkeProduct,
    lambda: Complex64,
    theta_lambda: Complex64,
    z: Complex64,
) -> Complex64 {
    (1.0 - theta_lambda.conj() * theta.value(z)) / (1.0 - lambda.conj() * z)
}

/// `‖k_λ‖ = sqrt((1 − |Θ(λ)|²)/(1 − |λ|²))`.
pub fn kernel_norm(theta: &BlaschkeProduct, lambda: Complex64) -> Result<f64> {
    check_interior(lambda)?;
    Ok(((1.0 - theta.value(lambda).norm_sqr()) / (1.0 - lambda.norm_sqr())).sqrt())
}

fn check_interior(lambda: Complex64) -> Result<()> {
    if lambda.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "kernel anchor must satisfy |λ| < 1, got {}",
            lambda.norm()
        )));
    }
    Ok(())
}

/// Orthonormal basis of `K_Θ` sampled on a grid:
/// `e_k(z) = sqrt(1−|a_k|²)/(1 − conj(a_k) z) · Π_{j<k} b_{a_j}(z)`.
#[derive(Debug, Clone)]
pub struct ModelBasis {
    theta: BlaschkeProduct,
    grid: CircleGrid,
    functions: Vec<SampledFunction>,
    theta_samples: SampledFunction,
    gram_residual: f64,
}

impl ModelBasis {
    /// Builds the basis and certifies it: the Gram matrix must be the identity
    /// and every element orthogonal to `Θ ζ^j`, `j < n`, both within 1e−10.
    pub fn malmquist(theta: &BlaschkeProduct, grid: CircleGrid) -> Result<Self> {
        let n = theta.degree();
        if n == 0 {
            return Err(Error::ConstantTheta);
        }
        if grid.size() <= 4 * n {
            return Err(Error::Aliasing(format!(
                "grid of {} nodes cannot resolve a degree-{n} model space (need more than {})",
                grid.size(),
                4 * n
            )));
        }
        let functions: Vec<SampledFunction> = (0..n)
            .map(|k| grid.sample(|z| malmquist_value(theta.expanded_zeros(), k, z)))
            .collect();
        let theta_samples = grid.sample(|z| theta.value(z));

        let mut residual: f64 = 0.0;
        for (i, ei) in functions.iter().enumerate() {
            for (j, ej) in functions.iter().enumerate().skip(i) {
                let g = inner_product(ej, ei)?;
                let target = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((g - target).norm());
            }
        }
        let identity = grid.sample(|z| z);
        let mut theta_power = theta_samples.clone();
        for _ in 0..n {
            for e in &functions {
                residual = residual.max(inner_product(e, &theta_power)?.norm());
            }
            theta_power = theta_power.mul(&identity)?;
        }
        if !(residual <= GRAM_TOLERANCE) {
            return Err(Error::Precision {
                what: format!("model-space basis certificate on {} nodes", grid.size()),
                residual,
            });
        }
        Ok(Self {
            theta: theta.clone(),
            grid,
            functions,
            theta_samples,
            gram_residual: residual,
        })
    }

    pub fn theta(&self) -> &BlaschkeProduct {
        &self.theta
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    pub fn functions(&self) -> &[SampledFunction] {
        &self.functions
    }

    pub fn theta_samples(&self) -> &SampledFunction {
        &self.theta_samples
    }

    /// Largest deviation found while certifying orthonormality.
    pub fn gram_residual(&self) -> f64 {
        self.gram_residual
    }

    pub fn gram_matrix(&self) -> Result<CMatrix> {
        let n = self.dim();
        let mut g = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = inner_product(&self.functions[j], &self.functions[i])?;
            }
        }
        Ok(g)
    }

    /// Value of the `k`-th basis function anywhere on the closed disk.
    pub fn basis_value(&self, k: usize, z: Complex64) -> Complex64 {
        malmquist_value(self.theta.expanded_zeros(), k, z)
    }

    /// Value of `Σ coords_k e_k` at `z`.
    pub fn evaluate(&self, coords: &Coords, z: Complex64) -> Complex64 {
        let zeros = self.theta.expanded_zeros();
        let mut prefix = Complex64::new(1.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for (k, &a) in zeros.iter().enumerate() {
            let lead = (1.0 - a.norm_sqr()).sqrt() / (1.0 - a.conj() * z);
            total += coords.0[k] * lead * prefix;
            prefix *= normalized_factor(a, z);
        }
        total
    }

    /// `Σ_k |e_k(z)|²`, the squared norm of point evaluation at `z`.
    pub fn evaluation_norm_sqr(&self, z: Complex64) -> f64 {
        (0..self.dim())
            .map(|k| self.basis_value(k, z).norm_sqr())
            .sum()
    }

    pub fn reconstruct(&self, coords: &Coords) -> SampledFunction {
        let mut values = vec![Complex64::new(0.0, 0.0); self.grid.size()];
        for (c, e) in coords.0.iter().zip(&self.functions) {
            for (v, &s) in values.iter_mut().zip(e.values()) {
                *v += c * s;
            }
        }
        SampledFunction::new(self.grid, values).expect("basis samples share the grid")
    }

    /// Coordinates of `P_Θ f`: `⟨f, e_k⟩` for each `k`.
    pub fn project(&self, f: &SampledFunction) -> Result<Coords> {
        self.grid.ensure_same(&f.grid())?;
        self.functions
            .iter()
            .map(|e| inner_product(f, e))
            .collect::<Result<Vec<_>>>()
            .map(Coords)
    }

    /// `Cf = conj(z f(z)) Θ(z)` on the circle, projected back onto the basis.
    pub fn conjugate(&self, f: &Coords) -> Result<Coords> {
        let samples = self.reconstruct(f);
        let values = samples
            .values()
            .iter()
            .zip(self.grid.nodes())
            .zip(self.theta_samples.values())
            .map(|((&v, z), &t)| (z * v).conj() * t)
            .collect();
        self.project(&SampledFunction::new(self.grid, values)?)
    }

    /// Matrix `J` with `C(x) = J·conj(x)`; column `j` holds `C e_j`.
    pub fn conjugation_matrix(&self) -> Result<CMatrix> {
        let n = self.dim();
        let columns = (0..n)
            .map(|j| self.conjugate(&Coords::unit(n, j)).map(|c| c.0))
            .collect::<Result<Vec<_>>>()?;
        Ok(CMatrix::from_columns(&columns))
    }

    /// Estimate of `‖f‖_∞` for `f = Σ coords_k e_k`: grid scan on
    /// `refinement·max(256, 16n)` angles plus parabolic polishing.
    pub fn sup_norm_on_k(&self, coords: &Coords, refinement: usize) -> f64 {
        let base = refinement.max(1) * 256usize.max(16 * self.dim());
        maximize_on_circle(
            |t| self.evaluate(coords, Complex64::from_polar(1.0, t)).norm(),
            base,
        )
        .1
    }
}

/// `sqrt(1−|a_k|²)/(1 − conj(a_k) z) · Π_{j<k} b_{a_j}(z)`.
fn malmquist_value(zeros: &[Complex64], k: usize, z: Complex64) -> Complex64 {
    let a = zeros[k];
    let lead = (1.0 - a.norm_sqr()).sqrt() / (1.0 - a.conj() * z);
    zeros[..k]
        .iter()
        .fold(lead, |acc, &aj| acc * normalized_factor(aj, z))
}

fn normalized_factor(a: Complex64, z: Complex64) -> Complex64 {
    if a.norm_sqr() == 0.0 {
        z
    } else {
        (a.norm() / a) * (a - z) / (1.0 - a.conj() * z)
    }
}

/// Default quadrature grid for `Θ` and a symbol of the given degree: the next
/// power of two at least `16·(deg Θ + deg φ + 8)`, enlarged when a zero of `Θ`
/// sits so close to the circle that `max|a|^N` would exceed about 1e−18.
pub fn default_grid(theta: &BlaschkeProduct, symbol_degree: usize) -> CircleGrid {
    let base = 16 * (theta.degree() + symbol_degree + 8);
    let r = theta.max_zero_modulus();
    let resolve = if r > 0.0 {
        (41.5 / -r.ln()).ceil() as usize + 4 * symbol_degree
    } else {
        0
    };
    CircleGrid::power_of_two_at_least(base.max(resolve))
}

pub fn h2_norm(coords: &Coords) -> f64 {
    coords.h2_norm()
}

pub fn sup_norm_on_k(basis: &ModelBasis, coords: &Coords, refinement: usize) -> f64 {
    basis.sup_norm_on_k(coords, refinement)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn coords(v: &[(f64, f64)]) -> Coords {
        Coords(v.iter().map(|&(re, im)| c(re, im)).collect())
    }

    fn close(a: &Coords, b: &Coords, tol: f64) -> bool {
        a.sub(b).h2_norm() <= tol
    }

    fn grid() -> CircleGrid {
        CircleGrid::new(128).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let z2 = BlaschkeProduct::monomial(2);
        let k = reproducing_kernel(&z2, c(0.0, 0.0), grid()).unwrap();
        assert!(k.samples.values().iter().all(|v| (v - 1.0).norm() < 1e-15));

        let z1 = BlaschkeProduct::monomial(1);
        let k = reproducing_kernel(&z1, c(0.5, 0.0), grid()).unwrap();
        assert!(k.samples.values().iter().all(|v| (v - 1.0).norm() < 1e-14));

        let k = reproducing_kernel(&z2, c(0.5, 0.0), grid()).unwrap();
        for (v, z) in k.samples.values().iter().zip(grid().nodes()) {
            assert!((v - (1.0 + 0.5 * z)).norm() < 1e-14);
        }
        assert!(reproducing_kernel(&z2, c(1.0, 0.0), grid()).is_err());
    }

    #[test]
    fn kernel_norm_examples() {
        let z2 = BlaschkeProduct::monomial(2);
        assert!((kernel_norm(&z2, c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((kernel_norm(&z2, c(0.5, 0.0)).unwrap() - 1.25f64.sqrt()).abs() < 1e-15);
        let z1 = BlaschkeProduct::monomial(1);
        assert!((kernel_norm(&z1, c(0.3, 0.6)).unwrap() - 1.0).abs() < 1e-14);
        assert!(kernel_norm(&z1, c(0.0, -1.0)).is_err());
    }

    #[test]
    fn kernel_norm_matches_samples() {
        let theta =
            BlaschkeProduct::from_zeros(&[c(0.4, 0.1), c(-0.5, 0.5), c(0.0, -0.3)]).unwrap();
        let lambda = c(-0.2, 0.7);
        let k = reproducing_kernel(&theta, lambda, CircleGrid::new(512).unwrap()).unwrap();
        assert!((k.samples.l2_norm() - kernel_norm(&theta, lambda).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn malmquist_examples() {
        let b = ModelBasis::malmquist(&BlaschkeProduct::monomial(3), grid()).unwrap();
        for (k, e) in b.functions().iter().enumerate() {
            for (v, z) in e.values().iter().zip(grid().nodes()) {
                assert!((v - z.powi(k as i32)).norm() < 1e-14);
            }
        }
        let single = BlaschkeProduct::from_zeros(&[c(0.5, 0.0)]).unwrap();
        let b = ModelBasis::malmquist(&single, grid()).unwrap();
        for (v, z) in b.functions()[0].values().iter().zip(grid().nodes()) {
            assert!((v - 0.75f64.sqrt() / (1.0 - 0.5 * z)).norm() < 1e-14);
        }
    }

    #[test]
    fn malmquist_rejects_coarse_grid_and_constant() {
        let theta = BlaschkeProduct::monomial(8);
        assert!(matches!(
            ModelBasis::malmquist(&theta, CircleGrid::new(32).unwrap()),
            Err(Error::Aliasing(_))
        ));
        assert!(matches!(
            ModelBasis::malmquist(&BlaschkeProduct::monomial(0), grid()),
            Err(Error::ConstantTheta)
        ));
    }

    #[test]
    fn malmquist_reports_precision_loss() {
        // A zero this close to the circle needs far more than 64 nodes.
        let theta = BlaschkeProduct::from_zeros(&[c(0.99, 0.0)]).unwrap();
        match ModelBasis::malmquist(&theta, CircleGrid::new(64).unwrap()) {
            Err(Error::Precision { residual, .. }) => assert!(residual > 1e-10),
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn project_examples() {
        let b = ModelBasis::malmquist(&BlaschkeProduct::monomial(2), grid()).unwrap();
        let p = b.project(&grid().sample(|z| z)).unwrap();
        assert!(close(&p, &coords(&[(0.0, 0.0), (1.0, 0.0)]), 1e-15));
        let p = b.project(&grid().sample(|z| z * z)).unwrap();
        assert!(p.h2_norm() < 1e-15);
        let p = b.project(&grid().sample(|z| z.conj())).unwrap();
        assert!(p.h2_norm() < 1e-15);
        let other = SampledFunction::constant(CircleGrid::new(64).unwrap(), c(1.0, 0.0));
        assert!(matches!(b.project(&other), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn conjugate_examples() {
        let b = ModelBasis::malmquist(&BlaschkeProduct::monomial(2), grid()).unwrap();
        let one = coords(&[(1.0, 0.0), (0.0, 0.0)]);
        let z = coords(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(close(&b.conjugate(&one).unwrap(), &z, 1e-14));
        assert!(close(&b.conjugate(&z).unwrap(), &one, 1e-14));
        let fixed = coords(&[(1.0, 0.0), (1.0, 0.0)]);
        assert!(close(&b.conjugate(&fixed).unwrap(), &fixed, 1e-14));
        let i = c(0.0, 1.0);
        let lhs = b.conjugate(&fixed.scale(i)).unwrap();
        assert!(close(&lhs, &fixed.scale(-i), 1e-14));
    }

    #[test]
    fn norms_examples() {
        let b = ModelBasis::malmquist(&BlaschkeProduct::monomial(2), grid()).unwrap();
        let z = coords(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!((h2_norm(&z) - 1.0).abs() < 1e-15);
        assert!((sup_norm_on_k(&b, &z, 1) - 1.0).abs() < 1e-14);
        let plus = coords(&[(1.0, 0.0), (1.0, 0.0)]);
        assert!((h2_norm(&plus) - 2f64.sqrt()).abs() < 1e-15);
        assert!((sup_norm_on_k(&b, &plus, 1) - 2.0).abs() < 1e-14);
        let minus = coords(&[(1.0, 0.0), (-1.0, 0.0)]);
        assert!((sup_norm_on_k(&b, &minus, 1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn evaluate_matches_samples() {
        let theta = BlaschkeProduct::from_zeros(&[c(0.3, 0.2), c(0.3, 0.2), c(-0.7, 0.0)]).unwrap();
        let b = ModelBasis::malmquist(&theta, CircleGrid::new(256).unwrap()).unwrap();
        let f = coords(&[(0.2, -1.0), (1.5, 0.3), (-0.4, 0.8)]);
        let samples = b.reconstruct(&f);
        for (j, z) in b.grid().nodes().enumerate().step_by(17) {
            assert!((b.evaluate(&f, z) - samples.values()[j]).norm() < 1e-13);
        }
    }

    #[test]
    fn coords_json() {
        let v = coords(&[(1.0, 0.0), (0.5, -2.0)]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, "[[1.0,0.0],[0.5,-2.0]]");
        assert_eq!(serde_json::from_str::<Coords>(&text).unwrap(), v);
    }
}

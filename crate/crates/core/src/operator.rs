//! Matrix realization of truncated Toeplitz operators `A_φ f = P_Θ(φ f)`.

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::blaschke::BlaschkeProduct;
use crate::circle::{inner_product, CircleGrid, SampledFunction, TrigPolynomial};
use crate::linalg::{spectral_norm, CMatrix, PowerIteration};
use crate::model_space::{Coords, ModelBasis};
use crate::{Error, Result};

/// `n × n` matrix of `A_φ` in a [`ModelBasis`]: entry `(i, j)` is `⟨φ e_j, e_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub matrix: CMatrix,
    pub theta: BlaschkeProduct,
    pub grid: CircleGrid,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Conjugate transpose, the matrix of `A_φ* = A_{φ̄}`.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            theta: self.theta.clone(),
            grid: self.grid,
        }
    }
}

impl Serialize for OperatorMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct BasisDescriptor<'a> {
            kind: &'static str,
            theta: &'a BlaschkeProduct,
            grid: usize,
        }
        let n = self.dim();
        let entries: Vec<Vec<[f64; 2]>> = (0..n)
            .map(|i| self.matrix.row(i).iter().map(|v| [v.re, v.im]).collect())
            .collect();
        let mut s = serializer.serialize_struct("OperatorMatrix", 3)?;
        s.serialize_field("dim", &n)?;
        s.serialize_field("entries", &entries)?;
        s.serialize_field(
            "basis",
            &BasisDescriptor {
                kind: "malmquist",
                theta: &self.theta,
                grid: self.grid.size(),
            },
        )?;
        s.end()
    }
}

/// Assembles `M[i][j] = ⟨φ e_j, e_i⟩`, which equals `⟨P_Θ(φ e_j), e_i⟩`.
pub fn assemble(basis: &ModelBasis, phi: &SampledFunction) -> Result<OperatorMatrix> {
    basis.grid().ensure_same(&phi.grid())?;
    let n = basis.dim();
    let products = basis
        .functions()
        .iter()
        .map(|e| phi.mul(e))
        .collect::<Result<Vec<_>>>()?;
    let mut matrix = CMatrix::zeros(n, n);
    for (j, phi_ej) in products.iter().enumerate() {
        for (i, ei) in basis.functions().iter().enumerate() {
            matrix[(i, j)] = inner_product(phi_ej, ei)?;
        }
    }
    Ok(OperatorMatrix {
        matrix,
        theta: basis.theta().clone(),
        grid: basis.grid(),
    })
}

/// `‖A_φ‖`, the largest singular value of the assembled matrix.
pub fn operator_norm(m: &OperatorMatrix) -> Result<f64> {
    spectral_norm(&m.matrix, &PowerIteration::default())
}

pub fn adjoint(m: &OperatorMatrix) -> OperatorMatrix {
    m.adjoint()
}

/// `‖C A_φ C − A_φ*‖`. With `C(x) = J conj(x)`, the linear map `C A C` has
/// matrix `J conj(A) conj(J)`.
pub fn conjugation_identity_residual(basis: &ModelBasis, phi: &SampledFunction) -> Result<f64> {
    let a = assemble(basis, phi)?;
    let j = basis.conjugation_matrix()?;
    let cac = j.matmul(&a.matrix.conj()).matmul(&j.conj());
    spectral_norm(&cac.sub(&a.matrix.adjoint()), &PowerIteration::default())
}

/// A symbol written as `φ = f + conj(z g)` with `f, g` analytic.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSymbol {
    analytic: TrigPolynomial,
    coanalytic: TrigPolynomial,
}

impl SplitSymbol {
    pub fn new(analytic: TrigPolynomial, coanalytic: TrigPolynomial) -> Result<Self> {
        if !analytic.is_analytic() || !coanalytic.is_analytic() {
            return Err(Error::Invalid(
                "both parts of a split symbol must be supported on k ≥ 0".into(),
            ));
        }
        Ok(Self {
            analytic,
            coanalytic,
        })
    }

    /// Splits a trigonometric polynomial: `c_k` for `k ≥ 0` go to `f` and
    /// `c_{-k}` for `k ≥ 1` become `conj(c_{-k})` at index `k − 1` of `g`.
    pub fn from_trig(phi: &TrigPolynomial) -> Self {
        let m = phi.degree() as i64;
        let analytic: Vec<Complex64> = (0..=m).map(|k| phi.coeff(k)).collect();
        let coanalytic: Vec<Complex64> = (1..=m).map(|k| phi.coeff(-k).conj()).collect();
        Self {
            analytic: TrigPolynomial::analytic(&analytic),
            coanalytic: TrigPolynomial::analytic(&coanalytic),
        }
    }

    pub fn analytic(&self) -> &TrigPolynomial {
        &self.analytic
    }

    pub fn coanalytic(&self) -> &TrigPolynomial {
        &self.coanalytic
    }

    /// The symbol as a single trigonometric polynomial.
    pub fn to_trig(&self) -> TrigPolynomial {
        let mut phi = self.analytic.clone();
        for k in 0..=self.coanalytic.degree() as i64 {
            let c = self.coanalytic.coeff(k);
            if c.norm() != 0.0 {
                phi.set_coeff(-(k + 1), phi.coeff(-(k + 1)) + c.conj());
            }
        }
        phi
    }

    pub fn is_analytic(&self) -> bool {
        self.coanalytic.coeffs().iter().all(|c| c.norm() == 0.0)
    }

    /// Samples of `f(ζ) + conj(ζ g(ζ))`.
    pub fn sample(&self, grid: CircleGrid) -> SampledFunction {
        grid.sample(|z| self.analytic.eval(z) + (z * self.coanalytic.eval(z)).conj())
    }

    pub fn degree(&self) -> usize {
        self.analytic.degree().max(self.coanalytic.degree() + 1)
    }
}

/// Canonical symbol `ψ + χ·conj(Θ)` with `ψ, χ ∈ K_Θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDecomposition {
    pub psi: Coords,
    pub chi: Coords,
}

impl SymbolDecomposition {
    pub fn sample(&self, basis: &ModelBasis) -> Result<SampledFunction> {
        let psi = basis.reconstruct(&self.psi);
        let chi = basis.reconstruct(&self.chi);
        let chi_theta_bar = chi.mul(&basis.theta_samples().conj())?;
        psi.add(&chi_theta_bar)
    }
}

/// `ψ = P_Θ f`, `χ = C(P_Θ g)`; since `conj(z g)` and `conj(z P_Θ g)` differ by
/// an element of `conj(ΘzH²)`, the two symbols give the same operator.
pub fn canonical_decomposition(basis: &ModelBasis, s: &SplitSymbol) -> Result<SymbolDecomposition> {
    let grid = basis.grid();
    let psi = basis.project(&s.analytic.sample(grid))?;
    let pg = basis.project(&s.coanalytic.sample(grid))?;
    let chi = basis.conjugate(&pg)?;
    Ok(SymbolDecomposition { psi, chi })
}

/// Membership of `f + conj(zg)` in `ΘH² + conj(ΘH²)`.
///
/// `‖P_Θ f‖, ‖P_Θ g‖ ≤ tol·max(1, ‖f‖, ‖g‖)` decides quickly. That test
/// misses members whose parts only combine into `ΘH² + conj(ΘH²)`, such as
/// `conj(Θ)` itself, so a negative answer is confirmed on the operator.
pub fn is_zero_symbol(basis: &ModelBasis, s: &SplitSymbol, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let grid = basis.grid();
    let f = s.analytic.sample(grid);
    let g = s.coanalytic.sample(grid);
    let scale = 1f64.max(f.l2_norm()).max(g.l2_norm());
    let pf = basis.project(&f)?.h2_norm();
    let pg = basis.project(&g)?.h2_norm();
    if pf <= tol * scale && pg <= tol * scale {
        return Ok(true);
    }
    let norm = operator_norm(&assemble(basis, &s.sample(grid))?)?;
    Ok(norm <= tol * scale)
}

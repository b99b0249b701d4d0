//! Lower bounds on `‖A_φ‖`.
//!
//! Every bound here is of the form `|⟨A_φ u, v⟩|/(‖u‖‖v‖)` for explicit
//! `u, v ∈ K_Θ`:
//!
//! * kernel bounds pair `k_λ` with itself, giving `|∫ φ dν_λ|` for the
//!   probability measures `dν_λ = |k_λ|²/‖k_λ‖² |dζ|/2π`; the interior anchor
//!   search, the zeros of `Θ` (where `∫ φ dν_λ` is the Poisson extension) and
//!   boundary anchors (where `‖k_ζ‖² = |Θ'(ζ)|`) are all instances;
//! * projection bounds pair `k_0` with the normalized image `A_φ k_0`.
//!
//! [`bound_report`] evaluates all of them next to the computed norm and
//! `‖φ‖_∞` and records whether `bounds ≤ ‖A_φ‖ ≤ ‖φ‖_∞` holds.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blaschke::{accumulating_zero_family, BlaschkeProduct, RadiusRule};
use crate::circle::{
    maximize_on_circle, poisson_extension, CircleGrid, SampledFunction, TrigPolynomial,
};
use crate::model_space::{default_grid, Coords, ModelBasis};
use crate::operator::{assemble, canonical_decomposition, operator_norm, SplitSymbol};
use crate::{Error, Result};

/// Relative tolerance for flagging equality in an inequality.
pub const EQUALITY_REL_TOL: f64 = 1e-6;

const DEGENERATE_ANCHOR: f64 = 1e-12;

/// Where a measure `ν` is anchored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    /// `λ` in the open disk.
    Interior(Complex64),
    /// `ζ` on the circle.
    Boundary(Complex64),
}

/// Density of `ν_λ` (or `ν_ζ`) against `|dζ|/2π`, sampled on a grid.
#[derive(Debug, Clone)]
pub struct NuMeasure {
    pub theta: BlaschkeProduct,
    pub anchor: Anchor,
    pub density: Vec<f64>,
    pub grid: CircleGrid,
}

impl NuMeasure {
    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() / self.density.len() as f64
    }

    pub fn min_density(&self) -> f64 {
        self.density.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `∫ φ dν`.
    pub fn integrate(&self, phi: &SampledFunction) -> Result<Complex64> {
        self.grid.ensure_same(&phi.grid())?;
        let sum: Complex64 = phi
            .values()
            .iter()
            .zip(&self.density)
            .map(|(&v, &d)| v * d)
            .sum();
        Ok(sum / self.density.len() as f64)
    }
}

/// Interior density `(1−|λ|²)/(1−|Θ(λ)|²)·|(Θ(z)−Θ(λ))/(z−λ)|²`, boundary
/// density `|(Θ(z)−Θ(ζ))/(z−ζ)|²/|Θ'(ζ)|`.
pub fn nu_measure(theta: &BlaschkeProduct, anchor: Anchor, grid: CircleGrid) -> Result<NuMeasure> {
    let table = ThetaTable::new(theta, grid);
    let density = table.density(anchor)?;
    Ok(NuMeasure {
        theta: theta.clone(),
        anchor,
        density,
        grid,
    })
}

/// `Θ` tabulated on a grid so that anchor searches cost `O(N)` per anchor.
struct ThetaTable<'a> {
    theta: &'a BlaschkeProduct,
    nodes: Vec<Complex64>,
    values: Vec<Complex64>,
}

impl<'a> ThetaTable<'a> {
    fn new(theta: &'a BlaschkeProduct, grid: CircleGrid) -> Self {
        let nodes: Vec<Complex64> = grid.nodes().collect();
        let values = nodes.iter().map(|&z| theta.value(z)).collect();
        Self {
            theta,
            nodes,
            values,
        }
    }

    fn quotient_sqr(
        &self,
        anchor: Complex64,
        theta_anchor: Complex64,
    ) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().zip(&self.values).map(move |(&z, &tz)| {
            self.theta
                .quotient_from_values(anchor, theta_anchor, z, tz)
                .norm_sqr()
        })
    }

    fn density(&self, anchor: Anchor) -> Result<Vec<f64>> {
        match anchor {
            Anchor::Interior(lambda) => {
                if lambda.norm() >= 1.0 {
                    return Err(Error::Domain(format!(
                        "interior anchor needs |λ| < 1, got {}",
                        lambda.norm()
                    )));
                }
                let tl = self.theta.value(lambda);
                if tl.norm() >= 1.0 - DEGENERATE_ANCHOR {
                    return Err(Error::DegenerateAnchor(tl.norm()));
                }
                let scale = (1.0 - lambda.norm_sqr()) / (1.0 - tl.norm_sqr());
                Ok(self.quotient_sqr(lambda, tl).map(|q| scale * q).collect())
            }
            Anchor::Boundary(zeta) => {
                let modulus = self.theta.angular_derivative_modulus(zeta)?;
                let tz = self.theta.value(zeta);
                Ok(self.quotient_sqr(zeta, tz).map(|q| q / modulus).collect())
            }
        }
    }

    fn bound(&self, phi: &SampledFunction, anchor: Anchor) -> Result<f64> {
        let density = self.density(anchor)?;
        let sum: Complex64 = phi
            .values()
            .iter()
            .zip(&density)
            .map(|(&v, &d)| v * d)
            .sum();
        Ok((sum / density.len() as f64).norm())
    }
}

/// `|∫ φ dν_λ|` for an interior anchor.
pub fn interior_bound(
    theta: &BlaschkeProduct,
    phi: &SampledFunction,
    lambda: Complex64,
) -> Result<f64> {
    ThetaTable::new(theta, phi.grid()).bound(phi, Anchor::Interior(lambda))
}

/// `|∫ φ dν_ζ|` for a boundary anchor.
pub fn boundary_bound(
    theta: &BlaschkeProduct,
    phi: &SampledFunction,
    zeta: Complex64,
) -> Result<f64> {
    ThetaTable::new(theta, phi.grid()).bound(phi, Anchor::Boundary(zeta))
}

/// Parameters of the interior anchor search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchParams {
    pub radii: usize,
    pub angles: usize,
    pub r_max: f64,
    /// Levels of local refinement after the coarse polar grid.
    pub depth: usize,
    pub shrink: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            radii: 24,
            angles: 64,
            r_max: 0.995,
            depth: 3,
            shrink: 4.0,
        }
    }
}

/// Best anchor found by a search, with the best value after each stage.
#[derive(Debug, Clone, PartialEq)]
pub struct SupResult {
    pub anchor: Complex64,
    pub value: f64,
    pub history: Vec<f64>,
}

/// Supremum of `|∫ φ dν_λ|` over `|λ| ≤ r_max`: coarse polar grid, then
/// `depth` rounds of a 5×5 local stencil whose spacing shrinks by `shrink`.
pub fn interior_bound_sup(
    theta: &BlaschkeProduct,
    phi: &SampledFunction,
    search: &SearchParams,
) -> Result<SupResult> {
    if search.radii < 2 || search.angles < 1 || !(search.r_max > 0.0 && search.r_max < 1.0) {
        return Err(Error::Invalid(format!("bad search parameters {search:?}")));
    }
    let table = ThetaTable::new(theta, phi.grid());
    let eval = |r: f64, t: f64| {
        table
            .bound(phi, Anchor::Interior(Complex64::from_polar(r, t)))
            .ok()
    };

    let dr0 = search.r_max / (search.radii - 1) as f64;
    let dt0 = TAU / search.angles as f64;
    let mut best: Option<(f64, f64, f64)> = None;
    let consider = |r: f64, t: f64, best: &mut Option<(f64, f64, f64)>| {
        if let Some(v) = eval(r, t) {
            if best.is_none_or(|(_, _, b)| v > b) {
                *best = Some((r, t, v));
            }
        }
    };
    for i in 0..search.radii {
        let r = dr0 * i as f64;
        let angle_count = if i == 0 { 1 } else { search.angles };
        for j in 0..angle_count {
            consider(r, dt0 * j as f64, &mut best);
        }
    }
    let Some(mut current) = best else {
        return Err(Error::DegenerateAnchor(1.0));
    };
    let mut history = vec![current.2];
    let (mut dr, mut dt) = (dr0, dt0);
    for _ in 0..search.depth {
        dr /= search.shrink;
        dt /= search.shrink;
        let (r0, t0, _) = current;
        let mut level_best = Some(current);
        for a in -2i32..=2 {
            for b in -2i32..=2 {
                let r = (r0 + a as f64 * dr).clamp(0.0, search.r_max);
                consider(r, t0 + b as f64 * dt, &mut level_best);
            }
        }
        current = level_best.expect("seeded with current");
        history.push(current.2);
    }
    Ok(SupResult {
        anchor: Complex64::from_polar(current.0, current.1),
        value: current.2,
        history,
    })
}

/// Largest `|𝔓φ(λ)|` over the zeros `λ` of `Θ`; zero when `Θ` has no zeros.
pub fn zero_set_bound(theta: &BlaschkeProduct, phi: &SampledFunction) -> Result<f64> {
    theta
        .zeros()
        .iter()
        .map(|z| poisson_extension(phi, z.point).map(|v| v.norm()))
        .try_fold(0.0, |acc, v| v.map(|v| f64::max(acc, v)))
}

/// Supremum of `|∫ φ dν_ζ|` over boundary anchors: scan `grid_size` equally
/// spaced `ζ`, then polish the leading peaks.
pub fn boundary_bound_sup(
    theta: &BlaschkeProduct,
    phi: &SampledFunction,
    grid_size: usize,
) -> Result<SupResult> {
    if theta.degree() == 0 {
        return Err(Error::ConstantTheta);
    }
    let table = ThetaTable::new(theta, phi.grid());
    let (t, value) = maximize_on_circle(
        |t| {
            table
                .bound(phi, Anchor::Boundary(Complex64::from_polar(1.0, t)))
                .unwrap_or(f64::NEG_INFINITY)
        },
        grid_size,
    );
    Ok(SupResult {
        anchor: Complex64::from_polar(1.0, t),
        value,
        history: vec![value],
    })
}

fn theta_at_origin(basis: &ModelBasis) -> Result<(Complex64, f64)> {
    let t0 = basis.theta().value(Complex64::new(0.0, 0.0));
    let denom = 1.0 - t0.norm_sqr();
    if !(denom > 1e-15) {
        return Err(Error::ConstantTheta);
    }
    Ok((t0, denom.sqrt()))
}

/// `‖P_Θ(φ) − conj(Θ(0)) P_Θ(Θφ)‖ / sqrt(1 − |Θ(0)|²)`.
pub fn projection_bound(basis: &ModelBasis, s: &SplitSymbol) -> Result<f64> {
    let (t0, denom) = theta_at_origin(basis)?;
    let phi = s.sample(basis.grid());
    let p_phi = basis.project(&phi)?;
    let p_theta_phi = basis.project(&basis.theta_samples().mul(&phi)?)?;
    Ok(p_phi.sub(&p_theta_phi.scale(t0.conj())).h2_norm() / denom)
}

/// `‖P_Θ f‖ / sqrt(1 − |Θ(0)|²)` for analytic `f`.
pub fn analytic_projection_bound(basis: &ModelBasis, f: &TrigPolynomial) -> Result<f64> {
    if !f.is_analytic() {
        return Err(Error::Invalid(
            "analytic projection bound needs an analytic symbol".into(),
        ));
    }
    let (_, denom) = theta_at_origin(basis)?;
    Ok(basis.project(&f.sample(basis.grid()))?.h2_norm() / denom)
}

/// `‖ψ1 − conj(Θ(0)) ψ2‖ / sqrt(1 − |Θ(0)|²)` for `φ = ψ1 + ψ2·conj(Θ)`.
pub fn mixed_bound(basis: &ModelBasis, psi1: &Coords, psi2: &Coords) -> Result<f64> {
    if psi1.len() != basis.dim() || psi2.len() != basis.dim() {
        return Err(Error::Invalid(format!(
            "coordinates must have length {}",
            basis.dim()
        )));
    }
    let (t0, denom) = theta_at_origin(basis)?;
    Ok(psi1.sub(&psi2.scale(t0.conj())).h2_norm() / denom)
}

/// Outcome of `‖f‖ ≤ sqrt(1 − |Θ(0)|²) ‖f‖_∞` for one `f ∈ K_Θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KInfinityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub equality: bool,
}

pub fn k_infinity_inequality(basis: &ModelBasis, f: &Coords) -> Result<KInfinityCheck> {
    let t0 = basis.theta().value(Complex64::new(0.0, 0.0));
    let lhs = f.h2_norm();
    let rhs = (1.0 - t0.norm_sqr()).max(0.0).sqrt() * basis.sup_norm_on_k(f, 4);
    Ok(KInfinityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-6,
        equality: rhs - lhs <= EQUALITY_REL_TOL * rhs,
    })
}

/// Estimates of the best constants in `c1‖f‖ ≤ ‖f‖_∞ ≤ c2‖f‖` on `K_Θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalConstants {
    /// Exact up to grid refinement: `max_ζ sqrt(Σ|e_k(ζ)|²)`.
    pub c2: f64,
    pub c2_anchor: [f64; 2],
    /// Smallest `‖f‖_∞/‖f‖` found; an upper estimate of the optimal `c1`.
    pub c1_estimate: f64,
    /// Certified lower bound `1/sqrt(1 − |Θ(0)|²)` for the optimal `c1`.
    pub c1_lower: f64,
    pub c1_minimizer: Coords,
    pub c1_heuristic: bool,
    pub restarts: usize,
}

/// `c2` from the boundary evaluation functional; `c1` from multi-start
/// descent of smoothed `L^p` norms (`p` doubling up to 256) over unit vectors.
pub fn extremal_constants(
    basis: &ModelBasis,
    trials: usize,
    seed: u64,
) -> Result<ExtremalConstants> {
    if trials == 0 {
        return Err(Error::Invalid(
            "extremal_constants needs at least one trial".into(),
        ));
    }
    let n = basis.dim();
    let base = 4096usize.max(64 * n);
    let (t2, c2) = maximize_on_circle(
        |t| {
            basis
                .evaluation_norm_sqr(Complex64::from_polar(1.0, t))
                .sqrt()
        },
        base,
    );

    let fine = CircleGrid::power_of_two_at_least(1024.max(64 * n));
    let table: Vec<Vec<Complex64>> = fine
        .nodes()
        .map(|z| (0..n).map(|k| basis.basis_value(k, z)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Coords)> = None;
    for _ in 0..trials {
        let mut x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        normalize(&mut x);
        for p in [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0] {
            x = lp_descent(&table, x, p, 60);
        }
        let coords = Coords(x);
        let value = basis.sup_norm_on_k(&coords, 4) / coords.h2_norm();
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, coords));
        }
    }
    let (c1_estimate, c1_minimizer) = best.expect("trials ≥ 1");
    let t0 = basis.theta().value(Complex64::new(0.0, 0.0));
    Ok(ExtremalConstants {
        c2,
        c2_anchor: [t2.cos(), t2.sin()],
        c1_estimate,
        c1_lower: 1.0 / (1.0 - t0.norm_sqr()).sqrt(),
        c1_minimizer,
        c1_heuristic: true,
        restarts: trials,
    })
}

fn normalize(x: &mut [Complex64]) {
    let len = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if len > 0.0 {
        x.iter_mut().for_each(|v| *v /= len);
    }
}

fn lp_objective(table: &[Vec<Complex64>], x: &[Complex64], p: f64) -> (f64, Vec<Complex64>) {
    let values: Vec<Complex64> = table
        .iter()
        .map(|row| row.iter().zip(x).map(|(&e, &c)| e * c).sum())
        .collect();
    let top = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return (0.0, values);
    }
    let mean = values.iter().map(|v| (v.norm() / top).powf(p)).sum::<f64>() / values.len() as f64;
    (top * mean.powf(1.0 / p), values)
}

/// Riemannian gradient descent of the `L^p` norm on the unit sphere with
/// backtracking.
fn lp_descent(
    table: &[Vec<Complex64>],
    mut x: Vec<Complex64>,
    p: f64,
    iters: usize,
) -> Vec<Complex64> {
    let n = x.len();
    let (mut value, mut samples) = lp_objective(table, &x, p);
    let mut step = 0.5;
    for _ in 0..iters {
        if value == 0.0 {
            break;
        }
        // ∂/∂conj(x_k) of mean|f|^p, up to a positive factor.
        let mut grad = vec![Complex64::new(0.0, 0.0); n];
        for (row, &f) in table.iter().zip(&samples) {
            let w = (f.norm() / value).powf(p - 2.0);
            for (g, &e) in grad.iter_mut().zip(row) {
                *g += w * f * e.conj();
            }
        }
        let radial: Complex64 = x.iter().zip(&grad).map(|(a, b)| a.conj() * b).sum();
        for (g, &xi) in grad.iter_mut().zip(&x) {
            *g -= radial * xi;
        }
        let gnorm = grad.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if gnorm < 1e-14 {
            break;
        }
        grad.iter_mut().for_each(|g| *g /= gnorm);
        let mut improved = false;
        while step > 1e-10 {
            let mut trial: Vec<Complex64> =
                x.iter().zip(&grad).map(|(&a, &g)| a - step * g).collect();
            normalize(&mut trial);
            let (tv, ts) = lp_objective(table, &trial, p);
            if tv < value {
                x = trial;
                value = tv;
                samples = ts;
                step *= 1.5;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    x
}

/// One row of the accumulation experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccumulationRow {
    pub m: usize,
    pub grid: usize,
    pub operator_norm: f64,
    pub symbol_sup_norm: f64,
    pub gap: f64,
    pub zero_set_bound: f64,
}

/// `‖A_φ‖` on the model spaces of [`accumulating_zero_family`]`(m)` for each
/// `m` in `sizes`, with the gap `‖φ‖_∞ − ‖A_φ‖`.
pub fn accumulation_experiment(
    phi: &TrigPolynomial,
    sizes: &[usize],
) -> Result<Vec<AccumulationRow>> {
    if sizes.is_empty() {
        return Err(Error::Invalid("sizes must be nonempty".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(Error::Invalid(format!(
            "sizes must be positive and strictly increasing, got {sizes:?}"
        )));
    }
    let sup = phi.sup_norm(4);
    sizes
        .iter()
        .map(|&m| {
            let theta = accumulating_zero_family(m, RadiusRule::default())?;
            let grid = default_grid(&theta, phi.degree());
            let basis = ModelBasis::malmquist(&theta, grid)?;
            let samples = phi.sample(grid);
            let norm = operator_norm(&assemble(&basis, &samples)?)?;
            Ok(AccumulationRow {
                m,
                grid: grid.size(),
                operator_norm: norm,
                symbol_sup_norm: sup,
                gap: sup - norm,
                zero_set_bound: zero_set_bound(&theta, &samples)?,
            })
        })
        .collect()
}

/// Settings for [`bound_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportOptions {
    pub search: SearchParams,
    /// Number of boundary anchors scanned; `None` uses the basis grid size.
    pub boundary_grid: Option<usize>,
    pub sup_refinement: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            search: SearchParams::default(),
            boundary_grid: None,
            sup_refinement: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub bound_tol: f64,
    pub norm_tol: f64,
    pub equality_rel: f64,
}

/// All lower bounds for one `(Θ, φ)` next to `‖A_φ‖` and `‖φ‖_∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub degree: usize,
    pub grid: usize,
    pub interior_bound_sup: Option<f64>,
    pub interior_anchor: Option<[f64; 2]>,
    pub zero_set_bound: Option<f64>,
    pub boundary_bound_sup: Option<f64>,
    pub boundary_anchor: Option<[f64; 2]>,
    pub projection_bound: Option<f64>,
    pub analytic_projection_bound: Option<f64>,
    pub mixed_bound: Option<f64>,
    pub operator_norm: f64,
    pub symbol_sup_norm: f64,
    pub ordering_ok: bool,
    pub tolerances: Tolerances,
    pub diagnostics: Vec<String>,
}

impl BoundReport {
    /// `(name, value)` for every bound that was computed.
    pub fn bounds(&self) -> Vec<(&'static str, f64)> {
        [
            ("interior_bound_sup", self.interior_bound_sup),
            ("zero_set_bound", self.zero_set_bound),
            ("boundary_bound_sup", self.boundary_bound_sup),
            ("projection_bound", self.projection_bound),
            ("analytic_projection_bound", self.analytic_projection_bound),
            ("mixed_bound", self.mixed_bound),
        ]
        .into_iter()
        .filter_map(|(name, v)| v.map(|v| (name, v)))
        .collect()
    }

    /// Largest violation of the chain `bound ≤ norm ≤ ‖φ‖_∞` (negative when
    /// every link holds with room to spare).
    pub fn worst_violation(&self) -> f64 {
        let from_bounds = self
            .bounds()
            .iter()
            .map(|(_, v)| v - self.operator_norm)
            .fold(f64::NEG_INFINITY, f64::max);
        from_bounds.max(self.operator_norm - self.symbol_sup_norm)
    }
}

fn to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Evaluates every applicable bound. Failures of individual bounds are
/// recorded in `diagnostics` and leave the field empty.
///
/// The mixed bound is evaluated on the canonical decomposition `ψ + χ·conj(Θ)`
/// of the symbol, which generates the same operator.
pub fn bound_report(
    basis: &ModelBasis,
    s: &SplitSymbol,
    opts: &ReportOptions,
) -> Result<BoundReport> {
    let theta = basis.theta();
    if theta.degree() == 0 {
        return Err(Error::ConstantTheta);
    }
    let grid = basis.grid();
    let phi = s.sample(grid);
    let operator_norm = operator_norm(&assemble(basis, &phi)?)?;
    let symbol_sup_norm = s.to_trig().sup_norm(opts.sup_refinement);
    let mut diagnostics = Vec::new();
    let mut keep = |name: &str, r: Result<f64>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            diagnostics.push(format!("{name}: {e}"));
            None
        }
    };

    let interior = interior_bound_sup(theta, &phi, &opts.search);
    let interior_anchor = interior.as_ref().ok().map(|r| to_pair(r.anchor));
    let interior_bound_sup = keep("interior_bound_sup", interior.map(|r| r.value));
    let zero_set_bound = keep("zero_set_bound", zero_set_bound(theta, &phi));
    let boundary = boundary_bound_sup(theta, &phi, opts.boundary_grid.unwrap_or(grid.size()));
    let boundary_anchor = boundary.as_ref().ok().map(|r| to_pair(r.anchor));
    let boundary_bound_sup = keep("boundary_bound_sup", boundary.map(|r| r.value));
    let projection_bound = keep("projection_bound", projection_bound(basis, s));
    let analytic_projection_bound = if s.is_analytic() {
        keep(
            "analytic_projection_bound",
            analytic_projection_bound(basis, s.analytic()),
        )
    } else {
        None
    };
    let mixed_bound = keep(
        "mixed_bound",
        canonical_decomposition(basis, s).and_then(|d| mixed_bound(basis, &d.psi, &d.chi)),
    );

    let tolerances = Tolerances {
        bound_tol: 1e-7 * (1.0 + symbol_sup_norm),
        norm_tol: 1e-6,
        equality_rel: EQUALITY_REL_TOL,
    };
    let mut report = BoundReport {
        degree: theta.degree(),
        grid: grid.size(),
        interior_bound_sup,
        interior_anchor,
        zero_set_bound,
        boundary_bound_sup,
        boundary_anchor,
        projection_bound,
        analytic_projection_bound,
        mixed_bound,
        operator_norm,
        symbol_sup_norm,
        ordering_ok: false,
        tolerances,
        diagnostics,
    };
    report.ordering_ok = report
        .bounds()
        .iter()
        .all(|(_, v)| *v <= operator_norm + tolerances.bound_tol)
        && operator_norm <= symbol_sup_norm + tolerances.norm_tol;
    Ok(report)
}

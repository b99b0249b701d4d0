//! Finite Blaschke products.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::CircleGrid;
use crate::{Error, Result};

const BOUNDARY_SLACK: f64 = 1e-12;
const REMOVABLE_THRESHOLD: f64 = 1e-8;
// Below this separation the direct quotient loses digits to cancellation.
const CANCELLATION_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub point: Complex64,
    pub multiplicity: u32,
}

/// `Θ(z) = front · Π b_a(z)^mult` with `b_a(z) = (|a|/a)(a−z)/(1−āz)` and
/// `b_0(z) = z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeRepr", into = "BlaschkeRepr")]
pub struct BlaschkeProduct {
    front: Complex64,
    zeros: Vec<Zero>,
    // Zero list with multiplicities expanded, in input order.
    expanded: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct BlaschkeRepr {
    front: [f64; 2],
    zeros: Vec<(f64, f64, u32)>,
}

impl TryFrom<BlaschkeRepr> for BlaschkeProduct {
    type Error = Error;

    fn try_from(repr: BlaschkeRepr) -> Result<Self> {
        let zeros = repr
            .zeros
            .iter()
            .map(|&(re, im, multiplicity)| Zero {
                point: Complex64::new(re, im),
                multiplicity,
            })
            .collect();
        Self::new(Complex64::new(repr.front[0], repr.front[1]), zeros)
    }
}

impl From<BlaschkeProduct> for BlaschkeRepr {
    fn from(b: BlaschkeProduct) -> Self {
        Self {
            front: [b.front.re, b.front.im],
            zeros: b
                .zeros
                .iter()
                .map(|z| (z.point.re, z.point.im, z.multiplicity))
                .collect(),
        }
    }
}

/// Radius schedule for [`accumulating_zero_family`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RadiusRule {
    /// `r_m = 1 − 1/m`.
    #[default]
    OneMinusInverse,
    /// The same radius for every `m`.
    Fixed(f64),
}

impl RadiusRule {
    pub fn radius(&self, m: usize) -> f64 {
        match *self {
            RadiusRule::OneMinusInverse => 1.0 - 1.0 / m as f64,
            RadiusRule::Fixed(r) => r,
        }
    }
}

impl BlaschkeProduct {
    pub fn new(front: Complex64, zeros: Vec<Zero>) -> Result<Self> {
        if (front.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::Invalid(format!(
                "front constant must be unimodular, |front| = {}",
                front.norm()
            )));
        }
        for zero in &zeros {
            if !(zero.point.norm() < 1.0) {
                return Err(Error::Invalid(format!(
                    "zero {} lies outside the open disk",
                    zero.point
                )));
            }
            if zero.multiplicity == 0 {
                return Err(Error::Invalid("zero multiplicity must be positive".into()));
            }
        }
        let expanded = zeros
            .iter()
            .flat_map(|z| std::iter::repeat_n(z.point, z.multiplicity as usize))
            .collect();
        Ok(Self {
            front,
            zeros,
            expanded,
        })
    }

    /// Builds a product with front 1 from a list of simple zeros (repeats allowed).
    pub fn from_zeros(points: &[Complex64]) -> Result<Self> {
        let zeros = points
            .iter()
            .map(|&point| Zero {
                point,
                multiplicity: 1,
            })
            .collect();
        Self::new(Complex64::new(1.0, 0.0), zeros)
    }

    /// `zⁿ`.
    pub fn monomial(n: u32) -> Self {
        let zeros = if n == 0 {
            Vec::new()
        } else {
            vec![Zero {
                point: Complex64::new(0.0, 0.0),
                multiplicity: n,
            }]
        };
        Self::new(Complex64::new(1.0, 0.0), zeros).expect("monomial is a valid product")
    }

    pub fn front(&self) -> Complex64 {
        self.front
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn expanded_zeros(&self) -> &[Complex64] {
        &self.expanded
    }

    /// `dim K_Θ`.
    pub fn degree(&self) -> usize {
        self.expanded.len()
    }

    pub fn max_zero_modulus(&self) -> f64 {
        self.expanded.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + BOUNDARY_SLACK {
            return Err(Error::Domain(format!(
                "Θ is evaluated on the closed disk only, |z| = {}",
                z.norm()
            )));
        }
        Ok(self.value(z))
    }

    /// Evaluation without the closed-disk check.
    pub fn value(&self, z: Complex64) -> Complex64 {
        self.expanded
            .iter()
            .fold(self.front, |acc, &a| acc * factor(a, z))
    }

    /// `Θ'(z)` by the product rule over the expanded zero list.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let factors: Vec<Complex64> = self.expanded.iter().map(|&a| factor(a, z)).collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (k, &a) in self.expanded.iter().enumerate() {
            let others: Complex64 = factors
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &f)| f)
                .product();
            total += factor_derivative(a, z) * others;
        }
        self.front * total
    }

    /// `|Θ'(ζ)| = Σ_k (1−|a_k|²)/|ζ−a_k|²` at a boundary point.
    pub fn angular_derivative_modulus(&self, zeta: Complex64) -> Result<f64> {
        if (zeta.norm() - 1.0).abs() > BOUNDARY_SLACK {
            return Err(Error::Domain(format!(
                "angular derivative needs |ζ| = 1, got {}",
                zeta.norm()
            )));
        }
        Ok(self
            .expanded
            .iter()
            .map(|&a| (1.0 - a.norm_sqr()) / (zeta - a).norm_sqr())
            .sum())
    }

    /// `(Θ(z) − Θ(λ))/(z − λ)`, with `Θ'(λ)` on the removable singularity.
    pub fn kernel_quotient(&self, lambda: Complex64, z: Complex64) -> Result<Complex64> {
        let theta_lambda = self.eval(lambda)?;
        let theta_z = self.eval(z)?;
        Ok(self.quotient_from_values(lambda, theta_lambda, z, theta_z))
    }

    pub(crate) fn quotient_from_values(
        &self,
        lambda: Complex64,
        theta_lambda: Complex64,
        z: Complex64,
        theta_z: Complex64,
    ) -> Complex64 {
        let dz = z - lambda;
        let gap = dz.norm();
        if gap < REMOVABLE_THRESHOLD {
            self.derivative(lambda)
        } else if gap < CANCELLATION_THRESHOLD {
            self.telescoped_quotient(lambda, z)
        } else {
            (theta_z - theta_lambda) / dz
        }
    }

    // Θ(z) − Θ(λ) = c Σ_k Π_{j<k} b_j(λ) (b_k(z) − b_k(λ)) Π_{j>k} b_j(z), and
    // each factor difference divides by z − λ in closed form.
    fn telescoped_quotient(&self, lambda: Complex64, z: Complex64) -> Complex64 {
        let n = self.expanded.len();
        let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
        for k in (0..n).rev() {
            suffix[k] = suffix[k + 1] * factor(self.expanded[k], z);
        }
        let mut prefix = Complex64::new(1.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for (k, &a) in self.expanded.iter().enumerate() {
            total += prefix * factor_quotient(a, lambda, z) * suffix[k + 1];
            prefix *= factor(a, lambda);
        }
        self.front * total
    }

    /// Winding number of `Θ` around the origin along the circle, from summed
    /// argument increments on `samples` nodes.
    pub fn winding_number(&self, samples: usize) -> i64 {
        let grid = CircleGrid::power_of_two_at_least(samples);
        let values: Vec<Complex64> = grid.nodes().map(|z| self.value(z)).collect();
        let total: f64 = (0..values.len())
            .map(|j| (values[(j + 1) % values.len()] / values[j]).arg())
            .sum();
        (total / TAU).round() as i64
    }
}

fn factor(a: Complex64, z: Complex64) -> Complex64 {
    if a.norm_sqr() == 0.0 {
        z
    } else {
        (a.norm() / a) * (a - z) / (1.0 - a.conj() * z)
    }
}

fn factor_quotient(a: Complex64, w: Complex64, z: Complex64) -> Complex64 {
    let r2 = a.norm_sqr();
    if r2 == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        (a.norm() / a) * (r2 - 1.0) / ((1.0 - a.conj() * z) * (1.0 - a.conj() * w))
    }
}

fn factor_derivative(a: Complex64, z: Complex64) -> Complex64 {
    if a.norm_sqr() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let d = 1.0 - a.conj() * z;
        (a.norm() / a) * (a.norm_sqr() - 1.0) / (d * d)
    }
}

/// `m` zeros at `r_m·exp(2πij/m)`; as `m` grows they accumulate at every
/// point of the circle.
pub fn accumulating_zero_family(m: usize, rule: RadiusRule) -> Result<BlaschkeProduct> {
    if m == 0 {
        return Err(Error::Invalid("family size must be at least 1".into()));
    }
    let r = rule.radius(m);
    let zeros: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(r, TAU * j as f64 / m as f64))
        .collect();
    BlaschkeProduct::from_zeros(&zeros)
}

//! Random inputs for property suites.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::blaschke::{BlaschkeProduct, Zero};
use crate::circle::TrigPolynomial;
use crate::model_space::Coords;

/// Zero moduli stay below this unless a caller asks otherwise.
pub const DEFAULT_MAX_RADIUS: f64 = 0.9;

fn unit(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..TAU))
}

fn gaussianish(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Blaschke product of degree `1..=max_degree` with zeros uniform in the disk
/// of radius `max_radius`. About one zero in ten sits at the origin and some
/// zeros repeat, so multiplicities above one are exercised.
pub fn blaschke(rng: &mut impl Rng, max_degree: usize, max_radius: f64) -> BlaschkeProduct {
    let degree = rng.random_range(1..=max_degree.max(1));
    let mut zeros: Vec<Zero> = Vec::new();
    let mut remaining = degree;
    while remaining > 0 {
        let point = if rng.random_bool(0.1) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(
                max_radius * rng.random::<f64>().sqrt(),
                rng.random_range(0.0..TAU),
            )
        };
        let multiplicity = if remaining > 1 && rng.random_bool(0.15) {
            2
        } else {
            1
        };
        zeros.push(Zero {
            point,
            multiplicity,
        });
        remaining -= multiplicity as usize;
    }
    BlaschkeProduct::new(unit(rng), zeros).expect("zeros drawn inside the disk")
}

/// Trigonometric polynomial of degree `0..=max_degree` with coefficients
/// decaying like `1/(1+|k|)`.
pub fn trig_polynomial(rng: &mut impl Rng, max_degree: usize) -> TrigPolynomial {
    let m = rng.random_range(0..=max_degree) as i64;
    let coeffs = (-m..=m)
        .map(|k| gaussianish(rng) / (1.0 + k.abs() as f64))
        .collect();
    TrigPolynomial::new(coeffs).expect("odd coefficient count")
}

/// Analytic polynomial with exactly `degree + 1` random coefficients.
pub fn analytic_polynomial(rng: &mut impl Rng, degree: usize) -> TrigPolynomial {
    let coeffs: Vec<Complex64> = (0..=degree).map(|_| gaussianish(rng)).collect();
    TrigPolynomial::analytic(&coeffs)
}

/// Analytic polynomial of random degree `0..=max_degree`.
pub fn analytic_up_to(rng: &mut impl Rng, max_degree: usize) -> TrigPolynomial {
    let degree = rng.random_range(0..=max_degree);
    analytic_polynomial(rng, degree)
}

/// Random coordinate vector (not normalized).
pub fn coords(rng: &mut impl Rng, n: usize) -> Coords {
    Coords((0..n).map(|_| gaussianish(rng)).collect())
}

/// Coordinate vector uniform on the unit sphere of `C^n`.
pub fn unit_coords(rng: &mut impl Rng, n: usize) -> Coords {
    loop {
        let v = coords(rng, n);
        let len = v.h2_norm();
        if len > 1e-3 && len <= 1.0 {
            return v.scale(Complex64::new(1.0 / len, 0.0));
        }
    }
}

/// Point uniform in the disk of the given radius.
pub fn disk_point(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(
        radius * rng.random::<f64>().sqrt(),
        rng.random_range(0.0..TAU),
    )
}

pub fn circle_point(rng: &mut impl Rng) -> Complex64 {
    unit(rng)
}

pub fn complex(rng: &mut impl Rng) -> Complex64 {
    gaussianish(rng)
}

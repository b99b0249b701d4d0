//! Truncated Toeplitz operators on the finite-dimensional model spaces
//! `K_Θ = H² ⊖ ΘH²` of a finite Blaschke product `Θ`.
//!
//! The crate samples everything on a uniform grid of the unit circle, builds an
//! orthonormal basis of `K_Θ`, assembles the compression `A_φ f = P_Θ(φ f)` as a
//! small complex matrix and computes its norm. The [`bounds`] module evaluates the
//! kernel-based, projection-based and decomposition-based lower bounds on
//! `‖A_φ‖` and checks them against the computed norm and `‖φ‖_∞`.
//!
//! ```
//! use tto_core::{blaschke::BlaschkeProduct, circle::{CircleGrid, TrigPolynomial}};
//! use tto_core::model_space::ModelBasis;
//! use tto_core::operator::{assemble, operator_norm};
//!
//! let theta = BlaschkeProduct::monomial(3);
//! let grid = CircleGrid::new(64).unwrap();
//! let basis = ModelBasis::malmquist(&theta, grid).unwrap();
//! let phi = TrigPolynomial::shifted_cos();
//! let m = assemble(&basis, &phi.sample(grid)).unwrap();
//! let norm = operator_norm(&m).unwrap();
//! assert!((norm - (2.0 + 0.5 * 2f64.sqrt())).abs() < 1e-9);
//! ```

pub mod blaschke;
pub mod bounds;
pub mod circle;
mod error;
pub mod format;
pub mod linalg;
pub mod model_space;
pub mod operator;
pub mod random;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20090401;

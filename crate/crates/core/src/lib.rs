//! Calogero-Moser pairs, Baker functions, and the Airy/Bessel bispectral
//! involutions over complex matrices.
//!
//! The core is generic over the real part of the scalar field through the
//! [`Real`] trait. Two backends are provided: `f64` (complex double
//! precision, tolerance-based comparisons) and `BigRational` (exact Gaussian
//! rationals, literal equality). Eigenvalue-based operations are only
//! available on the float backend.

pub mod baker;
pub mod cm;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod involution;
pub mod io;
pub mod matrix;
pub mod rho;
pub mod scalar;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::Real;

use num_rational::BigRational;

/// Complex double precision scalar.
pub type C64 = num_complex::Complex<f64>;
/// Exact Gaussian rational scalar.
pub type CQ = num_complex::Complex<BigRational>;

/// Float-backend matrix.
pub type MatrixF = Matrix<f64>;
/// Exact-backend matrix.
pub type MatrixQ = Matrix<BigRational>;

/// Float-backend Calogero-Moser pair.
pub type CMPairF = cm::CMPair<f64>;
/// Exact-backend Calogero-Moser pair.
pub type CMPairQ = cm::CMPair<BigRational>;

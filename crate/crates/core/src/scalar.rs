//! Scalar field abstraction.
//!
//! Matrices and all downstream formulas are generic over the real part of
//! their complex entries. `f64` is the floating backend, `BigRational` the
//! exact one (Gaussian rationals).

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};
use std::fmt::{Debug, Display};
use std::ops::Neg;

/// Real part of a complex scalar backend.
pub trait Real:
    Num + Clone + Neg<Output = Self> + PartialEq + Debug + Display + Send + Sync + 'static
{
    /// Exact backends are closed under field operations with no rounding and
    /// compare by literal equality; float backends compare by tolerance.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self;
    /// Exact conversion of a finite double (every finite double is a dyadic
    /// rational).
    fn from_f64(v: f64) -> Self;
    /// Nearest-double approximation, used for pivot selection and reporting.
    fn to_f64(&self) -> f64;
}

impl Real for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Real for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(numer.into(), denom.into())
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        match ToPrimitive::to_f64(self) {
            Some(v) => v,
            None => {
                if self.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

/// Complex scalar with integer parts.
pub fn cplx<T: Real>(re: i64, im: i64) -> Complex<T> {
    Complex::new(T::from_i64(re), T::from_i64(im))
}

/// Complex scalar with rational parts.
pub fn cratio<T: Real>(re: (i64, i64), im: (i64, i64)) -> Complex<T> {
    Complex::new(T::from_ratio(re.0, re.1), T::from_ratio(im.0, im.1))
}

/// Modulus as a double, for pivoting, tolerances and reports.
pub fn cabs<T: Real>(z: &Complex<T>) -> f64 {
    let re = z.re.to_f64();
    let im = z.im.to_f64();
    re.hypot(im)
}

/// Backend-aware closeness: literal equality when exact, otherwise
/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close<T: Real>(a: &Complex<T>, b: &Complex<T>, tol: f64) -> bool {
    if T::EXACT {
        a == b
    } else {
        let scale = 1f64.max(cabs(a)).max(cabs(b));
        cabs(&(a.clone() - b.clone())) <= tol * scale
    }
}

pub fn is_zero<T: Real>(z: &Complex<T>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// Converts a float-backend complex value into any backend, exactly.
pub fn lift<T: Real>(z: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

/// Nearest-double approximation of a complex value in any backend.
pub fn lower<T: Real>(z: &Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_closed() {
        let a: Complex<BigRational> = cratio((1, 3), (2, 7));
        let b: Complex<BigRational> = cratio((-5, 2), (1, 11));
        let sum = a.clone() + b.clone();
        let prod = a.clone() * b.clone();
        let quot = prod.clone() / b.clone();
        assert_eq!(quot, a);
        assert_eq!(sum - b, a);
    }

    #[test]
    fn float_roundtrip_through_rational_is_exact() {
        let v = 0.1f64 + 0.7; // some non-representable-looking double
        let r = <BigRational as Real>::from_f64(v);
        assert_eq!(Real::to_f64(&r), v);
    }

    #[test]
    fn close_respects_backend() {
        let a: Complex<f64> = Complex::new(1.0, 0.0);
        let b = Complex::new(1.0 + 1e-12, 0.0);
        assert!(close(&a, &b, 1e-9));
        let ax: Complex<BigRational> = cplx(1, 0);
        let bx: Complex<BigRational> = cratio((1000000000001, 1000000000000), (0, 1));
        assert!(!close(&ax, &bx, 1e-9));
    }
}

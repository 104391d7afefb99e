//! The auxiliary monic polynomial rho and its reduced family.
//!
//! Convention: `rho(t) = t^r - a_{r-1} t^{r-1} - ... - a_1 t - a_0`. The
//! Airy normalization requires `a_{r-1} = 0`; the Bessel normalization
//! requires `a_{r-1} = r(r-1)/2`.

use crate::error::{Error, Result};
use crate::matrix::{matrix_polynomial, Matrix};
use crate::scalar::{cabs, cplx, Real};
use num_complex::Complex;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Airy,
    Bessel,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Airy => "airy",
            Kind::Bessel => "bessel",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhoPoly<T: Real> {
    r: usize,
    /// a_0 .. a_{r-1}
    a: Vec<Complex<T>>,
    kind: Kind,
}

impl<T: Real> RhoPoly<T> {
    pub fn new(kind: Kind, a: Vec<Complex<T>>) -> Result<Self> {
        let rho = Self::new_unchecked(kind, a)?;
        rho.validate_normalization()?;
        Ok(rho)
    }

    /// Skips the kind normalization check (CLI `--no-validate-rho`).
    pub fn new_unchecked(kind: Kind, a: Vec<Complex<T>>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidRho("order r must be at least 1".into()));
        }
        Ok(Self {
            r: a.len(),
            a,
            kind,
        })
    }

    /// Builds from the full monic coefficient list of rho, constant-first
    /// (length r+1, leading coefficient 1).
    pub fn from_monic_coeffs(kind: Kind, coeffs: &[Complex<T>], validate: bool) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidRho("need degree at least 1".into()));
        }
        let lead = coeffs.last().unwrap();
        if !(lead.re.is_one() && lead.im.is_zero()) {
            return Err(Error::InvalidRho("rho must be monic".into()));
        }
        let a: Vec<Complex<T>> = coeffs[..coeffs.len() - 1]
            .iter()
            .map(|c| -c.clone())
            .collect();
        if validate {
            Self::new(kind, a)
        } else {
            Self::new_unchecked(kind, a)
        }
    }

    fn validate_normalization(&self) -> Result<()> {
        let top = &self.a[self.r - 1];
        let expected = match self.kind {
            Kind::Airy => Complex::zero(),
            Kind::Bessel => cplx((self.r * (self.r - 1) / 2) as i64, 0),
        };
        let ok = if T::EXACT {
            *top == expected
        } else {
            cabs(&(top.clone() - expected.clone())) <= 1e-9
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidRho(format!(
                "{} normalization constrains a_{}; got ({}, {})",
                self.kind.name(),
                self.r - 1,
                top.re,
                top.im
            )))
        }
    }

    /// The preset `rho(t) = t^2` (lowest-rank Airy).
    pub fn airy2() -> Self {
        Self::new_unchecked(Kind::Airy, vec![Complex::zero(), Complex::zero()]).unwrap()
    }

    /// The preset `rho(t) = t^2 - t - 1` (lowest-rank Bessel).
    pub fn bessel2() -> Self {
        Self::new_unchecked(Kind::Bessel, vec![cplx(1, 0), cplx(1, 0)]).unwrap()
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// a_i coefficient.
    pub fn a(&self, i: usize) -> &Complex<T> {
        &self.a[i]
    }

    /// Full coefficient list of rho, constant-first: `(-a_0, ..., -a_{r-1}, 1)`.
    pub fn full_coeffs(&self) -> Vec<Complex<T>> {
        let mut coeffs: Vec<Complex<T>> = self.a.iter().map(|c| -c.clone()).collect();
        coeffs.push(Complex::one());
        coeffs
    }

    /// Coefficient list (constant-first) of the reduced polynomial
    /// `rho_j(t) = t^{r-1-j} - sum_{i=j+1}^{U} a_i t^{i-1-j}` with
    /// `U = r-2` for Airy and `U = r-1` for Bessel.
    pub fn reduced(&self, j: usize) -> Result<Vec<Complex<T>>> {
        let r = self.r;
        if j >= r {
            return Err(Error::RhoIndexOutOfRange { j, r });
        }
        let mut coeffs = vec![Complex::<T>::zero(); r - j];
        coeffs[r - 1 - j] = Complex::one();
        let upper = match self.kind {
            Kind::Airy => r.saturating_sub(2),
            Kind::Bessel => r - 1,
        };
        for i in j + 1..=upper {
            coeffs[i - 1 - j] = coeffs[i - 1 - j].clone() - self.a[i].clone();
        }
        Ok(coeffs)
    }

    pub fn eval_matrix(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        matrix_polynomial(&self.full_coeffs(), m)
    }

    pub fn eval_reduced_matrix(&self, j: usize, m: &Matrix<T>) -> Result<Matrix<T>> {
        matrix_polynomial(&self.reduced(j)?, m)
    }

    pub fn eval_scalar(&self, t: &Complex<T>) -> Complex<T> {
        let mut acc = Complex::zero();
        for c in self.full_coeffs().iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    /// Lifts an f64-backed rho into any backend, exactly.
    pub fn lift_from(rho: &RhoPoly<f64>) -> Self {
        Self {
            r: rho.r,
            a: rho.a.iter().map(|c| crate::scalar::lift(*c)).collect(),
            kind: rho.kind,
        }
    }
}

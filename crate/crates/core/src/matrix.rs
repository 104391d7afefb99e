//! Dense complex matrices over either scalar backend.
//!
//! Determinants use partially pivoted LU on the float backend and
//! fraction-free (Bareiss) elimination on the exact backend. Inversion is
//! Gauss-Jordan with partial pivoting behind a scale-aware singularity guard.

use crate::error::{Error, Result};
use crate::scalar::{cabs, Real};
use num_complex::Complex;
use num_traits::{One, Zero};
use std::ops::{Add, Index, IndexMut, Mul, Sub};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Complex::zero()
            }
        })
    }

    /// Column vector.
    pub fn column(entries: &[Complex<T>]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, s: &Complex<T>) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() * s.clone()
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn trace(&self) -> Result<Complex<T>> {
        let n = self.require_square()?;
        let mut t = Complex::zero();
        for i in 0..n {
            t = t + self[(i, i)].clone();
        }
        Ok(t)
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(cabs).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| cabs(&self[(i, j)])).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let n = self.require_square()?;
        let mut acc = Self::identity(n);
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn determinant(&self) -> Result<Complex<T>> {
        self.require_square()?;
        if T::EXACT {
            self.determinant_bareiss()
        } else {
            self.determinant_lu()
        }
    }

    /// Partially pivoted LU, product of pivots.
    fn determinant_lu(&self) -> Result<Complex<T>> {
        let n = self.rows;
        let mut a = self.data.clone();
        let at = |a: &[Complex<T>], i: usize, j: usize| a[i * n + j].clone();
        let mut det = Complex::<T>::one();
        for k in 0..n {
            let (pivot_row, pivot_abs) = (k..n)
                .map(|i| (i, cabs(&at(&a, i, k))))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if pivot_abs == 0.0 {
                return Ok(Complex::zero());
            }
            if pivot_row != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let pivot = at(&a, k, k);
            det = det * pivot.clone();
            for i in k + 1..n {
                let factor = at(&a, i, k) / pivot.clone();
                for j in k..n {
                    let v = at(&a, i, j) - factor.clone() * at(&a, k, j);
                    a[i * n + j] = v;
                }
            }
        }
        Ok(det)
    }

    /// Fraction-free elimination; every intermediate division is exact.
    fn determinant_bareiss(&self) -> Result<Complex<T>> {
        let n = self.rows;
        if n == 0 {
            return Ok(Complex::one());
        }
        let mut a = self.data.clone();
        let at = |a: &[Complex<T>], i: usize, j: usize| a[i * n + j].clone();
        let mut sign = false;
        let mut prev = Complex::<T>::one();
        for k in 0..n - 1 {
            if at(&a, k, k).is_zero() {
                match (k + 1..n).find(|&i| !at(&a, i, k).is_zero()) {
                    Some(row) => {
                        for j in 0..n {
                            a.swap(k * n + j, row * n + j);
                        }
                        sign = !sign;
                    }
                    None => return Ok(Complex::zero()),
                }
            }
            let pivot = at(&a, k, k);
            for i in k + 1..n {
                for j in k + 1..n {
                    let v =
                        (at(&a, i, j) * pivot.clone() - at(&a, i, k) * at(&a, k, j)) / prev.clone();
                    a[i * n + j] = v;
                }
                a[i * n + k] = Complex::zero();
            }
            prev = pivot;
        }
        let det = at(&a, n - 1, n - 1);
        Ok(if sign { -det } else { det })
    }

    /// Scale-aware singularity threshold for the float backend:
    /// `|det| < 1e-12 * norm_inf^n`.
    fn singular_threshold(&self) -> f64 {
        let scale = self.norm_inf().max(1e-300);
        1e-12 * scale.powi(self.rows as i32)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        let det = self.determinant()?;
        if T::EXACT {
            if det.is_zero() {
                return Err(Error::SingularMatrix {
                    detail: "determinant is exactly zero".into(),
                });
            }
        } else {
            let d = cabs(&det);
            if d < self.singular_threshold() {
                return Err(Error::SingularMatrix {
                    detail: format!("|det| = {d:.3e} below scale-aware threshold"),
                });
            }
        }
        self.solve_unchecked(&Self::identity(n))
    }

    /// Solves `self * X = rhs` with the same singularity guard as `inverse`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let n = self.require_square()?;
        if rhs.rows != n {
            return Err(Error::DimensionMismatch(format!(
                "solve: lhs is {n}x{n}, rhs has {} rows",
                rhs.rows
            )));
        }
        let det = self.determinant()?;
        let singular = if T::EXACT {
            det.is_zero()
        } else {
            cabs(&det) < self.singular_threshold()
        };
        if singular {
            return Err(Error::SingularMatrix {
                detail: "solve on singular matrix".into(),
            });
        }
        self.solve_unchecked(rhs)
    }

    /// Gauss-Jordan without the determinant guard; errors only on an exactly
    /// unusable pivot column. Used by inverse iteration, where near-singular
    /// systems are the whole point.
    pub(crate) fn solve_unchecked(&self, rhs: &Self) -> Result<Self> {
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.data.clone();
        let mut b = rhs.data.clone();
        for k in 0..n {
            let (pivot_row, pivot_abs) = (k..n)
                .map(|i| (i, cabs(&a[i * n + k])))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if pivot_abs == 0.0 {
                return Err(Error::SingularMatrix {
                    detail: format!("zero pivot column {k}"),
                });
            }
            if pivot_row != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot_row * n + j);
                }
                for j in 0..m {
                    b.swap(k * m + j, pivot_row * m + j);
                }
            }
            let pivot = a[k * n + k].clone();
            for j in 0..n {
                a[k * n + j] = a[k * n + j].clone() / pivot.clone();
            }
            for j in 0..m {
                b[k * m + j] = b[k * m + j].clone() / pivot.clone();
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a[i * n + k].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a[i * n + j].clone() - factor.clone() * a[k * n + j].clone();
                    a[i * n + j] = v;
                }
                for j in 0..m {
                    let v = b[i * m + j].clone() - factor.clone() * b[k * m + j].clone();
                    b[i * m + j] = v;
                }
            }
        }
        Matrix::new(n, m, b)
    }
}

/// Horner evaluation of `sum c_k M^k`, coefficients constant-first.
pub fn matrix_polynomial<T: Real>(coeffs: &[Complex<T>], m: &Matrix<T>) -> Result<Matrix<T>> {
    let n = m.require_square()?;
    if coeffs.is_empty() {
        return Err(Error::EmptyCoefficients);
    }
    let mut acc = Matrix::identity(n).scale(coeffs.last().unwrap());
    for c in coeffs.iter().rev().skip(1) {
        acc = &(&acc * m) + &Matrix::identity(n).scale(c);
    }
    Ok(acc)
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows);
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Complex::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }
}

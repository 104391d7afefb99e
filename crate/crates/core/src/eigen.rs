//! Eigenvalues for the float backend.
//!
//! Characteristic polynomial by Faddeev-LeVerrier, roots by Durand-Kerner
//! simultaneous iteration, eigenvectors by inverse iteration. Adequate for
//! the desk-scale matrices this crate targets (n <= 32).

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::C64;
use num_complex::Complex;
use num_traits::{One, Zero};

pub const MAX_EIGEN_DIM: usize = 32;
const DK_MAX_ITER: usize = 500;
const DK_TOL: f64 = 1e-12;

/// Coefficients of `det(xI - M)`, constant-first, leading coefficient 1.
pub fn char_poly(m: &Matrix<f64>) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![C64::zero(); n + 1];
    coeffs[n] = C64::one();
    let mut aux = Matrix::<f64>::zeros(n, n);
    for k in 1..=n {
        aux = &(m * &aux) + &Matrix::identity(n).scale(&coeffs[n - k + 1]);
        let c = -(m * &aux).trace()? / (k as f64);
        coeffs[n - k] = c;
    }
    Ok(coeffs)
}

/// All roots of a monic-normalizable polynomial, constant-first coefficients.
pub fn durand_kerner(coeffs: &[C64]) -> Result<Vec<C64>> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[degree];
    if lead.norm() == 0.0 {
        return Err(Error::InvalidInput("zero leading coefficient".into()));
    }
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..degree)
        .map(|k| seed.powu(k as u32 + 1) * radius)
        .collect();
    let eval = |z: C64| -> C64 {
        let mut acc = C64::zero();
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    for _ in 0..DK_MAX_ITER {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let mut denom = C64::one();
            for j in 0..degree {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= DK_TOL * radius.max(1.0) {
            return Ok(roots);
        }
    }
    Err(Error::NoConvergence(DK_MAX_ITER))
}

/// Lexicographic (re, im) order, the deterministic eigenvalue order used
/// throughout trajectories and tests.
pub fn sort_lex(values: &mut [C64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

pub fn eigenvalues(m: &Matrix<f64>) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > MAX_EIGEN_DIM {
        return Err(Error::DimensionTooLarge(m.rows()));
    }
    let mut roots = durand_kerner(&char_poly(m)?)?;
    sort_lex(&mut roots);
    Ok(roots)
}

/// Inverse iteration from a computed eigenvalue, three refinement steps.
pub fn eigenvector(m: &Matrix<f64>, lambda: C64) -> Result<Vec<C64>> {
    let n = m.rows();
    let shift = lambda + Complex::new(1e-10 * (1.0 + lambda.norm()), 1e-11);
    let shifted = m - &Matrix::identity(n).scale(&shift);
    let mut v = Matrix::column(
        &(0..n)
            .map(|k| C64::new(1.0 / (k as f64 + 1.0), 0.3 * (k as f64 + 0.5).sin()))
            .collect::<Vec<_>>(),
    );
    for _ in 0..3 {
        v = shifted.solve_unchecked(&v)?;
        let norm = v.norm_max();
        if norm == 0.0 {
            return Err(Error::SingularMatrix {
                detail: "inverse iteration collapsed to zero".into(),
            });
        }
        v = v.scale(&C64::new(1.0 / norm, 0.0));
    }
    Ok((0..n).map(|i| v[(i, 0)]).collect())
}

//! Calogero-Moser pairs: validation, rank-one factorization, and the bridge
//! to and from generic spectral data.

use crate::eigen;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{cabs, lift, Real};
use num_complex::Complex;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative residual tolerance for the rank-one check on the float backend.
pub const RANK_ONE_TOL: f64 = 1e-9;
/// Minimum pairwise eigenvalue gap before Q counts as non-semisimple.
pub const SPECTRAL_GAP_TOL: f64 = 1e-8;

/// A pair of square matrices with `rank([P,Q] - I) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CMPair<T: Real> {
    p: Matrix<T>,
    q: Matrix<T>,
}

/// Column vectors with `[P,Q] = I - w1 w2^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneFactor<T: Real> {
    pub w1: Vec<Complex<T>>,
    pub w2: Vec<Complex<T>>,
}

/// Distinct spectral points with first-order derivative weights; the generic
/// condition space defining a point of the adelic Grassmannian.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData<T: Real> {
    lambdas: Vec<Complex<T>>,
    alphas: Vec<Complex<T>>,
}

impl<T: Real> CMPair<T> {
    /// Validates shapes and the rank-one commutator condition.
    pub fn new(p: Matrix<T>, q: Matrix<T>) -> Result<Self> {
        validate_and_factor(&p, &q)?;
        Ok(Self { p, q })
    }

    /// For outputs whose rank-one condition is guaranteed algebraically
    /// (involutions, flows). Shapes are still checked.
    pub fn new_unchecked(p: Matrix<T>, q: Matrix<T>) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        if p.rows() != q.rows() || q.rows() != q.cols() {
            return Err(Error::DimensionMismatch(
                "P and Q must be square of the same dimension".into(),
            ));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &Matrix<T> {
        &self.p
    }

    pub fn q(&self) -> &Matrix<T> {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn factor(&self) -> Result<RankOneFactor<T>> {
        validate_and_factor(&self.p, &self.q)
    }
}

/// Checks `rank([P,Q] - I) = 1` and returns vectors with
/// `[P,Q] = I - w1 w2^T`.
///
/// Pivot is the entry of maximum modulus of `M = [P,Q] - I`; the scale
/// ambiguity `w1 -> c w1, w2 -> w2 / c` is fixed by normalizing the pivot
/// column so its largest entry is 1.
pub fn validate_and_factor<T: Real>(p: &Matrix<T>, q: &Matrix<T>) -> Result<RankOneFactor<T>> {
    if !p.is_square() || !q.is_square() || p.rows() != q.rows() {
        return Err(Error::DimensionMismatch(
            "P and Q must be square of the same dimension".into(),
        ));
    }
    let n = p.rows();
    let m = &p.commutator(q) - &Matrix::identity(n);
    let (mut pa, mut pb, mut pmax) = (0usize, 0usize, 0.0f64);
    for i in 0..n {
        for j in 0..n {
            let v = cabs(&m[(i, j)]);
            if v > pmax {
                (pa, pb, pmax) = (i, j, v);
            }
        }
    }
    if pmax == 0.0 {
        // [P,Q] = I has rank zero, not one.
        return Err(Error::NotRankOne { residual: 1.0 });
    }
    let col: Vec<Complex<T>> = (0..n).map(|i| m[(i, pb)].clone()).collect();
    let row: Vec<Complex<T>> = (0..n).map(|j| m[(pa, j)].clone()).collect();
    let c_max = col
        .iter()
        .max_by(|x, y| cabs(x).total_cmp(&cabs(y)))
        .unwrap()
        .clone();
    let w1: Vec<Complex<T>> = col.iter().map(|v| v.clone() / c_max.clone()).collect();
    let scale = -c_max.clone() / m[(pa, pb)].clone();
    let w2: Vec<Complex<T>> = row.iter().map(|v| v.clone() * scale.clone()).collect();
    // Reconstruction residual: M + w1 w2^T must vanish.
    let mut residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)].clone() + w1[i].clone() * w2[j].clone();
            residual = residual.max(cabs(&v));
        }
    }
    let rel = residual / pmax;
    let ok = if T::EXACT {
        residual == 0.0
    } else {
        rel <= RANK_ONE_TOL
    };
    if !ok {
        return Err(Error::NotRankOne { residual: rel });
    }
    Ok(RankOneFactor { w1, w2 })
}

impl<T: Real> SpectralData<T> {
    pub fn new(lambdas: Vec<Complex<T>>, alphas: Vec<Complex<T>>) -> Result<Self> {
        if lambdas.len() != alphas.len() || lambdas.is_empty() {
            return Err(Error::DimensionMismatch(
                "lambdas and alphas must be nonempty and of equal length".into(),
            ));
        }
        for i in 0..lambdas.len() {
            for j in i + 1..lambdas.len() {
                let gap = cabs(&(lambdas[i].clone() - lambdas[j].clone()));
                let degenerate = if T::EXACT {
                    lambdas[i] == lambdas[j]
                } else {
                    gap <= SPECTRAL_GAP_TOL
                };
                if degenerate {
                    return Err(Error::DegenerateSpectrum);
                }
            }
        }
        Ok(Self { lambdas, alphas })
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Complex<T>] {
        &self.lambdas
    }

    pub fn alphas(&self) -> &[Complex<T>] {
        &self.alphas
    }

    /// Exact lift of float spectral data (doubles are dyadic rationals).
    pub fn lift_from(data: &SpectralData<f64>) -> Self {
        Self {
            lambdas: data.lambdas.iter().map(|z| lift(*z)).collect(),
            alphas: data.alphas.iter().map(|z| lift(*z)).collect(),
        }
    }
}

/// `gamma_i = alpha_i - sum_{j != i} 1/(lambda_i - lambda_j)`.
pub fn gammas<T: Real>(data: &SpectralData<T>) -> Vec<Complex<T>> {
    let n = data.n();
    (0..n)
        .map(|i| {
            let mut g = data.alphas[i].clone();
            for j in 0..n {
                if j != i {
                    g = g - Complex::<T>::one()
                        / (data.lambdas[i].clone() - data.lambdas[j].clone());
                }
            }
            g
        })
        .collect()
}

/// Canonical pair: `Q = diag(lambda)`, `P_ii = gamma_i`,
/// `P_ij = 1/(lambda_i - lambda_j)`. Satisfies `[P,Q] = I - 1 1^T`.
pub fn from_spectral_data<T: Real>(data: &SpectralData<T>) -> Result<CMPair<T>> {
    let n = data.n();
    let q = Matrix::diagonal(&data.lambdas);
    let g = gammas(data);
    let p = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            g[i].clone()
        } else {
            Complex::<T>::one() / (data.lambdas[i].clone() - data.lambdas[j].clone())
        }
    });
    CMPair::new_unchecked(p, q)
}

/// Recovers spectral data from a float pair with semisimple Q.
///
/// Diagonalizes Q; in the diagonal gauge the commutator forces
/// `w1_i w2_i = 1` on the diagonal, so `alpha_i = P_ii + sum 1/(lambda_i -
/// lambda_j)` after the all-ones normalization.
pub fn canonicalize(pair: &CMPair<f64>) -> Result<SpectralData<f64>> {
    let n = pair.n();
    let lambdas = eigen::eigenvalues(pair.q())?;
    // double roots of the characteristic polynomial split by ~sqrt(eps),
    // so the collision test must sit well above that
    let scale = lambdas.iter().map(|l| l.norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if (lambdas[i] - lambdas[j]).norm() <= SPECTRAL_GAP_TOL.sqrt() * scale {
                return Err(Error::NonSemisimpleQ);
            }
        }
    }
    let mut g = Matrix::<f64>::zeros(n, n);
    for (k, lambda) in lambdas.iter().enumerate() {
        let v = eigen::eigenvector(pair.q(), *lambda)?;
        for i in 0..n {
            g[(i, k)] = v[i];
        }
    }
    let g_inv = g.inverse().map_err(|_| Error::NonSemisimpleQ)?;
    let p_diag_gauge = &(&g_inv * pair.p()) * &g;
    let alphas: Vec<crate::C64> = (0..n)
        .map(|i| {
            let mut a = p_diag_gauge[(i, i)];
            for j in 0..n {
                if j != i {
                    a += Complex::<f64>::one() / (lambdas[i] - lambdas[j]);
                }
            }
            a
        })
        .collect();
    SpectralData::new(lambdas, alphas)
}

/// Seeded random spectral data: complex entries with |re|,|im| <= 5 and
/// pairwise lambda gap >= 0.1.
pub fn random_spectral_data(n: usize, seed: u64) -> SpectralData<f64> {
    assert!(n >= 1, "n must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lambdas: Vec<crate::C64> = Vec::with_capacity(n);
    while lambdas.len() < n {
        let cand = Complex::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        if lambdas.iter().all(|l| (l - cand).norm() >= 0.1) {
            lambdas.push(cand);
        }
    }
    let alphas = (0..n)
        .map(|_| Complex::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
        .collect();
    SpectralData::new(lambdas, alphas).expect("gaps enforced by construction")
}

/// Deterministic random pair in canonical form.
pub fn random_pair(n: usize, seed: u64) -> CMPair<f64> {
    from_spectral_data(&random_spectral_data(n, seed)).expect("canonical pair is rank one")
}

//! Closed-form Baker-function evaluators: Wilson's determinant formula, the
//! Airy and Bessel k-vector formulas, B-matrices, condition residuals, the
//! block A-matrix identities, and an independent linear-system oracle.

use crate::cm::{from_spectral_data, gammas, validate_and_factor, CMPair, SpectralData};
use crate::error::{Error, Result};
use crate::involution::{airy_q_hat, bessel_q_hat};
use crate::matrix::{matrix_polynomial, Matrix};
use crate::rho::{Kind, RhoPoly};
use crate::scalar::{cabs, Real};
use num_complex::Complex;
use num_traits::{One, Zero};

/// The r-component coefficient vector of the Baker functional.
#[derive(Debug, Clone, PartialEq)]
pub struct KVector<T: Real> {
    pub values: Vec<Complex<T>>,
}

impl<T: Real> KVector<T> {
    pub fn r(&self) -> usize {
        self.values.len()
    }

    /// Max-norm distance from the asymptotic value e_1 = (1, 0, ..., 0).
    pub fn deviation_from_e1(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if j == 0 {
                    cabs(&(v.clone() - Complex::one()))
                } else {
                    cabs(v)
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Baker-function value. On the exact backend the exponential prefactor
/// `e^{xz}` is never evaluated; it is reported symbolically through
/// `exp_prefactor_symbolic` and `value` carries only the rational factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Psi<T: Real> {
    pub value: Complex<T>,
    pub exp_prefactor_symbolic: bool,
}

fn resolvent<T: Real>(shift: &Complex<T>, m: &Matrix<T>, pole_error: Error) -> Result<Matrix<T>> {
    let n = m.rows();
    (&Matrix::identity(n).scale(shift) - m)
        .inverse()
        .map_err(|_| pole_error)
}

/// The rational factor `Det(I - (zI - Q)^{-1} (xI - P)^{-1})`.
pub fn wilson_rational<T: Real>(
    pair: &CMPair<T>,
    x: &Complex<T>,
    z: &Complex<T>,
) -> Result<Complex<T>> {
    let n = pair.n();
    let rz = resolvent(z, pair.q(), Error::PoleInZ)?;
    let rx = resolvent(x, pair.p(), Error::PoleInX)?;
    (&Matrix::identity(n) - &(&rz * &rx)).determinant()
}

/// `e^{xz} * Det(I - (zI - Q)^{-1} (xI - P)^{-1})`; exact backend returns
/// the rational factor with the prefactor flagged symbolic.
pub fn wilson_psi<T: Real>(pair: &CMPair<T>, x: &Complex<T>, z: &Complex<T>) -> Result<Psi<T>> {
    let rational = wilson_rational(pair, x, z)?;
    if T::EXACT {
        Ok(Psi {
            value: rational,
            exp_prefactor_symbolic: true,
        })
    } else {
        let xz = crate::scalar::lower(&(x.clone() * z.clone()));
        let e = xz.exp();
        Ok(Psi {
            value: rational * crate::scalar::lift::<T>(e),
            exp_prefactor_symbolic: false,
        })
    }
}

/// Common closed-form evaluation:
/// `k_j = delta_{0,j} - s * w2^T (xI - Qhat^T)^{-1} rho_j(ARG) (zI-Q)^{-1} w1`
/// (the gauge-covariant orientation: w2 pairs with the x-resolvent).
fn k_closed_form<T: Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    arg: &Matrix<T>,
    q_hat_t: &Matrix<T>,
    prefactor: &Complex<T>,
    x: &Complex<T>,
    z: &Complex<T>,
) -> Result<KVector<T>> {
    let n = pair.n();
    let factor = validate_and_factor(pair.p(), pair.q())?;
    let rz = resolvent(z, pair.q(), Error::PoleInZ)?;
    let rx = resolvent(x, q_hat_t, Error::PoleInX)?;
    let right = &rz * &Matrix::column(&factor.w1);
    let left = &Matrix::column(&factor.w2).transpose() * &rx; // 1 x n
    let mut values = Vec::with_capacity(rho.order());
    for j in 0..rho.order() {
        let rho_j = rho.eval_reduced_matrix(j, arg)?;
        let bilinear = (&(&left * &rho_j) * &right)[(0, 0)].clone();
        let delta: Complex<T> = if j == 0 {
            Complex::one()
        } else {
            Complex::zero()
        };
        values.push(delta - prefactor.clone() * bilinear);
    }
    let _ = n;
    Ok(KVector { values })
}

/// Airy k-vector:
/// `k_j(x,z) = delta_{0,j} - w2^T (xI - Qhat^T)^{-1} rho_j(P) (zI-Q)^{-1} w1`
/// with `Qhat = rho(P^T) - Q^T`.
pub fn airy_k<T: Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    x: &Complex<T>,
    z: &Complex<T>,
) -> Result<KVector<T>> {
    if rho.kind() != Kind::Airy {
        return Err(Error::InvalidRho("expected an Airy-normalized rho".into()));
    }
    let q_hat_t = airy_q_hat(pair, rho)?.transpose();
    k_closed_form(pair, rho, pair.p(), &q_hat_t, &Complex::one(), x, z)
}

/// Bessel k-vector:
/// `k_j(x,z) = delta_{0,j} - r w2^T (xI - Qhat^T)^{-1} rho_j(r PQ) (zI-Q)^{-1} w1`
/// with `Qhat = (Q^{-1} rho(r QP))^T`, so `Qhat^T = rho(r PQ) Q^{-1}`.
/// Arguments are the mu-transformed coordinates `(x^r, z^r)`; callers
/// transform.
pub fn bessel_k<T: Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    x: &Complex<T>,
    z: &Complex<T>,
) -> Result<KVector<T>> {
    if rho.kind() != Kind::Bessel {
        return Err(Error::InvalidRho("expected a Bessel-normalized rho".into()));
    }
    let r = Complex::new(T::from_i64(rho.order() as i64), T::zero());
    let rpq = (pair.p() * pair.q()).scale(&r);
    let q_hat_t = bessel_q_hat(pair, rho)?.transpose();
    k_closed_form(pair, rho, &rpq, &q_hat_t, &r, x, z)
}

/// First-order Airy system matrix: subdiagonal ones, last column
/// `(x + z + a_0, a_1, ..., a_{r-2}, 0)^T`.
pub fn b_matrix_airy<T: Real>(rho: &RhoPoly<T>, x: &Complex<T>, z: &Complex<T>) -> Matrix<T> {
    let r = rho.order();
    let mut b = Matrix::zeros(r, r);
    for i in 1..r {
        b[(i, i - 1)] = Complex::one();
    }
    b[(0, r - 1)] = x.clone() + z.clone() + rho.a(0).clone();
    for i in 1..r.saturating_sub(1) {
        b[(i, r - 1)] = rho.a(i).clone();
    }
    if r == 1 {
        // single entry x + z + a_0 already set
    }
    b
}

/// First-order Bessel system matrix: subdiagonal ones, last column
/// `(a_0 + x u, a_1, ..., a_{r-1})^T`.
pub fn b_matrix_bessel<T: Real>(rho: &RhoPoly<T>, x: &Complex<T>, u: &Complex<T>) -> Matrix<T> {
    let r = rho.order();
    let mut b = Matrix::zeros(r, r);
    for i in 1..r {
        b[(i, i - 1)] = Complex::one();
    }
    b[(0, r - 1)] = rho.a(0).clone() + x.clone() * u.clone();
    for i in 1..r {
        b[(i, r - 1)] = b[(i, r - 1)].clone() + rho.a(i).clone();
    }
    b
}

fn b_matrix<T: Real>(
    rho: &RhoPoly<T>,
    kind: Kind,
    x: &Complex<T>,
    lambda: &Complex<T>,
) -> Matrix<T> {
    match kind {
        Kind::Airy => b_matrix_airy(rho, x, lambda),
        Kind::Bessel => b_matrix_bessel(rho, x, lambda),
    }
}

/// Condition scale: the first-order condition acts through
/// `(d/dz + B(x, lambda_i)/s_i - alpha_i)` with `s_i = 1` (Airy) or
/// `s_i = r lambda_i` (Bessel).
fn condition_scale<T: Real>(rho: &RhoPoly<T>, kind: Kind, lambda: &Complex<T>) -> Complex<T> {
    match kind {
        Kind::Airy => Complex::one(),
        Kind::Bessel => Complex::new(T::from_i64(rho.order() as i64), T::zero()) * lambda.clone(),
    }
}

/// The residue weights `u_j = (w2^T (xI - Qhat^T)^{-1} rho_j(ARG))_m w1_m`
/// scaled by the kind's prefactor, for all j. Rows: j in 0..r, columns:
/// spectral index.
fn u_columns<T: Real>(
    data: &SpectralData<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    x: &Complex<T>,
) -> Result<Vec<Vec<Complex<T>>>> {
    let pair = from_spectral_data(data)?;
    let factor = validate_and_factor(pair.p(), pair.q())?;
    let (arg, q_hat_t, prefactor) = match kind {
        Kind::Airy => (
            pair.p().clone(),
            airy_q_hat(&pair, rho)?.transpose(),
            Complex::one(),
        ),
        Kind::Bessel => {
            let r = Complex::new(T::from_i64(rho.order() as i64), T::zero());
            (
                (pair.p() * pair.q()).scale(&r),
                bessel_q_hat(&pair, rho)?.transpose(),
                r,
            )
        }
    };
    let rx = resolvent(x, &q_hat_t, Error::PoleInX)?;
    let left = &Matrix::column(&factor.w2).transpose() * &rx; // 1 x n
    let n = data.n();
    let mut rows = Vec::with_capacity(rho.order());
    for j in 0..rho.order() {
        let row = &left * &rho.eval_reduced_matrix(j, &arg)?;
        rows.push(
            (0..n)
                .map(|i| prefactor.clone() * row[(0, i)].clone() * factor.w1[i].clone())
                .collect(),
        );
    }
    Ok(rows)
}

/// Residual of the defining first-order conditions on `g(z) = q(z) k(x,z)`,
/// evaluated analytically at each spectral point: one max-norm per
/// (condition, x-sample).
///
/// `q(z) (zI - Q)^{-1}` is polynomial in z for the canonical diagonal pair,
/// so both `g` and its z-derivative are evaluated without touching the
/// poles.
pub fn condition_residual<T: Real>(
    data: &SpectralData<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    x_samples: &[Complex<T>],
) -> Result<Vec<Vec<f64>>> {
    let n = data.n();
    let mut out = vec![Vec::with_capacity(x_samples.len()); n];
    for x in x_samples {
        let u = u_columns(data, rho, kind, x)?;
        let per_condition = residuals_one_x(data, rho, kind, x, &u);
        for i in 0..n {
            out[i].push(per_condition[i]);
        }
    }
    Ok(out)
}

/// Residual of each condition for one x-sample, given the residue weights u.
fn residuals_one_x<T: Real>(
    data: &SpectralData<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    x: &Complex<T>,
    u: &[Vec<Complex<T>>],
) -> Vec<f64> {
    let n = data.n();
    let r = rho.order();
    let l = data.lambdas();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // q_i(z) = prod_{l != i} (z - lambda_l); values and derivatives
        // at z = lambda_i of every q_m.
        let qi: Complex<T> = (0..n)
            .filter(|&m| m != i)
            .map(|m| l[i].clone() - l[m].clone())
            .fold(Complex::one(), |acc, v| acc * v);
        // g_j(lambda_i) = -q_i(lambda_i) u[j][i]  (other terms vanish)
        let g: Vec<Complex<T>> = (0..r).map(|j| -qi.clone() * u[j][i].clone()).collect();
        // derivative pieces: q'(lambda_i) = q_i(lambda_i);
        // q_i'(lambda_i) = q_i * sum_{m != i} 1/(lambda_i - lambda_m);
        // q_m'(lambda_i) = prod_{s != m, i} (lambda_i - lambda_s), m != i.
        let mut dq = vec![Complex::<T>::zero(); n];
        #[allow(clippy::needless_range_loop)]
        for m in 0..n {
            if m == i {
                let mut s = Complex::<T>::zero();
                for t in 0..n {
                    if t != i {
                        s = s + Complex::<T>::one() / (l[i].clone() - l[t].clone());
                    }
                }
                dq[m] = qi.clone() * s;
            } else {
                dq[m] = (0..n)
                    .filter(|&s| s != m && s != i)
                    .map(|s| l[i].clone() - l[s].clone())
                    .fold(Complex::one(), |acc, v| acc * v);
            }
        }
        let g_prime: Vec<Complex<T>> = (0..r)
            .map(|j| {
                let mut v = if j == 0 { qi.clone() } else { Complex::zero() };
                for m in 0..n {
                    v = v - dq[m].clone() * u[j][m].clone();
                }
                v
            })
            .collect();
        let b = b_matrix(rho, kind, x, &l[i]);
        let s = condition_scale(rho, kind, &l[i]);
        let mut residual = 0.0f64;
        for j in 0..r {
            let mut bg = Complex::<T>::zero();
            for m in 0..r {
                bg = bg + b[(j, m)].clone() * g[m].clone();
            }
            let v = g_prime[j].clone() + bg / s.clone() - data.alphas()[i].clone() * g[j].clone();
            residual = residual.max(cabs(&v));
        }
        out.push(residual);
    }
    out
}

/// Independent brute-force oracle: assembles the rn x rn linear system of
/// the per-condition equations
/// `e_1 = -B(x, lambda_i) v_i / s_i + gamma_i v_i - sum_{l != i} v_l /
/// (lambda_i - lambda_l)` and solves it for the residue vectors, then
/// returns `e_1 + sum v_i / (z - lambda_i)`. No closed form anywhere.
pub fn k_solver_oracle<T: Real>(
    data: &SpectralData<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    x: &Complex<T>,
    z: &Complex<T>,
) -> Result<KVector<T>> {
    let n = data.n();
    let r = rho.order();
    let g = gammas(data);
    let l = data.lambdas();
    let mut system = Matrix::<T>::zeros(n * r, n * r);
    let mut rhs = Matrix::<T>::zeros(n * r, 1);
    for i in 0..n {
        let b = b_matrix(rho, kind, x, &l[i]);
        let s = condition_scale(rho, kind, &l[i]);
        for j in 0..r {
            rhs[(i * r + j, 0)] = if j == 0 {
                Complex::one()
            } else {
                Complex::zero()
            };
            for m in 0..r {
                let mut v = -b[(j, m)].clone() / s.clone();
                if j == m {
                    v = v + g[i].clone();
                }
                system[(i * r + j, i * r + m)] = v;
            }
            for other in 0..n {
                if other != i {
                    system[(i * r + j, other * r + j)] =
                        -(Complex::<T>::one() / (l[i].clone() - l[other].clone()));
                }
            }
        }
    }
    let v = system.solve(&rhs).map_err(|_| Error::SingularSystem)?;
    let mut values = vec![Complex::<T>::zero(); r];
    values[0] = Complex::one();
    for i in 0..n {
        let denom = z.clone() - l[i].clone();
        for j in 0..r {
            values[j] = values[j].clone() + v[(i * r + j, 0)].clone() / denom.clone();
        }
    }
    Ok(KVector { values })
}

/// Block A-matrix. Airy:
/// `A = I (x) B_Ai(x, 0) - P (x) I + Q (x) Delta`, i.e. diagonal blocks -P,
/// subdiagonal identity blocks, last block column
/// `(xI + Q + a_0 I, a_1 I, ..., a_{r-2} I, .)`. Bessel:
/// `(x/r) I (x) Delta_2 - P (x) I + (1/r) Q^{-1} (x) Delta_1`.
pub fn a_matrix<T: Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    x: &Complex<T>,
) -> Result<Matrix<T>> {
    let n = pair.n();
    let r = rho.order();
    let mut a = Matrix::<T>::zeros(n * r, n * r);
    let mut put = |bi: usize, bj: usize, block: &Matrix<T>| {
        for ii in 0..n {
            for jj in 0..n {
                let v = a[(bi * n + ii, bj * n + jj)].clone() + block[(ii, jj)].clone();
                a[(bi * n + ii, bj * n + jj)] = v;
            }
        }
    };
    let neg_p = pair.p().neg();
    match kind {
        Kind::Airy => {
            for bi in 0..r {
                put(bi, bi, &neg_p);
                if bi > 0 {
                    put(bi, bi - 1, &Matrix::identity(n));
                }
            }
            // last block column: (x + a_0) I + Q on top, then a_i I
            let top = &Matrix::identity(n).scale(&(x.clone() + rho.a(0).clone())) + pair.q();
            put(0, r - 1, &top);
            for bi in 1..r.saturating_sub(1) {
                put(bi, r - 1, &Matrix::identity(n).scale(rho.a(bi)));
            }
        }
        Kind::Bessel => {
            let q_inv = pair.q().inverse().map_err(|_| Error::SingularQ)?;
            let r_scalar = Complex::new(T::from_i64(r as i64), T::zero());
            let q_inv_over_r = q_inv.scale(&(Complex::<T>::one() / r_scalar.clone()));
            for bi in 0..r {
                put(bi, bi, &neg_p);
                if bi > 0 {
                    put(bi, bi - 1, &q_inv_over_r);
                }
            }
            put(
                0,
                r - 1,
                &(&Matrix::identity(n).scale(&(x.clone() / r_scalar.clone()))
                    + &q_inv_over_r.scale(rho.a(0))),
            );
            for bi in 1..r {
                put(bi, r - 1, &q_inv_over_r.scale(rho.a(bi)));
            }
        }
    }
    Ok(a)
}

/// Residual of the stacked identity `A * stack = (RHS, 0, ..., 0)^T`, where
/// the stack is `rho_j(P)` (Airy) or `r rho_j(r QP)` (Bessel) and the RHS is
/// `xI + Q - rho(P)` or `xI - Q^{-1} rho(r QP)`. Exactly zero on the exact
/// backend.
pub fn verify_a_identity<T: Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    x: &Complex<T>,
) -> Result<f64> {
    let n = pair.n();
    let r = rho.order();
    let a = a_matrix(pair, rho, kind, x)?;
    let mut stack = Matrix::<T>::zeros(n * r, n);
    let (arg, scale): (Matrix<T>, Complex<T>) = match kind {
        Kind::Airy => (pair.p().clone(), Complex::one()),
        Kind::Bessel => {
            let r_scalar = Complex::new(T::from_i64(r as i64), T::zero());
            ((pair.q() * pair.p()).scale(&r_scalar), r_scalar)
        }
    };
    for j in 0..r {
        let block = matrix_polynomial(&rho.reduced(j)?, &arg)?.scale(&scale);
        for ii in 0..n {
            for jj in 0..n {
                stack[(j * n + ii, jj)] = block[(ii, jj)].clone();
            }
        }
    }
    let lhs = &a * &stack;
    let rhs_top = match kind {
        Kind::Airy => &(&Matrix::identity(n).scale(x) + pair.q()) - &rho.eval_matrix(pair.p())?,
        Kind::Bessel => {
            let q_inv = pair.q().inverse().map_err(|_| Error::SingularQ)?;
            &Matrix::identity(n).scale(x) - &(&q_inv * &rho.eval_matrix(&arg)?)
        }
    };
    let mut residual = 0.0f64;
    for bi in 0..r {
        for ii in 0..n {
            for jj in 0..n {
                let want = if bi == 0 {
                    rhs_top[(ii, jj)].clone()
                } else {
                    Complex::zero()
                };
                residual = residual.max(cabs(&(lhs[(bi * n + ii, jj)].clone() - want)));
            }
        }
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::{random_spectral_data, CMPair};
    use crate::scalar::{close, cplx, lift};
    use crate::{MatrixF, C64};
    use num_rational::BigRational;

    fn scalar_pair(gamma: f64, lambda: f64) -> CMPair<f64> {
        CMPair::new(
            MatrixF::column(&[C64::new(gamma, 0.0)]),
            MatrixF::column(&[C64::new(lambda, 0.0)]),
        )
        .unwrap()
    }

    #[test]
    fn wilson_scalar_example() {
        // n=1, P=Q=0: rational factor 1 - 1/(xz)
        let pair = scalar_pair(0.0, 0.0);
        let psi = wilson_psi(&pair, &cplx(1, 0), &cplx(2, 0)).unwrap();
        let expected = C64::new(2.0f64.exp() * 0.5, 0.0);
        assert!((crate::scalar::lower(&psi.value) - expected).norm() < 1e-12);
        assert!(!psi.exp_prefactor_symbolic);
    }

    #[test]
    fn wilson_rational_tends_to_one() {
        let pair = crate::cm::random_pair(3, 10);
        let big = C64::new(1e8, 3e7);
        let v = wilson_rational(&pair, &C64::new(0.7, 0.1), &big).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn wilson_pole_detected() {
        let pair = scalar_pair(0.0, 2.0);
        assert!(matches!(
            wilson_rational(&pair, &cplx(1, 0), &cplx(2, 0)),
            Err(Error::PoleInZ)
        ));
        assert!(matches!(
            wilson_rational(&pair, &cplx(0, 0), &cplx(3, 0)),
            Err(Error::PoleInX)
        ));
    }

    #[test]
    fn wilson_transpose_swap_symmetry() {
        let pair = crate::cm::random_pair(2, 12);
        let swapped = crate::involution::beta_kp(&pair);
        for (x, z) in [
            (C64::new(0.3, 0.4), C64::new(7.0, -1.0)),
            (C64::new(-1.1, 0.2), C64::new(5.5, 2.0)),
        ] {
            let a = wilson_rational(&pair, &x, &z).unwrap();
            let b = wilson_rational(&swapped, &z, &x).unwrap();
            assert!(close(&a, &b, 1e-10));
        }
    }

    #[test]
    fn airy_k_scalar_example() {
        // n=1, r=2, rho=t^2, P=Q=0 at (1,1): k = (1, -1)
        let pair = scalar_pair(0.0, 0.0);
        let rho = RhoPoly::airy2();
        let k = airy_k(&pair, &rho, &cplx(1, 0), &cplx(1, 0)).unwrap();
        assert!((k.values[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((k.values[1] - C64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn airy_k_decays_to_e1() {
        let pair = crate::cm::random_pair(2, 14);
        let rho = RhoPoly::airy2();
        let x = C64::new(0.3, 0.2);
        let mut last = f64::INFINITY;
        for scale in [10.0, 20.0, 40.0, 80.0] {
            let z = C64::new(scale * 6.0, scale);
            let dev = airy_k(&pair, &rho, &x, &z).unwrap().deviation_from_e1();
            assert!(dev < last, "deviation not decreasing: {dev} vs {last}");
            last = dev;
        }
    }

    #[test]
    fn bessel_k_scalar_example() {
        let (gamma, lambda) = (1.5, 2.0);
        let pair = scalar_pair(gamma, lambda);
        let rho = RhoPoly::bessel2();
        let (x, z) = (C64::new(0.7, 0.0), C64::new(5.0, 0.0));
        let k = bessel_k(&pair, &rho, &x, &z).unwrap();
        let q_hat = (4.0 * lambda * lambda * gamma * gamma - 2.0 * lambda * gamma - 1.0) / lambda;
        let k0 = 1.0 - 2.0 * (2.0 * lambda * gamma - 1.0) / ((z.re - lambda) * (x.re - q_hat));
        assert!((k.values[0] - C64::new(k0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn oracle_matches_scalar_airy() {
        let data = SpectralData::new(vec![cplx::<f64>(0, 0)], vec![cplx(0, 0)]).unwrap();
        let rho = RhoPoly::airy2();
        let k = k_solver_oracle(&data, &rho, Kind::Airy, &cplx(1, 0), &cplx(1, 0)).unwrap();
        assert!((k.values[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((k.values[1] - C64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn closed_forms_match_oracle() {
        let airy3 = RhoPoly::new(Kind::Airy, vec![cplx(1, 1), cplx(2, 0), cplx(0, 0)]).unwrap();
        let bessel2 = RhoPoly::bessel2();
        for seed in [3u64, 4] {
            let data = random_spectral_data(2, seed);
            let pair = from_spectral_data(&data).unwrap();
            for t in 0..5 {
                let x = C64::new(6.0 + t as f64, 1.3);
                let z = C64::new(-7.5, 2.0 + t as f64);
                let ka = airy_k(&pair, &airy3, &x, &z).unwrap();
                let oa = k_solver_oracle(&data, &airy3, Kind::Airy, &x, &z).unwrap();
                for (u, v) in ka.values.iter().zip(&oa.values) {
                    assert!((u - v).norm() < 1e-9, "airy mismatch {u} vs {v}");
                }
                let kb = bessel_k(&pair, &bessel2, &x, &z).unwrap();
                let ob = k_solver_oracle(&data, &bessel2, Kind::Bessel, &x, &z).unwrap();
                for (u, v) in kb.values.iter().zip(&ob.values) {
                    assert!((u - v).norm() < 1e-9, "bessel mismatch {u} vs {v}");
                }
            }
        }
    }

    #[test]
    fn b_matrices_match_displays() {
        let rho = RhoPoly::<f64>::airy2();
        let b0 = b_matrix_airy(&rho, &cplx(0, 0), &cplx(0, 0));
        assert_eq!(
            b0.entries(),
            MatrixF::new(2, 2, vec![cplx(0, 0), cplx(0, 0), cplx(1, 0), cplx(0, 0)])
                .unwrap()
                .entries()
        );
        let b1 = b_matrix_airy(&rho, &cplx(1, 0), &cplx(2, 0));
        assert_eq!(b1[(0, 1)], cplx(3, 0));
        assert_eq!(b1[(1, 0)], cplx(1, 0));

        let rb = RhoPoly::<f64>::bessel2();
        let c0 = b_matrix_bessel(&rb, &cplx(0, 0), &cplx(0, 0));
        assert_eq!(c0[(0, 1)], cplx(1, 0));
        assert_eq!(c0[(1, 1)], cplx(1, 0));
        assert_eq!(c0[(1, 0)], cplx(1, 0));
        let c1 = b_matrix_bessel(&rb, &cplx(2, 0), &cplx(3, 0));
        assert_eq!(c1[(0, 1)], cplx(7, 0));
    }

    #[test]
    fn b_matrix_airy_r3_last_column() {
        // rho = t^3 - a_1 t - a_0
        let rho =
            RhoPoly::<f64>::new(Kind::Airy, vec![cplx(5, 0), cplx(2, 0), cplx(0, 0)]).unwrap();
        let b = b_matrix_airy(&rho, &cplx(1, 0), &cplx(1, 0));
        assert_eq!(b[(0, 2)], cplx(7, 0)); // x + z + a_0
        assert_eq!(b[(1, 2)], cplx(2, 0)); // a_1
        assert_eq!(b[(2, 2)], cplx(0, 0));
    }

    #[test]
    fn condition_residual_annihilates_and_detects_perturbation() {
        let data = random_spectral_data(2, 6);
        let rho = RhoPoly::airy2();
        let xs: Vec<C64> = (0..5).map(|t| C64::new(4.0 + t as f64, 0.7)).collect();
        let res = condition_residual(&data, &rho, Kind::Airy, &xs).unwrap();
        for per_cond in &res {
            for &v in per_cond {
                assert!(v <= 1e-8, "airy residual {v}");
            }
        }
        // negative control: the k of a perturbed pair must fail the
        // original conditions (a perturbed pair satisfies its own)
        let mut alphas = data.alphas().to_vec();
        alphas[0] += C64::new(0.1, 0.0);
        let perturbed = SpectralData::new(data.lambdas().to_vec(), alphas).unwrap();
        let u_wrong = u_columns(&perturbed, &rho, Kind::Airy, &xs[0]).unwrap();
        let res = residuals_one_x(&data, &rho, Kind::Airy, &xs[0], &u_wrong);
        assert!(res[0] > 1e-3, "perturbation undetected: {}", res[0]);

        let rb = RhoPoly::bessel2();
        let res = condition_residual(&data, &rb, Kind::Bessel, &xs).unwrap();
        for per_cond in &res {
            for &v in per_cond {
                assert!(v <= 1e-8, "bessel residual {v}");
            }
        }
    }

    #[test]
    fn a_identity_exact_zero_and_negative_control() {
        // exact 2x2 pair, rho = t^2 - a_0 with a_0 != 0
        let data = random_spectral_data(2, 8);
        let exact = SpectralData::<BigRational>::lift_from(&data);
        let pair = from_spectral_data(&exact).unwrap();
        let rho = RhoPoly::<BigRational>::new(
            Kind::Airy,
            vec![lift(C64::new(2.0, 1.0)), lift(C64::new(0.0, 0.0))],
        )
        .unwrap();
        let x = lift(C64::new(0.75, -0.25));
        assert_eq!(verify_a_identity(&pair, &rho, Kind::Airy, &x).unwrap(), 0.0);

        let rb = RhoPoly::<BigRational>::bessel2();
        assert_eq!(
            verify_a_identity(&pair, &rb, Kind::Bessel, &x).unwrap(),
            0.0
        );

        // negative control: building A with a_0 dropped breaks the identity
        let rho_wrong = RhoPoly::<BigRational>::new_unchecked(
            Kind::Airy,
            vec![lift(C64::new(0.0, 0.0)), lift(C64::new(0.0, 0.0))],
        )
        .unwrap();
        let a_wrong = a_matrix(&pair, &rho_wrong, Kind::Airy, &x).unwrap();
        let a_right = a_matrix(&pair, &rho, Kind::Airy, &x).unwrap();
        assert_ne!(a_wrong, a_right);
    }
}

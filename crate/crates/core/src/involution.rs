//! The three bispectral involutions on Calogero-Moser pairs, the symplectic
//! form tr(dP ^ dQ), and finite-difference antisymplecticity checks.

use crate::cm::{canonicalize, from_spectral_data, CMPair, SpectralData};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rho::{Kind, RhoPoly};
use crate::scalar::{cabs, Real};
use crate::C64;
use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default finite-difference step for pushforwards.
pub const FD_STEP: f64 = 1e-5;

/// `Q-hat = rho(P^T) - Q^T`.
pub fn airy_q_hat<T: Real>(pair: &CMPair<T>, rho: &RhoPoly<T>) -> Result<Matrix<T>> {
    if rho.kind() != Kind::Airy {
        return Err(Error::InvalidRho("expected an Airy-normalized rho".into()));
    }
    Ok(&rho.eval_matrix(&pair.p().transpose())? - &pair.q().transpose())
}

/// `Q-hat = (Q^{-1} rho(r QP))^T`. Needs Q invertible.
pub fn bessel_q_hat<T: Real>(pair: &CMPair<T>, rho: &RhoPoly<T>) -> Result<Matrix<T>> {
    if rho.kind() != Kind::Bessel {
        return Err(Error::InvalidRho("expected a Bessel-normalized rho".into()));
    }
    let q_inv = pair.q().inverse().map_err(|_| Error::SingularQ)?;
    let r = Complex::new(T::from_i64(rho.order() as i64), T::zero());
    let rqp = (pair.q() * pair.p()).scale(&r);
    Ok((&q_inv * &rho.eval_matrix(&rqp)?).transpose())
}

/// `(P, Q) -> (Q^T, P^T)`, the rank-one bispectral involution.
pub fn beta_kp<T: Real>(pair: &CMPair<T>) -> CMPair<T> {
    CMPair::new_unchecked(pair.q().transpose(), pair.p().transpose()).expect("shape preserved")
}

/// `(P, Q) -> (P^T, rho(P^T) - Q^T)`.
pub fn beta_airy<T: Real>(pair: &CMPair<T>, rho: &RhoPoly<T>) -> Result<CMPair<T>> {
    let q_hat = airy_q_hat(pair, rho)?;
    CMPair::new_unchecked(pair.p().transpose(), q_hat)
}

/// `(P, Q) -> (Q-hat^{-1} P^T Q^T, (Q^{-1} rho(r QP))^T)`.
///
/// Densely defined: fails with `SingularQ` or `SingularRho` outside its
/// domain; failures are reported, never regularized.
pub fn beta_bessel<T: Real>(pair: &CMPair<T>, rho: &RhoPoly<T>) -> Result<CMPair<T>> {
    let q_hat = bessel_q_hat(pair, rho)?;
    let q_hat_inv = q_hat.inverse().map_err(|_| Error::SingularRho)?;
    let p_hat = &(&q_hat_inv * &pair.p().transpose()) * &pair.q().transpose();
    CMPair::new_unchecked(p_hat, q_hat)
}

/// An involution together with its rho, as selected on the CLI.
#[derive(Debug, Clone)]
pub enum InvolutionMap<T: Real> {
    Kp,
    Airy(RhoPoly<T>),
    Bessel(RhoPoly<T>),
}

impl<T: Real> InvolutionMap<T> {
    pub fn apply(&self, pair: &CMPair<T>) -> Result<CMPair<T>> {
        match self {
            InvolutionMap::Kp => Ok(beta_kp(pair)),
            InvolutionMap::Airy(rho) => beta_airy(pair, rho),
            InvolutionMap::Bessel(rho) => beta_bessel(pair, rho),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InvolutionMap::Kp => "kp",
            InvolutionMap::Airy(_) => "airy",
            InvolutionMap::Bessel(_) => "bessel",
        }
    }
}

/// Tangent direction at a pair.
#[derive(Debug, Clone)]
pub struct TangentVector<T: Real> {
    pub d_p: Matrix<T>,
    pub d_q: Matrix<T>,
}

/// Evaluation of tr(dP ^ dQ) on two tangent vectors:
/// `tr(t1.dP t2.dQ) - tr(t2.dP t1.dQ)`.
pub fn symplectic_form<T: Real>(
    t1: &TangentVector<T>,
    t2: &TangentVector<T>,
) -> Result<Complex<T>> {
    if t1.d_p.rows() != t2.d_p.rows() {
        return Err(Error::DimensionMismatch(
            "tangent vectors live at different dimensions".into(),
        ));
    }
    let a = (&t1.d_p * &t2.d_q).trace()?;
    let b = (&t2.d_p * &t1.d_q).trace()?;
    Ok(a - b)
}

/// Central finite-difference differential of the involution at `pair` in
/// direction `t`.
pub fn pushforward(
    map: &InvolutionMap<f64>,
    pair: &CMPair<f64>,
    t: &TangentVector<f64>,
    h: f64,
) -> Result<TangentVector<f64>> {
    let shift = |sign: f64| -> Result<CMPair<f64>> {
        let s = C64::new(sign * h, 0.0);
        CMPair::new_unchecked(
            &pair.p().clone() + &t.d_p.scale(&s),
            &pair.q().clone() + &t.d_q.scale(&s),
        )
    };
    let plus = map.apply(&shift(1.0)?)?;
    let minus = map.apply(&shift(-1.0)?)?;
    let inv_2h = C64::new(1.0 / (2.0 * h), 0.0);
    Ok(TangentVector {
        d_p: (&plus.p().clone() - &minus.p().clone()).scale(&inv_2h),
        d_q: (&plus.q().clone() - &minus.q().clone()).scale(&inv_2h),
    })
}

/// Analytic tangent of `from_spectral_data` in direction (dlambda, dalpha).
/// These directions stay on the rank-one locus by construction.
pub fn spectral_tangent(
    data: &SpectralData<f64>,
    d_lambda: &[C64],
    d_alpha: &[C64],
) -> TangentVector<f64> {
    let n = data.n();
    let l = data.lambdas();
    let d_q = Matrix::from_fn(n, n, |i, j| if i == j { d_lambda[i] } else { C64::zero() });
    let d_p = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            let mut v = d_alpha[i];
            for k in 0..n {
                if k != i {
                    let diff = l[i] - l[k];
                    v += (d_lambda[i] - d_lambda[k]) / (diff * diff);
                }
            }
            v
        } else {
            let diff = l[i] - l[j];
            -(d_lambda[i] - d_lambda[j]) / (diff * diff)
        }
    });
    TangentVector { d_p, d_q }
}

/// Conjugation direction `([X,P], [X,Q])`, tangent to the conjugation orbit.
pub fn conjugation_tangent<T: Real>(pair: &CMPair<T>, x: &Matrix<T>) -> TangentVector<T> {
    TangentVector {
        d_p: x.commutator(pair.p()),
        d_q: x.commutator(pair.q()),
    }
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Max over `trials` random rank-one-preserving tangent pairs of
/// `|omega(beta_* t1, beta_* t2) + omega(t1, t2)| / max(1, |omega(t1, t2)|)`.
///
/// Runs at the canonical representative of the pair's conjugacy class, where
/// spectral-data directions are available in closed form; conjugation
/// directions are mixed in to cover the off-diagonal gauge.
pub fn antisymplectic_residual(
    map: &InvolutionMap<f64>,
    pair: &CMPair<f64>,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let data = canonicalize(pair)?;
    let base = from_spectral_data(&data)?;
    let n = base.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let draw = |rng: &mut ChaCha8Rng| {
            let dl: Vec<C64> = (0..n).map(|_| random_c64(rng)).collect();
            let da: Vec<C64> = (0..n).map(|_| random_c64(rng)).collect();
            let spectral = spectral_tangent(&data, &dl, &da);
            let x = Matrix::from_fn(n, n, |_, _| random_c64(rng));
            let conj = conjugation_tangent(&base, &x);
            TangentVector {
                d_p: &spectral.d_p + &conj.d_p,
                d_q: &spectral.d_q + &conj.d_q,
            }
        };
        let t1 = draw(&mut rng);
        let t2 = draw(&mut rng);
        let f1 = pushforward(map, &base, &t1, FD_STEP)?;
        let f2 = pushforward(map, &base, &t2, FD_STEP)?;
        let before = symplectic_form(&t1, &t2)?;
        let after = symplectic_form(&f1, &f2)?;
        let residual = cabs(&(after + before)) / 1f64.max(cabs(&before));
        worst = worst.max(residual);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::{random_pair, random_spectral_data, validate_and_factor};
    use crate::scalar::{close, cplx};
    use num_rational::BigRational;

    fn exact_pair(seed: u64, n: usize) -> CMPair<BigRational> {
        let data = random_spectral_data(n, seed);
        from_spectral_data(&SpectralData::lift_from(&data)).unwrap()
    }

    #[test]
    fn beta_kp_scalar_and_involutive() {
        let pair = CMPair::new(
            Matrix::column(&[cplx::<f64>(3, 0)]),
            Matrix::column(&[cplx(7, 0)]),
        )
        .unwrap();
        let hat = beta_kp(&pair);
        assert_eq!(hat.p()[(0, 0)], cplx(7, 0));
        assert_eq!(hat.q()[(0, 0)], cplx(3, 0));
        assert_eq!(beta_kp(&hat), pair);
    }

    #[test]
    fn beta_kp_swaps_factor_vectors() {
        let pair = random_pair(3, 21);
        let f = pair.factor().unwrap();
        let g = beta_kp(&pair).factor().unwrap();
        // [P,Q]^T = I - w2 w1^T; bilinear products are scale-free
        for i in 0..3 {
            for j in 0..3 {
                let lhs = f.w1[i] * f.w2[j];
                let rhs = g.w1[j] * g.w2[i];
                assert!(close(&lhs, &rhs, 1e-9));
            }
        }
    }

    #[test]
    fn beta_airy_scalar_example() {
        let rho = RhoPoly::<f64>::airy2();
        let pair =
            CMPair::new(Matrix::column(&[cplx(3, 0)]), Matrix::column(&[cplx(7, 0)])).unwrap();
        let hat = beta_airy(&pair, &rho).unwrap();
        assert_eq!(hat.p()[(0, 0)], cplx(3, 0));
        assert_eq!(hat.q()[(0, 0)], cplx(2, 0)); // 3^2 - 7
    }

    #[test]
    fn beta_airy_involutive_and_commutator_transposed_exact() {
        let rho = RhoPoly::<BigRational>::new(Kind::Airy, vec![cplx(2, 1), cplx(0, 3), cplx(0, 0)])
            .unwrap();
        for seed in [1u64, 5] {
            let pair = exact_pair(seed, 3);
            let hat = beta_airy(&pair, &rho).unwrap();
            let back = beta_airy(&hat, &rho).unwrap();
            assert_eq!(&back, &pair);
            let comm = pair.p().commutator(pair.q());
            let comm_hat = hat.p().commutator(hat.q());
            assert_eq!(comm_hat, comm.transpose());
            validate_and_factor(hat.p(), hat.q()).unwrap();
        }
    }

    #[test]
    fn beta_bessel_scalar_example() {
        let rho = RhoPoly::<f64>::bessel2();
        let (gamma, lambda) = (3.0, 7.0);
        let pair = CMPair::new(
            Matrix::column(&[C64::new(gamma, 0.0)]),
            Matrix::column(&[C64::new(lambda, 0.0)]),
        )
        .unwrap();
        let hat = beta_bessel(&pair, &rho).unwrap();
        let q_hat = (4.0 * lambda * lambda * gamma * gamma - 2.0 * lambda * gamma - 1.0) / lambda;
        assert!((hat.q()[(0, 0)] - C64::new(q_hat, 0.0)).norm() < 1e-12);
        assert!((hat.p()[(0, 0)] - C64::new(lambda * gamma / q_hat, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn beta_bessel_involutive_exact() {
        let rho = RhoPoly::<BigRational>::bessel2();
        for seed in [2u64, 9] {
            let pair = exact_pair(seed, 2);
            let hat = match beta_bessel(&pair, &rho) {
                Ok(h) => h,
                Err(_) => continue, // outside the dense domain
            };
            let back = beta_bessel(&hat, &rho).unwrap();
            assert_eq!(&back, &pair);
            assert_eq!(
                hat.p().commutator(hat.q()),
                pair.p().commutator(pair.q()).transpose()
            );
        }
    }

    #[test]
    fn symplectic_form_canonical_and_antisymmetric() {
        let t1 = TangentVector {
            d_p: Matrix::column(&[cplx::<f64>(1, 0)]),
            d_q: Matrix::column(&[cplx(0, 0)]),
        };
        let t2 = TangentVector {
            d_p: Matrix::column(&[cplx(0, 0)]),
            d_q: Matrix::column(&[cplx(1, 0)]),
        };
        assert_eq!(symplectic_form(&t1, &t2).unwrap(), cplx(1, 0));
        assert_eq!(symplectic_form(&t2, &t1).unwrap(), cplx(-1, 0));
        assert_eq!(symplectic_form(&t1, &t1).unwrap(), cplx(0, 0));
    }

    #[test]
    fn pushforward_beta_kp_is_transpose_swap() {
        let pair = random_pair(2, 4);
        let t = TangentVector {
            d_p: Matrix::from_fn(2, 2, |i, j| C64::new((i + j) as f64, 0.5)),
            d_q: Matrix::from_fn(2, 2, |i, j| C64::new(0.3, (i * 2 + j) as f64)),
        };
        let f = pushforward(&InvolutionMap::Kp, &pair, &t, FD_STEP).unwrap();
        assert!((&f.d_p - &t.d_q.transpose()).norm_max() < 1e-8);
        assert!((&f.d_q - &t.d_p.transpose()).norm_max() < 1e-8);
    }

    #[test]
    fn pushforward_beta_airy_product_rule() {
        let pair = random_pair(2, 8);
        let t = TangentVector {
            d_p: Matrix::from_fn(2, 2, |i, j| C64::new((i as f64) - 0.4, (j as f64) * 0.7)),
            d_q: Matrix::from_fn(2, 2, |i, j| C64::new(0.2 * (i + j) as f64, -0.1)),
        };
        let map = InvolutionMap::Airy(RhoPoly::airy2());
        let f = pushforward(&map, &pair, &t, FD_STEP).unwrap();
        // d(P^T P^T - Q^T) = P^T dP^T + dP^T P^T - dQ^T
        let pt = pair.p().transpose();
        let dpt = t.d_p.transpose();
        let analytic = &(&(&pt * &dpt) + &(&dpt * &pt)) - &t.d_q.transpose();
        assert!((&f.d_q - &analytic).norm_max() < 1e-6);
        // halving h roughly quarters the truncation error
        let f2 = pushforward(&map, &pair, &t, FD_STEP / 2.0).unwrap();
        let e1 = (&f.d_q - &analytic).norm_max();
        let e2 = (&f2.d_q - &analytic).norm_max();
        assert!(e2 <= e1 * 0.6 + 1e-9, "e1={e1} e2={e2}");
    }

    #[test]
    fn antisymplectic_all_three() {
        let pair = random_pair(2, 33);
        let res_kp = antisymplectic_residual(&InvolutionMap::Kp, &pair, 8, 1).unwrap();
        assert!(res_kp <= 1e-8, "kp residual {res_kp}");
        let res_airy = antisymplectic_residual(
            &InvolutionMap::Airy(
                RhoPoly::new(Kind::Airy, vec![cplx(1, 0), cplx(0, 0), cplx(0, 0)]).unwrap(),
            ),
            &pair,
            8,
            2,
        )
        .unwrap();
        assert!(res_airy <= 1e-6, "airy residual {res_airy}");
        let res_bessel =
            antisymplectic_residual(&InvolutionMap::Bessel(RhoPoly::bessel2()), &pair, 8, 3)
                .unwrap();
        assert!(res_bessel <= 1e-6, "bessel residual {res_bessel}");
    }
}

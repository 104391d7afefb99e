//! Calogero-Moser flows, tau functions, pole trajectories, Hamiltonians, and
//! the explicit 1- and 2-particle reduced formulas.

use crate::cm::CMPair;
use crate::eigen::eigenvalues;
use crate::error::{Error, Result};
use crate::involution::{airy_q_hat, bessel_q_hat, beta_bessel};
use crate::matrix::Matrix;
use crate::rho::{Kind, RhoPoly};
use crate::scalar::{cabs, Real};
use crate::C64;
use num_complex::Complex;
use num_traits::{One, Zero};

/// Flow index plus an explicit, strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSpec {
    m: usize,
    t_grid: Vec<f64>,
}

impl FlowSpec {
    pub fn new(m: usize, t_grid: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("flow index m must be >= 1".into()));
        }
        if t_grid.is_empty() {
            return Err(Error::InvalidInput("empty time grid".into()));
        }
        if t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "time grid must be strictly increasing".into(),
            ));
        }
        Ok(Self { m, t_grid })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }
}

/// Matched pole positions over a time grid. `poles[k]` is empty when the
/// grid point failed; the failure is recorded in `point_errors[k]`.
/// `collision_flags[k]` marks steps where the nearest-neighbor matching
/// confidence degraded (pole gap below 10x the ambiguity threshold).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub poles: Vec<Vec<C64>>,
    pub collision_flags: Vec<bool>,
    pub point_errors: Vec<Option<String>>,
}

impl Trajectory {
    pub fn collisions(&self) -> Vec<(usize, bool)> {
        self.collision_flags
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(k, &f)| (k, f))
            .collect()
    }
}

/// The m-th flow at time t: `(P - t m Q^{m-1}, Q)`.
pub fn flow<T: Real>(pair: &CMPair<T>, m: usize, t: &Complex<T>) -> Result<CMPair<T>> {
    if m == 0 {
        return Err(Error::InvalidInput("flow index m must be >= 1".into()));
    }
    let coeff = t.clone() * Complex::new(T::from_i64(m as i64), T::zero());
    let p_t = pair.p() - &pair.q().pow(m - 1)?.scale(&coeff);
    CMPair::new_unchecked(p_t, pair.q().clone())
}

fn q_hat_of<T: Real>(pair: &CMPair<T>, rho: &RhoPoly<T>, kind: Kind) -> Result<Matrix<T>> {
    match kind {
        Kind::Airy => airy_q_hat(pair, rho),
        Kind::Bessel => bessel_q_hat(pair, rho),
    }
}

/// Q-hat of the flowed pair: Airy `(rho(P_t) - Q_t)^T`, Bessel
/// `(Q_t^{-1} rho(r Q_t P_t))^T`.
pub fn q_hat_t<T: Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    m: usize,
    t: &Complex<T>,
) -> Result<Matrix<T>> {
    q_hat_of(&flow(pair, m, t)?, rho, kind)
}

/// `tau_t(x) = det(xI - Q_hat_t)`.
pub fn tau<T: Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    m: usize,
    t: &Complex<T>,
    x: &Complex<T>,
) -> Result<Complex<T>> {
    let qh = q_hat_t(pair, rho, kind, m, t)?;
    (&Matrix::identity(pair.n()).scale(x) - &qh).determinant()
}

fn min_pairwise_gap(poles: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..poles.len() {
        for j in i + 1..poles.len() {
            gap = gap.min((poles[i] - poles[j]).norm());
        }
    }
    gap
}

/// Greedy nearest-neighbor match of `next` onto `prev`; returns `next`
/// reordered to follow `prev`'s indexing.
fn match_poles(prev: &[C64], next: &[C64]) -> Vec<C64> {
    let n = prev.len();
    let mut taken = vec![false; n];
    let mut out = vec![C64::zero(); n];
    for i in 0..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, cand) in next.iter().enumerate() {
            if !taken[j] {
                let d = (prev[i] - cand).norm();
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        taken[best] = true;
        out[i] = next[best];
    }
    out
}

/// Eigenvalues of Q-hat along the flow, index-matched across time steps.
/// Domain failures at individual grid points are recorded, not fatal.
pub fn pole_trajectories(
    pair: &CMPair<f64>,
    rho: &RhoPoly<f64>,
    kind: Kind,
    spec: &FlowSpec,
) -> Result<Trajectory> {
    let mut times = Vec::with_capacity(spec.t_grid.len());
    let mut poles: Vec<Vec<C64>> = Vec::with_capacity(spec.t_grid.len());
    let mut flags = Vec::with_capacity(spec.t_grid.len());
    let mut errors = Vec::with_capacity(spec.t_grid.len());
    let mut prev: Option<Vec<C64>> = None;
    for &t in &spec.t_grid {
        times.push(t);
        let step =
            q_hat_t(pair, rho, kind, spec.m, &C64::new(t, 0.0)).and_then(|qh| eigenvalues(&qh));
        match step {
            Ok(eigs) => {
                let (matched, flag) = match &prev {
                    Some(p) if p.len() == eigs.len() => {
                        let matched = match_poles(p, &eigs);
                        let displacement = p
                            .iter()
                            .zip(&matched)
                            .map(|(a, b)| (a - b).norm())
                            .fold(0.0, f64::max);
                        // matching is ambiguous when a pole moved more than
                        // half the previous separation, degraded when the
                        // current separation is within 10x the motion
                        let flag = matched.len() > 1
                            && (displacement > 0.5 * min_pairwise_gap(p)
                                || min_pairwise_gap(&matched) < 10.0 * displacement);
                        (matched, flag)
                    }
                    _ => (eigs, false),
                };
                prev = Some(matched.clone());
                poles.push(matched);
                flags.push(flag);
                errors.push(None);
            }
            Err(e) => {
                poles.push(Vec::new());
                flags.push(true);
                errors.push(Some(e.to_string()));
                prev = None;
            }
        }
    }
    Ok(Trajectory {
        times,
        poles,
        collision_flags: flags,
        point_errors: errors,
    })
}

/// `tr(Q_hat^m)` for the kind's involution, evaluated at t = 0.
pub fn hamiltonian<T: Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    m: usize,
) -> Result<Complex<T>> {
    if m == 0 {
        return Err(Error::InvalidInput(
            "hamiltonian index m must be >= 1".into(),
        ));
    }
    q_hat_of(pair, rho, kind)?.pow(m)?.trace()
}

/// Explicit reduced-coordinate h_1 formulas for the rank-two operators
/// (rho = t^2 Airy, t^2 - t - 1 Bessel). `coords` is (lambda, gamma) for
/// one particle or (lambda_1, lambda_2, gamma_1, gamma_2) for two.
pub fn reduced_reference_h1(kind: Kind, coords: &[C64]) -> Result<C64> {
    match (kind, coords.len()) {
        (Kind::Airy, 2) => {
            let (l, g) = (coords[0], coords[1]);
            Ok(g * g - l)
        }
        (Kind::Bessel, 2) => {
            let (l, g) = (coords[0], coords[1]);
            if l.norm() == 0.0 {
                return Err(Error::InvalidInput("lambda must be nonzero".into()));
            }
            Ok(C64::new(4.0, 0.0) * l * g * g - C64::new(2.0, 0.0) * g - C64::one() / l)
        }
        (Kind::Airy, 4) => {
            let (l1, l2, g1, g2) = (coords[0], coords[1], coords[2], coords[3]);
            let d = l1 - l2;
            Ok(g1 * g1 + g2 * g2 - l1 - l2 - C64::new(2.0, 0.0) / (d * d))
        }
        (Kind::Bessel, 4) => {
            let (l1, l2, g1, g2) = (coords[0], coords[1], coords[2], coords[3]);
            Ok(-(l1 + l2) / (l1 * l2) - g1 + l1 * g1 * g1 - g2
                + l2 * g2 * g2
                + C64::new(2.0, 0.0) * (l1 * g1 - l2 * g2) / (-l1 + l2))
        }
        (_, len) => Err(Error::UnsupportedParticleCount(len / 2)),
    }
}

fn scalar_entry(m: &Matrix<f64>) -> C64 {
    m[(0, 0)]
}

/// Reduced 1-particle Bessel coordinates along the m = 1 flow: the hat-side
/// motion is `gamma_hat(t) = gamma_hat_0 + t` with `lambda_hat` static, and
/// (lambda, gamma) are pulled back through the involution.
fn bessel_coords_at(pair: &CMPair<f64>, rho: &RhoPoly<f64>, t: f64) -> Result<(C64, C64)> {
    let hat = beta_bessel(pair, rho)?;
    let shifted = flow(&hat, 1, &C64::new(-t, 0.0))?; // P_hat + t
    let back = beta_bessel(&shifted, rho)?;
    Ok((scalar_entry(back.q()), scalar_entry(back.p())))
}

/// Max deviation of centered finite-difference (lambda-dot, gamma-dot) from
/// the 1-particle Bessel vector field
/// `lambda-dot = 8 gamma lambda - 2`, `gamma-dot = -4 gamma^2 - 1/lambda^2`.
pub fn eom_check(kind: Kind, coords: &[C64], h: f64) -> Result<f64> {
    if kind != Kind::Bessel || coords.len() != 2 {
        return Err(Error::UnsupportedParticleCount(coords.len() / 2));
    }
    let (l, g) = (coords[0], coords[1]);
    if l.norm() == 0.0 {
        return Err(Error::InvalidInput("lambda must be nonzero".into()));
    }
    let rho = RhoPoly::bessel2();
    let pair = CMPair::new_unchecked(Matrix::column(&[g]), Matrix::column(&[l]))?;
    let (lp, gp) = bessel_coords_at(&pair, &rho, h)?;
    let (lm, gm) = bessel_coords_at(&pair, &rho, -h)?;
    let two_h = C64::new(2.0 * h, 0.0);
    let l_dot = (lp - lm) / two_h;
    let g_dot = (gp - gm) / two_h;
    let l_dot_ref = C64::new(8.0, 0.0) * g * l - C64::new(2.0, 0.0);
    let g_dot_ref = C64::new(-4.0, 0.0) * g * g - C64::one() / (l * l);
    Ok(cabs(&(l_dot - l_dot_ref)).max(cabs(&(g_dot - g_dot_ref))))
}

/// The pole curve of the 1-particle Bessel m = 1 flow in closed form:
/// `lambda(t) = 4 c1 t^2 + (8 c1 c2 - 2) t - 1/c1 - 2 c2 + 4 c1 c2^2`,
/// with `c1 = Q_0`, `c2 = P_0` of the pair being flowed; the simulated
/// pole at time t equals this quadratic evaluated at -t (the solution
/// method reverses time through the involution).
pub fn bessel_pole_quadratic(c1: C64, c2: C64, t: f64) -> C64 {
    let t = C64::new(t, 0.0);
    C64::new(4.0, 0.0) * c1 * t * t + (C64::new(8.0, 0.0) * c1 * c2 - C64::new(2.0, 0.0)) * t
        - C64::one() / c1
        - C64::new(2.0, 0.0) * c2
        + C64::new(4.0, 0.0) * c1 * c2 * c2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm::{from_spectral_data, random_pair, random_spectral_data};
    use crate::involution::beta_airy;
    use crate::scalar::cplx;
    use crate::MatrixF;
    use num_rational::BigRational;

    fn scalar_pair(gamma: f64, lambda: f64) -> CMPair<f64> {
        CMPair::new_unchecked(
            MatrixF::column(&[C64::new(gamma, 0.0)]),
            MatrixF::column(&[C64::new(lambda, 0.0)]),
        )
        .unwrap()
    }

    #[test]
    fn flow_m1_shifts_p() {
        let pair = random_pair(2, 21);
        let t = C64::new(0.7, 0.0);
        let flowed = flow(&pair, 1, &t).unwrap();
        let expected = pair.p() - &MatrixF::identity(2).scale(&t);
        assert_eq!(flowed.p(), &expected);
        assert_eq!(flowed.q(), pair.q());
        let at_zero = flow(&pair, 3, &C64::zero()).unwrap();
        assert_eq!(at_zero.p(), pair.p());
    }

    #[test]
    fn flow_preserves_commutator_exactly() {
        let data = random_spectral_data(3, 22);
        let exact = crate::cm::SpectralData::<BigRational>::lift_from(&data);
        let pair = from_spectral_data(&exact).unwrap();
        let t = Complex::new(
            BigRational::new(3.into(), 7.into()),
            BigRational::from_integer(0.into()),
        );
        for m in 1..=3 {
            let flowed = flow(&pair, m, &t).unwrap();
            assert_eq!(
                flowed.p().commutator(flowed.q()),
                pair.p().commutator(pair.q())
            );
        }
    }

    #[test]
    fn q_hat_t_scalar_examples() {
        // Airy n=1 r=2: (gamma - t)^2 - lambda
        let (g, l, t) = (1.3, 0.4, 0.25);
        let pair = scalar_pair(g, l);
        let qh = q_hat_t(&pair, &RhoPoly::airy2(), Kind::Airy, 1, &C64::new(t, 0.0)).unwrap();
        assert!((qh[(0, 0)].re - ((g - t) * (g - t) - l)).abs() < 1e-12);
        // Bessel: lambda^{-1} rho(2 lambda (gamma - t))
        let qh = q_hat_t(
            &pair,
            &RhoPoly::bessel2(),
            Kind::Bessel,
            1,
            &C64::new(t, 0.0),
        )
        .unwrap();
        let s = 2.0 * l * (g - t);
        assert!((qh[(0, 0)].re - (s * s - s - 1.0) / l).abs() < 1e-12);
    }

    #[test]
    fn flow_commutes_with_airy_hat_exactly() {
        let data = random_spectral_data(2, 23);
        let exact = crate::cm::SpectralData::<BigRational>::lift_from(&data);
        let pair = from_spectral_data(&exact).unwrap();
        let rho = RhoPoly::lift_from(&RhoPoly::airy2());
        let t = Complex::new(
            BigRational::new(1.into(), 3.into()),
            BigRational::from_integer(0.into()),
        );
        let m = 2;
        let direct = q_hat_t(&pair, &rho, Kind::Airy, m, &t).unwrap();
        let coeff = t.clone()
            * Complex::new(
                BigRational::from_integer(m.into()),
                BigRational::from_integer(0.into()),
            );
        let p_shift = pair.p() - &pair.q().pow(m - 1).unwrap().scale(&coeff);
        let expected = &rho.eval_matrix(&p_shift.transpose()).unwrap() - &pair.q().transpose();
        assert_eq!(direct, expected);
    }

    #[test]
    fn tau_matches_eigenvalue_product() {
        let pair = random_pair(3, 24);
        let rho = RhoPoly::airy2();
        for k in 0..5 {
            let t = -0.8 + 0.4 * k as f64;
            let tc = C64::new(t, 0.0);
            let qh = q_hat_t(&pair, &rho, Kind::Airy, 1, &tc).unwrap();
            let eigs = crate::eigen::eigenvalues(&qh).unwrap();
            let x = C64::new(1.7 + k as f64, -0.6);
            let tv = tau(&pair, &rho, Kind::Airy, 1, &tc, &x).unwrap();
            let prod: C64 = eigs.iter().fold(C64::one(), |acc, e| acc * (x - e));
            assert!((tv - prod).norm() <= 1e-8 * prod.norm().max(1.0));
        }
    }

    #[test]
    fn trajectory_matches_reference_quadratic() {
        let (c1, c2) = (C64::new(1.1, 0.0), C64::new(0.6, 0.0));
        let pair = CMPair::new_unchecked(MatrixF::column(&[c2]), MatrixF::column(&[c1])).unwrap();
        let grid: Vec<f64> = (0..101).map(|k| -1.0 + 0.02 * k as f64).collect();
        let spec = FlowSpec::new(1, grid).unwrap();
        let traj = pole_trajectories(&pair, &RhoPoly::bessel2(), Kind::Bessel, &spec).unwrap();
        for (k, t) in traj.times.iter().enumerate() {
            let expect = bessel_pole_quadratic(c1, c2, -t);
            assert!(
                (traj.poles[k][0] - expect).norm() < 1e-9,
                "t={t}: {} vs {expect}",
                traj.poles[k][0]
            );
        }
    }

    #[test]
    fn trajectory_matching_keeps_index_continuity() {
        let pair = random_pair(3, 25);
        let grid: Vec<f64> = (0..41).map(|k| -1.0 + 0.05 * k as f64).collect();
        let spec = FlowSpec::new(1, grid).unwrap();
        let traj = pole_trajectories(&pair, &RhoPoly::airy2(), Kind::Airy, &spec).unwrap();
        for w in traj.poles.windows(2) {
            if w[0].is_empty() || w[1].is_empty() {
                continue;
            }
            let gap = min_pairwise_gap(&w[0]);
            for (a, b) in w[0].iter().zip(&w[1]) {
                assert!((a - b).norm() < gap.max(0.5), "pole jumped between steps");
            }
        }
    }

    #[test]
    fn flow_spec_validation() {
        assert!(FlowSpec::new(0, vec![0.0, 1.0]).is_err());
        assert!(FlowSpec::new(1, vec![]).is_err());
        assert!(FlowSpec::new(1, vec![0.0, 0.0]).is_err());
        assert!(FlowSpec::new(1, vec![1.0, 0.0]).is_err());
        assert!(FlowSpec::new(1, vec![0.0]).is_ok());
    }

    #[test]
    fn hamiltonian_airy_m1_is_trace_formula() {
        let pair = random_pair(3, 26);
        let h = hamiltonian(&pair, &RhoPoly::airy2(), Kind::Airy, 1).unwrap();
        let expected = (pair.p().pow(2).unwrap().trace().unwrap()) - pair.q().trace().unwrap();
        assert!((h - expected).norm() < 1e-10);
    }

    #[test]
    fn hamiltonian_conjugation_invariant() {
        let pair = random_pair(2, 27);
        let g = MatrixF::new(2, 2, vec![cplx(1, 0), cplx(2, 1), cplx(0, 1), cplx(3, 0)]).unwrap();
        let gi = g.inverse().unwrap();
        let conj = CMPair::new_unchecked(&(&g * pair.p()) * &gi, &(&g * pair.q()) * &gi).unwrap();
        let rho = RhoPoly::airy2();
        let a = hamiltonian(&pair, &rho, Kind::Airy, 2).unwrap();
        let b = hamiltonian(&conj, &rho, Kind::Airy, 2).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn reduced_airy_two_particle_example() {
        // (0, 2, 0, 0) -> -2 - 2/4 = -5/2
        let h = reduced_reference_h1(
            Kind::Airy,
            &[cplx(0, 0), cplx(2, 0), cplx(0, 0), cplx(0, 0)],
        )
        .unwrap();
        assert!((h - C64::new(-2.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn reduced_formulas_match_hamiltonian() {
        // Bessel 1-particle: tr(Q-hat) = 4 l g^2 - 2 g - 1/l
        let (l, g) = (C64::new(1.4, 0.3), C64::new(-0.8, 0.1));
        let pair = CMPair::new_unchecked(MatrixF::column(&[g]), MatrixF::column(&[l])).unwrap();
        let h = hamiltonian(&pair, &RhoPoly::bessel2(), Kind::Bessel, 1).unwrap();
        let r = reduced_reference_h1(Kind::Bessel, &[l, g]).unwrap();
        assert!((h - r).norm() < 1e-12);

        // Airy 2-particle in canonical coordinates
        for seed in 30..35 {
            let data = random_spectral_data(2, seed);
            let pair = from_spectral_data(&data).unwrap();
            let coords = vec![
                data.lambdas()[0],
                data.lambdas()[1],
                crate::cm::gammas(&data)[0],
                crate::cm::gammas(&data)[1],
            ];
            let h = hamiltonian(&pair, &RhoPoly::airy2(), Kind::Airy, 1).unwrap();
            let r = reduced_reference_h1(Kind::Airy, &coords).unwrap();
            assert!((h - r).norm() < 1e-10, "seed {seed}: {h} vs {r}");
        }
    }

    #[test]
    fn reduced_rejects_unsupported() {
        assert!(reduced_reference_h1(Kind::Airy, &[cplx(1, 0)]).is_err());
        assert!(reduced_reference_h1(Kind::Bessel, &[cplx(1, 0); 6]).is_err());
    }

    #[test]
    fn eom_check_examples() {
        // (1, 0): lambda-dot = -2, gamma-dot = -1
        let r = eom_check(Kind::Bessel, &[cplx(1, 0), cplx(0, 0)], 1e-4).unwrap();
        assert!(r <= 1e-5, "residual {r}");
        // turning point (1, 1/4): lambda-dot = 0
        let pair = scalar_pair(0.25, 1.0);
        let rho = RhoPoly::bessel2();
        let h = 1e-4;
        let (lp, _) = bessel_coords_at(&pair, &rho, h).unwrap();
        let (lm, _) = bessel_coords_at(&pair, &rho, -h).unwrap();
        assert!(((lp - lm) / C64::new(2.0 * h, 0.0)).norm() < 1e-6);
        // second-order convergence
        let r1 = eom_check(Kind::Bessel, &[cplx(2, 0), C64::new(0.7, 0.0)], 2e-4).unwrap();
        let r2 = eom_check(Kind::Bessel, &[cplx(2, 0), C64::new(0.7, 0.0)], 1e-4).unwrap();
        let ratio = r1 / r2;
        assert!(ratio > 2.5 && ratio < 6.0, "convergence ratio {ratio}");
    }

    #[test]
    fn hat_side_involution_pullback_roundtrip() {
        // beta applied twice restores the coordinates at t=0
        let pair = scalar_pair(0.9, 1.7);
        let rho = RhoPoly::bessel2();
        let (l, g) = bessel_coords_at(&pair, &rho, 0.0).unwrap();
        assert!((l - C64::new(1.7, 0.0)).norm() < 1e-12);
        assert!((g - C64::new(0.9, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn airy_pole_is_exact_parabola() {
        let (g, l) = (0.8, 0.3);
        let pair = scalar_pair(g, l);
        let grid: Vec<f64> = (0..21).map(|k| -1.0 + 0.1 * k as f64).collect();
        let spec = FlowSpec::new(1, grid).unwrap();
        let traj = pole_trajectories(&pair, &RhoPoly::airy2(), Kind::Airy, &spec).unwrap();
        for (k, t) in traj.times.iter().enumerate() {
            let expect = (g - t) * (g - t) - l;
            assert!((traj.poles[k][0] - C64::new(expect, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn hat_flow_is_airy_beta_of_flow() {
        // beta_airy(flow(pair, m, t)) has P component P0^T (static under the
        // Airy hat-side picture: P-hat = P^T of the flowed pair)
        let pair = random_pair(2, 28);
        let rho = RhoPoly::airy2();
        let t = C64::new(0.35, 0.0);
        let hat = beta_airy(&flow(&pair, 1, &t).unwrap(), &rho).unwrap();
        let expected_p = (pair.p() - &MatrixF::identity(2).scale(&t)).transpose();
        assert!((hat.p() - &expected_p).norm_max() < 1e-12);
    }

    #[test]
    fn trajectory_records_point_errors() {
        // Bessel with singular Q fails at every grid point but not fatally
        let pair = scalar_pair(1.0, 0.0);
        let spec = FlowSpec::new(1, vec![0.0, 0.5]).unwrap();
        let traj = pole_trajectories(&pair, &RhoPoly::bessel2(), Kind::Bessel, &spec).unwrap();
        assert!(traj.poles.iter().all(|p| p.is_empty()));
        assert!(traj.point_errors.iter().all(|e| e.is_some()));
    }
}

//! Verification suites behind `bispec verify`.

use bispec::baker::{
    airy_k, bessel_k, condition_residual, k_solver_oracle, verify_a_identity, wilson_rational,
};
use bispec::cm::{canonicalize, from_spectral_data, CMPair};
use bispec::involution::{antisymplectic_residual, beta_kp, InvolutionMap};
use bispec::matrix::Matrix;
use bispec::rho::{Kind, RhoPoly};
use bispec::scalar::lower;
use bispec::C64;
use num_complex::Complex;
use num_rational::BigRational;
use serde_json::{json, Value};

pub struct SuiteResult {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

pub struct Report {
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass)
    }

    pub fn to_json(&self, backend: &str, tol: f64) -> Value {
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                let mut v = json!({
                    "name": s.name,
                    "residual": s.residual,
                    "tolerance": s.tolerance,
                    "pass": s.pass,
                });
                if let Some(note) = &s.note {
                    v["note"] = json!(note);
                }
                v
            })
            .collect();
        json!({
            "backend": backend,
            "tol": tol,
            "pass": self.pass(),
            "suites": suites,
        })
    }
}

fn record(residual: Result<f64, String>, name: &'static str, tolerance: f64) -> SuiteResult {
    match residual {
        Ok(r) => SuiteResult {
            name,
            residual: r,
            tolerance,
            pass: r <= tolerance,
            note: None,
        },
        Err(note) => SuiteResult {
            name,
            residual: f64::INFINITY,
            tolerance,
            pass: false,
            note: Some(note),
        },
    }
}

/// Deterministic off-axis sample points with magnitude ~3x the pair scale,
/// comfortably outside the spectra of generic O(scale) matrices.
fn sample_points(scale: f64, count: usize) -> Vec<C64> {
    (0..count)
        .map(|k| {
            let t = 0.7 + 1.1 * k as f64;
            C64::new(3.0 * scale * t.cos() + 0.137, 3.0 * scale * t.sin() + 0.271)
        })
        .collect()
}

fn pair_scale(pair: &CMPair<f64>) -> f64 {
    pair.p().norm_max().max(pair.q().norm_max()).max(1.0)
}

fn rank_residual<T: bispec::Real>(pair: &CMPair<T>) -> Result<f64, String> {
    let f = pair.factor().map_err(|e| e.to_string())?;
    let n = pair.n();
    let outer = Matrix::from_fn(n, n, |i, j| f.w1[i].clone() * f.w2[j].clone());
    let comm = pair.p().commutator(pair.q());
    Ok((&comm - &(&Matrix::identity(n) - &outer)).norm_max())
}

fn k_dev(k1: &[C64], k2: &[C64]) -> f64 {
    k1.iter()
        .zip(k2)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

fn k_eval(
    pair: &CMPair<f64>,
    rho: &RhoPoly<f64>,
    kind: Kind,
    x: &C64,
    z: &C64,
) -> Result<Vec<C64>, String> {
    let k = match kind {
        Kind::Airy => airy_k(pair, rho, x, z),
        Kind::Bessel => bessel_k(pair, rho, x, z),
    };
    Ok(k.map_err(|e| e.to_string())?.values)
}

fn oracle_residual(pair: &CMPair<f64>, rho: &RhoPoly<f64>, kind: Kind) -> Result<f64, String> {
    let data = canonicalize(pair).map_err(|e| e.to_string())?;
    let canonical = from_spectral_data(&data).map_err(|e| e.to_string())?;
    let s = pair_scale(&canonical);
    let xs = sample_points(s, 3);
    let zs = sample_points(s * 1.7, 3);
    let mut worst = 0.0f64;
    for (x, z) in xs.iter().zip(&zs) {
        let closed = k_eval(&canonical, rho, kind, x, z)?;
        let oracle = k_solver_oracle(&data, rho, kind, x, z)
            .map_err(|e| e.to_string())?
            .values;
        worst = worst.max(k_dev(&closed, &oracle));
    }
    Ok(worst)
}

fn symmetry_residual(pair: &CMPair<f64>, rho: &RhoPoly<f64>, kind: Kind) -> Result<f64, String> {
    let s = pair_scale(pair);
    let xs = sample_points(s, 3);
    let zs = sample_points(s * 1.9, 3);
    let swapped = beta_kp(pair);
    let map = kind_map(rho, kind);
    let image = map.apply(pair).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (x, z) in xs.iter().zip(&zs) {
        let a = wilson_rational(pair, x, z).map_err(|e| e.to_string())?;
        let b = wilson_rational(&swapped, z, x).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).norm());
        let k1 = k_eval(pair, rho, kind, z, x)?;
        let k2 = k_eval(&image, rho, kind, x, z)?;
        worst = worst.max(k_dev(&k1, &k2));
    }
    Ok(worst)
}

fn kind_map<T: bispec::Real>(rho: &RhoPoly<T>, kind: Kind) -> InvolutionMap<T> {
    match kind {
        Kind::Airy => InvolutionMap::Airy(rho.clone()),
        Kind::Bessel => InvolutionMap::Bessel(rho.clone()),
    }
}

fn involutivity_residual<T: bispec::Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
) -> Result<f64, String> {
    let map = kind_map(rho, kind);
    let once = map.apply(pair).map_err(|e| e.to_string())?;
    let twice = map.apply(&once).map_err(|e| e.to_string())?;
    let dp = (twice.p() - pair.p()).norm_max();
    let dq = (twice.q() - pair.q()).norm_max();
    Ok(dp.max(dq))
}

fn a_identity_residual<T: bispec::Real>(
    pair: &CMPair<T>,
    rho: &RhoPoly<T>,
    kind: Kind,
    xs: &[Complex<T>],
) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for x in xs {
        worst = worst.max(verify_a_identity(pair, rho, kind, x).map_err(|e| e.to_string())?);
    }
    Ok(worst)
}

fn condition_suite(pair: &CMPair<f64>, rho: &RhoPoly<f64>, kind: Kind) -> Result<f64, String> {
    let data = canonicalize(pair).map_err(|e| e.to_string())?;
    let s = pair_scale(pair);
    let xs = sample_points(s, 5);
    let res = condition_residual(&data, rho, kind, &xs).map_err(|e| e.to_string())?;
    Ok(res.iter().flatten().copied().fold(0.0, f64::max))
}

pub fn run_float_suites(
    pair: &CMPair<f64>,
    rho: &RhoPoly<f64>,
    kind: Kind,
    tol: f64,
    seed: u64,
) -> Report {
    let s = pair_scale(pair);
    let xs = sample_points(s, 3);
    let map = kind_map(rho, kind);
    let suites = vec![
        record(rank_residual(pair), "rank", tol),
        record(oracle_residual(pair, rho, kind), "oracle-agreement", tol),
        record(symmetry_residual(pair, rho, kind), "symmetry", tol),
        record(involutivity_residual(pair, rho, kind), "involutivity", tol),
        record(
            antisymplectic_residual(&map, pair, 10, seed).map_err(|e| e.to_string()),
            "antisymplecticity",
            // finite-difference pushforward floor
            tol.max(1e-5),
        ),
        record(a_identity_residual(pair, rho, kind, &xs), "a-identity", tol),
        record(
            condition_suite(pair, rho, kind),
            "condition-residual",
            tol.max(1e-8),
        ),
    ];
    Report { suites }
}

pub fn run_exact_suites(
    pair: &CMPair<BigRational>,
    rho: &RhoPoly<BigRational>,
    kind: Kind,
) -> Report {
    let xs: Vec<Complex<BigRational>> = [(7, 1), (-5, 3), (9, -2)]
        .iter()
        .map(|&(re, im)| bispec::scalar::cplx::<BigRational>(re, im))
        .collect();
    let zs: Vec<Complex<BigRational>> = [(11, 2), (-8, 5), (13, -3)]
        .iter()
        .map(|&(re, im)| bispec::scalar::cplx::<BigRational>(re, im))
        .collect();
    let wilson = || -> Result<f64, String> {
        let swapped = beta_kp(pair);
        let mut worst = 0.0f64;
        for (x, z) in xs.iter().zip(&zs) {
            let a = wilson_rational(pair, x, z).map_err(|e| e.to_string())?;
            let b = wilson_rational(&swapped, z, x).map_err(|e| e.to_string())?;
            worst = worst.max((lower(&a) - lower(&b)).norm());
        }
        Ok(worst)
    };
    let suites = vec![
        record(rank_residual(pair), "rank", 0.0),
        record(wilson(), "symmetry", 0.0),
        record(involutivity_residual(pair, rho, kind), "involutivity", 0.0),
        record(a_identity_residual(pair, rho, kind, &xs), "a-identity", 0.0),
    ];
    Report { suites }
}

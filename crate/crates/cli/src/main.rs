//! Command-line front end: pair generation, Baker-grid evaluation,
//! involutions, verification suites, flow simulation, Hamiltonians.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage/domain error.

mod report;
mod rhoarg;

use anyhow::{anyhow, bail, Context, Result};
use bispec::baker::{airy_k, bessel_k};
use bispec::cm::{from_spectral_data, random_pair, random_spectral_data, CMPair, SpectralData};
use bispec::dynamics::{hamiltonian, pole_trajectories, FlowSpec};
use bispec::involution::InvolutionMap;
use bispec::io;
use bispec::rho::{Kind, RhoPoly};
use bispec::C64;
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rhoarg::RhoArgs;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bispec",
    version,
    about = "Calogero-Moser pairs and bispectral involutions"
)]
struct Cli {
    /// Arithmetic backend.
    #[arg(long, global = true, value_enum, default_value_t = Backend::Float)]
    backend: Backend,
    /// Verification tolerance (ignored on the exact backend: exact zero).
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// RNG seed for generation and randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output path; commands with sidecars derive sidecar names from it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Backend {
    Float,
    Exact,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MapArg {
    Kp,
    Airy,
    Bessel,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random canonical pair (JSON) plus its spectral sidecar.
    Gen {
        /// Particle count.
        #[arg(long)]
        n: usize,
    },
    /// Evaluate the k-vector on an (x, z) grid; CSV plus JSON sidecar.
    Baker {
        /// CMPair JSON file.
        pair: PathBuf,
        #[command(flatten)]
        rho: RhoArgs,
        /// x samples as "re,im" (repeatable).
        #[arg(long = "x", value_name = "RE,IM", allow_hyphen_values = true,
              default_values_t = [String::from("0.31,0.17")])]
        xs: Vec<String>,
        /// z samples as "re,im" (repeatable).
        #[arg(long = "z", value_name = "RE,IM", allow_hyphen_values = true,
              default_values_t = ["8,1.5".to_string(), "16,3".to_string(), "32,6".to_string(), "64,12".to_string()])]
        zs: Vec<String>,
    },
    /// Apply an involution to a pair file; writes a pair file.
    Involute {
        pair: PathBuf,
        #[arg(long, value_enum)]
        map: MapArg,
        #[command(flatten)]
        rho: RhoArgs,
    },
    /// Run identity suites against a pair; JSON report, exit status 0/1.
    Verify {
        /// CMPair JSON file; generated from --n/--seed when omitted.
        pair: Option<PathBuf>,
        /// Particle count when generating.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        rho: RhoArgs,
    },
    /// Simulate the m-th flow; trajectory CSV plus sidecar.
    Flow {
        pair: PathBuf,
        #[command(flatten)]
        rho: RhoArgs,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        t_start: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t_end: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Evaluate the Hamiltonian tr(Q-hat^m).
    Ham {
        pair: PathBuf,
        #[command(flatten)]
        rho: RhoArgs,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Gen { n } => cmd_gen(cli, *n).map(|_| true),
        Cmd::Baker { pair, rho, xs, zs } => cmd_baker(cli, pair, rho, xs, zs).map(|_| true),
        Cmd::Involute { pair, map, rho } => cmd_involute(cli, pair, *map, rho).map(|_| true),
        Cmd::Verify { pair, n, rho } => cmd_verify(cli, pair.as_deref(), *n, rho),
        Cmd::Flow {
            pair,
            rho,
            m,
            t_start,
            t_end,
            steps,
        } => cmd_flow(cli, pair, rho, *m, *t_start, *t_end, *steps).map(|_| true),
        Cmd::Ham { pair, rho, m } => cmd_ham(cli, pair, rho, *m).map(|_| true),
    }
}

fn parse_complex(s: &str) -> Result<C64> {
    let mut parts = s.split(',');
    let re: f64 = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .with_context(|| format!("bad complex number {s:?}"))?;
    let im: f64 = match parts.next() {
        Some(p) => p
            .trim()
            .parse()
            .with_context(|| format!("bad complex number {s:?}"))?,
        None => 0.0,
    };
    if parts.next().is_some() {
        bail!("bad complex number {s:?}: expected \"re\" or \"re,im\"");
    }
    Ok(C64::new(re, im))
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".sidecar.json");
    out.with_file_name(name)
}

fn out_path(cli: &Cli) -> Result<&Path> {
    cli.out
        .as_deref()
        .ok_or_else(|| anyhow!("this command requires --out"))
}

fn load_pair_f(path: &Path) -> Result<CMPair<f64>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(io::pair_from_json::<f64>(&value)?)
}

fn load_pair_q(path: &Path) -> Result<CMPair<BigRational>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(io::pair_from_json::<BigRational>(&value)?)
}

/// Exact pairs are rebuilt from lifted spectral data: the float entries of a
/// generated pair only satisfy the rank-one identity to roundoff, while the
/// dyadic-rational lambdas and alphas reproduce it exactly.
fn exact_random_pair(n: usize, seed: u64) -> CMPair<BigRational> {
    let data = SpectralData::<BigRational>::lift_from(&random_spectral_data(n, seed));
    from_spectral_data(&data).expect("distinct lifted spectral points")
}

fn cmd_gen(cli: &Cli, n: usize) -> Result<()> {
    if n == 0 {
        bail!("--n must be >= 1");
    }
    let out = out_path(cli)?;
    let data = random_spectral_data(n, cli.seed);
    let pair_json = match cli.backend {
        Backend::Float => io::pair_to_json(&random_pair(n, cli.seed))?,
        Backend::Exact => io::pair_to_json(&exact_random_pair(n, cli.seed))?,
    };
    write_output(out, &io::to_string_stable(&pair_json))?;
    let sidecar = json!({
        "command": "gen",
        "n": n,
        "seed": cli.seed,
        "backend": backend_name(cli.backend),
        "spectral": io::spectral_to_json(&data),
    });
    write_output(&sidecar_path(out), &io::to_string_stable(&sidecar))
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Float => "float",
        Backend::Exact => "exact",
    }
}

fn k_at(pair: &CMPair<f64>, rho: &RhoPoly<f64>, kind: Kind, x: &C64, z: &C64) -> Result<Vec<C64>> {
    let k = match kind {
        Kind::Airy => airy_k(pair, rho, x, z)?,
        Kind::Bessel => bessel_k(pair, rho, x, z)?,
    };
    Ok(k.values)
}

fn cmd_baker(
    cli: &Cli,
    pair_path: &Path,
    rho_args: &RhoArgs,
    xs: &[String],
    zs: &[String],
) -> Result<()> {
    if cli.backend == Backend::Exact {
        bail!("baker grid evaluation runs on the float backend");
    }
    let out = out_path(cli)?;
    let pair = load_pair_f(pair_path)?;
    let (rho, kind) = rho_args.resolve()?;
    let xs: Vec<C64> = xs.iter().map(|s| parse_complex(s)).collect::<Result<_>>()?;
    let zs: Vec<C64> = zs.iter().map(|s| parse_complex(s)).collect::<Result<_>>()?;
    let mut csv = String::from("x_re,x_im,z_re,z_im");
    for j in 0..rho.order() {
        write!(csv, ",k{j}_re,k{j}_im").unwrap();
    }
    csv.push('\n');
    for x in &xs {
        for z in &zs {
            let k = k_at(&pair, &rho, kind, x, z)
                .with_context(|| format!("k-vector at x={x}, z={z}"))?;
            write!(
                csv,
                "{},{},{},{}",
                fmt17(x.re),
                fmt17(x.im),
                fmt17(z.re),
                fmt17(z.im)
            )
            .unwrap();
            for v in &k {
                write!(csv, ",{},{}", fmt17(v.re), fmt17(v.im)).unwrap();
            }
            csv.push('\n');
        }
    }
    write_output(out, &csv)?;
    let sidecar = json!({
        "command": "baker",
        "pair": io::pair_to_json(&pair)?,
        "rho": rho_args.describe(&rho, kind),
        "backend": backend_name(cli.backend),
        "x": xs.iter().map(|v| json!([v.re, v.im])).collect::<Vec<_>>(),
        "z": zs.iter().map(|v| json!([v.re, v.im])).collect::<Vec<_>>(),
    });
    write_output(&sidecar_path(out), &io::to_string_stable(&sidecar))
}

fn cmd_involute(cli: &Cli, pair_path: &Path, map: MapArg, rho_args: &RhoArgs) -> Result<()> {
    let out = out_path(cli)?;
    let result_json = match cli.backend {
        Backend::Float => {
            let pair = load_pair_f(pair_path)?;
            let map = involution_map_f(map, rho_args)?;
            io::pair_to_json(&map.apply(&pair)?)?
        }
        Backend::Exact => {
            let pair = load_pair_q(pair_path)?;
            let map = involution_map_q(map, rho_args)?;
            io::pair_to_json(&map.apply(&pair)?)?
        }
    };
    write_output(out, &io::to_string_stable(&result_json))?;
    let sidecar = json!({
        "command": "involute",
        "input": pair_path.display().to_string(),
        "backend": backend_name(cli.backend),
        "map": map_name(map),
    });
    write_output(&sidecar_path(out), &io::to_string_stable(&sidecar))
}

fn map_name(m: MapArg) -> &'static str {
    match m {
        MapArg::Kp => "kp",
        MapArg::Airy => "airy",
        MapArg::Bessel => "bessel",
    }
}

fn involution_map_f(map: MapArg, rho_args: &RhoArgs) -> Result<InvolutionMap<f64>> {
    Ok(match map {
        MapArg::Kp => InvolutionMap::Kp,
        MapArg::Airy => {
            let (rho, kind) = rho_args.resolve()?;
            if kind != Kind::Airy {
                bail!("--map airy requires an Airy-normalized rho");
            }
            InvolutionMap::Airy(rho)
        }
        MapArg::Bessel => {
            let (rho, kind) = rho_args.resolve()?;
            if kind != Kind::Bessel {
                bail!("--map bessel requires a Bessel-normalized rho");
            }
            InvolutionMap::Bessel(rho)
        }
    })
}

fn involution_map_q(map: MapArg, rho_args: &RhoArgs) -> Result<InvolutionMap<BigRational>> {
    Ok(match involution_map_f(map, rho_args)? {
        InvolutionMap::Kp => InvolutionMap::Kp,
        InvolutionMap::Airy(rho) => InvolutionMap::Airy(RhoPoly::lift_from(&rho)),
        InvolutionMap::Bessel(rho) => InvolutionMap::Bessel(RhoPoly::lift_from(&rho)),
    })
}

fn cmd_verify(cli: &Cli, pair_path: Option<&Path>, n: usize, rho_args: &RhoArgs) -> Result<bool> {
    let (rho, kind) = rho_args.resolve()?;
    let report = match cli.backend {
        Backend::Float => {
            let pair = match pair_path {
                Some(p) => load_pair_f(p)?,
                None => {
                    if n == 0 {
                        bail!("--n must be >= 1");
                    }
                    random_pair(n, cli.seed)
                }
            };
            report::run_float_suites(&pair, &rho, kind, cli.tol, cli.seed)
        }
        Backend::Exact => {
            let pair = match pair_path {
                Some(p) => load_pair_q(p)?,
                None => {
                    if n == 0 {
                        bail!("--n must be >= 1");
                    }
                    exact_random_pair(n, cli.seed)
                }
            };
            report::run_exact_suites(&pair, &RhoPoly::lift_from(&rho), kind)
        }
    };
    let text = io::to_string_stable(&report.to_json(backend_name(cli.backend), cli.tol));
    print!("{text}");
    if let Some(out) = cli.out.as_deref() {
        write_output(out, &text)?;
    }
    Ok(report.pass())
}

fn cmd_flow(
    cli: &Cli,
    pair_path: &Path,
    rho_args: &RhoArgs,
    m: usize,
    t_start: f64,
    t_end: f64,
    steps: usize,
) -> Result<()> {
    if cli.backend == Backend::Exact {
        bail!("flow simulation runs on the float backend (pole extraction needs eigenvalues)");
    }
    let out = out_path(cli)?;
    let pair = load_pair_f(pair_path)?;
    let (rho, kind) = rho_args.resolve()?;
    if steps == 0 {
        bail!("--steps must be >= 1");
    }
    let t_grid: Vec<f64> = if steps == 1 {
        vec![t_start]
    } else {
        (0..steps)
            .map(|k| t_start + (t_end - t_start) * k as f64 / (steps - 1) as f64)
            .collect()
    };
    let spec = FlowSpec::new(m, t_grid)?;
    if kind == Kind::Bessel {
        // fail fast on singular Q instead of per-point error rows
        pair.q()
            .inverse()
            .map_err(|_| anyhow!("Bessel flow requires invertible Q"))?;
    }
    let traj = pole_trajectories(&pair, &rho, kind, &spec)?;
    let n = pair.n();
    let mut csv = String::from("t");
    for i in 1..=n {
        write!(csv, ",pole{i}_re,pole{i}_im").unwrap();
    }
    csv.push_str(",collision_flag,error\n");
    for (k, t) in traj.times.iter().enumerate() {
        write!(csv, "{}", fmt17(*t)).unwrap();
        if traj.poles[k].len() == n {
            for p in &traj.poles[k] {
                write!(csv, ",{},{}", fmt17(p.re), fmt17(p.im)).unwrap();
            }
        } else {
            for _ in 0..n {
                csv.push_str(",,");
            }
        }
        let flag = if traj.collision_flags[k] { 1 } else { 0 };
        let err = traj.point_errors[k].as_deref().unwrap_or("");
        writeln!(csv, ",{flag},{err}").unwrap();
    }
    write_output(out, &csv)?;
    let sidecar = json!({
        "command": "flow",
        "pair": io::pair_to_json(&pair)?,
        "rho": rho_args.describe(&rho, kind),
        "m": m,
        "t_start": t_start,
        "t_end": t_end,
        "steps": steps,
        "backend": backend_name(cli.backend),
        "matching": "greedy nearest-neighbor; flagged when displacement exceeds half the previous minimum pole gap or the gap is within 10x the displacement",
    });
    write_output(&sidecar_path(out), &io::to_string_stable(&sidecar))
}

fn cmd_ham(cli: &Cli, pair_path: &Path, rho_args: &RhoArgs, m: usize) -> Result<()> {
    let (rho, kind) = rho_args.resolve()?;
    let value_json = match cli.backend {
        Backend::Float => {
            let pair = load_pair_f(pair_path)?;
            let h = hamiltonian(&pair, &rho, kind, m)?;
            println!("{} {}", fmt17(h.re), fmt17(h.im));
            json!([h.re, h.im])
        }
        Backend::Exact => {
            let pair = load_pair_q(pair_path)?;
            let h = hamiltonian(&pair, &RhoPoly::lift_from(&rho), kind, m)?;
            println!("{} {}", h.re, h.im);
            json!([h.re.to_string(), h.im.to_string()])
        }
    };
    if let Some(out) = cli.out.as_deref() {
        let doc = json!({
            "command": "ham",
            "m": m,
            "rho": rho_args.describe(&rho, kind),
            "backend": backend_name(cli.backend),
            "value": value_json,
        });
        write_output(out, &io::to_string_stable(&doc))?;
    }
    Ok(())
}

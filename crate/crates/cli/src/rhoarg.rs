use anyhow::{bail, Context, Result};
use bispec::rho::{Kind, RhoPoly};
use bispec::C64;
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Airy,
    Bessel,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Airy => Kind::Airy,
            KindArg::Bessel => Kind::Bessel,
        }
    }
}

#[derive(Args)]
pub struct RhoArgs {
    /// Preset: "airy2" or "bessel2".
    #[arg(long, default_value = "airy2")]
    rho: String,
    /// Explicit coefficients a_0;a_1;...;a_{r-1}, each "re,im" or "re";
    /// overrides --rho and requires --kind.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    rho_coeffs: Option<String>,
    /// Operator kind accompanying --rho-coeffs.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Accept coefficients that break the subleading-term normalization.
    #[arg(long)]
    no_validate_rho: bool,
}

impl RhoArgs {
    pub fn resolve(&self) -> Result<(RhoPoly<f64>, Kind)> {
        if let Some(list) = &self.rho_coeffs {
            let kind: Kind = self
                .kind
                .context("--rho-coeffs requires --kind {airy,bessel}")?
                .into();
            let a = parse_coeff_list(list)?;
            let rho = if self.no_validate_rho {
                eprintln!("warning: skipping rho normalization check");
                RhoPoly::new_unchecked(kind, a)?
            } else {
                RhoPoly::new(kind, a)?
            };
            return Ok((rho, kind));
        }
        match self.rho.as_str() {
            "airy2" => Ok((RhoPoly::airy2(), Kind::Airy)),
            "bessel2" => Ok((RhoPoly::bessel2(), Kind::Bessel)),
            other => bail!("unknown rho preset {other:?}; use airy2, bessel2, or --rho-coeffs"),
        }
    }

    pub fn describe(&self, rho: &RhoPoly<f64>, kind: Kind) -> Value {
        let a: Vec<Value> = (0..rho.order())
            .map(|i| {
                let c = rho.a(i);
                json!([c.re, c.im])
            })
            .collect();
        json!({
            "kind": kind.name(),
            "order": rho.order(),
            "a": a,
            "validated": !self.no_validate_rho,
        })
    }
}

fn parse_coeff_list(list: &str) -> Result<Vec<C64>> {
    list.split(';')
        .map(|part| {
            let mut it = part.split(',');
            let re: f64 = it
                .next()
                .unwrap_or("")
                .trim()
                .parse()
                .with_context(|| format!("bad coefficient {part:?}"))?;
            let im: f64 = match it.next() {
                Some(s) => s
                    .trim()
                    .parse()
                    .with_context(|| format!("bad coefficient {part:?}"))?,
                None => 0.0,
            };
            if it.next().is_some() {
                bail!("bad coefficient {part:?}: expected \"re\" or \"re,im\"");
            }
            Ok(C64::new(re, im))
        })
        .collect()
}

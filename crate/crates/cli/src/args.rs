use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use fkdv_core::arith::{parse_rational, Rational};
use fkdv_core::closed_form::Branch;
use fkdv_core::numeric::GridSpec;
use fkdv_core::params::{Preset, RationalParams};
use num_bigint::BigInt;

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Named coefficient set: kk, sk, cdg, lax or ito.
    #[arg(long, conflicts_with_all = ["alpha", "beta", "gamma", "omega"])]
    pub preset: Option<Preset>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub alpha: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub beta: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub gamma: Option<Rational>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub omega: Option<Rational>,
}

impl ParamArgs {
    pub fn is_empty(&self) -> bool {
        self.preset.is_none()
            && [&self.alpha, &self.beta, &self.gamma, &self.omega]
                .iter()
                .all(|v| v.is_none())
    }

    pub fn resolve(&self) -> Result<RationalParams> {
        if let Some(p) = self.preset {
            return Ok(RationalParams::preset(p));
        }
        match (&self.alpha, &self.beta, &self.gamma, &self.omega) {
            (Some(a), Some(b), Some(g), Some(w)) => Ok(RationalParams::new(
                a.clone(),
                b.clone(),
                g.clone(),
                w.clone(),
            )?),
            _ => bail!(UsageError(
                "give --preset or all four of --alpha --beta --gamma --omega".into()
            )),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 2001)]
    pub nx: usize,
    /// Comma-separated time slices.
    #[arg(
        long = "t",
        value_delimiter = ',',
        default_value = "0,1",
        allow_hyphen_values = true
    )]
    pub t_values: Vec<f64>,
    /// Pole-exclusion radius; defaults to 1% of the pole spacing.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

impl GridArgs {
    pub fn spec(&self) -> Result<GridSpec> {
        if self.nx == 0 || self.x_max < self.x_min || self.t_values.is_empty() {
            bail!(UsageError(
                "grid needs nx > 0, x-max >= x-min and at least one t".into()
            ));
        }
        let g = GridSpec::new(self.x_min, self.x_max, self.nx, self.t_values.clone());
        Ok(match self.epsilon {
            Some(e) if e > 0.0 => g.with_epsilon(e),
            Some(_) => bail!(UsageError("epsilon must be positive".into())),
            None => g,
        })
    }
}

/// Selects one closed-form solution.
#[derive(Args, Debug, Clone)]
pub struct SolutionArgs {
    /// One of the twelve catalogued profiles, 1..=12.
    #[arg(long, conflicts_with_all = ["family", "branch"])]
    pub printed: Option<u8>,
    #[arg(long, requires = "branch")]
    pub family: Option<u8>,
    /// tan, cot, tanh, coth, csch or rational.
    #[arg(long, value_parser = branch_arg)]
    pub branch: Option<Branch>,
    /// Defaults to 1 on trigonometric branches and -1 on hyperbolic ones.
    #[arg(long, value_parser = real_arg, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, value_enum, default_value_t = RootChoice::Principal)]
    pub root: RootChoice,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    Principal,
    Conjugate,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Destination file; defaults to `$FKDV_OUT_DIR/<command>.<ext>` or stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, env = "FKDV_OUT_DIR", hide_env_values = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Bad configuration detected after clap parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// `p/q`, an integer, or a plain decimal such as `-0.25`, read exactly.
pub fn exact_number(s: &str) -> Result<Rational> {
    if let Ok(r) = parse_rational(s) {
        return Ok(r);
    }
    let t = s.trim();
    let (neg, body) = t.strip_prefix('-').map_or((false, t), |b| (true, b));
    let (int, frac) = body
        .split_once('.')
        .with_context(|| UsageError(format!("not a number: {s:?}")))?;
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        bail!(UsageError(format!("not a number: {s:?}")));
    }
    let digits: BigInt = format!("{int}{frac}").parse().context("decimal digits")?;
    let den = BigInt::from(10u8).pow(frac.len() as u32);
    let r = Rational::new(digits, den);
    Ok(if neg { -r } else { r })
}

/// A float, or anything [`exact_number`] accepts.
pub fn real_arg(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .or_else(|_| exact_number(s).map(|r| fkdv_core::arith::to_f64(&r)))
        .map_err(|e| e.to_string())
}

pub fn branch_arg(s: &str) -> Result<Branch, String> {
    s.parse()
        .map_err(|e: fkdv_core::error::ParseError| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use fkdv_core::arith::ratio;

    #[test]
    fn decimals_are_read_exactly() {
        assert_eq!(exact_number("-0.25").unwrap(), ratio(-1, 4));
        assert_eq!(exact_number("3/6").unwrap(), ratio(1, 2));
        assert_eq!(exact_number("2.").unwrap(), ratio(2, 1));
        assert!(exact_number("1e3").is_err());
        assert!(exact_number(".").is_err());
        assert_eq!(real_arg("1/2"), Ok(0.5));
        assert_eq!(real_arg("-1e-1"), Ok(-0.1));
    }
}

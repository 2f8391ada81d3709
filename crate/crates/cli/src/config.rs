//! Run configuration shared by every subcommand.

use std::path::PathBuf;

use bowcalc_core::bowcore::Chamber;
use bowcalc_core::expr::{Flavor, Precision};
use bowcalc_core::stab::SlopeConfig;
use bowcalc_core::{Error, Result};
use clap::{Args, ValueEnum};
use num_complex::Complex64;

/// Output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON.
    Json,
    /// LaTeX (mirror identities only).
    Latex,
    /// Human-readable text.
    Text,
}

/// Flags accepted by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct GlobalArgs {
    /// Flavor: H (cohomology), K (K-theory) or E (elliptic).
    #[arg(long, global = true, default_value = "E")]
    pub flavor: String,
    /// Chamber permutation, e.g. "2,3,1" (identity when absent).
    #[arg(long, global = true)]
    pub chamber: Option<String>,
    /// Slopes "p/q,..." (drawn from the seed when absent).
    #[arg(long, global = true)]
    pub slopes: Option<String>,
    /// Nomes "re+imi,...".
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// Random points per nome.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Relative tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed of all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Validated settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Flavor.
    pub flavor: Flavor,
    /// Chamber, when given.
    pub chamber: Option<Chamber>,
    /// Slopes, when given.
    pub slopes: Option<SlopeConfig>,
    /// Nomes, when given.
    pub q: Option<Vec<Complex64>>,
    /// Points per nome, when given.
    pub points: Option<usize>,
    /// Tolerance, when given.
    pub tol: Option<f64>,
    /// Seed.
    pub seed: u64,
    /// Output format.
    pub format: Format,
    /// Output path.
    pub out: Option<PathBuf>,
    /// Evaluator precision from `BOWCALC_PRECISION`.
    pub precision: Precision,
}

impl RunConfig {
    /// Parses and validates the global flags.
    pub fn from_args(a: &GlobalArgs) -> Result<RunConfig> {
        let flavor: Flavor = a.flavor.parse()?;
        let chamber = a.chamber.as_deref().map(Chamber::parse).transpose()?;
        let slopes = a.slopes.as_deref().map(SlopeConfig::parse).transpose()?;
        let q = a.q.as_deref().map(parse_nomes).transpose()?;
        if let Some(t) = a.tol {
            if !(t > 0.0) {
                return Err(Error::Input(format!("tolerance must be positive, got {t}")));
            }
        }
        if a.points == Some(0) {
            return Err(Error::Input("--points must be at least 1".into()));
        }
        Ok(RunConfig {
            flavor,
            chamber,
            slopes,
            q,
            points: a.points,
            tol: a.tol,
            seed: a.seed,
            format: a.format,
            out: a.out.clone(),
            precision: Precision::from_env()?,
        })
    }

    /// The chamber, defaulting to the identity on `n` letters.
    pub fn chamber_or_identity(&self, n: usize) -> Result<Chamber> {
        match &self.chamber {
            Some(c) if c.n() != n => Err(Error::Input(format!("chamber {c} does not have {n} entries"))),
            Some(c) => Ok(c.clone()),
            None => Ok(Chamber::identity(n)),
        }
    }
}

/// Parses `"0.1, 0.1+0.1i, -0.2i"`; every nome must satisfy `|q| < 1`.
pub fn parse_nomes(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let q = parse_complex(part)?;
        if !(q.norm() < 1.0) {
            return Err(Error::Input(format!("nome {part} is not inside the unit disk")));
        }
        out.push(q);
    }
    if out.is_empty() {
        return Err(Error::Input("--q needs at least one nome".into()));
    }
    Ok(out)
}

/// Parses `re`, `imi`, `re+imi` or `re-imi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad complex number `{s}`"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // The split point is the last sign that does not belong to an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.3").unwrap(), Complex64::new(0.3, 0.0));
        assert_eq!(parse_complex("0.1+0.1i").unwrap(), Complex64::new(0.1, 0.1));
        assert_eq!(parse_complex("0.1-0.2i").unwrap(), Complex64::new(0.1, -0.2));
        assert_eq!(parse_complex("-0.5i").unwrap(), Complex64::new(0.0, -0.5));
        assert_eq!(parse_complex("1e-2+1e-3i").unwrap(), Complex64::new(1e-2, 1e-3));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn nomes_outside_the_disk_are_rejected() {
        assert!(parse_nomes("0.5,1.0").is_err());
        assert_eq!(parse_nomes("0.05, 0.1+0.1i").unwrap().len(), 2);
    }
}

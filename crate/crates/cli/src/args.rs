use ghz_teleport_core::{Outcome, OutcomeSelector, RuleVariant, UnknownCoeffs};
use num_complex::Complex64;

use crate::fail::Failure;

/// Environment variable holding the seed used when `--seed` is absent.
pub const SEED_ENV: &str = "GHZ_TELEPORT_SEED";

/// Largest `| |alpha|^2 + |beta|^2 - 1 |` that is silently fixed up.
pub const RENORMALIZE_LIMIT: f64 = 1e-6;

/// Parses `re,im` (or a bare real part).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("expected `re,im`, got {s:?}"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(number(re)?, number(im)?)),
        None => Ok(Complex64::new(number(s)?, 0.0)),
    }
}

/// Normalized coefficients; prints a warning when a small rescale was needed.
pub fn coeffs(alpha: Complex64, beta: Complex64) -> Result<UnknownCoeffs, Failure> {
    let (c, error) = UnknownCoeffs::renormalized(alpha, beta, RENORMALIZE_LIMIT).map_err(|_| {
        Failure::Usage(format!(
            "|alpha|^2 + |beta|^2 = {} is not 1 (tolerance {RENORMALIZE_LIMIT:e})",
            alpha.norm_sqr() + beta.norm_sqr()
        ))
    })?;
    if error > 1e-12 {
        eprintln!("warning: coefficients renormalized (norm^2 was off by {error:.3e})");
    }
    Ok(c)
}

/// `--seed`, else the environment variable, else 0.
pub fn resolve_seed(seed: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(Failure::Usage(format!("{SEED_ENV}: {e}"))),
    }
}

/// A forced outcome `k` (checked against `count`) or a seeded draw.
pub fn selector(
    seed: Option<u64>,
    outcome: Option<usize>,
    count: usize,
) -> Result<(OutcomeSelector, Option<u64>), Failure> {
    match (outcome, seed) {
        (Some(_), Some(_)) => Err(Failure::Usage(String::from(
            "--seed and --outcome are mutually exclusive",
        ))),
        (Some(k), None) if (1..=count).contains(&k) => {
            Ok((OutcomeSelector::Forced(Outcome::from_k(k)), None))
        }
        (Some(k), None) => Err(Failure::Usage(format!(
            "outcome {k} is outside 1..={count}"
        ))),
        (None, seed) => {
            let s = resolve_seed(seed)?;
            Ok((OutcomeSelector::Seeded(s), Some(s)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VariantArg {
    Main,
    Alt,
}

impl VariantArg {
    pub fn rule(self) -> RuleVariant {
        match self {
            VariantArg::Main => RuleVariant::Main,
            VariantArg::Alt => RuleVariant::Alternative,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VariantArg::Main => "main",
            VariantArg::Alt => "alt",
        }
    }
}

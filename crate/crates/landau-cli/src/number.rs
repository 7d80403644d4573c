//! Parameter values given as integers, decimals or "p/q".

use anyhow::{anyhow, bail, Result};
use landau::ModelParams64;
use num_rational::Ratio;

/// A parsed number with its exact rational value when the text had one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Number {
    pub value: f64,
    pub exact: Option<Ratio<i64>>,
}

impl Number {
    pub fn from_f64(value: f64) -> Self {
        Self { value, exact: None }
    }
}

impl std::fmt::Display for Number {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.exact {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "{}", self.value),
        }
    }
}

fn decimal(s: &str) -> Option<Ratio<i64>> {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 15 {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numer: i64 = format!("{int}{frac}").parse().ok()?;
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let q = Ratio::new(numer, denom);
    Some(if neg { -q } else { q })
}

/// Parses "3", "-0.25", "5/6" exactly and anything else `f64` accepts
/// (e.g. "1e-3") as a float.
pub fn parse_number(s: &str) -> Result<Number> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| anyhow!("bad numerator in {s:?}"))?;
        let q: i64 = q.trim().parse().map_err(|_| anyhow!("bad denominator in {s:?}"))?;
        if q == 0 {
            bail!("zero denominator in {s:?}");
        }
        let r = Ratio::new(p, q);
        return Ok(Number { value: p as f64 / q as f64, exact: Some(r) });
    }
    if let Some(r) = decimal(s) {
        return Ok(Number { value: *r.numer() as f64 / *r.denom() as f64, exact: Some(r) });
    }
    let value: f64 = s.parse().map_err(|_| anyhow!("not a number: {s:?}"))?;
    if !value.is_finite() {
        bail!("not a finite number: {s:?}");
    }
    Ok(Number::from_f64(value))
}

/// Model parameters with the flux quantization 2β/κ ∈ ℤ enforced, exactly
/// when both inputs are rational.
pub fn quantized_params(kappa: Number, beta: Number) -> Result<ModelParams64> {
    let params = match (kappa.exact, beta.exact) {
        (Some(k), Some(b)) => ModelParams64::exact(k, b),
        _ => ModelParams64::new(kappa.value, beta.value),
    };
    params.map_err(|e| anyhow!("{e}; the field must satisfy 2β/κ ∈ ℤ when κ ≠ 0"))
}

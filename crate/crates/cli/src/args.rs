//! Integer and range flags. Everything is parsed as an arbitrary-precision
//! integer first, then narrowed with a usage error if it does not fit.

use std::str::FromStr;

use flecklab::arith::{primes_in, Prime};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::CliError;

pub fn big(flag: &str, s: &str) -> Result<BigInt, CliError> {
    BigInt::from_str(s.trim())
        .map_err(|_| CliError::Usage(format!("--{flag}: `{s}` is not an integer")))
}

pub fn nonneg(flag: &str, s: &str) -> Result<u64, CliError> {
    let v = big(flag, s)?;
    if v.sign() == num_bigint::Sign::Minus {
        return Err(CliError::Usage(format!("--{flag} must be >= 0, got {v}")));
    }
    v.to_u64()
        .ok_or_else(|| CliError::Usage(format!("--{flag}: {v} is too large")))
}

pub fn signed(flag: &str, s: &str) -> Result<i64, CliError> {
    let v = big(flag, s)?;
    v.to_i64()
        .ok_or_else(|| CliError::Usage(format!("--{flag}: {v} is too large")))
}

/// `lo..hi` (inclusive) or a single value.
fn split(s: &str) -> (&str, &str) {
    match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    }
}

pub fn range_u64(flag: &str, s: &str) -> Result<(u64, u64), CliError> {
    let (lo, hi) = split(s);
    let (lo, hi) = (nonneg(flag, lo)?, nonneg(flag, hi)?);
    if lo > hi {
        return Err(CliError::Usage(format!("--{flag}: empty range {s}")));
    }
    Ok((lo, hi))
}

pub fn range_i64(flag: &str, s: &str) -> Result<(i64, i64), CliError> {
    let (lo, hi) = split(s);
    let (lo, hi) = (signed(flag, lo)?, signed(flag, hi)?);
    if lo > hi {
        return Err(CliError::Usage(format!("--{flag}: empty range {s}")));
    }
    Ok((lo, hi))
}

pub fn range_u32(flag: &str, s: &str) -> Result<(u32, u32), CliError> {
    let (lo, hi) = range_u64(flag, s)?;
    let narrow = |v: u64| {
        u32::try_from(v).map_err(|_| CliError::Usage(format!("--{flag}: {v} is too large")))
    };
    Ok((narrow(lo)?, narrow(hi)?))
}

/// A single prime, or every prime in a range.
pub fn primes(s: &str) -> Result<Vec<Prime>, CliError> {
    if !s.contains("..") {
        return Ok(vec![Prime::new(nonneg("p", s)?)?]);
    }
    let (lo, hi) = range_u64("p", s)?;
    let ps = primes_in(lo, hi);
    if ps.is_empty() {
        return Err(CliError::Usage(format!("--p: no primes in {s}")));
    }
    Ok(ps)
}

//! Direct evaluation of the alternating binomial sums `C_m(n,r)` and the
//! (generalized) Fleck quotients obtained from them by exact division.
//!
//! Everything here is brute force over exact integers. The closed forms and
//! the verification harness are checked against these values.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{residue, Prime, PrimePower};
use crate::error::{FleckError, Result};

pub const DEFAULT_MAX_N: u64 = 1_000_000;

static MAX_N: AtomicU64 = AtomicU64::new(DEFAULT_MAX_N);

/// Current upper bound on `n` for direct summation.
pub fn max_n() -> u64 {
    MAX_N.load(Ordering::Relaxed)
}

/// Replaces the upper bound on `n` for direct summation (process-wide).
pub fn set_max_n(limit: u64) {
    MAX_N.store(limit, Ordering::Relaxed);
}

fn check_limit(n: u64) -> Result<()> {
    let limit = max_n();
    if n > limit {
        return Err(FleckError::ResourceLimit { n, limit });
    }
    Ok(())
}

/// `C_m(n,r) = Σ_{0≤k≤n, k≡r (mod m)} binom(n,k)(-1)^k`.
///
/// Walks `k = {r}_m, {r}_m + m, …`, updating the binomial by a block
/// multiply/divide at each stride.
pub fn alternating_sum(m: u64, n: u64, r: i64) -> Result<BigInt> {
    if m == 0 {
        return Err(FleckError::PreconditionViolation(
            "modulus of C_m must be at least 1".into(),
        ));
    }
    check_limit(n)?;
    let start = residue(r, m);
    if start > n {
        return Ok(BigInt::zero());
    }
    let mut term = crate::arith::binom(n, start);
    let mut k = start;
    let mut sum = BigInt::zero();
    loop {
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if k + m > n {
            break;
        }
        // binom(n, k+m) = binom(n, k) · (n-k)···(n-k-m+1) / ((k+1)···(k+m))
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for j in 0..m {
            num *= n - k - j;
            den *= k + j + 1;
        }
        term = term * num / den;
        k += m;
    }
    Ok(sum)
}

/// `C_m(n, r)` for every `r` in `[0, m)` from one pass over the binomial row.
pub fn alternating_sum_row(m: u64, n: u64) -> Result<Vec<BigInt>> {
    if m == 0 {
        return Err(FleckError::PreconditionViolation(
            "modulus of C_m must be at least 1".into(),
        ));
    }
    check_limit(n)?;
    let mut row = vec![BigInt::zero(); m as usize];
    let mut term = BigInt::one();
    for k in 0..=n {
        let slot = &mut row[(k % m) as usize];
        if k % 2 == 0 {
            *slot += &term;
        } else {
            *slot -= &term;
        }
        if k < n {
            term *= n - k;
            term /= k + 1;
        }
    }
    Ok(row)
}

/// Fleck's exponent `⌊(n-1)/(p-1)⌋`; equals `-1` at `n = 0`.
pub fn fleck_floor(p: Prime, n: u64) -> i64 {
    Integer::div_floor(&(n as i64 - 1), &(p.get() as i64 - 1))
}

/// Weisman's exponent `⌊(n - p^(a-1))/φ(p^a)⌋`, possibly negative.
pub fn weisman_floor(pp: PrimePower, n: u64) -> i64 {
    Integer::div_floor(
        &(n as i64 - pp.lower_power() as i64),
        &(pp.totient() as i64),
    )
}

/// An exact (generalized) Fleck quotient with the data that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FleckValue {
    pub value: BigInt,
    /// `C_{p^a}(n,r)` before normalization.
    pub raw_sum: BigInt,
    /// The exponent `e` with `value = (-p)^(-e) C + bracket`.
    pub floor_exponent: i64,
    /// The Iverson term `[[n < p^(a-1)]]` (for `a = 1`: `[[n = 0]]`).
    pub bracket_correction: u8,
}

impl FleckValue {
    /// True when normalization divided by a power of `-p`; false when the
    /// floor was negative and the raw sum was multiplied instead.
    pub fn divided(&self) -> bool {
        self.floor_exponent >= 0
    }

    pub fn residue_mod(&self, m: u64) -> u64 {
        self.value
            .mod_floor(&BigInt::from(m))
            .try_into()
            .expect("residue fits in u64")
    }
}

fn normalize(pp: PrimePower, n: u64, r: i64, raw_sum: BigInt) -> Result<FleckValue> {
    let exponent = weisman_floor(pp, n);
    let bracket_correction = u8::from(n < pp.lower_power());
    let minus_p = -pp.p().to_bigint();
    let quotient = if exponent >= 0 {
        let divisor = num_traits::pow(minus_p, exponent as usize);
        let (q, rem) = raw_sum.div_rem(&divisor);
        if !rem.is_zero() {
            return Err(FleckError::IntegralityViolation {
                p: pp.p().get(),
                modulus: pp.modulus(),
                n,
                r,
                raw_sum,
                exponent,
            });
        }
        q
    } else {
        &raw_sum * num_traits::pow(minus_p, (-exponent) as usize)
    };
    Ok(FleckValue {
        value: quotient + bracket_correction,
        raw_sum,
        floor_exponent: exponent,
        bracket_correction,
    })
}

/// `F_p(n,r) = (-p)^(-⌊(n-1)/(p-1)⌋) C_p(n,r) + [[n=0]]`.
pub fn fleck_quotient(p: Prime, n: u64, r: i64) -> Result<FleckValue> {
    generalized_fleck(PrimePower::from(p), n, r)
}

/// `F_{p^a}(n,r) = (-p)^(-⌊(n-p^(a-1))/φ(p^a)⌋) C_{p^a}(n,r) + [[n < p^(a-1)]]`.
pub fn generalized_fleck(pp: PrimePower, n: u64, r: i64) -> Result<FleckValue> {
    let raw = alternating_sum(pp.modulus(), n, r)?;
    normalize(pp, n, r, raw)
}

/// `F_{p^a}(n, r)` for every `r` in `[0, p^a)`.
pub fn fleck_row(pp: PrimePower, n: u64) -> Result<Vec<FleckValue>> {
    alternating_sum_row(pp.modulus(), n)?
        .into_iter()
        .enumerate()
        .map(|(r, raw)| normalize(pp, n, r as i64, raw))
        .collect()
}

/// `F_p(n, r) mod p` for every `r` in `[0, p)`.
pub fn fleck_row_mod_p(p: Prime, n: u64) -> Result<Vec<u64>> {
    Ok(fleck_row(p.into(), n)?
        .iter()
        .map(|v| v.residue_mod(p.get()))
        .collect())
}

/// The triple `(p^a, n, r)` a Fleck quotient is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FleckQuery {
    pub pp: PrimePower,
    pub n: u64,
    pub r: i64,
}

impl FleckQuery {
    pub fn evaluate(&self) -> Result<FleckValue> {
        generalized_fleck(self.pp, self.n, self.r)
    }
}

fn inverse_mod_prime(x: u64, p: u64) -> u64 {
    // Fermat inversion; x is a unit
    let mut base = (x % p) as u128;
    let mut e = p - 2;
    let mut acc = 1u128;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// One step of the mod-`p` recurrence
/// `F_p(n,r) ≡ -Σ_{j=1}^{p-1} (1/j) Σ_{i=0}^{j-1} F_p(n-p+1, r-i)`.
///
/// `lower[s]` holds `F_p(n-p+1, s) mod p` for `s` in `[0, p)`.
pub fn recurrence_mod_p(p: Prime, n: u64, r: i64, lower: &[u64]) -> Result<u64> {
    let pv = p.get();
    if n < pv {
        return Err(FleckError::PreconditionViolation(format!(
            "recurrence needs n >= p (n = {n}, p = {pv})"
        )));
    }
    if lower.len() as u64 != pv {
        return Err(FleckError::PreconditionViolation(format!(
            "expected {pv} lower residues, got {}",
            lower.len()
        )));
    }
    let m = pv as u128;
    let mut inner = 0u128;
    let mut acc = 0u128;
    for j in 1..pv {
        inner = (inner + lower[residue(r - (j as i64 - 1), pv) as usize] as u128) % m;
        acc = (acc + inverse_mod_prime(j, pv) as u128 * inner) % m;
    }
    Ok(((m - acc) % m) as u64)
}

/// Rows `F_p(n, ·) mod p` for `n = 0..=n_max`, direct below `p` and by the
/// recurrence from there on.
pub fn recurrence_rows(p: Prime, n_max: u64) -> Result<Vec<Vec<u64>>> {
    let pv = p.get();
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let row = if n < pv {
            fleck_row_mod_p(p, n)?
        } else {
            let lower = &rows[(n - pv + 1) as usize];
            (0..pv as i64)
                .map(|r| recurrence_mod_p(p, n, r, lower))
                .collect::<Result<Vec<_>>>()?
        };
        rows.push(row);
    }
    Ok(rows)
}

//! Counterexample search for the conjectured period
//! `F_{p^a}(n + φ(p^(a+b)), r) ≡ F_{p^a}(n, r) (mod p^b)`, `n >= 2p^(a+b-2)`.
//!
//! Instances are visited in lexicographic `(p, a, b, n, r)` order. A cursor
//! names the last finished instance, so an interrupted scan resumes exactly
//! where it stopped.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::arith::{divides, Prime, PrimePower};
use crate::error::{FleckError, Result};
use crate::harness::{params, Params};
use crate::sums::{fleck_row, generalized_fleck};

pub const CONJECTURE_ID: &str = "1.1";

/// Inclusive bounds of a scan. `r` defaults to `[0, p^a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRange {
    pub primes: Vec<Prime>,
    pub a: (u32, u32),
    pub b: (u32, u32),
    pub n_max: u64,
    pub r: Option<(i64, i64)>,
}

/// The last completed instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScanCursor {
    pub p: u64,
    pub a: u32,
    pub b: u32,
    pub n: u64,
    pub r: i64,
}

impl ScanCursor {
    /// `p a b n r`, whitespace separated.
    pub fn encode(&self) -> String {
        format!("{} {} {} {} {}", self.p, self.a, self.b, self.n, self.r)
    }

    pub fn decode(s: &str) -> Option<Self> {
        let mut it = s.split_whitespace();
        let cursor = ScanCursor {
            p: it.next()?.parse().ok()?,
            a: it.next()?.parse().ok()?,
            b: it.next()?.parse().ok()?,
            n: it.next()?.parse().ok()?,
            r: it.next()?.parse().ok()?,
        };
        it.next().is_none().then_some(cursor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub conjecture_id: String,
    pub range: ScanRange,
    pub instances_checked: u64,
    /// Parameter maps `{p, a, b, n, r}` of confirmed counterexamples.
    pub counterexamples: Vec<Params>,
    /// Last instance visited, if any.
    pub cursor: Option<ScanCursor>,
    /// False when the scan stopped early at the block limit.
    pub complete: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    /// `n` values evaluated concurrently per block.
    pub block: usize,
    /// Stop after this many blocks (for interruption tests and chunked runs).
    pub max_blocks: Option<u64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            block: 16,
            max_blocks: None,
        }
    }
}

/// Smallest `n` the conjecture speaks about.
pub fn start_n(p: u64, a: u32, b: u32) -> u64 {
    2 * p.pow(a + b - 2)
}

fn validate(range: &ScanRange) -> Result<()> {
    let bad = |m: &str| Err(FleckError::PreconditionViolation(m.to_string()));
    if range.primes.is_empty() {
        return bad("empty prime range");
    }
    if range.a.0 < 1 || range.a.0 > range.a.1 || range.b.0 < 1 || range.b.0 > range.b.1 {
        return bad("a and b ranges must be nonempty and start at 1 or more");
    }
    if let Some((lo, hi)) = range.r {
        if lo > hi {
            return bad("empty r range");
        }
    }
    Ok(())
}

/// One `(p, a, b, n)` block row: residue comparison over every `r` in range.
fn compare_row(pp: PrimePower, b: u32, n: u64, rs: (i64, i64)) -> Result<Vec<i64>> {
    let shift = PrimePower::new(pp.p().get(), pp.a() + b)?.totient();
    let modulus = BigInt::from(pp.p().get().pow(b));
    let base = fleck_row(pp, n)?;
    let moved = fleck_row(pp, n + shift)?;
    let m = pp.modulus() as i64;
    let mut bad = Vec::new();
    for r in rs.0..=rs.1 {
        let i = r.rem_euclid(m) as usize;
        if !divides(&modulus, &(&moved[i].value - &base[i].value)) {
            bad.push(r);
        }
    }
    Ok(bad)
}

/// Recomputes a candidate from scratch without the row machinery.
fn reverify(pp: PrimePower, b: u32, n: u64, r: i64) -> Result<bool> {
    let shift = PrimePower::new(pp.p().get(), pp.a() + b)?.totient();
    let modulus = BigInt::from(pp.p().get().pow(b));
    let diff = generalized_fleck(pp, n + shift, r)?.value - generalized_fleck(pp, n, r)?.value;
    Ok(!divides(&modulus, &diff))
}

/// Runs (or resumes after `resume`) the scan. `on_block` sees the cursor
/// after every finished block, in order.
pub fn scan_conjecture11(
    range: &ScanRange,
    resume: Option<ScanCursor>,
    opts: ScanOptions,
    mut on_block: impl FnMut(&ScanCursor),
) -> Result<ScanResult> {
    validate(range)?;
    let mut primes: Vec<Prime> = range.primes.clone();
    primes.sort();
    primes.dedup();
    let mut result = ScanResult {
        conjecture_id: CONJECTURE_ID.to_string(),
        range: range.clone(),
        instances_checked: 0,
        counterexamples: Vec::new(),
        cursor: resume,
        complete: true,
    };
    let mut blocks = 0u64;
    for &p in &primes {
        for a in range.a.0..=range.a.1 {
            let pp = PrimePower::from_prime(p, a)?;
            let rs = range.r.unwrap_or((0, pp.modulus() as i64 - 1));
            for b in range.b.0..=range.b.1 {
                let key = (p.get(), a, b);
                let mut n_lo = start_n(p.get(), a, b);
                if let Some(c) = resume {
                    if (c.p, c.a, c.b) > key {
                        continue;
                    }
                    if (c.p, c.a, c.b) == key {
                        if c.r < rs.1 {
                            return Err(FleckError::PreconditionViolation(format!(
                                "cursor {} stops inside an n row; resume needs a block boundary",
                                c.encode()
                            )));
                        }
                        n_lo = n_lo.max(c.n + 1);
                    }
                }
                let ns: Vec<u64> = (n_lo..=range.n_max).collect();
                for chunk in ns.chunks(opts.block.max(1)) {
                    if opts.max_blocks.is_some_and(|m| blocks >= m) {
                        result.complete = false;
                        return Ok(result);
                    }
                    let rows: Vec<Result<Vec<i64>>> = chunk
                        .par_iter()
                        .map(|&n| compare_row(pp, b, n, rs))
                        .collect();
                    for (&n, row) in chunk.iter().zip(rows) {
                        for r in row? {
                            if !reverify(pp, b, n, r)? {
                                return Err(FleckError::Internal(format!(
                                    "candidate (p={p}, a={a}, b={b}, n={n}, r={r}) vanished on recomputation"
                                )));
                            }
                            result.counterexamples.push(params(&[
                                ("p", p.get() as i64),
                                ("a", a as i64),
                                ("b", b as i64),
                                ("n", n as i64),
                                ("r", r),
                            ]));
                        }
                        result.instances_checked += (rs.1 - rs.0 + 1) as u64;
                    }
                    let last = ScanCursor {
                        p: p.get(),
                        a,
                        b,
                        n: *chunk.last().expect("chunks are nonempty"),
                        r: rs.1,
                    };
                    result.cursor = Some(last);
                    blocks += 1;
                    on_block(&last);
                }
            }
        }
    }
    Ok(result)
}

//! Stirling numbers, Bernoulli numbers and (higher-order) Bernoulli
//! polynomials over exact rationals.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binom, factorial, ratio, rational_mod_p, Prime};
use crate::error::{FleckError, Result};

/// `(x)_k = x(x-1)…(x-k+1)`, with `(x)_0 = 1`.
pub fn falling_factorial(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x - ratio(i);
    }
    acc
}

/// Stirling number of the second kind from the explicit alternating formula
/// `S(n,k) = (1/k!) Σ_j binom(k,j)(-1)^(k-j) j^n`.
pub fn stirling2(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut sum = BigInt::zero();
    for j in 0..=k {
        let term = binom(k, j) * num_traits::pow(BigInt::from(j), n as usize);
        if (k - j) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (q, r) = sum.div_rem(&factorial(k));
    assert!(r.is_zero(), "k! must divide the Stirling sum");
    q
}

/// `S̄(n,k) = k! S(n,k) / n!`, the coefficient of `x^n` in `(e^x - 1)^k`.
pub fn stirling2_bar(n: u64, k: u64) -> BigRational {
    BigRational::new(factorial(k) * stirling2(n, k), factorial(n))
}

/// Unsigned Stirling number of the first kind, defined by
/// `(x)_m = Σ_k (-1)^(m-k) s(m,k) x^k`.
pub fn stirling1_unsigned(m: u64, k: u64) -> BigInt {
    if k > m {
        return BigInt::zero();
    }
    // row-by-row: s(i+1, j) = i·s(i, j) + s(i, j-1)
    let mut row = vec![BigInt::one()];
    for i in 0..m {
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (j, s) in row.iter().enumerate() {
            next[j] += s * i;
            next[j + 1] += s;
        }
        row = next;
    }
    row.swap_remove(k as usize)
}

pub const DEFAULT_BERNOULLI_CEILING: usize = 512;

/// Append-only memo of `B_0, B_1, …` up to a ceiling.
///
/// Values past the ceiling are still computed, just not retained.
#[derive(Debug)]
pub struct BernoulliCache {
    ceiling: usize,
    values: RwLock<Vec<BigRational>>,
}

impl BernoulliCache {
    pub fn new(ceiling: usize) -> Self {
        BernoulliCache {
            ceiling,
            values: RwLock::new(Vec::new()),
        }
    }

    /// The process-wide cache with [`DEFAULT_BERNOULLI_CEILING`].
    pub fn global() -> &'static BernoulliCache {
        static GLOBAL: OnceLock<BernoulliCache> = OnceLock::new();
        GLOBAL.get_or_init(|| BernoulliCache::new(DEFAULT_BERNOULLI_CEILING))
    }

    pub fn ceiling(&self) -> usize {
        self.ceiling
    }

    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `B_0, …, B_n`.
    pub fn prefix(&self, n: usize) -> Vec<BigRational> {
        {
            let values = self.values.read().unwrap();
            if values.len() > n {
                return values[..=n].to_vec();
            }
        }
        let mut values = self.values.write().unwrap();
        let keep = n.min(self.ceiling);
        extend_bernoulli(&mut values, keep);
        if n <= keep {
            return values[..=n].to_vec();
        }
        let mut scratch = values.clone();
        drop(values);
        extend_bernoulli(&mut scratch, n);
        scratch
    }

    pub fn get(&self, n: usize) -> BigRational {
        if let Some(b) = self.values.read().unwrap().get(n) {
            return b.clone();
        }
        self.prefix(n).swap_remove(n)
    }
}

/// Extends `values` through index `n` with `Σ_{k=0}^{l} binom(l+1,k) B_k = 0`.
fn extend_bernoulli(values: &mut Vec<BigRational>, n: usize) {
    if values.is_empty() {
        values.push(BigRational::one());
    }
    while values.len() <= n {
        let l = values.len() as u64;
        if l >= 3 && l % 2 == 1 {
            values.push(BigRational::zero());
            continue;
        }
        // common denominator keeps the sum to one normalization
        let den = values
            .iter()
            .fold(BigInt::one(), |acc, b| acc.lcm(b.denom()));
        let mut num = BigInt::zero();
        let mut c = BigInt::one(); // binom(l+1, k)
        for (k, b) in values.iter().enumerate() {
            let k = k as u64;
            if !b.is_zero() {
                num += &c * b.numer() * (&den / b.denom());
            }
            c = c * (l + 1 - k) / (k + 1);
        }
        values.push(BigRational::new(-num, den * (l + 1)));
    }
}

/// `B_n` with `B_1 = -1/2`.
pub fn bernoulli_number(n: u64) -> BigRational {
    BernoulliCache::global().get(n as usize)
}

/// `B_0, …, B_n`.
pub fn bernoulli_numbers(n: u64) -> Vec<BigRational> {
    BernoulliCache::global().prefix(n as usize)
}

/// A polynomial with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialExact {
    coefficients: Vec<BigRational>,
}

impl PolynomialExact {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        PolynomialExact { coefficients }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }
}

/// Product of two power series, truncated to `len` terms.
fn series_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `B_0^(m), …, B_n^(m)`: `n!` times the coefficients of `(x/(e^x-1))^m`,
/// built as an iterated truncated series product.
pub fn higher_bernoulli_numbers(n: u64, m: u64) -> Vec<BigRational> {
    let len = n as usize + 1;
    let base: Vec<BigRational> = bernoulli_numbers(n)
        .into_iter()
        .enumerate()
        .map(|(k, b)| b / ratio(factorial(k as u64)))
        .collect();
    let mut acc = vec![BigRational::zero(); len];
    acc[0] = BigRational::one();
    for _ in 0..m {
        acc = series_mul(&acc, &base, len);
    }
    acc.into_iter()
        .enumerate()
        .map(|(k, c)| c * ratio(factorial(k as u64)))
        .collect()
}

/// The `m`-th order Bernoulli number `B_n^(m) = B_n^(m)(0)`.
pub fn higher_bernoulli_number(n: u64, m: u64) -> BigRational {
    higher_bernoulli_numbers(n, m).swap_remove(n as usize)
}

/// `B_n^(m)(t) = Σ_k binom(n,k) B_k^(m) t^(n-k)` as a polynomial in `t`.
pub fn higher_bernoulli_poly(n: u64, m: u64) -> PolynomialExact {
    let numbers = higher_bernoulli_numbers(n, m);
    // coefficient of t^j is binom(n, n-j) B_{n-j}^(m)
    let coefficients = (0..=n)
        .map(|j| ratio(binom(n, j)) * &numbers[(n - j) as usize])
        .collect();
    PolynomialExact::new(coefficients)
}

/// The Bernoulli polynomial `B_n(t)`.
pub fn bernoulli_poly(n: u64) -> PolynomialExact {
    higher_bernoulli_poly(n, 1)
}

pub fn higher_bernoulli_poly_eval(n: u64, m: u64, t: &BigRational) -> BigRational {
    higher_bernoulli_poly(n, m).eval(t)
}

/// `B_n^(m)(t) mod p` for `n <= p - 2`, where every coefficient is `p`-integral.
pub fn higher_bernoulli_mod_p(n: u64, m: u64, t: &BigInt, p: Prime) -> Result<u64> {
    if n + 2 > p.get() {
        return Err(FleckError::PreconditionViolation(format!(
            "B_n^(m) mod p needs n <= p-2 (n = {n}, p = {p})"
        )));
    }
    let value = higher_bernoulli_poly_eval(n, m, &BigRational::from_integer(t.clone()));
    match rational_mod_p(&value, p) {
        Ok(res) => Ok(res.as_u64()),
        Err(FleckError::NonUnitDenominator { denominator, .. }) => Err(FleckError::Internal(
            format!("B_{n}^({m})({t}) has denominator {denominator} divisible by {p}"),
        )),
        Err(e) => Err(e),
    }
}

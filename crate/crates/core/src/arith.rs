//! Exact integer and rational helpers shared by every other module.
//!
//! Integers are [`BigInt`] and rationals are [`BigRational`] (always kept in
//! lowest terms with a positive denominator by `num-rational`). Primes and
//! prime powers are validated newtypes so the rest of the crate can assume
//! `p` is prime without re-checking.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{FleckError, Result};

/// Largest prime accepted by [`Prime::new`]; trial division is used below it.
pub const MAX_PRIME: u64 = 1 << 32;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A rational prime, checked by trial division on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(FleckError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// All primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<Prime> {
    (lo..=hi).filter(|&n| is_prime(n)).map(Prime).collect()
}

/// `p^a` with `a >= 1`, caching the modulus and `φ(p^a) = p^(a-1)(p-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    p: Prime,
    a: u32,
    modulus: u64,
    totient: u64,
}

impl PrimePower {
    pub fn new(p: u64, a: u32) -> Result<Self> {
        let p = Prime::new(p)?;
        Self::from_prime(p, a)
    }

    pub fn from_prime(p: Prime, a: u32) -> Result<Self> {
        if a == 0 {
            return Err(FleckError::PreconditionViolation(
                "prime power exponent must be at least 1".into(),
            ));
        }
        let modulus = p.get().checked_pow(a).ok_or_else(|| {
            FleckError::PreconditionViolation(format!("{}^{} does not fit in 64 bits", p, a))
        })?;
        let totient = modulus / p.get() * (p.get() - 1);
        Ok(PrimePower {
            p,
            a,
            modulus,
            totient,
        })
    }

    #[inline]
    pub fn p(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn a(&self) -> u32 {
        self.a
    }

    /// `p^a`.
    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `φ(p^a)`.
    #[inline]
    pub fn totient(&self) -> u64 {
        self.totient
    }

    /// `p^(a-1)`.
    #[inline]
    pub fn lower_power(&self) -> u64 {
        self.modulus / self.p.get()
    }
}

impl From<Prime> for PrimePower {
    fn from(p: Prime) -> Self {
        PrimePower {
            p,
            a: 1,
            modulus: p.get(),
            totient: p.get() - 1,
        }
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.a)
        }
    }
}

/// A least nonnegative residue `{a}_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    value: BigInt,
    modulus: BigInt,
}

impl ResidueClass {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// The residue as a machine integer; residues modulo desk-scale primes
    /// always fit.
    pub fn as_u64(&self) -> u64 {
        self.value
            .to_u64()
            .expect("residue modulo a 64-bit modulus fits in u64")
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// `ord_p(x)`, with zero mapped to [`ExtendedOrder::Infinite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedOrder {
    Finite(u64),
    Infinite,
}

impl ExtendedOrder {
    /// Whether `p^e` divides the valuated number. Negative `e` is always true.
    pub fn at_least(self, e: i64) -> bool {
        match self {
            ExtendedOrder::Infinite => true,
            ExtendedOrder::Finite(v) => e < 0 || v >= e as u64,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedOrder::Finite(v) => Some(v),
            ExtendedOrder::Infinite => None,
        }
    }
}

impl fmt::Display for ExtendedOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedOrder::Finite(v) => write!(f, "{v}"),
            ExtendedOrder::Infinite => f.write_str("inf"),
        }
    }
}

/// Generalized binomial coefficient `∏_{i=1..k} (n-i+1)/i`, zero for `k < 0`.
///
/// The upper argument may be any integer, so `binomial(-1, k) = (-1)^k`.
pub fn binomial(n: &BigInt, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut k = k as u64;
    if !n.is_negative() {
        if let Some(nu) = n.to_u64() {
            if k > nu {
                return BigInt::zero();
            }
            k = k.min(nu - k);
        }
    }
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc *= n - BigInt::from(i - 1);
        // a product of i consecutive integers is divisible by i!
        acc /= i;
    }
    acc
}

/// `binom(n, k)` for natural arguments; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `{a}_m`, the least nonnegative residue of `a` modulo `m`.
///
/// Panics when `m < 1`.
pub fn least_residue(a: &BigInt, m: &BigInt) -> ResidueClass {
    assert!(m.is_positive(), "modulus must be positive, got {m}");
    ResidueClass {
        value: a.mod_floor(m),
        modulus: m.clone(),
    }
}

/// `{a}_m` for machine integers.
#[inline]
pub fn residue(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// `ord_p(x)`; [`ExtendedOrder::Infinite`] for zero.
pub fn p_adic_order(x: &BigInt, p: Prime) -> ExtendedOrder {
    if x.is_zero() {
        return ExtendedOrder::Infinite;
    }
    let pb = p.to_bigint();
    let mut x = x.abs();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return ExtendedOrder::Finite(e);
        }
        x = q;
        e += 1;
    }
}

/// Legendre symbol `(a/p)` via Euler's criterion.
pub fn legendre(a: &BigInt, p: Prime) -> Result<i8> {
    if !p.is_odd() {
        return Err(FleckError::PreconditionViolation(
            "Legendre symbol needs an odd prime".into(),
        ));
    }
    let pb = p.to_bigint();
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return Ok(0);
    }
    let e = a.modpow(&BigInt::from((p.get() - 1) / 2), &pb);
    Ok(if e.is_one() { 1 } else { -1 })
}

/// Fermat quotient `q_p(a) = (a^(p-1) - 1)/p`.
pub fn fermat_quotient(a: &BigInt, p: Prime) -> Result<BigInt> {
    let pb = p.to_bigint();
    if a.mod_floor(&pb).is_zero() {
        return Err(FleckError::NonUnit {
            value: a.clone(),
            p: p.get(),
        });
    }
    let t = num_traits::pow(a.clone(), (p.get() - 1) as usize) - 1u32;
    let (q, r) = t.div_rem(&pb);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

/// Reduces a `p`-integral rational modulo `p`.
pub fn rational_mod_p(x: &BigRational, p: Prime) -> Result<ResidueClass> {
    rational_mod_prime_power(x, p, 1)
}

/// Reduces a `p`-integral rational modulo `p^k` into `[0, p^k)`.
pub fn rational_mod_prime_power(x: &BigRational, p: Prime, k: u32) -> Result<ResidueClass> {
    let modulus = num_traits::pow(p.to_bigint(), k as usize);
    let inv = mod_inverse(x.denom(), &modulus).ok_or_else(|| FleckError::NonUnitDenominator {
        denominator: x.denom().clone(),
        p: p.get(),
    })?;
    Ok(least_residue(&(x.numer() * inv), &modulus))
}

/// Whether `m` divides `x`; `m` must be positive.
pub fn divides(m: &BigInt, x: &BigInt) -> bool {
    x.mod_floor(m).is_zero()
}

/// `base^e` for a rational base, with `0^0 = 1`.
pub fn rational_pow(base: &BigRational, e: u64) -> BigRational {
    num_traits::pow(base.clone(), e as usize)
}

/// `(-1)^e` as a big integer.
#[inline]
pub fn sign_pow(e: u64) -> BigInt {
    if e % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

pub fn ratio<T: Into<BigInt>>(n: T) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(&big(10), 3), big(120));
        assert_eq!(binomial(&big(-7), 0), big(1));
        assert_eq!(binomial(&big(-1), 4), big(1));
        assert_eq!(binomial(&big(-2), 3), big(-4));
        assert_eq!(binomial(&big(3), 5), big(0));
        assert_eq!(binomial(&big(3), -1), big(0));
    }

    #[test]
    fn binomial_matches_product_oracle() {
        // direct rational product, no symmetry shortcut
        for n in -12i64..=12 {
            for k in 0i64..=12 {
                let mut num = BigRational::one();
                for i in 1..=k {
                    num *= BigRational::new(big(n - i + 1), big(i));
                }
                assert_eq!(ratio(binomial(&big(n), k)), num, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn residue_examples() {
        assert_eq!(least_residue(&big(-5), &big(4)).value(), &big(3));
        assert_eq!(least_residue(&big(7), &big(7)).value(), &big(0));
        assert_eq!(least_residue(&big(-10), &big(4)).value(), &big(2));
        assert_eq!(residue(-10, 4), 2);
    }

    #[test]
    #[should_panic]
    fn residue_rejects_nonpositive_modulus() {
        least_residue(&big(3), &big(0));
    }

    #[test]
    fn order_examples() {
        assert_eq!(p_adic_order(&big(125), p(5)), ExtendedOrder::Finite(3));
        assert_eq!(p_adic_order(&big(0), p(7)), ExtendedOrder::Infinite);
        assert_eq!(p_adic_order(&big(149205), p(7)), ExtendedOrder::Finite(3));
        assert_eq!(p_adic_order(&big(-16), p(2)), ExtendedOrder::Finite(4));
        assert!(ExtendedOrder::Infinite.at_least(1000));
        assert!(ExtendedOrder::Finite(0).at_least(-1));
        assert!(!ExtendedOrder::Finite(2).at_least(3));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&big(0), p(5)).unwrap(), 0);
        assert_eq!(legendre(&big(2), p(7)).unwrap(), 1);
        assert_eq!(legendre(&big(3), p(7)).unwrap(), -1);
        assert_eq!(legendre(&big(-1), p(7)).unwrap(), -1);
        assert!(legendre(&big(1), p(2)).is_err());
        for q in primes_in(3, 97) {
            assert_eq!(legendre(&big(1), q).unwrap(), 1);
        }
    }

    #[test]
    fn legendre_matches_square_table() {
        for q in primes_in(3, 97) {
            let m = q.get();
            let squares: Vec<u64> = (1..m).map(|x| x * x % m).collect();
            for a in 1..m {
                let expect = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(legendre(&big(a as i64), q).unwrap(), expect);
            }
        }
    }

    #[test]
    fn fermat_quotient_examples() {
        assert_eq!(fermat_quotient(&big(1), p(7)).unwrap(), big(0));
        assert_eq!(fermat_quotient(&big(2), p(3)).unwrap(), big(1));
        assert_eq!(fermat_quotient(&big(2), p(5)).unwrap(), big(3));
        assert_eq!(fermat_quotient(&big(-2), p(5)).unwrap(), big(3));
        assert!(matches!(
            fermat_quotient(&big(10), p(5)),
            Err(FleckError::NonUnit { .. })
        ));
    }

    #[test]
    fn rational_mod_p_examples() {
        let q = |n, d| BigRational::new(big(n), big(d));
        assert_eq!(rational_mod_p(&q(1, 6), p(5)).unwrap().as_u64(), 1);
        assert_eq!(rational_mod_p(&q(-9, 4), p(5)).unwrap().as_u64(), 4);
        assert!(matches!(
            rational_mod_p(&q(1, 5), p(5)),
            Err(FleckError::NonUnitDenominator { .. })
        ));
        assert_eq!(
            rational_mod_prime_power(&q(125, 3), p(5), 4)
                .unwrap()
                .value(),
            &big(250)
        );
    }

    #[test]
    fn prime_power_fields() {
        let pp = PrimePower::new(3, 3).unwrap();
        assert_eq!(pp.modulus(), 27);
        assert_eq!(pp.totient(), 18);
        assert_eq!(pp.lower_power(), 9);
        assert!(PrimePower::new(6, 1).is_err());
        assert!(PrimePower::new(5, 0).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(0).is_err());
        assert_eq!(primes_in(1, 20).len(), 8);
    }
}

//! Class numbers of `Q(√-p)` and `Q(√p)`, the fundamental unit of `Q(√p)`,
//! and regularity of `p` through Bernoulli numerators.
//!
//! Everything is exact integer arithmetic: imaginary class numbers by
//! enumerating reduced positive definite forms, real class numbers by counting
//! cycles of reduced indefinite forms, units from the continued fraction of
//! `(1+√p)/2`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{mod_inverse, ratio, rational_mod_p, Prime};
use crate::error::{FleckError, Result};
use crate::sequences::bernoulli_numbers;

/// A binary quadratic form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImaginaryClassData {
    pub p: Prime,
    /// `h(-p)`
    pub h_minus_p: u64,
    /// The reduced forms of discriminant `-p`, one per class.
    pub forms: Vec<QuadraticForm>,
}

/// `h(-p)` for `p ≡ 3 (mod 4)` by listing reduced forms of discriminant `-p`:
/// `|b| <= a <= c`, with `b >= 0` whenever `|b| = a` or `a = c`.
pub fn class_number_imaginary(p: Prime) -> Result<ImaginaryClassData> {
    let pv = p.get() as i64;
    if pv % 4 != 3 {
        return Err(FleckError::PreconditionViolation(format!(
            "Q(√-p) class number needs p ≡ 3 (mod 4), got {p}"
        )));
    }
    let mut forms = Vec::new();
    let mut a = 1i64;
    // reduced forms have 3a² <= |D|
    while 3 * a * a <= pv {
        for b in -a + 1..=a {
            let num = b * b + pv;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || ((b.abs() == a || a == c) && b < 0) {
                continue;
            }
            forms.push(QuadraticForm { a, b, c });
        }
        a += 1;
    }
    Ok(ImaginaryClassData {
        p,
        h_minus_p: forms.len() as u64,
        forms,
    })
}

/// Class number and fundamental unit `ε = (v + u√p)/2` of `Q(√p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealClassData {
    pub p: Prime,
    /// `h(p)` in the wide sense.
    pub h_p: u64,
    /// Number of cycles of reduced indefinite forms (the narrow class number).
    pub narrow_class_number: u64,
    pub u: BigInt,
    pub v: BigInt,
    /// `N(ε) = (v² - p u²)/4`, either `1` or `-1`.
    pub unit_norm: i8,
    /// Reduced forms of discriminant `p`, grouped by cycle.
    pub cycles: Vec<Vec<QuadraticForm>>,
}

/// Smallest unit `(v + u√d)/2 > 1` of the order of discriminant `d`
/// (`d ≡ 1 (mod 4)`, not a square), read off the convergents of `(1+√d)/2`.
///
/// Returns `(u, v, norm)`.
pub fn fundamental_unit(d: u64) -> Result<(BigInt, BigInt, i8)> {
    let s = d.sqrt();
    if d % 4 != 1 || s * s == d {
        return Err(FleckError::PreconditionViolation(format!(
            "need a non-square discriminant ≡ 1 (mod 4), got {d}"
        )));
    }
    let db = BigInt::from(d);
    let sb = BigInt::from(s);
    // ω = (P + √d)/Q with Q | d - P²
    let (mut pp, mut qq) = (BigInt::one(), BigInt::from(2));
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let quarter = BigInt::from((1 - d as i64) / 4);
    loop {
        let a = floor_quadratic(&pp, &qq, &sb);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        // N(h - kω) = h² - hk + k²(1-d)/4
        let norm = &h * &h - &h * &k + &k * &k * &quarter;
        if norm.abs().is_one() {
            let v = BigInt::from(2) * &h - &k;
            let sign = if norm.is_positive() { 1 } else { -1 };
            return Ok((k, v, sign));
        }
        pp = &a * &qq - &pp;
        qq = (&db - &pp * &pp) / &qq;
    }
}

/// `⌊(P + √d)/Q⌋` for non-square `d`, `Q ≠ 0`, with `s = ⌊√d⌋`.
fn floor_quadratic(pp: &BigInt, qq: &BigInt, s: &BigInt) -> BigInt {
    if qq.is_positive() {
        Integer::div_floor(&(pp + s), qq)
    } else {
        let q = -qq;
        let up: BigInt = Integer::div_floor(&(pp + s), &q);
        -(up + BigInt::one())
    }
}

/// Reduced indefinite forms of discriminant `d`: `0 < b < √d` and
/// `√d - b < 2|a| < √d + b`.
fn reduced_indefinite_forms(d: i64) -> Vec<QuadraticForm> {
    let s = d.sqrt();
    let mut forms = Vec::new();
    for b in 1..=s {
        if (b * b - d) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        for a_abs in 1..=ac.abs() {
            if ac % a_abs != 0 {
                continue;
            }
            if 2 * a_abs < s - b + 1 || 2 * a_abs > s + b {
                continue;
            }
            for a in [a_abs, -a_abs] {
                forms.push(QuadraticForm { a, b, c: ac / a });
            }
        }
    }
    forms.sort();
    forms
}

/// One reduction step `(a,b,c) -> (c, b', (b'² - d)/(4c))` with
/// `b' ≡ -b (mod 2c)` and `√d - 2|c| < b' < √d`.
fn rho(f: QuadraticForm, d: i64) -> QuadraticForm {
    let s = d.sqrt();
    let two_c = 2 * f.c.abs();
    let lo = s - two_c + 1;
    let b = lo + (-f.b - lo).rem_euclid(two_c);
    QuadraticForm {
        a: f.c,
        b,
        c: (b * b - d) / (4 * f.c),
    }
}

fn indefinite_cycles(d: i64) -> Vec<Vec<QuadraticForm>> {
    let mut remaining: BTreeSet<QuadraticForm> = reduced_indefinite_forms(d).into_iter().collect();
    let mut cycles = Vec::new();
    while let Some(&start) = remaining.iter().next() {
        let mut cycle = vec![start];
        remaining.remove(&start);
        let mut f = rho(start, d);
        while f != start {
            assert!(
                remaining.remove(&f),
                "reduction left the reduced set at {f:?}"
            );
            cycle.push(f);
            f = rho(f, d);
        }
        cycles.push(cycle);
    }
    cycles
}

/// `h(p)` and the fundamental unit of `Q(√p)` for `p ≡ 1 (mod 4)`.
pub fn real_class_and_unit(p: Prime) -> Result<RealClassData> {
    let pv = p.get();
    if pv % 4 != 1 {
        return Err(FleckError::PreconditionViolation(format!(
            "Q(√p) data needs p ≡ 1 (mod 4), got {p}"
        )));
    }
    let (u, v, unit_norm) = fundamental_unit(pv)?;
    let cycles = indefinite_cycles(pv as i64);
    let narrow = cycles.len() as u64;
    let h_p = if unit_norm == -1 { narrow } else { narrow / 2 };
    Ok(RealClassData {
        p,
        h_p,
        narrow_class_number: narrow,
        u,
        v,
        unit_norm,
        cycles,
    })
}

/// `((p-1)/2)! mod p` by direct product.
pub fn half_factorial_mod_p(p: Prime) -> Result<u64> {
    if !p.is_odd() {
        return Err(FleckError::PreconditionViolation(
            "half factorial needs an odd prime".into(),
        ));
    }
    let pv = p.get() as u128;
    Ok((1..=(pv - 1) / 2).fold(1u128, |acc, i| acc * i % pv) as u64)
}

fn minus_one_pow_mod(e: u64, p: u64) -> u64 {
    if e % 2 == 0 {
        1 % p
    } else {
        p - 1
    }
}

/// `(-1)^((h(-p)+1)/2) mod p`, which equals `((p-1)/2)! mod p` for
/// primes `p > 3` with `p ≡ 3 (mod 4)`.
pub fn mordell_value(p: Prime) -> Result<u64> {
    let h = class_number_imaginary(p)?.h_minus_p;
    Ok(minus_one_pow_mod((h + 1) / 2, p.get()))
}

/// `(-1)^((h(p)+1)/2) · v/2 mod p`, which equals `((p-1)/2)! mod p` for
/// primes `p ≡ 1 (mod 4)`.
pub fn chowla_value(p: Prime) -> Result<u64> {
    let data = real_class_and_unit(p)?;
    let half_v = BigRational::new(data.v.clone(), BigInt::from(2));
    let signed = half_v * ratio(crate::arith::sign_pow((data.h_p + 1) / 2));
    Ok(rational_mod_p(&signed, p)?.as_u64())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub p: Prime,
    pub is_regular: bool,
    /// Even `n <= p-3` with `p | numerator(B_n)`.
    pub offending_indices: Vec<u64>,
    /// `∏_{0<n<=(p-3)/2} (-B_{2n}/(4n)) mod p`.
    pub h_minus_mod_p: u64,
}

/// Scans `B_2, …, B_{p-3}` for numerators divisible by `p` and evaluates the
/// `h_p^-` product modulo `p`.
pub fn regularity(p: Prime) -> Result<RegularityReport> {
    let pv = p.get();
    if pv <= 3 {
        return Err(FleckError::PreconditionViolation(format!(
            "regularity test needs p > 3, got {p}"
        )));
    }
    let bern = bernoulli_numbers(pv - 3);
    let pb = p.to_bigint();
    let mut offending = Vec::new();
    let mut product = BigInt::one();
    for n in 1..=(pv - 3) / 2 {
        let b = &bern[(2 * n) as usize];
        if b.numer().mod_floor(&pb).is_zero() {
            offending.push(2 * n);
        }
        let term = -b / ratio(4 * n);
        let r = rational_mod_p(&term, p)
            .map_err(|_| FleckError::Internal(format!("B_{} is not {p}-integral", 2 * n)))?;
        product = product * r.value() % &pb;
    }
    let h_minus_mod_p: u64 = product.try_into().expect("residue fits");
    Ok(RegularityReport {
        p,
        is_regular: offending.is_empty(),
        offending_indices: offending,
        h_minus_mod_p,
    })
}

/// `a/b mod p` for small integers; `None` if `p | b`.
pub fn small_fraction_mod_p(a: i64, b: i64, p: Prime) -> Option<u64> {
    let pb = p.to_bigint();
    let inv = mod_inverse(&BigInt::from(b), &pb)?;
    let v: BigInt = (BigInt::from(a) * inv).mod_floor(&pb);
    v.try_into().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    /// Every (a, b, c) with b² - 4ac = -p satisfying the reduction
    /// inequalities, found without the 3a² <= p shortcut.
    fn brute_imaginary(q: i64) -> u64 {
        let mut count = 0;
        for a in 1..=q {
            for b in -a..=a {
                for c in a..=q {
                    if b * b - 4 * a * c != -q {
                        continue;
                    }
                    if (b.abs() == a || a == c) && b < 0 {
                        continue;
                    }
                    count += 1;
                }
            }
        }
        count
    }

    fn brute_unit(q: u64) -> (u64, u64) {
        for u in 1u64.. {
            for s in [-4i64, 4] {
                let t = (q * u * u) as i64 + s;
                if t >= 0 {
                    let v = (t as u64).sqrt();
                    if v * v == t as u64 {
                        return (u, v);
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn imaginary_examples() {
        let d = class_number_imaginary(p(7)).unwrap();
        assert_eq!(
            (d.h_minus_p, d.forms.clone()),
            (1, vec![QuadraticForm { a: 1, b: 1, c: 2 }])
        );
        let d = class_number_imaginary(p(23)).unwrap();
        assert_eq!(d.h_minus_p, 3);
        let mut forms = d.forms.clone();
        forms.sort();
        assert_eq!(
            forms,
            vec![
                QuadraticForm { a: 1, b: 1, c: 6 },
                QuadraticForm { a: 2, b: -1, c: 3 },
                QuadraticForm { a: 2, b: 1, c: 3 },
            ]
        );
        assert_eq!(class_number_imaginary(p(47)).unwrap().h_minus_p, 5);
        assert_eq!(class_number_imaginary(p(3)).unwrap().h_minus_p, 1);
        assert!(class_number_imaginary(p(13)).is_err());
    }

    #[test]
    fn imaginary_matches_brute_force() {
        for q in primes_in(3, 200).into_iter().filter(|q| q.get() % 4 == 3) {
            let d = class_number_imaginary(q).unwrap();
            assert_eq!(d.h_minus_p, brute_imaginary(q.get() as i64), "p={q}");
            assert!(d
                .forms
                .iter()
                .all(|f| f.discriminant() == -(q.get() as i64)));
        }
    }

    #[test]
    fn real_examples() {
        for (q, u, v) in [(5u64, 1, 1), (13, 1, 3), (29, 1, 5)] {
            let d = real_class_and_unit(p(q)).unwrap();
            assert_eq!(
                (d.h_p, d.u.clone(), d.v.clone()),
                (1, BigInt::from(u), BigInt::from(v))
            );
        }
        assert!(real_class_and_unit(p(7)).is_err());
        assert!(fundamental_unit(9).is_err());
    }

    #[test]
    fn unit_matches_brute_force() {
        for q in primes_in(5, 190).into_iter().filter(|q| q.get() % 4 == 1) {
            let (u, v, _) = fundamental_unit(q.get()).unwrap();
            let (bu, bv) = brute_unit(q.get());
            assert_eq!((u, v), (BigInt::from(bu), BigInt::from(bv)), "p={q}");
        }
    }

    #[test]
    fn unit_equation_and_parity() {
        for q in primes_in(5, 400).into_iter().filter(|q| q.get() % 4 == 1) {
            let d = real_class_and_unit(q).unwrap();
            let lhs = &d.v * &d.v - BigInt::from(q.get()) * &d.u * &d.u;
            assert_eq!(lhs, BigInt::from(4 * d.unit_norm as i64));
            assert!(d.u.is_positive() && d.v.is_positive());
            assert_eq!(d.u.is_odd(), d.v.is_odd());
            // prime discriminants ≡ 1 (mod 4) have units of norm -1
            assert_eq!(d.unit_norm, -1, "p={q}");
            for cycle in &d.cycles {
                assert!(cycle.iter().all(|f| f.discriminant() == q.get() as i64));
            }
        }
    }

    #[test]
    fn known_real_class_numbers() {
        // h(229) = 3 and h(257) = 3 are the first primes ≡ 1 (mod 4) with h > 1
        for q in primes_in(5, 260).into_iter().filter(|q| q.get() % 4 == 1) {
            let h = real_class_and_unit(q).unwrap().h_p;
            let expect = if q.get() == 229 || q.get() == 257 {
                3
            } else {
                1
            };
            assert_eq!(h, expect, "p={q}");
        }
    }

    #[test]
    fn half_factorial_examples() {
        assert_eq!(half_factorial_mod_p(p(7)).unwrap(), 6);
        assert_eq!(half_factorial_mod_p(p(5)).unwrap(), 2);
        assert_eq!(half_factorial_mod_p(p(13)).unwrap(), 5);
        assert_eq!(mordell_value(p(7)).unwrap(), 6);
        assert_eq!(chowla_value(p(5)).unwrap(), 2);
        assert_eq!(chowla_value(p(13)).unwrap(), 5);
        assert!(half_factorial_mod_p(p(2)).is_err());
    }

    #[test]
    fn regularity_examples() {
        for q in [5u64, 7, 11, 13] {
            let r = regularity(p(q)).unwrap();
            assert!(r.is_regular);
            assert_ne!(r.h_minus_mod_p, 0);
        }
        let r = regularity(p(37)).unwrap();
        assert!(!r.is_regular);
        assert_eq!(r.offending_indices, vec![32]);
        assert_eq!(r.h_minus_mod_p, 0);
        let r = regularity(p(59)).unwrap();
        assert_eq!(r.offending_indices, vec![44]);
        assert!(regularity(p(3)).is_err());
    }

    #[test]
    fn fraction_helper() {
        assert_eq!(small_fraction_mod_p(1, 2, p(5)), Some(3));
        assert_eq!(small_fraction_mod_p(1, 5, p(5)), None);
    }
}

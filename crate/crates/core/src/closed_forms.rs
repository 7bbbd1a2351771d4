//! Closed-form evaluators for `F_p(n,r) mod p` and related Bernoulli data.
//!
//! Each evaluator computes its formula over exact rationals and reduces
//! modulo `p` once at the end. All of them return a residue in `[0, p)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{
    binom, binomial, factorial, ratio, rational_mod_p, rational_pow, residue, sign_pow, Prime,
    PrimePower,
};
use crate::error::{FleckError, Result};
use crate::sequences::{bernoulli_poly, higher_bernoulli_poly_eval, stirling2_bar};

/// Reduces a rational that the theory guarantees to be `p`-integral.
fn reduce(x: &BigRational, p: Prime, what: &str) -> Result<u64> {
    match rational_mod_p(x, p) {
        Ok(res) => Ok(res.as_u64()),
        Err(FleckError::NonUnitDenominator { denominator, .. }) => Err(FleckError::Internal(
            format!("{what}: denominator {denominator} is divisible by {p}"),
        )),
        Err(e) => Err(e),
    }
}

fn int_pow(base: i64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// `n* = {-n}_{p-1}`.
pub fn n_star(p: Prime, n: u64) -> u64 {
    residue(-(n as i64), p.get() - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `n0 <= n1`
    Le,
    /// `n0 > n1 = 0`
    GtZero,
    /// `n0 > n1 > 0`
    GtPos,
}

/// Which of the three residue formulas applies to `(p, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BranchTag {
    pub which: Branch,
    /// `{n}_p`
    pub n0: u64,
    /// `{n0 - n}_{p-1}`
    pub n1: u64,
}

impl BranchTag {
    pub fn classify(p: Prime, n: u64) -> Self {
        let n0 = n % p.get();
        let n1 = residue(n0 as i64 - n as i64, p.get() - 1);
        let which = if n0 <= n1 {
            Branch::Le
        } else if n1 == 0 {
            Branch::GtZero
        } else {
            Branch::GtPos
        };
        BranchTag { which, n0, n1 }
    }
}

/// `Σ_{k=0}^{n0} binom(n0,k)(-1)^k (k-r)^e`
fn euler_sum(n0: u64, r: i64, e: u64) -> BigInt {
    (0..=n0)
        .map(|k| sign_pow(k) * binom(n0, k) * int_pow(k as i64 - r, e))
        .sum()
}

/// `Σ_{k=0}^{n0} binom(n0,k)(-1)^k (k-r)^e q_p(k-r)` for `e >= 1`.
///
/// Each summand is the integer `(a^(e+p-1) - a^e)/p` with `a = k-r`, which is
/// `a^e q_p(a)` when `p ∤ a` and stays well defined when `p | a`. It vanishes
/// at `a = 0`; for `p | a ≠ 0` it is `≡ 0 (mod p)` only once `e >= 2`.
fn fermat_weighted_sum(p: Prime, n0: u64, r: i64, e: u64) -> BigInt {
    debug_assert!(e >= 1);
    let pb = p.to_bigint();
    let mut total = BigInt::zero();
    for k in 0..=n0 {
        let a = BigInt::from(k as i64 - r);
        let low = num_traits::pow(a.clone(), e as usize);
        let high = &low * num_traits::pow(a, (p.get() - 1) as usize);
        let (q, rem) = (high - low).div_rem(&pb);
        debug_assert!(rem.is_zero());
        total += sign_pow(k) * binom(n0, k) * q;
    }
    total
}

/// `F_p(n,r) mod p` by the three-branch residue formula in `n0 = {n}_p` and
/// `n1 = {n0 - n}_{p-1}`.
pub fn thm11_eval(p: Prime, n: u64, r: i64) -> Result<(u64, BranchTag)> {
    let tag = BranchTag::classify(p, n);
    let BranchTag { which, n0, n1 } = tag;
    let value = match which {
        Branch::Le => BigRational::new(sign_pow(n1) * euler_sum(n0, r, n1), factorial(n1)),
        Branch::GtZero => {
            let s = residue(r, p.get());
            ratio(sign_pow(s) * binom(n0, s))
        }
        Branch::GtPos => BigRational::new(
            sign_pow(n1 - 1) * fermat_weighted_sum(p, n0, r, n1),
            factorial(n1 - 1),
        ),
    };
    Ok((reduce(&value, p, "residue formula")?, tag))
}

/// The three displayed expressions whose common value is `(-1)^n F_p(n,r)`
/// modulo `p` when `m >= 0`:
///
/// 1. `Σ_{k=0}^{n*} S̄(n*-k+m, m) (-r)^k / k!`
/// 2. `Σ_{k=0}^{n*} S̄(m+n*, m+k) binom(-r, k)`
/// 3. `Σ_{k=0}^{m} binom(m,k) (-1)^(m-k) (k-r)^(m+n*) / (m+n*)!`
///
/// They agree as exact rationals, not only modulo `p`.
pub fn stirling_forms(n_star: u64, m: u64, r: i64) -> [BigRational; 3] {
    let minus_r = ratio(-r);
    let first = (0..=n_star)
        .map(|k| stirling2_bar(n_star - k + m, m) * rational_pow(&minus_r, k) / ratio(factorial(k)))
        .fold(BigRational::zero(), |a, b| a + b);
    let minus_r_int = BigInt::from(-r);
    let second = (0..=n_star)
        .map(|k| stirling2_bar(m + n_star, m + k) * ratio(binomial(&minus_r_int, k as i64)))
        .fold(BigRational::zero(), |a, b| a + b);
    let third_num: BigInt = (0..=m)
        .map(|k| sign_pow(m - k) * binom(m, k) * int_pow(k as i64 - r, m + n_star))
        .sum();
    let third = BigRational::new(third_num, factorial(m + n_star));
    [first, second, third]
}

/// `F_p(n,r) mod p` through a Bernoulli/Stirling evaluation at any
/// `m ≡ n (mod p)`.
///
/// For `m >= 0` the Stirling expressions (all three, cross-checked) give
/// `(-1)^n F_p(n,r)`; for `m <= 0` the value is
/// `(-1)^{n*}/n*! · B_{n*}^{(-m)}(-r) ≡ -(p-1-n*)! B_{n*}^{(-m)}(-r)`.
/// At `m = 0` both routes are taken and must agree.
pub fn thm12_eval(p: Prime, n: u64, r: i64, m: i64) -> Result<u64> {
    let pv = p.get();
    if residue(m - n as i64, pv) != 0 {
        return Err(FleckError::PreconditionViolation(format!(
            "m = {m} is not congruent to n = {n} modulo {p}"
        )));
    }
    let ns = n_star(p, n);
    let mut result = None;
    if m >= 0 {
        let forms = stirling_forms(ns, m as u64, r);
        if forms[0] != forms[1] || forms[0] != forms[2] {
            return Err(FleckError::Internal(format!(
                "Stirling expressions disagree at n* = {ns}, m = {m}, r = {r}"
            )));
        }
        let signed = &forms[0] * ratio(sign_pow(n));
        result = Some(reduce(&signed, p, "Stirling expression")?);
    }
    if m <= 0 {
        let order = (-m) as u64;
        let b = higher_bernoulli_poly_eval(ns, order, &ratio(-r));
        let via_factorial = &b * ratio(sign_pow(ns)) / ratio(factorial(ns));
        let via_wilson = -(&b * ratio(factorial(pv - 1 - ns)));
        let first = reduce(&via_factorial, p, "higher-order Bernoulli value")?;
        let second = reduce(&via_wilson, p, "higher-order Bernoulli value")?;
        if first != second {
            return Err(FleckError::Internal(format!(
                "Wilson form disagrees at p = {p}, n = {n}, r = {r}, m = {m}"
            )));
        }
        if let Some(prev) = result {
            if prev != first {
                return Err(FleckError::Internal(format!(
                    "m = 0 routes disagree at p = {p}, n = {n}, r = {r}"
                )));
            }
        }
        result = Some(first);
    }
    Ok(result.expect("m >= 0 or m <= 0"))
}

/// `F_p(pn, r) ≡ r^{n*}/n*!  (mod p)` with `n* = {-n}_{p-1}`.
pub fn cor11_eval(p: Prime, n: u64, r: i64) -> Result<u64> {
    let ns = n_star(p, n);
    let value = BigRational::new(int_pow(r, ns), factorial(ns));
    reduce(&value, p, "r^n*/n*!")
}

/// Residue formulas for the higher-order Bernoulli values
/// `B_{n1-n0}^{(p-n0)}(-r)` (when `n0 <= n1`) and
/// `B_{p-n0+n1-1}^{(p-n0)}(-r)` (when `n0 > n1`).
pub fn cor12_eval(p: Prime, n0: u64, n1: u64, r: i64) -> Result<u64> {
    let pv = p.get();
    if n0 >= pv || n1 + 2 > pv {
        return Err(FleckError::PreconditionViolation(format!(
            "need n0 in [0, {}] and n1 in [0, {}], got n0 = {n0}, n1 = {n1}",
            pv - 1,
            pv as i64 - 2
        )));
    }
    let value = if n0 <= n1 {
        // 1/(n1)_{n0} Σ binom(n0,k)(-1)^(n0-k)(k-r)^n1
        let falling = factorial(n1) / factorial(n1 - n0);
        BigRational::new(sign_pow(n0) * euler_sum(n0, r, n1), falling)
    } else if n1 == 0 {
        let s = residue(r, pv);
        // (-1)^(s-1) = -(-1)^s
        BigRational::new(-sign_pow(s) * binom(n0, s), factorial(n0))
    } else {
        BigRational::new(
            sign_pow(n1) * fermat_weighted_sum(p, n0, r, n1),
            factorial(n0 - n1) * factorial(n1 - 1),
        )
    };
    reduce(&value, p, "higher-order Bernoulli residue formula")
}

/// The degree and order of the higher-order Bernoulli value that
/// [`cor12_eval`] describes, as `(degree, order)`.
pub fn cor12_target(p: Prime, n0: u64, n1: u64) -> (u64, u64) {
    let order = p.get() - n0;
    if n0 <= n1 {
        (n1 - n0, order)
    } else {
        (p.get() - n0 + n1 - 1, order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cor14Mode {
    /// `F_p(n, 0) mod p` from `(-1)^n F_p(n,0) ≡ S̄(n*+{n}_p, {n}_p)`.
    ZeroResidue,
    /// `F_p(pn+p-1, r) mod p` from `(-1)^n F_p(pn+p-1,r) ≡ B_{n*}(-r)/n*!`.
    ShiftedIndex,
}

/// Evaluates either congruence for `F_p` at `r = 0` or at `pn+p-1`; `r` is
/// ignored in [`Cor14Mode::ZeroResidue`].
///
/// Each mode also evaluates the alternative right-hand side printed next to
/// it and fails with [`FleckError::Internal`] if the two disagree.
pub fn cor14_eval(p: Prime, n: u64, r: i64, mode: Cor14Mode) -> Result<u64> {
    let pv = p.get();
    let ns = n_star(p, n);
    let sign = ratio(sign_pow(n));
    let (first, second) = match mode {
        Cor14Mode::ZeroResidue => {
            let n0 = n % pv;
            let stirling = stirling2_bar(ns + n0, n0) * &sign;
            // any m >= 0 with m + n ≡ 0 (mod p)
            let m = residue(-(n as i64), pv);
            let bernoulli =
                crate::sequences::higher_bernoulli_number(ns, m) / ratio(factorial(ns)) * &sign;
            (stirling, bernoulli)
        }
        Cor14Mode::ShiftedIndex => {
            let poly = bernoulli_poly(ns);
            let direct = poly.eval(&ratio(-r)) / ratio(factorial(ns)) * &sign;
            let shifted = -(poly.eval(&ratio(r + 1)) * ratio(factorial(pv - 1 - ns))) * &sign;
            (direct, shifted)
        }
    };
    let a = reduce(&first, p, "two-route value")?;
    let b = reduce(&second, p, "two-route value")?;
    if a != b {
        return Err(FleckError::Internal(format!(
            "{mode:?} right-hand sides disagree at p = {p}, n = {n}, r = {r}"
        )));
    }
    Ok(a)
}

/// `F_p(pn-2, r) ≡ -n!(B_{p-n+1}(-r)/(n-1) + (r+1) B_{p-n}(-r)/n)  (mod p)`
/// for odd `p` and `3 <= n <= p`.
pub fn cor16_eval(p: Prime, n: u64, r: i64) -> Result<u64> {
    let pv = p.get();
    if !p.is_odd() || n < 3 || n > pv {
        return Err(FleckError::PreconditionViolation(format!(
            "need odd p and 3 <= n <= p, got p = {p}, n = {n}"
        )));
    }
    let t = ratio(-r);
    let high = bernoulli_poly(pv - n + 1).eval(&t) / ratio(n - 1);
    let low = ratio(r + 1) * bernoulli_poly(pv - n).eval(&t) / ratio(n);
    let value = -(ratio(factorial(n)) * (high + low));
    reduce(&value, p, "Bernoulli polynomial expression")
}

/// `d = {p^(a-1) - 1 - n}_{φ(p^a)}`, the number of extra zero-column terms
/// [`thm14_expand_r`] needs.
pub fn thm14_depth(pp: PrimePower, n: u64) -> u64 {
    residue(pp.lower_power() as i64 - 1 - n as i64, pp.totient())
}

/// `F_{p^a}(n,r) ≡ Σ_{k=0}^{d} binom(r+k-1, k) F_{p^a}(n+k, 0)  (mod p)`.
///
/// `zero_column[k]` is `F_{p^a}(n+k, 0) mod p` for `k = 0..=d`.
pub fn thm14_expand_r(pp: PrimePower, n: u64, r: i64, zero_column: &[u64]) -> Result<u64> {
    if n < pp.lower_power() {
        return Err(FleckError::PreconditionViolation(format!(
            "need n >= p^(a-1) = {}, got {n}",
            pp.lower_power()
        )));
    }
    let d = thm14_depth(pp, n);
    if zero_column.len() as u64 != d + 1 {
        return Err(FleckError::PreconditionViolation(format!(
            "expected {} zero-column residues, got {}",
            d + 1,
            zero_column.len()
        )));
    }
    let pb = pp.p().to_bigint();
    let upper_base = BigInt::from(r - 1);
    let total: BigInt = zero_column
        .iter()
        .enumerate()
        .map(|(k, &f)| binomial(&(&upper_base + k), k as i64) * f)
        .sum();
    Ok(crate::arith::least_residue(&total, &pb).as_u64())
}

/// Number of `r` in `[0, p)` whose residue formula value is nonzero.
pub fn nonvanishing_count(p: Prime, n: u64) -> Result<u64> {
    let mut count = 0;
    for r in 0..p.get() as i64 {
        if thm11_eval(p, n, r)?.0 != 0 {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums::{fleck_quotient, generalized_fleck};

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    fn direct(q: u64, n: u64, r: i64) -> u64 {
        fleck_quotient(p(q), n, r).unwrap().residue_mod(q)
    }

    #[test]
    fn branch_classification() {
        let t = BranchTag::classify(p(5), 13);
        assert_eq!((t.which, t.n0, t.n1), (Branch::GtPos, 3, 2));
        let t = BranchTag::classify(p(3), 4);
        assert_eq!((t.which, t.n0, t.n1), (Branch::Le, 1, 1));
        let t = BranchTag::classify(p(3), 2);
        assert_eq!((t.which, t.n0, t.n1), (Branch::GtZero, 2, 0));
    }

    #[test]
    fn thm11_examples() {
        assert_eq!(thm11_eval(p(3), 4, 2).unwrap().0, 1);
        assert_eq!(thm11_eval(p(3), 2, 1).unwrap().0, 1);
        assert_eq!(thm11_eval(p(5), 13, 0).unwrap().0, 3);
    }

    #[test]
    fn thm11_matches_direct_small() {
        for q in [2u64, 3, 5, 7] {
            for n in 0..120 {
                for r in -2..(q as i64 + 2) {
                    assert_eq!(
                        thm11_eval(p(q), n, r).unwrap().0,
                        direct(q, n, r),
                        "p={q} n={n} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn thm12_examples() {
        assert_eq!(thm12_eval(p(3), 4, 2, 1).unwrap(), 1);
        assert_eq!(thm12_eval(p(3), 2, 0, -1).unwrap(), 1);
        for q in [3u64, 5, 7] {
            assert_eq!(thm12_eval(p(q), 0, 1, 0).unwrap(), 1);
        }
        assert!(matches!(
            thm12_eval(p(5), 7, 0, 1),
            Err(FleckError::PreconditionViolation(_))
        ));
    }

    #[test]
    fn thm12_with_far_m() {
        // any m ≡ n (mod p) works, not just the two canonical choices
        for n in 0..40u64 {
            let base = (n % 5) as i64;
            for m in [base + 5, base + 10, base - 10] {
                assert_eq!(
                    thm12_eval(p(5), n, 2, m).unwrap(),
                    direct(5, n, 2),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn cor11_examples() {
        assert_eq!(cor11_eval(p(3), 1, 1).unwrap(), 1);
        assert_eq!(direct(3, 3, 1), 1);
        assert_eq!(cor11_eval(p(5), 2, 3).unwrap(), 2);
        assert_eq!(direct(5, 10, 3), 2);
        // n* = {-n}_{p-1} > 0 forces 0^{n*} = 0 at r = 0
        for q in [3u64, 5, 7, 11] {
            assert_eq!(cor11_eval(p(q), 1, 0).unwrap(), 0);
            assert_eq!(cor11_eval(p(q), q - 1, 0).unwrap(), 1);
        }
    }

    #[test]
    fn cor12_examples_and_targets() {
        assert_eq!(cor12_eval(p(3), 0, 0, 0).unwrap(), 1);
        assert_eq!(cor12_eval(p(3), 1, 0, 0).unwrap(), 2);
        assert_eq!(cor12_eval(p(5), 2, 1, 0).unwrap(), 4);
        assert_eq!(cor12_target(p(5), 2, 1), (3, 3));
        assert!(cor12_eval(p(5), 5, 0, 0).is_err());
        assert!(cor12_eval(p(5), 1, 4, 0).is_err());
    }

    #[test]
    fn cor12_matches_bernoulli_values() {
        for q in [2u64, 3, 5, 7, 11] {
            for n0 in 0..q {
                for n1 in 0..q - 1 {
                    let (deg, ord) = cor12_target(p(q), n0, n1);
                    for r in -3..(q as i64 + 3) {
                        let lhs = crate::sequences::higher_bernoulli_mod_p(
                            deg,
                            ord,
                            &BigInt::from(-r),
                            p(q),
                        )
                        .unwrap();
                        assert_eq!(
                            cor12_eval(p(q), n0, n1, r).unwrap(),
                            lhs,
                            "p={q} n0={n0} n1={n1} r={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cor14_examples() {
        assert_eq!(cor14_eval(p(3), 4, 0, Cor14Mode::ZeroResidue).unwrap(), 1);
        assert_eq!(cor14_eval(p(3), 1, 0, Cor14Mode::ShiftedIndex).unwrap(), 2);
        assert_eq!(direct(3, 5, 0), 2);
    }

    #[test]
    fn cor14_modes_match_direct_and_thm12() {
        for q in [2u64, 3, 5, 7] {
            for n in 0..=10u64 {
                assert_eq!(
                    cor14_eval(p(q), n, 0, Cor14Mode::ZeroResidue).unwrap(),
                    direct(q, n, 0)
                );
                for r in 0..q as i64 {
                    let target = q * n + q - 1;
                    let b = cor14_eval(p(q), n, r, Cor14Mode::ShiftedIndex).unwrap();
                    assert_eq!(b, thm12_eval(p(q), target, r, -1).unwrap());
                    assert_eq!(b, direct(q, target, r));
                }
            }
        }
    }

    #[test]
    fn cor16_examples() {
        assert_eq!(cor16_eval(p(5), 3, 0).unwrap(), 3);
        assert_eq!(
            cor16_eval(p(5), 3, 0).unwrap(),
            thm11_eval(p(5), 13, 0).unwrap().0
        );
        // F_7(19, 1) = -209 ≡ 1 (mod 7)
        assert_eq!(cor16_eval(p(7), 3, 1).unwrap(), 1);
        assert!(cor16_eval(p(5), 2, 0).is_err());
        assert!(cor16_eval(p(5), 6, 0).is_err());
        assert!(cor16_eval(p(2), 2, 0).is_err());
    }

    #[test]
    fn cor16_matches_direct() {
        for q in [3u64, 5, 7, 11, 13] {
            for n in 3..=q {
                for r in -2..(q as i64 + 2) {
                    assert_eq!(
                        cor16_eval(p(q), n, r).unwrap(),
                        direct(q, q * n - 2, r),
                        "p={q} n={n} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn thm14_examples() {
        let four = PrimePower::new(2, 2).unwrap();
        // F_4(4,0) = -1, F_4(5,0) = -3
        assert_eq!(thm14_depth(four, 4), 1);
        assert_eq!(thm14_expand_r(four, 4, 1, &[1, 1]).unwrap(), 0);
        assert_eq!(thm14_depth(four, 5), 0);
        assert_eq!(thm14_expand_r(four, 5, 1, &[1]).unwrap(), 1);
        assert!(thm14_expand_r(four, 5, 1, &[1, 1]).is_err());
        assert!(thm14_expand_r(four, 1, 1, &[1]).is_err());
        let nine = PrimePower::new(3, 2).unwrap();
        let d = thm14_depth(nine, 7);
        let col = vec![2; d as usize + 1];
        assert_eq!(thm14_expand_r(nine, 7, 0, &col).unwrap(), 2);
    }

    #[test]
    fn thm14_matches_direct_small() {
        for (q, a) in [(2u64, 2u32), (2, 3), (3, 2)] {
            let pp = PrimePower::new(q, a).unwrap();
            for n in pp.lower_power()..pp.lower_power() + 2 * pp.totient() + 4 {
                let d = thm14_depth(pp, n);
                let col: Vec<u64> = (0..=d)
                    .map(|k| generalized_fleck(pp, n + k, 0).unwrap().residue_mod(q))
                    .collect();
                for r in 0..pp.modulus() as i64 {
                    let expect = generalized_fleck(pp, n, r).unwrap().residue_mod(q);
                    assert_eq!(
                        thm14_expand_r(pp, n, r, &col).unwrap(),
                        expect,
                        "{pp} n={n} r={r}"
                    );
                }
            }
        }
    }
}

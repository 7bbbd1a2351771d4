//! Congruence checks. The left side of every check is a direct big-integer
//! sum; the right side is the closed formula being tested.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{
    binom, binomial, divides, factorial, legendre, p_adic_order, ratio, rational_mod_prime_power,
    residue, sign_pow, ExtendedOrder, Prime, PrimePower,
};
use crate::class_field::{class_number_imaginary, real_class_and_unit, regularity};
use crate::closed_forms::{thm11_eval, thm12_eval, thm14_depth};
use crate::error::{FleckError, Result};
use crate::sequences::{bernoulli_number, bernoulli_poly};
use crate::sums::{fleck_floor, fleck_quotient, fleck_row, generalized_fleck};

/// How `lhs` and `rhs` are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `modulus | lhs - rhs`
    Congruent,
    /// `lhs >= rhs`; the modulus is 1.
    AtLeast,
}

pub type Params = BTreeMap<String, i64>;

pub fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    pub check_id: String,
    pub params: Params,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub modulus: BigInt,
    pub holds: bool,
    pub relation: Relation,
    pub elapsed: Duration,
}

impl CongruenceReport {
    pub fn congruent(id: &str, params: Params, lhs: BigInt, rhs: BigInt, modulus: BigInt) -> Self {
        assert!(modulus >= BigInt::one(), "modulus must be at least 1");
        let holds = divides(&modulus, &(&lhs - &rhs));
        CongruenceReport {
            check_id: id.to_string(),
            params,
            lhs,
            rhs,
            modulus,
            holds,
            relation: Relation::Congruent,
            elapsed: Duration::ZERO,
        }
    }

    pub fn at_least(id: &str, params: Params, lhs: BigInt, rhs: BigInt) -> Self {
        let holds = lhs >= rhs;
        CongruenceReport {
            check_id: id.to_string(),
            params,
            lhs,
            rhs,
            modulus: BigInt::one(),
            holds,
            relation: Relation::AtLeast,
            elapsed: Duration::ZERO,
        }
    }

    /// Recomputes `holds` from the stored sides.
    pub fn recheck(&self) -> bool {
        match self.relation {
            Relation::Congruent => {
                self.modulus >= BigInt::one() && divides(&self.modulus, &(&self.lhs - &self.rhs))
            }
            Relation::AtLeast => self.lhs >= self.rhs,
        }
    }

    fn timed(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }
}

/// Turns an integrality failure into a failing report (`lhs` the raw sum,
/// `rhs` 0, modulus the power of `p` that should have divided it). Other
/// errors pass through.
pub fn downgrade_integrality(
    id: &str,
    params: Params,
    outcome: Result<CongruenceReport>,
) -> Result<CongruenceReport> {
    match outcome {
        Err(FleckError::IntegralityViolation {
            p,
            raw_sum,
            exponent,
            ..
        }) => {
            let modulus = prime_power_modulus(p, exponent);
            Ok(CongruenceReport::congruent(
                id,
                params,
                raw_sum,
                BigInt::zero(),
                modulus,
            ))
        }
        other => other,
    }
}

/// `p^e`, or 1 when `e <= 0`.
pub fn prime_power_modulus(p: u64, e: i64) -> BigInt {
    if e <= 0 {
        BigInt::one()
    } else {
        num_traits::pow(BigInt::from(p), e as usize)
    }
}

/// An exact side that may be a `p`-integral fraction: integers are kept as
/// they are, fractions are reduced into `[0, p^k)`.
fn exact_or_residue(x: &BigRational, p: Prime, k: u32) -> Result<BigInt> {
    if x.is_integer() {
        return Ok(x.to_integer());
    }
    match rational_mod_prime_power(x, p, k) {
        Ok(r) => Ok(r.value().clone()),
        Err(FleckError::NonUnitDenominator { denominator, .. }) => Err(FleckError::Internal(
            format!("right side has denominator {denominator} divisible by {p}"),
        )),
        Err(e) => Err(e),
    }
}

fn fleck_value(p: Prime, n: u64, r: i64) -> Result<BigInt> {
    Ok(fleck_quotient(p, n, r)?.value)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(FleckError::PreconditionViolation(msg()))
    }
}

/// `Σ_{k=0}^n binom(n,k)(-1)^k F_p(k p^a (p-1) + l, r) ≡ 0` modulo
/// `p^(an + ⌈(n - l*)/(p-1)⌉)`, `l* = {-l}_{p-1}`.
pub fn check_thm13(p: Prime, a: u32, l: u64, n: u64, r: i64) -> Result<CongruenceReport> {
    let start = Instant::now();
    let pv = p.get();
    let step = pv.pow(a) * (pv - 1);
    let mut lhs = BigInt::zero();
    for k in 0..=n {
        lhs += sign_pow(k) * binom(n, k) * fleck_value(p, k * step + l, r)?;
    }
    let l_star = residue(-(l as i64), pv - 1);
    let ceil = Integer::div_ceil(&(n as i64 - l_star as i64), &(pv as i64 - 1));
    let exponent = a as i64 * n as i64 + ceil;
    let ps = params(&[
        ("p", pv as i64),
        ("a", a as i64),
        ("l", l as i64),
        ("n", n as i64),
        ("r", r),
    ]);
    Ok(CongruenceReport::congruent(
        "alternating_quotient_sum",
        ps,
        lhs,
        BigInt::zero(),
        prime_power_modulus(pv, exponent),
    )
    .timed(start))
}

/// The three Kummer-type congruences `F_p(j p^a (p-1) + l, r)` against the
/// binomial combination of the earlier terms, modulo `p^(ja)` for `j = 1, 2, 3`.
pub fn check_kummer_family(p: Prime, a: u32, l: u64, r: i64) -> Result<Vec<CongruenceReport>> {
    let pv = p.get();
    let step = pv.pow(a) * (pv - 1);
    let values = (0..=3)
        .map(|k| fleck_value(p, k * step + l, r))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(3);
    for j in 1..=3u64 {
        let start = Instant::now();
        let rhs: BigInt = (0..j)
            .map(|k| sign_pow(j - 1 - k) * binom(j, k) * &values[k as usize])
            .sum();
        let ps = params(&[
            ("p", pv as i64),
            ("a", a as i64),
            ("l", l as i64),
            ("r", r),
            ("j", j as i64),
        ]);
        out.push(
            CongruenceReport::congruent(
                "kummer_type",
                ps,
                values[j as usize].clone(),
                rhs,
                prime_power_modulus(pv, (j * a as u64) as i64),
            )
            .timed(start),
        );
    }
    Ok(out)
}

/// Sub-families of the binomial congruences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RemarkSelector {
    All,
    /// `binom(2p-1, p-1) ≡ 1 (mod p³)`, `p >= 5`.
    Wolstenholme,
    /// `binom(2pn-1, pn-1) ≡ Σ_{k<n} (-1)^(n-1-k) binom(2pn, pk) (mod p^(2n+1))`, `p > 2n+1`.
    CentralBinomial,
    /// `binom(pn-1, p-1) ≡ 1 - n(n-1)/3 · p³ B_{p-3} (mod p⁴)`, `p >= 5`.
    Glaisher,
    /// `binom(2p-1, p+r) + (-1)^p binom(2p-1, r) ≡ (-1)^r p² B_{p-2}(-r) (mod p³)`.
    BinomialPair,
    /// `Σ_{k=1}^n (-1)^(pk-1) binom(pn-1, pk-1) ≡ (n-1)! B_{p-n} p^n (mod p^(n+1))`.
    BinomialSum,
    /// The half-range sum against `h(-p)`, `p > 3`.
    HalfSum,
    /// Valuations of the alternating sums against the regularity of `p`.
    Regularity,
}

impl RemarkSelector {
    pub const PARTS: [RemarkSelector; 7] = [
        RemarkSelector::Wolstenholme,
        RemarkSelector::CentralBinomial,
        RemarkSelector::Glaisher,
        RemarkSelector::BinomialPair,
        RemarkSelector::BinomialSum,
        RemarkSelector::HalfSum,
        RemarkSelector::Regularity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            RemarkSelector::All => "all",
            RemarkSelector::Wolstenholme => "wolstenholme",
            RemarkSelector::CentralBinomial => "central_binomial",
            RemarkSelector::Glaisher => "glaisher",
            RemarkSelector::BinomialPair => "binomial_pair",
            RemarkSelector::BinomialSum => "binomial_sum",
            RemarkSelector::HalfSum => "half_sum_class_number",
            RemarkSelector::Regularity => "regularity_criterion",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        std::iter::once(RemarkSelector::All)
            .chain(Self::PARTS)
            .find(|sel| sel.id() == s)
    }

    fn applies(self, p: u64) -> bool {
        match self {
            RemarkSelector::All => true,
            RemarkSelector::Wolstenholme | RemarkSelector::Glaisher => p >= 5,
            RemarkSelector::CentralBinomial => p > 3,
            RemarkSelector::BinomialPair | RemarkSelector::BinomialSum => true,
            RemarkSelector::HalfSum | RemarkSelector::Regularity => p > 3,
        }
    }
}

/// Runs the selected binomial congruences for every legal sub-parameter.
/// A specific selector that does not apply to `p` is a precondition error;
/// [`RemarkSelector::All`] silently skips those.
pub fn check_remark_family(p: Prime, selector: RemarkSelector) -> Result<Vec<CongruenceReport>> {
    let parts: Vec<RemarkSelector> = match selector {
        RemarkSelector::All => RemarkSelector::PARTS
            .into_iter()
            .filter(|s| s.applies(p.get()))
            .collect(),
        s => {
            require(s.applies(p.get()), || {
                format!("{} does not apply to p = {p}", s.id())
            })?;
            vec![s]
        }
    };
    let mut out = Vec::new();
    for part in parts {
        match part {
            RemarkSelector::Wolstenholme => out.push(wolstenholme(p)),
            RemarkSelector::CentralBinomial => {
                let mut n = 1;
                while 2 * n + 1 < p.get() {
                    out.push(central_binomial(p, n));
                    n += 1;
                }
            }
            RemarkSelector::Glaisher => {
                for n in 1..=p.get() {
                    out.push(glaisher(p, n)?);
                }
            }
            RemarkSelector::BinomialPair => {
                for r in 0..p.get() {
                    out.push(binomial_pair(p, r)?);
                }
            }
            RemarkSelector::BinomialSum => {
                for n in 2..=p.get() {
                    out.push(binomial_sum(p, n)?);
                }
            }
            RemarkSelector::HalfSum => out.push(half_sum(p)?),
            RemarkSelector::Regularity => out.push(regularity_criterion(p)?),
            RemarkSelector::All => unreachable!(),
        }
    }
    Ok(out)
}

pub fn wolstenholme(p: Prime) -> CongruenceReport {
    let start = Instant::now();
    let pv = p.get();
    CongruenceReport::congruent(
        "wolstenholme",
        params(&[("p", pv as i64)]),
        binom(2 * pv - 1, pv - 1),
        BigInt::one(),
        prime_power_modulus(pv, 3),
    )
    .timed(start)
}

pub fn central_binomial(p: Prime, n: u64) -> CongruenceReport {
    let start = Instant::now();
    let pv = p.get();
    let rhs: BigInt = (0..n)
        .map(|k| sign_pow(n - 1 - k) * binom(2 * pv * n, pv * k))
        .sum();
    CongruenceReport::congruent(
        "central_binomial",
        params(&[("p", pv as i64), ("n", n as i64)]),
        binom(2 * pv * n - 1, pv * n - 1),
        rhs,
        prime_power_modulus(pv, 2 * n as i64 + 1),
    )
    .timed(start)
}

pub fn glaisher(p: Prime, n: u64) -> Result<CongruenceReport> {
    let start = Instant::now();
    let pv = p.get();
    let rhs =
        ratio(1) - ratio(n * (n - 1)) / ratio(3) * ratio(pv.pow(3)) * bernoulli_number(pv - 3);
    Ok(CongruenceReport::congruent(
        "glaisher",
        params(&[("p", pv as i64), ("n", n as i64)]),
        binom(pv * n - 1, pv - 1),
        exact_or_residue(&rhs, p, 4)?,
        prime_power_modulus(pv, 4),
    )
    .timed(start))
}

pub fn binomial_pair(p: Prime, r: u64) -> Result<CongruenceReport> {
    let start = Instant::now();
    let pv = p.get();
    let lhs = binom(2 * pv - 1, pv + r) + sign_pow(pv) * binom(2 * pv - 1, r);
    let b = bernoulli_poly(pv - 2).eval(&ratio(-(r as i64)));
    let rhs = ratio(sign_pow(r)) * ratio(pv * pv) * b;
    Ok(CongruenceReport::congruent(
        "binomial_pair",
        params(&[("p", pv as i64), ("r", r as i64)]),
        lhs,
        exact_or_residue(&rhs, p, 3)?,
        prime_power_modulus(pv, 3),
    )
    .timed(start))
}

pub fn binomial_sum(p: Prime, n: u64) -> Result<CongruenceReport> {
    let start = Instant::now();
    let pv = p.get();
    let lhs: BigInt = (1..=n)
        .map(|k| sign_pow(pv * k - 1) * binom(pv * n - 1, pv * k - 1))
        .sum();
    let rhs = ratio(factorial(n - 1))
        * bernoulli_number(pv - n)
        * ratio(prime_power_modulus(pv, n as i64));
    Ok(CongruenceReport::congruent(
        "binomial_sum",
        params(&[("p", pv as i64), ("n", n as i64)]),
        lhs,
        exact_or_residue(&rhs, p, n as u32 + 1)?,
        prime_power_modulus(pv, n as i64 + 1),
    )
    .timed(start))
}

pub fn half_sum(p: Prime) -> Result<CongruenceReport> {
    let start = Instant::now();
    let pv = p.get();
    require(pv > 3, || format!("half-range sum needs p > 3, got {p}"))?;
    let half = (pv - 1) / 2;
    let lhs: BigInt = (1..=half)
        .map(|k| sign_pow(k - 1) * binom(pv * half - 1, pv * k - 1))
        .sum();
    let rhs = if pv % 4 == 3 {
        let h = class_number_imaginary(p)?.h_minus_p;
        sign_pow((h + 1) / 2) * BigInt::from(h) * prime_power_modulus(pv, half as i64)
    } else {
        BigInt::zero()
    };
    Ok(CongruenceReport::congruent(
        "half_sum_class_number",
        params(&[("p", pv as i64)]),
        lhs,
        rhs,
        prime_power_modulus(pv, half as i64 + 1),
    )
    .timed(start))
}

/// Counts odd `n` in `3..=p-2` whose alternating sum
/// `Σ_{k=1}^n (-1)^k binom(pn-1, pk-1)` has `p`-adic order other than `n`,
/// against the number of Bernoulli numerators divisible by `p`. Both counts
/// are below `p/2`, so congruence modulo `p` is equality.
pub fn regularity_criterion(p: Prime) -> Result<CongruenceReport> {
    let start = Instant::now();
    let pv = p.get();
    require(pv > 3, || {
        format!("regularity criterion needs p > 3, got {p}")
    })?;
    let mut failing = 0u64;
    for n in (3..=pv - 2).step_by(2) {
        let s: BigInt = (1..=n)
            .map(|k| sign_pow(k) * binom(pv * n - 1, pv * k - 1))
            .sum();
        if p_adic_order(&s, p) != ExtendedOrder::Finite(n) {
            failing += 1;
        }
    }
    let offending = regularity(p)?.offending_indices.len() as u64;
    Ok(CongruenceReport::congruent(
        "regularity_criterion",
        params(&[("p", pv as i64)]),
        BigInt::from(failing),
        BigInt::from(offending),
        p.to_bigint(),
    )
    .timed(start))
}

/// `F_p(p(p-1)/2, r)` against the Legendre symbol times the class-number
/// sign (and `v/2` when `p ≡ 1 (mod 4)`), modulo `p`.
pub fn check_cor11_classnumber(p: Prime, r: i64) -> Result<CongruenceReport> {
    let start = Instant::now();
    let pv = p.get();
    require(pv > 3, || {
        format!("class-number congruence needs p > 3, got {p}")
    })?;
    let lhs = fleck_value(p, pv * (pv - 1) / 2, r)?;
    let symbol = BigInt::from(legendre(&BigInt::from(r), p)?);
    let rhs = if pv % 4 == 3 {
        let h = class_number_imaginary(p)?.h_minus_p;
        sign_pow((h + 1) / 2) * symbol
    } else {
        let data = real_class_and_unit(p)?;
        let value = ratio(sign_pow((data.h_p - 1) / 2) * symbol)
            * BigRational::new(data.v.clone(), BigInt::from(2));
        exact_or_residue(&value, p, 1)?
    };
    Ok(CongruenceReport::congruent(
        "class_number_sign",
        params(&[("p", pv as i64), ("r", r)]),
        lhs,
        rhs,
        p.to_bigint(),
    )
    .timed(start))
}

/// Number of `r` in `[0, p)` with `ord_p(C_p(n,r)) = ⌊(n-1)/(p-1)⌋`, at
/// least `p - n*`.
pub fn check_sharpness(p: Prime, n: u64) -> Result<CongruenceReport> {
    let start = Instant::now();
    require(n >= 1, || "sharpness needs n >= 1".into())?;
    let pv = p.get();
    let floor = fleck_floor(p, n) as u64;
    let row = fleck_row(p.into(), n)?;
    let count = row
        .iter()
        .filter(|v| p_adic_order(&v.raw_sum, p) == ExtendedOrder::Finite(floor))
        .count();
    let n_star = residue(-(n as i64), pv - 1);
    Ok(CongruenceReport::at_least(
        "sharpness",
        params(&[("p", pv as i64), ("n", n as i64)]),
        BigInt::from(count),
        BigInt::from(pv - n_star),
    )
    .timed(start))
}

fn pp_params(pp: PrimePower, rest: &[(&str, i64)]) -> Params {
    let mut ps = params(&[("p", pp.p().get() as i64), ("a", pp.a() as i64)]);
    ps.extend(rest.iter().map(|&(k, v)| (k.to_string(), v)));
    ps
}

/// `F_{p^a}(n + p^a(p-1), r) ≡ F_{p^a}(n, r) (mod p)` for `n >= 2p^(a-1)`.
pub fn check_thm14_period(pp: PrimePower, n: u64, r: i64) -> Result<CongruenceReport> {
    let start = Instant::now();
    require(n >= 2 * pp.lower_power(), || {
        format!("period needs n >= {}, got {n}", 2 * pp.lower_power())
    })?;
    let shift = pp.modulus() * (pp.p().get() - 1);
    Ok(CongruenceReport::congruent(
        "prime_power_period",
        pp_params(pp, &[("n", n as i64), ("r", r)]),
        generalized_fleck(pp, n + shift, r)?.value,
        generalized_fleck(pp, n, r)?.value,
        pp.p().to_bigint(),
    )
    .timed(start))
}

/// Number of `r` in `[0, p^a)` with `p ∤ F_{p^a}(n, r)`, at least 1.
pub fn check_thm14_floor_attained(pp: PrimePower, n: u64) -> Result<CongruenceReport> {
    let start = Instant::now();
    require(n >= pp.lower_power(), || {
        format!("floor attainment needs n >= {}, got {n}", pp.lower_power())
    })?;
    let pb = pp.p().to_bigint();
    let count = fleck_row(pp, n)?
        .iter()
        .filter(|v| !divides(&pb, &v.value))
        .count();
    Ok(CongruenceReport::at_least(
        "floor_attained",
        pp_params(pp, &[("n", n as i64)]),
        BigInt::from(count),
        BigInt::one(),
    )
    .timed(start))
}

/// `F_{p^a}(n,r) ≡ Σ_{k=0}^d binom(r+k-1, k) F_{p^a}(n+k, 0) (mod p)`.
pub fn check_thm14_expand(pp: PrimePower, n: u64, r: i64) -> Result<CongruenceReport> {
    let start = Instant::now();
    require(n >= pp.lower_power(), || {
        format!("r-expansion needs n >= {}, got {n}", pp.lower_power())
    })?;
    let d = thm14_depth(pp, n);
    let mut rhs = BigInt::zero();
    for k in 0..=d {
        let f = generalized_fleck(pp, n + k, 0)?.value;
        rhs += binomial(&BigInt::from(r + k as i64 - 1), k as i64) * f;
    }
    Ok(CongruenceReport::congruent(
        "r_expansion",
        pp_params(pp, &[("n", n as i64), ("r", r)]),
        generalized_fleck(pp, n, r)?.value,
        rhs,
        pp.p().to_bigint(),
    )
    .timed(start))
}

/// Direct `F_p(n,r)` against the three-branch residue formula.
pub fn check_thm11(p: Prime, n: u64, r: i64) -> Result<CongruenceReport> {
    let start = Instant::now();
    let (formula, _) = thm11_eval(p, n, r)?;
    Ok(CongruenceReport::congruent(
        "residue_formula",
        params(&[("p", p.get() as i64), ("n", n as i64), ("r", r)]),
        fleck_value(p, n, r)?,
        BigInt::from(formula),
        p.to_bigint(),
    )
    .timed(start))
}

/// Direct `F_p(n,r)` against the Stirling (`m >= 0`) or higher-order
/// Bernoulli (`m <= 0`) formula with `m ≡ n (mod p)`.
pub fn check_thm12(p: Prime, n: u64, r: i64, m: i64) -> Result<CongruenceReport> {
    let start = Instant::now();
    let formula = thm12_eval(p, n, r, m)?;
    Ok(CongruenceReport::congruent(
        "stirling_bernoulli_formula",
        params(&[("p", p.get() as i64), ("n", n as i64), ("r", r), ("m", m)]),
        fleck_value(p, n, r)?,
        BigInt::from(formula),
        p.to_bigint(),
    )
    .timed(start))
}

/// All reports hold.
pub fn all_hold(reports: &[CongruenceReport]) -> bool {
    reports.iter().all(|r| r.holds)
}

/// Number of failing reports.
pub fn failures(reports: &[CongruenceReport]) -> usize {
    reports.iter().filter(|r| !r.holds).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    fn pp(q: u64, a: u32) -> PrimePower {
        PrimePower::new(q, a).unwrap()
    }

    #[test]
    fn thm13_examples() {
        let rep = check_thm13(p(3), 1, 1, 1, 0).unwrap();
        assert_eq!(
            (rep.lhs.clone(), rep.modulus.clone()),
            (BigInt::zero(), BigInt::from(3))
        );
        assert!(rep.holds);
        let rep = check_thm13(p(5), 1, 3, 0, 2).unwrap();
        assert_eq!(rep.modulus, BigInt::one());
        assert!(rep.holds);
        // l* = 0, exponent 2·1 + ⌈2/1⌉ = 4
        let rep = check_thm13(p(2), 1, 2, 2, 0).unwrap();
        assert_eq!(
            (rep.lhs.clone(), rep.modulus.clone()),
            (BigInt::zero(), BigInt::from(16))
        );
        assert!(rep.holds);
    }

    #[test]
    fn kummer_examples() {
        let reps = check_kummer_family(p(3), 1, 1, 0).unwrap();
        assert_eq!(reps.len(), 3);
        assert_eq!(
            (reps[0].lhs.clone(), reps[0].rhs.clone()),
            (BigInt::one(), BigInt::one())
        );
        assert!(all_hold(&reps));
        let reps = check_kummer_family(p(2), 1, 2, 0).unwrap();
        assert_eq!(reps[0].lhs, BigInt::from(-1));
        assert_eq!(reps[0].rhs, BigInt::from(-1));
        assert!(all_hold(&reps));
    }

    #[test]
    fn remark_examples() {
        let w = wolstenholme(p(5));
        assert_eq!(
            (w.lhs.clone(), w.rhs.clone(), w.modulus.clone()),
            (126.into(), 1.into(), 125.into())
        );
        assert!(w.holds);
        let s = binomial_sum(p(5), 3).unwrap();
        assert_eq!(
            (s.lhs.clone(), s.rhs.clone(), s.modulus.clone()),
            ((-1000).into(), 250.into(), 625.into())
        );
        assert!(s.holds);
        let h = half_sum(p(7)).unwrap();
        assert_eq!(
            (h.lhs.clone(), h.rhs.clone(), h.modulus.clone()),
            ((-38759).into(), (-343).into(), 2401.into())
        );
        assert!(h.holds);
        let b = binomial_pair(p(5), 1).unwrap();
        assert_eq!((b.lhs.clone(), b.rhs.clone()), (75.into(), 75.into()));
        let g = glaisher(p(7), 3).unwrap();
        assert_eq!(g.lhs, BigInt::from(38760));
        assert_eq!(g.lhs.mod_floor(&g.modulus), BigInt::from(344));
        assert_eq!(g.rhs, BigInt::from(344));
        let c = central_binomial(p(7), 2);
        assert_eq!(c.modulus, BigInt::from(16807));
        assert_eq!(c.lhs.mod_floor(&c.modulus), BigInt::from(7549));
        assert_eq!(c.rhs.mod_floor(&c.modulus), BigInt::from(7549));
    }

    #[test]
    fn remark_selectors() {
        assert!(check_remark_family(p(3), RemarkSelector::Wolstenholme).is_err());
        let all = check_remark_family(p(3), RemarkSelector::All).unwrap();
        assert!(all.iter().all(|r| r.check_id != "wolstenholme"));
        let all = check_remark_family(p(11), RemarkSelector::All).unwrap();
        assert!(all_hold(&all));
        for s in RemarkSelector::PARTS {
            assert_eq!(RemarkSelector::from_id(s.id()), Some(s));
        }
    }

    #[test]
    fn classnumber_examples() {
        let rep = check_cor11_classnumber(p(7), 1).unwrap();
        assert_eq!(
            (rep.lhs.clone(), rep.rhs.clone()),
            ((-435).into(), (-1).into())
        );
        assert!(rep.holds);
        let rep = check_cor11_classnumber(p(7), 0).unwrap();
        assert_eq!(rep.rhs, BigInt::zero());
        assert!(rep.holds);
        assert!(check_cor11_classnumber(p(13), 1).unwrap().holds);
        assert!(check_cor11_classnumber(p(3), 1).is_err());
    }

    #[test]
    fn sharpness_examples() {
        let rep = check_sharpness(p(3), 5).unwrap();
        assert_eq!((rep.lhs.clone(), rep.rhs.clone()), (2.into(), 2.into()));
        let rep = check_sharpness(p(3), 4).unwrap();
        assert_eq!((rep.lhs.clone(), rep.rhs.clone()), (3.into(), 3.into()));
        assert!(check_sharpness(p(7), 1).unwrap().holds);
        assert!(check_sharpness(p(7), 0).is_err());
    }

    #[test]
    fn period_examples() {
        let rep = check_thm14_period(pp(2, 2), 4, 0).unwrap();
        assert_eq!(
            (rep.lhs.clone(), rep.rhs.clone()),
            ((-9).into(), (-1).into())
        );
        assert!(rep.holds);
        assert!(check_thm14_period(pp(2, 2), 4, 1).unwrap().holds);
        assert!(check_thm14_period(pp(3, 2), 18, 0).unwrap().holds);
        assert!(check_thm14_period(pp(3, 2), 5, 0).is_err());
        assert!(check_thm14_floor_attained(pp(3, 2), 3).unwrap().holds);
        assert!(check_thm14_expand(pp(2, 3), 9, 5).unwrap().holds);
    }

    #[test]
    fn downgrade_keeps_other_errors() {
        let ps = params(&[("p", 3)]);
        let bad = Err(FleckError::IntegralityViolation {
            p: 3,
            modulus: 3,
            n: 4,
            r: 0,
            raw_sum: BigInt::from(5),
            exponent: 1,
        });
        let rep = downgrade_integrality("x", ps.clone(), bad).unwrap();
        assert!(!rep.holds && rep.recheck() == rep.holds);
        let other = Err(FleckError::ResourceLimit { n: 9, limit: 1 });
        assert!(downgrade_integrality("x", ps, other).is_err());
    }

    #[test]
    fn at_least_relation() {
        let rep = CongruenceReport::at_least("x", Params::new(), 2.into(), 3.into());
        assert!(!rep.holds && !rep.recheck());
    }
}

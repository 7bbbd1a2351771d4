use std::io::Write;

use flecklab::arith::{Prime, PrimePower};
use flecklab::class_field::{
    chowla_value, class_number_imaginary, half_factorial_mod_p, mordell_value, real_class_and_unit,
    regularity,
};
use flecklab::harness::{
    self, downgrade_integrality, params, CongruenceReport, Params, RemarkSelector,
};
use flecklab::scan::{scan_conjecture11, ScanCursor, ScanOptions, ScanRange, CONJECTURE_ID};
use flecklab::sums::{fleck_row, generalized_fleck};
use flecklab::{FleckError, Result as LibResult};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::args::{self, big, nonneg, range_i64, range_u32, range_u64};
use crate::emit::{emit, ClassRecord, EvalRecord, Format, ReportRecord, ScanRecord, TableRecord};
use crate::{ClassArgs, CliError, EvalArgs, ScanArgs, Suite, TableArgs, VerifyArgs};

type Task = Box<dyn Fn() -> LibResult<Vec<CongruenceReport>> + Send + Sync>;

fn prime_power(p: &str, a: &str) -> Result<PrimePower, CliError> {
    let p = Prime::new(nonneg("p", p)?)?;
    let a =
        u32::try_from(nonneg("a", a)?).map_err(|_| CliError::Usage("--a is too large".into()))?;
    if a == 0 {
        return Err(CliError::Usage("--a must be at least 1".into()));
    }
    Ok(PrimePower::from_prime(p, a)?)
}

/// Reduces `r` into `[0, m)`; the alternating sum only sees `r mod m`.
fn reduce_r(r: &BigInt, m: u64) -> i64 {
    let m = BigInt::from(m);
    ((r % &m + &m) % &m).to_i64().expect("residue fits")
}

pub fn eval(a: &EvalArgs, format: Format, out: &mut impl Write) -> Result<bool, CliError> {
    let pp = prime_power(&a.p, &a.a)?;
    let n = nonneg("n", &a.n)?;
    let r = big("r", &a.r)?;
    let v = generalized_fleck(pp, n, reduce_r(&r, pp.modulus()))?;
    let rec = EvalRecord {
        p: pp.p().get(),
        a: pp.a(),
        n,
        r: r.to_string(),
        value: v.value.to_string(),
        raw_sum: v.raw_sum.to_string(),
        floor: v.floor_exponent,
        bracket: v.bracket_correction,
    };
    emit(&[rec], format, out)?;
    Ok(true)
}

/// Runs a check, folding an integrality failure into one failing report.
fn guarded(
    id: &'static str,
    ps: Params,
    f: impl Fn() -> LibResult<Vec<CongruenceReport>> + Send + Sync + 'static,
) -> Task {
    Box::new(move || match f() {
        Err(e @ FleckError::IntegralityViolation { .. }) => {
            Ok(vec![downgrade_integrality(id, ps.clone(), Err(e))?])
        }
        other => other,
    })
}

fn one(r: LibResult<CongruenceReport>) -> LibResult<Vec<CongruenceReport>> {
    r.map(|x| vec![x])
}

fn r_range(flag: &Option<String>, m: u64) -> Result<(i64, i64), CliError> {
    match flag {
        Some(s) => range_i64("r", s),
        None => Ok((0, m as i64 - 1)),
    }
}

fn n_range(flag: &Option<String>, default: (u64, u64)) -> Result<(u64, u64), CliError> {
    match flag {
        Some(s) => range_u64("n", s),
        None => Ok(default),
    }
}

fn suite_tasks(a: &VerifyArgs) -> Result<Vec<Task>, CliError> {
    let primes = args::primes(&a.p)?;
    let mut tasks: Vec<Task> = Vec::new();
    let pv = |p: Prime| p.get() as i64;
    match a.suite {
        Suite::Thm11 | Suite::Thm12 | Suite::Sharpness => {
            let (lo, hi) = n_range(&a.n, (1, 60))?;
            for &p in &primes {
                let rs = r_range(&a.r, p.get())?;
                for n in lo..=hi {
                    if a.suite == Suite::Sharpness {
                        let ps = params(&[("p", pv(p)), ("n", n as i64)]);
                        tasks.push(guarded("sharpness", ps, move || {
                            one(harness::check_sharpness(p, n))
                        }));
                        continue;
                    }
                    for r in rs.0..=rs.1 {
                        let ps = params(&[("p", pv(p)), ("n", n as i64), ("r", r)]);
                        if a.suite == Suite::Thm11 {
                            tasks.push(guarded("residue_formula", ps, move || {
                                one(harness::check_thm11(p, n, r))
                            }));
                        } else {
                            let m0 = (n % p.get()) as i64;
                            tasks.push(guarded("stirling_bernoulli_formula", ps, move || {
                                Ok(vec![
                                    harness::check_thm12(p, n, r, m0)?,
                                    harness::check_thm12(p, n, r, m0 - p.get() as i64)?,
                                ])
                            }));
                        }
                    }
                }
            }
        }
        Suite::Thm13 | Suite::Kummer => {
            let (a_lo, a_hi) = range_u32("a", a.a.as_deref().unwrap_or("0..2"))?;
            let (l_lo, l_hi) = range_u64("l", a.l.as_deref().unwrap_or("0..10"))?;
            let (n_lo, n_hi) = n_range(&a.n, (0, 4))?;
            for &p in &primes {
                let rs = r_range(&a.r, p.get())?;
                for aa in a_lo..=a_hi {
                    for l in l_lo..=l_hi {
                        for r in rs.0..=rs.1 {
                            let base = [("p", pv(p)), ("a", aa as i64), ("l", l as i64), ("r", r)];
                            if a.suite == Suite::Kummer {
                                tasks.push(guarded("kummer_type", params(&base), move || {
                                    harness::check_kummer_family(p, aa, l, r)
                                }));
                                continue;
                            }
                            for n in n_lo..=n_hi {
                                let mut ps = params(&base);
                                ps.insert("n".into(), n as i64);
                                tasks.push(guarded("alternating_quotient_sum", ps, move || {
                                    one(harness::check_thm13(p, aa, l, n, r))
                                }));
                            }
                        }
                    }
                }
            }
        }
        Suite::Remark => {
            let sel = RemarkSelector::from_id(&a.selector)
                .ok_or_else(|| CliError::Usage(format!("unknown --selector {}", a.selector)))?;
            for &p in &primes {
                let ps = params(&[("p", pv(p))]);
                tasks.push(guarded("remark", ps, move || {
                    harness::check_remark_family(p, sel)
                }));
            }
        }
        Suite::Classnum => {
            let usable: Vec<Prime> = if primes.len() == 1 {
                primes.clone()
            } else {
                primes.iter().copied().filter(|p| p.get() > 3).collect()
            };
            for p in usable {
                let rs = r_range(&a.r, p.get())?;
                for r in rs.0..=rs.1 {
                    let ps = params(&[("p", pv(p)), ("r", r)]);
                    tasks.push(guarded("class_number_sign", ps, move || {
                        one(harness::check_cor11_classnumber(p, r))
                    }));
                }
            }
        }
        Suite::Period => {
            let (a_lo, a_hi) = range_u32("a", a.a.as_deref().unwrap_or("2"))?;
            for &p in &primes {
                for aa in a_lo.max(1)..=a_hi {
                    let pp = PrimePower::from_prime(p, aa)?;
                    let start = 2 * pp.lower_power();
                    let (lo, hi) = n_range(&a.n, (start, start + pp.modulus() * (p.get() - 1)))?;
                    let rs = r_range(&a.r, pp.modulus())?;
                    for n in lo..=hi {
                        let ps = params(&[("p", pv(p)), ("a", aa as i64), ("n", n as i64)]);
                        tasks.push(guarded("prime_power_period", ps, move || {
                            let mut reps = vec![harness::check_thm14_floor_attained(pp, n)?];
                            for r in rs.0..=rs.1 {
                                reps.push(harness::check_thm14_period(pp, n, r)?);
                                reps.push(harness::check_thm14_expand(pp, n, r)?);
                            }
                            Ok(reps)
                        }));
                    }
                }
            }
        }
    }
    Ok(tasks)
}

pub fn verify(a: &VerifyArgs, format: Format, out: &mut impl Write) -> Result<bool, CliError> {
    let tasks = suite_tasks(a)?;
    let results: Vec<LibResult<Vec<CongruenceReport>>> = tasks.par_iter().map(|t| t()).collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    let records: Vec<ReportRecord> = reports.iter().map(ReportRecord::from).collect();
    emit(&records, format, out)?;
    Ok(harness::all_hold(&reports))
}

fn write_cursor(path: &std::path::Path, c: &ScanCursor) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, format!("{}\n", c.encode()))?;
    std::fs::rename(tmp, path)
}

pub fn scan(a: &ScanArgs, format: Format, out: &mut impl Write) -> Result<bool, CliError> {
    if a.conjecture != CONJECTURE_ID {
        return Err(CliError::Usage(format!(
            "--conjecture: only {CONJECTURE_ID} is known, got {}",
            a.conjecture
        )));
    }
    let range = ScanRange {
        primes: args::primes(&a.p)?,
        a: range_u32("a", &a.a)?,
        b: range_u32("b", &a.b)?,
        n_max: nonneg("n-max", &a.n_max)?,
        r: a.r.as_deref().map(|s| range_i64("r", s)).transpose()?,
    };
    let resume = match &a.cursor {
        Some(path) if path.exists() => {
            let text = std::fs::read_to_string(path)?;
            Some(ScanCursor::decode(&text).ok_or_else(|| {
                CliError::Usage(format!("cursor file {} is malformed", path.display()))
            })?)
        }
        _ => None,
    };
    let opts = ScanOptions {
        block: a.block.max(1),
        max_blocks: a.max_blocks,
    };
    let mut write_err = None;
    let res = scan_conjecture11(&range, resume, opts, |c| {
        if let Some(path) = &a.cursor {
            if let Err(e) = write_cursor(path, c) {
                write_err.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let rec = ScanRecord {
        conjecture_id: res.conjecture_id.clone(),
        instances_checked: res.instances_checked,
        counterexamples: res.counterexamples.clone(),
        cursor: res.cursor.map(|c| c.encode()),
        complete: res.complete,
    };
    emit(&[rec], format, out)?;
    Ok(res.counterexamples.is_empty())
}

fn class_record(p: Prime) -> LibResult<ClassRecord> {
    let pv = p.get();
    let half = half_factorial_mod_p(p)?;
    let reg = (pv > 3).then(|| regularity(p)).transpose()?;
    let mut rec = ClassRecord {
        p: pv,
        field: String::new(),
        h: 0,
        forms: None,
        u: None,
        v: None,
        unit_norm: None,
        half_factorial: half,
        class_side: None,
        regular: reg.as_ref().map(|r| r.is_regular),
        irregular_indices: reg
            .as_ref()
            .map(|r| r.offending_indices.clone())
            .unwrap_or_default(),
        h_minus_mod_p: reg.as_ref().map(|r| r.h_minus_mod_p),
        holds: true,
    };
    if pv % 4 == 3 {
        let data = class_number_imaginary(p)?;
        rec.field = "imaginary".into();
        rec.h = data.h_minus_p;
        rec.forms = Some(data.forms.iter().map(|f| [f.a, f.b, f.c]).collect());
        if pv > 3 {
            rec.class_side = Some(mordell_value(p)?);
        }
    } else {
        let data = real_class_and_unit(p)?;
        rec.field = "real".into();
        rec.h = data.h_p;
        rec.u = Some(data.u.to_string());
        rec.v = Some(data.v.to_string());
        rec.unit_norm = Some(data.unit_norm);
        rec.class_side = Some(chowla_value(p)?);
    }
    let regular_ok = reg.map_or(true, |r| r.is_regular == (r.h_minus_mod_p != 0));
    rec.holds = rec.class_side.map_or(true, |c| c == half) && regular_ok;
    Ok(rec)
}

pub fn class(a: &ClassArgs, format: Format, out: &mut impl Write) -> Result<bool, CliError> {
    let primes = args::primes(&a.p)?;
    if primes.len() == 1 && primes[0].get() == 2 {
        return Err(CliError::Usage("class needs an odd prime".into()));
    }
    let odd: Vec<Prime> = primes.into_iter().filter(|p| p.is_odd()).collect();
    let recs = odd
        .par_iter()
        .map(|&p| class_record(p))
        .collect::<LibResult<Vec<_>>>()?;
    emit(&recs, format, out)?;
    Ok(recs.iter().all(|r| r.holds))
}

pub fn table(a: &TableArgs, format: Format, out: &mut impl Write) -> Result<bool, CliError> {
    let pp = prime_power(&a.p, &a.a)?;
    let (lo, hi) = range_u64("n", &a.n)?;
    let rs = r_range(&a.r, pp.modulus())?;
    let m = pp.modulus() as i64;
    let rows = (lo..=hi)
        .into_par_iter()
        .map(|n| fleck_row(pp, n).map(|row| (n, row)))
        .collect::<LibResult<Vec<_>>>()?;
    let mut recs = Vec::new();
    for (n, row) in rows {
        for r in rs.0..=rs.1 {
            let v = &row[r.rem_euclid(m) as usize];
            let value = if a.residue {
                v.residue_mod(pp.p().get()).to_string()
            } else {
                v.value.to_string()
            };
            recs.push(TableRecord {
                p: pp.p().get(),
                a: pp.a(),
                n,
                r,
                value,
            });
        }
    }
    emit(&recs, format, out)?;
    Ok(true)
}

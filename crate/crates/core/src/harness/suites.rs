//! Verification suites. Each returns a report whose verdicts carry the
//! witnessing data; mathematical failures are verdicts, not errors. Only
//! budget and guard overruns abort a suite.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::gnp::{field_for, sample_case, sample_seed};
use super::report::{CongruenceRecord, ExperimentReport, Parameters, SignRecord};
use super::sample::{sample_smooth, Shape};
use crate::arith::{l_coefficients, FqPolynomial, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::hasse::quadratic::{
    distinguished_vertices, facial_interior_factorization, split_violations, sym2, tau0,
};
use crate::hasse::{sf1, twisted_hasse, twisted_hasse_value, Variant};
use crate::lattice::frobenius_numbers;
use crate::polygon::{check_fitted_identities, frobenius_polygon, hodge_polygon, rational_pair};
use crate::premium::{premium_at, premium_polygon, PointTuple, SfMode};
use crate::util::{binomial, gcd, int, is_prime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    FpGeHp,
    PpEqFp,
    NpGeFp,
    FittedIdentities,
    DegreeBound,
    Congruence,
    Specialization,
    Tau0Uniqueness,
    Sf1Collapse,
    Nonvanishing,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::FpGeHp,
        Suite::PpEqFp,
        Suite::NpGeFp,
        Suite::FittedIdentities,
        Suite::DegreeBound,
        Suite::Congruence,
        Suite::Specialization,
        Suite::Tau0Uniqueness,
        Suite::Sf1Collapse,
        Suite::Nonvanishing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FpGeHp => "FP≥HP",
            Suite::PpEqFp => "PP=FP",
            Suite::NpGeFp => "NP≥FP",
            Suite::FittedIdentities => "fitted-identities",
            Suite::DegreeBound => "degree-bound",
            Suite::Congruence => "congruence",
            Suite::Specialization => "specialization",
            Suite::Tau0Uniqueness => "tau0-uniqueness",
            Suite::Sf1Collapse => "SF1-collapse",
            Suite::Nonvanishing => "nonvanishing",
        }
    }

    /// The parameters each suite runs with when none are given.
    pub fn default_params(self) -> SuiteParams {
        let base = SuiteParams {
            cases: Vec::new(),
            samples: 0,
            seed: 0,
            ks: Vec::new(),
            a_values: vec![1, 2],
            max_seeds: 1000,
            budget: DEFAULT_BUDGET,
        };
        let c = Parameters::new;
        let quadratic = [(2, 3), (2, 7), (2, 11), (4, 3), (4, 7), (4, 11)]
            .map(|(d, p)| c(2, d, p, 1))
            .to_vec();
        match self {
            Suite::FpGeHp | Suite::FittedIdentities => SuiteParams {
                cases: sweep_cases(3, 6, 60),
                ..base
            },
            Suite::PpEqFp => SuiteParams {
                cases: vec![
                    c(1, 3, 7, 1),
                    c(1, 4, 11, 1),
                    c(2, 2, 5, 1),
                    c(2, 2, 5, 2),
                    c(2, 3, 7, 1),
                    c(2, 3, 11, 1),
                    c(2, 3, 11, 2),
                    c(2, 4, 11, 1),
                ],
                ..base
            },
            Suite::NpGeFp => SuiteParams {
                cases: vec![c(2, 3, 11, 1), c(2, 4, 11, 1)],
                samples: 50,
                ..base
            },
            Suite::DegreeBound => SuiteParams {
                cases: vec![c(2, 2, 11, 1), c(1, 2, 5, 1), c(1, 3, 11, 1), c(1, 4, 17, 1), c(2, 3, 29, 1)],
                ..base
            },
            Suite::Congruence => SuiteParams {
                cases: vec![c(2, 2, 3, 1), c(2, 3, 11, 1), c(2, 4, 11, 1)],
                samples: 25,
                ks: vec![1, 3],
                ..base
            },
            Suite::Specialization => SuiteParams {
                cases: quadratic,
                samples: 20,
                ..base
            },
            Suite::Tau0Uniqueness | Suite::Sf1Collapse | Suite::Nonvanishing => SuiteParams {
                cases: quadratic,
                ..base
            },
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        let plain = |x: &str| x.replace('≥', ">=").to_ascii_lowercase();
        Suite::ALL
            .into_iter()
            .find(|t| plain(t.name()) == plain(s))
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|t| t.name()).collect();
                Error::param(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Inputs shared by all suites; each suite reads the fields it needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub cases: Vec<Parameters>,
    pub samples: u64,
    pub seed: u64,
    /// Vertices for the congruence suite, ignored beyond the degree of the
    /// L-function; empty means every Frobenius vertex up to half the degree.
    pub ks: Vec<u64>,
    /// Values of `a` for the twisted Hasse suites.
    pub a_values: Vec<usize>,
    /// Search length of the nonvanishing suite.
    pub max_seeds: u64,
    pub budget: u64,
}

/// Every `(n, d, p)` with `n <= max_n`, `2 <= d <= max_d`, `p < p_bound`
/// prime to `d` and `p > d + 1`.
pub fn sweep_cases(max_n: u64, max_d: u64, p_bound: u64) -> Vec<Parameters> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for d in 2..=max_d {
            for p in (d + 2..p_bound).filter(|&p| is_prime(p) && gcd(p, d) == 1) {
                out.push(Parameters::new(n, d, p, 1));
            }
        }
    }
    out
}

/// Budget and guard overruns abort; any other error becomes a failed
/// verdict.
fn settle<T>(report: &mut ExperimentReport, assertion: &str, case: usize, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::BudgetExceeded { .. } | Error::GuardExceeded(_))) => Err(e),
        Err(e) => {
            report.verdict(assertion, Some(case), false, format!("error: {e}"));
            Ok(None)
        }
    }
}

pub fn verify_suite(suite: Suite, params: &SuiteParams) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        format!("suite:{}", suite.name()),
        params.cases.clone(),
        params.seed,
        params.samples,
    );
    for (i, &c) in params.cases.iter().enumerate() {
        match suite {
            Suite::FpGeHp => fp_ge_hp(&mut report, i, c)?,
            Suite::FittedIdentities => fitted(&mut report, i, c)?,
            Suite::PpEqFp => pp_eq_fp(&mut report, i, c)?,
            Suite::NpGeFp => {
                let r = sample_case(&mut report, i, params.samples, params.seed, params.budget);
                settle(&mut report, "NP≥FP", i, r)?;
            }
            Suite::DegreeBound => degree_bound(&mut report, i, c, params)?,
            Suite::Congruence => congruence(&mut report, i, c, params)?,
            Suite::Specialization => specialization(&mut report, i, c, params)?,
            Suite::Tau0Uniqueness => tau0_uniqueness(&mut report, i, c, params)?,
            Suite::Sf1Collapse => sf1_collapse(&mut report, i, c, params)?,
            Suite::Nonvanishing => nonvanishing(&mut report, i, c, params)?,
        }
    }
    if suite == Suite::Congruence {
        global_sign(&mut report);
    }
    Ok(report)
}

fn fp_ge_hp(report: &mut ExperimentReport, i: usize, c: Parameters) -> Result<()> {
    let r = (|| Ok((frobenius_numbers(c.n, c.d, c.p)?, frobenius_polygon(c.n, c.d, c.p)?, hodge_polygon(c.n, c.d)?)))();
    let Some((data, fp, hp)) = settle(report, "FP≥HP", i, r)? else {
        return Ok(());
    };
    let bad = data.invariant_violations();
    report.verdict("frobenius-invariants", Some(i), bad.is_empty(), bad.join("; "));
    let cmp = fp.compare(&hp)?;
    report.verdict("FP≥HP", Some(i), cmp.is_ge(), format!("FP = {fp}; HP = {hp}; {cmp:?}"));
    let ordinary = c.p % c.d == 1;
    report.verdict(
        "FP=HP iff p=1 mod d",
        Some(i),
        (fp == hp) == ordinary,
        format!("p mod d = {}, FP == HP is {}", c.p % c.d, fp == hp),
    );
    Ok(())
}

fn fitted(report: &mut ExperimentReport, i: usize, c: Parameters) -> Result<()> {
    let r = check_fitted_identities(c.n, c.d, c.p);
    if let Some(rep) = settle(report, "fitted-identities", i, r)? {
        report.verdict(
            "fitted-identities",
            Some(i),
            rep.failures.is_empty(),
            format!(
                "{} checks, {} split vertices; {}",
                rep.checks,
                rep.split_vertices,
                rep.failures.join("; ")
            ),
        );
    }
    Ok(())
}

fn pp_eq_fp(report: &mut ExperimentReport, i: usize, c: Parameters) -> Result<()> {
    let r = (|| Ok((premium_polygon(c.n, c.d, c.p, c.a, SfMode::All)?, frobenius_polygon(c.n, c.d, c.p)?)))();
    if let Some((pp, fp)) = settle(report, "PP=FP", i, r)? {
        report.verdict("PP=FP", Some(i), pp == fp, format!("PP = {pp}; FP = {fp}"));
    }
    Ok(())
}

fn degree_bound(report: &mut ExperimentReport, i: usize, c: Parameters, params: &SuiteParams) -> Result<()> {
    let Some(data) = settle(report, "degree-bound", i, frobenius_numbers(c.n, c.d, c.p))? else {
        return Ok(());
    };
    let large = (c.p as u128) > (c.d as u128).pow(c.n as u32 + 1);
    for &a in &params.a_values {
        let bound = c.p.pow(a as u32);
        for &k in &data.frobenius_vertices {
            let r = twisted_hasse(k, a, c.n, c.d, c.p, Variant::Full);
            let Some(th) = settle(report, "degree-bound", i, r)? else {
                continue;
            };
            let deg = th.degree_in(|w| w.sum() < c.d).unwrap_or(0);
            report.verdict(
                "degree-bound",
                Some(i),
                deg < bound,
                format!("k={k} a={a}: interior degree {deg} < p^a = {bound}; p > d^(n+1) is {large}"),
            );
        }
    }
    Ok(())
}

const SIGN_RULES: [&str; 3] = ["+1", "-1", "(-1)^k"];

fn sign_holds(rule: &str, k: u64, p: u64, residue: u64, th: u64) -> bool {
    let neg = (p - th) % p;
    match rule {
        "+1" => residue == th,
        "-1" => residue == neg,
        _ => residue == if k.is_multiple_of(2) { th } else { neg },
    }
}

fn congruence_records(c: Parameters, case: usize, params: &SuiteParams) -> Result<Vec<CongruenceRecord>> {
    if c.a != 1 {
        return Err(Error::param("the congruence suite runs with a = 1"));
    }
    let data = frobenius_numbers(c.n, c.d, c.p)?;
    let half = data.dimension() / 2;
    let ks: Vec<u64> = if params.ks.is_empty() {
        data.frobenius_vertices.iter().copied().filter(|&k| k >= 1 && k <= half).collect()
    } else {
        params.ks.iter().copied().filter(|&k| k <= data.dimension()).collect()
    };
    let top = ks.iter().copied().max().unwrap_or(0);
    let mut targets = Vec::with_capacity(ks.len());
    for &k in &ks {
        if !data.frobenius_vertices.contains(&k) {
            return Err(Error::NotFrobeniusVertex { k });
        }
        let prem = premium_at(k, c.n, c.d, c.p, 1, SfMode::All)?;
        let t = prem.clone() * int(c.p as i64 - 1);
        let t = t
            .to_integer()
            .to_u64()
            .filter(|_| t.is_integer())
            .ok_or_else(|| Error::Domain(format!("(p-1) Prem({k}) = {t} is not a natural number")))?;
        let pair = rational_pair(&prem).ok_or_else(|| Error::Domain("premium overflows i64".into()))?;
        targets.push((k, pair, t));
    }
    let field = field_for(c.p, 1)?;
    let per_sample: Vec<Vec<CongruenceRecord>> = (0..params.samples)
        .into_par_iter()
        .map(|s| {
            let f = sample_smooth(c.n, c.d, &field, sample_seed(params.seed, s), Shape::Generic)?;
            let nu = l_coefficients(&f, top as u32, params.budget)?;
            let mut out = Vec::new();
            for &(k, premium, target_ord) in &targets {
                let th = field.encode(&twisted_hasse_value(k, 1, Variant::Full, &f)?);
                let v = &nu[k as usize - 1];
                let ord_nu = v.pi_valuation();
                let residue = if ord_nu == Some(target_ord) {
                    Some(v.pi_residue(target_ord)?)
                } else {
                    None
                };
                out.push(CongruenceRecord {
                    case,
                    sample: s,
                    k,
                    premium,
                    target_ord,
                    ord_nu,
                    th,
                    residue,
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_sample.into_iter().flatten().collect())
}

fn congruence(report: &mut ExperimentReport, i: usize, c: Parameters, params: &SuiteParams) -> Result<()> {
    let Some(records) = settle(report, "congruence", i, congruence_records(c, i, params))? else {
        return Ok(());
    };
    let mismatched: Vec<(u64, u64)> = records
        .iter()
        .filter(|r| {
            let below = r.ord_nu.is_some_and(|v| v < r.target_ord);
            below || (r.ord_nu == Some(r.target_ord)) != (r.th != 0)
        })
        .map(|r| (r.sample, r.k))
        .collect();
    let exact = records.iter().filter(|r| r.residue.is_some()).count();
    report.verdict(
        "congruence",
        Some(i),
        mismatched.is_empty(),
        format!(
            "{} records, {exact} at the premium valuation; (sample, k) with ord/TH mismatch {mismatched:?}",
            records.len()
        ),
    );
    let consistent: Vec<String> = SIGN_RULES
        .iter()
        .filter(|rule| {
            records
                .iter()
                .all(|r| r.residue.is_none_or(|res| sign_holds(rule, r.k, c.p, res, r.th)))
        })
        .map(|r| r.to_string())
        .collect();
    report.verdict(
        "residue-sign",
        Some(i),
        !consistent.is_empty() && exact > 0,
        format!("{exact} informative records; consistent conventions {consistent:?}"),
    );
    report.signs.push(SignRecord {
        case: i,
        chosen: consistent.first().cloned(),
        consistent,
    });
    report.congruence.extend(records);
    Ok(())
}

fn global_sign(report: &mut ExperimentReport) {
    let mut common: BTreeSet<&str> = SIGN_RULES.into_iter().collect();
    for s in &report.signs {
        common.retain(|r| s.consistent.iter().any(|x| x == r));
    }
    let chosen = SIGN_RULES.into_iter().find(|r| common.contains(r));
    report.verdict(
        "residue-sign-global",
        None,
        chosen.is_some() && !report.signs.is_empty(),
        format!("conventions consistent across all cases {common:?}; chosen {chosen:?}"),
    );
}

/// Distinguished vertices with `1 <= k <= C(d,2)`.
fn small_vertices(d: u64, p: u64) -> Result<Vec<u64>> {
    let mut ks: Vec<u64> = distinguished_vertices(d, p)?
        .into_iter()
        .map(|v| v.k)
        .filter(|&k| k >= 1 && k <= binomial(d, 2))
        .collect();
    ks.dedup();
    Ok(ks)
}

fn trinomial(c: Parameters, a: usize, seed: u64) -> Result<FqPolynomial> {
    sample_smooth(2, c.d, &field_for(c.p, a)?, seed, Shape::TrinomialLeading)
}

fn specialization(report: &mut ExperimentReport, i: usize, c: Parameters, params: &SuiteParams) -> Result<()> {
    let Some(ks) = settle(report, "specialization", i, small_vertices(c.d, c.p))? else {
        return Ok(());
    };
    for &a in &params.a_values {
        let mut diffs = Vec::new();
        let mut checked = 0;
        for s in 0..params.samples {
            let r = (|| {
                let f = trinomial(c, a, sample_seed(params.seed, s))?;
                let mut out = Vec::new();
                for &k in &ks {
                    let full = twisted_hasse_value(k, a, Variant::Full, &f)?;
                    let spec = twisted_hasse_value(k, a, Variant::Specialized, &f)?;
                    out.push((k, full == spec));
                }
                Ok(out)
            })();
            let Some(out) = settle(report, "specialization", i, r)? else {
                continue;
            };
            checked += out.len();
            diffs.extend(out.into_iter().filter(|x| !x.1).map(|(k, _)| (s, k)));
        }
        report.verdict(
            "specialization",
            Some(i),
            diffs.is_empty() && checked > 0,
            format!("a={a}, vertices {ks:?}, {checked} comparisons; (sample, k) with TH != TH_0 {diffs:?}"),
        );
    }
    Ok(())
}

fn tau0_uniqueness(report: &mut ExperimentReport, i: usize, c: Parameters, params: &SuiteParams) -> Result<()> {
    let Some(vs) = settle(report, "tau0-uniqueness", i, distinguished_vertices(c.d, c.p))? else {
        return Ok(());
    };
    for v in vs {
        let r = (|| Ok((tau0(&v, c.d)?, sym2(&v, c.d, c.p)?)))();
        if let Some((tau, s2)) = settle(report, "tau0-uniqueness", i, r)? {
            report.verdict(
                "tau0-uniqueness",
                Some(i),
                s2 == vec![tau.clone()],
                format!("k={} (i={}, iota={}): |Sym_2| = {}, tau_0 = {tau:?}, Sym_2 = {s2:?}", v.k, v.i, v.iota, s2.len()),
            );
        }
        let Some(fi) = settle(report, "fac-int", i, facial_interior_factorization(&v, c.d, c.p))? else {
            continue;
        };
        let cap = (c.d - 1).pow(2) * c.p;
        report.verdict(
            "fac-int-degree",
            Some(i),
            !fi.fac.is_zero() && fi.fac_degree() < cap,
            format!("k={}: deg Fac = {} < {cap}", v.k, fi.fac_degree()),
        );
        for &a in &params.a_values {
            let r = twisted_hasse(v.k, a, 2, c.d, c.p, Variant::Minimal);
            if let Some(th1) = settle(report, "fac-int", i, r)? {
                report.verdict(
                    "fac-int",
                    Some(i),
                    th1 == fi.product(a),
                    format!("k={} a={a}: TH_1 has {} terms, Fac*Int product {}", v.k, th1.len(), fi.product(a).len()),
                );
            }
        }
    }
    Ok(())
}

fn sf1_collapse(report: &mut ExperimentReport, i: usize, c: Parameters, params: &SuiteParams) -> Result<()> {
    if let Some(bad) = settle(report, "split-lemma", i, split_violations(c.d, c.p))? {
        report.verdict("split-lemma", Some(i), bad.is_empty(), bad.join("; "));
    }
    let Some(vs) = settle(report, "SF1-collapse", i, distinguished_vertices(c.d, c.p))? else {
        return Ok(());
    };
    for v in vs {
        for &a in &params.a_values {
            let r = (|| Ok((sf1(v.k, 2, c.d, c.p, a)?.1, PointTuple::power(v.set.clone(), a)?)))();
            if let Some((fam, expect)) = settle(report, "SF1-collapse", i, r)? {
                report.verdict(
                    "SF1-collapse",
                    Some(i),
                    fam == vec![expect],
                    format!("k={} a={a}: |SF_1| = {}", v.k, fam.len()),
                );
            }
        }
    }
    Ok(())
}

fn nonvanishing(report: &mut ExperimentReport, i: usize, c: Parameters, params: &SuiteParams) -> Result<()> {
    let Some(ks) = settle(report, "nonvanishing", i, small_vertices(c.d, c.p))? else {
        return Ok(());
    };
    for &a in &params.a_values {
        let mut found = None;
        for s in 0..params.max_seeds {
            let seed = sample_seed(params.seed, s);
            let r = (|| {
                let f = trinomial(c, a, seed)?;
                for &k in &ks {
                    let v = twisted_hasse_value(k, a, Variant::Specialized, &f)?;
                    if f.field.is_zero(&v) {
                        return Ok(None);
                    }
                }
                Ok(Some(f))
            })();
            let Some(hit) = settle(report, "nonvanishing", i, r)? else {
                break;
            };
            if let Some(f) = hit {
                found = Some((s, f));
                break;
            }
        }
        let witness = match &found {
            Some((s, f)) => format!("a={a}, vertices {ks:?}: sample {s} f = {f}"),
            None => format!("a={a}, vertices {ks:?}: none in {} samples", params.max_seeds),
        };
        report.verdict("nonvanishing", Some(i), found.is_some(), witness);
    }
    Ok(())
}

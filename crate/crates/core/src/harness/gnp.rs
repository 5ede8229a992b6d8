//! Sampled minima of Newton polygons.

use rand::RngCore;
use rayon::prelude::*;

use super::report::{CaseSummary, ExperimentReport, NpSummary, Parameters};
use super::sample::{rng, sample_smooth, Shape};
use crate::arith::{newton_polygon, FieldDesc};
use crate::error::Result;
use crate::polygon::{frobenius_polygon, hodge_polygon, Polygon};
use crate::premium::{premium_polygon, SfMode};
use crate::util::{int, Q};

/// Seed of the `index`-th sample of an experiment.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    rng(seed, index).next_u64()
}

pub fn field_for(p: u64, a: usize) -> Result<FieldDesc> {
    if a == 1 {
        Ok(FieldDesc::prime(p))
    } else {
        FieldDesc::build(p, a)
    }
}

/// `HP`, and `FP` and the minimal-degree `PP` where they are defined.
pub fn reference_polygons(c: Parameters) -> Result<(Polygon, Option<Polygon>, Option<Polygon>)> {
    let hp = hodge_polygon(c.n, c.d)?;
    let fp = frobenius_polygon(c.n, c.d, c.p).ok();
    let pp = premium_polygon(c.n, c.d, c.p, c.a, SfMode::MinimalDegree).ok();
    Ok((hp, fp, pp))
}

fn endpoint_ok(np: &Polygon, c: Parameters) -> bool {
    let dim = (c.d - 1).pow(c.n as u32);
    let (x, y): (u64, Q) = np.endpoint();
    x == dim && y * int(2) == int((c.n * dim) as i64)
}

/// Samples `samples` smooth polynomials for case `case` and appends their
/// summaries, the case summary and the invariant verdicts to `report`.
pub(crate) fn sample_case(
    report: &mut ExperimentReport,
    case: usize,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<Polygon> {
    let c = report.parameters[case];
    let field = field_for(c.p, c.a)?;
    let (hp, fp, pp) = reference_polygons(c)?;
    let nps: Vec<(u64, String, Polygon)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(seed, i);
            let f = sample_smooth(c.n, c.d, &field, s, Shape::Generic)?;
            Ok((s, f.to_string(), newton_polygon(&f, budget)?.polygon))
        })
        .collect::<Result<_>>()?;

    let mut running: Option<Polygon> = None;
    let mut stabilized_at = None;
    for (i, (s, f, np)) in nps.into_iter().enumerate() {
        let next = match &running {
            None => np.clone(),
            Some(m) => Polygon::pointwise_min(&[m.clone(), np.clone()])?,
        };
        if running.as_ref() != Some(&next) {
            stabilized_at = Some(i as u64 + 1);
            running = Some(next);
        }
        report.np.push(NpSummary {
            case,
            index: i as u64,
            seed: s,
            f,
            symmetric: np.is_symmetric(c.n),
            endpoint_ok: endpoint_ok(&np, c),
            ge_hp: np.compare(&hp)?.is_ge(),
            ge_fp: fp.as_ref().map(|fp| np.compare(fp).map(|r| r.is_ge())).transpose()?,
            np,
        });
    }
    let min = running.unwrap_or_default();
    let equals = |r: &Option<Polygon>| r.as_ref().map(|r| *r == min);
    report.cases.push(CaseSummary {
        case,
        min_equals_hp: Some(min == hp),
        min_equals_fp: equals(&fp),
        min_equals_pp: equals(&pp),
        hp: Some(hp),
        fp,
        pp,
        sampled_min_np: Some(min.clone()),
        stabilized_at,
    });

    let ours: Vec<&NpSummary> = report.np.iter().filter(|s| s.case == case).collect();
    let bad = |pred: &dyn Fn(&NpSummary) -> bool| -> Vec<u64> {
        ours.iter().filter(|s| !pred(s)).map(|s| s.index).collect()
    };
    let inv = bad(&|s| s.symmetric && s.endpoint_ok);
    let below_hp = bad(&|s| s.ge_hp);
    let below_fp = bad(&|s| s.ge_fp != Some(false));
    report.verdict("np-invariants", Some(case), inv.is_empty(), format!("violating samples {inv:?}"));
    report.verdict("NP≥HP", Some(case), below_hp.is_empty(), format!("samples below HP {below_hp:?}"));
    if report.cases.last().is_some_and(|s| s.fp.is_some()) {
        let regime = if c.p > 2 * c.d { "p > 2d" } else { "p <= 2d" };
        report.verdict(
            "NP≥FP",
            Some(case),
            below_fp.is_empty(),
            format!("{regime}; samples below FP {below_fp:?}"),
        );
    }
    Ok(min)
}

/// Pointwise minimum of the Newton polygons of `samples` seeded smooth
/// polynomials, with a report comparing it to `HP`, `FP` and `PP`.
pub fn gnp_estimate(
    n: u64,
    d: u64,
    p: u64,
    a: usize,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<(Polygon, ExperimentReport)> {
    let mut report = ExperimentReport::new("sampled-gnp", vec![Parameters::new(n, d, p, a)], seed, samples);
    let min = sample_case(&mut report, 0, samples, seed, budget)?;
    Ok((min, report))
}

//! Exponential sums `S_k = sum_{x in F_{q^k}^n} zeta^{Tr f(x)}` by point
//! enumeration, the `L`-function coefficients they determine, and the
//! Newton polygon.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::cyclotomic::CycInt;
use super::field::{Embedding, FieldDesc, FqElem};
use super::fqpoly::FqPolynomial;
use super::tables::{LogTables, NO_LOG, TABLE_LIMIT};
use crate::error::{Error, Result};
use crate::polygon::{lower_hull, Polygon};
use crate::util::{rat, Q};

/// Default cap on points enumerated for one `S_k`.
pub const DEFAULT_BUDGET: u64 = 500_000_000;

/// Number of points of `F_{q^k}^n`, or an error past the budget.
pub fn point_count(f: &FqPolynomial, k: u32, budget: u64) -> Result<u64> {
    let m = f.a() as u32 * k;
    let needed = (f.p() as u128)
        .checked_pow(m * f.n as u32)
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed as u64)
}

/// The field `F_{q^k}` and the embedding of the coefficient field into it.
fn extension(f: &FqPolynomial, k: u32) -> Result<(FieldDesc, Embedding)> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let large = FieldDesc::build(f.p(), f.a() * k as usize)?;
    let emb = Embedding::new(&f.field, &large)?;
    Ok((large, emb))
}

/// `N_t = #{x : Tr f(x) = t}` for `t` in `0..p`.
pub fn trace_counts(f: &FqPolynomial, k: u32, budget: u64) -> Result<Vec<u64>> {
    point_count(f, k, budget)?;
    let (large, emb) = extension(f, k)?;
    if large.order() > TABLE_LIMIT {
        return trace_counts_with(f, &large, &emb);
    }
    let tables = LogTables::new(&large)?;
    Ok(trace_counts_fast(f, &tables, &emb))
}

/// Direct field arithmetic at every point; the reference for the table path.
pub fn trace_counts_direct(f: &FqPolynomial, k: u32, budget: u64) -> Result<Vec<u64>> {
    point_count(f, k, budget)?;
    let (large, emb) = extension(f, k)?;
    trace_counts_with(f, &large, &emb)
}

fn trace_counts_with(f: &FqPolynomial, large: &FieldDesc, emb: &Embedding) -> Result<Vec<u64>> {
    let n = f.n as usize;
    let q = large.order();
    let terms: Vec<(Vec<u32>, FqElem)> = f
        .terms()
        .map(|(w, c)| (w.0.clone(), emb.map(c)))
        .collect();
    let total = q.pow(n as u32);
    let counts = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; f.p() as usize],
            |mut acc, idx| {
                let mut rest = idx;
                let x: Vec<FqElem> = (0..n)
                    .map(|_| {
                        let c = rest % q;
                        rest /= q;
                        large.decode(c)
                    })
                    .collect();
                let mut val = large.zero();
                for (w, c) in &terms {
                    let mut t = c.clone();
                    for (xi, &e) in x.iter().zip(w) {
                        t = large.mul(&t, &large.pow(xi, e as u128));
                    }
                    val = large.add(&val, &t);
                }
                acc[large.trace(&val) as usize] += 1;
                acc
            },
        )
        .reduce(|| vec![0u64; f.p() as usize], add_vecs);
    Ok(counts)
}

fn add_vecs(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Table-driven enumeration. The outer loop runs over the first `n-1`
/// coordinates and collects `f = sum_e c_e x_n^e`; the inner loop runs over
/// `x_n = g^t`, where `Tr(c_e g^{et})` is one table lookup.
fn trace_counts_fast(f: &FqPolynomial, t: &LogTables, emb: &Embedding) -> Vec<u64> {
    let n = f.n as usize;
    let d = f.d as usize;
    let p = f.p() as usize;
    let q = t.field.order();
    let order = t.group_order();
    // terms grouped by the exponent of x_n
    let mut by_last: Vec<Vec<(Vec<u32>, u32)>> = vec![Vec::new(); d + 1];
    for (w, c) in f.terms() {
        let code = t.field.encode(&emb.map(c)) as u32;
        by_last[w.0[n - 1] as usize].push((w.0[..n - 1].to_vec(), t.log[code as usize]));
    }
    let outer = q.pow(n as u32 - 1);
    let hist_len = (d + 1) * (p - 1) + 1;
    let hist = (0..outer)
        .into_par_iter()
        .fold(
            || vec![0u64; hist_len],
            |mut hist, idx| {
                let mut rest = idx;
                let logs: Vec<u32> = (0..n - 1)
                    .map(|_| {
                        let c = (rest % q) as usize;
                        rest /= q;
                        t.log[c]
                    })
                    .collect();
                let mut coeff_logs = vec![NO_LOG; d + 1];
                let mut tr0 = 0usize;
                for (e, group) in by_last.iter().enumerate() {
                    let mut acc = 0u32;
                    for (w, la) in group {
                        let mut l = *la as u64;
                        let mut zero = false;
                        for (lx, &we) in logs.iter().zip(w) {
                            if we == 0 {
                                continue;
                            }
                            if *lx == NO_LOG {
                                zero = true;
                                break;
                            }
                            l += *lx as u64 * we as u64;
                        }
                        if !zero {
                            acc = t.add_code(acc, t.exp[(l % order as u64) as usize]);
                        }
                    }
                    if e == 0 {
                        tr0 = t.trace_code(acc) as usize;
                    } else if acc != 0 {
                        coeff_logs[e] = t.log[acc as usize];
                    }
                }
                let mut idx = Vec::new();
                let mut step = Vec::new();
                for (e, &l) in coeff_logs.iter().enumerate().take(d + 1).skip(1) {
                    if l != NO_LOG {
                        idx.push(l);
                        step.push(e as u32);
                    }
                }
                // x_n = 0
                hist[tr0] += 1;
                inner_loop(&t.trace, order, tr0, &mut idx, &step, &mut hist);
                hist
            },
        )
        .reduce(|| vec![0u64; hist_len], add_vecs);
    let mut counts = vec![0u64; p];
    for (s, c) in hist.into_iter().enumerate() {
        counts[s % p] += c;
    }
    counts
}

fn inner_loop(
    trace: &[u16],
    order: u32,
    tr0: usize,
    idx: &mut [u32],
    step: &[u32],
    hist: &mut [u64],
) {
    match idx.len() {
        0 => hist[tr0] += order as u64,
        1 => inner_fixed::<1>(trace, order, tr0, idx, step, hist),
        2 => inner_fixed::<2>(trace, order, tr0, idx, step, hist),
        3 => inner_fixed::<3>(trace, order, tr0, idx, step, hist),
        4 => inner_fixed::<4>(trace, order, tr0, idx, step, hist),
        5 => inner_fixed::<5>(trace, order, tr0, idx, step, hist),
        6 => inner_fixed::<6>(trace, order, tr0, idx, step, hist),
        _ => {
            for _ in 0..order {
                let mut s = tr0;
                for (i, st) in idx.iter_mut().zip(step) {
                    s += trace[*i as usize] as usize;
                    *i += st;
                    if *i >= order {
                        *i -= order;
                    }
                }
                hist[s] += 1;
            }
        }
    }
}

#[inline(always)]
fn inner_fixed<const K: usize>(
    trace: &[u16],
    order: u32,
    tr0: usize,
    idx: &[u32],
    step: &[u32],
    hist: &mut [u64],
) {
    let mut ix = [0u32; K];
    let mut st = [0u32; K];
    ix.copy_from_slice(&idx[..K]);
    st.copy_from_slice(&step[..K]);
    for _ in 0..order {
        let mut s = tr0;
        for j in 0..K {
            s += trace[ix[j] as usize] as usize;
            ix[j] += st[j];
            if ix[j] >= order {
                ix[j] -= order;
            }
        }
        hist[s] += 1;
    }
}

/// `S_k` as an element of `Z[zeta_p]`.
pub fn exponential_sum(f: &FqPolynomial, k: u32, budget: u64) -> Result<CycInt> {
    let counts = trace_counts(f, k, budget)?;
    let total: u64 = counts.iter().sum();
    debug_assert_eq!(Some(total), f.p().checked_pow(f.a() as u32 * k * f.n as u32));
    let big: Vec<BigInt> = counts.into_iter().map(BigInt::from).collect();
    Ok(CycInt::from_counts(f.p(), &big))
}

/// `nu_1, ..., nu_K` from `L^{(-1)^{n-1}} = 1 + sum (-1)^k nu_k t^k`, via
/// Newton's identities with power sums `P_k = (-1)^n S_k`. Every division
/// by `k` is checked to be exact.
pub fn l_coefficients(f: &FqPolynomial, upto: u32, budget: u64) -> Result<Vec<CycInt>> {
    let p = f.p();
    let mut power_sums = Vec::with_capacity(upto as usize);
    for k in 1..=upto {
        let s = exponential_sum(f, k, budget)?;
        power_sums.push(if f.n.is_multiple_of(2) { s } else { s.neg() });
    }
    newton_identities(p, &power_sums)
}

/// Elementary symmetric values `e_1..e_K` from power sums `P_1..P_K`.
pub fn newton_identities(p: u64, power_sums: &[CycInt]) -> Result<Vec<CycInt>> {
    let mut e = vec![CycInt::one(p)];
    for k in 1..=power_sums.len() {
        let mut acc = CycInt::zero(p);
        for i in 1..=k {
            let term = e[k - i].mul(&power_sums[i - 1]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        e.push(acc.div_exact(k as u64, k)?);
    }
    e.remove(0);
    Ok(e)
}

/// Exact data behind a Newton polygon.
#[derive(Clone, Debug)]
pub struct NewtonData {
    pub polygon: Polygon,
    /// `nu_1..nu_K` computed exactly, `K = floor(D/2)`.
    pub nu: Vec<CycInt>,
    /// `ord_q nu_k` for `k = 0..=D`; `None` when `nu_k = 0`.
    pub ord: Vec<Option<Q>>,
}

/// `NP(f)`: exact `ord_q nu_k` for `k <= D/2`, the rest from the functional
/// equation `ord nu_{D-k} = nD/2 - nk + ord nu_k`.
pub fn newton_polygon(f: &FqPolynomial, budget: u64) -> Result<NewtonData> {
    if !f.is_smooth()? {
        return Err(Error::NotSmooth);
    }
    let n = f.n as i64;
    let dim = (f.d - 1).pow(f.n as u32);
    let half = dim / 2;
    let nu = l_coefficients(f, half as u32, budget)?;
    let scale = f.a() as i64 * (f.p() as i64 - 1);
    let mut low: Vec<Option<Q>> = vec![Some(Q::zero())];
    for v in &nu {
        low.push(v.pi_valuation().map(|x| rat(x as i64, scale)));
    }
    let mut ord = Vec::with_capacity(dim as usize + 1);
    for k in 0..=dim {
        if k <= half {
            ord.push(low[k as usize].clone());
        } else {
            let j = dim - k;
            ord.push(low[j as usize].as_ref().map(|o| {
                rat(n * dim as i64, 2) - Q::from_integer((n * j as i64).into()) + o
            }));
        }
    }
    let pts: Vec<(u64, Option<Q>)> = ord.iter().cloned().enumerate().map(|(k, o)| (k as u64, o)).collect();
    let polygon = lower_hull(&pts)?;
    Ok(NewtonData { polygon, nu, ord })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;
    use crate::polygon::{frobenius_polygon, hodge_polygon};
    use num_traits::One;

    fn poly1(p: u64, d: u64, coeffs: &[(u32, i64)]) -> FqPolynomial {
        let field = FieldDesc::prime(p);
        let mut f = FqPolynomial::new(1, d, field.clone()).unwrap();
        for &(e, c) in coeffs {
            f.set(LatticePoint(vec![e]), field.from_int(c)).unwrap();
        }
        f
    }

    #[test]
    fn sum_examples() {
        let f = poly1(3, 2, &[(2, 1)]);
        let s = exponential_sum(&f, 1, DEFAULT_BUDGET).unwrap();
        let expect = CycInt::one(3).add(&CycInt::zeta_pow(3, 1).scale(&BigInt::from(2)));
        assert_eq!(s, expect);
        let zero = poly1(5, 3, &[]);
        assert_eq!(
            exponential_sum(&zero, 1, DEFAULT_BUDGET).unwrap(),
            CycInt::from_int(5, 5)
        );
        let lin = poly1(7, 2, &[(1, 1)]);
        assert!(exponential_sum(&lin, 1, DEFAULT_BUDGET).unwrap().is_zero());
        assert!(matches!(
            exponential_sum(&f, 30, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn fast_path_matches_direct() {
        let cases = [
            "p=3;a=1;n=2;d=2;terms=2,0:1|1,1:1|0,2:2|1,0:2",
            "p=5;a=1;n=2;d=3;terms=3,0:1|1,2:3|0,3:2|1,1:4|0,1:1",
            "p=3;a=2;n=1;d=4;terms=4:1,1|2:0,1|1:2,0",
            "p=2;a=1;n=2;d=3;terms=3,0:1|0,3:1|1,1:1",
            "p=3;a=1;n=3;d=2;terms=2,0,0:1|0,2,0:1|0,0,2:2|1,0,1:1",
        ];
        for s in cases {
            let f: FqPolynomial = s.parse().unwrap();
            for k in 1..=2 {
                if point_count(&f, k, 300_000).is_err() {
                    continue;
                }
                assert_eq!(
                    trace_counts(&f, k, DEFAULT_BUDGET).unwrap(),
                    trace_counts_direct(&f, k, DEFAULT_BUDGET).unwrap(),
                    "{s} k={k}"
                );
            }
        }
    }

    #[test]
    fn gauss_sum_coefficient() {
        let f = poly1(3, 2, &[(2, 1)]);
        let nu = l_coefficients(&f, 1, DEFAULT_BUDGET).unwrap();
        let s = CycInt::one(3).add(&CycInt::zeta_pow(3, 1).scale(&BigInt::from(2)));
        assert_eq!(nu[0], s.neg());
        let np = newton_polygon(&f, DEFAULT_BUDGET).unwrap();
        assert_eq!(np.polygon, Polygon::from_slopes(vec![(rat(1, 2), 1)]));
    }

    #[test]
    fn degree_of_l_function() {
        let f = poly1(5, 3, &[(3, 1), (1, 1)]);
        let nu = l_coefficients(&f, 3, DEFAULT_BUDGET).unwrap();
        assert!(!nu[1].is_zero());
        assert!(nu[2].is_zero());
        let np = newton_polygon(&f, DEFAULT_BUDGET).unwrap();
        assert_eq!(np.polygon, frobenius_polygon(1, 3, 5).unwrap());
    }

    #[test]
    fn binary_quadratic_forms() {
        let f: FqPolynomial = "p=3;a=1;n=2;d=2;terms=2,0:1|0,2:1|1,0:1".parse().unwrap();
        let np = newton_polygon(&f, DEFAULT_BUDGET).unwrap();
        assert_eq!(np.polygon, Polygon::from_slopes(vec![(Q::one(), 1)]));
        let g: FqPolynomial = "p=3;a=1;n=2;d=2;terms=2,0:1|1,1:1|0,2:1".parse().unwrap();
        assert!(matches!(newton_polygon(&g, DEFAULT_BUDGET), Err(Error::NotSmooth)));
    }

    #[test]
    fn cubic_curves_lie_above_hodge() {
        let f: FqPolynomial = "p=7;a=1;n=2;d=3;terms=3,0:1|0,3:2|1,1:3|1,0:1"
            .parse()
            .unwrap();
        let np = newton_polygon(&f, DEFAULT_BUDGET).unwrap();
        assert!(np.polygon.compare(&hodge_polygon(2, 3).unwrap()).unwrap().is_ge());
        assert!(np.polygon.is_symmetric(2));
        assert_eq!(np.polygon.endpoint(), (4, rat(4, 1)));
    }
}

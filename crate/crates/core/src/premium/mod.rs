//! Twisted permutations of tuples of fundamental point sets, their
//! Frobenius premium, and the premium polygon.
//!
//! A tuple `A = (A_0, ..., A_{a-1})` is indexed by `Z/(a)`, and a twisted
//! permutation is a family of bijections `tau_l : A_l -> A_{l-1}`. The cost
//! of `u -> v` is `ceil(deg(p u - v))`, so the premium splits into one
//! assignment problem per layer.

pub mod assignment;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{
    fundamental_points, hodge_numbers, stratum, validate_ndp, FrobeniusData, LatticePoint,
};
use crate::polygon::{lower_hull, Polygon};
use crate::util::{binomial, ceil_div, combinations, factorial, permutation_sign, rat, Q};

/// An `a`-tuple of point sets, each kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointTuple {
    layers: Vec<Vec<LatticePoint>>,
}

impl PointTuple {
    pub fn new(layers: Vec<Vec<LatticePoint>>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::param("a point tuple needs at least one layer"));
        }
        let size = layers[0].len();
        let mut sorted = Vec::with_capacity(layers.len());
        for mut layer in layers {
            if layer.len() != size {
                return Err(Error::param("layers of a point tuple must have equal size"));
            }
            layer.sort();
            if layer.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::param("repeated point in a layer"));
            }
            sorted.push(layer);
        }
        Ok(PointTuple { layers: sorted })
    }

    /// `B^a`.
    pub fn power(set: Vec<LatticePoint>, a: usize) -> Result<Self> {
        PointTuple::new(vec![set; a.max(1)])
    }

    pub fn a(&self) -> usize {
        self.layers.len()
    }

    pub fn size(&self) -> usize {
        self.layers[0].len()
    }

    /// Layer `l`, read modulo `a`.
    pub fn layer(&self, l: i64) -> &[LatticePoint] {
        &self.layers[l.rem_euclid(self.a() as i64) as usize]
    }

    pub fn layers(&self) -> &[Vec<LatticePoint>] {
        &self.layers
    }

    pub fn check_fundamental(&self, d: u64) -> Result<()> {
        for layer in &self.layers {
            if let Some(u) = layer.iter().find(|u| !u.is_fundamental(d)) {
                return Err(Error::param(format!("{u} is not a fundamental point")));
            }
        }
        Ok(())
    }
}

/// `maps[l][x] = y` sends the `x`-th point of `A_l` to the `y`-th point of
/// `A_{l-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedPermutation {
    pub maps: Vec<Vec<usize>>,
}

impl TwistedPermutation {
    pub fn identity(a: usize, size: usize) -> Self {
        TwistedPermutation {
            maps: vec![(0..size).collect(); a],
        }
    }

    /// Product of the signs of the position permutations of all layers.
    pub fn sign(&self) -> i8 {
        self.maps.iter().map(|m| permutation_sign(m)).product()
    }

    pub fn image<'a>(&self, tuple: &'a PointTuple, l: usize, x: usize) -> &'a LatticePoint {
        &tuple.layer(l as i64 - 1)[self.maps[l][x]]
    }

    pub fn is_compatible(&self, tuple: &PointTuple) -> bool {
        self.maps.len() == tuple.a()
            && self.maps.iter().all(|m| {
                let mut seen = vec![false; tuple.size()];
                m.len() == tuple.size()
                    && m.iter()
                        .all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
            })
    }
}

/// `ceil(deg(p u - v))`, rejecting negative coordinates.
pub fn edge_cost(u: &LatticePoint, v: &LatticePoint, p: u64, d: u64) -> Result<i64> {
    let w = u.scaled_minus(p, v)?;
    Ok(ceil_div(w.sum() as i64, d as i64))
}

/// Cost matrix of layer `l`: rows are `A_l`, columns `A_{l-1}`.
pub fn layer_costs(tuple: &PointTuple, l: usize, p: u64, d: u64) -> Result<Vec<Vec<i64>>> {
    pair_costs(tuple.layer(l as i64), tuple.layer(l as i64 - 1), p, d)
}

fn pair_costs(
    src: &[LatticePoint],
    dst: &[LatticePoint],
    p: u64,
    d: u64,
) -> Result<Vec<Vec<i64>>> {
    src.iter()
        .map(|u| dst.iter().map(|v| edge_cost(u, v, p, d)).collect())
        .collect()
}

fn normalizer(a: usize, p: u64) -> i64 {
    a as i64 * (p as i64 - 1)
}

/// `Prem(tau)`.
pub fn premium_of_permutation(
    tuple: &PointTuple,
    tau: &TwistedPermutation,
    p: u64,
    d: u64,
) -> Result<Q> {
    if !tau.is_compatible(tuple) {
        return Err(Error::param("twisted permutation does not match the tuple"));
    }
    let mut total = 0i64;
    for l in 0..tuple.a() {
        for (x, u) in tuple.layers[l].iter().enumerate() {
            total += edge_cost(u, tau.image(tuple, l, x), p, d)?;
        }
    }
    Ok(rat(total, normalizer(tuple.a(), p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Brute,
    Assignment,
}

/// Minimal premium together with `Sym_0`, stored per layer: `Sym_0` is the
/// product of the layer-wise sets of optimal bijections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PremiumResult {
    pub premium: Q,
    pub layer_argmins: Vec<Vec<Vec<usize>>>,
}

impl PremiumResult {
    pub fn sym0_len(&self) -> u128 {
        self.layer_argmins.iter().map(|s| s.len() as u128).product()
    }

    /// Every element of `Sym_0`, for small instances.
    pub fn sym0(&self) -> Vec<TwistedPermutation> {
        let mut out = vec![TwistedPermutation { maps: Vec::new() }];
        for layer in &self.layer_argmins {
            let mut next = Vec::with_capacity(out.len() * layer.len());
            for t in &out {
                for m in layer {
                    let mut maps = t.maps.clone();
                    maps.push(m.clone());
                    next.push(TwistedPermutation { maps });
                }
            }
            out = next;
        }
        out
    }
}

/// Brute mode refuses layers with more than this many bijections.
pub const BRUTE_LAYER_LIMIT: u128 = 1_000_000;

/// `Prem(A)` and `Sym_0^{(1)}(A)`.
pub fn premium_of_tuple(tuple: &PointTuple, p: u64, d: u64, mode: SolveMode) -> Result<PremiumResult> {
    tuple.check_fundamental(d)?;
    let mut total = 0i64;
    let mut layer_argmins = Vec::with_capacity(tuple.a());
    for l in 0..tuple.a() {
        let c = layer_costs(tuple, l, p, d)?;
        let (m, arg) = match mode {
            SolveMode::Brute => {
                if factorial(tuple.size() as u64) > BRUTE_LAYER_LIMIT {
                    return Err(Error::GuardExceeded(format!(
                        "{}! bijections per layer",
                        tuple.size()
                    )));
                }
                assignment::brute_force(&c)
            }
            SolveMode::Assignment => assignment::all_optimal(&c),
        };
        total += m;
        layer_argmins.push(arg);
    }
    Ok(PremiumResult {
        premium: rat(total, normalizer(tuple.a(), p)),
        layer_argmins,
    })
}

/// Minimal premium of a tuple without the argmin set.
pub fn premium_value(tuple: &PointTuple, p: u64, d: u64) -> Result<Q> {
    let mut total = 0i64;
    for l in 0..tuple.a() {
        total += assignment::solve(&layer_costs(tuple, l, p, d)?).cost;
    }
    Ok(rat(total, normalizer(tuple.a(), p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfMode {
    /// All `k`-subsets of fundamental points.
    All,
    /// `SF_0(k)`: subsets of minimal degree.
    MinimalDegree,
}

fn check_k(k: u64, n: u64, d: u64) -> Result<u64> {
    let dim = (d - 1).pow(n as u32);
    if k > dim {
        return Err(Error::OutOfRange {
            what: "k",
            value: k.to_string(),
            range: format!("[0, {dim}]"),
        });
    }
    Ok(dim)
}

/// The index `i` of the stratum that `SF_0(k)` cuts into: the least `i`
/// with `sum_{j<=i} h_j >= k`.
pub fn cut_index(k: u64, n: u64, d: u64) -> Result<u64> {
    check_k(k, n, d)?;
    let h = hodge_numbers(n, d)?;
    let mut acc = 0;
    for (i, &hi) in h.iter().enumerate() {
        acc += hi;
        if acc >= k {
            return Ok(i as u64);
        }
    }
    Ok(n * d)
}

/// `SF(k)` or `SF_0(k)`, each set lexicographically sorted.
pub fn sf_enumerate(k: u64, n: u64, d: u64, mode: SfMode) -> Result<Vec<Vec<LatticePoint>>> {
    check_k(k, n, d)?;
    match mode {
        SfMode::All => {
            let pts = fundamental_points(n, d)?;
            Ok(combinations(pts.len(), k as usize)
                .into_iter()
                .map(|c| c.into_iter().map(|x| pts[x].clone()).collect())
                .collect())
        }
        SfMode::MinimalDegree => {
            let i = cut_index(k, n, d)?;
            let base: Vec<LatticePoint> = (0..i)
                .map(|j| stratum(n, d, j))
                .collect::<Result<Vec<_>>>()?
                .concat();
            let wi = stratum(n, d, i)?;
            let need = k as usize - base.len();
            Ok(combinations(wi.len(), need)
                .into_iter()
                .map(|c| {
                    let mut set = base.clone();
                    set.extend(c.into_iter().map(|x| wi[x].clone()));
                    set.sort();
                    set
                })
                .collect())
        }
    }
}

/// `|SF(k)|` or `|SF_0(k)|` without enumerating.
pub fn sf_count(k: u64, n: u64, d: u64, mode: SfMode) -> Result<u64> {
    let dim = check_k(k, n, d)?;
    match mode {
        SfMode::All => Ok(binomial(dim, k)),
        SfMode::MinimalDegree => {
            let i = cut_index(k, n, d)?;
            let h = hodge_numbers(n, d)?;
            let below: u64 = h[..i as usize].iter().sum();
            Ok(binomial(h[i as usize], k - below))
        }
    }
}

/// Largest number of points `(d-1)^n` for which `SF(k)` is enumerated.
pub const ALL_MODE_POINT_LIMIT: u64 = 9;
/// Largest number of tuples examined by `premium_at`.
pub const TUPLE_LIMIT: u128 = 50_000_000;

/// `Prem(k)`: the minimum of `Prem(A)` over `A` in `SF(k)^a` (`SfMode::All`)
/// or `SF_0(k)^a`. Every tuple is visited; layer costs are memoized per
/// ordered pair of sets.
pub fn premium_at(k: u64, n: u64, d: u64, p: u64, a: usize, mode: SfMode) -> Result<Q> {
    validate_ndp(n, d, p)?;
    if p <= d {
        return Err(Error::param(format!("premium needs p > d, got p = {p}, d = {d}")));
    }
    if a == 0 {
        return Err(Error::param("a must be at least 1"));
    }
    if mode == SfMode::All && (d - 1).pow(n as u32) > ALL_MODE_POINT_LIMIT {
        return Err(Error::GuardExceeded(format!(
            "(d-1)^n = {} exceeds {ALL_MODE_POINT_LIMIT} in all-subsets mode",
            (d - 1).pow(n as u32)
        )));
    }
    let family = sf_enumerate(k, n, d, mode)?;
    let count = family.len() as u128;
    let tuples = count.checked_pow(a as u32).unwrap_or(u128::MAX);
    if tuples > TUPLE_LIMIT {
        return Err(Error::GuardExceeded(format!("{tuples} tuples in SF(k)^a")));
    }
    let mut memo: HashMap<(usize, usize), i64> = HashMap::new();
    let mut cost = |x: usize, y: usize| -> Result<i64> {
        if let Some(&c) = memo.get(&(x, y)) {
            return Ok(c);
        }
        let c = assignment::solve(&pair_costs(&family[x], &family[y], p, d)?).cost;
        memo.insert((x, y), c);
        Ok(c)
    };
    let mut best = i64::MAX;
    let mut idx = vec![0usize; a];
    loop {
        // layer l maps A_l to A_{l-1}
        let mut total = 0i64;
        for l in 0..a {
            total += cost(idx[l], idx[(l + a - 1) % a])?;
        }
        best = best.min(total);
        let mut pos = 0;
        loop {
            if pos == a {
                return Ok(rat(best, normalizer(a, p)));
            }
            idx[pos] += 1;
            if idx[pos] < family.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `PP(n,d;p)`: lower hull of the points `(k, Prem(k))`.
pub fn premium_polygon(n: u64, d: u64, p: u64, a: usize, mode: SfMode) -> Result<Polygon> {
    validate_ndp(n, d, p)?;
    let dim = (d - 1).pow(n as u32);
    let mut pts = Vec::with_capacity(dim as usize + 1);
    for k in 0..=dim {
        pts.push((k, Some(premium_at(k, n, d, p, a, mode)?)));
    }
    lower_hull(&pts)
}

/// The optimality test at a Frobenius vertex with parameter `i`: for every
/// `u` in `A_l`, `{deg tau_l(u) + c} >= {p deg u + c}` with
/// `c = (d-1-i)/d`, where `{x}` is the fractional part.
pub fn fractional_criterion(tuple: &PointTuple, tau: &TwistedPermutation, p: u64, d: u64, i: u64) -> bool {
    let shift = d as i64 - 1 - i as i64;
    let frac = |s: i64| (s + shift).rem_euclid(d as i64);
    (0..tuple.a()).all(|l| {
        tuple.layers[l].iter().enumerate().all(|(x, u)| {
            let v = tau.image(tuple, l, x);
            frac(v.sum() as i64) >= frac((p * u.sum()) as i64)
        })
    })
}

/// Frobenius vertices with their parameter `i`.
pub fn vertex_parameters(data: &FrobeniusData) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = data.vertex_reps().iter().map(|r| (r.k, r.i)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::frobenius_numbers;
    use crate::polygon::frobenius_polygon;
    use crate::util::int;

    fn lp(c: &[u32]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    #[test]
    fn premium_of_permutation_examples() {
        let t = PointTuple::power(vec![lp(&[1, 1])], 1).unwrap();
        let id = TwistedPermutation::identity(1, 1);
        for p in [3, 5, 7, 11] {
            assert_eq!(premium_of_permutation(&t, &id, p, 2).unwrap(), int(1));
        }
        assert_eq!(premium_of_permutation(&t, &id, 11, 3).unwrap(), rat(7, 10));
        let t2 = PointTuple::power(vec![lp(&[1, 1])], 2).unwrap();
        let id2 = TwistedPermutation::identity(2, 1);
        assert_eq!(premium_of_permutation(&t2, &id2, 11, 3).unwrap(), rat(7, 10));
        // p u - v negative
        let mixed = PointTuple::new(vec![vec![lp(&[1, 1]), lp(&[1, 3])]]).unwrap();
        let swap = TwistedPermutation { maps: vec![vec![1, 0]] };
        assert!(matches!(
            premium_of_permutation(&mixed, &swap, 2, 4),
            Err(Error::NegativeCoordinate { .. })
        ));
        assert!(premium_of_permutation(&t, &TwistedPermutation::identity(2, 1), 11, 4).is_err());
    }

    #[test]
    fn premium_of_tuple_examples() {
        let t = PointTuple::power(vec![lp(&[1, 1])], 1).unwrap();
        let r = premium_of_tuple(&t, 3, 2, SolveMode::Brute).unwrap();
        assert_eq!(r.premium, int(1));
        assert_eq!(r.sym0(), vec![TwistedPermutation::identity(1, 1)]);
        let t = PointTuple::power(vec![lp(&[1, 1]), lp(&[1, 2]), lp(&[2, 1])], 1).unwrap();
        let r = premium_of_tuple(&t, 11, 3, SolveMode::Brute).unwrap();
        assert_eq!(r.premium, rat(27, 10));
        assert_eq!(frobenius_polygon(2, 3, 11).unwrap().eval_int(3), rat(27, 10));
        let s = premium_of_tuple(&t, 11, 3, SolveMode::Assignment).unwrap();
        assert_eq!(r, s);
        // degree-preserving relabeling
        let u = PointTuple::power(vec![lp(&[1, 1]), lp(&[2, 1]), lp(&[1, 2])], 1).unwrap();
        assert_eq!(premium_value(&u, 11, 3).unwrap(), r.premium);
    }

    #[test]
    fn sf_examples() {
        let full = fundamental_points(2, 3).unwrap();
        for mode in [SfMode::All, SfMode::MinimalDegree] {
            assert_eq!(sf_enumerate(4, 2, 3, mode).unwrap(), vec![full.clone()]);
        }
        assert_eq!(
            sf_enumerate(3, 2, 3, SfMode::MinimalDegree).unwrap(),
            vec![vec![lp(&[1, 1]), lp(&[1, 2]), lp(&[2, 1])]]
        );
        assert_eq!(
            sf_enumerate(2, 2, 3, SfMode::MinimalDegree).unwrap(),
            vec![
                vec![lp(&[1, 1]), lp(&[1, 2])],
                vec![lp(&[1, 1]), lp(&[2, 1])]
            ]
        );
        assert_eq!(sf_enumerate(2, 2, 3, SfMode::All).unwrap().len(), 6);
        assert!(sf_enumerate(5, 2, 3, SfMode::All).is_err());
        for k in 0..=9 {
            for mode in [SfMode::All, SfMode::MinimalDegree] {
                assert_eq!(
                    sf_enumerate(k, 2, 4, mode).unwrap().len() as u64,
                    sf_count(k, 2, 4, mode).unwrap()
                );
            }
        }
    }

    #[test]
    fn premium_at_examples() {
        for p in [3, 5, 7] {
            assert_eq!(premium_at(1, 2, 2, p, 1, SfMode::All).unwrap(), int(1));
        }
        assert_eq!(premium_at(1, 2, 3, 11, 1, SfMode::All).unwrap(), rat(7, 10));
        assert_eq!(premium_at(1, 2, 4, 11, 1, SfMode::All).unwrap(), rat(1, 2));
        assert_eq!(premium_at(0, 2, 4, 11, 2, SfMode::All).unwrap(), int(0));
        assert!(premium_at(1, 3, 4, 11, 1, SfMode::All).is_err());
        assert!(premium_at(1, 2, 4, 3, 1, SfMode::All).is_err());
    }

    #[test]
    fn premium_polygon_examples() {
        for (n, d, p, a) in [(2, 3, 11, 1), (1, 3, 7, 1), (2, 2, 5, 2)] {
            assert_eq!(
                premium_polygon(n, d, p, a, SfMode::All).unwrap(),
                frobenius_polygon(n, d, p).unwrap(),
                "({n},{d},{p},{a})"
            );
        }
    }

    #[test]
    fn power_tuples_match_single_layer() {
        for k in 0..=9 {
            for set in sf_enumerate(k, 2, 4, SfMode::All).unwrap().into_iter().step_by(7) {
                let one = premium_of_tuple(&PointTuple::power(set.clone(), 1).unwrap(), 11, 4, SolveMode::Assignment)
                    .unwrap();
                let two = premium_of_tuple(&PointTuple::power(set, 2).unwrap(), 11, 4, SolveMode::Assignment)
                    .unwrap();
                assert_eq!(one.premium, two.premium);
                assert_eq!(two.layer_argmins, vec![one.layer_argmins[0].clone(); 2]);
            }
        }
    }

    #[test]
    fn lower_bounds_on_tuples() {
        for (n, d, p) in [(2, 3, 11), (2, 4, 11), (1, 4, 11), (2, 3, 13)] {
            let fp = frobenius_polygon(n, d, p).unwrap();
            let dim = (d - 1).pow(n as u32);
            let gap = rat((p / d) as i64 - 1, p as i64 - 1);
            for k in 0..=dim {
                let minimal = sf_enumerate(k, n, d, SfMode::MinimalDegree).unwrap();
                for set in sf_enumerate(k, n, d, SfMode::All).unwrap() {
                    let prem = premium_value(&PointTuple::power(set.clone(), 1).unwrap(), p, d).unwrap();
                    if minimal.contains(&set) {
                        assert!(prem >= fp.eval_int(k));
                    } else {
                        assert!(prem >= fp.eval_int(k) + &gap, "({n},{d},{p}) k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn fractional_criterion_matches_argmin() {
        for (n, d, p) in [(2, 3, 11), (2, 4, 11), (2, 3, 7), (1, 5, 11), (2, 4, 13)] {
            let data = frobenius_numbers(n, d, p).unwrap();
            for (k, i) in vertex_parameters(&data) {
                for set in sf_enumerate(k, n, d, SfMode::MinimalDegree).unwrap() {
                    if set.len() > 6 {
                        continue;
                    }
                    let t = PointTuple::power(set, 1).unwrap();
                    let r = premium_of_tuple(&t, p, d, SolveMode::Brute).unwrap();
                    let sym0 = r.sym0();
                    crate::util::for_each_permutation(t.size(), |perm| {
                        let tau = TwistedPermutation { maps: vec![perm.to_vec()] };
                        assert_eq!(
                            sym0.contains(&tau),
                            fractional_criterion(&t, &tau, p, d, i),
                            "({n},{d},{p}) k={k} i={i} tau={perm:?}"
                        );
                    });
                }
            }
        }
    }
}

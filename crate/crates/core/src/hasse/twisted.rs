//! Polynomials of point tuples, multiplicities of twisted permutations and
//! the twisted Hasse polynomials.
//!
//! The optimal set of a tuple is a product of per-layer sets, and so are its
//! specialization survivors and its minimal-multiplicity elements. Hence
//! `Poly(A) = prod_l (sum_sigma sgn(sigma) prod_u Poly(p u - sigma(u)))^{p^{e_l}}`
//! with one factor per layer, where layer `l >= 1` carries `e_l = l - 1` and
//! layer `0` plays the role of layer `a`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::Zero;

use super::{poly_is_nonzero, poly_of_point, PointValues, SparsePoly, Variant};
use crate::arith::{FqElem, FqPolynomial};
use crate::error::{Error, Result};
use crate::lattice::{frobenius_numbers, LatticePoint};
use crate::premium::{premium_of_tuple, sf_enumerate, PointTuple, SfMode, SolveMode};
use crate::util::{int, permutation_sign, rat, Q};

/// `(m_0, ..., m_d)`, ordered by the last differing entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityVector(pub Vec<Q>);

impl Ord for MultiplicityVector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for MultiplicityVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn top_down(a: &[i64], b: &[i64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

fn point_mult(u: &LatticePoint, d: u64) -> Vec<i64> {
    let mut m = vec![0i64; d as usize + 1];
    let r = u.sum() % d;
    if r != 0 {
        m[r as usize] = -1;
        m[d as usize] = 1;
    }
    if u.0[0] == u.0[1] {
        m[0] = -1;
    }
    m
}

pub fn multiplicity_of_point(u: &LatticePoint, d: u64) -> Result<MultiplicityVector> {
    if u.dim() != 2 {
        return Err(Error::Domain(format!("multiplicities need n = 2, got {u}")));
    }
    Ok(MultiplicityVector(
        point_mult(u, d).into_iter().map(int).collect(),
    ))
}

/// Weight `p^{e_l}` of layer `l` in a tuple of length `a`.
pub fn layer_exponent(l: usize, a: usize) -> u32 {
    if l == 0 {
        a as u32 - 1
    } else {
        l as u32 - 1
    }
}

fn target(tuple: &PointTuple, l: usize, x: usize, y: usize, p: u64) -> Result<LatticePoint> {
    let a = tuple.a() as i64;
    let u = &tuple.layer(l as i64)[x];
    let v = &tuple.layer((l as i64 - 1).rem_euclid(a))[y];
    u.scaled_minus(p, v)
}

fn layer_mult(tuple: &PointTuple, l: usize, sigma: &[usize], p: u64, d: u64) -> Result<Vec<i64>> {
    let mut acc = vec![0i64; d as usize + 1];
    for (x, &y) in sigma.iter().enumerate() {
        for (s, m) in acc.iter_mut().zip(point_mult(&target(tuple, l, x, y, p)?, d)) {
            *s += m;
        }
    }
    Ok(acc)
}

/// `m_j(tau)` for a twisted permutation given by its layer maps.
pub fn multiplicity_of_tau(tuple: &PointTuple, maps: &[Vec<usize>], p: u64, d: u64) -> Result<MultiplicityVector> {
    let a = tuple.a();
    if tuple.layer(0).first().is_some_and(|u| u.dim() != 2) {
        return Err(Error::Domain("multiplicities need n = 2".into()));
    }
    let mut acc = vec![Q::zero(); d as usize + 1];
    for (l, sigma) in maps.iter().enumerate() {
        let w = p.pow(layer_exponent(l, a)) as i64;
        for (s, m) in acc.iter_mut().zip(layer_mult(tuple, l, sigma, p, d)?) {
            *s += int(w * m);
        }
    }
    let scale = rat(p as i64 - 1, p.pow(a as u32) as i64 - 1);
    Ok(MultiplicityVector(acc.into_iter().map(|x| x * &scale).collect()))
}

/// Per-layer bijections surviving under `variant`, plus the layer-wise
/// minimal multiplicities for `Variant::Minimal`. `None` when some layer
/// has no survivor under specialization.
#[derive(Clone, Debug)]
pub struct LayerSurvivors {
    pub premium: Q,
    pub layers: Vec<Vec<Vec<usize>>>,
    pub layer_mult: Vec<Vec<i64>>,
}

impl LayerSurvivors {
    /// `m(A)` as the weighted sum of layer minima.
    pub fn multiplicity(&self, p: u64) -> MultiplicityVector {
        let a = self.layers.len();
        let d1 = self.layer_mult.first().map_or(0, |m| m.len());
        let mut acc = vec![Q::zero(); d1];
        for (l, m) in self.layer_mult.iter().enumerate() {
            let w = p.pow(layer_exponent(l, a)) as i64;
            for (s, x) in acc.iter_mut().zip(m) {
                *s += int(w * x);
            }
        }
        let scale = rat(p as i64 - 1, p.pow(a as u32) as i64 - 1);
        MultiplicityVector(acc.into_iter().map(|x| x * &scale).collect())
    }
}

/// Caches the nonvanishing of specialized point polynomials.
#[derive(Default)]
pub struct NonzeroCache {
    map: HashMap<LatticePoint, bool>,
}

impl NonzeroCache {
    fn get(&mut self, u: &LatticePoint, d: u64, p: u64) -> Result<bool> {
        if let Some(&b) = self.map.get(u) {
            return Ok(b);
        }
        let b = poly_is_nonzero(u, u.dim() as u64, d, p, Variant::Specialized)?;
        self.map.insert(u.clone(), b);
        Ok(b)
    }
}

pub fn layer_survivors(
    tuple: &PointTuple,
    p: u64,
    d: u64,
    variant: Variant,
    cache: &mut NonzeroCache,
) -> Result<Option<LayerSurvivors>> {
    let n = tuple.layer(0).first().map_or(2, |u| u.dim() as u64);
    variant.check(n, d)?;
    let base = premium_of_tuple(tuple, p, d, SolveMode::Assignment)?;
    let mut layers = Vec::with_capacity(tuple.a());
    let mut mults = Vec::new();
    for (l, argmins) in base.layer_argmins.into_iter().enumerate() {
        if variant == Variant::Full {
            layers.push(argmins);
            continue;
        }
        let mut kept = Vec::new();
        for sigma in argmins {
            let mut ok = true;
            for (x, &y) in sigma.iter().enumerate() {
                if !cache.get(&target(tuple, l, x, y, p)?, d, p)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                kept.push(sigma);
            }
        }
        if kept.is_empty() {
            return Ok(None);
        }
        if variant == Variant::Minimal {
            let mut best: Option<Vec<i64>> = None;
            let mut arg = Vec::new();
            for sigma in kept {
                let m = layer_mult(tuple, l, &sigma, p, d)?;
                match best.as_ref().map(|b| top_down(&m, b)) {
                    None | Some(Ordering::Less) => {
                        best = Some(m);
                        arg = vec![sigma];
                    }
                    Some(Ordering::Equal) => arg.push(sigma),
                    Some(Ordering::Greater) => {}
                }
            }
            mults.push(best.expect("nonempty survivors"));
            layers.push(arg);
        } else {
            layers.push(kept);
        }
    }
    Ok(Some(LayerSurvivors {
        premium: base.premium,
        layers,
        layer_mult: mults,
    }))
}

fn tuple_dim(tuple: &PointTuple) -> u64 {
    tuple.layer(0).first().map_or(2, |u| u.dim() as u64)
}

/// `Poly(A)`, `Poly_0(A)` or `Poly_1(A)`.
pub fn poly_of_tuple(tuple: &PointTuple, p: u64, d: u64, variant: Variant) -> Result<SparsePoly> {
    let mut cache = NonzeroCache::default();
    let surv = match layer_survivors(tuple, p, d, variant, &mut cache)? {
        Some(s) => s,
        None => return Ok(SparsePoly::zero(p)),
    };
    poly_from_survivors(tuple, &surv, p, d, variant)
}

fn poly_from_survivors(
    tuple: &PointTuple,
    surv: &LayerSurvivors,
    p: u64,
    d: u64,
    variant: Variant,
) -> Result<SparsePoly> {
    let n = tuple_dim(tuple);
    let a = tuple.a();
    let mut memo: HashMap<LatticePoint, SparsePoly> = HashMap::new();
    let mut out = SparsePoly::one(p);
    for (l, sigmas) in surv.layers.iter().enumerate() {
        let mut layer = SparsePoly::zero(p);
        for sigma in sigmas {
            let mut term = SparsePoly::constant(p, permutation_sign(sigma) as i64);
            for (x, &y) in sigma.iter().enumerate() {
                let v = target(tuple, l, x, y, p)?;
                if !memo.contains_key(&v) {
                    let poly = poly_of_point(&v, n, d, p, variant)?;
                    memo.insert(v.clone(), poly);
                }
                term = term.mul(&memo[&v]);
                if term.is_zero() {
                    break;
                }
            }
            layer = layer.add(&term);
        }
        out = out.mul(&layer.frobenius(layer_exponent(l, a)));
    }
    Ok(out)
}

fn check_vertex(k: u64, n: u64, d: u64, p: u64) -> Result<()> {
    let data = frobenius_numbers(n, d, p)?;
    if !data.frobenius_vertices.contains(&k) {
        return Err(Error::NotFrobeniusVertex { k });
    }
    Ok(())
}

/// Largest number of tuples a twisted Hasse polynomial is summed over.
pub const TH_TUPLE_LIMIT: u128 = 1_000_000;

fn tuples(k: u64, n: u64, d: u64, a: usize) -> Result<Vec<PointTuple>> {
    if a == 0 {
        return Err(Error::param("a must be at least 1"));
    }
    let family = sf_enumerate(k, n, d, SfMode::MinimalDegree)?;
    let count = (family.len() as u128).checked_pow(a as u32).unwrap_or(u128::MAX);
    if count > TH_TUPLE_LIMIT {
        return Err(Error::GuardExceeded(format!("{count} tuples in SF_0(k)^a")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; a];
    loop {
        out.push(PointTuple::new(idx.iter().map(|&i| family[i].clone()).collect())?);
        let mut pos = 0;
        loop {
            if pos == a {
                return Ok(out);
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

/// `m^{(a)}(k)` and `SF_1^{(a)}(k)`; the multiplicity is `None` when every
/// tuple loses all its permutations to specialization.
pub fn sf1(k: u64, n: u64, d: u64, p: u64, a: usize) -> Result<(Option<MultiplicityVector>, Vec<PointTuple>)> {
    Variant::Minimal.check(n, d)?;
    check_vertex(k, n, d, p)?;
    let mut cache = NonzeroCache::default();
    let mut best: Option<MultiplicityVector> = None;
    let mut arg = Vec::new();
    for t in tuples(k, n, d, a)? {
        let Some(s) = layer_survivors(&t, p, d, Variant::Minimal, &mut cache)? else {
            continue;
        };
        let m = s.multiplicity(p);
        match best.as_ref().map(|b| m.cmp(b)) {
            None | Some(Ordering::Less) => {
                best = Some(m);
                arg = vec![t];
            }
            Some(Ordering::Equal) => arg.push(t),
            Some(Ordering::Greater) => {}
        }
    }
    Ok((best, arg))
}

fn family_for(k: u64, n: u64, d: u64, p: u64, a: usize, variant: Variant) -> Result<Vec<PointTuple>> {
    variant.check(n, d)?;
    check_vertex(k, n, d, p)?;
    match variant {
        Variant::Minimal => Ok(sf1(k, n, d, p, a)?.1),
        _ => tuples(k, n, d, a),
    }
}

/// `TH^{(a)}(k)`, `TH_0^{(a)}(k)` or `TH_1^{(a)}(k)` as a polynomial.
pub fn twisted_hasse(k: u64, a: usize, n: u64, d: u64, p: u64, variant: Variant) -> Result<SparsePoly> {
    let mut out = SparsePoly::zero(p);
    let mut cache = NonzeroCache::default();
    for t in family_for(k, n, d, p, a, variant)? {
        if let Some(s) = layer_survivors(&t, p, d, variant, &mut cache)? {
            out = out.add(&poly_from_survivors(&t, &s, p, d, variant)?);
        }
    }
    Ok(out)
}

/// The value of the twisted Hasse polynomial at the coefficients of `f`.
pub fn twisted_hasse_value(k: u64, a: usize, variant: Variant, f: &FqPolynomial) -> Result<FqElem> {
    let (n, d, p) = (f.n, f.d, f.p());
    let field = &f.field;
    let mut values = PointValues::new(f, variant)?;
    let mut cache = NonzeroCache::default();
    let mut total = field.zero();
    for t in family_for(k, n, d, p, a, variant)? {
        let Some(s) = layer_survivors(&t, p, d, variant, &mut cache)? else {
            continue;
        };
        let mut prod = field.one();
        for (l, sigmas) in s.layers.iter().enumerate() {
            let mut layer = field.zero();
            for sigma in sigmas {
                let mut term = field.from_int(permutation_sign(sigma) as i64);
                for (x, &y) in sigma.iter().enumerate() {
                    term = field.mul(&term, &values.value(&target(&t, l, x, y, p)?)?);
                    if field.is_zero(&term) {
                        break;
                    }
                }
                layer = field.add(&layer, &term);
            }
            prod = field.mul(&prod, &field.pow(&layer, p.pow(layer_exponent(l, t.a())) as u128));
            if field.is_zero(&prod) {
                break;
            }
        }
        total = field.add(&total, &prod);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldDesc;
    use crate::lattice::fundamental_points;

    fn lp(c: &[u32]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    /// `Poly(A)` summed over every element of `Sym_0` without factoring.
    fn literal_poly(tuple: &PointTuple, p: u64, d: u64) -> SparsePoly {
        let n = tuple_dim(tuple);
        let res = premium_of_tuple(tuple, p, d, SolveMode::Assignment).unwrap();
        let mut out = SparsePoly::zero(p);
        for tau in res.sym0() {
            let mut term = SparsePoly::constant(p, tau.sign() as i64);
            for (l, sigma) in tau.maps.iter().enumerate() {
                let mut prod = SparsePoly::one(p);
                for (x, &y) in sigma.iter().enumerate() {
                    let v = target(tuple, l, x, y, p).unwrap();
                    prod = prod.mul(&poly_of_point(&v, n, d, p, Variant::Full).unwrap());
                }
                term = term.mul(&prod.pow(p.pow(layer_exponent(l, tuple.a()))));
            }
            out = out.add(&term);
        }
        out
    }

    #[test]
    fn small_twisted_hasse() {
        let th = twisted_hasse(1, 1, 2, 2, 3, Variant::Full).unwrap();
        assert_eq!(th.to_string(), "1*a[0,2]^1*a[2,0]^1+2*a[1,1]^2");
        assert_eq!(twisted_hasse(1, 1, 2, 2, 3, Variant::Specialized).unwrap(), th);
        assert_eq!(twisted_hasse(0, 2, 2, 3, 7, Variant::Full).unwrap(), SparsePoly::one(7));
        assert!(matches!(
            twisted_hasse(2, 1, 2, 3, 5, Variant::Full),
            Err(Error::NotFrobeniusVertex { k: 2 })
        ));
        let single = PointTuple::power(vec![lp(&[1, 1])], 1).unwrap();
        assert_eq!(poly_of_tuple(&single, 3, 2, Variant::Full).unwrap(), th);
    }

    #[test]
    fn layer_factorization_matches_literal_sum() {
        let pts = fundamental_points(2, 3).unwrap();
        let t = PointTuple::new(vec![vec![pts[0].clone(), pts[1].clone()], vec![pts[1].clone(), pts[3].clone()]]).unwrap();
        assert_eq!(poly_of_tuple(&t, 5, 3, Variant::Full).unwrap(), literal_poly(&t, 5, 3));
        let b = PointTuple::power(vec![pts[0].clone(), pts[2].clone()], 2).unwrap();
        let one = PointTuple::power(vec![pts[0].clone(), pts[2].clone()], 1).unwrap();
        let base = poly_of_tuple(&one, 5, 3, Variant::Full).unwrap();
        let lit = literal_poly(&b, 5, 3);
        assert_eq!(lit, base.mul(&base.frobenius(1)));
        assert_eq!(poly_of_tuple(&b, 5, 3, Variant::Full).unwrap(), lit);
    }

    #[test]
    fn multiplicity_examples() {
        let m = multiplicity_of_point(&lp(&[2, 2]), 2).unwrap();
        assert_eq!(m.0, vec![rat(-1, 1), rat(0, 1), rat(0, 1)]);
        let m = multiplicity_of_point(&lp(&[3, 2]), 4).unwrap();
        assert_eq!(m.0, vec![rat(0, 1), rat(-1, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert!(multiplicity_of_point(&lp(&[1]), 2).is_err());
        let lo = MultiplicityVector(vec![rat(5, 1), rat(0, 1), rat(-1, 1)]);
        let hi = MultiplicityVector(vec![rat(-5, 1), rat(0, 1), rat(0, 1)]);
        assert!(lo < hi);
        let t = PointTuple::power(vec![lp(&[1, 1])], 1).unwrap();
        let mt = multiplicity_of_tau(&t, &[vec![0]], 3, 2).unwrap();
        assert_eq!(mt.0, vec![rat(-1, 1), rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn numeric_value_matches_symbolic() {
        let f: FqPolynomial = "p=3;a=2;n=2;d=4;terms=4,0:1,2|2,2:2,1|0,4:2,0|3,1:1,1|1,1:2,2|2,1:0,1|1,2:1,1"
            .parse()
            .unwrap();
        let field: &FieldDesc = &f.field;
        for variant in [Variant::Full, Variant::Specialized, Variant::Minimal] {
            for (k, a) in [(1u64, 1usize), (1, 2), (3, 1)] {
                let sym = twisted_hasse(k, a, 2, 4, 3, variant).unwrap();
                let direct = sym.eval(field, |w| f.coeff(w));
                assert_eq!(twisted_hasse_value(k, a, variant, &f).unwrap(), direct, "{variant:?} k={k} a={a}");
            }
        }
    }
}

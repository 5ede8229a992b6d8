//! Binary forms of even degree with `p = -1 (mod d)`: the distinguished
//! point sets at Frobenius vertices, the permutation `tau_0` built from
//! reflections and swaps, and the candidate splitting of `TH_1` into a
//! facial factor and an interior monomial.

use super::twisted::{layer_survivors, NonzeroCache};
use super::{poly_of_point, Monomial, SparsePoly, Variant};
use crate::error::{Error, Result};
use crate::lattice::{frobenius_numbers, stratum, strata, LatticePoint};
use crate::premium::PointTuple;
use crate::util::permutation_sign;

fn check(d: u64, p: u64) -> Result<()> {
    Variant::Minimal.check(2, d)?;
    if !(p + 1).is_multiple_of(d) {
        return Err(Error::Domain(format!("need p = -1 mod d, got p = {p}, d = {d}")));
    }
    if p + 1 < d {
        return Err(Error::Domain(format!("need p >= d - 1, got p = {p}, d = {d}")));
    }
    Ok(())
}

/// Departures from `h_{i,1} = 0` for `i <= d/2` and `h_{i,1} = h_{d-i}`
/// for `d/2 < i <= d`.
pub fn split_violations(d: u64, p: u64) -> Result<Vec<String>> {
    check(d, p)?;
    let data = frobenius_numbers(2, d, p)?;
    let mut out = Vec::new();
    for i in 0..=d {
        let expect = if 2 * i <= d { 0 } else { data.h[(d - i) as usize] };
        let got = data.h_split(i, 1);
        if got != expect {
            out.push(format!("h_({i},1) = {got}, expected {expect}"));
        }
    }
    Ok(out)
}

/// A Frobenius vertex `k <= C(d,2)` with its parameter `(i, iota)` and the
/// point set `W_{i,1} + W_0 + ... + W_{i-1}` (`iota = 1`) or
/// `W_0 + ... + W_i` (`iota = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedVertex {
    pub k: u64,
    pub i: u64,
    pub iota: u8,
    pub set: Vec<LatticePoint>,
}

/// Every parameter `(i, iota)` with `i <= d` for which the distinguished set
/// is defined: `iota = 0`, or `iota = 1` with `d - i < i`.
pub fn distinguished_vertices(d: u64, p: u64) -> Result<Vec<DistinguishedVertex>> {
    check(d, p)?;
    let data = frobenius_numbers(2, d, p)?;
    let mut out = Vec::new();
    for rep in data.vertex_reps() {
        if rep.i > d || (rep.iota == 1 && 2 * rep.i <= d) {
            continue;
        }
        let mut set: Vec<LatticePoint> = (0..rep.i)
            .map(|j| stratum(2, d, j))
            .collect::<Result<Vec<_>>>()?
            .concat();
        if rep.iota == 0 {
            set.extend(stratum(2, d, rep.i)?);
        } else {
            set.extend(strata(d, rep.i)?.median);
        }
        set.sort();
        if set.len() as u64 != rep.k {
            return Err(Error::Domain(format!(
                "distinguished set at (i, iota) = ({}, {}) has {} points, vertex is {}",
                rep.i,
                rep.iota,
                set.len(),
                rep.k
            )));
        }
        out.push(DistinguishedVertex {
            k: rep.k,
            i: rep.i,
            iota: rep.iota,
            set,
        });
    }
    Ok(out)
}

fn is_median(u: &LatticePoint, d: u64) -> bool {
    let half = (d / 2) as u32;
    u.0[0] < half && u.0[1] < half
}

/// How `tau_0` moves a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    /// `u -> (d/2, d/2) - u`
    Reflect,
    /// `u -> (u_2, u_1)`
    Swap,
}

fn move_of(u: &LatticePoint, d: u64, i: u64) -> Move {
    let j = u.sum();
    if 2 * j <= d {
        if d - j <= i {
            Move::Reflect
        } else {
            Move::Swap
        }
    } else if is_median(u, d) {
        Move::Reflect
    } else {
        Move::Swap
    }
}

fn apply(u: &LatticePoint, d: u64, m: Move) -> Option<LatticePoint> {
    let half = (d / 2) as u32;
    match m {
        Move::Reflect => LatticePoint(vec![half, half]).checked_sub(u),
        Move::Swap => Some(LatticePoint(vec![u.0[1], u.0[0]])),
    }
}

/// `tau_0` on the distinguished set, as positions in the sorted set.
pub fn tau0(v: &DistinguishedVertex, d: u64) -> Result<Vec<usize>> {
    let mut map = Vec::with_capacity(v.set.len());
    for u in &v.set {
        let image = apply(u, d, move_of(u, d, v.i))
            .and_then(|w| v.set.iter().position(|x| *x == w))
            .ok_or_else(|| Error::Domain(format!("tau_0 leaves the set at {u}")))?;
        map.push(image);
    }
    let mut seen = map.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != map.len() {
        return Err(Error::Domain("tau_0 is not a bijection".into()));
    }
    Ok(map)
}

/// `Sym_2` of the distinguished set with `a = 1`, empty when
/// specialization kills every optimal permutation.
pub fn sym2(v: &DistinguishedVertex, d: u64, p: u64) -> Result<Vec<Vec<usize>>> {
    let tuple = PointTuple::power(v.set.clone(), 1)?;
    let mut cache = NonzeroCache::default();
    Ok(layer_survivors(&tuple, p, d, Variant::Minimal, &mut cache)?
        .map(|s| s.layers.into_iter().next().unwrap_or_default())
        .unwrap_or_default())
}

/// `TH_1 = prod_l (Fac * Int)^{p^{l-1}}` with `Fac` in the three facial
/// variables (sign of `tau_0` included) and `Int` a monomial in interior
/// variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacInt {
    pub fac: SparsePoly,
    pub int: Monomial,
}

impl FacInt {
    pub fn product(&self, a: usize) -> SparsePoly {
        let p = self.fac.p();
        let mut base = SparsePoly::zero(p);
        for (m, c) in self.fac.terms() {
            base.add_term(m.mul(&self.int), *c);
        }
        (0..a).fold(SparsePoly::one(p), |acc, l| acc.mul(&base.frobenius(l as u32)))
    }

    pub fn fac_degree(&self) -> u64 {
        self.fac.total_degree().unwrap_or(0)
    }
}

/// Distinct restrictions of the monomials of `poly` to interior variables.
pub fn interior_parts(poly: &SparsePoly, d: u64) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = poly.terms().map(|(m, _)| m.restrict(|w| w.sum() < d)).collect();
    out.sort();
    out.dedup();
    out
}

pub fn is_facial_variable(w: &LatticePoint, d: u64) -> bool {
    let (half, dd) = ((d / 2) as u32, d as u32);
    matches!(w.0.as_slice(), [x, y] if (*x, *y) == (dd, 0) || (*x, *y) == (0, dd) || (*x, *y) == (half, half))
}

/// `Fac(k)` and `Int(k)` built from `tau_0`: a swapped point `u` of degree
/// `j` contributes `Poly_1(c(1,1))` to `Int` with `c = d/2 - j` below the
/// middle and `c = d - j` above it, and the rest of its factor to `Fac`.
pub fn facial_interior_factorization(v: &DistinguishedVertex, d: u64, p: u64) -> Result<FacInt> {
    check(d, p)?;
    let tau = tau0(v, d)?;
    let half = (d / 2) as u32;
    let mut fac = SparsePoly::constant(p, permutation_sign(&tau) as i64);
    let mut int = Monomial::one();
    for u in &v.set {
        let j = u.sum() as u32;
        let (rest, inner) = match move_of(u, d, v.i) {
            Move::Reflect => (LatticePoint(vec![half, half]), None),
            Move::Swap if 2 * j < d as u32 => (LatticePoint(vec![half, half]), Some(half - j)),
            Move::Swap => (LatticePoint(vec![d as u32, d as u32]), Some(d as u32 - j)),
        };
        let facial = u.scaled_minus(p + 1, &rest)?;
        fac = fac.mul(&poly_of_point(&facial, 2, d, p, Variant::Minimal)?);
        if let Some(c) = inner {
            let q = poly_of_point(&LatticePoint(vec![c, c]), 2, d, p, Variant::Minimal)?;
            let (m, coeff) = q
                .as_monomial()
                .ok_or_else(|| Error::Domain(format!("interior factor of {u} is not a monomial")))?;
            fac = fac.scale(coeff as i64);
            int = int.mul(m);
        }
    }
    if fac.variables().iter().any(|w| !is_facial_variable(w, d)) {
        return Err(Error::Domain("Fac involves a non-facial variable".into()));
    }
    Ok(FacInt { fac, int })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hasse::{sf1, twisted_hasse};

    #[test]
    fn split_lemma() {
        for (d, p) in [(2, 3), (2, 7), (4, 3), (4, 7), (4, 11), (6, 5), (6, 11)] {
            assert!(split_violations(d, p).unwrap().is_empty(), "d={d} p={p}");
        }
        assert!(split_violations(4, 5).is_err());
    }

    #[test]
    fn quadratic_degree_two() {
        let vs = distinguished_vertices(2, 3).unwrap();
        let v = vs.iter().find(|v| v.k == 1).unwrap();
        assert_eq!(sym2(v, 2, 3).unwrap(), vec![tau0(v, 2).unwrap()]);
        let fi = facial_interior_factorization(v, 2, 3).unwrap();
        assert_eq!(fi.int, Monomial::one());
        assert_eq!(fi.fac.to_string(), "1*a[0,2]^1*a[2,0]^1+2*a[1,1]^2");
    }

    #[test]
    fn quartic_pipeline() {
        // marginal points of W_3 and W_4 may be fixed as well as swapped, so
        // Sym_2 doubles with each marginal pair and TH_1 picks up several
        // interior monomials
        for p in [7u64, 11] {
            for v in distinguished_vertices(4, p).unwrap() {
                let tau = tau0(&v, 4).unwrap();
                let s2 = sym2(&v, 4, p).unwrap();
                assert!(s2.contains(&tau));
                let expect = match v.k {
                    3 => 2,
                    6 => 4,
                    _ => 1,
                };
                assert_eq!(s2.len(), expect, "p={p} k={}", v.k);
                let (_, fam) = sf1(v.k, 2, 4, p, 1).unwrap();
                assert_eq!(fam, vec![PointTuple::power(v.set.clone(), 1).unwrap()]);
                let fi = facial_interior_factorization(&v, 4, p).unwrap();
                assert!(!fi.fac.is_zero());
                assert!(fi.fac_degree() < 9 * p);
                let th1 = twisted_hasse(v.k, 1, 2, 4, p, Variant::Minimal).unwrap();
                assert_eq!(interior_parts(&th1, 4).len() == 1, expect == 1);
                assert_eq!(th1 == fi.product(1), expect == 1, "p={p} k={}", v.k);
            }
        }
    }
}

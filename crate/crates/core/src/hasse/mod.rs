//! Artin-Hasse coefficients in characteristic `p`, minimal-degree integral
//! sections, the polynomials of lattice points and of point tuples, and the
//! twisted Hasse polynomials at Frobenius vertices.

pub mod quadratic;
pub mod sparse;
pub mod twisted;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{FqElem, FqPolynomial};
use crate::error::{Error, Result};
use crate::lattice::{simplex_points, validate_nd, LatticePoint};
use crate::util::{int, Q};

pub use sparse::{Monomial, SparsePoly};
pub use twisted::{
    multiplicity_of_point, multiplicity_of_tau, poly_of_tuple, sf1, twisted_hasse,
    twisted_hasse_value, MultiplicityVector,
};

/// Which family of sections a polynomial sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// All minimal-degree sections.
    Full,
    /// Sections avoiding every degree-one point except `(d,0)`, `(0,d)` and
    /// `(d/2,d/2)`.
    Specialized,
    /// Specialized sections of least interior degree.
    Minimal,
}

impl Variant {
    pub fn check(self, n: u64, d: u64) -> Result<()> {
        if self != Variant::Full && (n != 2 || !d.is_multiple_of(2)) {
            return Err(Error::Domain(format!(
                "{self:?} sections need n = 2 and even d, got n = {n}, d = {d}"
            )));
        }
        Ok(())
    }
}

struct AhTable {
    lambda: Vec<Q>,
    reduced: Vec<u64>,
}

fn ah_tables() -> &'static Mutex<HashMap<u64, AhTable>> {
    static TABLES: OnceLock<Mutex<HashMap<u64, AhTable>>> = OnceLock::new();
    TABLES.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `lambda_0..=lambda_upto` reduced mod `p`, from `j lambda_j =
/// sum_{p^i <= j} lambda_{j - p^i}`.
pub fn artin_hasse_coeffs(upto: u64, p: u64) -> Vec<u64> {
    let mut tables = ah_tables().lock().expect("artin-hasse table lock");
    let t = tables.entry(p).or_insert_with(|| AhTable {
        lambda: vec![int(1)],
        reduced: vec![1],
    });
    let pb = BigInt::from(p);
    while (t.lambda.len() as u64) <= upto {
        let j = t.lambda.len() as u64;
        let mut acc = Q::zero();
        let mut pi = 1u64;
        while pi <= j {
            acc += &t.lambda[(j - pi) as usize];
            pi *= p;
        }
        let lam = acc / int(j as i64);
        let den = lam.denom();
        assert!(
            !(den % &pb).is_zero(),
            "Artin-Hasse coefficient {j} has a denominator divisible by {p}"
        );
        let num = lam.numer().mod_floor(&pb);
        let inv = den
            .modpow(&(&pb - 2u32), &pb)
            .to_u64()
            .expect("residue below p");
        let r = num.to_u64().expect("residue below p") * inv % p;
        t.lambda.push(lam);
        t.reduced.push(r);
    }
    t.reduced[..=upto as usize].to_vec()
}

pub fn artin_hasse_coeff(j: u64, p: u64) -> u64 {
    artin_hasse_coeffs(j, p)[j as usize]
}

/// A section `s`, stored by its nonzero values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Section {
    pub counts: Vec<(LatticePoint, u64)>,
    pub degree: u64,
    /// `sum_{deg w < 1} s(w)`.
    pub interior_degree: u64,
}

impl Section {
    pub fn vec(&self, n: usize) -> LatticePoint {
        let mut v = LatticePoint::zero(n);
        for (w, c) in &self.counts {
            v = v.add(&w.scale(*c as u32));
        }
        v
    }

    pub fn mono(&self, p: u64) -> SparsePoly {
        let max = self.counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
        let lambda = artin_hasse_coeffs(max, p);
        let coeff = self
            .counts
            .iter()
            .fold(1u64, |acc, (_, c)| acc * lambda[*c as usize] % p);
        let mut out = SparsePoly::zero(p);
        out.add_term(Monomial(self.counts.clone()), coeff);
        out
    }
}

/// Nonzero lattice points a section may use under `variant`.
fn section_support(n: u64, d: u64, variant: Variant) -> Result<Vec<LatticePoint>> {
    variant.check(n, d)?;
    let half = (d / 2) as u32;
    let dd = d as u32;
    let keep = |w: &LatticePoint| {
        if w.sum() == 0 {
            return false;
        }
        if variant == Variant::Full || w.sum() < d {
            return true;
        }
        matches!(w.0.as_slice(), [x, y] if (*x == dd && *y == 0) || (*x == 0 && *y == dd) || (*x == half && *y == half))
    };
    Ok(simplex_points(n, d)?.into_iter().filter(keep).collect())
}

/// The sections of `variant` representing `u` with degree `ceil(deg u)`.
pub fn sections_of(u: &LatticePoint, n: u64, d: u64, variant: Variant) -> Result<Vec<Section>> {
    validate_nd(n, d)?;
    if u.dim() as u64 != n {
        return Err(Error::param(format!("{u} does not have {n} coordinates")));
    }
    let support = section_support(n, d, variant)?;
    let m = u.ceil_degree(d);
    let slack = m * d - u.sum();
    let interior_target = match variant {
        Variant::Minimal => Some(u64::from(!u.sum().is_multiple_of(d))),
        _ => None,
    };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    enumerate(
        &support,
        0,
        u.clone(),
        m,
        slack,
        0,
        d,
        interior_target,
        &mut cur,
        &mut out,
    );
    for s in &out {
        if s.interior_degree >= d {
            return Err(Error::Domain(format!(
                "section of {u} has interior degree {} >= {d}",
                s.interior_degree
            )));
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    support: &[LatticePoint],
    idx: usize,
    rest: LatticePoint,
    count: u64,
    slack: u64,
    interior: u64,
    d: u64,
    interior_target: Option<u64>,
    cur: &mut Vec<(LatticePoint, u64)>,
    out: &mut Vec<Section>,
) {
    if count == 0 {
        if rest.sum() == 0 && interior_target.is_none_or(|t| t == interior) {
            let degree = cur.iter().map(|(_, c)| c).sum();
            out.push(Section {
                counts: cur.clone(),
                degree,
                interior_degree: interior,
            });
        }
        return;
    }
    if idx == support.len() {
        return;
    }
    let w = &support[idx];
    let weight = d - w.sum();
    let mut max = count;
    if weight > 0 {
        max = max.min(slack / weight);
    }
    for (r, x) in rest.0.iter().zip(&w.0) {
        if *x > 0 {
            max = max.min((*r / *x) as u64);
        }
    }
    let interior_step = u64::from(weight > 0);
    for c in (0..=max).rev() {
        let next_interior = interior + c * interior_step;
        if interior_target.is_some_and(|t| next_interior > t) {
            continue;
        }
        let rest_next = rest
            .checked_sub(&w.scale(c as u32))
            .expect("bounded by the coordinate check");
        if c > 0 {
            cur.push((w.clone(), c));
        }
        enumerate(
            support,
            idx + 1,
            rest_next,
            count - c,
            slack - c * weight,
            next_interior,
            d,
            interior_target,
            cur,
            out,
        );
        if c > 0 {
            cur.pop();
        }
    }
}

/// `Poly(u)`, `Poly_0(u)` or `Poly_1(u)`: the sum of `Mono(s)` over the
/// sections of `variant`.
pub fn poly_of_point(u: &LatticePoint, n: u64, d: u64, p: u64, variant: Variant) -> Result<SparsePoly> {
    let mut out = SparsePoly::zero(p);
    for s in sections_of(u, n, d, variant)? {
        out = out.add(&s.mono(p));
    }
    Ok(out)
}

/// Memoized numeric values of point polynomials at one `f`.
pub struct PointValues<'a> {
    f: &'a FqPolynomial,
    variant: Variant,
    coeffs: BTreeMap<LatticePoint, FqElem>,
    memo: HashMap<LatticePoint, FqElem>,
    nonzero: HashMap<LatticePoint, bool>,
}

impl<'a> PointValues<'a> {
    pub fn new(f: &'a FqPolynomial, variant: Variant) -> Result<Self> {
        variant.check(f.n, f.d)?;
        Ok(PointValues {
            f,
            variant,
            coeffs: f.terms().map(|(w, c)| (w.clone(), c.clone())).collect(),
            memo: HashMap::new(),
            nonzero: HashMap::new(),
        })
    }

    pub fn value(&mut self, u: &LatticePoint) -> Result<FqElem> {
        if let Some(v) = self.memo.get(u) {
            return Ok(v.clone());
        }
        let field = &self.f.field;
        let p = field.p();
        let mut acc = field.zero();
        for s in sections_of(u, self.f.n, self.f.d, self.variant)? {
            let max = s.counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
            let lambda = artin_hasse_coeffs(max, p);
            let mut t = field.one();
            for (w, c) in &s.counts {
                let a = match self.coeffs.get(w) {
                    Some(a) => a,
                    None => {
                        t = field.zero();
                        break;
                    }
                };
                t = field.scale(lambda[*c as usize], &field.mul(&t, &field.pow(a, *c as u128)));
            }
            acc = field.add(&acc, &t);
        }
        self.memo.insert(u.clone(), acc.clone());
        Ok(acc)
    }

    /// Whether the point polynomial is nonzero as a polynomial.
    pub fn is_nonzero_poly(&mut self, u: &LatticePoint) -> Result<bool> {
        if let Some(&b) = self.nonzero.get(u) {
            return Ok(b);
        }
        let b = poly_is_nonzero(u, self.f.n, self.f.d, self.f.p(), self.variant)?;
        self.nonzero.insert(u.clone(), b);
        Ok(b)
    }
}

/// Distinct sections give distinct monomials, so the point polynomial is
/// nonzero iff some section has every `lambda_{s(w)}` nonzero mod `p`.
pub fn poly_is_nonzero(u: &LatticePoint, n: u64, d: u64, p: u64, variant: Variant) -> Result<bool> {
    Ok(sections_of(u, n, d, variant)?.iter().any(|s| {
        let max = s.counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
        let lambda = artin_hasse_coeffs(max, p);
        s.counts.iter().all(|(_, c)| lambda[*c as usize] != 0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldDesc;
    use crate::util::{factorial, mod_inverse};

    fn lp(c: &[u32]) -> LatticePoint {
        LatticePoint(c.to_vec())
    }

    #[test]
    fn artin_hasse_examples() {
        assert_eq!(artin_hasse_coeff(0, 3), 1);
        assert_eq!(artin_hasse_coeff(2, 3), 2);
        assert_eq!(artin_hasse_coeff(3, 3), 2);
        for p in [5u64, 7, 11, 13] {
            for j in 0..p {
                let inv = mod_inverse((factorial(j) % p as u128) as i64, p as i64).unwrap();
                assert_eq!(artin_hasse_coeff(j, p), inv as u64, "p={p} j={j}");
            }
        }
        // E(x) = exp(x + x^2/2) for p = 2 up to degree 3: 1, 1, 1, 2/3
        assert_eq!(artin_hasse_coeffs(3, 2), vec![1, 1, 1, 0]);
    }

    #[test]
    fn section_examples() {
        assert_eq!(sections_of(&lp(&[0, 0]), 2, 2, Variant::Full).unwrap().len(), 1);
        let s = sections_of(&lp(&[2, 2]), 2, 2, Variant::Full).unwrap();
        assert_eq!(s.len(), 2);
        for sec in &s {
            assert_eq!(sec.vec(2), lp(&[2, 2]));
            assert_eq!(sec.degree, 2);
        }
        let one = sections_of(&lp(&[1, 0]), 2, 2, Variant::Full).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].counts, vec![(lp(&[1, 0]), 1)]);
        assert!(sections_of(&lp(&[1]), 1, 3, Variant::Specialized).is_err());
    }

    #[test]
    fn point_polynomials() {
        assert_eq!(poly_of_point(&lp(&[0, 0]), 2, 2, 3, Variant::Full).unwrap(), SparsePoly::one(3));
        let q = poly_of_point(&lp(&[2, 2]), 2, 2, 3, Variant::Full).unwrap();
        assert_eq!(q.to_string(), "1*a[0,2]^1*a[2,0]^1+2*a[1,1]^2");
        assert_eq!(poly_of_point(&lp(&[1]), 1, 2, 5, Variant::Full).unwrap().to_string(), "1*a[1]^1");
    }

    #[test]
    fn specialization_and_interior_degree() {
        // d = 4: (3,1) and (1,3) are killed by specialization
        let full = sections_of(&lp(&[7, 5]), 2, 4, Variant::Full).unwrap();
        let spec = sections_of(&lp(&[7, 5]), 2, 4, Variant::Specialized).unwrap();
        let min = sections_of(&lp(&[7, 5]), 2, 4, Variant::Minimal).unwrap();
        assert!(spec.len() < full.len());
        assert!(spec.iter().all(|s| full.contains(s)));
        assert!(min.iter().all(|s| spec.contains(s) && s.interior_degree == 0));
        for s in &full {
            assert!(s.interior_degree < 4);
            assert!(s.degree < 11 || s.mono(11).total_degree() == Some(s.degree));
        }
    }

    #[test]
    fn numeric_values_match_symbolic() {
        let f: FqPolynomial = "p=5;a=2;n=2;d=4;terms=4,0:1,2|2,2:3,1|0,4:2,0|3,1:1,1|1,1:4,4|2,1:0,3"
            .parse()
            .unwrap();
        let field: &FieldDesc = &f.field;
        for variant in [Variant::Full, Variant::Specialized, Variant::Minimal] {
            let mut vals = PointValues::new(&f, variant).unwrap();
            for u in [lp(&[4, 4]), lp(&[9, 3]), lp(&[6, 5]), lp(&[0, 0])] {
                let sym = poly_of_point(&u, 2, 4, 5, variant).unwrap();
                let direct = sym.eval(field, |w| f.coeff(w));
                assert_eq!(vals.value(&u).unwrap(), direct, "{variant:?} {u}");
                assert_eq!(vals.is_nonzero_poly(&u).unwrap(), !sym.is_zero());
            }
        }
    }
}

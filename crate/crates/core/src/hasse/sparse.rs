//! Sparse polynomials over `F_p` in the coefficient variables `a_w`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{FieldDesc, FqElem};
use crate::lattice::LatticePoint;

/// A monomial `prod a_w^{e_w}`, sorted by `w`, exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<(LatticePoint, u64)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(w: LatticePoint, e: u64) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(w, e)])
        }
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<LatticePoint, u64> = self.0.iter().cloned().collect();
        for (w, e) in &other.0 {
            *map.entry(w.clone()).or_insert(0) += e;
        }
        Monomial(map.into_iter().collect())
    }

    /// Restriction to the variables selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(&LatticePoint) -> bool) -> Monomial {
        Monomial(self.0.iter().filter(|(w, _)| keep(w)).cloned().collect())
    }

    /// Quotient when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut map: BTreeMap<LatticePoint, u64> = self.0.iter().cloned().collect();
        for (w, e) in &other.0 {
            let slot = map.get_mut(w)?;
            if *slot < *e {
                return None;
            }
            *slot -= e;
        }
        Some(Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    p: u64,
    terms: BTreeMap<Monomial, u64>,
}

impl SparsePoly {
    pub fn zero(p: u64) -> SparsePoly {
        SparsePoly {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u64, c: i64) -> SparsePoly {
        let mut out = SparsePoly::zero(p);
        out.add_term(Monomial::one(), c.rem_euclid(p as i64) as u64);
        out
    }

    pub fn one(p: u64) -> SparsePoly {
        SparsePoly::constant(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &u64)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let v = (*o.get() + c) % self.p;
                if v == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> SparsePoly {
        let c = c.rem_euclid(self.p as i64) as u64;
        let mut out = SparsePoly::zero(self.p);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.p);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2 % self.p);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> SparsePoly {
        let mut base = self.clone();
        let mut acc = SparsePoly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `P^{p^e}`: coefficients lie in `F_p`, so only exponents change.
    pub fn frobenius(&self, e: u32) -> SparsePoly {
        let factor = self.p.pow(e);
        SparsePoly {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial(m.0.iter().map(|(w, x)| (w.clone(), x * factor)).collect()),
                        *c,
                    )
                })
                .collect(),
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest degree in the variables selected by `keep`.
    pub fn degree_in(&self, keep: impl Fn(&LatticePoint) -> bool) -> Option<u64> {
        self.terms
            .keys()
            .map(|m| m.0.iter().filter(|(w, _)| keep(w)).map(|(_, e)| e).sum())
            .max()
    }

    pub fn variables(&self) -> Vec<LatticePoint> {
        let mut vars: Vec<LatticePoint> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(w, _)| w.clone()))
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, u64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (m, *c))
        } else {
            None
        }
    }

    /// Substitution of `value(w)` for each `a_w`.
    pub fn eval(&self, field: &FieldDesc, value: impl Fn(&LatticePoint) -> FqElem) -> FqElem {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_int(*c as i64);
            for (w, e) in &m.0 {
                t = field.mul(&t, &field.pow(&value(w), *e as u128));
                if field.is_zero(&t) {
                    break;
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }
}

/// Canonical text: `c*a[u1,u2]^e*...+...`, terms in increasing monomial
/// order, `0` for the zero polynomial.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}")?;
            for (w, e) in &m.0 {
                let coords: Vec<String> = w.0.iter().map(|x| x.to_string()).collect();
                write!(f, "*a[{}]^{e}", coords.join(","))?;
            }
        }
        Ok(())
    }
}

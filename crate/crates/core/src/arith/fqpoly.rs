//! Polynomials `f = sum a_w x^w` supported on `Simp(n,d)` with coefficients
//! in `F_{p^a}`, their text form, and smoothness of the leading form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::field::{poly, FieldDesc, FqElem};
use crate::error::{Error, Result};
use crate::lattice::{validate_nd, LatticePoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqPolynomial {
    pub n: u64,
    pub d: u64,
    pub field: FieldDesc,
    /// Nonzero coefficients only.
    terms: BTreeMap<LatticePoint, FqElem>,
}

impl FqPolynomial {
    pub fn new(n: u64, d: u64, field: FieldDesc) -> Result<FqPolynomial> {
        validate_nd(n, d)?;
        Ok(FqPolynomial {
            n,
            d,
            field,
            terms: BTreeMap::new(),
        })
    }

    pub fn a(&self) -> usize {
        self.field.degree()
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn set(&mut self, w: LatticePoint, c: FqElem) -> Result<()> {
        if w.dim() as u64 != self.n || w.sum() > self.d {
            return Err(Error::param(format!("{w} is not a lattice point of Simp({}, {})", self.n, self.d)));
        }
        if !self.field.contains(&c) {
            return Err(Error::FieldMismatch(format!("coefficient {:?} not in the field", c.0)));
        }
        if self.field.is_zero(&c) {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, c);
        }
        Ok(())
    }

    pub fn coeff(&self, w: &LatticePoint) -> FqElem {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &FqElem)> {
        self.terms.iter()
    }

    /// Terms of degree exactly `d`.
    pub fn leading_form(&self) -> Vec<(LatticePoint, FqElem)> {
        self.terms
            .iter()
            .filter(|(w, _)| w.sum() == self.d)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }

    fn axis(&self, i: usize) -> LatticePoint {
        let mut v = vec![0u32; self.n as usize];
        v[i] = self.d as u32;
        LatticePoint(v)
    }

    pub fn is_diagonal(&self) -> bool {
        let axes: Vec<LatticePoint> = (0..self.n as usize).map(|i| self.axis(i)).collect();
        self.leading_form().iter().all(|(w, _)| axes.contains(w))
    }

    /// Smoothness of the leading form. Decided for `n <= 2` and for
    /// diagonal leading forms.
    pub fn is_smooth(&self) -> Result<bool> {
        let f = &self.field;
        if self.d.is_multiple_of(self.p()) {
            return Err(Error::NotCoprime {
                p: self.p(),
                d: self.d,
            });
        }
        match self.n {
            1 => Ok(!f.is_zero(&self.coeff(&self.axis(0)))),
            2 => {
                let (x, y) = (self.axis(0), self.axis(1));
                if f.is_zero(&self.coeff(&x)) || f.is_zero(&self.coeff(&y)) {
                    return Ok(false);
                }
                // g(t) = F(t, 1)
                let g: poly::Poly = poly::trim(
                    f,
                    (0..=self.d)
                        .map(|j| self.coeff(&LatticePoint(vec![j as u32, (self.d - j) as u32])))
                        .collect(),
                );
                let dg = poly::derivative(f, &g);
                Ok(poly::gcd(f, &g, &dg).len() == 1)
            }
            _ => {
                if !self.is_diagonal() {
                    return Err(Error::Domain(
                        "smoothness is only decided for n <= 2 or diagonal leading forms".into(),
                    ));
                }
                Ok((0..self.n as usize).all(|i| !f.is_zero(&self.coeff(&self.axis(i)))))
            }
        }
    }

    /// Value at a point of `F_{p^a}^n` (direct arithmetic).
    pub fn eval(&self, x: &[FqElem]) -> FqElem {
        let f = &self.field;
        let mut acc = f.zero();
        for (w, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(&w.0) {
                t = f.mul(&t, &f.pow(xi, e as u128));
            }
            acc = f.add(&acc, &t);
        }
        acc
    }
}

impl fmt::Display for FqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={};a={};n={};d={};terms=",
            self.p(),
            self.a(),
            self.n,
            self.d
        )?;
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let exps: Vec<String> = w.0.iter().map(|e| e.to_string()).collect();
            let cs: Vec<String> = c.0.iter().map(|e| e.to_string()).collect();
            write!(f, "{}:{}", exps.join(","), cs.join(","))?;
        }
        Ok(())
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}: {s:?}")))
}

impl FromStr for FqPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<FqPolynomial> {
        let s = s.trim();
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for part in s.split(';') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            fields.insert(k.trim(), v);
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::Parse(format!("missing field {k}")))
        };
        let p: u64 = parse_num(get("p")?, "p")?;
        let a: usize = parse_num(get("a")?, "a")?;
        let n: u64 = parse_num(get("n")?, "n")?;
        let d: u64 = parse_num(get("d")?, "d")?;
        let field = FieldDesc::build(p, a)?;
        let mut f = FqPolynomial::new(n, d, field)?;
        let terms = get("terms")?.trim();
        if terms.is_empty() {
            return Ok(f);
        }
        for term in terms.split('|') {
            let (e, c) = term
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("term without ':': {term:?}")))?;
            let exps: Vec<u32> = e
                .split(',')
                .map(|x| parse_num(x, "exponent"))
                .collect::<Result<_>>()?;
            let cs: Vec<u64> = c
                .split(',')
                .map(|x| parse_num(x, "coefficient"))
                .collect::<Result<_>>()?;
            if cs.len() != a || cs.iter().any(|&x| x >= p) {
                return Err(Error::Parse(format!("coefficient {c:?} is not an element of F_{p}^{a}")));
            }
            let w = LatticePoint(exps);
            if f.terms.contains_key(&w) {
                return Err(Error::Parse(format!("repeated term {w}")));
            }
            f.set(w, FqElem(cs))?;
        }
        Ok(f)
    }
}

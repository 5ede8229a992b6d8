//! Finite fields `F_{p^m}` as `F_p[X]/(g)` with a deterministic modulus,
//! plus the few polynomial routines over them that the crate needs.

use crate::error::{Error, Result};
use crate::util::{is_prime, prime_factors};

/// Little-endian coefficients of `X^0 .. X^{m-1}`, each in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDesc {
    p: u64,
    degree: usize,
    /// Monic, little-endian, length `degree + 1`.
    modulus: Vec<u64>,
}

impl FieldDesc {
    /// `F_{p^degree}` whose modulus is the monic irreducible polynomial with
    /// the smallest encoding `sum c_i p^i` of its lower coefficients.
    pub fn build(p: u64, degree: usize) -> Result<FieldDesc> {
        if !is_prime(p) {
            return Err(Error::param(format!("p = {p} is not prime")));
        }
        if degree == 0 {
            return Err(Error::param("field degree must be at least 1"));
        }
        let count = p
            .checked_pow(degree as u32)
            .ok_or_else(|| Error::param("field too large"))?;
        if degree == 1 {
            return Ok(FieldDesc {
                p,
                degree,
                modulus: vec![0, 1],
            });
        }
        let prime = FieldDesc::prime(p);
        for code in 0..count {
            let mut m = digits(code, p, degree);
            m.push(1);
            if is_irreducible(&prime, &m) {
                return Ok(FieldDesc {
                    p,
                    degree,
                    modulus: m,
                });
            }
        }
        Err(Error::Domain(format!(
            "no irreducible polynomial of degree {degree} over F_{p}"
        )))
    }

    pub fn prime(p: u64) -> FieldDesc {
        FieldDesc {
            p,
            degree: 1,
            modulus: vec![0, 1],
        }
    }

    /// A field with an explicitly given monic modulus (checked).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<FieldDesc> {
        let degree = modulus.len().saturating_sub(1);
        if degree == 0 || modulus[degree] != 1 {
            return Err(Error::param("modulus must be monic of positive degree"));
        }
        if degree > 1 && !is_irreducible(&FieldDesc::prime(p), &modulus) {
            return Err(Error::param("modulus is reducible"));
        }
        Ok(FieldDesc {
            p,
            degree,
            modulus,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree as u32)
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.degree])
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> FqElem {
        let mut v = vec![0; self.degree];
        v[0] = c.rem_euclid(self.p as i64) as u64;
        FqElem(v)
    }

    /// The class of `X` (equal to `0` in the prime field).
    pub fn generator(&self) -> FqElem {
        if self.degree == 1 {
            return self.zero();
        }
        let mut v = vec![0; self.degree];
        v[1] = 1;
        FqElem(v)
    }

    pub fn is_zero(&self, x: &FqElem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    /// The value if `x` lies in the prime field.
    pub fn as_prime(&self, x: &FqElem) -> Option<u64> {
        if x.0[1..].iter().all(|&c| c == 0) {
            Some(x.0[0])
        } else {
            None
        }
    }

    pub fn contains(&self, x: &FqElem) -> bool {
        x.0.len() == self.degree && x.0.iter().all(|&c| c < self.p)
    }

    pub fn encode(&self, x: &FqElem) -> u64 {
        x.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn decode(&self, code: u64) -> FqElem {
        FqElem(digits(code, self.p, self.degree))
    }

    pub fn add(&self, x: &FqElem, y: &FqElem) -> FqElem {
        FqElem(
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| (a + b) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, x: &FqElem, y: &FqElem) -> FqElem {
        FqElem(
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| (a + self.p - b) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, x: &FqElem) -> FqElem {
        self.sub(&self.zero(), x)
    }

    pub fn scale(&self, c: u64, x: &FqElem) -> FqElem {
        FqElem(x.0.iter().map(|a| a * (c % self.p) % self.p).collect())
    }

    pub fn mul(&self, x: &FqElem, y: &FqElem) -> FqElem {
        let m = self.degree;
        let p = self.p;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &a) in x.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for k in 0..m {
                let sub = c * self.modulus[k] % p;
                let idx = top - m + k;
                prod[idx] = (prod[idx] + p - sub) % p;
            }
        }
        prod.truncate(m);
        FqElem(prod)
    }

    pub fn pow(&self, x: &FqElem, mut e: u128) -> FqElem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &FqElem) -> Result<FqElem> {
        if self.is_zero(x) {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(x, self.order() as u128 - 2))
    }

    pub fn frobenius(&self, x: &FqElem) -> FqElem {
        self.pow(x, self.p as u128)
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self, x: &FqElem) -> u64 {
        let mut acc = self.zero();
        let mut y = x.clone();
        for _ in 0..self.degree {
            acc = self.add(&acc, &y);
            y = self.frobenius(&y);
        }
        self.as_prime(&acc)
            .expect("trace lands in the prime field")
    }

    /// Multiplicative order divides `q - 1`; `true` when it equals it.
    pub fn is_primitive(&self, x: &FqElem) -> bool {
        if self.is_zero(x) {
            return false;
        }
        let n = self.order() - 1;
        prime_factors(n)
            .into_iter()
            .all(|r| self.pow(x, (n / r) as u128) != self.one())
    }

    /// The primitive element of smallest encoding.
    pub fn primitive_element(&self) -> FqElem {
        (1..self.order())
            .map(|c| self.decode(c))
            .find(|x| self.is_primitive(x))
            .expect("multiplicative group is cyclic")
    }

    /// Value of `sum coeffs[i] * x^i` with coefficients in `F_p`.
    pub fn eval_prime_poly(&self, coeffs: &[u64], x: &FqElem) -> FqElem {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| {
            self.add(&self.mul(&acc, x), &self.from_int(c as i64))
        })
    }
}

fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    for c in v.iter_mut() {
        *c = code % p;
        code /= p;
    }
    v
}

/// Embedding `F_{p^a} -> F_{p^{ak}}` sending `X` to the root of the small
/// field's modulus with smallest encoding.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: FieldDesc,
    pub large: FieldDesc,
    /// Images of `X^0 .. X^{a-1}`.
    powers: Vec<FqElem>,
}

impl Embedding {
    pub fn new(small: &FieldDesc, large: &FieldDesc) -> Result<Embedding> {
        if small.p != large.p || !large.degree.is_multiple_of(small.degree) {
            return Err(Error::FieldMismatch(format!(
                "F_{}^{} does not embed in F_{}^{}",
                small.p, small.degree, large.p, large.degree
            )));
        }
        let root = if small.degree == 1 {
            large.zero()
        } else if small == large {
            large.generator()
        } else {
            (0..large.order())
                .map(|c| large.decode(c))
                .find(|y| large.is_zero(&large.eval_prime_poly(&small.modulus, y)))
                .ok_or_else(|| Error::FieldMismatch("no root of the small modulus".into()))?
        };
        let mut powers = Vec::with_capacity(small.degree);
        let mut cur = large.one();
        for _ in 0..small.degree {
            powers.push(cur.clone());
            cur = large.mul(&cur, &root);
        }
        Ok(Embedding {
            small: small.clone(),
            large: large.clone(),
            powers,
        })
    }

    pub fn map(&self, x: &FqElem) -> FqElem {
        let mut acc = self.large.zero();
        for (c, pw) in x.0.iter().zip(&self.powers) {
            if *c != 0 {
                acc = self.large.add(&acc, &self.large.scale(*c, pw));
            }
        }
        acc
    }
}

/// Polynomials over a field as little-endian coefficient vectors with no
/// trailing zeros (the zero polynomial is empty).
pub mod poly {
    use super::{FieldDesc, FqElem};

    pub type Poly = Vec<FqElem>;

    pub fn trim(f: &FieldDesc, mut a: Poly) -> Poly {
        while a.last().is_some_and(|c| f.is_zero(c)) {
            a.pop();
        }
        a
    }

    pub fn from_prime(f: &FieldDesc, coeffs: &[u64]) -> Poly {
        trim(f, coeffs.iter().map(|&c| f.from_int(c as i64)).collect())
    }

    pub fn derivative(f: &FieldDesc, a: &Poly) -> Poly {
        trim(
            f,
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.scale(i as u64, c))
                .collect(),
        )
    }

    pub fn sub(f: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let zero = f.zero();
        trim(
            f,
            (0..n)
                .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
                .collect(),
        )
    }

    pub fn mul(f: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        trim(f, out)
    }

    /// Remainder of `a` modulo nonzero `b`.
    pub fn rem(f: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
        let mut r = trim(f, a.clone());
        let lead_inv = f.inv(b.last().expect("nonzero divisor")).expect("unit");
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = f.mul(r.last().unwrap(), &lead_inv);
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, bc));
            }
            r = trim(f, r);
        }
        r
    }

    pub fn gcd(f: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (trim(f, a.clone()), trim(f, b.clone()));
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.last() {
            let inv = f.inv(lead).expect("unit");
            a = a.iter().map(|c| f.mul(c, &inv)).collect();
        }
        a
    }

    pub fn powmod(f: &FieldDesc, base: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut acc = vec![f.one()];
        let mut b = rem(f, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(f, &mul(f, &acc, &b), m);
            }
            b = rem(f, &mul(f, &b, &b), m);
            e >>= 1;
        }
        acc
    }
}

/// Rabin's irreducibility test for a monic polynomial over `F_p`.
pub fn is_irreducible(prime: &FieldDesc, monic: &[u64]) -> bool {
    let m = monic.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let p = prime.p as u128;
    let g = poly::from_prime(prime, monic);
    let x = poly::from_prime(prime, &[0, 1]);
    // x^{p^k} mod g for k = 0..=m
    let mut frob = vec![x.clone()];
    for _ in 0..m {
        let last = frob.last().unwrap();
        frob.push(poly::powmod(prime, last, p, &g));
    }
    if !poly::sub(prime, &frob[m], &x).is_empty() {
        return false;
    }
    for r in prime_factors(m as u64) {
        let k = m / r as usize;
        let h = poly::sub(prime, &frob[k], &x);
        if poly::gcd(prime, &g, &h).len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_examples() {
        assert_eq!(FieldDesc::build(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldDesc::build(5, 2).unwrap().modulus(), &[2, 0, 1]);
        assert_eq!(FieldDesc::build(7, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(FieldDesc::build(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert!(FieldDesc::build(4, 2).is_err());
        assert!(FieldDesc::build(3, 0).is_err());
    }

    #[test]
    fn trace_examples() {
        let f = FieldDesc::build(3, 2).unwrap();
        assert_eq!(f.trace(&f.one()), 2);
        assert_eq!(f.trace(&f.generator()), 0);
        assert_eq!(f.trace(&f.from_int(2)), 1);
    }

    #[test]
    fn field_axioms_and_frobenius() {
        for (p, m) in [(2, 4), (3, 3), (5, 2), (7, 2), (11, 2), (3, 1)] {
            let f = FieldDesc::build(p, m).unwrap();
            let q = f.order();
            let step = (q / 40).max(1);
            let elems: Vec<FqElem> = (0..q).step_by(step as usize).map(|c| f.decode(c)).collect();
            for x in &elems {
                assert_eq!(f.decode(f.encode(x)), *x);
                assert_eq!(f.pow(x, q as u128), *x);
                if !f.is_zero(x) {
                    assert_eq!(f.mul(x, &f.inv(x).unwrap()), f.one());
                }
                for y in &elems {
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    assert_eq!(
                        f.frobenius(&f.add(x, y)),
                        f.add(&f.frobenius(x), &f.frobenius(y))
                    );
                    assert_eq!(
                        f.frobenius(&f.mul(x, y)),
                        f.mul(&f.frobenius(x), &f.frobenius(y))
                    );
                    assert!(f.trace(&f.add(x, y)) == (f.trace(x) + f.trace(y)) % p);
                }
            }
            let g = f.primitive_element();
            assert!(f.is_primitive(&g));
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = FieldDesc::build(3, 2).unwrap();
        let large = FieldDesc::build(3, 4).unwrap();
        let e = Embedding::new(&small, &large).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                let (x, y) = (small.decode(a), small.decode(b));
                assert_eq!(e.map(&small.mul(&x, &y)), large.mul(&e.map(&x), &e.map(&y)));
                assert_eq!(e.map(&small.add(&x, &y)), large.add(&e.map(&x), &e.map(&y)));
            }
        }
        assert!(Embedding::new(&large, &small).is_err());
        let same = Embedding::new(&small, &small).unwrap();
        assert_eq!(same.map(&small.generator()), small.generator());
    }

    #[test]
    fn irreducibility() {
        let f = FieldDesc::prime(2);
        assert!(is_irreducible(&f, &[1, 1, 1]));
        assert!(!is_irreducible(&f, &[1, 0, 1]));
        // seventh cyclotomic polynomial splits into two cubics
        assert!(!is_irreducible(&f, &[1, 1, 1, 1, 1, 1, 1]));
        let g = FieldDesc::prime(5);
        assert!(!is_irreducible(&g, &[1, 0, 1]));
        assert!(is_irreducible(&g, &[2, 0, 1]));
    }
}

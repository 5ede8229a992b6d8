//! Exact elements of `Z[zeta_p]` in the power basis `1, zeta, ..., zeta^{p-2}`
//! and their valuation at the prime above `p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::util::binomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> CycInt {
        CycInt {
            p,
            coeffs: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn from_int(p: u64, c: impl Into<BigInt>) -> CycInt {
        let mut z = CycInt::zero(p);
        z.coeffs[0] = c.into();
        z
    }

    pub fn one(p: u64) -> CycInt {
        CycInt::from_int(p, 1)
    }

    /// `zeta^e`.
    pub fn zeta_pow(p: u64, e: u64) -> CycInt {
        let mut counts = vec![BigInt::zero(); p as usize];
        counts[(e % p) as usize] = BigInt::one();
        CycInt::from_counts(p, &counts)
    }

    /// `sum_t counts[t] zeta^t` for `t` in `0..p`.
    pub fn from_counts(p: u64, counts: &[BigInt]) -> CycInt {
        let n = (p - 1) as usize;
        let top = counts.get(n).cloned().unwrap_or_default();
        CycInt {
            p,
            coeffs: (0..n)
                .map(|i| counts.get(i).cloned().unwrap_or_default() - &top)
                .collect(),
        }
    }

    pub fn from_coeffs(p: u64, coeffs: Vec<BigInt>) -> Result<CycInt> {
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::param(format!(
                "expected {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycInt { p, coeffs })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        let p = self.p as usize;
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[(i + j) % p] += a * b;
                }
            }
        }
        CycInt::from_counts(self.p, &acc)
    }

    /// Exact division by a nonzero integer; `index` names the caller's
    /// coefficient for the error.
    pub fn div_exact(&self, k: u64, index: usize) -> Result<CycInt> {
        let kb = BigInt::from(k);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(&kb);
            if !r.is_zero() {
                return Err(Error::InexactDivision { divisor: k, index });
            }
            coeffs.push(q);
        }
        Ok(CycInt { p: self.p, coeffs })
    }

    /// Coefficients of the same element in powers of `y = zeta - 1`.
    pub fn in_y(&self) -> Vec<BigInt> {
        let n = self.coeffs.len();
        let mut h = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, slot) in h.iter_mut().enumerate().take(i + 1) {
                *slot += c * BigInt::from(binomial(i as u64, j as u64));
            }
        }
        h
    }

    /// `(value, index, p-power)` of the dominant term in the `y` expansion,
    /// or `None` for zero.
    fn dominant(&self) -> Option<(u64, usize, u64)> {
        let p = BigInt::from(self.p);
        let mut best: Option<(u64, usize, u64)> = None;
        for (i, h) in self.in_y().iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let mut k = 0u64;
            let mut x = h.clone();
            while (&x % &p).is_zero() {
                x /= &p;
                k += 1;
            }
            let v = (self.p - 1) * k + i as u64;
            if best.is_none_or(|(b, _, _)| v < b) {
                best = Some((v, i, k));
            }
        }
        best
    }

    /// Valuation normalized by `ord(zeta - 1) = 1`, so `ord(p) = p - 1`;
    /// `None` stands for the valuation of zero.
    pub fn pi_valuation(&self) -> Option<u64> {
        self.dominant().map(|(v, _, _)| v)
    }

    /// Residue of `alpha / pi^v` modulo `pi`, with `pi ≡ zeta - 1 (mod pi^2)`
    /// and `p = -pi^{p-1}`.
    pub fn pi_residue(&self, v: u64) -> Result<u64> {
        let (val, i, k) = self
            .dominant()
            .ok_or_else(|| Error::Domain("residue of zero".into()))?;
        if val != v {
            return Err(Error::Domain(format!(
                "valuation is {val}, not {v}"
            )));
        }
        let p = BigInt::from(self.p);
        let h = &self.in_y()[i];
        let unit = h / p.pow(k as u32);
        let mut r = unit.mod_floor(&p);
        if k % 2 == 1 {
            r = (&p - r).mod_floor(&p);
        }
        Ok(r.to_u64().expect("residue below p"))
    }

    /// Largest absolute coefficient, for reports.
    pub fn max_abs(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

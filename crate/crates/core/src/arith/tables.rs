//! Discrete logarithm, exponential and trace tables for a field small
//! enough to tabulate.

use super::field::{FieldDesc, FqElem};
use crate::error::{Error, Result};

/// Largest field order that gets tables.
pub const TABLE_LIMIT: u64 = 1 << 24;

/// Tables over a primitive element `g`: `exp[e] = g^e` (encoded),
/// `log[code] = e`, `trace[e] = Tr(g^e)`.
#[derive(Clone, Debug)]
pub struct LogTables {
    pub field: FieldDesc,
    pub exp: Vec<u32>,
    pub log: Vec<u32>,
    pub trace: Vec<u16>,
}

pub const NO_LOG: u32 = u32::MAX;

impl LogTables {
    pub fn new(field: &FieldDesc) -> Result<LogTables> {
        let q = field.order();
        if q > TABLE_LIMIT {
            return Err(Error::GuardExceeded(format!("field of order {q} is too large to tabulate")));
        }
        let g = field.primitive_element();
        let n = (q - 1) as usize;
        // trace is F_p-linear, so tabulate it on the power basis
        let basis_trace: Vec<u64> = (0..field.degree())
            .map(|i| {
                let mut v = field.zero();
                v.0[i] = 1;
                field.trace(&v)
            })
            .collect();
        let p = field.p();
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![NO_LOG; q as usize];
        let mut trace = Vec::with_capacity(n);
        let mut cur = field.one();
        for e in 0..n {
            let code = field.encode(&cur) as usize;
            exp.push(code as u32);
            log[code] = e as u32;
            let t = cur
                .0
                .iter()
                .zip(&basis_trace)
                .fold(0, |acc, (c, t)| (acc + c * t) % p);
            trace.push(t as u16);
            cur = field.mul(&cur, &g);
        }
        Ok(LogTables {
            field: field.clone(),
            exp,
            log,
            trace,
        })
    }

    pub fn group_order(&self) -> u32 {
        self.exp.len() as u32
    }

    pub fn log_of(&self, x: &FqElem) -> Option<u32> {
        let l = self.log[self.field.encode(x) as usize];
        (l != NO_LOG).then_some(l)
    }

    pub fn mul_code(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let n = self.group_order() as u64;
        let e = (self.log[x as usize] as u64 + self.log[y as usize] as u64) % n;
        self.exp[e as usize]
    }

    pub fn pow_code(&self, x: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let n = self.group_order() as u64;
        self.exp[(self.log[x as usize] as u64 * k % n) as usize]
    }

    /// Digit-wise addition of encoded elements.
    pub fn add_code(&self, mut x: u32, mut y: u32) -> u32 {
        let p = self.field.p() as u32;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.field.degree() {
            let s = (x % p + y % p) % p;
            out += s * place;
            place = place.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        out
    }

    /// Trace of an encoded element.
    pub fn trace_code(&self, x: u32) -> u64 {
        if x == 0 {
            0
        } else {
            self.trace[self.log[x as usize] as usize] as u64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_agree_with_field_arithmetic() {
        for (p, m) in [(3, 2), (5, 2), (2, 5), (7, 1), (11, 2)] {
            let f = FieldDesc::build(p, m).unwrap();
            let t = LogTables::new(&f).unwrap();
            let q = f.order() as u32;
            for x in (0..q).step_by(3) {
                for y in (0..q).step_by(5) {
                    let (ex, ey) = (f.decode(x as u64), f.decode(y as u64));
                    assert_eq!(t.mul_code(x, y) as u64, f.encode(&f.mul(&ex, &ey)));
                    assert_eq!(t.add_code(x, y) as u64, f.encode(&f.add(&ex, &ey)));
                }
                let ex = f.decode(x as u64);
                assert_eq!(t.trace_code(x), f.trace(&ex));
                assert_eq!(t.pow_code(x, 7) as u64, f.encode(&f.pow(&ex, 7)));
            }
        }
    }
}

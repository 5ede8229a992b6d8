//! Lattice points of the simplex `Simp(n,d)` and the combinatorial data
//! attached to them: Hodge numbers, arithmetic Hodge sums, the conjugates
//! of Frobenius on `Z/(d)`, Frobenius numbers and slopes, vertex sets, and
//! the degree strata `W_j`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::{ceil_div, gcd, is_prime, mod_inverse, rat, Q};

/// A point of `N^n`. Its degree with respect to `Simp(n,d)` is `sum / d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint(pub Vec<u32>);

impl LatticePoint {
    pub fn new(coords: Vec<u32>) -> Self {
        LatticePoint(coords)
    }

    pub fn zero(n: usize) -> Self {
        LatticePoint(vec![0; n])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn degree(&self, d: u64) -> Q {
        rat(self.sum() as i64, d as i64)
    }

    /// `ceil(deg u)`.
    pub fn ceil_degree(&self, d: u64) -> u64 {
        ceil_div(self.sum() as i64, d as i64) as u64
    }

    pub fn is_fundamental(&self, d: u64) -> bool {
        self.0.iter().all(|&c| c > 0 && (c as u64) < d)
    }

    /// `p*self - other`, or an error if a coordinate goes negative.
    pub fn scaled_minus(&self, p: u64, other: &LatticePoint) -> Result<LatticePoint> {
        let mut out = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            let v = p as i64 * a as i64 - b as i64;
            if v < 0 {
                return Err(Error::NegativeCoordinate {
                    u: self.0.clone(),
                    v: other.0.clone(),
                });
            }
            out.push(v as u32);
        }
        Ok(LatticePoint(out))
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| a * k).collect())
    }

    /// `self - other` if it stays in `N^n`.
    pub fn checked_sub(&self, other: &LatticePoint) -> Option<LatticePoint> {
        let mut out = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(b)?);
        }
        Some(LatticePoint(out))
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn validate_nd(n: u64, d: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    if d < 2 {
        return Err(Error::param("d must be at least 2"));
    }
    Ok(())
}

pub fn validate_ndp(n: u64, d: u64, p: u64) -> Result<()> {
    validate_nd(n, d)?;
    if !is_prime(p) {
        return Err(Error::param(format!("p = {p} is not prime")));
    }
    if gcd(p, d) != 1 {
        return Err(Error::NotCoprime { p, d });
    }
    Ok(())
}

/// Points of `{0..=bound}^n` with coordinate sum at most `max_sum`, in
/// lexicographic order.
fn box_points(n: usize, lo: u32, hi: u32, max_sum: u64) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    let mut cur = vec![lo; n];
    fn rec(
        pos: usize,
        lo: u32,
        hi: u32,
        max_sum: u64,
        acc: u64,
        cur: &mut Vec<u32>,
        out: &mut Vec<LatticePoint>,
    ) {
        if pos == cur.len() {
            out.push(LatticePoint(cur.clone()));
            return;
        }
        for c in lo..=hi {
            if acc + c as u64 > max_sum {
                break;
            }
            cur[pos] = c;
            rec(pos + 1, lo, hi, max_sum, acc + c as u64, cur, out);
        }
    }
    rec(0, lo, hi, max_sum, 0, &mut cur, &mut out);
    out
}

/// The fundamental lattice points `(0,d)^n ∩ Z^n`, lexicographically sorted.
pub fn fundamental_points(n: u64, d: u64) -> Result<Vec<LatticePoint>> {
    validate_nd(n, d)?;
    Ok(box_points(n as usize, 1, (d - 1) as u32, u64::MAX))
}

/// All lattice points of `Simp(n,d)` (coordinate sum at most `d`),
/// including the origin, lexicographically sorted.
pub fn simplex_points(n: u64, d: u64) -> Result<Vec<LatticePoint>> {
    validate_nd(n, d)?;
    Ok(box_points(n as usize, 0, d as u32, d))
}

/// `h_0, ..., h_{nd}`: `h_j` counts fundamental points of coordinate sum `j`.
pub fn hodge_numbers(n: u64, d: u64) -> Result<Vec<u64>> {
    let pts = fundamental_points(n, d)?;
    let mut h = vec![0u64; (n * d + 1) as usize];
    for u in &pts {
        h[u.sum() as usize] += 1;
    }
    Ok(h)
}

/// Arithmetic Hodge sums `H_i = sum_j h_{i - jd}`, read as zero for `i < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeSums(Vec<i64>);

impl HodgeSums {
    pub fn get(&self, i: i64) -> i64 {
        if i < 0 {
            0
        } else {
            self.0[i as usize]
        }
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

pub fn hodge_sums(n: u64, d: u64) -> Result<HodgeSums> {
    let h = hodge_numbers(n, d)?;
    Ok(hodge_sums_from(&h, d))
}

fn hodge_sums_from(h: &[u64], d: u64) -> HodgeSums {
    let d = d as usize;
    let mut big = vec![0i64; h.len()];
    for i in 0..h.len() {
        big[i] = h[i] as i64 + if i >= d { big[i - d] } else { 0 };
    }
    HodgeSums(big)
}

/// `sigma_i(l)`: the residue with `i - sigma_i(l) ≡ p^{-1}(i - l) (mod d)`,
/// represented in `{1..d}` when `(p-1)i ≡ 0 (mod d)` and in `{0..d-1}`
/// otherwise.
pub fn frobenius_conjugate(i: u64, l: u64, d: u64, p: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::param("d must be at least 2"));
    }
    let d_i = d as i64;
    let pinv = mod_inverse(p as i64, d_i).ok_or(Error::NotCoprime { p, d })?;
    let i_i = i as i64;
    let sigma = (i_i - pinv * (i_i - l as i64)).rem_euclid(d_i) as u64;
    if sigma == 0 && ((p - 1) as u128 * i as u128).is_multiple_of(d as u128) {
        Ok(d)
    } else {
        Ok(sigma)
    }
}

/// `varpi_{j,eps} = (ceil((p-1)j/d) - eps)/(p-1)`.
pub fn frobenius_slope(d: u64, p: u64, j: u64, eps: u8) -> Q {
    let c = ceil_div(((p - 1) * j) as i64, d as i64);
    rat(c - eps as i64, (p - 1) as i64)
}

/// `varpi_j^{(i)} = (ceil((pj - i)/d) - ceil((j - i)/d))/(p-1)`.
pub fn fitted_slope(d: u64, p: u64, i: u64, j: u64) -> Q {
    let (d, p, i, j) = (d as i64, p as i64, i as i64, j as i64);
    let c = ceil_div(p * j - i, d) - ceil_div(j - i, d);
    rat(c, p - 1)
}

/// Hodge numbers, Hodge sums and their Frobenius refinement for one triple.
#[derive(Clone, Debug)]
pub struct FrobeniusData {
    pub n: u64,
    pub d: u64,
    pub p: u64,
    pub h: Vec<u64>,
    pub hodge_sums: HodgeSums,
    /// `split[j] = [h_{j,0}, h_{j,1}]`.
    pub split: Vec<[u64; 2]>,
    pub hodge_vertices: Vec<u64>,
    pub frobenius_vertices: Vec<u64>,
}

/// One way of writing a Frobenius vertex as `sum_{2j-eps <= 2i-iota} h_{j,eps}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexRep {
    pub k: u64,
    pub i: u64,
    pub iota: u8,
}

impl FrobeniusData {
    pub fn dimension(&self) -> u64 {
        (self.d - 1).pow(self.n as u32)
    }

    pub fn h_split(&self, j: u64, eps: u8) -> u64 {
        self.split[j as usize][eps as usize]
    }

    pub fn slope(&self, j: u64, eps: u8) -> Q {
        frobenius_slope(self.d, self.p, j, eps)
    }

    pub fn is_trivial_index(&self, j: u64) -> bool {
        ((self.p - 1) as u128 * j as u128).is_multiple_of(self.d as u128)
    }

    /// Every `(i, iota)` with the cumulative count it defines, in order of
    /// the key `2i - iota`.
    pub fn vertex_reps(&self) -> Vec<VertexRep> {
        let nd = self.n * self.d;
        let mut out = Vec::new();
        let mut acc = 0u64;
        for i in 0..=nd {
            // key 2i-1 adds (i,1), key 2i adds (i,0)
            acc += self.h_split(i, 1);
            out.push(VertexRep { k: acc, i, iota: 1 });
            acc += self.h_split(i, 0);
            out.push(VertexRep { k: acc, i, iota: 0 });
        }
        out
    }

    /// Violations of the structural identities of the Frobenius data; empty
    /// when everything holds.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let (n, d) = (self.n, self.d);
        let nd = n * d;
        let total: u64 = self.h.iter().sum();
        if total != self.dimension() {
            bad.push(format!("sum h_j = {total} != (d-1)^n"));
        }
        for j in 0..=nd {
            if self.h[j as usize] != self.h[(nd - j) as usize] {
                bad.push(format!("h_{j} != h_{}", nd - j));
            }
        }
        for j in 1..(nd / 2) {
            if self.h[j as usize] > self.h[j as usize + 1] {
                bad.push(format!("h_{j} > h_{}", j + 1));
            }
        }
        for j in 0..=nd {
            let [h0, h1] = self.split[j as usize];
            if h0 + h1 != self.h[j as usize] {
                bad.push(format!("h_{{{j},0}} + h_{{{j},1}} != h_{j}"));
            }
            if self.is_trivial_index(j) {
                if h1 != 0 {
                    bad.push(format!("h_{{{j},1}} != 0 at trivial index"));
                }
            } else {
                for eps in 0..2u8 {
                    if self.h_split(nd - j, 1 - eps) != self.h_split(j, eps) {
                        bad.push(format!("split symmetry fails at j={j}, eps={eps}"));
                    }
                }
            }
        }
        // symmetry and monotonicity of the basic Hodge sums
        let dn = (d as i64 - 1).pow(n as u32);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let target = (dn - sign) / d as i64;
        for i in 0..=nd {
            if i % d == 0 {
                continue;
            }
            let other = nd as i64 - i as i64 - d as i64;
            if other >= 0 && self.hodge_sums.get(i as i64) + self.hodge_sums.get(other) != target {
                bad.push(format!("H_{i} + H_{other} != {target}"));
            }
        }
        let basic: Vec<u64> = (0..=nd).filter(|i| i % d != 0).collect();
        for w in basic.windows(2) {
            if self.hodge_sums.get(w[0] as i64) > self.hodge_sums.get(w[1] as i64) {
                bad.push(format!("H_{} > H_{}", w[0], w[1]));
            }
        }
        for j in 0..=nd {
            if self.is_trivial_index(j) {
                continue;
            }
            let a = frobenius_conjugate(nd - j, 0, d, self.p).unwrap_or(0);
            let b = frobenius_conjugate(j, 0, d, self.p).unwrap_or(0);
            if a + b != d {
                bad.push(format!("sigma_{}(0) != d - sigma_{j}(0)", nd - j));
            }
        }
        bad
    }
}

/// Frobenius numbers `h_{j,0} = H_j - H_{j - sigma_j(0)}` and
/// `h_{j,1} = H_{j - sigma_j(0)} - H_{j-d}`, together with the vertex sets.
pub fn frobenius_numbers(n: u64, d: u64, p: u64) -> Result<FrobeniusData> {
    validate_ndp(n, d, p)?;
    let h = hodge_numbers(n, d)?;
    let big = hodge_sums_from(&h, d);
    let nd = n * d;
    let mut split = Vec::with_capacity(h.len());
    for j in 0..=nd {
        let s = frobenius_conjugate(j, 0, d, p)? as i64;
        let j_i = j as i64;
        let h0 = big.get(j_i) - big.get(j_i - s);
        let h1 = big.get(j_i - s) - big.get(j_i - d as i64);
        if h0 < 0 || h1 < 0 {
            return Err(Error::Domain(format!(
                "negative Frobenius number at j={j} for (n,d,p)=({n},{d},{p})"
            )));
        }
        split.push([h0 as u64, h1 as u64]);
    }
    let mut data = FrobeniusData {
        n,
        d,
        p,
        h,
        hodge_sums: big,
        split,
        hodge_vertices: Vec::new(),
        frobenius_vertices: Vec::new(),
    };
    let mut hodge = Vec::new();
    let mut acc = 0;
    hodge.push(0);
    for &hj in &data.h {
        acc += hj;
        hodge.push(acc);
    }
    hodge.sort_unstable();
    hodge.dedup();
    let mut frob: Vec<u64> = data.vertex_reps().iter().map(|r| r.k).collect();
    frob.push(0);
    frob.sort_unstable();
    frob.dedup();
    data.hodge_vertices = hodge;
    data.frobenius_vertices = frob;
    Ok(data)
}

pub fn vertex_sets(n: u64, d: u64, p: u64) -> Result<(Vec<u64>, Vec<u64>)> {
    let data = frobenius_numbers(n, d, p)?;
    Ok((data.hodge_vertices, data.frobenius_vertices))
}

/// `W_j`: fundamental points of coordinate sum `j`.
pub fn stratum(n: u64, d: u64, j: u64) -> Result<Vec<LatticePoint>> {
    Ok(fundamental_points(n, d)?
        .into_iter()
        .filter(|u| u.sum() == j)
        .collect())
}

/// The split of `W_j` into median points (both coordinates below `d/2`)
/// and marginal points, defined for `n = 2`, even `d`, `d-j <= j <= d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strata {
    pub all: Vec<LatticePoint>,
    /// `W_{j,0}`
    pub marginal: Vec<LatticePoint>,
    /// `W_{j,1}`
    pub median: Vec<LatticePoint>,
}

pub fn strata(d: u64, j: u64) -> Result<Strata> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(Error::Domain(format!("strata split needs even d, got {d}")));
    }
    if j > d || d - j > j {
        return Err(Error::Domain(format!(
            "strata split needs d-j <= j <= d, got d={d}, j={j}"
        )));
    }
    let all = stratum(2, d, j)?;
    let half = (d / 2) as u32;
    let (median, marginal) = all
        .iter()
        .cloned()
        .partition(|u| u.0[0] < half && u.0[1] < half);
    Ok(Strata {
        all,
        marginal,
        median,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[u32]]) -> Vec<LatticePoint> {
        v.iter().map(|c| LatticePoint(c.to_vec())).collect()
    }

    #[test]
    fn fundamental_points_examples() {
        assert_eq!(
            fundamental_points(2, 3).unwrap(),
            pts(&[&[1, 1], &[1, 2], &[2, 1], &[2, 2]])
        );
        assert_eq!(fundamental_points(1, 2).unwrap(), pts(&[&[1]]));
        let p = fundamental_points(2, 4).unwrap();
        assert_eq!(p.len(), 9);
        assert!(p.iter().all(|u| u.0.iter().all(|&c| (1..=3).contains(&c))));
        assert!(fundamental_points(0, 3).is_err());
        assert!(fundamental_points(2, 1).is_err());
    }

    #[test]
    fn hodge_numbers_examples() {
        assert_eq!(hodge_numbers(2, 3).unwrap(), vec![0, 0, 1, 2, 1, 0, 0]);
        assert_eq!(hodge_numbers(1, 4).unwrap(), vec![0, 1, 1, 1, 0]);
        for n in 1..=3 {
            for d in 2..=6 {
                let h = hodge_numbers(n, d).unwrap();
                assert_eq!(h.iter().sum::<u64>(), (d - 1).pow(n as u32));
            }
        }
    }

    #[test]
    fn hodge_sums_examples() {
        let big = hodge_sums(2, 3).unwrap();
        assert_eq!(big.as_slice(), &[0, 0, 1, 2, 1, 1, 2]);
        assert_eq!(big.get(1) + big.get(2), 1);
        assert_eq!(big.get(-3), 0);
        let h = hodge_numbers(3, 5).unwrap();
        let big = hodge_sums(3, 5).unwrap();
        for i in 0..h.len() as i64 {
            assert_eq!(big.get(i) - big.get(i - 5), h[i as usize] as i64);
        }
        assert_eq!(hodge_sums(3, 4).unwrap().get(0), 0);
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(frobenius_conjugate(1, 0, 3, 5).unwrap(), 2);
        assert_eq!(frobenius_conjugate(5, 0, 4, 11).unwrap(), 2);
        // (p-1)j ≡ 0 forces sigma_j(0) = d
        assert_eq!(frobenius_conjugate(3, 0, 3, 5).unwrap(), 3);
        assert_eq!(frobenius_conjugate(2, 0, 4, 7).unwrap(), 4);
        assert!(frobenius_conjugate(1, 0, 4, 2).is_err());
    }

    #[test]
    fn conjugate_is_a_bijection() {
        for d in 2..=50u64 {
            for p in (2..=50u64).filter(|&p| is_prime(p) && gcd(p, d) == 1) {
                for i in 0..2 * d {
                    let mut img: Vec<u64> = (0..d)
                        .map(|l| frobenius_conjugate(i, l, d, p).unwrap())
                        .collect();
                    img.sort_unstable();
                    let expect: Vec<u64> = if ((p - 1) * i) % d == 0 {
                        (1..=d).collect()
                    } else {
                        (0..d).collect()
                    };
                    assert_eq!(img, expect, "d={d} p={p} i={i}");
                }
            }
        }
    }

    #[test]
    fn frobenius_numbers_examples() {
        let f = frobenius_numbers(2, 3, 5).unwrap();
        let expect = [[0, 0], [0, 0], [1, 0], [2, 0], [0, 1], [0, 0], [0, 0]];
        assert_eq!(f.split, expect.to_vec());
        let f = frobenius_numbers(2, 4, 11).unwrap();
        assert_eq!(f.h_split(5, 1), 2);
        assert_eq!(f.h_split(5, 0), 0);
        assert_eq!(f.h_split(3, 0), 2);
        let f = frobenius_numbers(2, 3, 7).unwrap();
        assert!(f.split.iter().all(|s| s[1] == 0));
    }

    #[test]
    fn slope_examples() {
        assert_eq!(frobenius_slope(3, 5, 2, 0), rat(3, 4));
        assert_eq!(frobenius_slope(4, 11, 5, 1), rat(6, 5));
        assert_eq!(frobenius_slope(3, 7, 2, 0), rat(2, 3));
        assert_eq!(fitted_slope(3, 5, 2, 2), rat(3, 4));
    }

    #[test]
    fn vertex_set_examples() {
        let (hodge, frob) = vertex_sets(2, 3, 5).unwrap();
        assert_eq!(frob, vec![0, 1, 3, 4]);
        assert_eq!(hodge, vec![0, 1, 3, 4]);
        let (hodge, frob) = vertex_sets(2, 4, 11).unwrap();
        assert_eq!(frob, vec![0, 1, 3, 6, 8, 9]);
        assert!(hodge.iter().all(|k| frob.contains(k)));
        let (hodge, frob) = vertex_sets(2, 3, 7).unwrap();
        assert_eq!(hodge, frob);
    }

    #[test]
    fn invariants_hold_on_small_grid() {
        for n in 1..=3 {
            for d in 2..=6 {
                for p in (2..60).filter(|&p| is_prime(p) && gcd(p, d) == 1) {
                    let f = frobenius_numbers(n, d, p).unwrap();
                    let bad = f.invariant_violations();
                    assert!(bad.is_empty(), "({n},{d},{p}): {bad:?}");
                }
            }
        }
    }

    #[test]
    fn hodge_recursion_in_n() {
        for d in 2..=6u64 {
            for n in 2..=3u64 {
                let hn = hodge_numbers(n, d).unwrap();
                let hm = hodge_numbers(n - 1, d).unwrap();
                let at = |v: &Vec<u64>, j: i64| -> i64 {
                    if j < 0 || j as usize >= v.len() {
                        0
                    } else {
                        v[j as usize] as i64
                    }
                };
                for j in 0..=(n * d) as i64 {
                    assert_eq!(
                        at(&hn, j) - at(&hn, j - 1),
                        at(&hm, j - 1) - at(&hm, j - d as i64),
                        "n={n} d={d} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn strata_examples() {
        let s = strata(4, 3).unwrap();
        assert_eq!(s.all, pts(&[&[1, 2], &[2, 1]]));
        assert!(s.median.is_empty());
        let s = strata(6, 5).unwrap();
        assert_eq!(s.all.len(), 4);
        assert!(s.median.is_empty());
        let s = strata(6, 4).unwrap();
        assert_eq!(s.median, pts(&[&[2, 2]]));
        assert_eq!(strata(4, 2).unwrap().median, pts(&[&[1, 1]]));
        assert!(strata(2, 2).unwrap().median.is_empty());
        assert!(strata(5, 3).is_err());
        assert!(strata(6, 2).is_err());
        assert!(strata(4, 5).is_err());
    }
}

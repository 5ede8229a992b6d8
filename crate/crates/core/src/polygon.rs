//! Exact polygons starting at the origin, stored as ascending slope
//! segments, with the Hodge, Frobenius and fitted Frobenius polygons.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{
    fitted_slope, frobenius_conjugate, frobenius_numbers, hodge_numbers, validate_nd,
};
use crate::util::{int, rat, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Q,
    pub mult: u64,
}

/// Graph of a convex piecewise-linear function on `[0, length]` through the
/// origin. Slopes are strictly increasing and multiplicities positive, so
/// equal polygons are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polygon {
    segments: Vec<Segment>,
}

/// Result of a pointwise comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    /// First argument is `>=` everywhere and `>` somewhere.
    Above,
    Below,
    Incomparable,
}

impl Comparison {
    pub fn is_ge(self) -> bool {
        matches!(self, Comparison::Equal | Comparison::Above)
    }
}

impl Polygon {
    pub fn from_slopes<I>(slopes: I) -> Polygon
    where
        I: IntoIterator<Item = (Q, u64)>,
    {
        let mut raw: Vec<(Q, u64)> = slopes.into_iter().filter(|(_, m)| *m > 0).collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut segments: Vec<Segment> = Vec::new();
        for (slope, mult) in raw {
            match segments.last_mut() {
                Some(last) if last.slope == slope => last.mult += mult,
                _ => segments.push(Segment { slope, mult }),
            }
        }
        Polygon { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn length(&self) -> u64 {
        self.segments.iter().map(|s| s.mult).sum()
    }

    pub fn endpoint(&self) -> (u64, Q) {
        (self.length(), self.eval_int(self.length()))
    }

    /// Value at an integer abscissa; panics past the end.
    pub fn eval_int(&self, k: u64) -> Q {
        self.eval(&Q::from_integer(BigInt::from(k)))
            .expect("abscissa within polygon")
    }

    pub fn eval(&self, x: &Q) -> Result<Q> {
        let len = int(self.length() as i64);
        if x.is_negative() || *x > len {
            return Err(Error::OutOfRange {
                what: "x",
                value: x.to_string(),
                range: format!("[0, {}]", self.length()),
            });
        }
        let mut left = x.clone();
        let mut acc = Q::zero();
        for seg in &self.segments {
            let m = int(seg.mult as i64);
            if left <= m {
                return Ok(acc + &seg.slope * left);
            }
            acc += &seg.slope * &m;
            left -= m;
        }
        Ok(acc)
    }

    /// Vertices `(x, y)` including both ends.
    pub fn vertices(&self) -> Vec<(u64, Q)> {
        let mut out = vec![(0, Q::zero())];
        let (mut x, mut y) = (0u64, Q::zero());
        for seg in &self.segments {
            x += seg.mult;
            y += &seg.slope * int(seg.mult as i64);
            out.push((x, y.clone()));
        }
        out
    }

    pub fn vertex_abscissas(&self) -> Vec<u64> {
        self.vertices().into_iter().map(|(x, _)| x).collect()
    }

    /// Pointwise comparison; vertices are integral, so integer abscissas
    /// suffice.
    pub fn compare(&self, other: &Polygon) -> Result<Comparison> {
        if self.length() != other.length() {
            return Err(Error::LengthMismatch(self.length(), other.length()));
        }
        let (mut above, mut below) = (false, false);
        for k in 0..=self.length() {
            match self.eval_int(k).cmp(&other.eval_int(k)) {
                Ordering::Greater => above = true,
                Ordering::Less => below = true,
                Ordering::Equal => {}
            }
        }
        Ok(match (above, below) {
            (false, false) => Comparison::Equal,
            (true, false) => Comparison::Above,
            (false, true) => Comparison::Below,
            (true, true) => Comparison::Incomparable,
        })
    }

    /// `true` when the multiplicity of slope `s` equals that of `n - s`.
    pub fn is_symmetric(&self, n: u64) -> bool {
        let n = int(n as i64);
        self.segments.iter().all(|s| {
            let mirror = &n - &s.slope;
            self.segments
                .iter()
                .any(|t| t.slope == mirror && t.mult == s.mult)
        })
    }

    /// Largest value of `self(k) - other(k)` over integer `k`.
    pub fn max_gap(&self, other: &Polygon) -> Result<Q> {
        if self.length() != other.length() {
            return Err(Error::LengthMismatch(self.length(), other.length()));
        }
        Ok((0..=self.length())
            .map(|k| self.eval_int(k) - other.eval_int(k))
            .max()
            .unwrap_or_else(Q::zero))
    }

    /// Pointwise minimum of polygons of equal length, convexified.
    pub fn pointwise_min(polys: &[Polygon]) -> Result<Polygon> {
        let first = polys
            .first()
            .ok_or_else(|| Error::param("no polygons to minimize"))?;
        let len = first.length();
        let mut pts: Vec<(u64, Option<Q>)> = Vec::new();
        for k in 0..=len {
            let mut best: Option<Q> = None;
            for p in polys {
                if p.length() != len {
                    return Err(Error::LengthMismatch(len, p.length()));
                }
                let v = p.eval_int(k);
                best = Some(match best {
                    Some(b) if b <= v => b,
                    _ => v,
                });
            }
            pts.push((k, best));
        }
        lower_hull(&pts)
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}x{}", s.slope, s.mult)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SegmentRepr {
    slope: [i64; 2],
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    segments: Vec<SegmentRepr>,
}

/// Numerator and denominator as machine integers.
pub fn rational_pair(q: &Q) -> Option<[i64; 2]> {
    Some([q.numer().to_i64()?, q.denom().to_i64()?])
}

pub fn pair_rational(pair: [i64; 2]) -> Option<Q> {
    if pair[1] == 0 {
        None
    } else {
        Some(rat(pair[0], pair[1]))
    }
}

impl Serialize for Polygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut segments = Vec::with_capacity(self.segments.len());
        for seg in &self.segments {
            let slope = rational_pair(&seg.slope)
                .ok_or_else(|| serde::ser::Error::custom("slope does not fit in i64"))?;
            segments.push(SegmentRepr {
                slope,
                mult: seg.mult,
            });
        }
        PolygonRepr { segments }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolygonRepr::deserialize(d)?;
        let mut slopes = Vec::with_capacity(repr.segments.len());
        for seg in repr.segments {
            let q = pair_rational(seg.slope)
                .ok_or_else(|| serde::de::Error::custom("zero denominator"))?;
            slopes.push((q, seg.mult));
        }
        let poly = Polygon::from_slopes(slopes);
        Ok(poly)
    }
}

/// Lower convex hull of points `(x, y)`; `None` ordinates are infinite and
/// skipped. The hull starts at `(0, 0)` and ends at the largest abscissa,
/// which must have a finite ordinate.
pub fn lower_hull(points: &[(u64, Option<Q>)]) -> Result<Polygon> {
    let mut pts: Vec<(u64, Q)> = points
        .iter()
        .filter_map(|(x, y)| y.as_ref().map(|y| (*x, y.clone())))
        .collect();
    pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    pts.dedup_by(|b, a| a.0 == b.0);
    let max_x = points.iter().map(|(x, _)| *x).max().unwrap_or(0);
    match pts.first() {
        Some((0, y)) if y.is_zero() => {}
        _ => return Err(Error::Domain("lower hull needs the point (0, 0)".into())),
    }
    if pts.last().map(|p| p.0) != Some(max_x) {
        return Err(Error::Domain(
            "lower hull needs a finite ordinate at the largest abscissa".into(),
        ));
    }
    let mut hull: Vec<(u64, Q)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point if it is on or above the chord
            let lhs = (y2 - y1) * int((p.0 - x1) as i64);
            let rhs = (&p.1 - y1) * int((x2 - x1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let segs = hull.windows(2).map(|w| {
        let dx = w[1].0 - w[0].0;
        ((&w[1].1 - &w[0].1) / int(dx as i64), dx)
    });
    Ok(Polygon::from_slopes(segs))
}

/// `HP(n,d)`: slope `j/d` with multiplicity `h_j`.
pub fn hodge_polygon(n: u64, d: u64) -> Result<Polygon> {
    validate_nd(n, d)?;
    let h = hodge_numbers(n, d)?;
    Ok(Polygon::from_slopes(
        h.iter()
            .enumerate()
            .map(|(j, &m)| (rat(j as i64, d as i64), m)),
    ))
}

/// `FP(n,d;p)`: slope `varpi_{j,eps}` with multiplicity `h_{j,eps}`.
pub fn frobenius_polygon(n: u64, d: u64, p: u64) -> Result<Polygon> {
    let data = frobenius_numbers(n, d, p)?;
    if p <= d + 1 {
        return Err(Error::param(format!(
            "Frobenius polygon needs p > d + 1, got p = {p}, d = {d}"
        )));
    }
    let mut slopes = Vec::new();
    for j in 0..=n * d {
        for eps in 0..2u8 {
            slopes.push((data.slope(j, eps), data.h_split(j, eps)));
        }
    }
    Ok(Polygon::from_slopes(slopes))
}

/// `FP^{(i)}(n,d;p)`: slope `varpi_j^{(i)}` with multiplicity `h_j`,
/// `j = 0..=i`.
pub fn fitted_frobenius_polygon(n: u64, d: u64, p: u64, i: u64) -> Result<Polygon> {
    let data = frobenius_numbers(n, d, p)?;
    if i > n * d {
        return Err(Error::OutOfRange {
            what: "i",
            value: i.to_string(),
            range: format!("[0, {}]", n * d),
        });
    }
    Ok(Polygon::from_slopes(
        (0..=i).map(|j| (fitted_slope(d, p, i, j), data.h[j as usize])),
    ))
}

/// `sum_l (d-1-l)/((p-1)d) (H_{i-l} - H_{i-sigma_i(l)})` over `l` in
/// `start..d` with `l ≢ i` and, when `skip_twist`, `l ≢ (1-p)i (mod d)`.
/// Here `sigma_i(l)` is always taken in `{0..d-1}`.
pub fn fitted_gap_formula(
    n: u64,
    d: u64,
    p: u64,
    i: u64,
    start: u64,
    skip_twist: bool,
) -> Result<Q> {
    let data = frobenius_numbers(n, d, p)?;
    let dd = d as i64;
    let ii = i as i64;
    let twist = ((1 - p as i64) * ii).rem_euclid(dd);
    let mut acc = Q::zero();
    for l in start..d {
        let li = l as i64;
        if li == ii.rem_euclid(dd) || (skip_twist && li == twist) {
            continue;
        }
        let s = (frobenius_conjugate(i, l, d, p)? % d) as i64;
        let diff = data.hodge_sums.get(ii - li) - data.hodge_sums.get(ii - s);
        acc += rat((dd - 1 - li) * diff, (p as i64 - 1) * dd);
    }
    Ok(acc)
}

/// `FP^{(i)}(k) - HP(k)` in closed form at `k = sum_{j<i} h_j + h_{i,1}`.
///
/// This is the sum over `l = 1..d-1`, `l ≢ i`, `l ≢ (1-p)i` plus the
/// correction `(d-1-r)/((p-1)d) (H_{i-r} - H_{i-sigma_i(0)})` with
/// `r = (1-p)i mod d`. Without the correction the formula is wrong in
/// general, e.g. `(n,d,p) = (1,5,7)`, `i = 2`.
pub fn split_vertex_gap(n: u64, d: u64, p: u64, i: u64) -> Result<Q> {
    let data = frobenius_numbers(n, d, p)?;
    let dd = d as i64;
    let ii = i as i64;
    let r = ((1 - p as i64) * ii).rem_euclid(dd);
    let s0 = (frobenius_conjugate(i, 0, d, p)? % d) as i64;
    let diff = data.hodge_sums.get(ii - r) - data.hodge_sums.get(ii - s0);
    let correction = rat((dd - 1 - r) * diff, (p as i64 - 1) * dd);
    Ok(fitted_gap_formula(n, d, p, i, 1, true)? + correction)
}

/// Outcome of checking the fitted-polygon identities for one triple.
#[derive(Clone, Debug, Default)]
pub struct FittedReport {
    pub checks: usize,
    pub failures: Vec<String>,
    /// Split vertices where the uncorrected formula disagrees.
    pub uncorrected_mismatches: Vec<u64>,
    pub split_vertices: usize,
}

/// Checks, for one triple, that `FP` agrees with the fitted polygon at
/// every Frobenius vertex and that both difference formulas hold.
pub fn check_fitted_identities(n: u64, d: u64, p: u64) -> Result<FittedReport> {
    let data = frobenius_numbers(n, d, p)?;
    let fp = frobenius_polygon(n, d, p)?;
    let hp = hodge_polygon(n, d)?;
    let mut rep = FittedReport::default();
    for r in data.vertex_reps() {
        let fitted = fitted_frobenius_polygon(n, d, p, r.i)?;
        if r.k > fitted.length() {
            rep.failures
                .push(format!("k={} beyond fitted length at i={}", r.k, r.i));
            continue;
        }
        rep.checks += 1;
        if fp.eval_int(r.k) != fitted.eval_int(r.k) {
            rep.failures.push(format!(
                "FP({k}) != FP^({i})({k}) with iota={io}",
                k = r.k,
                i = r.i,
                io = r.iota
            ));
        }
    }
    let mut acc = 0u64;
    for i in 0..=n * d {
        let before = acc;
        acc += data.h[i as usize];
        let fitted = fitted_frobenius_polygon(n, d, p, i)?;
        rep.checks += 1;
        let lhs = fitted.eval_int(acc) - hp.eval_int(acc);
        let rhs = fitted_gap_formula(n, d, p, i, 0, false)?;
        if lhs != rhs {
            rep.failures
                .push(format!("Hodge-vertex formula fails at i={i}: {lhs} vs {rhs}"));
        }
        let h1 = data.h_split(i, 1);
        if h1 != 0 {
            let k = before + h1;
            rep.checks += 1;
            rep.split_vertices += 1;
            let lhs = fitted.eval_int(k) - hp.eval_int(k);
            let rhs = split_vertex_gap(n, d, p, i)?;
            if lhs != rhs {
                rep.failures
                    .push(format!("split-vertex formula fails at i={i}: {lhs} vs {rhs}"));
            }
            if lhs != fitted_gap_formula(n, d, p, i, 1, true)? {
                rep.uncorrected_mismatches.push(i);
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::{gcd, is_prime};

    fn poly(v: &[(i64, i64, u64)]) -> Polygon {
        Polygon::from_slopes(v.iter().map(|&(a, b, m)| (rat(a, b), m)))
    }

    #[test]
    fn canonical_form() {
        let p = poly(&[(1, 1, 2), (2, 3, 1), (4, 3, 1)]);
        assert_eq!(p, poly(&[(2, 3, 1), (1, 1, 2), (4, 3, 1)]));
        assert_eq!(p.segments()[0].slope, rat(2, 3));
        assert_eq!(Polygon::from_slopes(vec![]).length(), 0);
        assert_eq!(poly(&[(1, 2, 1), (1, 2, 1)]), poly(&[(1, 2, 2)]));
        assert_eq!(poly(&[(1, 2, 0), (1, 1, 1)]).segments().len(), 1);
    }

    #[test]
    fn evaluation() {
        let hp = hodge_polygon(2, 3).unwrap();
        assert_eq!(hp.eval_int(0), Q::zero());
        assert_eq!(hp.eval_int(1), rat(2, 3));
        assert_eq!(hp.eval_int(2), rat(5, 3));
        assert_eq!(hp.eval_int(4), int(4));
        assert_eq!(hp.eval(&rat(1, 2)).unwrap(), rat(1, 3));
        assert!(hp.eval(&int(5)).is_err());
        assert!(hp.eval(&rat(-1, 2)).is_err());
    }

    #[test]
    fn comparisons() {
        let hp = hodge_polygon(2, 3).unwrap();
        let fp = frobenius_polygon(2, 3, 5).unwrap();
        assert_eq!(fp.compare(&hp).unwrap(), Comparison::Above);
        assert_eq!(hp.compare(&fp).unwrap(), Comparison::Below);
        assert_eq!(hp.compare(&hp).unwrap(), Comparison::Equal);
        assert_eq!(frobenius_polygon(2, 3, 7).unwrap(), hp);
        let a = poly(&[(0, 1, 1), (2, 1, 1)]);
        let b = poly(&[(1, 1, 2)]);
        assert_eq!(a.compare(&b).unwrap(), Comparison::Below);
        let c = poly(&[(1, 2, 1), (3, 2, 2)]);
        let e = poly(&[(1, 1, 1), (1, 1, 1), (3, 2, 1)]);
        assert_eq!(c.compare(&e).unwrap(), Comparison::Below);
        let x = poly(&[(0, 1, 1), (3, 1, 1), (3, 1, 1)]);
        let y = poly(&[(1, 1, 2), (4, 1, 1)]);
        assert_eq!(x.compare(&y).unwrap(), Comparison::Incomparable);
        assert!(hp.compare(&b).is_err());
    }

    #[test]
    fn named_polygons() {
        assert_eq!(
            hodge_polygon(2, 3).unwrap(),
            poly(&[(2, 3, 1), (1, 1, 2), (4, 3, 1)])
        );
        assert_eq!(hodge_polygon(1, 2).unwrap(), poly(&[(1, 2, 1)]));
        assert_eq!(
            frobenius_polygon(2, 3, 5).unwrap(),
            poly(&[(3, 4, 1), (1, 1, 2), (5, 4, 1)])
        );
        assert_eq!(
            frobenius_polygon(2, 4, 11).unwrap(),
            poly(&[(1, 2, 1), (4, 5, 2), (1, 1, 3), (6, 5, 2), (3, 2, 1)])
        );
        assert!(frobenius_polygon(2, 3, 2).is_err());
        assert!(frobenius_polygon(1, 4, 5).is_err());
        let f = fitted_frobenius_polygon(2, 3, 5, 2).unwrap();
        assert_eq!(f, poly(&[(3, 4, 1)]));
        assert_eq!(fitted_frobenius_polygon(2, 3, 5, 0).unwrap().length(), 0);
        assert!(fitted_frobenius_polygon(2, 3, 5, 7).is_err());
    }

    #[test]
    fn endpoints_and_symmetry() {
        for n in 1..=3u64 {
            for d in 2..=6u64 {
                let hp = hodge_polygon(n, d).unwrap();
                let dim = (d - 1).pow(n as u32);
                assert_eq!(hp.endpoint(), (dim, rat((dim * n) as i64, 2)));
                assert!(hp.is_symmetric(n));
                for p in (d + 2..60).filter(|&p| is_prime(p) && gcd(p, d) == 1) {
                    let fp = frobenius_polygon(n, d, p).unwrap();
                    assert_eq!(fp.endpoint(), hp.endpoint());
                    assert!(fp.is_symmetric(n), "({n},{d},{p})");
                    let c = fp.compare(&hp).unwrap();
                    assert!(c.is_ge());
                    assert_eq!(c == Comparison::Equal, p % d == 1, "({n},{d},{p})");
                }
            }
        }
    }

    #[test]
    fn fitted_examples() {
        let fp = frobenius_polygon(2, 3, 5).unwrap();
        let f3 = fitted_frobenius_polygon(2, 3, 5, 3).unwrap();
        assert_eq!(fp.eval_int(3), rat(11, 4));
        assert_eq!(f3.eval_int(3), rat(11, 4));
        assert_eq!(fitted_gap_formula(2, 3, 5, 2, 0, false).unwrap(), rat(1, 12));
        assert_eq!(fitted_gap_formula(2, 3, 5, 4, 1, true).unwrap(), Q::zero());
        assert_eq!(split_vertex_gap(2, 3, 5, 4).unwrap(), Q::zero());
        assert_eq!(split_vertex_gap(1, 5, 7, 2).unwrap(), rat(1, 15));
        assert_eq!(fitted_gap_formula(1, 5, 7, 2, 1, true).unwrap(), rat(1, 10));
        // sigma_i(0) = d would give 1/8 here
        assert_eq!(fitted_gap_formula(1, 2, 5, 1, 0, false).unwrap(), Q::zero());
    }

    #[test]
    fn fitted_identities_small_grid() {
        for n in 1..=3u64 {
            for d in 2..=6u64 {
                for p in (d + 2..60).filter(|&p| is_prime(p) && gcd(p, d) == 1) {
                    let rep = check_fitted_identities(n, d, p).unwrap();
                    assert!(rep.failures.is_empty(), "({n},{d},{p}): {:?}", rep.failures);
                }
            }
        }
    }

    #[test]
    fn hull_examples() {
        let h = lower_hull(&[(0, Some(int(0))), (1, Some(rat(1, 2)))]).unwrap();
        assert_eq!(h, poly(&[(1, 2, 1)]));
        let h = lower_hull(&[(0, Some(int(0))), (1, Some(int(2))), (2, Some(int(2)))]).unwrap();
        assert_eq!(h, poly(&[(1, 1, 2)]));
        let h = lower_hull(&[(0, Some(int(0))), (1, None), (2, Some(int(2)))]).unwrap();
        assert_eq!(h, poly(&[(1, 1, 2)]));
        assert!(lower_hull(&[(1, Some(int(1)))]).is_err());
        assert!(lower_hull(&[(0, Some(int(0))), (1, None)]).is_err());
        let h = lower_hull(&[
            (0, Some(int(0))),
            (1, Some(int(0))),
            (2, Some(int(3))),
            (3, Some(int(3))),
        ])
        .unwrap();
        assert_eq!(h, poly(&[(0, 1, 1), (3, 2, 2)]));
    }

    #[test]
    fn json_round_trip() {
        let fp = frobenius_polygon(2, 4, 11).unwrap();
        let s = serde_json::to_string(&fp).unwrap();
        assert_eq!(
            s,
            r#"{"segments":[{"slope":[1,2],"mult":1},{"slope":[4,5],"mult":2},{"slope":[1,1],"mult":3},{"slope":[6,5],"mult":2},{"slope":[3,2],"mult":1}]}"#
        );
        let back: Polygon = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fp);
    }

    #[test]
    fn gap_shrinks_with_p() {
        for (n, d) in [(1u64, 3u64), (2, 3), (2, 4), (3, 3)] {
            for r in 2..d {
                if gcd(r, d) != 1 {
                    continue;
                }
                let gaps: Vec<Q> = (d + 2..200)
                    .filter(|&p| is_prime(p) && p % d == r)
                    .map(|p| {
                        frobenius_polygon(n, d, p)
                            .unwrap()
                            .max_gap(&hodge_polygon(n, d).unwrap())
                            .unwrap()
                    })
                    .collect();
                for w in gaps.windows(2) {
                    assert!(w[1] <= w[0], "({n},{d}) r={r}");
                }
            }
        }
    }
}

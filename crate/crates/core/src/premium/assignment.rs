//! Square min-cost assignment: a shortest-augmenting-path solver with dual
//! potentials, a permutation brute force, and exact enumeration of every
//! optimal assignment.

use crate::util::for_each_permutation;

/// Optimal assignment of a square cost matrix. `assignment[i]` is the column
/// of row `i`; `row_pot`/`col_pot` are dual potentials with
/// `cost[i][j] - row_pot[i] - col_pot[j] >= 0`, tight on the assignment.
#[derive(Clone, Debug)]
pub struct Solution {
    pub cost: i64,
    pub assignment: Vec<usize>,
    pub row_pot: Vec<i64>,
    pub col_pot: Vec<i64>,
}

pub fn solve(cost: &[Vec<i64>]) -> Solution {
    let n = cost.len();
    if n == 0 {
        return Solution {
            cost: 0,
            assignment: Vec::new(),
            row_pot: Vec::new(),
            col_pot: Vec::new(),
        };
    }
    const INF: i64 = i64::MAX / 4;
    // 1-based arrays; column 0 is a virtual source
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let total = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .sum();
    Solution {
        cost: total,
        assignment,
        row_pot: u[1..].to_vec(),
        col_pot: v[1..].to_vec(),
    }
}

/// Every optimal assignment, in lexicographic order. An assignment is
/// optimal exactly when it only uses edges of zero reduced cost.
pub fn all_optimal(cost: &[Vec<i64>]) -> (i64, Vec<Vec<usize>>) {
    let sol = solve(cost);
    let n = cost.len();
    let tight: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| cost[i][j] - sol.row_pot[i] - sol.col_pot[j] == 0)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        tight: &[Vec<usize>],
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = cur.len();
        if i == tight.len() {
            out.push(cur.clone());
            return;
        }
        for &j in &tight[i] {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(tight, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(&tight, &mut cur, &mut used, &mut out);
    (sol.cost, out)
}

/// Minimum and all minimizers by enumerating every permutation.
pub fn brute_force(cost: &[Vec<i64>]) -> (i64, Vec<Vec<usize>>) {
    let n = cost.len();
    let mut best = i64::MAX;
    let mut arg: Vec<Vec<usize>> = Vec::new();
    for_each_permutation(n, |perm| {
        let c: i64 = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        if c < best {
            best = c;
            arg.clear();
        }
        if c == best {
            arg.push(perm.to_vec());
        }
    });
    arg.sort();
    (best, arg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_fixed_instance() {
        let c = vec![vec![4, 1, 3], vec![2, 0, 5], vec![3, 2, 2]];
        let s = solve(&c);
        assert_eq!(s.cost, 5);
        assert_eq!(brute_force(&c).0, 5);
        let (m, all) = all_optimal(&c);
        assert_eq!(m, 5);
        assert_eq!(all, brute_force(&c).1);
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(solve(&[]).cost, 0);
        assert_eq!(all_optimal(&[]), (0, vec![vec![]]));
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=7 {
            for _ in 0..60 {
                // narrow value range so ties are common
                let hi = rng.gen_range(1..4);
                let c: Vec<Vec<i64>> = (0..n)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..=hi)).collect())
                    .collect();
                let (bm, ba) = brute_force(&c);
                let (am, aa) = all_optimal(&c);
                assert_eq!(bm, am);
                assert_eq!(ba, aa);
                let s = solve(&c);
                for i in 0..n {
                    for j in 0..n {
                        assert!(c[i][j] - s.row_pot[i] - s.col_pot[j] >= 0);
                    }
                }
            }
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Seeded generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urysohn::isometry::Permutation;
use urysohn::toeplitz::ToeplitzMetric;
use urysohn::{FiniteMetricSpace, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

/// Shortest-path closure of random weights `k/den`, `1 <= k <= max_k`.
/// Every distance of the result has denominator dividing `den`.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize, den: i64, max_k: i64) -> FiniteMetricSpace {
    let mut d = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..i {
            let w = q(rng.gen_range(1..=max_k), den);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if i != j && via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::from_rows(d).expect("closure is a metric")
}

/// The random suite: `count` spaces with at most `max_n` points and
/// denominators at most 4. Every third space uses distances in {1, 2} so
/// that symmetric spaces are well represented.
pub fn suite(seed: u64, count: usize, max_n: usize) -> Vec<FiniteMetricSpace> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(1..=max_n);
            if i % 3 == 0 {
                random_space(&mut r, n, 1, 2)
            } else {
                let den = r.gen_range(1..=4);
                random_space(&mut r, n, den, 3 * den)
            }
        })
        .collect()
}

/// Definition of admissibility, written out pair by pair.
pub fn admissible_oracle(space: &FiniteMetricSpace, a: &[Rational]) -> bool {
    a.len() == space.len()
        && a.iter().all(Rational::is_positive)
        && (0..a.len()).all(|i| {
            (0..a.len()).all(|j| a[i].abs_diff(&a[j]) <= *space.dist(i, j) && *space.dist(i, j) <= &a[i] + &a[j])
        })
}

/// Metric axioms, written out directly.
pub fn metric_oracle(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| {
            m[i][i].is_zero()
                && (0..n).all(|j| {
                    m[i][j] == m[j][i]
                        && (i == j || m[i][j].is_positive())
                        && (0..n).all(|k| m[i][k] <= &m[i][j] + &m[j][k])
                })
        })
}

/// All `k/den` with `0 < k/den <= bound`.
pub fn grid(den: i64, bound: i64) -> Vec<Rational> {
    let mut v: Vec<Rational> = (1..=den).flat_map(|d| (1..=bound * d).map(move |k| q(k, d))).collect();
    v.sort();
    v.dedup();
    v.retain(|x| x.denominator_divides(den as u64));
    v
}

/// Every vector over `grid` of length `n`, in lexicographic order.
pub fn all_vectors(grid: &[Rational], n: usize) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| {
                grid.iter().map(move |g| {
                    let mut p = p.clone();
                    p.push(g.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Every permutation of `0..n` preserving all distances.
pub fn brute_isometries(space: &FiniteMetricSpace) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    let n = space.len();
    (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|i| (0..n).all(|j| space.dist(i, j) == space.dist(p[i], p[j]))))
        .collect()
}

/// Number of distance-preserving injections between subsets.
pub fn brute_piso_count(space: &FiniteMetricSpace) -> usize {
    use itertools::Itertools;
    let n = space.len();
    let mut count = 0;
    for k in 0..=n {
        for dom in (0..n).combinations(k) {
            for img in (0..n).permutations(k) {
                if (0..k).all(|i| (0..i).all(|j| space.dist(dom[i], dom[j]) == space.dist(img[i], img[j]))) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// A random Toeplitz metric on `points` points with values `k/den`.
pub fn random_toeplitz(rng: &mut ChaCha8Rng, points: usize, den: i64, max_k: i64) -> ToeplitzMetric {
    let mut phi: Vec<Rational> = Vec::new();
    while phi.len() + 1 < points {
        let base = ToeplitzMetric::new(phi.clone()).expect("valid prefix");
        let options: Vec<Rational> = (1..=max_k).map(|k| q(k, den)).filter(|v| base.can_append(v)).collect();
        phi.push(options.choose(rng).expect("the smallest feasible value is always a grid point").clone());
    }
    ToeplitzMetric::new(phi).expect("built by valid appends")
}

pub fn perm(images: &[usize]) -> Permutation {
    Permutation::from_images(images.to_vec()).unwrap()
}

/// Whether some chain of exactly `m` vectors from `x` to `y` exists over
/// the order-`n` prefix of `phi`, with real (not only lattice) values.
///
/// Every constraint has the form `±s_u ± s_v <= c`, so the system is
/// feasible over the reals iff its doubled constraint graph (a node for
/// `+s_u` and one for `-s_u`) has no negative cycle. Positivity is relaxed
/// to `>= 0`, so `false` is a proof that no chain of length `m` exists.
pub fn chain_of_length_possible(phi: &[Rational], x: &[Rational], y: &[Rational], m: usize) -> bool {
    let n = x.len();
    let len = n + m - 1;
    let mut seq: Vec<Option<Rational>> = vec![None; len];
    for (i, v) in x.iter().rev().enumerate() {
        seq[i] = Some(v.clone());
    }
    for (i, v) in y.iter().rev().enumerate() {
        let j = len - n + i;
        if seq[j].as_ref().is_some_and(|w| w != v) {
            return false;
        }
        seq[j] = Some(v.clone());
    }
    let (pos, neg) = (|u: usize| 2 * u, |u: usize| 2 * u + 1);
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    // literal difference a - b <= c, as edges b -> a and -a -> -b
    let mut diff = |a: usize, b: usize, c: Rational| {
        edges.push((b, a, c.clone()));
        edges.push((a ^ 1, b ^ 1, c));
    };
    let two = Rational::from_integer(2);
    for u in 0..len {
        diff(neg(u), pos(u), Rational::zero());
        if let Some(v) = &seq[u] {
            diff(pos(u), neg(u), &two * v);
            diff(neg(u), pos(u), -(&two * v));
        }
        for v in u + 1..(u + n).min(len) {
            let d = phi[v - u - 1].clone();
            diff(pos(u), pos(v), d.clone());
            diff(pos(v), pos(u), d.clone());
            diff(neg(u), pos(v), -d);
        }
    }
    let nodes = 2 * len;
    let mut dist = vec![Rational::zero(); nodes];
    for _ in 0..nodes {
        let mut changed = false;
        for (a, b, w) in &edges {
            let cand = &dist[*a] + w;
            if cand < dist[*b] {
                dist[*b] = cand;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    false
}

// SPDX-License-Identifier: Apache-2.0

//! Chains of admissible vectors for a Toeplitz prefix, each obtained from
//! the previous one by shifting in one new first coordinate.
//!
//! A chain `a^n, …, a^N` is stored as vectors, but it is generated as a
//! time sequence `s`: vector `a^t` is `(s_t, s_{t-1}, …, s_{t-n+1})`.
//! The window constraints `|s_t - s_{t-d}| <= phi(d) <= s_t + s_{t-d}`
//! (`0 < d < n`) are symmetric under reversing time.

use std::collections::{HashMap, VecDeque};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::admissibility::check_admissible;
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::rational::{common_denominator, Rational};
use crate::toeplitz::metric::ToeplitzMetric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStrategy {
    /// `x = y`.
    Identity,
    /// Shift in `y_n, …, y_1` directly, reusing any overlap.
    Direct,
    /// Step the first coordinate from `x_1` toward `y_n` by `phi(1)`.
    Ladder,
    /// The ladder with every rung repeated.
    PlateauLadder,
    /// Shortest chain on the lattice of the common denominator.
    Lattice,
    /// Walk both ends to a constant window and meet there.
    Hub,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BilliardChain {
    /// The order-`n` prefix the chain lives over.
    pub metric: ToeplitzMetric,
    pub vectors: Vec<Vec<Rational>>,
    pub strategy: ChainStrategy,
}

impl BilliardChain {
    pub fn n(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// New first coordinates, one per step.
    pub fn appended(&self) -> Vec<Rational> {
        self.vectors[1..].iter().map(|v| v[0].clone()).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChainOptions {
    /// Skip the direct splice even when it is admissible.
    pub always_insert: bool,
}

/// `n + n (1 + ⌈|x_1 - y_n| / phi(1)⌉)`, the ladder length bound.
pub fn ladder_bound(metric: &ToeplitzMetric, x: &[Rational], y: &[Rational]) -> usize {
    let n = x.len();
    if n < 2 {
        return 2 * n;
    }
    let steps = (x[0].abs_diff(&y[n - 1]) / metric.phi(1)).ceil().to_usize().unwrap_or(usize::MAX / 4);
    n + n * (1 + steps)
}

/// First defect of a candidate chain, or `None` if it is a valid chain
/// from `x` to `y`.
pub fn chain_defect(metric: &ToeplitzMetric, x: &[Rational], y: &[Rational], vectors: &[Vec<Rational>]) -> Result<Option<String>> {
    let space = metric.space(x.len())?;
    Ok(defect(&space, x, y, vectors))
}

fn defect(space: &FiniteMetricSpace, x: &[Rational], y: &[Rational], vectors: &[Vec<Rational>]) -> Option<String> {
    let n = x.len();
    if vectors.first().map(Vec::as_slice) != Some(x) {
        return Some("chain does not start at x".into());
    }
    if vectors.last().map(Vec::as_slice) != Some(y) {
        return Some("chain does not end at y".into());
    }
    for (k, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Some(format!("vector {k} has length {}", v.len()));
        }
        if let Ok(Some(bad)) = check_admissible(space, v) {
            return Some(format!("vector {k} is not admissible: {bad}"));
        }
    }
    for (k, w) in vectors.windows(2).enumerate() {
        if w[1][1..] != w[0][..n - 1] {
            return Some(format!("vectors {k} and {} are not shifts", k + 1));
        }
    }
    None
}

fn to_windows(seq: &[Rational], n: usize) -> Vec<Vec<Rational>> {
    (n..=seq.len()).map(|t| seq[t - n..t].iter().rev().cloned().collect()).collect()
}

/// Cuts out loops between repeated windows.
fn remove_cycles(vectors: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::with_capacity(vectors.len());
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
    for v in vectors {
        if let Some(&p) = seen.get(&v) {
            for w in out.drain(p + 1..) {
                seen.remove(&w);
            }
        } else {
            seen.insert(v.clone(), out.len());
            out.push(v);
        }
    }
    out
}

fn reversed(v: &[Rational]) -> Vec<Rational> {
    v.iter().rev().cloned().collect()
}

/// Interval of values `v` that may follow the time sequence `seq`.
fn next_bounds(seq: &[Rational], phi: &[Rational], n: usize) -> (Rational, Option<Rational>) {
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    for d in 1..n.min(seq.len() + 1) {
        let s = &seq[seq.len() - d];
        let p = &phi[d - 1];
        let l = s.abs_diff(p);
        if l > lo {
            lo = l;
        }
        let u = s + p;
        if hi.as_ref().is_none_or(|h| u < *h) {
            hi = Some(u);
        }
    }
    (lo, hi)
}

struct Search<'a> {
    space: FiniteMetricSpace,
    metric: &'a ToeplitzMetric,
    x: &'a [Rational],
    y: &'a [Rational],
    n: usize,
    bound: usize,
    best: Option<BilliardChain>,
}

impl Search<'_> {
    /// Records a candidate time sequence; true once a chain within the
    /// bound has been found.
    fn offer(&mut self, seq: Vec<Rational>, strategy: ChainStrategy) -> bool {
        let vectors = remove_cycles(to_windows(&seq, self.n));
        if defect(&self.space, self.x, self.y, &vectors).is_some() {
            return false;
        }
        if self.best.as_ref().is_none_or(|b| vectors.len() < b.vectors.len()) {
            self.best = Some(BilliardChain { metric: self.metric.clone(), vectors, strategy });
        }
        self.best.as_ref().is_some_and(|b| b.vectors.len() <= self.bound)
    }

    fn direct(&mut self) -> bool {
        let (xs, ys) = (reversed(self.x), reversed(self.y));
        let n = self.n;
        for o in (0..n).rev() {
            if xs[n - o..] == ys[..o] {
                let mut seq = xs.clone();
                seq.extend_from_slice(&ys[o..]);
                if self.offer(seq, ChainStrategy::Direct) {
                    return true;
                }
            }
        }
        false
    }

    fn rungs(&self) -> Vec<Rational> {
        let r = self.metric.phi(1);
        let (x1, yn) = (&self.x[0], &self.y[self.n - 1]);
        let k = (x1.abs_diff(yn) / &r).ceil().to_usize().unwrap_or(0).saturating_sub(1);
        let step = if x1 >= yn { r } else { -r };
        (1..=k).rev().map(|j| yn + &(&step * &Rational::from_integer(j as i64))).collect()
    }

    fn ladder(&mut self, repeat: usize, strategy: ChainStrategy) -> bool {
        let mut seq = reversed(self.x);
        for rung in self.rungs() {
            seq.extend(std::iter::repeat_n(rung, repeat));
        }
        seq.extend(reversed(self.y));
        self.offer(seq, strategy)
    }

    fn lattice(&mut self, node_limit: usize) -> bool {
        let phi = &self.metric.values()[..self.n - 1];
        let Some(l) = common_denominator(self.x.iter().chain(self.y).chain(phi)) else {
            return false;
        };
        let scale = |v: &Rational| (v * &Rational::from_integer(l)).floor().to_i64();
        let top = self.x.iter().chain(self.y).max().unwrap() + phi.iter().max().cloned().unwrap_or_else(Rational::zero);
        let (Some(kmax), Some(sphi)) = (scale(&top), phi.iter().map(scale).collect::<Option<Vec<i64>>>()) else {
            return false;
        };
        let (Some(start), Some(goal)) =
            (self.x.iter().map(scale).collect::<Option<Vec<i64>>>(), self.y.iter().map(scale).collect::<Option<Vec<i64>>>())
        else {
            return false;
        };
        let mut parent: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        parent.insert(start.clone(), Vec::new());
        let mut queue = VecDeque::from([start.clone()]);
        let mut found = start == goal;
        while let Some(w) = queue.pop_front() {
            if found {
                break;
            }
            let lo = (0..self.n - 1).map(|d| (w[d] - sphi[d]).abs()).max().unwrap_or(0).max(1);
            let hi = (0..self.n - 1).map(|d| w[d] + sphi[d]).min().unwrap_or(kmax).min(kmax);
            for v in lo..=hi {
                let mut next = Vec::with_capacity(self.n);
                next.push(v);
                next.extend_from_slice(&w[..self.n - 1]);
                if parent.contains_key(&next) {
                    continue;
                }
                if parent.len() >= node_limit {
                    return false;
                }
                parent.insert(next.clone(), w.clone());
                if next == goal {
                    found = true;
                    break;
                }
                queue.push_back(next);
            }
        }
        if !found {
            return false;
        }
        let mut path = vec![goal];
        while let Some(p) = parent.get(path.last().unwrap()).filter(|p| !p.is_empty()) {
            path.push(p.clone());
        }
        path.reverse();
        let mut seq = reversed(self.x);
        seq.extend(path[1..].iter().map(|w| Rational::ratio(w[0], l)));
        self.offer(seq, ChainStrategy::Lattice)
    }

    /// Moves a time sequence greedily toward `h` until it ends in `n`
    /// copies of `h`.
    fn lift(&self, mut seq: Vec<Rational>, h: &Rational, limit: usize) -> Option<Vec<Rational>> {
        let phi = &self.metric.values()[..self.n - 1];
        for _ in 0..limit {
            if seq[seq.len() - self.n..].iter().all(|s| s == h) {
                return Some(seq);
            }
            let (lo, hi) = next_bounds(&seq, phi, self.n);
            let mut v = std::cmp::max(h.clone(), lo);
            if let Some(hi) = hi {
                v = std::cmp::min(v, hi);
            }
            if !v.is_positive() {
                return None;
            }
            seq.push(v);
        }
        None
    }

    fn hub(&mut self) -> bool {
        let phi = &self.metric.values()[..self.n - 1];
        let p = phi.iter().max().cloned().unwrap_or_else(Rational::zero);
        let half = &p / &Rational::from_integer(2);
        let (x1, yn) = (&self.x[0], &self.y[self.n - 1]);
        let mid = (x1 + yn) / Rational::from_integer(2);
        let mut hs = vec![x1.clone(), yn.clone(), mid, p.clone(), &p + &p];
        hs.retain(|h| *h > half);
        hs.dedup();
        let limit = 64 * self.bound.max(16);
        let mut done = false;
        for h in hs {
            let (Some(a), Some(b)) = (self.lift(reversed(self.x), &h, limit), self.lift(self.y.to_vec(), &h, limit)) else {
                continue;
            };
            let mut seq = a;
            seq.extend(b.into_iter().rev().skip(self.n));
            done |= self.offer(seq, ChainStrategy::Hub);
        }
        done
    }
}

pub fn billiard_chain(metric: &ToeplitzMetric, x: &[Rational], y: &[Rational]) -> Result<BilliardChain> {
    billiard_chain_with(metric, x, y, ChainOptions::default())
}

/// Connects `x` to `y` by a chain of admissible shifts.
///
/// Strategies are tried in the order of [`ChainStrategy`]; the first chain
/// within [`ladder_bound`] is returned, otherwise the shortest valid one.
pub fn billiard_chain_with(
    metric: &ToeplitzMetric,
    x: &[Rational],
    y: &[Rational],
    options: ChainOptions,
) -> Result<BilliardChain> {
    let n = x.len();
    if n == 0 || y.len() != n {
        return Err(Error::Shape(format!("endpoints of lengths {} and {}", n, y.len())));
    }
    let space = metric.space(n)?;
    for v in [x, y] {
        if let Some(bad) = check_admissible(&space, v)? {
            return Err(Error::NotAdmissible(bad));
        }
    }
    let prefix = metric.prefix(n);
    let mut s = Search { space, metric: &prefix, x, y, n, bound: ladder_bound(metric, x, y), best: None };
    if x == y {
        s.offer(reversed(x), ChainStrategy::Identity);
    } else if n == 1 {
        let seq = vec![x[0].clone(), y[0].clone()];
        s.offer(seq, ChainStrategy::Direct);
    } else {
        let _ = (!options.always_insert && s.direct())
            || s.ladder(1, ChainStrategy::Ladder)
            || (2..=n).any(|r| s.ladder(r, ChainStrategy::PlateauLadder))
            || s.lattice(20_000)
            || s.hub();
    }
    s.best.ok_or_else(|| Error::ChainConstruction(format!("no chain found from {x:?} to {y:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{ints, qs};

    fn unit() -> ToeplitzMetric {
        ToeplitzMetric::new(ints(&[1])).unwrap()
    }

    #[test]
    fn worked_two_point_chain() {
        let x = qs(&[(2, 1), (3, 2)]);
        let y = qs(&[(3, 5), (1, 2)]);
        let c = billiard_chain(&unit(), &x, &y).unwrap();
        assert_eq!(c.vectors, vec![x.clone(), qs(&[(3, 2), (2, 1)]), qs(&[(1, 2), (3, 2)]), y.clone()]);
        assert_eq!(c.strategy, ChainStrategy::Ladder);
        assert!(c.len() <= ladder_bound(&unit(), &x, &y));
        assert_eq!(chain_defect(&unit(), &x, &y, &c.vectors).unwrap(), None);
    }

    #[test]
    fn trivial_and_invalid() {
        let x = qs(&[(2, 1), (3, 2)]);
        let c = billiard_chain(&unit(), &x, &x).unwrap();
        assert_eq!(c.vectors, vec![x.clone()]);
        assert_eq!(c.strategy, ChainStrategy::Identity);
        assert!(matches!(billiard_chain(&unit(), &qs(&[(1, 4), (1, 4)]), &x), Err(Error::NotAdmissible(_))));
        assert!(matches!(billiard_chain(&unit(), &x, &ints(&[1])), Err(Error::Shape(_))));
    }

    #[test]
    fn direct_splice_and_always_insert() {
        let x = ints(&[1, 1]);
        let y = ints(&[2, 2]);
        let c = billiard_chain(&unit(), &x, &y).unwrap();
        assert_eq!(c.strategy, ChainStrategy::Direct);
        assert_eq!(c.len(), 3);
        let forced = billiard_chain_with(&unit(), &x, &y, ChainOptions { always_insert: true }).unwrap();
        assert_ne!(forced.strategy, ChainStrategy::Direct);
        assert_eq!(chain_defect(&unit(), &x, &y, &forced.vectors).unwrap(), None);
    }

    #[test]
    fn lag_two_constraint_needs_a_long_chain() {
        let m = ToeplitzMetric::new(qs(&[(1, 1), (1, 4)])).unwrap();
        let x = qs(&[(1, 4), (1, 1), (1, 4)]);
        let y = ints(&[3, 3, 3]);
        let c = billiard_chain(&m, &x, &y).unwrap();
        assert_eq!(chain_defect(&m, &x, &y, &c.vectors).unwrap(), None);
        // every other entry may move by at most 1/4 per step
        assert!(c.len() > ladder_bound(&m, &x, &y));
    }

    #[test]
    fn single_coordinate() {
        let m = ToeplitzMetric::empty();
        let c = billiard_chain(&m, &ints(&[1]), &ints(&[5])).unwrap();
        assert_eq!(c.vectors, vec![ints(&[1]), ints(&[5])]);
    }
}

// SPDX-License-Identifier: Apache-2.0

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::admissibility::{enumerate_admissible, AdmissibleVector};
use crate::builder::{GrowthSchedule, Stage};
use crate::error::Result;
use crate::rational::{common_denominator, Rational};
use crate::toeplitz::billiard::{billiard_chain_with, ChainOptions, ChainStrategy};
use crate::toeplitz::metric::ToeplitzMetric;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ToeplitzOptions {
    /// Shuffle each stage's targets with this seed; `None` keeps
    /// lexicographic order.
    pub seed: Option<u64>,
    /// Insert a billiard fragment even when the direct splice works.
    pub always_insert: bool,
    /// Maximum number of appended values; `None` for no limit.
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnrealizedTarget {
    pub stage: usize,
    pub vector: AdmissibleVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToeplitzOutcome {
    pub metric: ToeplitzMetric,
    pub complete: bool,
    pub completed_stages: usize,
    pub appended: usize,
    /// Targets reached through a chain with intermediate vectors.
    pub fragments: usize,
    pub strategies: Vec<ChainStrategy>,
    pub unrealized: Vec<UnrealizedTarget>,
}

/// Point `k >= n` whose distances to points `0..n` are `values`.
pub fn toeplitz_realizer(metric: &ToeplitzMetric, values: &[Rational]) -> Option<usize> {
    let n = values.len();
    (n..metric.points()).find(|&k| values.iter().enumerate().all(|(i, a)| metric.phi(k - i) == *a))
}

enum Attempt {
    Done,
    Failed,
    OutOfBudget,
}

struct Builder {
    metric: ToeplitzMetric,
    appended: usize,
    budget: Option<usize>,
    fragments: usize,
    strategies: Vec<ChainStrategy>,
}

impl Builder {
    fn room(&self, k: usize) -> bool {
        self.budget.is_none_or(|b| self.appended + k <= b)
    }

    /// Appends all of `vals` if every prefix stays a metric.
    fn append_all(&mut self, vals: &[Rational]) -> Attempt {
        let mut m = self.metric.clone();
        for v in vals {
            if !m.can_append(v) {
                return Attempt::Failed;
            }
            m.push_unchecked(v.clone());
        }
        if !self.room(vals.len()) {
            return Attempt::OutOfBudget;
        }
        self.metric = m;
        self.appended += vals.len();
        Attempt::Done
    }

    fn pad(&mut self, grid: &[Rational]) -> Attempt {
        let (lo, hi) = self.metric.append_bounds();
        let fits = |v: &Rational| v.is_positive() && *v >= lo && hi.as_ref().is_none_or(|h| v <= h);
        let v = grid.iter().find(|v| fits(v)).cloned().unwrap_or_else(|| match &hi {
            Some(h) if lo.is_positive() => lo.clone().min(h.clone()),
            Some(h) => h.clone(),
            None => Rational::one(),
        });
        self.append_all(&[v])
    }

    /// Window of the last point over the `n` points before it.
    fn last_window(&self, n: usize) -> Vec<Rational> {
        let m = self.metric.len();
        (0..n).map(|i| self.metric.phi(m - i)).collect()
    }

    fn realize(&mut self, target: &[Rational], options: &ToeplitzOptions) -> Attempt {
        let n = target.len();
        if self.metric.len() >= n {
            let w = self.last_window(n);
            let opts = ChainOptions { always_insert: options.always_insert };
            if let Ok(chain) = billiard_chain_with(&self.metric.prefix(n), &w, target, opts) {
                match self.append_all(&chain.appended()) {
                    Attempt::Failed => {}
                    other => {
                        if matches!(other, Attempt::Done) {
                            if chain.strategy != ChainStrategy::Direct {
                                self.fragments += 1;
                            }
                            self.strategies.push(chain.strategy);
                        }
                        return other;
                    }
                }
            }
        }
        let tail: Vec<Rational> = target.iter().rev().cloned().collect();
        match self.append_all(&tail) {
            Attempt::Failed => {}
            other => return other,
        }
        match self.bridge(&tail, 2 * n.max(1), 4096) {
            Some(mut vals) => {
                vals.extend(tail);
                let r = self.append_all(&vals);
                if matches!(r, Attempt::Done) {
                    self.fragments += 1;
                }
                r
            }
            None => Attempt::Failed,
        }
    }

    /// Depth-first search for a short run of values after which `tail`
    /// can be appended.
    fn bridge(&self, tail: &[Rational], max_len: usize, node_limit: usize) -> Option<Vec<Rational>> {
        let l = common_denominator(self.metric.values().iter().chain(tail)).unwrap_or(1);
        let aim = tail[0].clone();
        let mut nodes = 0;
        for len in 1..=max_len {
            let mut path = Vec::new();
            if self.bridge_dfs(&mut self.metric.clone(), tail, &aim, l, len, &mut path, &mut nodes, node_limit) {
                return Some(path);
            }
            if nodes >= node_limit {
                break;
            }
        }
        None
    }

    #[allow(clippy::too_many_arguments)]
    fn bridge_dfs(
        &self,
        m: &mut ToeplitzMetric,
        tail: &[Rational],
        aim: &Rational,
        l: i64,
        left: usize,
        path: &mut Vec<Rational>,
        nodes: &mut usize,
        node_limit: usize,
    ) -> bool {
        *nodes += 1;
        if *nodes > node_limit {
            return false;
        }
        if left == 0 {
            let mut probe = m.clone();
            return tail.iter().all(|v| {
                let ok = probe.can_append(v);
                probe.push_unchecked(v.clone());
                ok
            });
        }
        let (lo, hi) = m.append_bounds();
        let hi = hi.unwrap_or_else(|| &lo + aim);
        let mut cands: Vec<Rational> = vec![aim.clone().max(lo.clone()).min(hi.clone()), lo.clone(), hi.clone()];
        let step = Rational::ratio(1, l);
        let mut v = aim.clone().max(lo.clone()).min(hi.clone());
        for _ in 0..2 {
            v = &v - &step;
            cands.push(v.clone());
        }
        cands.retain(|c| c.is_positive() && *c >= lo && *c <= hi);
        cands.sort_by_key(|c| c.abs_diff(aim));
        cands.dedup();
        for c in cands {
            m.push_unchecked(c.clone());
            path.push(c);
            if self.bridge_dfs(m, tail, aim, l, left - 1, path, nodes, node_limit) {
                return true;
            }
            path.pop();
            m.pop_unchecked();
        }
        false
    }
}

/// Grows a Toeplitz metric whose induced matrix realizes every staged
/// admissible vector, splicing billiard chains between targets.
pub fn build_toeplitz_universal(stages: &[Stage], options: &ToeplitzOptions) -> Result<ToeplitzOutcome> {
    GrowthSchedule::deterministic(stages.to_vec()).validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed.unwrap_or(0));
    let mut b = Builder {
        metric: ToeplitzMetric::empty(),
        appended: 0,
        budget: options.budget,
        fragments: 0,
        strategies: Vec::new(),
    };
    let mut unrealized = Vec::new();
    let mut completed_stages = 0;
    let finish = |b: Builder, complete: bool, completed_stages: usize, unrealized: Vec<UnrealizedTarget>| ToeplitzOutcome {
        metric: b.metric,
        complete,
        completed_stages,
        appended: b.appended,
        fragments: b.fragments,
        strategies: b.strategies,
        unrealized,
    };
    for (si, stage) in stages.iter().enumerate() {
        let grid = crate::admissibility::value_grid(stage.den_bound, &stage.value_bound)?;
        while b.metric.points() < stage.n {
            if !matches!(b.pad(&grid), Attempt::Done) {
                return Ok(finish(b, false, completed_stages, unrealized));
            }
        }
        if stage.n == 0 {
            completed_stages += 1;
            continue;
        }
        let base = b.metric.space(stage.n)?;
        let mut targets = enumerate_admissible(&base, stage.den_bound, &stage.value_bound)?;
        if options.seed.is_some() {
            targets.shuffle(&mut rng);
        }
        let mut stage_ok = true;
        for t in targets {
            if toeplitz_realizer(&b.metric, t.values()).is_some() {
                continue;
            }
            match b.realize(t.values(), options) {
                Attempt::Done => {}
                Attempt::Failed => {
                    stage_ok = false;
                    unrealized.push(UnrealizedTarget { stage: si, vector: t });
                }
                Attempt::OutOfBudget => return Ok(finish(b, false, completed_stages, unrealized)),
            }
        }
        if stage_ok {
            completed_stages += 1;
        }
    }
    let complete = unrealized.is_empty();
    Ok(finish(b, complete, completed_stages, unrealized))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::universality_audit;
    use crate::metric::validate_metric;
    use crate::testutil::{ints, q};
    use crate::toeplitz::metric::{phi_of, PhiExtraction};

    fn st(n: usize, d: u64, b: i64) -> Stage {
        Stage::new(n, d, q(b, 1))
    }

    #[test]
    fn trivial_runs() {
        let out = build_toeplitz_universal(&[], &ToeplitzOptions::default()).unwrap();
        assert!(out.metric.is_empty() && out.complete);
        let out = build_toeplitz_universal(&[st(1, 1, 1)], &ToeplitzOptions::default()).unwrap();
        assert_eq!(out.metric.values(), &ints(&[1])[..]);
    }

    #[test]
    fn staged_universality() {
        let stages = [st(1, 1, 1), st(1, 1, 2), st(2, 1, 2)];
        for options in [
            ToeplitzOptions::default(),
            ToeplitzOptions { seed: Some(3), ..Default::default() },
            ToeplitzOptions { always_insert: true, ..Default::default() },
        ] {
            let out = build_toeplitz_universal(&stages, &options).unwrap();
            assert!(out.complete, "{out:?}");
            let space = out.metric.full_space();
            assert!(validate_metric(&space.rows()).unwrap().valid);
            assert_eq!(phi_of(&space), PhiExtraction::Toeplitz(out.metric.clone()));
            assert!(out.metric.is_subadditive());
            for s in &stages {
                assert!(universality_audit(&space, &s.audit_params(space.len())).unwrap().passed);
            }
        }
    }

    #[test]
    fn finer_stage_with_fractions() {
        let stages = [st(1, 2, 2), st(2, 2, 2)];
        let out = build_toeplitz_universal(&stages, &ToeplitzOptions::default()).unwrap();
        let space = out.metric.full_space();
        assert!(validate_metric(&space.rows()).unwrap().valid);
        for (i, s) in stages.iter().enumerate() {
            let passed = universality_audit(&space, &s.audit_params(space.len())).unwrap().passed;
            let failed_here = out.unrealized.iter().any(|u| u.stage == i);
            assert!(passed || failed_here);
        }
    }

    #[test]
    fn budget_cut() {
        let out = build_toeplitz_universal(&[st(2, 1, 2)], &ToeplitzOptions { budget: Some(2), ..Default::default() }).unwrap();
        assert!(!out.complete);
        assert!(out.appended <= 2);
    }
}

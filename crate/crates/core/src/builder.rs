// SPDX-License-Identifier: Apache-2.0

//! Staged inductive construction of finite prefixes of the universal
//! rational distance matrix.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::admissibility::{enumerate_admissible, min_plus_extension, realizing_point, AuditParams};
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

/// One enumeration stage: all admissible vectors over the first `n` points
/// with entries `p/q`, `q | den_bound`, `0 < p/q <= value_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub n: usize,
    pub den_bound: u64,
    pub value_bound: Rational,
}

impl Stage {
    pub fn new(n: usize, den_bound: u64, value_bound: Rational) -> Self {
        Stage { n, den_bound, value_bound }
    }

    pub fn audit_params(&self, depth: usize) -> AuditParams {
        AuditParams { n: self.n, den_bound: self.den_bound, value_bound: self.value_bound.clone(), depth }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.n, self.den_bound, self.value_bound)
    }
}

impl FromStr for Stage {
    type Err = Error;

    /// `n:D:B`, for example `2:1:2` or `3:2:5/2`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [n, d, b] = parts[..] else {
            return Err(Error::Parse(format!("stage {s:?} is not of the form n:D:B")));
        };
        let n = n.parse().map_err(|_| Error::Parse(format!("bad stage size {n:?}")))?;
        let d = d.parse().map_err(|_| Error::Parse(format!("bad denominator bound {d:?}")))?;
        Ok(Stage::new(n, d, b.parse()?))
    }
}

/// Parses a comma-separated list of stages.
pub fn parse_stages(s: &str) -> Result<Vec<Stage>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthMode {
    #[default]
    Deterministic,
    Random,
}

impl FromStr for GrowthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deterministic" => Ok(GrowthMode::Deterministic),
            "random" => Ok(GrowthMode::Random),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSchedule {
    pub mode: GrowthMode,
    pub seed: u64,
    pub stages: Vec<Stage>,
    /// Maximum number of points added; `None` for no limit.
    pub step_budget: Option<usize>,
}

impl GrowthSchedule {
    pub fn deterministic(stages: Vec<Stage>) -> Self {
        GrowthSchedule { mode: GrowthMode::Deterministic, seed: 0, stages, step_budget: None }
    }

    pub fn random(stages: Vec<Stage>, seed: u64) -> Self {
        GrowthSchedule { mode: GrowthMode::Random, seed, stages, step_budget: None }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.step_budget = Some(budget);
        self
    }

    /// Rejects stage lists whose bounds decrease.
    pub fn validate(&self) -> Result<()> {
        for (i, w) in self.stages.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if b.n < a.n || b.den_bound < a.den_bound || b.value_bound < a.value_bound {
                return Err(Error::Parameter(format!("stage {} ({b}) has smaller bounds than stage {i} ({a})", i + 1)));
            }
        }
        for s in &self.stages {
            if s.den_bound == 0 || !s.value_bound.is_positive() {
                return Err(Error::Parameter(format!("stage {s} needs D >= 1 and B > 0")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthOutcome {
    pub space: FiniteMetricSpace,
    pub complete: bool,
    pub completed_stages: usize,
    pub steps: usize,
}

struct Grower {
    space: FiniteMetricSpace,
    steps: usize,
    budget: Option<usize>,
}

impl Grower {
    fn has_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.steps < b)
    }

    fn push(&mut self, profile: &[Rational]) {
        let label = self.space.fresh_label(&format!("u{}", self.space.len()));
        self.space.push_point_unchecked(label, profile);
        self.steps += 1;
    }

    /// Adds points far from everything until there are `n` of them.
    fn pad_to(&mut self, n: usize, bound: &Rational) -> bool {
        while self.space.len() < n {
            if !self.has_budget() {
                return false;
            }
            let c = std::cmp::max(bound.clone(), self.space.diameter());
            let profile = vec![c; self.space.len()];
            self.push(&profile);
        }
        true
    }
}

/// Repeatedly realizes the admissible vectors of every stage that are not
/// yet exactly realized. Existing entries are never modified.
pub fn grow(space: &FiniteMetricSpace, schedule: &GrowthSchedule) -> Result<GrowthOutcome> {
    schedule.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
    let mut g = Grower { space: space.clone(), steps: 0, budget: schedule.step_budget };
    for (done, stage) in schedule.stages.iter().enumerate() {
        let incomplete = |g: Grower| GrowthOutcome { space: g.space, complete: false, completed_stages: done, steps: g.steps };
        if !g.pad_to(stage.n.max(1), &stage.value_bound) {
            return Ok(incomplete(g));
        }
        if stage.n == 0 {
            continue;
        }
        let base = g.space.prefix(stage.n)?;
        let mut targets = enumerate_admissible(&base, stage.den_bound, &stage.value_bound)?;
        if schedule.mode == GrowthMode::Random {
            targets.shuffle(&mut rng);
        }
        let known: Vec<usize> = (0..stage.n).collect();
        for a in &targets {
            if realizing_point(&g.space, a.values(), g.space.len()).is_some() {
                continue;
            }
            if !g.has_budget() {
                return Ok(incomplete(g));
            }
            let profile = min_plus_extension(&g.space, &known, a.values());
            g.push(&profile);
        }
    }
    Ok(GrowthOutcome { space: g.space, complete: true, completed_stages: schedule.stages.len(), steps: g.steps })
}

/// Grows the empty space through `stages` in deterministic mode.
pub fn build_rational_urysohn(stages: &[Stage]) -> Result<GrowthOutcome> {
    grow(&FiniteMetricSpace::empty(), &GrowthSchedule::deterministic(stages.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::universality_audit;
    use crate::metric::validate_metric;
    use crate::testutil::q;

    fn st(n: usize, d: u64, b: i64) -> Stage {
        Stage::new(n, d, q(b, 1))
    }

    #[test]
    fn base_step() {
        let out = grow(&FiniteMetricSpace::empty(), &GrowthSchedule::deterministic(vec![st(0, 1, 1)]).with_budget(1)).unwrap();
        assert!(out.complete);
        assert_eq!(out.space.len(), 1);
    }

    #[test]
    fn forced_step() {
        let one = FiniteMetricSpace::from_int_rows(&[&[0]]).unwrap();
        let out = grow(&one, &GrowthSchedule::deterministic(vec![st(1, 1, 1)]).with_budget(1)).unwrap();
        assert!(out.complete);
        assert_eq!(out.space.rows(), FiniteMetricSpace::from_int_rows(&[&[0, 1], &[1, 0]]).unwrap().rows());
    }

    #[test]
    fn two_point_stage() {
        let two = FiniteMetricSpace::from_int_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let out = grow(&two, &GrowthSchedule::deterministic(vec![st(2, 1, 2)])).unwrap();
        assert!(out.complete);
        assert_eq!(out.space.prefix(2).unwrap(), two);
        let report = universality_audit(&out.space, &st(2, 1, 2).audit_params(out.space.len())).unwrap();
        assert!(report.passed);
        assert_eq!(report.checked, 4);
    }

    #[test]
    fn staged_builds() {
        let one = build_rational_urysohn(&[st(0, 1, 1)]).unwrap();
        assert_eq!(one.space.len(), 1);
        let out = build_rational_urysohn(&[st(1, 1, 2)]).unwrap();
        assert_eq!(out.space.len(), 3);
        let stages = [st(1, 1, 2), st(2, 1, 2), st(2, 2, 2)];
        let out = build_rational_urysohn(&stages).unwrap();
        assert!(validate_metric(&out.space.rows()).unwrap().valid);
        for s in &stages {
            assert!(universality_audit(&out.space, &s.audit_params(out.space.len())).unwrap().passed);
        }
    }

    #[test]
    fn random_mode_is_seeded() {
        let stages = vec![st(1, 1, 2), st(2, 1, 3)];
        let a = grow(&FiniteMetricSpace::empty(), &GrowthSchedule::random(stages.clone(), 7)).unwrap();
        let b = grow(&FiniteMetricSpace::empty(), &GrowthSchedule::random(stages.clone(), 7)).unwrap();
        assert_eq!(a, b);
        for s in &stages {
            assert!(universality_audit(&a.space, &s.audit_params(a.space.len())).unwrap().passed);
        }
    }

    #[test]
    fn budget_and_schedule_errors() {
        let out = build_rational_urysohn(&[st(2, 1, 2)]).unwrap();
        let cut = grow(&FiniteMetricSpace::empty(), &GrowthSchedule::deterministic(vec![st(2, 1, 2)]).with_budget(3)).unwrap();
        assert!(!cut.complete);
        assert_eq!(cut.steps, 3);
        assert_eq!(out.space.prefix(3).unwrap().rows(), cut.space.rows());
        assert!(matches!(
            grow(&FiniteMetricSpace::empty(), &GrowthSchedule::deterministic(vec![st(2, 1, 2), st(1, 1, 2)])),
            Err(Error::Parameter(_))
        ));
        assert_eq!(parse_stages("1:1:2,2:2:5/2").unwrap()[1], Stage::new(2, 2, q(5, 2)));
        assert!(parse_stages("1:1").is_err());
    }
}

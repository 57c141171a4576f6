// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::admissibility::min_plus_extension;
use crate::error::{Error, Result};
use crate::globalization::search::{globalize, GlobalizeConfig};
use crate::isometry::{GroupAction, PartialIsometry};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerStage {
    pub space: FiniteMetricSpace,
    pub group: GroupAction,
    /// Position in `space` of each schedule point absorbed so far.
    pub schedule_points: Vec<usize>,
    /// Inclusion into the next stage's space.
    pub inclusion: Option<Vec<usize>>,
    /// Index in the next stage's group of each element of `group`.
    pub group_embedding: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerOutcome {
    pub stages: Vec<TowerStage>,
    pub complete: bool,
    pub detail: Option<String>,
}

/// Builds `F_1 ⊂ F_2 ⊂ …`: `F_1` is the first schedule point and
/// `F_{n+1}` globalizes `F_n` plus the next schedule point. `G_{n+1}` is
/// generated by the certificate's extensions, and `G_n` maps into it through
/// the extensions of its own elements.
pub fn locally_finite_tower(
    schedule: &FiniteMetricSpace,
    stages: usize,
    config: &GlobalizeConfig,
    group_limit: usize,
) -> Result<TowerOutcome> {
    if stages == 0 || stages > schedule.len() {
        return Err(Error::Parameter(format!("need 1 <= stages <= {}, got {stages}", schedule.len())));
    }
    let first = schedule.restrict(&[0])?;
    let mut tower = vec![TowerStage {
        space: first,
        group: GroupAction::trivial(1),
        schedule_points: vec![0],
        inclusion: None,
        group_embedding: None,
    }];
    for n in 1..stages {
        let cur = tower.last().unwrap();
        let values: Vec<Rational> = (0..n).map(|i| schedule.dist(n, i).clone()).collect();
        let profile = min_plus_extension(&cur.space, &cur.schedule_points, &values);
        let mut base = cur.space.clone();
        base.push_point_unchecked(base.fresh_label(schedule.label(n)), &profile);
        let outcome = match globalize(&base, config) {
            Ok(o) => o,
            Err(Error::BudgetExceeded(b)) => {
                return Ok(TowerOutcome { stages: tower, complete: false, detail: Some(b.detail) });
            }
            Err(e) => return Err(e),
        };
        let cert = outcome.certificate;
        let gens: Vec<_> = cert.table.iter().map(|e| e.extension.clone()).collect();
        let group = match GroupAction::generated_by(cert.extension.len(), &gens, group_limit) {
            Ok(g) => g,
            Err(Error::Parameter(msg)) => return Ok(TowerOutcome { stages: tower, complete: false, detail: Some(msg) }),
            Err(e) => return Err(e),
        };
        let m = cur.space.len();
        let embedding: Vec<usize> = cur
            .group
            .elements()
            .iter()
            .map(|g| {
                let mut map: Vec<Option<usize>> = g.images().iter().map(|&y| Some(y)).collect();
                map.push(None);
                let h = PartialIsometry::from_map_unchecked(map);
                let t = cert.lookup(&h).expect("table covers every partial isometry");
                group.index_of(t).expect("generator of the group")
            })
            .collect();
        let mut points = cur.schedule_points.clone();
        points.push(m);
        let last = tower.last_mut().unwrap();
        last.inclusion = Some(cert.embedding[..m].to_vec());
        last.group_embedding = Some(embedding);
        tower.push(TowerStage {
            space: cert.extension,
            group,
            schedule_points: points,
            inclusion: None,
            group_embedding: None,
        });
    }
    Ok(TowerOutcome { stages: tower, complete: true, detail: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TowerViolation {
    NotAGroup { stage: usize },
    NotIsometric { stage: usize },
    Inclusion { stage: usize, x: usize, y: usize },
    NotGrowing { stage: usize },
    EmbeddingNotInjective { stage: usize },
    Homomorphism { stage: usize, i: usize, j: usize },
    Compatibility { stage: usize, element: usize, point: usize },
    MissingMaps { stage: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub valid: bool,
    pub violations: Vec<TowerViolation>,
}

/// Checks every stage's group, every inclusion and every group embedding.
pub fn verify_tower(stages: &[TowerStage]) -> TowerReport {
    let mut violations = Vec::new();
    for (s, st) in stages.iter().enumerate() {
        if !st.group.verify_axioms() || st.group.degree() != st.space.len() {
            violations.push(TowerViolation::NotAGroup { stage: s });
        } else if !st.group.acts_isometrically_on(&st.space) {
            violations.push(TowerViolation::NotIsometric { stage: s });
        }
    }
    for (s, w) in stages.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let (Some(inc), Some(emb)) = (&a.inclusion, &a.group_embedding) else {
            violations.push(TowerViolation::MissingMaps { stage: s });
            continue;
        };
        if b.space.len() <= a.space.len() {
            violations.push(TowerViolation::NotGrowing { stage: s });
        }
        if inc.len() != a.space.len() || inc.iter().any(|&i| i >= b.space.len()) || emb.len() != a.group.order() || emb.iter().any(|&i| i >= b.group.order()) {
            violations.push(TowerViolation::MissingMaps { stage: s });
            continue;
        }
        for x in 0..inc.len() {
            for y in 0..x {
                if inc[x] == inc[y] || a.space.dist(x, y) != b.space.dist(inc[x], inc[y]) {
                    violations.push(TowerViolation::Inclusion { stage: s, x: y, y: x });
                }
            }
        }
        let mut sorted = emb.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != emb.len() {
            violations.push(TowerViolation::EmbeddingNotInjective { stage: s });
        }
        'hom: for i in 0..a.group.order() {
            for j in 0..a.group.order() {
                if emb[a.group.product(i, j)] != b.group.product(emb[i], emb[j]) {
                    violations.push(TowerViolation::Homomorphism { stage: s, i, j });
                    break 'hom;
                }
            }
        }
        for (i, g) in a.group.elements().iter().enumerate() {
            let lifted = b.group.element(emb[i]);
            if let Some(p) = (0..inc.len()).find(|&p| lifted.apply(inc[p]) != inc[g.apply(p)]) {
                violations.push(TowerViolation::Compatibility { stage: s, element: i, point: p });
            }
        }
    }
    TowerReport { valid: violations.is_empty(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::Permutation;

    #[test]
    fn one_and_two_stages() {
        let sched = FiniteMetricSpace::from_int_rows(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).unwrap();
        let cfg = GlobalizeConfig::default();
        let t = locally_finite_tower(&sched, 1, &cfg, 10_000).unwrap();
        assert_eq!(t.stages.len(), 1);
        assert_eq!(t.stages[0].group.order(), 1);

        let t = locally_finite_tower(&sched, 2, &cfg, 10_000).unwrap();
        assert!(t.complete);
        assert!(t.stages[1].group.contains(&Permutation::parse("1,0").unwrap()));
        assert_eq!(t.stages[0].group_embedding, Some(vec![0]));
        assert!(verify_tower(&t.stages).valid);
    }

    #[test]
    fn three_stages_and_corruption() {
        let sched = FiniteMetricSpace::from_int_rows(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).unwrap();
        let t = locally_finite_tower(&sched, 3, &GlobalizeConfig::default(), 10_000).unwrap();
        assert!(t.complete);
        let report = verify_tower(&t.stages);
        assert!(report.valid, "{report:?}");
        assert!(t.stages[2].space.len() > 3);

        let mut bad = t.stages.clone();
        bad[1].inclusion = Some(vec![0, 0]);
        let report = verify_tower(&bad);
        assert!(report.violations.contains(&TowerViolation::Inclusion { stage: 1, x: 0, y: 1 }));
    }
}

// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::admissibility::is_admissible;
use crate::equivariant::equivariant_embed_at;
use crate::error::{BudgetExceeded, Error, Result};
use crate::globalization::certificate::{GlobalizationCertificate, TableEntry};
use crate::globalization::extend::{extend_partial_to_global, first_extension, isometry_extensions};
use crate::isometry::{isometry_group, partial_isometries, PartialIsometry, Permutation};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalizeConfig {
    /// Maximum number of points added to the base.
    pub budget: usize,
    /// Largest number of added points tried exhaustively before the
    /// closure heuristic takes over.
    pub exhaustive_depth: usize,
    /// Cap on candidate superspaces examined by the exhaustive phase.
    pub node_limit: usize,
    /// Cap on lifts considered per generator when building sections.
    pub lift_limit: usize,
}

impl Default for GlobalizeConfig {
    fn default() -> Self {
        GlobalizeConfig { budget: 12, exhaustive_depth: 3, node_limit: 20_000, lift_limit: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchPhase {
    Exhaustive,
    Closure,
}

#[derive(Clone, Debug)]
pub struct GlobalizeOutcome {
    pub certificate: GlobalizationCertificate,
    pub added: usize,
    pub phase: SearchPhase,
    pub candidates_tried: usize,
}

/// Restriction of a permutation of `fp` to the subset `k`, as images in
/// `k` order.
fn restrict(p: &Permutation, k: &[usize]) -> Vec<usize> {
    k.iter().map(|&x| p.apply(x)).collect()
}

/// Closure of `gens` under composition, or `None` if it outgrows `cap`.
fn closure(degree: usize, gens: &[Permutation], cap: usize) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let c = g.compose(&p);
            if seen.insert(c.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(c);
            }
        }
    }
    Some(seen.into_iter().collect())
}

/// A homomorphic section `ISO(K) → ISO(F′)`: lifts of a generating set
/// whose generated group restricts bijectively onto `ISO(K)`.
fn section(
    fp: &FiniteMetricSpace,
    k: &[usize],
    group: &[Vec<usize>],
    lift_limit: usize,
) -> Option<HashMap<Vec<usize>, Permutation>> {
    let order = group.len();
    let degree = fp.len();
    if order == 1 {
        return Some(HashMap::from([(group[0].clone(), Permutation::identity(degree))]));
    }
    // generators, each enlarging the subgroup generated so far;
    // generated[i] is the order of the subgroup spanned by the first i
    let kn = k.len();
    let pos: HashMap<usize, usize> = k.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let local: Vec<Permutation> =
        group.iter().map(|g| Permutation::from_images_unchecked(g.iter().map(|y| pos[y]).collect())).collect();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut gen_local: Vec<Permutation> = Vec::new();
    let mut sub: HashSet<Permutation> = HashSet::from([Permutation::identity(kn)]);
    let mut generated = vec![1];
    for (g, img) in local.iter().zip(group) {
        if sub.len() == order {
            break;
        }
        if sub.contains(g) {
            continue;
        }
        gens.push(img.clone());
        gen_local.push(g.clone());
        sub = closure(kn, &gen_local, order)?.into_iter().collect();
        generated.push(sub.len());
    }
    let candidates: Vec<Vec<Permutation>> = gens
        .iter()
        .map(|g| {
            let mut map = vec![None; degree];
            for (i, &x) in k.iter().enumerate() {
                map[x] = Some(g[i]);
            }
            isometry_extensions(fp, &map, lift_limit)
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut chosen: Vec<Permutation> = Vec::new();
    fn pick(
        i: usize,
        candidates: &[Vec<Permutation>],
        generated: &[usize],
        chosen: &mut Vec<Permutation>,
        degree: usize,
    ) -> Option<Vec<Permutation>> {
        if i == candidates.len() {
            return closure(degree, chosen, generated[i]);
        }
        for c in &candidates[i] {
            chosen.push(c.clone());
            // the lifted group must be no larger than the group it covers
            if closure(degree, chosen, generated[i + 1]).is_some() {
                if let Some(g) = pick(i + 1, candidates, generated, chosen, degree) {
                    return Some(g);
                }
            }
            chosen.pop();
        }
        None
    }
    let lifted = pick(0, &candidates, &generated, &mut chosen, degree)?;
    if lifted.len() != order {
        return None;
    }
    let mut sigma = HashMap::new();
    for p in lifted {
        sigma.insert(restrict(&p, k), p);
    }
    (sigma.len() == order).then_some(sigma)
}

/// Tries to build a certificate for `base` inside `candidate`, whose first
/// `base.len()` points are the base.
pub fn certify(base: &FiniteMetricSpace, candidate: &FiniteMetricSpace, lift_limit: usize) -> Option<GlobalizationCertificate> {
    let n = base.len();
    let pis = partial_isometries(base);
    let lift = |h: &PartialIsometry| {
        let mut map = h.map().to_vec();
        map.resize(candidate.len(), None);
        map
    };
    // larger domains first: their restrictions extend whenever they do
    let mut order: Vec<usize> = (0..pis.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(pis[i].len()));
    let mut ext: Vec<Option<Permutation>> = vec![None; pis.len()];
    for i in order {
        let h = &pis[i];
        if h.domain() == h.range() {
            continue;
        }
        ext[i] = Some(first_extension(candidate, &lift(h))?);
    }
    let mut by_subset: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (i, h) in pis.iter().enumerate() {
        if h.domain() == h.range() {
            by_subset.entry(h.domain()).or_default().push(i);
        }
    }
    let mut subsets: Vec<&Vec<usize>> = by_subset.keys().collect();
    subsets.sort_by_key(|k| (std::cmp::Reverse(k.len()), (*k).clone()));
    for k in subsets {
        let members = &by_subset[k];
        let group: Vec<Vec<usize>> = members.iter().map(|&i| pis[i].images()).collect();
        let sigma = section(candidate, k, &group, lift_limit)?;
        for &i in members {
            ext[i] = Some(sigma[&pis[i].images()].clone());
        }
    }
    let table = pis
        .into_iter()
        .zip(ext)
        .map(|(partial, e)| TableEntry { partial, extension: e.expect("every row filled") })
        .collect();
    Some(GlobalizationCertificate {
        base: base.clone(),
        extension: candidate.clone(),
        embedding: (0..n).collect(),
        table,
    })
}

struct Exhaustive<'a> {
    base: &'a FiniteMetricSpace,
    values: Vec<Rational>,
    lift_limit: usize,
    nodes: usize,
    node_limit: usize,
}

impl Exhaustive<'_> {
    /// Tries every way of adding `left` more points with distances in
    /// `values`, new points' base profiles in non-decreasing order.
    fn search(&mut self, cur: &mut FiniteMetricSpace, left: usize, floor: &[Rational]) -> Option<GlobalizationCertificate> {
        if left == 0 {
            self.nodes += 1;
            return certify(self.base, cur, self.lift_limit);
        }
        let m = cur.len();
        let mut profile = vec![self.values[0].clone(); m];
        let k = self.values.len();
        let total = k.checked_pow(m as u32).unwrap_or(usize::MAX);
        for code in 0..total {
            if self.nodes >= self.node_limit {
                return None;
            }
            let mut c = code;
            for slot in profile.iter_mut().rev() {
                *slot = self.values[c % k].clone();
                c /= k;
            }
            if profile[..self.base.len()] < *floor || !is_admissible(cur, &profile).unwrap_or(false) {
                continue;
            }
            let label = cur.fresh_label(&format!("g{m}"));
            let mut next = cur.clone();
            next.push_point_unchecked(label, &profile);
            let head = profile[..self.base.len()].to_vec();
            if let Some(cert) = self.search(&mut next, left - 1, &head) {
                return Some(cert);
            }
        }
        None
    }
}

fn closure_phase(base: &FiniteMetricSpace, config: &GlobalizeConfig) -> Result<(GlobalizationCertificate, usize)> {
    let n = base.len();
    let pis = partial_isometries(base);
    let group = isometry_group(base);
    let mut cand = base.clone();
    let out_of_budget = |cand: FiniteMetricSpace, detail: &str| {
        Error::BudgetExceeded(BudgetExceeded { budget: config.budget, space: Box::new(cand), detail: detail.to_string() })
    };
    let mut rounds = 0;
    loop {
        if let Some(cert) = certify(base, &cand, config.lift_limit) {
            return Ok((cert, cand.len() - n));
        }
        rounds += 1;
        if rounds > 4 * (config.budget + 1) {
            return Err(out_of_budget(cand, "closure heuristic made no progress"));
        }
        let left = config.budget - (cand.len() - n);
        let missing = pis.iter().find(|h| {
            let mut map = h.map().to_vec();
            map.resize(cand.len(), None);
            first_extension(&cand, &map).is_none()
        });
        if let Some(h) = missing {
            let mut map = h.map().to_vec();
            map.resize(cand.len(), None);
            let lifted = PartialIsometry::from_map_unchecked(map);
            match extend_partial_to_global(&cand, &lifted, left) {
                Ok(e) => cand = e.space,
                Err(Error::BudgetExceeded(b)) => return Err(out_of_budget(*b.space, &format!("{h} does not extend"))),
                Err(e) => return Err(e),
            }
        } else {
            // every map extends but no equivariant table was found: make
            // ISO(F) act on the candidate and retry
            let e = equivariant_embed_at(base, &cand, &(0..n).collect::<Vec<_>>(), &group, left)?;
            if !e.complete || e.space.len() == cand.len() {
                return Err(out_of_budget(e.space, "no equivariant extension table within budget"));
            }
            // keep the base as prefix, then the other points in absorbed order
            cand = e.space;
        }
    }
}

/// Searches for a finite superspace in which every partial isometry of
/// `base` extends to a global isometry, equivariantly on every `ISO(K)`.
pub fn globalize(base: &FiniteMetricSpace, config: &GlobalizeConfig) -> Result<GlobalizeOutcome> {
    let mut values = base.distance_set();
    values.dedup();
    let mut tried = 0;
    if let Some(cert) = certify(base, base, config.lift_limit) {
        return Ok(GlobalizeOutcome { certificate: cert, added: 0, phase: SearchPhase::Exhaustive, candidates_tried: 1 });
    }
    tried += 1;
    if !values.is_empty() {
        for depth in 1..=config.exhaustive_depth.min(config.budget) {
            let mut ex = Exhaustive { base, values: values.clone(), lift_limit: config.lift_limit, nodes: 0, node_limit: config.node_limit };
            let found = ex.search(&mut base.clone(), depth, &[]);
            tried += ex.nodes;
            if let Some(cert) = found {
                return Ok(GlobalizeOutcome { certificate: cert, added: depth, phase: SearchPhase::Exhaustive, candidates_tried: tried });
            }
        }
    }
    let (cert, added) = closure_phase(base, config)?;
    Ok(GlobalizeOutcome { certificate: cert, added, phase: SearchPhase::Closure, candidates_tried: tried })
}

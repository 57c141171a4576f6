// SPDX-License-Identifier: Apache-2.0

//! Equivariant one-point extensions: glue the whole `G`-orbit of an
//! admissible vector so that `G` keeps acting by isometries.

use std::collections::HashSet;

use serde::Serialize;

use crate::admissibility::{check_admissible, min_plus_extension, AdmissibleVector};
use crate::error::{Error, Result};
use crate::isometry::{act_on_vector, cosets, isometry_group, stabilizer, GroupAction, Permutation};
use crate::metric::FiniteMetricSpace;
use crate::rational::{chebyshev, Rational};

/// Both sides of `max_f |a_f - a_{gf}| <= min_f (a_f + a_{gf})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeyInequality {
    pub holds: bool,
    pub max_side: Rational,
    pub min_side: Rational,
    pub max_at: usize,
    pub min_at: usize,
}

pub fn key_inequality_check(space: &FiniteMetricSpace, values: &[Rational], g: &Permutation) -> Result<KeyInequality> {
    if values.len() != space.len() || g.degree() != space.len() {
        return Err(Error::Shape(format!(
            "vector of length {} and permutation of degree {} over {} points",
            values.len(),
            g.degree(),
            space.len()
        )));
    }
    if space.is_empty() {
        return Ok(KeyInequality {
            holds: true,
            max_side: Rational::zero(),
            min_side: Rational::zero(),
            max_at: 0,
            min_at: 0,
        });
    }
    let diffs: Vec<Rational> = (0..values.len()).map(|f| values[f].abs_diff(&values[g.apply(f)])).collect();
    let sums: Vec<Rational> = (0..values.len()).map(|f| &values[f] + &values[g.apply(f)]).collect();
    let max_at = (0..diffs.len()).fold(0, |best, f| if diffs[f] > diffs[best] { f } else { best });
    let min_at = (0..sums.len()).fold(0, |best, f| if sums[f] < sums[best] { f } else { best });
    Ok(KeyInequality {
        holds: diffs[max_at] <= sums[min_at],
        max_side: diffs[max_at].clone(),
        min_side: sums[min_at].clone(),
        max_at,
        min_at,
    })
}

#[derive(Clone, Debug)]
pub struct OrbitExtension {
    pub base: FiniteMetricSpace,
    pub group: GroupAction,
    pub seed_vector: AdmissibleVector,
    pub stabilizer: GroupAction,
    /// Coset representatives; new point `k` corresponds to `coset_reps[k]`.
    pub coset_reps: Vec<Permutation>,
    /// `base` followed by the new points `x_0, …, x_k`.
    pub extension: FiniteMetricSpace,
    /// Element `i` restricts to `group.element(i)` on the base.
    pub extended_action: GroupAction,
}

impl OrbitExtension {
    pub fn new_point(&self, k: usize) -> usize {
        self.base.len() + k
    }

    pub fn new_points(&self) -> std::ops::Range<usize> {
        self.base.len()..self.extension.len()
    }

    /// True when the extended action has the same composition table as the
    /// original group, element for element.
    pub fn table_matches(&self) -> bool {
        let k = self.group.order();
        self.extended_action.order() == k
            && (0..k).all(|i| (0..k).all(|j| self.group.product(i, j) == self.extended_action.product(i, j)))
    }

    /// True when the extended action restricts to the original action on
    /// the base.
    pub fn restricts_to_group(&self) -> bool {
        let n = self.base.len();
        self.extended_action.elements().iter().zip(self.group.elements()).all(|(e, g)| e.restrict_prefix(n).as_ref() == Some(g))
    }
}

/// Extends `space` by the orbit of `values` under `group`.
///
/// The new point for representative `g` has distance `a_{g⁻¹f}` to `f`;
/// two new points are at the Chebyshev distance of their profiles.
/// `labels`, if given, names the new points in coset order; otherwise
/// they are called `x0, x1, …`.
pub fn orbit_extension(
    space: &FiniteMetricSpace,
    group: &GroupAction,
    values: &[Rational],
    labels: Option<&[String]>,
) -> Result<OrbitExtension> {
    if values.len() != space.len() {
        return Err(Error::Shape(format!("vector of length {} over {} points", values.len(), space.len())));
    }
    if group.degree() != space.len() || !group.acts_isometrically_on(space) {
        return Err(Error::NotIsometryGroup(format!("group of degree {} does not act isometrically", group.degree())));
    }
    if let Some(index) = values.iter().position(Rational::is_zero) {
        return Err(Error::DegenerateVector { index });
    }
    if let Some(v) = check_admissible(space, values)? {
        return Err(Error::NotAdmissible(v));
    }
    let stab = stabilizer(group, values)?;
    let reps = cosets(group, &stab)?;
    if let Some(labels) = labels {
        if labels.len() != reps.len() {
            return Err(Error::Shape(format!("{} labels for {} new points", labels.len(), reps.len())));
        }
        let mut seen: HashSet<&str> = space.labels().iter().map(String::as_str).collect();
        if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }

    let profiles: Vec<Vec<Rational>> = reps.iter().map(|g| act_on_vector(g, values)).collect();
    let mut extension = space.clone();
    for (k, p) in profiles.iter().enumerate() {
        let mut row = p.clone();
        row.extend(profiles[..k].iter().map(|q| chebyshev(p, q)));
        let label = match labels {
            Some(ls) => ls[k].clone(),
            None => extension.fresh_label(&format!("x{k}")),
        };
        extension.push_point_unchecked(label, &row);
    }

    let mut coset_of = vec![usize::MAX; group.order()];
    for (c, r) in reps.iter().enumerate() {
        for h in stab.elements() {
            coset_of[group.index_of(&r.compose(h)).expect("closed")] = c;
        }
    }
    let n = space.len();
    let extended: Vec<Permutation> = group
        .elements()
        .iter()
        .map(|g| {
            let mut images = g.images().to_vec();
            images.extend(reps.iter().map(|r| n + coset_of[group.index_of(&g.compose(r)).expect("closed")]));
            Permutation::from_images_unchecked(images)
        })
        .collect();
    let extended_action = GroupAction::on_space(&extension, extended)?;

    Ok(OrbitExtension {
        base: space.clone(),
        group: group.clone(),
        seed_vector: AdmissibleVector::new(space, values.to_vec())?,
        stabilizer: stab,
        coset_reps: reps,
        extension,
        extended_action,
    })
}

/// Lexicographically first isometric embedding of `space` into `host`.
pub fn isometric_embedding(space: &FiniteMetricSpace, host: &FiniteMetricSpace) -> Option<Vec<usize>> {
    fn go(space: &FiniteMetricSpace, host: &FiniteMetricSpace, img: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = img.len();
        if i == space.len() {
            return true;
        }
        for c in 0..host.len() {
            if used[c] || !(0..i).all(|j| space.dist(i, j) == host.dist(c, img[j])) {
                continue;
            }
            used[c] = true;
            img.push(c);
            if go(space, host, img, used) {
                return true;
            }
            img.pop();
            used[c] = false;
        }
        false
    }
    let mut img = Vec::with_capacity(space.len());
    let mut used = vec![false; host.len()];
    go(space, host, &mut img, &mut used).then_some(img)
}

#[derive(Clone, Debug)]
pub struct EquivariantEmbedding {
    /// Image of `F`, then host points and synthetic orbit points in the
    /// order they were absorbed.
    pub space: FiniteMetricSpace,
    /// `F → space`; always `0..|F|`.
    pub embedding: Vec<usize>,
    /// Position in `space` of each absorbed host point.
    pub host_map: Vec<Option<usize>>,
    /// `ISO(F)` acting on `space`; element `i` restricts to element `i` of
    /// `ISO(F)` on the embedded copy.
    pub action: GroupAction,
    pub synthetic: usize,
    /// False when the budget stopped the construction before every host
    /// point was absorbed.
    pub complete: bool,
}

/// Embeds `space` into `host` and grows the host by orbits until the
/// isometry group of `space` acts on all of it.
pub fn equivariant_embed(space: &FiniteMetricSpace, host: &FiniteMetricSpace, budget: usize) -> Result<EquivariantEmbedding> {
    let embedding = isometric_embedding(space, host).ok_or(Error::NotEmbeddable)?;
    equivariant_embed_at(space, host, &embedding, &isometry_group(space), budget)
}

/// As [`equivariant_embed`] with a given embedding and a given group of
/// isometries of `space`.
pub fn equivariant_embed_at(
    space: &FiniteMetricSpace,
    host: &FiniteMetricSpace,
    embedding: &[usize],
    group: &GroupAction,
    budget: usize,
) -> Result<EquivariantEmbedding> {
    if embedding.len() != space.len() {
        return Err(Error::Shape(format!("embedding of length {} for {} points", embedding.len(), space.len())));
    }
    if embedding.iter().any(|&e| e >= host.len()) {
        return Err(Error::Index("embedding leaves the host".into()));
    }
    let img: HashSet<usize> = embedding.iter().copied().collect();
    let isometric = (0..space.len()).all(|i| (0..i).all(|j| space.dist(i, j) == host.dist(embedding[i], embedding[j])));
    if img.len() != embedding.len() || !isometric {
        return Err(Error::NotEmbeddable);
    }

    let mut labels: Vec<String> = embedding.iter().map(|&e| host.label(e).to_string()).collect();
    let mut current = {
        let rows = (0..space.len()).map(|i| space.row(i).to_vec()).collect();
        FiniteMetricSpace::new(std::mem::take(&mut labels), rows)?
    };
    let mut action = group.clone();
    let mut host_map: Vec<Option<usize>> = vec![None; host.len()];
    for (i, &e) in embedding.iter().enumerate() {
        host_map[e] = Some(i);
    }
    let mut synthetic = 0;
    for x in 0..host.len() {
        if host_map[x].is_some() {
            continue;
        }
        let known: Vec<usize> = (0..host.len()).filter(|&h| host_map[h].is_some()).collect();
        let profile = if known.is_empty() {
            // only reachable for an empty space: a single new base point
            Vec::new()
        } else {
            let positions: Vec<usize> = known.iter().map(|&h| host_map[h].unwrap()).collect();
            let values: Vec<Rational> = known.iter().map(|&h| host.dist(x, h).clone()).collect();
            min_plus_extension(&current, &positions, &values)
        };
        let stab = stabilizer(&action, &profile)?;
        let new_points = action.order() / stab.order();
        if synthetic + new_points - 1 > budget {
            return Ok(EquivariantEmbedding {
                space: current,
                embedding: (0..space.len()).collect(),
                host_map,
                action,
                synthetic,
                complete: false,
            });
        }
        let mut names = vec![host.label(x).to_string()];
        let mut taken: HashSet<String> = current.labels().iter().chain(host.labels()).cloned().collect();
        for k in 1..new_points {
            let mut name = format!("s{}", synthetic + k);
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            names.push(name);
        }
        let ext = orbit_extension(&current, &action, &profile, Some(&names))?;
        host_map[x] = Some(current.len());
        synthetic += new_points - 1;
        current = ext.extension;
        action = ext.extended_action;
    }
    Ok(EquivariantEmbedding {
        space: current,
        embedding: (0..space.len()).collect(),
        host_map,
        action,
        synthetic,
        complete: true,
    })
}

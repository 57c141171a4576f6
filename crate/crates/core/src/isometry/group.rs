// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::isometry::perm::Permutation;
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

/// A finite permutation group given by its full element list, sorted
/// lexicographically, together with its composition table.
#[derive(Clone, Debug)]
pub struct GroupAction {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    /// `table[i * order + j]` is the index of `elements[i] ∘ elements[j]`.
    table: Vec<u32>,
}

impl PartialEq for GroupAction {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for GroupAction {}

impl GroupAction {
    pub fn trivial(degree: usize) -> Self {
        Self::from_sorted_closed(degree, vec![Permutation::identity(degree)])
    }

    /// Checks that `elements` is a group and builds its table.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Result<Self> {
        if let Some(p) = elements.iter().find(|p| p.degree() != degree) {
            return Err(Error::NotAGroup(format!("{p} does not act on {degree} points")));
        }
        elements.sort();
        elements.dedup();
        if elements.binary_search(&Permutation::identity(degree)).is_err() {
            return Err(Error::NotAGroup("identity missing".into()));
        }
        let index: HashMap<Permutation, usize> =
            elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let k = elements.len();
        let mut table = Vec::with_capacity(k * k);
        for a in &elements {
            for b in &elements {
                let c = a.compose(b);
                match index.get(&c) {
                    Some(&i) => table.push(i as u32),
                    None => return Err(Error::NotAGroup(format!("{a} ∘ {b} = {c} is missing"))),
                }
            }
        }
        // A finite set closed under composition and containing the identity
        // is a group, so inverses are present.
        Ok(GroupAction { degree, elements, index, table })
    }

    /// Like [`GroupAction::from_elements`], also requiring every element to
    /// be an isometry of `space`.
    pub fn on_space(space: &FiniteMetricSpace, elements: Vec<Permutation>) -> Result<Self> {
        if let Some(p) = elements.iter().find(|p| p.degree() != space.len()) {
            return Err(Error::NotIsometryGroup(format!("{p} does not act on {} points", space.len())));
        }
        if let Some(p) = elements.iter().find(|p| !space.preserves_distances(p.images())) {
            return Err(Error::NotIsometryGroup(format!("{p} does not preserve distances")));
        }
        Self::from_elements(space.len(), elements).map_err(|e| Error::NotIsometryGroup(e.to_string()))
    }

    /// Closure of `generators` under composition, capped at `limit` elements.
    pub fn generated_by(degree: usize, generators: &[Permutation], limit: usize) -> Result<Self> {
        let mut seen: HashMap<Permutation, ()> = HashMap::new();
        let id = Permutation::identity(degree);
        let mut queue = VecDeque::from([id.clone()]);
        seen.insert(id, ());
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let c = g.compose(&p);
                if !seen.contains_key(&c) {
                    if seen.len() >= limit {
                        return Err(Error::Parameter(format!("generated group exceeds {limit} elements")));
                    }
                    seen.insert(c.clone(), ());
                    queue.push_back(c);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_keys().collect();
        elements.sort();
        Ok(Self::from_sorted_closed(degree, elements))
    }

    fn from_sorted_closed(degree: usize, elements: Vec<Permutation>) -> Self {
        Self::from_elements(degree, elements).expect("closed by construction")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    /// Index of `elements[i] ∘ elements[j]`.
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order() + j] as usize
    }

    pub fn identity_index(&self) -> usize {
        // identity is the lexicographically smallest permutation
        0
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.index[&self.elements[i].inverse()]
    }

    /// Composition table as rows of element indices.
    pub fn table(&self) -> Vec<Vec<usize>> {
        let k = self.order();
        (0..k).map(|i| (0..k).map(|j| self.product(i, j)).collect()).collect()
    }

    pub fn is_subgroup_of(&self, other: &GroupAction) -> bool {
        self.degree == other.degree && self.elements.iter().all(|p| other.contains(p))
    }

    pub fn acts_isometrically_on(&self, space: &FiniteMetricSpace) -> bool {
        self.degree == space.len() && self.elements.iter().all(|p| space.preserves_distances(p.images()))
    }

    /// Re-verifies closure, identity and inverses from the element list.
    pub fn verify_axioms(&self) -> bool {
        let id_ok = self.elements.first().is_some_and(Permutation::is_identity);
        let closed = self.elements.iter().all(|a| self.elements.iter().all(|b| self.contains(&a.compose(b))));
        let inverses = self.elements.iter().all(|a| self.contains(&a.inverse()));
        id_ok && closed && inverses
    }
}

fn sorted_profile(space: &FiniteMetricSpace, i: usize) -> Vec<Rational> {
    let mut row = space.row(i).to_vec();
    row.sort();
    row
}

/// Every distance-preserving permutation of `space`.
pub fn isometry_group(space: &FiniteMetricSpace) -> GroupAction {
    isometry_group_with(Execution::default(), space)
}

pub fn isometry_group_with(exec: Execution, space: &FiniteMetricSpace) -> GroupAction {
    let n = space.len();
    if n == 0 {
        return GroupAction::trivial(0);
    }
    let profiles: Vec<Vec<Rational>> = (0..n).map(|i| sorted_profile(space, i)).collect();
    let compatible: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| profiles[i] == profiles[j]).collect()).collect();
    let elements = exec.flat_map(&compatible[0], |&first| {
        let mut out = Vec::new();
        let mut images = vec![first];
        let mut used = vec![false; n];
        used[first] = true;
        search_isometries(space, &compatible, &mut images, &mut used, &mut out);
        out
    });
    GroupAction::from_sorted_closed(n, elements)
}

fn search_isometries(
    space: &FiniteMetricSpace,
    compatible: &[Vec<usize>],
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    let i = images.len();
    if i == space.len() {
        out.push(Permutation::from_images_unchecked(images.clone()));
        return;
    }
    for &c in &compatible[i] {
        if used[c] || !(0..i).all(|j| space.dist(i, j) == space.dist(c, images[j])) {
            continue;
        }
        used[c] = true;
        images.push(c);
        search_isometries(space, compatible, images, used, out);
        images.pop();
        used[c] = false;
    }
}

/// Elements `h` with `values[h(f)] = values[f]` for every point `f`.
pub fn stabilizer(group: &GroupAction, values: &[Rational]) -> Result<GroupAction> {
    if values.len() != group.degree() {
        return Err(Error::Shape(format!("vector of length {} for a group on {} points", values.len(), group.degree())));
    }
    let elements = group
        .elements()
        .iter()
        .filter(|h| (0..values.len()).all(|f| values[h.apply(f)] == values[f]))
        .cloned()
        .collect();
    Ok(GroupAction::from_sorted_closed(group.degree(), elements))
}

/// Transversal of the cosets `g·H`, each represented by its smallest
/// element, listed in increasing order.
pub fn cosets(group: &GroupAction, subgroup: &GroupAction) -> Result<Vec<Permutation>> {
    if !subgroup.is_subgroup_of(group) {
        return Err(Error::NotSubgroup);
    }
    let mut covered = vec![false; group.order()];
    let mut reps = Vec::new();
    for (i, g) in group.elements().iter().enumerate() {
        if covered[i] {
            continue;
        }
        reps.push(g.clone());
        for h in subgroup.elements() {
            covered[group.index_of(&g.compose(h)).expect("subgroup of group")] = true;
        }
    }
    Ok(reps)
}

/// The orbit `{ (a_{g⁻¹ f})_f : g ∈ G }` of a vector.
pub fn orbit_of(group: &GroupAction, values: &[Rational]) -> Vec<Vec<Rational>> {
    let mut orbit: Vec<Vec<Rational>> = group.elements().iter().map(|g| act_on_vector(g, values)).collect();
    orbit.sort();
    orbit.dedup();
    orbit
}

/// `(g·a)_f = a_{g⁻¹ f}`, the profile of the image of a point with profile `a`.
pub fn act_on_vector(g: &Permutation, values: &[Rational]) -> Vec<Rational> {
    let inv = g.inverse();
    (0..values.len()).map(|f| values[inv.apply(f)].clone()).collect()
}

// SPDX-License-Identifier: Apache-2.0

use crate::admissibility::{is_admissible, min_plus_extension};
use crate::error::{BudgetExceeded, Error, Result};
use crate::isometry::{PartialIsometry, Permutation};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

/// Total isometries of `space` agreeing with `map` where it is defined,
/// in lexicographic order, at most `limit` of them.
pub fn isometry_extensions(space: &FiniteMetricSpace, map: &[Option<usize>], limit: usize) -> Vec<Permutation> {
    let n = space.len();
    let mut out = Vec::new();
    if map.len() != n || limit == 0 {
        return out;
    }
    let mut images: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for y in map.iter().flatten() {
        if std::mem::replace(&mut used[*y], true) {
            return out;
        }
    }
    extend_rec(space, map, &mut images, &mut used, &mut out, limit);
    out
}

fn extend_rec(
    space: &FiniteMetricSpace,
    map: &[Option<usize>],
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
    limit: usize,
) {
    let i = images.len();
    if i == space.len() {
        out.push(Permutation::from_images_unchecked(images.clone()));
        return;
    }
    let fits = |c: usize, images: &[usize]| (0..i).all(|j| space.dist(i, j) == space.dist(c, images[j]));
    if let Some(c) = map[i] {
        if fits(c, images) {
            images.push(c);
            extend_rec(space, map, images, used, out, limit);
            images.pop();
        }
        return;
    }
    for c in 0..space.len() {
        if out.len() >= limit {
            return;
        }
        if used[c] || !fits(c, images) {
            continue;
        }
        used[c] = true;
        images.push(c);
        extend_rec(space, map, images, used, out, limit);
        images.pop();
        used[c] = false;
    }
}

/// Lexicographically first total isometry extending `map`.
pub fn first_extension(space: &FiniteMetricSpace, map: &[Option<usize>]) -> Option<Permutation> {
    isometry_extensions(space, map, 1).pop()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalExtension {
    /// The input space followed by the added points.
    pub space: FiniteMetricSpace,
    pub isometry: Permutation,
    pub added: usize,
}

/// Search nodes visited by [`extend_partial_to_global`] before it gives up.
pub const EXTENSION_NODE_LIMIT: usize = 20_000;

/// Grows `space` until the partial isometry `p` extends to a global
/// isometry, adding at most `budget` points.
///
/// Each step first looks for a total extension of the current map. If
/// there is none, some point outside the domain is sent to an existing
/// point with the right distances; or some open point is sent to a
/// new point `z` that the map sends back to a point outside its range; or
/// the lowest open point `s` is sent to a new point with the transported profile
/// `w ↦ min_{a ∈ dom} d(s, a) + d(p(a), w)`. These choices are explored
/// depth first in that order.
pub fn extend_partial_to_global(space: &FiniteMetricSpace, p: &PartialIsometry, budget: usize) -> Result<GlobalExtension> {
    if p.degree() != space.len() {
        return Err(Error::SpaceMismatch { left: p.degree(), right: space.len() });
    }
    if !p.preserves(space) {
        return Err(Error::Parameter(format!("{p} is not a partial isometry of the space")));
    }
    let mut search = ExtensionSearch { budget, nodes: 0, frontier: None };
    let mut cur = space.clone();
    let mut map: Vec<Option<usize>> = p.map().to_vec();
    if let Some(found) = search.run(&mut cur, &mut map, 0)? {
        return Ok(found);
    }
    let reached = search.frontier.unwrap_or(cur);
    Err(Error::BudgetExceeded(BudgetExceeded {
        budget,
        detail: format!("partial isometry {p} not yet global after {} added points", reached.len() - space.len()),
        space: Box::new(reached),
    }))
}

struct ExtensionSearch {
    budget: usize,
    nodes: usize,
    /// First state that ran out of points to add.
    frontier: Option<FiniteMetricSpace>,
}

impl ExtensionSearch {
    fn run(&mut self, cur: &mut FiniteMetricSpace, map: &mut Vec<Option<usize>>, added: usize) -> Result<Option<GlobalExtension>> {
        if let Some(iso) = first_extension(cur, map) {
            return Ok(Some(GlobalExtension { space: cur.clone(), isometry: iso, added }));
        }
        self.nodes += 1;
        if self.nodes > EXTENSION_NODE_LIMIT {
            return Ok(None);
        }
        let s = map.iter().position(Option::is_none).expect("a total partial isometry is an isometry");
        let dom: Vec<(usize, usize)> = map.iter().enumerate().filter_map(|(a, y)| y.map(|y| (a, y))).collect();
        let mut in_range = vec![false; cur.len()];
        for &(_, y) in &dom {
            in_range[y] = true;
        }
        let targets: Vec<usize> = (0..cur.len()).filter(|&x| !in_range[x]).collect();
        let open: Vec<usize> = (0..cur.len()).filter(|&x| map[x].is_none()).collect();
        for &o in &open {
            for &z in &targets {
                if dom.iter().all(|&(a, pa)| cur.dist(pa, z) == cur.dist(a, o)) {
                    map[o] = Some(z);
                    let found = self.run(cur, map, added)?;
                    map[o] = None;
                    if found.is_some() {
                        return Ok(found);
                    }
                }
            }
        }
        if added == self.budget {
            if self.frontier.is_none() {
                self.frontier = Some(cur.clone());
            }
            return Ok(None);
        }
        for &o in &open {
            for &a0 in &targets {
                if let Some(profile) = closing_profile(cur, &dom, o, a0) {
                    let found = self.with_point(cur, map, added, &profile, o, Some(a0))?;
                    if found.is_some() {
                        return Ok(found);
                    }
                }
            }
        }
        let profile: Vec<Rational> = (0..cur.len())
            .map(|w| dom.iter().map(|&(a, pa)| cur.dist(s, a) + cur.dist(pa, w)).min().expect("nonempty domain"))
            .collect();
        assert!(is_admissible(cur, &profile)?, "transported profile must be admissible");
        self.with_point(cur, map, added, &profile, s, None)
    }

    /// Adds a point `z` with `profile`, maps `s -> z` and `z -> image`, and
    /// continues the search.
    fn with_point(
        &mut self,
        cur: &mut FiniteMetricSpace,
        map: &mut [Option<usize>],
        added: usize,
        profile: &[Rational],
        s: usize,
        image: Option<usize>,
    ) -> Result<Option<GlobalExtension>> {
        let mut next = cur.clone();
        let label = next.fresh_label(&format!("e{}", next.len()));
        next.push_point_unchecked(label, profile);
        let mut next_map = map.to_vec();
        next_map.push(image);
        next_map[s] = Some(next.len() - 1);
        self.run(&mut next, &mut next_map, added + 1)
    }
}

/// Profile of a new point `z` such that the map extended by `s -> z` and
/// `z -> a0` is still a partial isometry, if one exists.
fn closing_profile(space: &FiniteMetricSpace, dom: &[(usize, usize)], s: usize, a0: usize) -> Option<Vec<Rational>> {
    let n = space.len();
    let mut known: Vec<Option<Rational>> = vec![None; n];
    let set = |w: usize, v: Rational, known: &mut Vec<Option<Rational>>| match &known[w] {
        Some(old) => *old == v,
        None => {
            known[w] = Some(v);
            true
        }
    };
    for &(a, pa) in dom {
        if !set(pa, space.dist(s, a).clone(), &mut known) || !set(a, space.dist(a0, pa).clone(), &mut known) {
            return None;
        }
    }
    // d(z, s) = d(z, a0) = t, possibly forced by the equations above
    let forced: Vec<Rational> = [s, a0].iter().filter_map(|&w| known[w].clone()).collect();
    let fixed: Vec<(usize, Rational)> = known
        .iter()
        .enumerate()
        .filter(|&(w, _)| w != s && w != a0)
        .filter_map(|(w, v)| v.clone().map(|v| (w, v)))
        .collect();
    let mut candidates: Vec<Rational> = if let Some(t) = forced.first() {
        if forced.iter().any(|f| f != t) {
            return None;
        }
        vec![t.clone()]
    } else {
        let mut c = Vec::new();
        for (w, v) in &fixed {
            for e in [s, a0] {
                let d = space.dist(e, *w);
                c.extend([v + d, v - d, d - v]);
            }
        }
        c.push(space.dist(s, a0) / &Rational::from_integer(2));
        c
    };
    candidates.retain(Rational::is_positive);
    candidates.sort();
    candidates.dedup();
    let mut idx: Vec<usize> = fixed.iter().map(|(w, _)| *w).collect();
    idx.push(s);
    if a0 != s {
        idx.push(a0);
    }
    idx.sort_unstable();
    let sub = space.restrict(&idx).ok()?;
    for t in candidates {
        let values: Vec<Rational> = idx.iter().map(|&w| if w == s || w == a0 { t.clone() } else { known[w].clone().unwrap() }).collect();
        if is_admissible(&sub, &values).ok()? {
            let profile = min_plus_extension(space, &idx, &values);
            debug_assert!(is_admissible(space, &profile).unwrap_or(false));
            return Some(profile);
        }
    }
    None
}

// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::error::{Error, Result};
use crate::isometry::perm::Permutation;
use crate::metric::FiniteMetricSpace;

/// A distance-preserving injection between two subsets of a space on
/// `degree` points. The empty map is the zero of the inverse semigroup.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialIsometry {
    degree: usize,
    map: Vec<Option<usize>>,
}

impl PartialIsometry {
    pub fn new(space: &FiniteMetricSpace, map: Vec<Option<usize>>) -> Result<Self> {
        if map.len() != space.len() {
            return Err(Error::Shape(format!("map of length {} on a {}-point space", map.len(), space.len())));
        }
        let p = PartialIsometry { degree: space.len(), map };
        let mut hit = vec![false; p.degree];
        for (_, y) in p.pairs() {
            if y >= p.degree {
                return Err(Error::Index(format!("image {y} out of range")));
            }
            if std::mem::replace(&mut hit[y], true) {
                return Err(Error::Parameter(format!("{p} is not injective")));
            }
        }
        if !p.preserves(space) {
            return Err(Error::Parameter(format!("{p} does not preserve distances")));
        }
        Ok(p)
    }

    pub fn from_pairs(space: &FiniteMetricSpace, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut map = vec![None; space.len()];
        for &(x, y) in pairs {
            let slot = map
                .get_mut(x)
                .ok_or_else(|| Error::Index(format!("domain point {x} out of range")))?;
            if slot.replace(y).is_some() {
                return Err(Error::Parameter(format!("point {x} mapped twice")));
            }
        }
        Self::new(space, map)
    }

    pub(crate) fn from_map_unchecked(map: Vec<Option<usize>>) -> Self {
        PartialIsometry { degree: map.len(), map }
    }

    pub fn empty(degree: usize) -> Self {
        PartialIsometry { degree, map: vec![None; degree] }
    }

    pub fn identity_on(degree: usize, domain: &[usize]) -> Self {
        let mut map = vec![None; degree];
        for &x in domain {
            map[x] = Some(x);
        }
        PartialIsometry { degree, map }
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        PartialIsometry { degree: p.degree(), map: p.images().iter().map(|&y| Some(y)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn map(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.map[x]
    }

    /// `(x, h(x))` for `x` in the domain, increasing in `x`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    pub fn domain(&self) -> Vec<usize> {
        self.pairs().map(|(x, _)| x).collect()
    }

    /// Images listed in domain order.
    pub fn images(&self) -> Vec<usize> {
        self.pairs().map(|(_, y)| y).collect()
    }

    pub fn range(&self) -> Vec<usize> {
        let mut r = self.images();
        r.sort_unstable();
        r
    }

    pub fn len(&self) -> usize {
        self.map.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_total(&self) -> bool {
        self.map.iter().all(Option::is_some)
    }

    pub fn is_idempotent(&self) -> bool {
        self.pairs().all(|(x, y)| x == y)
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        self.is_total()
            .then(|| Permutation::from_images_unchecked(self.map.iter().map(|y| y.unwrap()).collect()))
    }

    pub fn preserves(&self, space: &FiniteMetricSpace) -> bool {
        let pairs: Vec<(usize, usize)> = self.pairs().collect();
        pairs
            .iter()
            .enumerate()
            .all(|(i, &(x, hx))| pairs[..i].iter().all(|&(y, hy)| space.dist(x, y) == space.dist(hx, hy)))
    }
}

impl fmt::Display for PartialIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().map(|(x, y)| format!("{x}->{y}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for PartialIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `q ∘ p`, defined on `{x : p(x) ∈ dom(q)}`.
pub fn compose_partial(p: &PartialIsometry, q: &PartialIsometry) -> Result<PartialIsometry> {
    if p.degree != q.degree {
        return Err(Error::SpaceMismatch { left: p.degree, right: q.degree });
    }
    let map = p.map.iter().map(|y| y.and_then(|y| q.map[y])).collect();
    Ok(PartialIsometry { degree: p.degree, map })
}

pub fn inverse_partial(p: &PartialIsometry) -> PartialIsometry {
    let mut map = vec![None; p.degree];
    for (x, y) in p.pairs() {
        map[y] = Some(x);
    }
    PartialIsometry { degree: p.degree, map }
}

/// Every partial isometry of `space`, ordered by domain size, then domain
/// (lexicographically), then image tuple.
pub fn partial_isometries(space: &FiniteMetricSpace) -> Vec<PartialIsometry> {
    let n = space.len();
    let mut out = Vec::new();
    for k in 0..=n {
        let mut domain = Vec::with_capacity(k);
        subsets(n, k, 0, &mut domain, &mut |dom| {
            let mut images = Vec::with_capacity(k);
            let mut used = vec![false; n];
            injections(space, dom, &mut images, &mut used, &mut |imgs| {
                let mut map = vec![None; n];
                for (&x, &y) in dom.iter().zip(imgs) {
                    map[x] = Some(y);
                }
                out.push(PartialIsometry { degree: n, map });
            });
        });
    }
    out
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        visit(cur);
        return;
    }
    for x in start..n {
        if n - x < k - cur.len() {
            break;
        }
        cur.push(x);
        subsets(n, k, x + 1, cur, visit);
        cur.pop();
    }
}

fn injections(
    space: &FiniteMetricSpace,
    dom: &[usize],
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let i = images.len();
    if i == dom.len() {
        visit(images);
        return;
    }
    for c in 0..space.len() {
        if used[c] || !(0..i).all(|j| space.dist(dom[i], dom[j]) == space.dist(c, images[j])) {
            continue;
        }
        used[c] = true;
        images.push(c);
        injections(space, dom, images, used, visit);
        images.pop();
        used[c] = false;
    }
}

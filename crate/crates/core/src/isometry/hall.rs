// SPDX-License-Identifier: Apache-2.0

//! Left regular embeddings `Sₙ → S_{n!}`, the stages of Hall's universal
//! locally finite group.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry::perm::{all_permutations, Permutation};

/// Largest `n` whose stage is materialized in full.
pub const MAX_MATERIALIZED: usize = 6;
/// Largest degree whose left regular image can be computed element-wise.
pub const MAX_ELEMENTWISE: usize = 8;

#[derive(Clone, Debug)]
pub struct HallStage {
    n: usize,
    elements: Vec<Permutation>,
    images: Vec<Permutation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismCheck {
    pub n: usize,
    pub pairs_checked: usize,
    pub injective: bool,
    pub homomorphic: bool,
    /// First `(i, j)` with `image(e_i ∘ e_j) ≠ image(e_i) ∘ image(e_j)`.
    pub witness: Option<(usize, usize)>,
}

impl HomomorphismCheck {
    pub fn passed(&self) -> bool {
        self.injective && self.homomorphic
    }
}

/// Position of `p` in the lexicographic list of all permutations of its degree.
pub fn lex_rank(p: &Permutation) -> usize {
    let n = p.degree();
    let mut rank = 0;
    let mut fact = (1..n).product::<usize>();
    let mut unused: Vec<usize> = (0..n).collect();
    for (i, &x) in p.images().iter().enumerate() {
        let pos = unused.binary_search(&x).expect("permutation");
        rank += pos * fact;
        unused.remove(pos);
        if i + 1 < n {
            fact /= n - 1 - i;
        }
    }
    rank
}

fn regular_image(g: &Permutation, elements: &[Permutation]) -> Permutation {
    Permutation::from_images_unchecked(elements.iter().map(|e| lex_rank(&g.compose(e))).collect())
}

/// The permutation `eᵢ ↦ g ∘ eᵢ` of `S_n`, with elements indexed lexicographically.
pub fn left_regular_image(g: &Permutation) -> Result<Permutation> {
    if g.degree() > MAX_ELEMENTWISE {
        return Err(Error::Parameter(format!(
            "left regular image of a degree-{} permutation is out of reach (limit {MAX_ELEMENTWISE})",
            g.degree()
        )));
    }
    Ok(regular_image(g, &all_permutations(g.degree())))
}

pub fn hall_stage(n: usize) -> Result<HallStage> {
    if n < 3 {
        return Err(Error::Parameter(format!("Hall stages start at n = 3, got {n}")));
    }
    if n > MAX_MATERIALIZED {
        return Err(Error::Parameter(format!("stage {n} is too large to materialize (limit {MAX_MATERIALIZED})")));
    }
    let elements = all_permutations(n);
    let images = elements.iter().map(|g| regular_image(g, &elements)).collect();
    Ok(HallStage { n, elements, images })
}

impl HallStage {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target_degree(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn image(&self, g: &Permutation) -> Result<&Permutation> {
        if g.degree() != self.n {
            return Err(Error::SpaceMismatch { left: g.degree(), right: self.n });
        }
        Ok(&self.images[lex_rank(g)])
    }

    /// Exhaustive check over all ordered pairs of `Sₙ`.
    pub fn verify_homomorphism(&self) -> HomomorphismCheck {
        let k = self.elements.len();
        let mut witness = None;
        let mut pairs_checked = 0;
        'outer: for i in 0..k {
            for j in 0..k {
                pairs_checked += 1;
                let prod = lex_rank(&self.elements[i].compose(&self.elements[j]));
                if self.images[prod] != self.images[i].compose(&self.images[j]) {
                    witness = Some((i, j));
                    break 'outer;
                }
            }
        }
        let mut sorted = self.images.clone();
        sorted.sort();
        sorted.dedup();
        HomomorphismCheck {
            n: self.n,
            pairs_checked,
            injective: sorted.len() == k,
            homomorphic: witness.is_none(),
            witness,
        }
    }
}

/// Images of `g` under `depth` successive left regular embeddings.
///
/// Element `0` of the result is `g` itself.
pub fn hall_embed(g: &Permutation, depth: usize) -> Result<Vec<Permutation>> {
    if g.degree() < 3 {
        return Err(Error::Parameter(format!("Hall stages start at n = 3, got {}", g.degree())));
    }
    let mut chain = vec![g.clone()];
    for _ in 0..depth {
        let next = left_regular_image(chain.last().unwrap())?;
        chain.push(next);
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_matches_enumeration() {
        for n in 0..6 {
            for (i, p) in all_permutations(n).iter().enumerate() {
                assert_eq!(lex_rank(p), i);
            }
        }
    }

    #[test]
    fn stage_three_examples() {
        let st = hall_stage(3).unwrap();
        assert!(st.image(&Permutation::identity(3)).unwrap().is_identity());
        let swap = Permutation::parse("1,0,2").unwrap();
        let img = st.image(&swap).unwrap();
        assert_eq!(img.cycle_type(), vec![2, 2, 2]);
        for g in st.elements() {
            assert_eq!(st.image(g).unwrap().order(), g.order());
        }
        let check = st.verify_homomorphism();
        assert!(check.passed());
        assert_eq!(check.pairs_checked, 36);
    }

    #[test]
    fn stage_bounds() {
        assert!(matches!(hall_stage(2), Err(Error::Parameter(_))));
        assert!(matches!(hall_stage(0), Err(Error::Parameter(_))));
        assert!(hall_stage(7).is_err());
        let chain = hall_embed(&Permutation::parse("1,2,0").unwrap(), 2).unwrap();
        assert_eq!(chain[2].degree(), 720);
        assert_eq!(chain[2].order(), 3);
        assert!(hall_embed(&Permutation::parse("1,2,0").unwrap(), 3).is_err());
    }
}

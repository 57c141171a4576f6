// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `0..n`, stored as its image list.
///
/// Lexicographic order on image lists is the canonical element order used
/// throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Parameter(format!("{images:?} is not a permutation of 0..{n}")));
            }
        }
        Ok(Permutation(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation(images)
    }

    /// Parses `1,0,2` (0-based images).
    pub fn parse(s: &str) -> Result<Self> {
        let images = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad permutation entry {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Cycle lengths, including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut lens = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Order in the symmetric group (lcm of cycle lengths).
    pub fn order(&self) -> usize {
        use num_integer::Integer;
        self.cycle_type().into_iter().fold(1, |acc, l| acc.lcm(&l))
    }

    /// Restriction to the first `n` points, if they are mapped into themselves.
    pub fn restrict_prefix(&self, n: usize) -> Option<Permutation> {
        let head = &self.0[..n];
        head.iter().all(|&x| x < n).then(|| Permutation(head.to_vec()))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_first() {
        let a = Permutation::parse("1,2,0").unwrap();
        let b = Permutation::parse("1,0,2").unwrap();
        // (a∘b)(0) = a(b(0)) = a(1) = 2
        assert_eq!(a.compose(&b).apply(0), 2);
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn lexicographic_enumeration() {
        let perms = all_permutations(3);
        assert_eq!(perms.len(), 6);
        assert!(perms.windows(2).all(|w| w[0] < w[1]));
        assert!(perms[0].is_identity());
        assert_eq!(all_permutations(0).len(), 1);
    }

    #[test]
    fn order_and_cycles() {
        let p = Permutation::parse("1,0,3,4,2").unwrap();
        assert_eq!(p.cycle_type(), vec![3, 2]);
        assert_eq!(p.order(), 6);
        assert!(Permutation::parse("0,0").is_err());
        assert!(Permutation::parse("0,x").is_err());
    }
}

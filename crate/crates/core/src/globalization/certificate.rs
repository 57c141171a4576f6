// SPDX-License-Identifier: Apache-2.0

//! Globalization certificates and their verifier.
//!
//! The verifier re-derives everything it needs (partial isometries, the
//! groups `ISO(K)`) by brute force and shares no search code.

use std::collections::HashMap;

use serde::Serialize;

use crate::isometry::{PartialIsometry, Permutation};
use crate::metric::FiniteMetricSpace;

/// One table row: a partial isometry `h` of the base and the isometry
/// `T(h)` of the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub partial: PartialIsometry,
    pub extension: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalizationCertificate {
    pub base: FiniteMetricSpace,
    pub extension: FiniteMetricSpace,
    /// Index in `extension` of each base point.
    pub embedding: Vec<usize>,
    pub table: Vec<TableEntry>,
}

impl GlobalizationCertificate {
    pub fn lookup(&self, h: &PartialIsometry) -> Option<&Permutation> {
        self.table.iter().find(|e| e.partial == *h).map(|e| &e.extension)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateViolation {
    /// The embedding is not injective or changes the distance of `x`, `y`.
    Embedding { x: usize, y: usize },
    /// A table row whose map is not a partial isometry of the base.
    BadEntry { domain: Vec<usize>, image: Vec<usize> },
    DuplicateEntry { domain: Vec<usize>, image: Vec<usize> },
    MissingEntry { domain: Vec<usize>, image: Vec<usize> },
    /// `T(h)` is not an isometry of the extension.
    NotIsometry { domain: Vec<usize>, image: Vec<usize> },
    /// `I(h(x)) != T(h)(I(x))`.
    Extension { domain: Vec<usize>, image: Vec<usize>, x: usize },
    /// `T(g1 ∘ g2) != T(g1) ∘ T(g2)` for `g1, g2` in `ISO(K)`.
    Equivariance { subset: Vec<usize>, g1: Vec<usize>, g2: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub valid: bool,
    pub partial_isometries: usize,
    pub subsets_checked: usize,
    pub pairs_checked: usize,
    pub violations: Vec<CertificateViolation>,
}

fn perms_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in perms_of(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

fn preserves(space: &FiniteMetricSpace, dom: &[usize], img: &[usize]) -> bool {
    (0..dom.len()).all(|i| (0..i).all(|j| space.dist(dom[i], dom[j]) == space.dist(img[i], img[j])))
}

/// Every partial isometry of `space` as a `(domain, images)` pair, by
/// trying all injective images of all subsets.
fn brute_partials(space: &FiniteMetricSpace) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = space.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let dom: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        for target in 0u32..(1 << n) {
            if target.count_ones() != mask.count_ones() {
                continue;
            }
            let tgt: Vec<usize> = (0..n).filter(|&i| target >> i & 1 == 1).collect();
            for img in perms_of(&tgt) {
                if preserves(space, &dom, &img) {
                    out.push((dom.clone(), img));
                }
            }
        }
    }
    out
}

fn is_isometry(space: &FiniteMetricSpace, p: &[usize]) -> bool {
    let n = space.len();
    let mut seen = vec![false; n];
    p.len() == n
        && p.iter().all(|&y| y < n && !std::mem::replace(&mut seen[y], true))
        && (0..n).all(|i| (0..i).all(|j| space.dist(i, j) == space.dist(p[i], p[j])))
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

/// Checks the embedding, the extension property of every row, and that
/// `T` is a homomorphism on every `ISO(K)`.
pub fn verify_certificate(cert: &GlobalizationCertificate) -> CertificateReport {
    let (f, fp, emb) = (&cert.base, &cert.extension, &cert.embedding);
    let n = f.len();
    let mut violations = Vec::new();

    if emb.len() != n || emb.iter().any(|&e| e >= fp.len()) {
        violations.push(CertificateViolation::Embedding { x: 0, y: 0 });
        return CertificateReport { valid: false, partial_isometries: 0, subsets_checked: 0, pairs_checked: 0, violations };
    }
    for x in 0..n {
        for y in 0..x {
            if emb[x] == emb[y] || f.dist(x, y) != fp.dist(emb[x], emb[y]) {
                violations.push(CertificateViolation::Embedding { x: y, y: x });
            }
        }
    }

    let mut table: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>> = HashMap::new();
    for e in &cert.table {
        let key = (e.partial.domain(), e.partial.images());
        if e.partial.degree() != n || !preserves(f, &key.0, &key.1) {
            violations.push(CertificateViolation::BadEntry { domain: key.0, image: key.1 });
            continue;
        }
        if table.insert(key.clone(), e.extension.images().to_vec()).is_some() {
            violations.push(CertificateViolation::DuplicateEntry { domain: key.0, image: key.1 });
        }
    }

    let all = brute_partials(f);
    for (dom, img) in &all {
        let Some(t) = table.get(&(dom.clone(), img.clone())) else {
            violations.push(CertificateViolation::MissingEntry { domain: dom.clone(), image: img.clone() });
            continue;
        };
        if !is_isometry(fp, t) {
            violations.push(CertificateViolation::NotIsometry { domain: dom.clone(), image: img.clone() });
            continue;
        }
        if let Some(i) = (0..dom.len()).find(|&i| t[emb[dom[i]]] != emb[img[i]]) {
            violations.push(CertificateViolation::Extension { domain: dom.clone(), image: img.clone(), x: dom[i] });
        }
    }

    let mut subsets_checked = 0;
    let mut pairs_checked = 0;
    for mask in 0u32..(1 << n) {
        let k: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let group: Vec<Vec<usize>> = perms_of(&k).into_iter().filter(|img| preserves(f, &k, img)).collect();
        subsets_checked += 1;
        let lookup = |img: &Vec<usize>| table.get(&(k.clone(), img.clone())).filter(|t| is_isometry(fp, t));
        'pairs: for g1 in &group {
            for g2 in &group {
                pairs_checked += 1;
                // g1 ∘ g2 on K, as images listed in K order
                let pos = |x: usize| k.iter().position(|&y| y == x).unwrap();
                let prod: Vec<usize> = g2.iter().map(|&x| g1[pos(x)]).collect();
                let (Some(t1), Some(t2), Some(t12)) = (lookup(g1), lookup(g2), lookup(&prod)) else {
                    continue;
                };
                if *t12 != compose(t1, t2) {
                    violations.push(CertificateViolation::Equivariance { subset: k.clone(), g1: g1.clone(), g2: g2.clone() });
                    break 'pairs;
                }
            }
        }
    }

    CertificateReport {
        valid: violations.is_empty(),
        partial_isometries: all.len(),
        subsets_checked,
        pairs_checked,
        violations,
    }
}

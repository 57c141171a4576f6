// SPDX-License-Identifier: Apache-2.0

//! Finite metric spaces with exact rational distances.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Diagonal,
    Symmetry,
    Positivity,
    Triangle,
}

/// One failing metric axiom.
///
/// Witness layouts: diagonal `[i]`, symmetry and positivity `[i, j]`,
/// triangle `[i, k, j]` meaning `d(i,k) > d(i,j) + d(j,k)`, with values
/// `[d(i,k), d(i,j), d(j,k)]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { valid: violations.is_empty(), violations }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return write!(f, "valid");
        }
        write!(f, "invalid:")?;
        for v in &self.violations {
            let vals: Vec<String> = v.values.iter().map(ToString::to_string).collect();
            write!(f, " {:?}{:?}=[{}]", v.kind, v.witness, vals.join(","))?;
        }
        Ok(())
    }
}

/// Checks every metric axiom on a square matrix and lists all failures.
pub fn validate_metric(matrix: &[Vec<Rational>]) -> Result<ValidationReport> {
    let n = matrix.len();
    if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Shape(format!("row {i} has {} entries, expected {n}", row.len())));
    }
    let mut violations = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        if !row[i].is_zero() {
            violations.push(Violation {
                kind: ViolationKind::Diagonal,
                witness: vec![i],
                values: vec![row[i].clone()],
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (&matrix[i][j], &matrix[j][i]);
            if a != b {
                violations.push(Violation {
                    kind: ViolationKind::Symmetry,
                    witness: vec![i, j],
                    values: vec![a.clone(), b.clone()],
                });
            }
            for (x, y, v) in [(i, j, a), (j, i, b)] {
                if !v.is_positive() && (x < y || a != b) {
                    violations.push(Violation {
                        kind: ViolationKind::Positivity,
                        witness: vec![x, y],
                        values: vec![v.clone()],
                    });
                }
            }
        }
    }
    for i in 0..n {
        for k in (i + 1)..n {
            let direct = &matrix[i][k];
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let via = &matrix[i][j] + &matrix[j][k];
                if direct > &via {
                    violations.push(Violation {
                        kind: ViolationKind::Triangle,
                        witness: vec![i, k, j],
                        values: vec![direct.clone(), matrix[i][j].clone(), matrix[j][k].clone()],
                    });
                }
            }
        }
    }
    Ok(ValidationReport::from_violations(violations))
}

/// Labeled points with a validated rational distance matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Rational>,
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMetricSpace")
            .field("labels", &self.labels)
            .field("rows", &self.rows())
            .finish()
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

impl FiniteMetricSpace {
    pub fn empty() -> Self {
        FiniteMetricSpace { labels: Vec::new(), dist: Vec::new() }
    }

    /// Validates `rows` and wraps them with the given labels.
    pub fn new(labels: Vec<String>, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::Shape(format!("{} labels for {} rows", labels.len(), rows.len())));
        }
        check_labels(&labels)?;
        let report = validate_metric(&rows)?;
        if !report.valid {
            return Err(Error::InvalidMetric(report));
        }
        Ok(FiniteMetricSpace { labels, dist: rows.into_iter().flatten().collect() })
    }

    /// Like [`FiniteMetricSpace::new`] with labels `p0, p1, ...`.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(default_labels(rows.len()), rows)
    }

    /// Integer-matrix shorthand.
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Sorted distinct nonzero distances.
    pub fn distance_set(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.dist.iter().filter(|d| !d.is_zero()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn diameter(&self) -> Rational {
        self.dist.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Induced subspace on `subset`, in subset order.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        for &i in subset {
            if i >= n {
                return Err(Error::Index(format!("index {i} out of range for {n} points")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Index(format!("duplicate index {i}")));
            }
        }
        let labels = subset.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = subset
            .iter()
            .flat_map(|&i| subset.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.dist(i, j).clone())
            .collect();
        Ok(FiniteMetricSpace { labels, dist })
    }

    /// The first `n` points.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        self.restrict(&(0..n).collect::<Vec<_>>())
    }

    /// Appends one point with the given distance profile. The caller
    /// guarantees the profile is admissible.
    pub(crate) fn push_point_unchecked(&mut self, label: String, profile: &[Rational]) {
        let n = self.len();
        debug_assert_eq!(profile.len(), n);
        let mut dist = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..n {
            dist.extend_from_slice(self.row(i));
            dist.push(profile[i].clone());
        }
        dist.extend_from_slice(profile);
        dist.push(Rational::zero());
        self.dist = dist;
        self.labels.push(label);
    }

    /// A label not yet used, derived from `base`.
    pub(crate) fn fresh_label(&self, base: &str) -> String {
        let mut label = base.to_string();
        while self.labels.contains(&label) {
            label.push('\'');
        }
        label
    }

    /// True when `perm` (as image list) preserves every distance.
    pub fn preserves_distances(&self, images: &[usize]) -> bool {
        let n = self.len();
        images.len() == n
            && (0..n).all(|i| (i + 1..n).all(|j| self.dist(i, j) == self.dist(images[i], images[j])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect()).collect()
    }

    #[test]
    fn two_point_metric_is_valid() {
        let report = validate_metric(&ints(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(report.valid);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn triangle_violation_has_witness() {
        let report = validate_metric(&ints(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]])).unwrap();
        assert!(!report.valid);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.kind, ViolationKind::Triangle);
        assert_eq!(v.witness, vec![0, 2, 1]);
        assert_eq!(v.values, vec![Rational::from(3), Rational::from(1), Rational::from(1)]);
    }

    #[test]
    fn asymmetric_entry_is_reported() {
        let report = validate_metric(&ints(&[&[0, 1], &[2, 0]])).unwrap();
        assert!(!report.valid);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Symmetry && v.witness == vec![0, 1]));
    }

    #[test]
    fn every_failure_is_listed() {
        let report = validate_metric(&ints(&[&[1, 0, 5], &[0, 0, 1], &[5, 1, 0]])).unwrap();
        let kinds: Vec<_> = report.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::Diagonal));
        assert!(kinds.contains(&ViolationKind::Positivity));
        assert!(kinds.contains(&ViolationKind::Triangle));
    }

    #[test]
    fn degenerate_triangle_is_accepted() {
        assert!(validate_metric(&ints(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]])).unwrap().valid);
    }

    #[test]
    fn non_square_is_shape_error() {
        let m = vec![vec![Rational::zero(), Rational::one()], vec![Rational::one()]];
        assert!(matches!(validate_metric(&m), Err(Error::Shape(_))));
    }

    #[test]
    fn restrict_examples() {
        let s = FiniteMetricSpace::from_int_rows(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).unwrap();
        let sub = s.restrict(&[0, 1]).unwrap();
        assert_eq!(sub.rows(), ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(s.restrict(&[0, 1, 2]).unwrap(), s);
        let empty = s.restrict(&[]).unwrap();
        assert!(empty.is_empty());
        assert!(empty.rows().is_empty());
        assert!(matches!(s.restrict(&[0, 0]), Err(Error::Index(_))));
        assert!(matches!(s.restrict(&[3]), Err(Error::Index(_))));
        let reordered = s.restrict(&[2, 0]).unwrap();
        assert_eq!(reordered.labels(), &["p2".to_string(), "p0".to_string()]);
        assert_eq!(*reordered.dist(0, 1), Rational::from(2));
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let rows = ints(&[&[0, 1], &[1, 0]]);
        let err = FiniteMetricSpace::new(vec!["a".into(), "a".into()], rows).unwrap_err();
        assert_eq!(err, Error::DuplicateLabel("a".into()));
    }

    /// Shortest-path closure of random positive weights is always a metric.
    fn arb_space() -> impl Strategy<Value = FiniteMetricSpace> {
        (1usize..7, 1i64..5).prop_flat_map(|(n, q)| {
            prop::collection::vec(1i64..9, n * n).prop_map(move |w| {
                let mut d: Vec<Vec<Rational>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i == j {
                                    Rational::zero()
                                } else {
                                    Rational::ratio(w[i.min(j) * n + i.max(j)], q)
                                }
                            })
                            .collect()
                    })
                    .collect();
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let via = &d[i][k] + &d[k][j];
                            if via < d[i][j] {
                                d[i][j] = via;
                            }
                        }
                    }
                }
                FiniteMetricSpace::from_rows(d).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn restriction_stays_metric(s in arb_space(), mask in any::<u8>()) {
            let subset: Vec<usize> = (0..s.len()).filter(|i| mask & (1 << i) != 0).collect();
            let sub = s.restrict(&subset).unwrap();
            prop_assert!(validate_metric(&sub.rows()).unwrap().valid);
        }

        #[test]
        fn validation_is_pure(s in arb_space()) {
            let rows = s.rows();
            prop_assert_eq!(validate_metric(&rows).unwrap(), validate_metric(&rows).unwrap());
        }
    }
}

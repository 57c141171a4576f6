// SPDX-License-Identifier: Apache-2.0

//! Admissible vectors (Katetov functions) and one-point extensions.
//!
//! A vector `a` over a finite space is admissible when every entry is
//! positive and `|a_i - a_j| <= d(i,j) <= a_i + a_j` for all pairs. These are
//! exactly the distance profiles a new point can have, so [`realize`] can
//! always glue such a point on.

use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::metric::FiniteMetricSpace;
use crate::rational::{chebyshev, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdmissibilityFailure {
    /// `a_i <= 0`
    NonPositive,
    /// `|a_i - a_j| > d(i,j)`
    Lipschitz,
    /// `d(i,j) > a_i + a_j`
    Sum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityViolation {
    pub i: usize,
    pub j: usize,
    pub kind: AdmissibilityFailure,
}

impl fmt::Display for AdmissibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AdmissibilityFailure::NonPositive => write!(f, "entry {} is not positive", self.i),
            AdmissibilityFailure::Lipschitz => {
                write!(f, "|a_{} - a_{}| exceeds their distance", self.i, self.j)
            }
            AdmissibilityFailure::Sum => {
                write!(f, "a_{} + a_{} is below their distance", self.i, self.j)
            }
        }
    }
}

/// A distance profile known to be admissible over some base space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct AdmissibleVector(Vec<Rational>);

impl AdmissibleVector {
    pub fn new(space: &FiniteMetricSpace, values: Vec<Rational>) -> Result<Self> {
        match check_admissible(space, &values)? {
            None => Ok(AdmissibleVector(values)),
            Some(v) => Err(Error::NotAdmissible(v)),
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for AdmissibleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn pair_violation(d: &Rational, ai: &Rational, aj: &Rational) -> Option<AdmissibilityFailure> {
    if &ai.abs_diff(aj) > d {
        Some(AdmissibilityFailure::Lipschitz)
    } else if d > &(ai + aj) {
        Some(AdmissibilityFailure::Sum)
    } else {
        None
    }
}

/// First violated admissibility constraint, scanning entries then pairs in
/// index order.
pub fn check_admissible(
    space: &FiniteMetricSpace,
    values: &[Rational],
) -> Result<Option<AdmissibilityViolation>> {
    if values.len() != space.len() {
        return Err(Error::Shape(format!(
            "vector of length {} over a space of {} points",
            values.len(),
            space.len()
        )));
    }
    if let Some(i) = values.iter().position(|v| !v.is_positive()) {
        return Ok(Some(AdmissibilityViolation { i, j: i, kind: AdmissibilityFailure::NonPositive }));
    }
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            if let Some(kind) = pair_violation(space.dist(i, j), &values[i], &values[j]) {
                return Ok(Some(AdmissibilityViolation { i, j, kind }));
            }
        }
    }
    Ok(None)
}

pub fn is_admissible(space: &FiniteMetricSpace, values: &[Rational]) -> Result<bool> {
    Ok(check_admissible(space, values)?.is_none())
}

/// Glues a new point whose distance to point `i` is `values[i]`.
pub fn realize(space: &FiniteMetricSpace, values: &[Rational], label: &str) -> Result<FiniteMetricSpace> {
    if let Some(v) = check_admissible(space, values)? {
        return Err(Error::NotAdmissible(v));
    }
    let mut out = space.clone();
    out.push_point_unchecked(space.fresh_label(label), values);
    Ok(out)
}

/// Extends a profile given on `known` points to the whole space by the
/// shortest-path (min-plus) rule `u(w) = min_k (a_k + d(k, w))`.
///
/// If `values` is admissible over the `known` subspace, the result is
/// admissible over the whole space and agrees with `values` on `known`.
pub fn min_plus_extension(space: &FiniteMetricSpace, known: &[usize], values: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(known.len(), values.len());
    debug_assert!(!known.is_empty());
    (0..space.len())
        .map(|w| {
            known
                .iter()
                .zip(values)
                .map(|(&k, a)| a + space.dist(k, w))
                .min()
                .expect("nonempty known set")
        })
        .collect()
}

/// Grid `{k/D : 1 <= k <= floor(B*D)}` used by the bounded enumerations.
pub(crate) fn value_grid(den_bound: u64, value_bound: &Rational) -> Result<Vec<Rational>> {
    if den_bound == 0 {
        return Err(Error::Parameter("denominator bound must be at least 1".into()));
    }
    if !value_bound.is_positive() {
        return Err(Error::Parameter("value bound must be positive".into()));
    }
    let d = i64::try_from(den_bound).map_err(|_| Error::Parameter("denominator bound too large".into()))?;
    let top = (value_bound * &Rational::from_integer(d))
        .floor()
        .to_i64()
        .ok_or_else(|| Error::Parameter("value bound too large".into()))?;
    Ok((1..=top).map(|k| Rational::ratio(k, d)).collect())
}

/// Backtracking enumeration of admissible vectors whose entries come from
/// the sorted candidate list `grid`, in lexicographic order.
pub(crate) fn enumerate_over_values(
    exec: Execution,
    space: &FiniteMetricSpace,
    grid: &[Rational],
) -> Vec<AdmissibleVector> {
    let n = space.len();
    if n == 0 {
        return vec![AdmissibleVector(Vec::new())];
    }
    fn extend(
        space: &FiniteMetricSpace,
        grid: &[Rational],
        prefix: &mut Vec<Rational>,
        out: &mut Vec<AdmissibleVector>,
    ) {
        let i = prefix.len();
        if i == space.len() {
            out.push(AdmissibleVector(prefix.clone()));
            return;
        }
        for v in grid {
            if prefix
                .iter()
                .enumerate()
                .all(|(j, aj)| pair_violation(space.dist(i, j), v, aj).is_none())
            {
                prefix.push(v.clone());
                extend(space, grid, prefix, out);
                prefix.pop();
            }
        }
    }
    exec.flat_map(grid, |first| {
        let mut out = Vec::new();
        let mut prefix = vec![first.clone()];
        extend(space, grid, &mut prefix, &mut out);
        out
    })
}

/// Every admissible vector with entries `p/q`, `q | den_bound`,
/// `0 < p/q <= value_bound`, in lexicographic order.
pub fn enumerate_admissible(
    space: &FiniteMetricSpace,
    den_bound: u64,
    value_bound: &Rational,
) -> Result<Vec<AdmissibleVector>> {
    enumerate_admissible_with(Execution::default(), space, den_bound, value_bound)
}

pub fn enumerate_admissible_with(
    exec: Execution,
    space: &FiniteMetricSpace,
    den_bound: u64,
    value_bound: &Rational,
) -> Result<Vec<AdmissibleVector>> {
    let grid = value_grid(den_bound, value_bound)?;
    Ok(enumerate_over_values(exec, space, &grid))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditParams {
    /// Number of leading points whose profiles are audited.
    pub n: usize,
    pub den_bound: u64,
    pub value_bound: Rational,
    /// Search depth: candidate realizing points are indices `n..depth`.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalityAuditReport {
    pub params: AuditParams,
    pub checked: usize,
    pub passed: bool,
    pub unrealized: Vec<AdmissibleVector>,
}

/// Index `k` in `n..depth` with `d(i, k) = values[i]` for all `i < n`.
pub(crate) fn realizing_point(space: &FiniteMetricSpace, values: &[Rational], depth: usize) -> Option<usize> {
    let n = values.len();
    (n..depth).find(|&k| values.iter().enumerate().all(|(i, a)| space.dist(i, k) == a))
}

/// Exact (zero-tolerance) universality check over the first `n` points.
pub fn universality_audit(space: &FiniteMetricSpace, params: &AuditParams) -> Result<UniversalityAuditReport> {
    universality_audit_with(Execution::default(), space, params)
}

pub fn universality_audit_with(
    exec: Execution,
    space: &FiniteMetricSpace,
    params: &AuditParams,
) -> Result<UniversalityAuditReport> {
    if params.n > params.depth || params.depth > space.len() {
        return Err(Error::Parameter(format!(
            "need n <= depth <= |space|, got n={} depth={} |space|={}",
            params.n,
            params.depth,
            space.len()
        )));
    }
    if params.n == 0 {
        value_grid(params.den_bound, &params.value_bound)?;
        return Ok(UniversalityAuditReport { params: params.clone(), checked: 0, passed: true, unrealized: vec![] });
    }
    let base = space.prefix(params.n)?;
    let candidates = enumerate_admissible_with(exec, &base, params.den_bound, &params.value_bound)?;
    let found = exec.map(&candidates, |v| realizing_point(space, v.values(), params.depth).is_some());
    let unrealized: Vec<AdmissibleVector> = candidates
        .iter()
        .zip(found)
        .filter(|(_, ok)| !ok)
        .map(|(v, _)| v.clone())
        .collect();
    Ok(UniversalityAuditReport {
        params: params.clone(),
        checked: candidates.len(),
        passed: unrealized.is_empty(),
        unrealized,
    })
}

/// Embedding `x -> d(x, .) - d(x0, .)` into `R^n` with the sup norm.
pub fn hk_embed(space: &FiniteMetricSpace, base_index: usize) -> Result<Vec<Vec<Rational>>> {
    if base_index >= space.len() {
        return Err(Error::Index(format!("base index {base_index} out of range for {} points", space.len())));
    }
    let base = space.row(base_index);
    Ok((0..space.len())
        .map(|x| space.row(x).iter().zip(base).map(|(a, b)| a - b).collect())
        .collect())
}

/// Sup-norm distance between two embedded points.
pub fn sup_distance(a: &[Rational], b: &[Rational]) -> Rational {
    chebyshev(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::validate_metric;
    use crate::testutil::{arb_space, q, qs};
    use proptest::prelude::*;

    fn two(d: i64) -> FiniteMetricSpace {
        FiniteMetricSpace::from_int_rows(&[&[0, d], &[d, 0]]).unwrap()
    }

    #[test]
    fn is_admissible_examples() {
        assert!(is_admissible(&two(2), &qs(&[(1, 1), (1, 1)])).unwrap());
        let bad = check_admissible(&two(2), &qs(&[(1, 2), (1, 1)])).unwrap().unwrap();
        assert_eq!(bad, AdmissibilityViolation { i: 0, j: 1, kind: AdmissibilityFailure::Sum });
        assert!(is_admissible(&two(2), &qs(&[(3, 1), (1, 1)])).unwrap());
        let lip = check_admissible(&two(2), &qs(&[(4, 1), (1, 1)])).unwrap().unwrap();
        assert_eq!(lip.kind, AdmissibilityFailure::Lipschitz);
        let zero = check_admissible(&two(2), &qs(&[(0, 1), (2, 1)])).unwrap().unwrap();
        assert_eq!(zero.kind, AdmissibilityFailure::NonPositive);
        assert!(matches!(is_admissible(&two(2), &qs(&[(1, 1)])), Err(Error::Shape(_))));
    }

    #[test]
    fn realize_examples() {
        let out = realize(&two(2), &qs(&[(1, 1), (1, 1)]), "x").unwrap();
        let expect: Vec<Vec<Rational>> =
            [[0, 2, 1], [2, 0, 1], [1, 1, 0]].iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect();
        assert_eq!(out.rows(), expect);
        assert_eq!(out.label(2), "x");

        let one = realize(&FiniteMetricSpace::empty(), &[], "x").unwrap();
        assert_eq!(one.len(), 1);

        let err = realize(&two(2), &qs(&[(1, 2), (1, 1)]), "x").unwrap_err();
        assert!(matches!(err, Error::NotAdmissible(AdmissibilityViolation { i: 0, j: 1, .. })));
    }

    /// Brute force over the full candidate grid, no pruning.
    fn brute_enumerate(space: &FiniteMetricSpace, d: u64, b: &Rational) -> Vec<Vec<Rational>> {
        let grid = value_grid(d, b).unwrap();
        let n = space.len();
        let mut out = Vec::new();
        let total = grid.len().pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = vec![Rational::zero(); n];
            for slot in v.iter_mut().rev() {
                *slot = grid[c % grid.len()].clone();
                c /= grid.len();
            }
            if is_admissible(space, &v).unwrap() {
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn enumerate_examples_match_brute_force() {
        let one = FiniteMetricSpace::from_int_rows(&[&[0]]).unwrap();
        let got: Vec<_> = enumerate_admissible(&one, 1, &q(2, 1)).unwrap().into_iter().map(|v| v.into_values()).collect();
        assert_eq!(got, vec![vec![q(1, 1)], vec![q(2, 1)]]);
        assert_eq!(got, brute_enumerate(&one, 1, &q(2, 1)));

        let got: Vec<_> = enumerate_admissible(&two(1), 1, &q(1, 1)).unwrap().into_iter().map(|v| v.into_values()).collect();
        assert_eq!(got, vec![qs(&[(1, 1), (1, 1)])]);

        let got: Vec<_> = enumerate_admissible(&two(1), 1, &q(2, 1)).unwrap().into_iter().map(|v| v.into_values()).collect();
        let expect = vec![qs(&[(1, 1), (1, 1)]), qs(&[(1, 1), (2, 1)]), qs(&[(2, 1), (1, 1)]), qs(&[(2, 1), (2, 1)])];
        assert_eq!(got, expect);
        assert_eq!(got, brute_enumerate(&two(1), 1, &q(2, 1)));
    }

    #[test]
    fn enumerate_rejects_bad_bounds() {
        assert!(matches!(enumerate_admissible(&two(1), 0, &q(1, 1)), Err(Error::Parameter(_))));
        assert!(matches!(enumerate_admissible(&two(1), 1, &q(0, 1)), Err(Error::Parameter(_))));
    }

    #[test]
    fn audit_examples() {
        let p = |n, depth| AuditParams { n, den_bound: 1, value_bound: q(2, 1), depth };
        assert!(universality_audit(&two(1), &p(0, 0)).unwrap().passed);
        let report = universality_audit(&two(1), &p(1, 2)).unwrap();
        assert!(!report.passed);
        assert_eq!(report.unrealized, vec![AdmissibleVector(vec![q(2, 1)])]);
        assert_eq!(report.checked, 2);
        assert!(matches!(universality_audit(&two(1), &p(2, 1)), Err(Error::Parameter(_))));
        assert!(matches!(universality_audit(&two(1), &p(1, 3)), Err(Error::Parameter(_))));
    }

    #[test]
    fn hk_examples() {
        let one = FiniteMetricSpace::from_int_rows(&[&[0]]).unwrap();
        assert_eq!(hk_embed(&one, 0).unwrap(), vec![vec![q(0, 1)]]);
        let img = hk_embed(&two(3), 0).unwrap();
        assert_eq!(img, vec![qs(&[(0, 1), (0, 1)]), qs(&[(3, 1), (-3, 1)])]);
        assert_eq!(sup_distance(&img[0], &img[1]), q(3, 1));
        let tri = FiniteMetricSpace::from_int_rows(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).unwrap();
        let img = hk_embed(&tri, 0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(sup_distance(&img[i], &img[j]), q(1, 1));
                }
            }
        }
        assert!(matches!(hk_embed(&tri, 3), Err(Error::Index(_))));
    }

    #[test]
    fn sequential_and_parallel_enumerations_agree() {
        let tri = FiniteMetricSpace::from_int_rows(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]).unwrap();
        let a = enumerate_admissible_with(Execution::Sequential, &tri, 2, &q(3, 1)).unwrap();
        let b = enumerate_admissible_with(Execution::Parallel, &tri, 2, &q(3, 1)).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(a, sorted);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn realize_is_metric_and_gluing_bad_vectors_is_not(s in arb_space(5, 4), seed in any::<u64>()) {
            let grid = value_grid(2, &q(3, 1)).unwrap();
            let n = s.len();
            let v: Vec<Rational> = (0..n).map(|i| grid[((seed >> (i * 5)) as usize) % grid.len()].clone()).collect();
            let mut rows = s.rows();
            for (i, r) in rows.iter_mut().enumerate() {
                r.push(v[i].clone());
            }
            let mut last = v.clone();
            last.push(Rational::zero());
            rows.push(last);
            let glued_valid = validate_metric(&rows).unwrap().valid;
            prop_assert_eq!(glued_valid, is_admissible(&s, &v).unwrap());
            if glued_valid {
                let out = realize(&s, &v, "x").unwrap();
                prop_assert!(validate_metric(&out.rows()).unwrap().valid);
            }
        }

        #[test]
        fn distance_functions_are_admissible(s in arb_space(6, 4), pick in any::<prop::sample::Index>()) {
            let x = pick.index(s.len());
            let rest: Vec<usize> = (0..s.len()).filter(|&i| i != x).collect();
            let sub = s.restrict(&rest).unwrap();
            let profile: Vec<Rational> = rest.iter().map(|&i| s.dist(x, i).clone()).collect();
            prop_assert!(is_admissible(&sub, &profile).unwrap());
        }

        #[test]
        fn hk_is_isometric(s in arb_space(6, 4), pick in any::<prop::sample::Index>()) {
            let img = hk_embed(&s, pick.index(s.len())).unwrap();
            for i in 0..s.len() {
                for j in 0..s.len() {
                    prop_assert_eq!(&sup_distance(&img[i], &img[j]), s.dist(i, j));
                }
            }
        }

        #[test]
        fn min_plus_extension_is_admissible(s in arb_space(6, 4), k in 1usize..4, seed in any::<u64>()) {
            let k = k.min(s.len());
            let known: Vec<usize> = (0..k).collect();
            let sub = s.prefix(k).unwrap();
            let cands = enumerate_admissible(&sub, 1, &q(3, 1)).unwrap();
            prop_assume!(!cands.is_empty());
            let a = &cands[(seed as usize) % cands.len()];
            let full = min_plus_extension(&s, &known, a.values());
            prop_assert!(is_admissible(&s, &full).unwrap());
            prop_assert_eq!(&full[..k], a.values());
        }
    }
}

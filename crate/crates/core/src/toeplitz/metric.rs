// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::admissibility::check_admissible;
use crate::error::{Error, Result};
use crate::metric::{default_labels, validate_metric, FiniteMetricSpace};
use crate::rational::Rational;

/// A shift-invariant metric on an integer interval: points `i` and `j` are
/// at distance `phi(|i - j|)`. `phi(0) = 0` is implicit; `values()[d - 1]`
/// holds `phi(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ToeplitzMetric(Vec<Rational>);

impl ToeplitzMetric {
    pub fn empty() -> Self {
        ToeplitzMetric(Vec::new())
    }

    /// Accepts `phi` when the induced matrix on `phi.len() + 1` points is a metric.
    pub fn new(phi: Vec<Rational>) -> Result<Self> {
        let m = ToeplitzMetric(phi);
        let report = validate_metric(&m.matrix_rows(m.points()))?;
        if report.valid {
            Ok(m)
        } else {
            Err(Error::InvalidMetric(report))
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    /// Largest lag `m`; the metric lives on `m + 1` points.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> usize {
        self.0.len() + 1
    }

    /// `phi(d)`, with `phi(0) = 0`.
    pub fn phi(&self, d: usize) -> Rational {
        if d == 0 {
            Rational::zero()
        } else {
            self.0[d - 1].clone()
        }
    }

    /// The metric restricted to lags below `n`, i.e. the order-`n` prefix.
    pub fn prefix(&self, n: usize) -> ToeplitzMetric {
        ToeplitzMetric(self.0[..n.saturating_sub(1).min(self.0.len())].to_vec())
    }

    fn matrix_rows(&self, n: usize) -> Vec<Vec<Rational>> {
        (0..n).map(|i| (0..n).map(|j| self.phi(i.abs_diff(j))).collect()).collect()
    }

    /// Induced space on the first `n` points, `n <= len() + 1`.
    pub fn space(&self, n: usize) -> Result<FiniteMetricSpace> {
        if n > self.points() {
            return Err(Error::Shape(format!("order {n} exceeds the {} available points", self.points())));
        }
        FiniteMetricSpace::new(default_labels(n), self.matrix_rows(n))
    }

    pub fn full_space(&self) -> FiniteMetricSpace {
        self.space(self.points()).expect("valid by construction")
    }

    /// Closed interval of values allowed for the next lag `len() + 1`;
    /// the upper end is `None` when unconstrained.
    pub fn append_bounds(&self) -> (Rational, Option<Rational>) {
        let k = self.0.len() + 1;
        let mut lo = Rational::zero();
        let mut hi: Option<Rational> = None;
        for d in 1..k {
            let (a, b) = (self.phi(d), self.phi(k - d));
            let diff = a.abs_diff(&b);
            if diff > lo {
                lo = diff;
            }
            let s = &a + &b;
            if hi.as_ref().is_none_or(|h| s < *h) {
                hi = Some(s);
            }
        }
        (lo, hi)
    }

    /// True when appending `v` as `phi(len() + 1)` keeps the metric valid.
    pub fn can_append(&self, v: &Rational) -> bool {
        let (lo, hi) = self.append_bounds();
        v.is_positive() && *v >= lo && hi.is_none_or(|h| *v <= h)
    }

    pub(crate) fn push_unchecked(&mut self, v: Rational) {
        self.0.push(v);
    }

    pub(crate) fn pop_unchecked(&mut self) {
        self.0.pop();
    }

    /// `phi(d + e) <= phi(d) + phi(e)` whenever `d + e <= len()`.
    pub fn is_subadditive(&self) -> bool {
        let m = self.0.len();
        (1..=m).all(|d| (1..=m - d).all(|e| self.phi(d + e) <= &self.phi(d) + &self.phi(e)))
    }
}

/// Membership of `v` in `Adm(M)` for the order-`v.len()` prefix `M`:
/// `|v_i - v_j| <= phi(|i - j|) <= v_i + v_j` and `v_i > 0`.
pub fn adm_membership(metric: &ToeplitzMetric, v: &[Rational]) -> Result<bool> {
    Ok(check_admissible(&metric.space(v.len())?, v)?.is_none())
}

/// Outcome of reading a matrix as a Toeplitz matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiExtraction {
    Toeplitz(ToeplitzMetric),
    /// `reference` fixes `phi(d)`; `conflict` is the first entry at the same
    /// lag with a different value.
    NotToeplitz { reference: (usize, usize), conflict: (usize, usize) },
}

/// Extracts `phi` from a matrix whose entries depend only on `|i - j|`.
pub fn phi_of(space: &FiniteMetricSpace) -> PhiExtraction {
    let n = space.len();
    for d in 1..n {
        for i in 1..n - d {
            if space.dist(i, i + d) != space.dist(0, d) {
                return PhiExtraction::NotToeplitz { reference: (0, d), conflict: (i, i + d) };
            }
        }
    }
    PhiExtraction::Toeplitz(ToeplitzMetric((1..n).map(|d| space.dist(0, d).clone()).collect()))
}

// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::admissibility::AdmissibilityViolation;
use crate::metric::{FiniteMetricSpace, ValidationReport};

/// State carried out of a search that ran out of budget.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetExceeded {
    pub budget: usize,
    pub space: Box<FiniteMetricSpace>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("not a metric: {} violation(s)", .0.violations.len())]
    InvalidMetric(ValidationReport),

    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),

    #[error("vector is not admissible: {0}")]
    NotAdmissible(AdmissibilityViolation),

    #[error("vector entry {index} is zero: the new point would coincide with an existing one")]
    DegenerateVector { index: usize },

    #[error("operands live on different spaces ({left} vs {right} points)")]
    SpaceMismatch { left: usize, right: usize },

    #[error("not a subgroup of the given group")]
    NotSubgroup,

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("not a group of isometries: {0}")]
    NotIsometryGroup(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("space does not embed isometrically into the host")]
    NotEmbeddable,

    #[error("billiard chain construction failed: {0}")]
    ChainConstruction(String),

    #[error("budget of {} exceeded: {}", .0.budget, .0.detail)]
    BudgetExceeded(BudgetExceeded),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

// SPDX-License-Identifier: Apache-2.0

//! Exact-rational toolkit for finite metric spaces and the rational Urysohn
//! space.

pub mod admissibility;
pub mod builder;
pub mod cli;
pub mod equivariant;
pub mod error;
pub mod exec;
pub mod globalization;
pub mod isometry;
pub mod metric;
pub mod rational;
pub mod toeplitz;

#[cfg(test)]
mod testutil;

pub use admissibility::{
    check_admissible, enumerate_admissible, enumerate_admissible_with, hk_embed, is_admissible, min_plus_extension,
    realize, sup_distance, universality_audit, universality_audit_with, AdmissibilityFailure, AdmissibilityViolation,
    AdmissibleVector, AuditParams, UniversalityAuditReport,
};
pub use error::{BudgetExceeded, Error, Result};
pub use exec::Execution;
pub use metric::{validate_metric, FiniteMetricSpace, ValidationReport, Violation, ViolationKind};
pub use rational::Rational;

// SPDX-License-Identifier: Apache-2.0

//! Extending partial isometries to global ones: one map at a time, all at
//! once with an equivariant certificate, and along a tower of spaces.

pub mod certificate;
pub mod extend;
pub mod search;
pub mod tower;

pub use certificate::{verify_certificate, CertificateReport, CertificateViolation, GlobalizationCertificate, TableEntry};
pub use extend::{extend_partial_to_global, first_extension, isometry_extensions, GlobalExtension, EXTENSION_NODE_LIMIT};
pub use search::{certify, globalize, GlobalizeConfig, GlobalizeOutcome, SearchPhase};
pub use tower::{locally_finite_tower, verify_tower, TowerOutcome, TowerReport, TowerStage, TowerViolation};

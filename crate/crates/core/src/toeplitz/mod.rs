// SPDX-License-Identifier: Apache-2.0

//! Shift-invariant (Toeplitz) metrics on integer intervals and the billiard
//! chains used to build universal ones.

pub mod billiard;
pub mod metric;
pub mod universal;

pub use billiard::{billiard_chain, billiard_chain_with, chain_defect, ladder_bound, BilliardChain, ChainOptions, ChainStrategy};
pub use metric::{adm_membership, phi_of, PhiExtraction, ToeplitzMetric};
pub use universal::{build_toeplitz_universal, toeplitz_realizer, ToeplitzOptions, ToeplitzOutcome, UnrealizedTarget};

// SPDX-License-Identifier: Apache-2.0

//! Isometry groups, partial isometries and Hall stages.

pub mod group;
pub mod hall;
pub mod partial;
pub mod perm;

pub use group::{act_on_vector, cosets, isometry_group, isometry_group_with, orbit_of, stabilizer, GroupAction};
pub use hall::{hall_embed, hall_stage, left_regular_image, lex_rank, HallStage, HomomorphismCheck};
pub use partial::{compose_partial, inverse_partial, partial_isometries, PartialIsometry};
pub use perm::{all_permutations, Permutation};

//! Computations with finite p-groups for weak Schur sigma-groups with two
//! generators: polycyclic presentations, filtrations, p-covers, the Schur
//! quotient recursion, the catalog of `G/D_4(G)` types and the frequency
//! model.

pub mod classify;
pub mod covers;
pub mod error;
pub mod filtrations;
pub mod fp;
pub mod heuristics;
pub mod pcgroup;
pub mod schur;

pub use error::{Error, Result};
pub use pcgroup::{Element, GroupMap, PcGroup, Subgroup};

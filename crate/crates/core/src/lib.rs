//! Desk-scale computational group theory for fusion systems.
//!
//! The crate provides a permutation-group kernel, automorphism groups of
//! small groups, realised fusion systems `F_S(G)`, and a five-stage filter
//! that finds candidate essential subgroups of a finite p-group.

pub mod arith;
pub mod automorphism;
pub mod bounds;
pub mod cache;
pub mod chain;
pub mod corpus;
pub mod error;
pub mod fusion;
pub mod group;
pub mod io;
pub mod lattice;
pub mod structure;
pub mod table;
pub mod perm;
pub mod protoessential;
pub mod spe;

pub use error::{Error, Result};
pub use group::{PermGroup, SubgroupHandle};
pub use perm::Permutation;

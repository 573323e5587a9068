//! Generalized Baumslag-Solitar groups of rank n.
//!
//! A `GBS_n` group is the fundamental group of a finite graph of groups in
//! which every vertex and edge group is `Z^n`. This crate models such graphs
//! exactly (arbitrary-precision integer and rational arithmetic throughout),
//! computes the modular homomorphism into `GL(n, Q)` and decides finiteness
//! of its image, computes abelianizations and the kernel subspace `R`,
//! induces decompositions of finite-index subgroups, reduces words against
//! the Bass-Serre tree action, and derives the classification predicates
//! (virtually HHG, property (QT), acylindrical hyperbolicity) together with
//! certifying witness data.

pub mod abel;
pub mod actions;
pub mod bass_serre;
pub mod error;
pub mod exact;
pub mod gog;
pub mod modular;
pub mod random;
pub mod subgroup;
pub mod textword;

pub use error::{Error, Result};

//! Separating homomorphisms between finite function groups.
//!
//! The crate works with subgroups `A ⊆ G^X` for a finite group `G` (given by
//! its Cayley table) and a finite domain `X`. It decides the hypotheses under
//! which a separating homomorphism `H: A -> B` is a weighted composition
//! operator `Hf(y) = w[y](f(h(y)))`, extracts `h` and `w` and verifies them
//! exhaustively, and applies the same machinery to monomial equivalence of
//! linear codes over prime fields.

pub mod code;
pub mod fgroup;
pub mod group;
pub mod hom;
pub mod subset;
pub mod text;

pub use code::{CodeError, LinearCode, MonomialWitness};
pub use fgroup::{FGroupError, FunctionGroup, PointMap};
pub use group::{FiniteGroup, GroupError, GroupMorphism};
pub use hom::{GroupHom, HomError, PointHom};
pub use subset::{SetFamily, Subset};
pub use text::{Workspace, WorkspaceError};

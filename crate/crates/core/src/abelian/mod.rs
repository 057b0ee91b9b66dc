//! Finitely generated abelian groups, homomorphisms and exact sequences.

mod amalgam;
mod divisible;
mod grid;
mod group;
mod hom;
mod seq;
mod snake;

use thiserror::Error;

pub use amalgam::{amalgam_quotient, AmalgamOutput, AmalgamPart};
pub use divisible::{divisible_elements, DivisibleElements};
pub use grid::{three_by_three_split, ExtRetractGrid, GridHypotheses, GridSplit};
pub use group::{
    canonical_order, enumerate_canonical, in_lattice, lattice_basis, lattice_contains, lattices_equal,
    preimage_lattice, FgGroup, Invariants,
};
pub use hom::{exact_at, in_kernel, subgroup_inclusion, FgHom};
pub use seq::{split_test, ShortExactSeq, SplitOutcome};
pub use snake::{snake, SixTerm, SnakeDiagram, SIX_TERM_NAMES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a homomorphism: {0}")]
    IllDefined(String),
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("square {square} does not commute")]
    NonCommuting { square: String },
    #[error("invalid decomposition of part {part}: {reason}")]
    InvalidDecomposition { part: usize, reason: String },
    #[error("declared hypothesis contradicts the instantiation: {0}")]
    FlagMismatch(String),
}

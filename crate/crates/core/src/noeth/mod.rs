//! One-dimensional local Noetherian domains: freeness of `Inv(D)` from the
//! conductor and the residue fields, and the Krull-domain rules.

mod decide;
mod field;

use thiserror::Error;

pub use decide::{
    decide_noeth, diagonal_cokernel, krull_verdict, unit_quotient_seq, Branch, KrullKind, KrullReport, NoethCase,
    NoethDecision, NoethInstance, Scope, UnitQuotientSeq,
};
pub use field::{unit_group, FieldDesc, FiniteField, OpaqueField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NoethError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field degree must be at least 1")]
    Degree,
    #[error("field too large")]
    TooLarge,
    #[error("conductor is zero: the domain is not analytically unramified")]
    ConductorZero,
    #[error("no maximal ideals in the integral closure")]
    NoBranches,
    #[error("branch {0} has conductor exponent 0")]
    ZeroExponent(usize),
    #[error("residue field of branch {0} does not contain k")]
    NotExtension(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

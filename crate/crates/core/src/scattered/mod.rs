//! Ordinal intervals as scattered spaces: Cantor–Bendixson derivatives and
//! the direct-sum decision for one-dimensional domains.

mod ordinal;
mod space;

use thiserror::Error;

pub use ordinal::{Ordinal, OrdinalParseError};
pub use space::{
    cb_derivative, cb_rank, derived_embedding, escape_index, prejaff_decide, PrejaffDecision, PrejaffOutcome,
    ScatteredRecord, ScatteredSpace,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScatterError {
    #[error("stratum {0} is nonempty but has no label")]
    MissingLabel(u32),
    #[error("label given for empty stratum {0}")]
    ExtraLabel(u32),
    #[error("label of stratum {0} is not a rank-one value group")]
    NotOneDimensional(u32),
    #[error("empty trace")]
    EmptyTrace,
    #[error("trace must start at stage 0")]
    TraceStart,
    #[error("trace stages must be strictly increasing")]
    TraceOrder,
    #[error("trace runs past the bound")]
    BeyondBound,
    #[error("trace never fails")]
    NeverEscapes,
    #[error("trace recovers after failing")]
    NonMonotone,
    #[error("trace fails at stage 0")]
    EscapesAtZero,
    #[error("trace first fails at the limit stage {0}")]
    EscapesAtLimit(Ordinal),
}

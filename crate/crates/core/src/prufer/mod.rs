//! Finite spectral trees of Prüfer domains and the freeness deciders for
//! `Inv` and `Div`.

mod decide;
mod tree;

pub use decide::{
    decide_div_free, decide_inv_free, strongly_discrete_decide, DivDecision, DividedCut, InvDecision,
    StronglyDiscreteDecision,
};
pub use tree::{branching_points, gamma_at, spec_hi, standard_decomposition, PrimeNode, SpecTree, TreeError};

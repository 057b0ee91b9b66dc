//! Symbolic value groups and the freeness rule system for groups that need
//! not be finitely generated.

mod expr;
mod parse;
mod tower;
mod verdict;

pub use expr::{GroupAtom, GroupExpr, Mult, Opaque};
pub use parse::{parse_expr, ExprParseError};
pub use tower::{
    convex_subgroup, div_of_valuation, inv_of_valuation, quotient_by_convex, val_nobranched_verdict,
    val_nounbranched_verdict, Slot, TowerError, ValueTower,
};
pub use verdict::{freeness_verdict, FreenessReport, Witness};

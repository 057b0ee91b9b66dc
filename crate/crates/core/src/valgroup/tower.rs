use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{GroupExpr, Mult};
use super::verdict::freeness_verdict;
use crate::cert::{anchor, Certificate, Step, Verdict};

/// One level of a value-group tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    Z,
    Q,
    R,
    /// Free abelian of the given rank (underlying group only).
    #[serde(untagged)]
    Free(u32),
}

impl Slot {
    pub fn to_expr(self) -> GroupExpr {
        match self {
            Slot::Z => GroupExpr::z(),
            Slot::Q => GroupExpr::q(),
            Slot::R => GroupExpr::r(),
            Slot::Free(r) => GroupExpr::power(GroupExpr::z(), Mult::Finite(r.into())),
        }
    }

    /// Discrete slots (`Z`, free) are the ones whose maximal ideal is principal.
    pub fn is_discrete(self) -> bool {
        matches!(self, Slot::Z | Slot::Free(_))
    }

    pub fn is_free(self) -> bool {
        self.is_discrete()
    }

    pub fn rank(self) -> Option<u32> {
        match self {
            Slot::Z => Some(1),
            Slot::Free(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Z => f.write_str("Z"),
            Slot::Q => f.write_str("Q"),
            Slot::R => f.write_str("R"),
            Slot::Free(r) => write!(f, "Z^{r}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("depth {depth} out of range for a tower of length {len}")]
    Depth { depth: usize, len: usize },
}

/// Value group of a finite-dimensional valuation domain as a list of
/// slots, the maximal-ideal end first. Slot `i` is the step between the
/// `i`-th and `(i+1)`-th primes counted down from the maximal ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ValueTower {
    slots: Vec<Slot>,
    branched: Vec<bool>,
}

impl ValueTower {
    pub fn new(slots: Vec<Slot>) -> Self {
        let branched = vec![true; slots.len()];
        ValueTower { slots, branched }
    }

    pub fn with_branched(slots: Vec<Slot>, branched: Vec<bool>) -> Self {
        assert_eq!(slots.len(), branched.len(), "one branched flag per slot");
        ValueTower { slots, branched }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn branched(&self) -> &[bool] {
        &self.branched
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn top(&self) -> Option<Slot> {
        self.slots.first().copied()
    }

    /// `self` stacked above `lower`.
    pub fn concat(&self, lower: &ValueTower) -> ValueTower {
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&lower.slots);
        let mut branched = self.branched.clone();
        branched.extend_from_slice(&lower.branched);
        ValueTower { slots, branched }
    }

    pub fn to_expr(&self) -> GroupExpr {
        GroupExpr::lex(self.slots.iter().map(|s| s.to_expr()).collect())
    }

    /// Rank of the underlying group when every slot is discrete.
    pub fn rank(&self) -> Option<usize> {
        self.slots.iter().map(|s| s.rank().map(|r| r as usize)).sum()
    }

    fn split(&self, depth: usize) -> Result<(ValueTower, ValueTower), TowerError> {
        if depth > self.len() {
            return Err(TowerError::Depth { depth, len: self.len() });
        }
        Ok((
            ValueTower { slots: self.slots[..depth].to_vec(), branched: self.branched[..depth].to_vec() },
            ValueTower { slots: self.slots[depth..].to_vec(), branched: self.branched[depth..].to_vec() },
        ))
    }
}

impl fmt::Display for ValueTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.slots.iter().map(ToString::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// The top `depth` slots.
pub fn quotient_by_convex(t: &ValueTower, depth: usize) -> Result<ValueTower, TowerError> {
    Ok(t.split(depth)?.0)
}

/// The slots below the top `depth`.
pub fn convex_subgroup(t: &ValueTower, depth: usize) -> Result<ValueTower, TowerError> {
    Ok(t.split(depth)?.1)
}

/// `Inv(V)` is the value group itself: every invertible ideal of a
/// valuation domain is principal.
pub fn inv_of_valuation(t: &ValueTower) -> (GroupExpr, Certificate) {
    let mut cert = Certificate::new();
    cert.push(Step::new("Inv(V) ≅ Γ(V) for a valuation domain", anchor::INV_VAL).with("tower", t));
    (t.to_expr(), cert)
}

/// `Div(V)` from the value group and the nature of the maximal ideal.
///
/// An empty tower is a field. A non-principal branched maximal ideal gives
/// `R ⊕ Γ(V_P)` with `P` the prime directly below; an unbranched maximal
/// ideal is outside what can be decided and yields `?`.
pub fn div_of_valuation(t: &ValueTower, maximal_principal: bool, maximal_branched: bool) -> (GroupExpr, Certificate) {
    let mut cert = Certificate::new();
    if t.is_empty() {
        cert.push(Step::new("a field has trivial Div", anchor::DIV_VAL_B));
        return (GroupExpr::trivial(), cert);
    }
    if !maximal_branched {
        cert.push(
            Step::new("maximal ideal unbranched: no description of Div(V) available", anchor::DIV_VAL_B).with("tower", t),
        );
        return (GroupExpr::Unknown, cert);
    }
    if maximal_principal {
        cert.push(Step::new("finitely generated maximal ideal: Div(V) ≅ Γ(V)", anchor::DIV_VAL_B).with("tower", t));
        (t.to_expr(), cert)
    } else {
        let below = convex_subgroup(t, 1).expect("tower is nonempty");
        cert.push(
            Step::new("maximal ideal not finitely generated: Div(V) ≅ R ⊕ Γ(V_P)", anchor::DIV_VAL_B)
                .with("tower", t)
                .with("Γ(V_P)", &below),
        );
        (GroupExpr::sum([GroupExpr::r(), below.to_expr()]), cert)
    }
}

/// Valuation domain with no branched primes and free steps `Γ(V_P/Q)`, as
/// the proposition is worded.
pub fn val_nobranched_verdict(step_quotients: &[GroupExpr], all_unbranched: bool) -> (Verdict, Certificate) {
    steps_verdict(step_quotients, all_unbranched, "no prime ideal is branched")
}

/// The same criterion with the hypothesis read as "no prime is unbranched",
/// which is the form used for strongly discrete domains. The two readings
/// differ; both are offered and neither is preferred.
pub fn val_nounbranched_verdict(step_quotients: &[GroupExpr], all_branched: bool) -> (Verdict, Certificate) {
    steps_verdict(step_quotients, all_branched, "no prime ideal is unbranched")
}

fn steps_verdict(step_quotients: &[GroupExpr], hypothesis: bool, wording: &str) -> (Verdict, Certificate) {
    let mut cert = Certificate::new();
    if !hypothesis {
        cert.push(Step::new("hypothesis not met", anchor::VAL_NOBRANCHED).with("hypothesis", wording));
        return (Verdict::Unknown, cert);
    }
    for (i, q) in step_quotients.iter().enumerate() {
        let r = freeness_verdict(q);
        if r.verdict != Verdict::Free {
            cert.push(
                Step::new("a step quotient is not known to be free", anchor::VAL_NOBRANCHED)
                    .with("step", i)
                    .with("Γ(V_P/Q)", q),
            );
            return (Verdict::Unknown, cert);
        }
    }
    cert.push(
        Step::new("every step quotient is free, so Γ(V) is free", anchor::VAL_NOBRANCHED)
            .with("hypothesis", wording)
            .with("steps", step_quotients.len()),
    );
    (Verdict::Free, cert)
}

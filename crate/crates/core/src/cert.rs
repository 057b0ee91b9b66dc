//! Verdicts and certificate traces shared by all deciders.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Three-valued freeness verdict. `Unknown` means no rule applied; it is
/// never a guess in either direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Free,
    NotFree,
    Unknown,
}

impl Verdict {
    /// Meet for direct sums: all free gives free, any non-free summand
    /// gives non-free, anything else is unknown.
    pub fn for_sum(parts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut all_free = true;
        for v in parts {
            match v {
                Verdict::NotFree => return Verdict::NotFree,
                Verdict::Unknown => all_free = false,
                Verdict::Free => {}
            }
        }
        if all_free {
            Verdict::Free
        } else {
            Verdict::Unknown
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Free => "Free",
            Verdict::NotFree => "NotFree",
            Verdict::Unknown => "Unknown",
        })
    }
}

/// One rule application: the rule, the result it rests on, and the inputs
/// it was applied to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: String,
    pub anchor: String,
    pub inputs: Vec<(String, String)>,
}

impl Step {
    pub fn new(rule: impl Into<String>, anchor: impl Into<String>) -> Self {
        Step { rule: rule.into(), anchor: anchor.into(), inputs: Vec::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.inputs.push((key.into(), value.to_string()));
        self
    }
}

/// Ordered list of rule applications.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Certificate {
    pub steps: Vec<Step>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: Certificate) {
        self.steps.extend(other.steps);
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn mentions(&self, anchor: &str) -> bool {
        self.steps.iter().any(|s| s.anchor == anchor)
    }
}

/// Anchor names used in certificates.
pub mod anchor {
    pub const FREE_SUBGROUP: &str = "Fact subgroup-of-free";
    pub const FREE_PROJECTIVE: &str = "Fact free-projective";
    pub const FREE_SUM: &str = "Fact sum-of-free";
    pub const TORSION: &str = "Fact torsion-not-free";
    pub const SNAKE: &str = "Fact snake";
    pub const ADDITIVE_FIELD: &str = "Lemma additive-omf-free";
    pub const PRODUCT_Z: &str = "Example entire-functions";
    pub const JAFFARD: &str = "Prop jaffard";
    pub const OPLUS_TCOMPLETE: &str = "Prop oplus-tcomplete";
    pub const KRULL: &str = "Prop krull";
    pub const IC_KRULL: &str = "Prop ic-krull";
    pub const EXT_SURJ: &str = "Lemma ext->surj";
    pub const NOETH_NORAD: &str = "Prop noeth-norad";
    pub const NOETH_RAD_LOC: &str = "Prop noeth-rad-ovDloc";
    pub const NOETH_RAD_NONLOC: &str = "Prop noeth-rad-ovDnonloc";
    pub const AMALGAM: &str = "Lemma amalgamato";
    pub const UNIT_ARTIN: &str = "Lemma unit-artin";
    pub const CHAR_TWO: &str = "Cor noeth-char2";
    pub const TEOR_NOETH: &str = "Theorem teor:noeth";
    pub const NOETH_NONLOCAL: &str = "Remark noeth-nonlocal";
    pub const EXPLOSION: &str = "Lemma explostion-prejaff";
    pub const PREJAFF: &str = "Prop preJaff";
    pub const PREJAFF_COR: &str = "Cor preJaff-onedim";
    pub const DIVISIBLE_REMARK: &str = "Remark prejaff-divisible";
    pub const INV_VAL: &str = "Lemma inv-val";
    pub const VAL_NOBRANCHED: &str = "Prop val-nobranched";
    pub const VAL_STRONGLYDISC: &str = "Cor val-stronglydisc";
    pub const DIVIDED_INVSTAR: &str = "Prop divided-invstar";
    pub const DIVIDED_FREE: &str = "Cor divided-invstar:free";
    pub const BRANCHPOINT: &str = "Lemma branchpoint-max";
    pub const SPECHI_SEMILOC: &str = "Lemma Spechi-semiloc";
    pub const CUTBRANCH_INV: &str = "Prop cutbranch-semiloc-inv";
    pub const CUTBRANCH_LOCFIN_INV: &str = "Cor cutbranch-locfin-inv";
    pub const DIV_VAL_B: &str = "Prop div-val-b";
    pub const CUTBRANCH_DIV: &str = "Prop cutbranch-semiloc-div";
    pub const STRONGLY_DISCRETE: &str = "Prop strongly-discrete-fin";
    pub const CONJ_STRONGLY_DISCRETE: &str = "Conj conj:stronglydiscrete";
    pub const EXT_RETRACT: &str = "Theorem ext-retract";
    pub const QUOZ_UNIT_FIELDS: &str = "Lemma quoz-unit-fields";
    pub const DECLARED: &str = "Input declaration";
}

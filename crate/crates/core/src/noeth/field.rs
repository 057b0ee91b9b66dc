use std::fmt;

use serde::{Deserialize, Serialize};

use super::NoethError;
use crate::valgroup::{GroupExpr, Opaque};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteField {
    pub p: u64,
    pub r: u32,
}

impl FiniteField {
    pub fn new(p: u64, r: u32) -> Result<Self, NoethError> {
        let f = FiniteField { p, r };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), NoethError> {
        if !is_prime(self.p) {
            return Err(NoethError::NotPrime(self.p));
        }
        if self.r == 0 {
            return Err(NoethError::Degree);
        }
        self.p.checked_pow(self.r).ok_or(NoethError::TooLarge)?;
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.r)
    }

    /// `|U(F_q)| = q − 1`.
    pub fn unit_order(&self) -> u64 {
        self.order() - 1
    }

    pub fn contains(&self, sub: &FiniteField) -> bool {
        self.p == sub.p && self.r % sub.r == 0
    }
}

/// Declared unit-group facts about a field that is not computed with.
/// `quotient_free` and `summand` describe `U(L)/U(k)` and `U(k) ⊆ U(L)`
/// for the residue field `k` of the instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpaqueField {
    pub label: String,
    #[serde(default, rename = "char", skip_serializing_if = "Option::is_none")]
    pub characteristic: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_free: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_free: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summand: Option<bool>,
}

impl OpaqueField {
    pub fn new(label: impl Into<String>) -> Self {
        OpaqueField { label: label.into(), characteristic: None, unit_free: None, quotient_free: None, summand: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldDesc {
    Finite(FiniteField),
    Opaque(OpaqueField),
}

impl FieldDesc {
    pub fn finite(p: u64, r: u32) -> Result<Self, NoethError> {
        Ok(FieldDesc::Finite(FiniteField::new(p, r)?))
    }

    pub fn validate(&self) -> Result<(), NoethError> {
        match self {
            FieldDesc::Finite(f) => f.validate(),
            FieldDesc::Opaque(o) => match o.characteristic {
                Some(c) if c != 0 && !is_prime(c) => Err(NoethError::NotPrime(c)),
                _ => Ok(()),
            },
        }
    }

    pub fn characteristic(&self) -> Option<u64> {
        match self {
            FieldDesc::Finite(f) => Some(f.p),
            FieldDesc::Opaque(o) => o.characteristic,
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Same field, as far as the descriptions can tell.
    pub fn same_as(&self, other: &FieldDesc) -> bool {
        match (self, other) {
            (FieldDesc::Finite(a), FieldDesc::Finite(b)) => a == b,
            (FieldDesc::Opaque(a), FieldDesc::Opaque(b)) => a.label == b.label,
            _ => false,
        }
    }

    /// Freeness of `U(F)`: computed for finite fields, declared otherwise;
    /// a characteristic other than 2 gives the torsion unit `−1`.
    pub fn unit_free(&self) -> Option<bool> {
        match self {
            FieldDesc::Finite(f) => Some(f.unit_order() == 1),
            FieldDesc::Opaque(o) => match o.characteristic {
                Some(c) if c != 2 => Some(false),
                _ => o.unit_free,
            },
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Finite(ff) if ff.r == 1 => write!(f, "F{}", ff.p),
            FieldDesc::Finite(ff) => write!(f, "F{}^{}", ff.p, ff.r),
            FieldDesc::Opaque(o) => f.write_str(&o.label),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `U(F)`: cyclic of order `q − 1` for `F_q`; for an opaque field an atom
/// carrying the declarations, with torsion recorded when the
/// characteristic is not 2.
pub fn unit_group(f: &FieldDesc) -> GroupExpr {
    match f {
        FieldDesc::Finite(ff) => GroupExpr::cyclic(ff.unit_order()),
        FieldDesc::Opaque(o) => {
            let odd = matches!(o.characteristic, Some(c) if c != 2);
            let mut atom = Opaque::new(format!("U({})", o.label));
            atom.free = if odd { Some(false) } else { o.unit_free };
            if odd {
                atom.torsion_free = Some(false);
            } else if o.unit_free == Some(true) {
                atom.torsion_free = Some(true);
            }
            GroupExpr::opaque(atom)
        }
    }
}

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::abelian::FgGroup;

/// Declared properties of a group the toolkit cannot compute with. `None`
/// means "not declared".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opaque {
    pub label: String,
    pub free: Option<bool>,
    pub torsion_free: Option<bool>,
    /// Has nonzero divisible elements.
    pub divisible: Option<bool>,
}

impl Opaque {
    pub fn new(label: impl Into<String>) -> Self {
        Opaque { label: label.into(), free: None, torsion_free: None, divisible: None }
    }

    pub fn free(label: impl Into<String>) -> Self {
        Opaque { free: Some(true), torsion_free: Some(true), divisible: Some(false), ..Opaque::new(label) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupAtom {
    Z,
    Q,
    R,
    /// `Z/n` with `n ≥ 1`.
    Cyclic(BigInt),
    Fg(FgGroup),
    /// `∏_{i∈N} Z`.
    ProductZ,
    Opaque(Opaque),
}

/// Multiplicity of a repeated summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mult {
    Finite(u64),
    /// Countably infinitely many copies (a direct sum, not a product).
    Countable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Atom(GroupAtom),
    Sum(Vec<GroupExpr>),
    /// Lexicographic tower, first entry on top.
    Lex(Vec<GroupExpr>),
    Power(Box<GroupExpr>, Mult),
    Unknown,
}

impl GroupExpr {
    pub fn trivial() -> Self {
        GroupExpr::Sum(Vec::new())
    }

    pub fn z() -> Self {
        GroupExpr::Atom(GroupAtom::Z)
    }

    pub fn q() -> Self {
        GroupExpr::Atom(GroupAtom::Q)
    }

    pub fn r() -> Self {
        GroupExpr::Atom(GroupAtom::R)
    }

    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        let n = n.into();
        if n.is_one() {
            GroupExpr::trivial()
        } else {
            GroupExpr::Atom(GroupAtom::Cyclic(n))
        }
    }

    pub fn fg(g: FgGroup) -> Self {
        GroupExpr::Atom(GroupAtom::Fg(g))
    }

    /// Structure-theorem form: `Z/t₁ ⊕ … ⊕ Z/tₖ ⊕ Z^r`.
    pub fn from_fg(g: &FgGroup) -> Self {
        let mut parts: Vec<GroupExpr> = g.torsion().into_iter().map(GroupExpr::cyclic).collect();
        parts.push(GroupExpr::power(GroupExpr::z(), Mult::Finite(g.free_rank() as u64)));
        GroupExpr::sum(parts)
    }

    pub fn opaque(o: Opaque) -> Self {
        GroupExpr::Atom(GroupAtom::Opaque(o))
    }

    /// Flattened direct sum; a single summand is returned as is.
    pub fn sum(parts: impl IntoIterator<Item = GroupExpr>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                GroupExpr::Sum(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            GroupExpr::Sum(out)
        }
    }

    /// Lexicographic tower. Empty gives the trivial group and a single level
    /// is returned as is.
    pub fn lex(parts: Vec<GroupExpr>) -> Self {
        match parts.len() {
            0 => GroupExpr::trivial(),
            1 => parts.into_iter().next().unwrap(),
            _ => GroupExpr::Lex(parts),
        }
    }

    pub fn power(base: GroupExpr, m: Mult) -> Self {
        match m {
            Mult::Finite(0) => GroupExpr::trivial(),
            Mult::Finite(1) => base,
            _ if base.is_trivial() => GroupExpr::trivial(),
            _ => GroupExpr::Power(Box::new(base), m),
        }
    }

    /// Syntactically trivial: an empty sum.
    pub fn is_trivial(&self) -> bool {
        matches!(self, GroupExpr::Sum(v) if v.is_empty())
    }

    /// The finitely generated group this expression denotes, when every
    /// leaf is `Z`, `Z/n` or an `fg(...)` atom with finite multiplicities.
    /// Lex towers are read as their underlying groups.
    pub fn to_fg(&self) -> Option<FgGroup> {
        match self {
            GroupExpr::Atom(GroupAtom::Z) => Some(FgGroup::free(1)),
            GroupExpr::Atom(GroupAtom::Cyclic(n)) => Some(FgGroup::cyclic(n.clone())),
            GroupExpr::Atom(GroupAtom::Fg(g)) => Some(g.clone()),
            GroupExpr::Atom(_) | GroupExpr::Unknown => None,
            GroupExpr::Sum(v) | GroupExpr::Lex(v) => {
                let parts = v.iter().map(GroupExpr::to_fg).collect::<Option<Vec<_>>>()?;
                let refs: Vec<&FgGroup> = parts.iter().collect();
                Some(FgGroup::direct_sum(&refs))
            }
            GroupExpr::Power(base, Mult::Finite(n)) => {
                let b = base.to_fg()?;
                let copies: Vec<&FgGroup> = (0..*n).map(|_| &b).collect();
                Some(FgGroup::direct_sum(&copies))
            }
            GroupExpr::Power(_, Mult::Countable) => None,
        }
    }

    /// Free rank when the expression is a finitely generated group.
    pub fn fg_rank(&self) -> Option<usize> {
        self.to_fg().map(|g| g.free_rank())
    }
}

impl fmt::Display for GroupAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAtom::Z => f.write_str("Z"),
            GroupAtom::Q => f.write_str("Q"),
            GroupAtom::R => f.write_str("R"),
            GroupAtom::Cyclic(n) => write!(f, "Z/{n}"),
            GroupAtom::Fg(g) => {
                let t: Vec<String> = g.torsion().iter().map(ToString::to_string).collect();
                write!(f, "fg({};{})", t.join(","), g.free_rank())
            }
            GroupAtom::ProductZ => f.write_str("prod(Z)"),
            GroupAtom::Opaque(o) => {
                write!(f, "opaque(\"{}\"", escape(&o.label))?;
                for (key, val) in [("free", o.free), ("tf", o.torsion_free), ("div", o.divisible)] {
                    if let Some(b) = val {
                        write!(f, "; {key}={b}")?;
                    }
                }
                f.write_str(")")
            }
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Atom(a) => write!(f, "{a}"),
            GroupExpr::Sum(v) if v.is_empty() => f.write_str("0"),
            GroupExpr::Sum(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊕ ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            GroupExpr::Lex(v) => {
                f.write_str("lex(")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
            GroupExpr::Power(base, m) => {
                if matches!(**base, GroupExpr::Sum(_)) {
                    write!(f, "({base})")?;
                } else {
                    write!(f, "{base}")?;
                }
                match m {
                    Mult::Finite(n) => write!(f, "^{n}"),
                    Mult::Countable => f.write_str("^(N)"),
                }
            }
            GroupExpr::Unknown => f.write_str("?"),
        }
    }
}

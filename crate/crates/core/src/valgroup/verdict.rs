use super::expr::{GroupAtom, GroupExpr, Mult};
use crate::cert::{anchor, Certificate, Step, Verdict};

/// Why a group is not free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A nonzero element of finite order.
    Torsion(String),
    /// A nonzero divisible element.
    Divisible(String),
    /// A subgroup known not to be free.
    NonFreeSubgroup(String),
}

impl Witness {
    pub fn describe(&self) -> String {
        match self {
            Witness::Torsion(s) => format!("torsion in {s}"),
            Witness::Divisible(s) => format!("divisible elements in {s}"),
            Witness::NonFreeSubgroup(s) => format!("non-free subgroup {s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub certificate: Certificate,
}

/// Sound three-valued freeness decision for a symbolic group.
///
/// `Free` is derived from free atoms closed under direct sums (finite or
/// countable); `NotFree` needs a witness: torsion, a nonzero divisible
/// element, or a summand already known not to be free (a subgroup of a free
/// group is free). Lex towers are judged by their underlying groups.
pub fn freeness_verdict(e: &GroupExpr) -> FreenessReport {
    let mut cert = Certificate::new();
    let (verdict, witness) = analyze(e, &mut cert);
    FreenessReport { verdict, witness, certificate: cert }
}

fn analyze(e: &GroupExpr, cert: &mut Certificate) -> (Verdict, Option<Witness>) {
    match e {
        GroupExpr::Atom(a) => atom(a, cert),
        GroupExpr::Unknown => {
            cert.push(Step::new("no information on an unknown group", anchor::DECLARED));
            (Verdict::Unknown, None)
        }
        GroupExpr::Sum(parts) if parts.is_empty() => {
            cert.push(Step::new("the trivial group is free (empty basis)", anchor::FREE_SUM));
            (Verdict::Free, None)
        }
        GroupExpr::Sum(parts) => sum(e, parts, cert),
        GroupExpr::Lex(parts) => {
            cert.push(Step::new("lex tower judged by its underlying direct sum", anchor::FREE_SUM).with("tower", e));
            sum(e, parts, cert)
        }
        GroupExpr::Power(base, m) => {
            let (v, w) = analyze(base, cert);
            match (v, m) {
                (Verdict::Free, Mult::Finite(_)) => {
                    cert.push(Step::new("finite direct sum of free groups is free", anchor::FREE_SUM).with("group", e));
                }
                (Verdict::Free, Mult::Countable) => {
                    cert.push(Step::new("direct sum of free groups is free", anchor::FREE_SUM).with("group", e));
                }
                (Verdict::NotFree, _) => push_propagation(cert, w.as_ref(), e),
                (Verdict::Unknown, _) => {}
            }
            (v, w)
        }
    }
}

fn sum(whole: &GroupExpr, parts: &[GroupExpr], cert: &mut Certificate) -> (Verdict, Option<Witness>) {
    let mut all_free = true;
    let mut first_bad = None;
    for p in parts {
        let (v, w) = analyze(p, cert);
        match v {
            Verdict::Free => {}
            Verdict::NotFree => {
                if first_bad.is_none() {
                    first_bad = Some(w);
                }
            }
            Verdict::Unknown => all_free = false,
        }
    }
    if let Some(w) = first_bad {
        push_propagation(cert, w.as_ref(), whole);
        (Verdict::NotFree, w)
    } else if all_free {
        cert.push(Step::new("finite direct sum of free groups is free", anchor::FREE_SUM).with("group", whole));
        (Verdict::Free, None)
    } else {
        (Verdict::Unknown, None)
    }
}

fn push_propagation(cert: &mut Certificate, w: Option<&Witness>, whole: &GroupExpr) {
    let step = match w {
        Some(Witness::Torsion(_)) => Step::new("torsion survives in direct sums", anchor::TORSION),
        Some(Witness::Divisible(_)) => Step::new("divisible elements survive in direct sums", anchor::FREE_SUBGROUP),
        _ => Step::new("a summand is a subgroup, and subgroups of free groups are free", anchor::FREE_SUBGROUP),
    };
    cert.push(step.with("group", whole));
}

fn atom(a: &GroupAtom, cert: &mut Certificate) -> (Verdict, Option<Witness>) {
    match a {
        GroupAtom::Z => {
            cert.push(Step::new("Z is free of rank 1", anchor::FREE_SUM));
            (Verdict::Free, None)
        }
        GroupAtom::Q | GroupAtom::R => {
            cert.push(
                Step::new("the additive group of a field has no nonzero free quotient", anchor::ADDITIVE_FIELD)
                    .with("group", a),
            );
            (Verdict::NotFree, Some(Witness::Divisible(a.to_string())))
        }
        GroupAtom::Cyclic(n) => {
            cert.push(Step::new("nonzero torsion", anchor::TORSION).with("group", format!("Z/{n}")));
            (Verdict::NotFree, Some(Witness::Torsion(a.to_string())))
        }
        GroupAtom::Fg(g) => {
            if g.is_free() {
                cert.push(Step::new("invariant factors show no torsion", anchor::FREE_SUM).with("group", g));
                (Verdict::Free, None)
            } else {
                cert.push(Step::new("invariant factors show torsion", anchor::TORSION).with("group", g));
                (Verdict::NotFree, Some(Witness::Torsion(g.to_string())))
            }
        }
        GroupAtom::ProductZ => {
            cert.push(Step::new("a countable product of copies of Z is not free", anchor::PRODUCT_Z));
            (Verdict::NotFree, Some(Witness::NonFreeSubgroup("prod(Z)".into())))
        }
        GroupAtom::Opaque(o) => {
            let declared_bad = o.torsion_free == Some(false) || o.divisible == Some(true) || o.free == Some(false);
            if o.free == Some(true) && declared_bad {
                cert.push(Step::new("inconsistent declarations ignored", anchor::DECLARED).with("group", a));
                return (Verdict::Unknown, None);
            }
            let step = Step::new("declared property", anchor::DECLARED).with("group", a);
            cert.push(step);
            if o.free == Some(true) {
                (Verdict::Free, None)
            } else if o.torsion_free == Some(false) {
                (Verdict::NotFree, Some(Witness::Torsion(o.label.clone())))
            } else if o.divisible == Some(true) {
                (Verdict::NotFree, Some(Witness::Divisible(o.label.clone())))
            } else if o.free == Some(false) {
                (Verdict::NotFree, Some(Witness::NonFreeSubgroup(o.label.clone())))
            } else {
                (Verdict::Unknown, None)
            }
        }
    }
}

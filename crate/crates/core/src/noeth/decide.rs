use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::field::{unit_group, FieldDesc};
use super::NoethError;
use crate::abelian::{amalgam_quotient, AmalgamOutput, AmalgamPart, FgGroup, FgHom};
use crate::cert::{anchor, Certificate, Step, Verdict};
use crate::matrix::IntMatrix;
use crate::valgroup::{GroupExpr, Mult, Opaque};

/// A maximal ideal `mᵢ` of the integral closure, its residue field `Lᵢ`
/// and the exponent `eᵢ` of `mᵢ` in the conductor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    #[serde(rename = "L")]
    pub field: FieldDesc,
    pub e: u32,
}

fn yes() -> bool {
    true
}

/// One-dimensional local Noetherian domain described through its
/// conductor and residue fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoethInstance {
    pub k: FieldDesc,
    pub branches: Vec<Branch>,
    #[serde(default)]
    pub integrally_closed: bool,
    #[serde(default = "yes")]
    pub conductor_nonzero: bool,
    /// `false` for a semilocal domain with several maximal ideals.
    #[serde(default = "yes")]
    pub local: bool,
}

impl NoethInstance {
    pub fn new(k: FieldDesc, branches: Vec<(FieldDesc, u32)>) -> Self {
        NoethInstance {
            k,
            branches: branches.into_iter().map(|(field, e)| Branch { field, e }).collect(),
            integrally_closed: false,
            conductor_nonzero: true,
            local: true,
        }
    }

    pub fn validate(&self) -> Result<(), NoethError> {
        if !self.conductor_nonzero {
            return Err(NoethError::ConductorZero);
        }
        if self.branches.is_empty() {
            return Err(NoethError::NoBranches);
        }
        self.k.validate()?;
        for (i, b) in self.branches.iter().enumerate() {
            if b.e == 0 {
                return Err(NoethError::ZeroExponent(i));
            }
            b.field.validate()?;
            let compatible = match (&b.field, &self.k) {
                (FieldDesc::Finite(l), FieldDesc::Finite(k)) => l.contains(k),
                (l, k) => match (l.characteristic(), k.characteristic()) {
                    (Some(a), Some(b)) => a == b,
                    _ => true,
                },
            };
            if !compatible {
                return Err(NoethError::NotExtension(i));
            }
        }
        Ok(())
    }

    /// Whether the conductor `m₁^{e₁}⋯mₙ^{eₙ}` is a radical ideal.
    pub fn conductor_radical(&self) -> bool {
        self.branches.iter().all(|b| b.e == 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoethCase {
    IntegrallyClosed,
    /// Conductor not radical.
    A,
    /// Radical conductor, local integral closure.
    B,
    /// Radical conductor, several maximal ideals in the integral closure.
    C,
}

/// Which group the verdict speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Inv,
    /// Only `𝒫(D)` (non-local instances).
    Principal,
}

#[derive(Clone, Debug)]
pub struct NoethDecision {
    pub verdict: Verdict,
    pub case: NoethCase,
    pub scope: Scope,
    pub certificate: Certificate,
}

/// Freeness of `Inv(D)` from conductor and residue-field data.
pub fn decide_noeth(inst: &NoethInstance) -> Result<NoethDecision, NoethError> {
    inst.validate()?;
    let mut cert = Certificate::new();
    let scope = if inst.local { Scope::Inv } else { Scope::Principal };
    if !inst.local {
        cert.push(
            Step::new("D is not local: Inv(D) can differ from 𝒫(D); only 𝒫(D) is decided", anchor::NOETH_NONLOCAL),
        );
    }
    if inst.integrally_closed {
        let k = krull_verdict(KrullKind::Dedekind);
        cert.extend(k.certificate);
        return Ok(NoethDecision { verdict: Verdict::Free, case: NoethCase::IntegrallyClosed, scope, certificate: cert });
    }
    let (verdict, case) = if let Some((i, b)) = inst.branches.iter().enumerate().find(|(_, b)| b.e > 1) {
        cert.push(
            Step::new("the conductor is not radical: Inv(D) is not free", anchor::NOETH_NORAD)
                .with("branch", i)
                .with("e", b.e),
        );
        (Verdict::NotFree, NoethCase::A)
    } else if inst.branches.len() == 1 {
        (case_b(inst, &mut cert), NoethCase::B)
    } else {
        (case_c(inst, &mut cert), NoethCase::C)
    };
    cert.push(
        Step::new("classification of freeness for analytically unramified local domains", anchor::TEOR_NOETH)
            .with("case", format!("{case:?}").to_lowercase())
            .with("verdict", verdict),
    );
    Ok(NoethDecision { verdict, case, scope, certificate: cert })
}

fn declared(cert: &mut Certificate, f: &FieldDesc) {
    if let FieldDesc::Opaque(o) = f {
        cert.push(Step::new("declared field data", anchor::DECLARED).with("field", serde_json::to_string(o).unwrap_or_default()));
    }
}

fn case_b(inst: &NoethInstance, cert: &mut Certificate) -> Verdict {
    let l = &inst.branches[0].field;
    declared(cert, &inst.k);
    declared(cert, l);
    let free = if l.same_as(&inst.k) {
        Some(true)
    } else {
        match (l, &inst.k) {
            (FieldDesc::Finite(lf), FieldDesc::Finite(kf)) => Some(lf.unit_order() == kf.unit_order()),
            (FieldDesc::Opaque(o), _) => o.quotient_free,
            _ => None,
        }
    };
    let verdict = match free {
        Some(true) => Verdict::Free,
        Some(false) => Verdict::NotFree,
        None => Verdict::Unknown,
    };
    cert.push(
        Step::new("radical conductor, local integral closure: Inv(D) free iff U(L)/U(k) free", anchor::NOETH_RAD_LOC)
            .with("k", &inst.k)
            .with("L", l)
            .with("U(L)/U(k) free", free.map_or("undeclared".to_string(), |b| b.to_string())),
    );
    verdict
}

fn case_c(inst: &NoethInstance, cert: &mut Certificate) -> Verdict {
    if let Some(c) = inst.k.characteristic().filter(|&c| c != 2) {
        cert.push(Step::new("−1 is a torsion unit of U(k)", anchor::UNIT_ARTIN).with("char", c));
        cert.push(Step::new("several branches need residue characteristic 2", anchor::CHAR_TWO).with("char", c));
        return Verdict::NotFree;
    }
    declared(cert, &inst.k);
    let mut parts = Vec::new();
    for (i, b) in inst.branches.iter().enumerate() {
        declared(cert, &b.field);
        let unit_free = b.field.unit_free();
        let summand = match (&b.field, &inst.k) {
            (FieldDesc::Finite(l), FieldDesc::Finite(k)) => {
                let g = BigInt::from(k.unit_order());
                let m = BigInt::from(l.unit_order() / k.unit_order());
                Some(m.gcd(&g) == BigInt::from(1))
            }
            _ if b.field.same_as(&inst.k) => Some(true),
            (FieldDesc::Opaque(o), _) => o.summand,
            _ => None,
        };
        let v = match (unit_free, summand) {
            (Some(false), _) | (_, Some(false)) => Verdict::NotFree,
            (Some(true), Some(true)) => Verdict::Free,
            _ => Verdict::Unknown,
        };
        cert.push(
            Step::new("U(Lᵢ) free and U(k) a direct summand of U(Lᵢ)", anchor::NOETH_RAD_NONLOC)
                .with("i", i)
                .with("L", &b.field)
                .with("U(L) free", unit_free.map_or("undeclared".to_string(), |x| x.to_string()))
                .with("summand", summand.map_or("undeclared".to_string(), |x| x.to_string())),
        );
        parts.push(v);
    }
    let verdict = Verdict::for_sum(parts);
    if verdict == Verdict::Free {
        cert.push(Step::new("U(B)/U(A) ≅ B₁ ⊕ … ⊕ Bₙ ⊕ U(k)^{n−1}", anchor::AMALGAM));
    }
    verdict
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KrullKind {
    Krull,
    Dedekind,
    Ufd,
}

#[derive(Clone, Debug)]
pub struct KrullReport {
    pub div: Verdict,
    pub inv: Verdict,
    pub principal: Verdict,
    pub basis: String,
    pub certificate: Certificate,
}

/// `Div`, `Inv` and `𝒫` of a Krull domain are free, with basis the height
/// one primes.
pub fn krull_verdict(kind: KrullKind) -> KrullReport {
    let mut cert = Certificate::new();
    let name = match kind {
        KrullKind::Krull => "Krull",
        KrullKind::Dedekind => "Dedekind",
        KrullKind::Ufd => "UFD",
    };
    cert.push(
        Step::new("Div(D), Inv(D) and 𝒫(D) of a Krull domain are free", anchor::KRULL)
            .with("kind", name)
            .with("basis", "X¹(D)"),
    );
    KrullReport {
        div: Verdict::Free,
        inv: Verdict::Free,
        principal: Verdict::Free,
        basis: "X¹(D)".into(),
        certificate: cert,
    }
}

/// `0 → U(D̄)/U(D) → 𝒫(D) → 𝒫(D̄) → 0`, split since `𝒫(D̄) ≅ Zⁿ`.
#[derive(Clone, Debug)]
pub struct UnitQuotientSeq {
    /// `U(D̄)/U(D) ≅ U(B)/U(A)` with `B = D̄/𝔠`, `A = D/𝔠`.
    pub quotient: GroupExpr,
    pub closure_principal: GroupExpr,
    pub principal: GroupExpr,
    /// Case (c) with `U(k)` a summand: `B₁ ⊕ … ⊕ Bₙ ⊕ U(k)^{n−1}`.
    pub expansion: Option<GroupExpr>,
    /// Finite residue fields with radical conductor: the cokernel of the
    /// diagonal `U(k) → ∏ U(Lᵢ)`.
    pub computed: Option<FgGroup>,
    /// Finite fields in case (c) with `U(k)` a summand of every `U(Lᵢ)`.
    pub amalgam: Option<AmalgamOutput>,
    pub certificate: Certificate,
}

pub fn unit_quotient_seq(inst: &NoethInstance) -> Result<UnitQuotientSeq, NoethError> {
    inst.validate()?;
    let n = inst.branches.len();
    let mut cert = Certificate::new();
    let closure_principal = GroupExpr::power(GroupExpr::z(), Mult::Finite(n as u64));
    cert.push(Step::new("D̄ is a semilocal Dedekind domain, so 𝒫(D̄) ≅ Inv(D̄) ≅ Zⁿ", anchor::IC_KRULL).with("n", n));
    let finish = |quotient: GroupExpr, expansion, computed, amalgam, mut cert: Certificate| {
        cert.push(Step::new("𝒫(D̄) is free: 𝒫(D) ≅ 𝒫(D̄) ⊕ U(D̄)/U(D)", anchor::FREE_PROJECTIVE));
        let principal = GroupExpr::sum([closure_principal.clone(), quotient.clone()]);
        Ok(UnitQuotientSeq {
            quotient,
            closure_principal: closure_principal.clone(),
            principal,
            expansion,
            computed,
            amalgam,
            certificate: cert,
        })
    };
    if inst.integrally_closed {
        cert.push(Step::new("D = D̄: the unit quotient is trivial", anchor::IC_KRULL));
        return finish(GroupExpr::trivial(), None, None, None, cert);
    }
    cert.push(Step::new("U(D̄)/U(D) ≅ U(D̄/𝔠)/U(D/𝔠)", anchor::EXT_SURJ));
    if !inst.conductor_radical() {
        let mut o = Opaque::new("U(D̄/𝔠)/U(D/𝔠)");
        o.free = Some(false);
        return finish(GroupExpr::opaque(o), None, None, None, cert);
    }
    let finite: Option<(u64, Vec<u64>)> = match &inst.k {
        FieldDesc::Finite(k) => inst
            .branches
            .iter()
            .map(|b| match &b.field {
                FieldDesc::Finite(l) => Some(l.unit_order()),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|ls| (k.unit_order(), ls)),
        _ => None,
    };
    if let Some((g, ls)) = finite {
        let computed = diagonal_cokernel(g, &ls);
        let quotient = GroupExpr::from_fg(&computed);
        let mut amalgam = None;
        let mut expansion = None;
        if n > 1 && ls.iter().all(|&l| (l / g).gcd(&g) == 1) {
            let out = finite_amalgam(g, &ls).map_err(|e| NoethError::Internal(e.to_string()))?;
            if out.quotient != computed {
                return Err(NoethError::Internal(format!(
                    "amalgam quotient {} differs from the cokernel {computed}",
                    out.quotient
                )));
            }
            cert.push(Step::new("U(B)/U(A) ≅ B₁ ⊕ … ⊕ Bₙ ⊕ U(k)^{n−1}", anchor::AMALGAM).with("group", &out.target));
            expansion = Some(GroupExpr::from_fg(&out.target));
            amalgam = Some(out);
        }
        return finish(quotient, expansion, Some(computed), amalgam, cert);
    }
    if n == 1 {
        let l = &inst.branches[0].field;
        let mut o = Opaque::new(format!("U({l})/U({})", inst.k));
        o.free = match l {
            FieldDesc::Opaque(d) => d.quotient_free,
            _ => None,
        };
        if l.same_as(&inst.k) {
            return finish(GroupExpr::trivial(), None, None, None, cert);
        }
        return finish(GroupExpr::opaque(o), None, None, None, cert);
    }
    let summands = inst.branches.iter().all(|b| match &b.field {
        FieldDesc::Opaque(o) => o.summand == Some(true),
        f => f.same_as(&inst.k),
    });
    if !summands {
        return finish(GroupExpr::opaque(Opaque::new("U(L₁ × … × Lₙ)/U(k)")), None, None, None, cert);
    }
    let mut parts: Vec<GroupExpr> = inst
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut o = Opaque::new(format!("B{}", i + 1));
            o.free = b.field.unit_free();
            GroupExpr::opaque(o)
        })
        .collect();
    let uk = unit_group(&inst.k);
    parts.push(GroupExpr::power(uk, Mult::Finite(n as u64 - 1)));
    let expansion = GroupExpr::sum(parts);
    cert.push(Step::new("U(B)/U(A) ≅ B₁ ⊕ … ⊕ Bₙ ⊕ U(k)^{n−1}", anchor::AMALGAM).with("group", &expansion));
    finish(expansion.clone(), Some(expansion), None, None, cert)
}

/// Cokernel of `Z/g → ⊕ Z/lᵢ`, `1 ↦ (lᵢ/g)`: the unit quotient for finite
/// fields of unit orders `g` and `lᵢ`.
pub fn diagonal_cokernel(g: u64, ls: &[u64]) -> FgGroup {
    let src = FgGroup::cyclic(g);
    let parts: Vec<FgGroup> = ls.iter().map(|&l| FgGroup::cyclic(l)).collect();
    let refs: Vec<&FgGroup> = parts.iter().collect();
    let tgt = FgGroup::direct_sum(&refs);
    let col: Vec<Vec<BigInt>> = ls.iter().map(|&l| vec![BigInt::from(l / g)]).collect();
    let m = IntMatrix::from_rows(&col);
    FgHom::new(src, tgt, m).expect("inclusion of cyclic unit groups").cokernel()
}

fn finite_amalgam(g: u64, ls: &[u64]) -> Result<AmalgamOutput, crate::abelian::AbelianError> {
    let gg = FgGroup::cyclic(g);
    let parts = ls
        .iter()
        .map(|&l| {
            let m = l / g;
            let a = FgGroup::cyclic(l);
            let b = FgGroup::cyclic(m);
            let t = inverse_mod(m, g);
            Ok(AmalgamPart {
                phi: FgHom::new(gg.clone(), a.clone(), IntMatrix::from_rows(&[vec![m]]))?,
                pi: FgHom::new(a.clone(), b, IntMatrix::from_rows(&[vec![1]]))?,
                theta: FgHom::new(a, gg.clone(), IntMatrix::from_rows(&[vec![t]]))?,
            })
        })
        .collect::<Result<Vec<_>, crate::abelian::AbelianError>>()?;
    amalgam_quotient(&gg, &parts)
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noeth::OpaqueField;

    fn ff(p: u64, r: u32) -> FieldDesc {
        FieldDesc::finite(p, r).unwrap()
    }

    #[test]
    fn monomial_curve_is_not_free() {
        let inst = NoethInstance::new(ff(3, 1), vec![(ff(3, 1), 2)]);
        let d = decide_noeth(&inst).unwrap();
        assert_eq!((d.verdict, d.case), (Verdict::NotFree, NoethCase::A));
        assert!(d.certificate.mentions(anchor::NOETH_NORAD));
    }

    #[test]
    fn case_b_finite() {
        assert_eq!(decide_noeth(&NoethInstance::new(ff(2, 1), vec![(ff(2, 1), 1)])).unwrap().verdict, Verdict::Free);
        assert_eq!(decide_noeth(&NoethInstance::new(ff(2, 1), vec![(ff(2, 2), 1)])).unwrap().verdict, Verdict::NotFree);
        let s = unit_quotient_seq(&NoethInstance::new(ff(2, 1), vec![(ff(2, 2), 1)])).unwrap();
        assert_eq!(s.quotient.to_string(), "Z/3");
    }

    #[test]
    fn char_three_case_c() {
        let inst = NoethInstance::new(ff(3, 1), vec![(ff(3, 2), 1), (ff(3, 2), 1)]);
        let d = decide_noeth(&inst).unwrap();
        assert_eq!(d.verdict, Verdict::NotFree);
        assert!(d.certificate.mentions(anchor::CHAR_TWO));
    }

    #[test]
    fn opaque_case_b() {
        let mut l = OpaqueField::new("F2(X)");
        l.characteristic = Some(2);
        l.quotient_free = Some(false);
        let mut k = OpaqueField::new("F2(X^2)");
        k.characteristic = Some(2);
        let inst = NoethInstance::new(FieldDesc::Opaque(k), vec![(FieldDesc::Opaque(l), 1)]);
        assert_eq!(decide_noeth(&inst).unwrap().verdict, Verdict::NotFree);
    }

    #[test]
    fn amalgam_cross_check() {
        // k = F4, L = F16, F64: unit orders 3, 15, 63.
        let inst = NoethInstance::new(ff(2, 2), vec![(ff(2, 4), 1), (ff(2, 2), 1)]);
        let s = unit_quotient_seq(&inst).unwrap();
        let c = s.computed.unwrap();
        assert_eq!(c.order(), Some(BigInt::from(15)));
        assert!(s.amalgam.is_some());
    }

    #[test]
    fn rejects_bad_instances() {
        let mut inst = NoethInstance::new(ff(2, 1), vec![(ff(2, 1), 1)]);
        inst.conductor_nonzero = false;
        assert_eq!(decide_noeth(&inst).unwrap_err(), NoethError::ConductorZero);
        let inst = NoethInstance::new(ff(2, 2), vec![(ff(2, 3), 1)]);
        assert_eq!(decide_noeth(&inst).unwrap_err(), NoethError::NotExtension(0));
    }

    #[test]
    fn krull() {
        for k in [KrullKind::Krull, KrullKind::Dedekind, KrullKind::Ufd] {
            let r = krull_verdict(k);
            assert_eq!([r.div, r.inv, r.principal], [Verdict::Free; 3]);
        }
    }
}

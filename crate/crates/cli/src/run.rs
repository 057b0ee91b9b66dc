use std::collections::BTreeMap;
use std::time::Instant;

use igl_core::abelian::{
    amalgam_quotient, exact_at, snake, split_test, three_by_three_split, FgGroup, FgHom, ShortExactSeq, SIX_TERM_NAMES,
};
use igl_core::matrix::snf;
use igl_core::noeth::{decide_noeth, krull_verdict, unit_quotient_seq, NoethInstance};
use igl_core::prufer::{decide_div_free, decide_inv_free, strongly_discrete_decide, SpecTree};
use igl_core::scattered::{cb_derivative, cb_rank, escape_index, prejaff_decide, Ordinal, ScatteredSpace};
use igl_core::valgroup::{
    div_of_valuation, freeness_verdict, inv_of_valuation, val_nobranched_verdict, val_nounbranched_verdict, GroupExpr,
    Slot, ValueTower,
};
use igl_core::{Certificate, Step, Verdict};

use crate::instance::{Diagram, Instance, InstanceError, Payload, PruferQuery, StepHypothesis, ValuationQuery};
use crate::report::Report;

struct Outcome {
    query: &'static str,
    verdict: String,
    expr: GroupExpr,
    details: BTreeMap<String, String>,
    certificate: Certificate,
}

impl Outcome {
    fn new(query: &'static str, verdict: Verdict, expr: GroupExpr, certificate: Certificate) -> Self {
        Outcome { query, verdict: verdict.to_string(), expr, details: BTreeMap::new(), certificate }
    }

    fn detail(mut self, k: &str, v: impl ToString) -> Self {
        self.details.insert(k.to_string(), v.to_string());
        self
    }
}

/// Runs the decider for the instance's kind.
pub fn decide(inst: &Instance) -> Result<Report, InstanceError> {
    let start = Instant::now();
    let out = match &inst.payload {
        Payload::Prufer { tree, query, non_top_dim_finite } => prufer(tree, *query, *non_top_dim_finite),
        Payload::Noeth(n) => noeth(n)?,
        Payload::Scattered { space, trace } => scattered(space, trace.as_deref())?,
        Payload::Valuation { tower, query, maximal_branched, hypothesis } => {
            valuation(tower, *query, *maximal_branched, *hypothesis)
        }
        Payload::Diagram(d) => diagram(d)?,
        Payload::Krull(k) => {
            let r = krull_verdict(*k);
            Outcome::new("krull", Verdict::Free, GroupExpr::Unknown, r.certificate)
                .detail("Div", r.div)
                .detail("Inv", r.inv)
                .detail("Princ", r.principal)
                .detail("basis", r.basis)
        }
    };
    let timing_us = start.elapsed().as_micros() as u64;
    Ok(Report {
        v: crate::instance::SCHEMA_VERSION,
        name: inst.meta.name.clone(),
        kind: inst.kind.to_string(),
        query: out.query.to_string(),
        verdict: out.verdict,
        expr: out.expr.to_string(),
        details: out.details,
        certificate: out.certificate.steps,
        timing_us,
    })
}

fn prufer(tree: &SpecTree, query: PruferQuery, non_top_dim_finite: bool) -> Outcome {
    match query {
        PruferQuery::Inv => {
            let d = decide_inv_free(tree);
            let mut o = Outcome::new("inv", d.verdict, d.expr, d.certificate).detail("divided_cuts", d.cuts.len());
            if let Some(w) = d.witness {
                o = o.detail("witness", w);
            }
            o
        }
        PruferQuery::Div => {
            let d = decide_div_free(tree);
            let mut o = Outcome::new("div", d.verdict, d.expr, d.certificate);
            if let Some(w) = d.witness {
                o = o.detail("witness", w);
            }
            o
        }
        PruferQuery::StronglyDiscrete => {
            let d = strongly_discrete_decide(tree, non_top_dim_finite);
            Outcome::new("strongly_discrete", d.verdict, GroupExpr::Unknown, d.certificate)
        }
    }
}

fn noeth(n: &NoethInstance) -> Result<Outcome, InstanceError> {
    let d = decide_noeth(n).map_err(|e| InstanceError::Precondition(e.to_string()))?;
    let s = unit_quotient_seq(n).map_err(|e| InstanceError::Precondition(e.to_string()))?;
    let mut cert = d.certificate;
    cert.extend(s.certificate);
    let query = match d.scope {
        igl_core::noeth::Scope::Inv => "inv",
        igl_core::noeth::Scope::Principal => "principal",
    };
    let mut o = Outcome::new(query, d.verdict, s.principal, cert)
        .detail("case", format!("{:?}", d.case).to_lowercase())
        .detail("unit_quotient", &s.quotient);
    if let Some(e) = s.expansion {
        o = o.detail("unit_quotient_expanded", e);
    }
    Ok(o)
}

fn scattered(space: &ScatteredSpace, trace: Option<&[(Ordinal, bool)]>) -> Result<Outcome, InstanceError> {
    let d = prejaff_decide(space);
    let mut o = Outcome::new("inv", d.verdict, d.expr, d.certificate).detail("cb_rank", cb_rank(space));
    o.verdict = format!("{:?}", d.outcome);
    if let Some(t) = trace {
        let bound = space.bound().cloned().unwrap_or_default();
        let g = escape_index(t, &bound).map_err(|e| InstanceError::Precondition(e.to_string()))?;
        o.certificate.push(
            Step::new("an invertible ideal first blows up at a successor stage", igl_core::cert::anchor::EXPLOSION)
                .with("stage", &g),
        );
        o = o.detail("escape_index", g);
    }
    Ok(o)
}

fn valuation(tower: &[Slot], query: ValuationQuery, maximal_branched: bool, hyp: Option<(StepHypothesis, bool)>) -> Outcome {
    let t = ValueTower::new(tower.to_vec());
    let judged = |q: &'static str, e: GroupExpr, mut cert: Certificate| {
        let r = freeness_verdict(&e);
        cert.extend(r.certificate);
        Outcome::new(q, r.verdict, e, cert)
    };
    match query {
        ValuationQuery::Inv => {
            let (e, c) = inv_of_valuation(&t);
            judged("inv", e, c)
        }
        ValuationQuery::Div => {
            let principal = t.top() == Some(Slot::Z);
            let (e, c) = div_of_valuation(&t, principal, maximal_branched);
            judged("div", e, c)
        }
        ValuationQuery::Steps => {
            let steps: Vec<GroupExpr> = tower.iter().map(|s| s.to_expr()).collect();
            let (v, c) = match hyp {
                Some((StepHypothesis::NoBranched, holds)) => val_nobranched_verdict(&steps, holds),
                Some((StepHypothesis::NoUnbranched, holds)) => val_nounbranched_verdict(&steps, holds),
                None => val_nounbranched_verdict(&steps, false),
            };
            Outcome::new("steps", v, t.to_expr(), c)
        }
    }
}

fn fg_outcome(q: &'static str, g: &FgGroup, mut cert: Certificate) -> Outcome {
    let e = GroupExpr::from_fg(g);
    let r = freeness_verdict(&e);
    cert.extend(r.certificate);
    Outcome::new(q, r.verdict, e, cert)
}

fn diagram(d: &Diagram) -> Result<Outcome, InstanceError> {
    let internal = |e: igl_core::abelian::AbelianError| InstanceError::Precondition(e.to_string());
    Ok(match d {
        Diagram::Group(g) => fg_outcome("group", g, Certificate::new()),
        Diagram::Hom(h) => fg_outcome("cokernel", &h.cokernel(), Certificate::new())
            .detail("kernel", h.kernel())
            .detail("image", h.image()),
        Diagram::Ses(s) => {
            let out = split_test(s);
            let mut cert = Certificate::new();
            let splits = out.splits();
            if splits {
                cert.push(Step::new("an explicit section exists", igl_core::cert::anchor::FREE_PROJECTIVE));
            }
            fg_outcome("middle", s.mid(), cert).detail("splits", splits)
        }
        Diagram::Snake(sd) => {
            let six = snake(sd).map_err(internal)?;
            six.verify().map_err(internal)?;
            let mut cert = Certificate::new();
            cert.push(Step::new("six-term exact sequence with connecting map", igl_core::cert::anchor::SNAKE));
            let mut o = fg_outcome("coker h", &six.groups[5], cert);
            for (n, g) in SIX_TERM_NAMES.iter().zip(&six.groups) {
                o = o.detail(n, g);
            }
            o.detail("delta", format!("{:?}", six.maps[2].matrix().columns()))
        }
        Diagram::Amalgam { g, parts } => {
            let out = amalgam_quotient(g, parts).map_err(internal)?;
            let mut cert = Certificate::new();
            cert.push(
                Step::new("(⊕Aᵢ)/φ(G) ≅ ⊕Bᵢ ⊕ G^{n−1}", igl_core::cert::anchor::AMALGAM).with("target", &out.target),
            );
            fg_outcome("quotient", &out.quotient, cert).detail("target", &out.target)
        }
        Diagram::ExtRetract { hypotheses, grid } => {
            let r = three_by_three_split(hypotheses, grid.as_deref()).map_err(internal)?;
            Outcome::new("inv_r", r.verdict, r.expr, r.certificate)
        }
    })
}

/// One verification check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn smith_checks(name: &str, g: &FgGroup, out: &mut Vec<Check>) {
    let a = g.relations();
    let s = snf(a);
    let prod = &(&s.u * a) * &s.v;
    let d = s.diagonal();
    let chain = d.windows(2).all(|w| w[1].is_zero_or_multiple(&w[0]));
    out.push(check(
        format!("{name}: U·A·V = S with unimodular U, V"),
        prod == s.s && s.u.is_unimodular() && s.v.is_unimodular(),
        "",
    ));
    out.push(check(format!("{name}: divisibility chain"), chain, format!("{d:?}")));
}

trait DividesChain {
    fn is_zero_or_multiple(&self, d: &Self) -> bool;
}

impl DividesChain for num_bigint::BigInt {
    fn is_zero_or_multiple(&self, d: &Self) -> bool {
        use num_traits::Zero;
        if d.is_zero() {
            self.is_zero()
        } else {
            (self % d).is_zero()
        }
    }
}

fn ses_checks(name: &str, s: &ShortExactSeq, out: &mut Vec<Check>) {
    out.push(check(format!("{name}: left map injective"), s.inj().is_injective(), ""));
    out.push(check(format!("{name}: right map surjective"), s.surj().is_surjective(), ""));
    out.push(check(format!("{name}: exact in the middle"), exact_at(s.inj(), s.surj()), ""));
    let sp = split_test(s);
    let detail = if sp.splits() { "section found" } else { "no section" };
    let section_ok = sp.section.as_ref().map_or(true, |sec| {
        sec.then(s.surj()).map(|c| c.agrees_with(&FgHom::identity(s.right()))).unwrap_or(false)
    });
    out.push(check(format!("{name}: split test consistent"), section_ok, detail));
}

/// Abelian-engine checks on the instance and on every finitely generated
/// sub-claim its decider emits.
pub fn verify(inst: &Instance) -> Result<Vec<Check>, InstanceError> {
    let mut out = Vec::new();
    match &inst.payload {
        Payload::Diagram(d) => match d {
            Diagram::Group(g) => smith_checks("group", g, &mut out),
            Diagram::Hom(h) => {
                out.push(check("hom: ker → source → target exact", exact_at(&h.kernel_inclusion(), h), ""));
                out.push(check("hom: source → target → coker exact", exact_at(h, &h.cokernel_projection()), ""));
                smith_checks("cokernel", &h.cokernel(), &mut out);
            }
            Diagram::Ses(s) => ses_checks("sequence", s, &mut out),
            Diagram::Snake(sd) => {
                ses_checks("top row", sd.top(), &mut out);
                ses_checks("bottom row", sd.bottom(), &mut out);
                let six = snake(sd);
                let res = six.as_ref().map_err(|e| e.to_string()).and_then(|s| s.verify().map_err(|e| e.to_string()));
                out.push(check("six-term sequence exact at every position", res.is_ok(), res.err().unwrap_or_default()));
            }
            Diagram::Amalgam { g, parts } => {
                let res = amalgam_quotient(g, parts);
                match res {
                    Ok(o) => {
                        out.push(check("ψ surjective with kernel φ(G)", o.iso.is_isomorphism(), ""));
                        out.push(check("quotient ≅ ⊕Bᵢ ⊕ G^{n−1}", o.quotient == o.target, format!("{}", o.quotient)));
                    }
                    Err(e) => out.push(check("amalgam construction", false, e.to_string())),
                }
            }
            Diagram::ExtRetract { hypotheses, grid } => {
                if let Some(g) = grid {
                    for i in 0..3 {
                        ses_checks(&format!("row {i}"), g.row(i), &mut out);
                        ses_checks(&format!("column {i}"), g.column(i), &mut out);
                    }
                }
                let r = three_by_three_split(hypotheses, grid.as_deref());
                out.push(check("grid decision", r.is_ok(), r.err().map(|e| e.to_string()).unwrap_or_default()));
            }
        },
        Payload::Prufer { tree, .. } => {
            let d = decide_inv_free(tree);
            for c in &d.cuts {
                match c.instantiate() {
                    Some(s) => ses_checks(&format!("cut at {}", c.prime), &s, &mut out),
                    None => out.push(check(format!("cut at {}", c.prime), true, "not finitely generated; skipped")),
                }
            }
            if let Some(g) = d.expr.to_fg() {
                let r: usize = tree.leaves().len();
                out.push(check("Inv(D) expression is finitely generated", true, format!("{g}; {r} maximal ideals")));
            }
        }
        Payload::Noeth(n) => {
            let s = unit_quotient_seq(n).map_err(|e| InstanceError::Precondition(e.to_string()))?;
            if let Some(c) = &s.computed {
                smith_checks("unit quotient", c, &mut out);
                let quotient_fg = s.quotient.to_fg();
                out.push(check("unit quotient expression matches the cokernel", quotient_fg.as_ref() == Some(c), format!("{c}")));
                if let Some(rank) = s.closure_principal.to_fg() {
                    ses_checks("0 → U(D̄)/U(D) → 𝒫(D) → 𝒫(D̄) → 0", &ShortExactSeq::split(c, &rank), &mut out);
                }
            }
            if let Some(a) = &s.amalgam {
                out.push(check("amalgam quotient equals the diagonal cokernel", Some(&a.quotient) == s.computed.as_ref(), ""));
                out.push(check("amalgam isomorphism", a.iso.is_isomorphism(), format!("{}", a.target)));
            }
        }
        Payload::Scattered { space, .. } => {
            let mut cur = space.clone();
            let mut steps = 0u64;
            let mut monotone = true;
            while !cur.is_empty() {
                let next = cb_derivative(&cur);
                if let (Some(a), Some(b)) = (cur.bound(), next.bound()) {
                    monotone &= b <= a;
                }
                cur = next;
                steps += 1;
            }
            out.push(check("derived sequence decreasing", monotone, ""));
            out.push(check("cb_rank equals the number of strata", cb_rank(space) == Ordinal::finite(steps), format!("{steps}")));
        }
        Payload::Valuation { tower, .. } => {
            let t = ValueTower::new(tower.clone());
            let (e, _) = inv_of_valuation(&t);
            match (e.to_fg(), t.rank()) {
                (Some(g), Some(r)) => out.push(check("rank of Γ(V) equals the sum of step ranks", g.free_rank() == r && g.is_free(), format!("{g}"))),
                _ => out.push(check("Γ(V) not finitely generated", true, "skipped")),
            }
        }
        Payload::Krull(_) => out.push(check("no finitely generated sub-claims", true, "")),
    }
    Ok(out)
}

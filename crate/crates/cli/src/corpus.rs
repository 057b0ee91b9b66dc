//! Built-in corpus with recorded expectations, run by `igl selftest`.

use igl_core::cert::anchor;
use rayon::prelude::*;

use crate::instance::parse_instance;
use crate::report::Report;
use crate::run::{decide, verify};

pub struct Case {
    pub file: &'static str,
    pub text: &'static str,
    pub verdict: &'static str,
    pub expr: Option<&'static str>,
    pub anchor: Option<&'static str>,
}

macro_rules! case {
    ($file:literal, $verdict:literal, $expr:expr, $anchor:expr) => {
        Case {
            file: $file,
            text: include_str!(concat!("../corpus/", $file)),
            verdict: $verdict,
            expr: $expr,
            anchor: $anchor,
        }
    };
}

pub fn corpus() -> Vec<Case> {
    vec![
        case!("monomial_curve.json", "NotFree", None, Some(anchor::NOETH_NORAD)),
        case!("zeta7_pullback.json", "Free", None, Some(anchor::NOETH_RAD_LOC)),
        case!("f2_square_subfield.json", "NotFree", None, Some(anchor::NOETH_RAD_LOC)),
        case!("char3_two_branches.json", "NotFree", None, Some(anchor::CHAR_TWO)),
        case!("f2_three_branches.json", "Free", Some("Z^3"), Some(anchor::NOETH_RAD_NONLOC)),
        case!("f2_rational_branches.json", "Free", None, Some(anchor::AMALGAM)),
        case!("dedekind.json", "Free", Some("Z"), Some(anchor::KRULL)),
        case!("dvr.json", "Free", Some("Z"), Some(anchor::INV_VAL)),
        case!("valuation_rank_two.json", "Free", Some("lex(Z;Z)"), Some(anchor::INV_VAL)),
        case!("valuation_rational.json", "NotFree", Some("Q"), Some(anchor::ADDITIVE_FIELD)),
        case!("valuation_div_nonprincipal.json", "NotFree", Some("R ⊕ Z"), Some(anchor::DIV_VAL_B)),
        case!("valuation_div_principal.json", "Free", Some("lex(Z;Z)"), Some(anchor::DIV_VAL_B)),
        case!("valuation_steps.json", "Free", None, Some(anchor::VAL_NOBRANCHED)),
        case!("valuation_steps_unmet.json", "Unknown", None, Some(anchor::VAL_NOBRANCHED)),
        case!("scattered_free.json", "DirectSumFree", Some("Z^(N) ⊕ Z"), Some(anchor::PREJAFF_COR)),
        case!("scattered_obstruction.json", "Obstructed", Some("?"), Some(anchor::DIVISIBLE_REMARK)),
        case!("scattered_trace.json", "DirectSumFree", None, Some(anchor::EXPLOSION)),
        case!("prufer_y.json", "Free", Some("Z ⊕ Z ⊕ Z"), Some(anchor::DIVIDED_FREE)),
        case!("prufer_gate.json", "Unknown", Some("?"), Some(anchor::CUTBRANCH_INV)),
        case!("prufer_div_chain.json", "NotFree", Some("R ⊕ Z"), Some(anchor::CUTBRANCH_DIV)),
        case!("prufer_strongly_discrete.json", "Free", None, Some(anchor::STRONGLY_DISCRETE)),
        case!("krull.json", "Free", None, Some(anchor::KRULL)),
        case!("ses_doubling.json", "Free", Some("Z"), None),
        case!("snake_doubling.json", "NotFree", Some("Z/2"), Some(anchor::SNAKE)),
        case!("amalgam_cyclic.json", "NotFree", Some("Z/15"), Some(anchor::AMALGAM)),
        case!("ext_retract.json", "Free", None, Some(anchor::EXT_RETRACT)),
    ]
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub file: &'static str,
    pub failures: Vec<String>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn strip_timing(mut r: Report) -> Report {
    r.timing_us = 0;
    r
}

/// Checks verdict, expression and anchor against the record, the
/// certificate invariant, JSON round-tripping, determinism, and every
/// verification check of the instance.
pub fn run_case(c: &Case) -> CaseResult {
    let mut failures = Vec::new();
    let inst = match parse_instance(c.text) {
        Ok(i) => i,
        Err(e) => {
            return CaseResult { file: c.file, failures: vec![format!("parse: {e}")] };
        }
    };
    let report = match decide(&inst) {
        Ok(r) => r,
        Err(e) => return CaseResult { file: c.file, failures: vec![format!("decide: {e}")] },
    };
    if report.verdict != c.verdict {
        failures.push(format!("verdict {} (expected {})", report.verdict, c.verdict));
    }
    if let Some(e) = c.expr {
        if report.expr != e {
            failures.push(format!("group {} (expected {e})", report.expr));
        }
    }
    if let Some(a) = c.anchor {
        if !report.certificate.iter().any(|s| s.anchor == a) {
            failures.push(format!("certificate does not cite {a}"));
        }
    }
    if matches!(report.verdict.as_str(), "Free" | "NotFree") && !report.has_rule_step() {
        failures.push("definite verdict without a rule step".into());
    }
    let json = report.to_json();
    match Report::from_json(&json) {
        Ok(back) if back.to_json() == json => {}
        Ok(_) => failures.push("JSON report does not round-trip".into()),
        Err(e) => failures.push(format!("JSON report does not parse: {e}")),
    }
    let same = decide(&inst).is_ok_and(|again| strip_timing(again) == strip_timing(report.clone()));
    if !same {
        failures.push("decision is not deterministic".into());
    }
    match verify(&inst) {
        Ok(checks) => failures.extend(checks.into_iter().filter(|k| !k.passed).map(|k| format!("check failed: {}", k.name))),
        Err(e) => failures.push(format!("verify: {e}")),
    }
    CaseResult { file: c.file, failures }
}

pub fn selftest() -> Vec<CaseResult> {
    corpus().par_iter().map(run_case).collect()
}

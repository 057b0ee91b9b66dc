use std::collections::BTreeMap;
use std::fmt::Write as _;

use igl_core::cert::anchor;
use igl_core::Step;
use serde::{Deserialize, Serialize};

/// One decision, as printed by `decide`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub v: u64,
    pub name: Option<String>,
    pub kind: String,
    pub query: String,
    /// `Free`, `NotFree`, `Unknown`, or a scattered-space outcome
    /// (`DirectSumFree`, `DirectSum`, `Obstructed`).
    pub verdict: String,
    pub expr: String,
    pub details: BTreeMap<String, String>,
    pub certificate: Vec<Step>,
    pub timing_us: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Trace {
    #[default]
    Rules,
    Full,
}

impl Report {
    /// Drops step inputs unless the full trace is requested.
    pub fn with_trace(mut self, trace: Trace) -> Self {
        if trace == Trace::Rules {
            for s in &mut self.certificate {
                s.inputs.clear();
            }
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Every `Free`/`NotFree` verdict must rest on at least one step whose
    /// anchor is a result rather than a bare input declaration.
    pub fn has_rule_step(&self) -> bool {
        self.certificate.iter().any(|s| s.anchor != anchor::DECLARED)
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(out, "{n} ({}/{})", self.kind, self.query);
        } else {
            let _ = writeln!(out, "{}/{}", self.kind, self.query);
        }
        let _ = writeln!(out, "  verdict: {}", self.verdict);
        let _ = writeln!(out, "  group:   {}", self.expr);
        for (k, v) in &self.details {
            let _ = writeln!(out, "  {k}: {v}");
        }
        let _ = writeln!(out, "  certificate:");
        for (i, s) in self.certificate.iter().enumerate() {
            let _ = writeln!(out, "    {}. {} [{}]", i + 1, s.rule, s.anchor);
            for (k, v) in &s.inputs {
                let _ = writeln!(out, "         {k} = {v}");
            }
        }
        let _ = writeln!(out, "  time: {} µs", self.timing_us);
        out
    }
}

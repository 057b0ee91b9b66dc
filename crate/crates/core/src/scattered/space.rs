use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ordinal::Ordinal;
use super::ScatterError;
use crate::cert::{anchor, Certificate, Step, Verdict};
use crate::valgroup::{freeness_verdict, inv_of_valuation, GroupExpr, Mult, Slot, ValueTower};

/// The interval `[0, α]` of ordinals (or the empty space), with one value
/// group per Cantor–Bendixson stratum: the points of rank `k` are the
/// maximal ideals `M` with `Γ(D_M)` the label of stratum `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatteredSpace {
    bound: Option<Ordinal>,
    labels: BTreeMap<u32, ValueTower>,
}

/// Instance-file form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteredRecord {
    /// `None` for the empty space.
    pub bound: Option<Ordinal>,
    #[serde(default)]
    pub labels: BTreeMap<u32, Vec<Slot>>,
}

impl ScatteredSpace {
    /// Every nonempty stratum needs a label of exactly one slot, and no
    /// label may name an empty stratum.
    pub fn new(bound: Option<Ordinal>, labels: BTreeMap<u32, ValueTower>) -> Result<Self, ScatterError> {
        let s = ScatteredSpace { bound, labels };
        for &k in s.labels.keys() {
            if s.stratum_size(k).is_none() {
                return Err(ScatterError::ExtraLabel(k));
            }
        }
        for (&k, t) in &s.labels {
            if t.len() != 1 {
                return Err(ScatterError::NotOneDimensional(k));
            }
        }
        for k in 0..s.height() {
            if !s.labels.contains_key(&k) {
                return Err(ScatterError::MissingLabel(k));
            }
        }
        Ok(s)
    }

    /// Space with unlabelled strata filled by `Z`.
    pub fn interval(bound: Ordinal) -> Self {
        let height = bound.leading_exponent().unwrap_or(0) + 1;
        let labels = (0..height).map(|k| (k, ValueTower::new(vec![Slot::Z]))).collect();
        ScatteredSpace { bound: Some(bound), labels }
    }

    pub fn empty() -> Self {
        ScatteredSpace { bound: None, labels: BTreeMap::new() }
    }

    pub fn from_record(r: &ScatteredRecord) -> Result<Self, ScatterError> {
        let labels = r.labels.iter().map(|(&k, v)| (k, ValueTower::new(v.clone()))).collect();
        ScatteredSpace::new(r.bound.clone(), labels)
    }

    pub fn to_record(&self) -> ScatteredRecord {
        ScatteredRecord {
            bound: self.bound.clone(),
            labels: self.labels.iter().map(|(&k, v)| (k, v.slots().to_vec())).collect(),
        }
    }

    pub fn bound(&self) -> Option<&Ordinal> {
        self.bound.as_ref()
    }

    pub fn labels(&self) -> &BTreeMap<u32, ValueTower> {
        &self.labels
    }

    pub fn is_empty(&self) -> bool {
        self.bound.is_none()
    }

    pub fn contains(&self, x: &Ordinal) -> bool {
        self.bound.as_ref().is_some_and(|b| x <= b)
    }

    /// Number of nonempty strata; equals the Cantor–Bendixson rank.
    pub fn height(&self) -> u32 {
        self.bound.as_ref().map_or(0, |b| b.leading_exponent().unwrap_or(0) + 1)
    }

    /// Number of points of rank `k`, `None` when there are none.
    pub fn stratum_size(&self, k: u32) -> Option<Mult> {
        let b = self.bound.as_ref()?;
        let lead = b.leading_exponent().unwrap_or(0);
        match k.cmp(&lead) {
            std::cmp::Ordering::Greater => None,
            std::cmp::Ordering::Less => Some(Mult::Countable),
            // Rank 0 in a finite interval [0, n] has n + 1 points; otherwise
            // the points of top rank are ω^k, …, ω^k·c.
            std::cmp::Ordering::Equal if k == 0 => Some(Mult::Finite(b.as_finite().expect("finite bound") + 1)),
            std::cmp::Ordering::Equal => Some(Mult::Finite(b.coefficient(k))),
        }
    }

    pub fn label_of(&self, x: &Ordinal) -> Option<&ValueTower> {
        if !self.contains(x) {
            return None;
        }
        self.labels.get(&x.point_rank())
    }

    pub fn is_single_point(&self) -> bool {
        self.bound.as_ref().is_some_and(Ordinal::is_zero)
    }
}

/// Derived set: the limit points `ω·γ` (`1 ≤ γ ≤ α/ω`) of `[0, α]`, which
/// form a space homeomorphic to `[0, β]`; labels move down one stratum.
pub fn cb_derivative(s: &ScatteredSpace) -> ScatteredSpace {
    let Some(b) = &s.bound else {
        return ScatteredSpace::empty();
    };
    let d = b.div_omega();
    let bound = if d.is_zero() {
        None
    } else if let Some(n) = d.as_finite() {
        Some(Ordinal::finite(n - 1))
    } else {
        Some(d)
    };
    let labels = s.labels.iter().filter(|(&k, _)| k > 0).map(|(&k, v)| (k - 1, v.clone())).collect();
    ScatteredSpace { bound, labels }
}

/// Points of `s` corresponding to the points of `cb_derivative(s)`:
/// `x ↦ ω·(1 + x)`.
pub fn derived_embedding(x: &Ordinal) -> Ordinal {
    Ordinal::finite(1).add(x).omega_times()
}

/// Least `γ` with empty `γ`-th derived set.
pub fn cb_rank(s: &ScatteredSpace) -> Ordinal {
    let mut cur = s.clone();
    let mut n = 0;
    while !cur.is_empty() {
        cur = cb_derivative(&cur);
        n += 1;
    }
    Ordinal::finite(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrejaffOutcome {
    DirectSumFree,
    DirectSum,
    Obstructed,
    Unknown,
}

impl PrejaffOutcome {
    pub fn verdict(self) -> Verdict {
        match self {
            PrejaffOutcome::DirectSumFree => Verdict::Free,
            PrejaffOutcome::Obstructed => Verdict::NotFree,
            _ => Verdict::Unknown,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrejaffDecision {
    pub outcome: PrejaffOutcome,
    pub verdict: Verdict,
    pub expr: GroupExpr,
    pub certificate: Certificate,
}

fn stratum_sum(s: &ScatteredSpace) -> GroupExpr {
    GroupExpr::sum((0..s.height()).map(|k| {
        let g = s.labels[&k].to_expr();
        GroupExpr::power(g, s.stratum_size(k).expect("nonempty stratum"))
    }))
}

/// `Inv(D)` for a one-dimensional domain whose maximal spectrum (with the
/// inverse topology) is the given space.
pub fn prejaff_decide(s: &ScatteredSpace) -> PrejaffDecision {
    let mut cert = Certificate::new();
    let done = |outcome: PrejaffOutcome, expr, cert| PrejaffDecision { outcome, verdict: outcome.verdict(), expr, certificate: cert };
    if s.is_empty() {
        cert.push(Step::new("no maximal ideals: Inv(D) is trivial", anchor::PREJAFF_COR));
        return done(PrejaffOutcome::DirectSumFree, GroupExpr::trivial(), cert);
    }
    let rank = cb_rank(s);
    cert.push(Step::new("the space is scattered, hence the family is sharp", anchor::PREJAFF).with("cb_rank", &rank));
    if s.is_single_point() {
        let t = &s.labels[&0];
        let (e, sub) = inv_of_valuation(t);
        cert.extend(sub);
        let free = freeness_verdict(&e).verdict == Verdict::Free;
        let outcome = if free { PrejaffOutcome::DirectSumFree } else { PrejaffOutcome::DirectSum };
        return done(outcome, e, cert);
    }
    let all_free = s.labels.values().all(|t| t.slots().iter().all(|sl| sl.is_free()));
    if all_free {
        let e = stratum_sum(s);
        cert.push(Step::new("Inv(D) ≅ ⊕ Inv(D_M)", anchor::PREJAFF_COR).with("group", &e));
        cert.push(Step::new("Inv(D) lies in a direct sum of free groups", anchor::OPLUS_TCOMPLETE));
        return done(PrejaffOutcome::DirectSumFree, e, cert);
    }
    let isolated_discrete = s.labels[&0].slots().iter().all(|sl| sl.is_discrete());
    let limit_divisible = (1..s.height()).find(|k| s.labels[k].slots().iter().any(|sl| matches!(sl, Slot::Q | Slot::R)));
    if let (true, Some(k)) = (isolated_discrete, limit_divisible) {
        cert.push(
            Step::new("a limit stratum has divisible value group over discrete isolated points", anchor::DIVISIBLE_REMARK)
                .with("stratum", k)
                .with("label", &s.labels[&k]),
        );
        return done(PrejaffOutcome::Obstructed, GroupExpr::Unknown, cert);
    }
    if rank == Ordinal::finite(1) {
        let e = stratum_sum(s);
        cert.push(Step::new("finitely many maximal ideals: a Jaffard family", anchor::JAFFARD).with("group", &e));
        return done(PrejaffOutcome::DirectSum, e, cert);
    }
    cert.push(Step::new("no rule applies to this labelling", anchor::PREJAFF));
    done(PrejaffOutcome::Unknown, GroupExpr::Unknown, cert)
}

/// A run-length trace: `(start, survives)` pairs with strictly increasing
/// starts, the first at `0`; the value holds up to the next start, and the
/// last run up to `bound`.
pub fn escape_index(runs: &[(Ordinal, bool)], bound: &Ordinal) -> Result<Ordinal, ScatterError> {
    let Some(first) = runs.first() else {
        return Err(ScatterError::EmptyTrace);
    };
    if !first.0.is_zero() {
        return Err(ScatterError::TraceStart);
    }
    for w in runs.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(ScatterError::TraceOrder);
        }
    }
    if let Some(last) = runs.last() {
        if &last.0 > bound {
            return Err(ScatterError::BeyondBound);
        }
    }
    let Some(pos) = runs.iter().position(|r| !r.1) else {
        return Err(ScatterError::NeverEscapes);
    };
    if runs[pos..].iter().any(|r| r.1) {
        return Err(ScatterError::NonMonotone);
    }
    let gamma = runs[pos].0.clone();
    if gamma.is_zero() {
        return Err(ScatterError::EscapesAtZero);
    }
    if gamma.is_limit() {
        return Err(ScatterError::EscapesAtLimit(gamma));
    }
    Ok(gamma)
}

//! Instance files: one JSON object per file, tagged by `kind`, with schema
//! version `"v": 1`.

use std::collections::BTreeMap;

use igl_core::abelian::{
    AbelianError, AmalgamPart, ExtRetractGrid, FgGroup, FgHom, GridHypotheses, ShortExactSeq, SnakeDiagram,
};
use igl_core::matrix::IntMatrix;
use igl_core::noeth::{Branch, FieldDesc, KrullKind, NoethError, NoethInstance};
use igl_core::prufer::{PrimeNode, SpecTree, TreeError};
use igl_core::scattered::{Ordinal, ScatterError, ScatteredRecord, ScatteredSpace};
use igl_core::valgroup::Slot;
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl InstanceError {
    pub fn exit_code(&self) -> i32 {
        match self {
            InstanceError::Syntax { .. } | InstanceError::Schema { .. } => 2,
            InstanceError::Precondition(_) => 3,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta {
    pub name: Option<String>,
    pub source: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruferQuery {
    Inv,
    Div,
    StronglyDiscrete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValuationQuery {
    Inv,
    Div,
    Steps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepHypothesis {
    NoBranched,
    NoUnbranched,
}

#[derive(Clone, Debug)]
pub enum Diagram {
    Group(FgGroup),
    Hom(FgHom),
    Ses(ShortExactSeq),
    Snake(Box<SnakeDiagram>),
    Amalgam { g: FgGroup, parts: Vec<AmalgamPart> },
    ExtRetract { hypotheses: GridHypotheses, grid: Option<Box<ExtRetractGrid>> },
}

#[derive(Clone, Debug)]
pub enum Payload {
    Prufer { tree: SpecTree, query: PruferQuery, non_top_dim_finite: bool },
    Noeth(NoethInstance),
    Scattered { space: ScatteredSpace, trace: Option<Vec<(Ordinal, bool)>> },
    Valuation { tower: Vec<Slot>, query: ValuationQuery, maximal_branched: bool, hypothesis: Option<(StepHypothesis, bool)> },
    Diagram(Diagram),
    Krull(KrullKind),
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub meta: Meta,
    pub kind: &'static str,
    pub payload: Payload,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PruferFile {
    #[allow(dead_code)]
    v: u64,
    #[allow(dead_code)]
    kind: String,
    name: Option<String>,
    source: Option<String>,
    root: PrimeNode,
    #[serde(default = "yes")]
    locally_finite: bool,
    query: Option<PruferQuery>,
    #[serde(default)]
    non_top_dim_finite: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoethFile {
    #[allow(dead_code)]
    v: u64,
    #[allow(dead_code)]
    kind: String,
    name: Option<String>,
    source: Option<String>,
    k: FieldDesc,
    branches: Vec<Branch>,
    #[serde(default)]
    integrally_closed: bool,
    #[serde(default = "yes")]
    conductor_nonzero: bool,
    #[serde(default = "yes")]
    local: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScatteredFile {
    #[allow(dead_code)]
    v: u64,
    #[allow(dead_code)]
    kind: String,
    name: Option<String>,
    source: Option<String>,
    bound: Option<Ordinal>,
    #[serde(default)]
    labels: BTreeMap<u32, Vec<Slot>>,
    trace: Option<Vec<(Ordinal, bool)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypothesisSpec {
    kind: StepHypothesis,
    holds: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ValuationFile {
    #[allow(dead_code)]
    v: u64,
    #[allow(dead_code)]
    kind: String,
    name: Option<String>,
    source: Option<String>,
    tower: Vec<Slot>,
    query: Option<ValuationQuery>,
    #[serde(default = "yes")]
    maximal_branched: bool,
    hypothesis: Option<HypothesisSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KrullFile {
    #[allow(dead_code)]
    v: u64,
    #[allow(dead_code)]
    kind: String,
    name: Option<String>,
    source: Option<String>,
    domain: KrullKind,
}

/// A group as `gens` generators with relation columns `rels`, or in
/// invariant form `torsion` + `rank`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    gens: Option<usize>,
    rels: Option<Vec<Vec<i64>>>,
    torsion: Option<Vec<i64>>,
    rank: Option<usize>,
}

/// Matrix rows: one row per target generator.
type Rows = Vec<Vec<i64>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomSpec {
    source: GroupSpec,
    target: GroupSpec,
    matrix: Rows,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SesSpec {
    inj: HomSpec,
    surj: HomSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SnakeSpec {
    top: SesSpec,
    bottom: SesSpec,
    f: Rows,
    g: Rows,
    h: Rows,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AmalgamPartSpec {
    a: GroupSpec,
    b: GroupSpec,
    phi: Rows,
    pi: Rows,
    theta: Rows,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AmalgamSpec {
    g: GroupSpec,
    parts: Vec<AmalgamPartSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    rows: [SesSpec; 3],
    cols: [SesSpec; 3],
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct HypothesesSpec {
    units_equal: Option<bool>,
    units_quotient_free: Option<bool>,
    locpic_free: Option<bool>,
    inv_d_free: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtRetractSpec {
    #[serde(default)]
    hypotheses: HypothesesSpec,
    grid: Option<GridSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramFile {
    #[allow(dead_code)]
    v: u64,
    #[allow(dead_code)]
    kind: String,
    name: Option<String>,
    source: Option<String>,
    group: Option<GroupSpec>,
    hom: Option<HomSpec>,
    ses: Option<SesSpec>,
    snake: Option<SnakeSpec>,
    amalgam: Option<AmalgamSpec>,
    ext_retract: Option<ExtRetractSpec>,
}

pub const KINDS: [&str; 6] = ["prufer_tree", "noeth_local", "scattered_space", "valuation", "group_diagram", "krull"];

/// Line and column (1-based) of the first occurrence of `needle`.
fn locate(text: &str, needle: &str) -> (usize, usize) {
    text.find(needle).map_or((1, 1), |off| locate_offset(text, off))
}

fn schema_at(text: &str, needle: &str, message: impl Into<String>) -> InstanceError {
    let (line, column) = locate(text, needle);
    InstanceError::Schema { line, column, message: message.into() }
}

fn typed<T: DeserializeOwned>(text: &str) -> Result<T, InstanceError> {
    serde_json::from_str(text).map_err(|e| InstanceError::Schema { line: e.line(), column: e.column(), message: strip_position(&e) })
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| InstanceError::Syntax { line: e.line(), column: e.column(), message: strip_position(&e) })?;
    let obj = value.as_object().ok_or_else(|| schema_at(text, "", "an instance must be a JSON object"))?;
    match obj.get("v") {
        None => return Err(schema_at(text, "{", "missing schema version field \"v\"")),
        Some(v) if v.as_u64() != Some(SCHEMA_VERSION) => {
            return Err(schema_at(text, "\"v\"", format!("unsupported schema version {v}; expected {SCHEMA_VERSION}")))
        }
        _ => {}
    }
    let kind = match obj.get("kind") {
        None => return Err(schema_at(text, "{", "missing field \"kind\"")),
        Some(Value::String(s)) => s.as_str(),
        Some(_) => return Err(schema_at(text, "\"kind\"", "\"kind\" must be a string")),
    };
    let Some(kind) = KINDS.iter().copied().find(|&k| k == kind) else {
        return Err(schema_at(text, "\"kind\"", format!("unknown kind \"{kind}\"; expected one of {}", KINDS.join(", "))));
    };
    let (meta, payload) = match kind {
        "prufer_tree" => {
            let f: PruferFile = typed(text)?;
            let tree = SpecTree::from_record(&f.root, f.locally_finite).map_err(|e| tree_error(text, e))?;
            let payload = Payload::Prufer {
                tree,
                query: f.query.unwrap_or(PruferQuery::Inv),
                non_top_dim_finite: f.non_top_dim_finite,
            };
            (Meta { name: f.name, source: f.source }, payload)
        }
        "noeth_local" => {
            let f: NoethFile = typed(text)?;
            let inst = NoethInstance {
                k: f.k,
                branches: f.branches,
                integrally_closed: f.integrally_closed,
                conductor_nonzero: f.conductor_nonzero,
                local: f.local,
            };
            inst.validate().map_err(|e| noeth_error(text, e))?;
            (Meta { name: f.name, source: f.source }, Payload::Noeth(inst))
        }
        "scattered_space" => {
            let f: ScatteredFile = typed(text)?;
            let rec = ScatteredRecord { bound: f.bound, labels: f.labels };
            let space = ScatteredSpace::from_record(&rec).map_err(|e| scatter_error(text, e))?;
            (Meta { name: f.name, source: f.source }, Payload::Scattered { space, trace: f.trace })
        }
        "valuation" => {
            let f: ValuationFile = typed(text)?;
            let payload = Payload::Valuation {
                tower: f.tower,
                query: f.query.unwrap_or(ValuationQuery::Inv),
                maximal_branched: f.maximal_branched,
                hypothesis: f.hypothesis.map(|h| (h.kind, h.holds)),
            };
            (Meta { name: f.name, source: f.source }, payload)
        }
        "group_diagram" => {
            let f: DiagramFile = typed(text)?;
            let meta = Meta { name: f.name.clone(), source: f.source.clone() };
            (meta, Payload::Diagram(diagram(text, f)?))
        }
        _ => {
            let f: KrullFile = typed(text)?;
            (Meta { name: f.name, source: f.source }, Payload::Krull(f.domain))
        }
    };
    Ok(Instance { meta, kind, payload })
}

fn tree_error(text: &str, e: TreeError) -> InstanceError {
    let needle = match &e {
        TreeError::RootLabel => "\"label\"".to_string(),
        TreeError::EmptyLabel(id) | TreeError::UnknownNode(id) => format!("\"{id}\""),
        TreeError::DuplicateId(id) => {
            let pat = format!("\"{id}\"");
            let first = text.find(&pat).map_or(0, |i| i + pat.len());
            let (line, column) = text[first..].find(&pat).map_or((1, 1), |off| locate_offset(text, first + off));
            return InstanceError::Schema { line, column, message: e.to_string() };
        }
    };
    schema_at(text, &needle, e.to_string())
}

fn locate_offset(text: &str, off: usize) -> (usize, usize) {
    let before = &text[..off];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(off, |nl| off - nl - 1) + 1;
    (line, column)
}

fn noeth_error(text: &str, e: NoethError) -> InstanceError {
    match e {
        NoethError::ConductorZero => InstanceError::Precondition(e.to_string()),
        NoethError::NotPrime(p) => schema_at(text, &format!("{p}"), e.to_string()),
        NoethError::NoBranches => schema_at(text, "\"branches\"", e.to_string()),
        _ => schema_at(text, "\"branches\"", e.to_string()),
    }
}

fn scatter_error(text: &str, e: ScatterError) -> InstanceError {
    match &e {
        ScatterError::ExtraLabel(k) | ScatterError::NotOneDimensional(k) => schema_at(text, &format!("\"{k}\""), e.to_string()),
        _ => schema_at(text, "\"labels\"", e.to_string()),
    }
}

fn abelian_error(text: &str, key: &str, e: AbelianError) -> InstanceError {
    match e {
        AbelianError::Shape(_) => schema_at(text, key, e.to_string()),
        other => InstanceError::Precondition(other.to_string()),
    }
}

fn matrix(rows: &Rows, cols: usize) -> Option<IntMatrix> {
    if rows.iter().any(|r| r.len() != cols) {
        return None;
    }
    IntMatrix::from_rows_with_cols(rows, cols)
}

struct Builder<'a> {
    text: &'a str,
}

impl Builder<'_> {
    fn group(&self, key: &str, g: &GroupSpec) -> Result<FgGroup, InstanceError> {
        match (g.gens, &g.rels, &g.torsion, g.rank) {
            (Some(n), rels, None, None) => {
                let cols: Vec<Vec<BigInt>> =
                    rels.iter().flatten().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
                if cols.iter().any(|c| c.len() != n) {
                    return Err(schema_at(self.text, key, format!("every relation needs {n} entries")));
                }
                FgGroup::new(n, IntMatrix::from_columns(n, &cols)).map_err(|e| abelian_error(self.text, key, e))
            }
            (None, None, t, r) if t.is_some() || r.is_some() => {
                let t: Vec<BigInt> = t.iter().flatten().map(|&x| BigInt::from(x)).collect();
                if t.iter().any(|x| x < &BigInt::from(1)) {
                    return Err(schema_at(self.text, key, "torsion orders must be positive"));
                }
                Ok(FgGroup::from_invariants(&t, r.unwrap_or(0)))
            }
            _ => Err(schema_at(self.text, key, "a group is {gens, rels} or {torsion, rank}")),
        }
    }

    fn hom(&self, key: &str, source: FgGroup, target: FgGroup, m: &Rows) -> Result<FgHom, InstanceError> {
        if m.len() != target.generators() {
            return Err(schema_at(self.text, key, format!("matrix needs {} rows", target.generators())));
        }
        let mat = matrix(m, source.generators())
            .ok_or_else(|| schema_at(self.text, key, format!("matrix rows need {} entries", source.generators())))?;
        FgHom::new(source, target, mat).map_err(|e| abelian_error(self.text, key, e))
    }

    fn hom_spec(&self, key: &str, h: &HomSpec) -> Result<FgHom, InstanceError> {
        let s = self.group(key, &h.source)?;
        let t = self.group(key, &h.target)?;
        self.hom(key, s, t, &h.matrix)
    }

    fn ses(&self, key: &str, s: &SesSpec) -> Result<ShortExactSeq, InstanceError> {
        let inj = self.hom_spec(key, &s.inj)?;
        let surj = self.hom_spec(key, &s.surj)?;
        ShortExactSeq::new(inj, surj).map_err(|e| abelian_error(self.text, key, e))
    }
}

fn diagram(text: &str, f: DiagramFile) -> Result<Diagram, InstanceError> {
    let b = Builder { text };
    let given = [f.group.is_some(), f.hom.is_some(), f.ses.is_some(), f.snake.is_some(), f.amalgam.is_some(), f.ext_retract.is_some()];
    if given.iter().filter(|&&x| x).count() != 1 {
        return Err(schema_at(text, "\"kind\"", "a group_diagram holds exactly one of group, hom, ses, snake, amalgam, ext_retract"));
    }
    if let Some(g) = &f.group {
        return Ok(Diagram::Group(b.group("\"group\"", g)?));
    }
    if let Some(h) = &f.hom {
        return Ok(Diagram::Hom(b.hom_spec("\"hom\"", h)?));
    }
    if let Some(s) = &f.ses {
        return Ok(Diagram::Ses(b.ses("\"ses\"", s)?));
    }
    if let Some(s) = &f.snake {
        let key = "\"snake\"";
        let top = b.ses(key, &s.top)?;
        let bottom = b.ses(key, &s.bottom)?;
        let fh = b.hom("\"f\"", top.left().clone(), bottom.left().clone(), &s.f)?;
        let gh = b.hom("\"g\"", top.mid().clone(), bottom.mid().clone(), &s.g)?;
        let hh = b.hom("\"h\"", top.right().clone(), bottom.right().clone(), &s.h)?;
        let d = SnakeDiagram::new(top, bottom, fh, gh, hh).map_err(|e| abelian_error(text, key, e))?;
        return Ok(Diagram::Snake(Box::new(d)));
    }
    if let Some(a) = &f.amalgam {
        let key = "\"amalgam\"";
        let g = b.group(key, &a.g)?;
        let mut parts = Vec::new();
        for p in &a.parts {
            let ag = b.group(key, &p.a)?;
            let bg = b.group(key, &p.b)?;
            parts.push(AmalgamPart {
                phi: b.hom("\"phi\"", g.clone(), ag.clone(), &p.phi)?,
                pi: b.hom("\"pi\"", ag.clone(), bg, &p.pi)?,
                theta: b.hom("\"theta\"", ag, g.clone(), &p.theta)?,
            });
        }
        if parts.is_empty() {
            return Err(schema_at(text, "\"parts\"", "an amalgam needs at least one part"));
        }
        return Ok(Diagram::Amalgam { g, parts });
    }
    let e = f.ext_retract.expect("exactly one diagram is present");
    let h = &e.hypotheses;
    let hypotheses = GridHypotheses {
        units_equal: h.units_equal,
        units_quotient_free: h.units_quotient_free,
        locpic_free: h.locpic_free,
        inv_d_free: h.inv_d_free,
    };
    let grid = match &e.grid {
        None => None,
        Some(gs) => {
            let key = "\"grid\"";
            let rows = [b.ses(key, &gs.rows[0])?, b.ses(key, &gs.rows[1])?, b.ses(key, &gs.rows[2])?];
            let cols = [b.ses(key, &gs.cols[0])?, b.ses(key, &gs.cols[1])?, b.ses(key, &gs.cols[2])?];
            Some(Box::new(ExtRetractGrid::new(rows, cols).map_err(|e| abelian_error(text, key, e))?))
        }
    };
    Ok(Diagram::ExtRetract { hypotheses, grid })
}

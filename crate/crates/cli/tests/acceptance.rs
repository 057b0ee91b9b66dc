//! One line per acceptance criterion; exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use common::*;
use igl_cli::{decide, parse_instance, Report};
use igl_core::abelian::{amalgam_quotient, exact_at, snake, split_test, FgHom};
use igl_core::matrix::snf;
use igl_core::noeth::{decide_noeth, FieldDesc, NoethCase, NoethInstance};
use igl_core::prufer::{decide_div_free, decide_inv_free, PrimeNode, SpecTree};
use igl_core::scattered::{cb_derivative, cb_rank, escape_index, Ordinal, ScatterError, ScatteredSpace};
use igl_core::valgroup::{div_of_valuation, Slot, ValueTower};
use igl_core::Verdict;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn snf_suite() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for case in 0..1000 {
        let (rows, cols) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let entries = random_entries(&mut r, rows, cols, -20, 20);
        let a = to_matrix(&entries, cols);
        let f = snf(&a);
        ensure!(&(&f.u * &a) * &f.v == f.s, "case {case}: U·A·V differs from S");
        ensure!(f.u.determinant().magnitude().is_one() && f.v.determinant().magnitude().is_one(), "case {case}: transform not unimodular");
        let d = f.diagonal();
        for i in 0..f.s.rows() {
            for j in 0..f.s.cols() {
                ensure!(i == j || f.s[(i, j)].is_zero(), "case {case}: S not diagonal");
            }
        }
        ensure!(d.iter().all(|x| *x >= BigInt::zero()), "case {case}: negative diagonal");
        ensure!(
            d.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() }),
            "case {case}: divisibility chain broken"
        );
        let got: Vec<i128> = d.iter().filter(|x| !x.is_zero()).map(|x| i128::try_from(x).unwrap()).collect();
        ensure!(got == invariant_factors_by_minors(&entries), "case {case}: invariant factors differ from the minors oracle");
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "took {secs:.2} s");
    Ok(format!("1000 matrices in {secs:.2} s"))
}

fn snake_suite() -> Outcome {
    let mut r = rng(2);
    for case in 0..200 {
        let d = random_snake(&mut r);
        let six = snake(&d).map_err(|e| format!("case {case}: {e}"))?;
        six.verify().map_err(|e| format!("case {case}: {e}"))?;
        ensure!(six.maps[0].is_injective() && six.maps[4].is_surjective(), "case {case}: ends not exact");
        for i in 0..4 {
            ensure!(exact_at(&six.maps[i], &six.maps[i + 1]), "case {case}: not exact at position {}", i + 1);
        }
    }
    Ok("200 diagrams, six-term sequence exact at every position".into())
}

fn amalgam_suite() -> Outcome {
    let mut r = rng(3);
    for case in 0..100 {
        let c = random_amalgam(&mut r, 4, 3, 6);
        let out = amalgam_quotient(&c.g, &c.parts).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(out.psi.is_surjective(), "case {case}: ψ not surjective");
        let phis: Vec<&FgHom> = c.parts.iter().map(|p| &p.phi).collect();
        let diag = FgHom::pairing(&phis).map_err(|e| e.to_string())?;
        let diag = FgHom::new(c.g.clone(), out.psi.source().clone(), diag.matrix().clone()).map_err(|e| e.to_string())?;
        ensure!(exact_at(&diag, &out.psi), "case {case}: ker ψ differs from φ(G)");
        let mut orders = c.b_orders.concat();
        for _ in 1..c.parts.len() {
            orders.extend(&c.g_orders);
        }
        let (torsion, rank) = invariants_of_cyclics(&orders);
        ensure!(
            torsion_u64(&out.quotient) == torsion && out.quotient.free_rank() == rank,
            "case {case}: invariants {:?}/{} against oracle {torsion:?}/{rank}",
            torsion_u64(&out.quotient),
            out.quotient.free_rank()
        );
    }
    Ok("100 instances, invariants equal those of B₁ ⊕ … ⊕ Bₙ ⊕ G^(n−1)".into())
}

fn corpus_verdict(file: &str, text: &str) -> Result<Report, String> {
    let inst = parse_instance(text).map_err(|e| format!("{file}: {e}"))?;
    decide(&inst).map_err(|e| format!("{file}: {e}"))
}

fn noeth_suite() -> Outcome {
    let cases = [
        ("monomial_curve", include_str!("../corpus/monomial_curve.json"), "NotFree"),
        ("zeta7_pullback", include_str!("../corpus/zeta7_pullback.json"), "Free"),
        ("f2_square_subfield", include_str!("../corpus/f2_square_subfield.json"), "NotFree"),
        ("char3_two_branches", include_str!("../corpus/char3_two_branches.json"), "NotFree"),
    ];
    for (file, text, want) in cases {
        let rep = corpus_verdict(file, text)?;
        ensure!(rep.verdict == want, "{file}: {} (expected {want})", rep.verdict);
    }
    let start = Instant::now();
    let fields = small_fields(64);
    let mut checked = 0;
    for &(p, a) in &fields {
        let ext: Vec<(u64, u32)> = fields.iter().copied().filter(|&(q, b)| q == p && b % a == 0).collect();
        for (i, &l1) in ext.iter().enumerate() {
            for &l2 in &ext[i..] {
                let f = |(p, r): (u64, u32)| FieldDesc::finite(p, r).unwrap();
                let inst = NoethInstance::new(f((p, a)), vec![(f(l1), 1), (f(l2), 1)]);
                let d = decide_noeth(&inst).map_err(|e| e.to_string())?;
                ensure!(d.case == NoethCase::C, "F{p}^{a} ⊆ F{}^{}, F{}^{}: case {:?}", l1.0, l1.1, l2.0, l2.1, d.case);
                let all_f2 = (p, a) == (2, 1) && l1 == (2, 1) && l2 == (2, 1);
                ensure!(
                    (d.verdict == Verdict::Free) == all_f2,
                    "F{p}^{a} ⊆ F{}^{}, F{}^{}: {}",
                    l1.0,
                    l1.1,
                    l2.0,
                    l2.1,
                    d.verdict
                );
                checked += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "exhaustion took {secs:.3} s");
    Ok(format!("4 corpus instances; {checked} finite-field instances in {secs:.3} s"))
}

const MIXED: [Slot; 5] = [Slot::Z, Slot::Z, Slot::Q, Slot::R, Slot::Free(2)];

fn random_suite() -> Vec<SpecTree> {
    let mut r = rng(5);
    (0..100).map(|_| SpecTree::from_record(&random_tree(&mut r, 12, 4, &MIXED), true).unwrap()).collect()
}

fn chain(labels: &[Slot]) -> SpecTree {
    let n = labels.len();
    let mut node = PrimeNode::leaf(format!("p{n}"), vec![labels[n - 1]]);
    for i in (1..n).rev() {
        node = PrimeNode::inner(format!("p{i}"), vec![labels[i - 1]], vec![node]);
    }
    SpecTree::from_record(&PrimeNode::inner("p0", vec![], vec![node]), true).unwrap()
}

fn prufer_suite() -> Outcome {
    let mut r = rng(55);
    for (i, t) in random_suite().iter().enumerate() {
        let base = decide_inv_free(t);
        for _ in 0..4 {
            let p = t.permuted(&mut shuffler(&mut r));
            let d = decide_inv_free(&p);
            ensure!(d.verdict == base.verdict, "tree {i}: verdict changes under reordering");
            ensure!(canon(&d.expr) == canon(&base.expr), "tree {i}: {} against {}", d.expr, base.expr);
        }
    }
    let mut shapes = 0;
    for n in 1..=6 {
        for parents in all_parent_arrays(n) {
            let labels: Vec<Vec<Slot>> = (0..n).map(|i| if i == 0 { vec![] } else { vec![Slot::Z] }).collect();
            let t = SpecTree::from_record(&tree_from_parents(&parents, &labels), true).unwrap();
            let d = decide_inv_free(&t);
            let rank = d.expr.fg_rank().ok_or_else(|| format!("{parents:?}: {} is not finitely generated", d.expr))?;
            let want = contracted_weighted_edges(&parents);
            ensure!(d.verdict == Verdict::Free && rank == want, "{parents:?}: rank {rank}, oracle {want}");
            shapes += 1;
        }
    }
    let mut chains = 0;
    let slots = [Slot::Z, Slot::Q, Slot::R];
    for len in 1..=4u32 {
        for code in 0..3usize.pow(len) {
            let labels: Vec<Slot> = (0..len).map(|i| slots[code / 3usize.pow(i) % 3]).collect();
            let tower = ValueTower::new(labels.iter().rev().copied().collect());
            let (want, _) = div_of_valuation(&tower, tower.top() == Some(Slot::Z), true);
            let d = decide_div_free(&chain(&labels));
            ensure!(d.expr.to_string() == want.to_string(), "chain {labels:?}: {} against {want}", d.expr);
            let free = labels.iter().all(|&s| s == Slot::Z);
            ensure!((d.verdict == Verdict::Free) == free, "chain {labels:?}: {}", d.verdict);
            chains += 1;
        }
    }
    Ok(format!(
        "100 trees x 4 reorderings; {shapes} all-Z trees, rank = contracted edge count weighted by composed-label length; {chains} chains"
    ))
}

fn stand_in(t: &SpecTree) -> SpecTree {
    fn go(n: &PrimeNode) -> PrimeNode {
        PrimeNode {
            id: n.id.clone(),
            label: n.label.iter().map(|s| if s.is_discrete() { *s } else { Slot::Z }).collect(),
            children: n.children.iter().map(go).collect(),
            branched: n.branched,
        }
    }
    SpecTree::from_record(&go(&t.to_record()), t.locally_finite).unwrap()
}

fn cut_suite() -> Outcome {
    let (mut checked, mut skipped) = (0, 0);
    for (i, t) in random_suite().iter().enumerate() {
        for (which, tree) in [("tree", t.clone()), ("stand-in", stand_in(t))] {
            for cut in decide_inv_free(&tree).cuts {
                let Some(s) = cut.instantiate() else {
                    ensure!(which == "tree", "{which} {i}: cut at {} did not instantiate", cut.prime);
                    skipped += 1;
                    continue;
                };
                ensure!(split_test(&s).splits(), "{which} {i}: cut at {} does not split", cut.prime);
                checked += 1;
            }
        }
    }
    ensure!(checked > 0, "no cuts emitted");
    Ok(format!("{checked} cuts exact and split; {skipped} cuts with a non-finitely-generated term replaced by stand-ins"))
}

fn library_contains(spaces: &[ScatteredSpace], n: usize, y: Tri) -> bool {
    let mut x = y;
    for _ in 0..n {
        match derived_preimage(x) {
            Some(z) => x = z,
            None => return false,
        }
    }
    spaces[n].contains(&ordinal_of(x))
}

fn cb_suite() -> Outcome {
    let grid = sample_grid(3, 7);
    let mut bounds = 0;
    for a in 0..=3 {
        for b in 0..=3 {
            for c in 0..=3 {
                let bound = (a, b, c);
                let mut oracle = DerivedOracle::new(bound);
                let mut spaces = vec![ScatteredSpace::interval(ordinal_of(bound))];
                while !spaces.last().unwrap().is_empty() {
                    let next = cb_derivative(spaces.last().unwrap());
                    spaces.push(next);
                }
                for n in 0..spaces.len() {
                    for &y in &grid {
                        ensure!(
                            library_contains(&spaces, n, y) == oracle.contains(n as u32, y),
                            "bound {}: derivative {n} disagrees at {}",
                            ordinal_of(bound),
                            ordinal_of(y)
                        );
                    }
                }
                let rank = oracle.rank(&grid);
                ensure!(cb_rank(&spaces[0]) == Ordinal::finite(rank.into()), "bound {}: rank", ordinal_of(bound));
                bounds += 1;
            }
        }
    }
    for k in 0..=5 {
        let got = cb_rank(&ScatteredSpace::interval(Ordinal::omega_pow(k)));
        ensure!(got == Ordinal::finite(u64::from(k) + 1), "cb_rank([0, w^{k}]) = {got}");
    }
    let mut r = rng(7);
    let (mut rejected, mut accepted) = (0, 0);
    for _ in 0..2000 {
        let mut starts: Vec<Ordinal> =
            (0..r.gen_range(1..6)).map(|_| ordinal_of((r.gen_range(0..=2), r.gen_range(0..=3), r.gen_range(0..=3)))).collect();
        starts.push(Ordinal::zero());
        starts.sort();
        starts.dedup();
        if starts.len() < 2 {
            continue;
        }
        let cut = r.gen_range(1..starts.len());
        let runs: Vec<(Ordinal, bool)> = starts.iter().enumerate().map(|(i, o)| (o.clone(), i < cut)).collect();
        let g = tri_of(&starts[cut]);
        let limit = g.2 == 0;
        match escape_index(&runs, &ordinal_of((3, 0, 0))) {
            Err(ScatterError::EscapesAtLimit(_)) if limit => rejected += 1,
            Ok(x) if !limit && tri_of(&x) == g => accepted += 1,
            other => return Err(format!("trace {runs:?}: {other:?}")),
        }
    }
    ensure!(rejected > 0 && accepted > 0, "trace sample did not cover both outcomes");
    Ok(format!("{bounds} bounds against the limit-point oracle; ranks of [0, w^k]; {rejected} limit escapes rejected, {accepted} accepted"))
}

fn igl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_igl")).args(args).output().expect("binary runs")
}

fn cli_suite() -> Outcome {
    let out = igl(&["selftest"]);
    ensure!(out.status.success(), "selftest failed:\n{}", String::from_utf8_lossy(&out.stdout));
    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let mut files: Vec<_> = std::fs::read_dir(corpus).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    for f in &files {
        let out = igl(&["decide", f.to_str().unwrap(), "--format", "json", "--trace", "full"]);
        ensure!(out.status.success(), "{}: exit {:?}", f.display(), out.status.code());
        let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
        let text = text.trim_end_matches('\n');
        let back = Report::from_json(text).map_err(|e| format!("{}: {e}", f.display()))?;
        ensure!(back.to_json() == text, "{}: report does not round-trip", f.display());
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let malformed = [
        ("syntax.json", "{\n  \"v\": 1,\n  \"kind\": \"krull\",\n  \"domain\": \"ufd\"\n  \"name\": \"x\"\n}\n", 5),
        ("version.json", "{\n  \"v\": 2,\n  \"kind\": \"krull\",\n  \"domain\": \"ufd\"\n}\n", 2),
        ("field.json", "{\n  \"v\": 1,\n  \"kind\": \"krull\",\n  \"domian\": \"ufd\"\n}\n", 4),
        ("kind.json", "{\n  \"v\": 1,\n  \"kind\": \"ring\"\n}\n", 3),
        ("prime.json", "{\n  \"v\": 1,\n  \"kind\": \"noeth_local\",\n  \"k\": {\"finite\": {\"p\": 4, \"r\": 1}},\n  \"branches\": [{\"L\": {\"finite\": {\"p\": 4, \"r\": 1}}, \"e\": 1}]\n}\n", 4),
    ];
    for (name, text, line) in malformed {
        let path = dir.path().join(name);
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let out = igl(&["decide", path.to_str().unwrap()]);
        let err = String::from_utf8_lossy(&out.stderr);
        ensure!(out.status.code() == Some(2), "{name}: exit {:?}", out.status.code());
        let tag = format!("{}:{line}:", path.display());
        ensure!(err.contains(&tag), "{name}: diagnostic without line {line}: {err}");
    }
    Ok(format!("selftest green; {} reports round-trip; {} malformed files exit 2 with line diagnostics", files.len(), malformed.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Smith normal form suite", snf_suite),
        ("snake lemma on random diagrams", snake_suite),
        ("amalgam quotient", amalgam_suite),
        ("Noetherian corpus and finite-field exhaustion", noeth_suite),
        ("Prufer recursion", prufer_suite),
        ("divided-cut sequences", cut_suite),
        ("Cantor-Bendixson machinery", cb_suite),
        ("CLI", cli_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

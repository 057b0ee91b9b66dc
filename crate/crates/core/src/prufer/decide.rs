use num_bigint::BigInt;

use super::tree::{spec_hi, SpecTree};
use crate::abelian::{FgGroup, FgHom, ShortExactSeq};
use crate::cert::{anchor, Certificate, Step, Verdict};
use crate::matrix::IntMatrix;
use crate::valgroup::{div_of_valuation, freeness_verdict, GroupExpr, Slot, ValueTower};

/// One application of the divided-prime cut
/// `0 → Inv(D/P) → Inv(D) → Γ(D_P) → 0`, where `D` is the domain at the
/// current stage of the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividedCut {
    pub prime: String,
    pub gamma: ValueTower,
    pub quotient: GroupExpr,
    pub total: GroupExpr,
}

impl DividedCut {
    /// The sequence on finitely generated stand-ins, or `None` when a term
    /// is not finitely generated. The middle group is presented in a
    /// sheared basis so the maps are not plain coordinate maps.
    pub fn instantiate(&self) -> Option<ShortExactSeq> {
        let a = self.quotient.to_fg()?;
        let c = self.gamma.to_expr().to_fg()?;
        let total = self.total.to_fg()?;
        let (na, nc) = (a.generators(), c.generators());
        let n = na + nc;
        if total.generators() != n {
            return None;
        }
        let w = shear(n);
        let w_inv = shear_inverse(n);
        let mid = FgGroup::new(n, &w * total.relations()).ok()?;
        let inj = &w * &IntMatrix::identity(n).submatrix(0..n, nc..n);
        let surj = &IntMatrix::identity(n).submatrix(0..nc, 0..n) * &w_inv;
        let inj = FgHom::new(a, mid.clone(), inj).ok()?;
        let surj = FgHom::new(mid, c, surj).ok()?;
        ShortExactSeq::new(inj, surj).ok()
    }
}

/// `I + N` with ones on the subdiagonal.
fn shear(n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for i in 1..n {
        m[(i, i - 1)] = BigInt::from(1);
    }
    m
}

fn shear_inverse(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..=i {
            m[(i, j)] = BigInt::from(if (i - j) % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct InvDecision {
    pub verdict: Verdict,
    /// `Inv(D)`, or `?` when the hypothesis gate fails.
    pub expr: GroupExpr,
    pub certificate: Certificate,
    pub cuts: Vec<DividedCut>,
    /// Leaf whose value group is not free, when the verdict is `NotFree`.
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct DivDecision {
    pub verdict: Verdict,
    pub expr: GroupExpr,
    pub certificate: Certificate,
    pub witness: Option<String>,
}

fn tower_free(t: &ValueTower) -> bool {
    freeness_verdict(&t.to_expr()).verdict == Verdict::Free
}

/// First node of `Spec_hi` that is neither the root nor maximal and whose
/// `Γ(D_P)` is not free.
fn hypothesis_failure(h: &SpecTree) -> Option<(String, ValueTower)> {
    (1..h.len()).filter(|&i| !h.is_leaf_idx(i)).find_map(|i| {
        let g = h.gamma_idx(i);
        (!tower_free(&g)).then(|| (h.nodes[i].id.clone(), g))
    })
}

fn contract(tree: &SpecTree, cert: &mut Certificate) -> SpecTree {
    let h = spec_hi(tree);
    let branching: Vec<&str> = super::tree::branching_points(tree);
    cert.push(
        Step::new("branching points are the infima of the maximal ideals above them", anchor::BRANCHPOINT)
            .with("branching", format!("{{{}}}", branching.join(","))),
    );
    cert.push(
        Step::new("Spec_hi(D) is finite: contract to (0), Max(D) and the branching points", anchor::SPECHI_SEMILOC)
            .with("nodes", h.len()),
    );
    h
}

/// Freeness of `Inv(D)` for a Prüfer domain modelled by a finite tree.
///
/// The expression follows the induction on `Spec_hi`: several dependency
/// classes give a direct sum, a single class is cut at the divided prime
/// `P = inf Max(D)` as `Γ(D_P) ⊕ Inv(D/P)`, and a valuation domain gives its
/// value group.
pub fn decide_inv_free(tree: &SpecTree) -> InvDecision {
    let mut cert = Certificate::new();
    let h = contract(tree, &mut cert);
    if let Some((p, g)) = hypothesis_failure(&h) {
        cert.push(
            Step::new("hypothesis fails: Γ(D_P) is not known to be free", anchor::CUTBRANCH_INV)
                .with("P", &p)
                .with("Γ(D_P)", &g),
        );
        return InvDecision { verdict: Verdict::Unknown, expr: GroupExpr::Unknown, certificate: cert, cuts: Vec::new(), witness: None };
    }
    let mut cuts = Vec::new();
    let expr = inv_rec(&h, &mut cert, &mut cuts);
    let bad = h.leaf_indices().into_iter().find(|&i| !tower_free(&h.gamma_idx(i)));
    let (verdict, witness) = match bad {
        None => (Verdict::Free, None),
        Some(i) => (Verdict::NotFree, Some(h.nodes[i].id.clone())),
    };
    let mut step = Step::new("Inv(D) is free iff Γ(D_M) is free for every maximal M", anchor::CUTBRANCH_INV)
        .with("verdict", verdict);
    if let Some(w) = &witness {
        step = step.with("M", w).with("Γ(D_M)", h.gamma_idx(h.index_of(w).expect("leaf of the tree")));
    }
    cert.push(step);
    if tree.locally_finite {
        cert.push(Step::new("finite tree: locally finite and finite-dimensional", anchor::CUTBRANCH_LOCFIN_INV));
    }
    InvDecision { verdict, expr, certificate: cert, cuts, witness }
}

fn inv_rec(h: &SpecTree, cert: &mut Certificate, cuts: &mut Vec<DividedCut>) -> GroupExpr {
    let root = &h.nodes[0];
    match root.children.len() {
        0 => {
            cert.push(Step::new("a field has trivial Inv", anchor::INV_VAL));
            GroupExpr::trivial()
        }
        1 => {
            let c = root.children[0];
            let gamma = h.nodes[c].label.clone();
            if h.is_leaf_idx(c) {
                cert.push(Step::new("Inv(V) ≅ Γ(V) for a valuation domain", anchor::INV_VAL).with("tower", &gamma));
                return gamma.to_expr();
            }
            let before = cuts.len();
            cuts.push(DividedCut {
                prime: h.nodes[c].id.clone(),
                gamma: gamma.clone(),
                quotient: GroupExpr::Unknown,
                total: GroupExpr::Unknown,
            });
            let quotient = inv_rec(&h.rerooted_at(c), cert, cuts);
            let total = GroupExpr::sum([gamma.to_expr(), quotient.clone()]);
            cuts[before].quotient = quotient;
            cuts[before].total = total.clone();
            cert.push(
                Step::new("P = inf Max(D) is divided and Γ(D_P) is free: Inv(D) ≅ Γ(D_P) ⊕ Inv(D/P)", anchor::DIVIDED_FREE)
                    .with("P", &h.nodes[c].id)
                    .with("Γ(D_P)", &gamma),
            );
            total
        }
        k => {
            cert.push(
                Step::new("the standard decomposition is a Jaffard family: Inv(D) ≅ ⊕ Inv(D_i)", anchor::JAFFARD)
                    .with("classes", k),
            );
            let parts: Vec<GroupExpr> = root.children.iter().map(|&c| inv_rec(&h.class_tree(c), cert, cuts)).collect();
            GroupExpr::sum(parts)
        }
    }
}

/// Freeness of `Div(D)`; needs every maximal ideal branched.
pub fn decide_div_free(tree: &SpecTree) -> DivDecision {
    let mut cert = Certificate::new();
    let unknown = |cert| DivDecision { verdict: Verdict::Unknown, expr: GroupExpr::Unknown, certificate: cert, witness: None };
    if let Some(i) = tree.leaf_indices().into_iter().find(|&i| !tree.nodes[i].branched) {
        cert.push(
            Step::new("hypothesis fails: a maximal ideal is unbranched", anchor::CUTBRANCH_DIV).with("M", &tree.nodes[i].id),
        );
        return unknown(cert);
    }
    let h = contract(tree, &mut cert);
    if let Some((p, g)) = hypothesis_failure(&h) {
        cert.push(
            Step::new("hypothesis fails: Γ(D_P) is not known to be free", anchor::CUTBRANCH_DIV)
                .with("P", &p)
                .with("Γ(D_P)", &g),
        );
        return unknown(cert);
    }
    let expr = div_rec(&h, &mut cert);
    let leaves = h.leaf_indices();
    let not_fg = leaves.iter().copied().find(|&i| h.nodes[i].label.top() != Some(Slot::Z));
    let not_free = leaves.iter().copied().find(|&i| !tower_free(&h.gamma_idx(i)));
    let (verdict, witness) = match not_fg.or(not_free) {
        None => (Verdict::Free, None),
        Some(i) => (Verdict::NotFree, Some(h.nodes[i].id.clone())),
    };
    let mut step = Step::new("Div(D) is free iff every maximal ideal is finitely generated", anchor::CUTBRANCH_DIV)
        .with("verdict", verdict);
    if let Some(w) = &witness {
        let g = h.gamma_idx(h.index_of(w).expect("leaf of the tree"));
        let reason = if not_fg.is_some() {
            format!("Div(D_M) ≅ R ⊕ Γ(V_P) with Γ(V_P) = {}", ValueTower::new(g.slots()[1..].to_vec()))
        } else {
            format!("Div(D_M) ≅ Γ(D_M) = {g} is not free")
        };
        step = step.with("M", w).with("reason", reason);
    }
    cert.push(step);
    DivDecision { verdict, expr, certificate: cert, witness }
}

fn div_rec(h: &SpecTree, cert: &mut Certificate) -> GroupExpr {
    let root = &h.nodes[0];
    match root.children.len() {
        0 => {
            cert.push(Step::new("a field has trivial Div", anchor::DIV_VAL_B));
            GroupExpr::trivial()
        }
        1 => {
            let c = root.children[0];
            let gamma = h.nodes[c].label.clone();
            if h.is_leaf_idx(c) {
                let principal = gamma.top() == Some(Slot::Z);
                let (e, sub) = div_of_valuation(&gamma, principal, h.nodes[c].branched);
                cert.extend(sub);
                return e;
            }
            cert.push(
                Step::new("P = inf Max(D) is divided and Γ(D_P) is free: Div(D) ≅ Γ(D_P) ⊕ Div(D/P)", anchor::DIVIDED_FREE)
                    .with("P", &h.nodes[c].id)
                    .with("Γ(D_P)", &gamma),
            );
            GroupExpr::sum([gamma.to_expr(), div_rec(&h.rerooted_at(c), cert)])
        }
        k => {
            cert.push(
                Step::new("the standard decomposition is a Jaffard family: Div(D) ≅ ⊕ Div(D_i)", anchor::JAFFARD)
                    .with("classes", k),
            );
            let parts: Vec<GroupExpr> = root.children.iter().map(|&c| div_rec(&h.class_tree(c), cert)).collect();
            GroupExpr::sum(parts)
        }
    }
}

#[derive(Clone, Debug)]
pub struct StronglyDiscreteDecision {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

/// Strongly discrete trees: every step is `Z`. `Free` when the primes
/// outside the top-dimensional ones are finitely many or the domain is
/// locally finite. Never answers `NotFree`.
pub fn strongly_discrete_decide(tree: &SpecTree, non_top_dim_finite: bool) -> StronglyDiscreteDecision {
    let mut cert = Certificate::new();
    let idempotent = tree
        .nodes
        .iter()
        .find(|n| n.label.slots().iter().any(|s| !matches!(s, Slot::Z | Slot::Free(1))));
    if let Some(n) = idempotent {
        cert.push(
            Step::new("not strongly discrete: a step is not Z", anchor::STRONGLY_DISCRETE)
                .with("node", &n.id)
                .with("label", &n.label),
        );
        return StronglyDiscreteDecision { verdict: Verdict::Unknown, certificate: cert };
    }
    if non_top_dim_finite {
        cert.push(Step::new("Spec(D) minus the top-dimensional primes is finite", anchor::STRONGLY_DISCRETE));
        return StronglyDiscreteDecision { verdict: Verdict::Free, certificate: cert };
    }
    if tree.locally_finite {
        cert.push(Step::new("locally finite strongly discrete Prüfer domain", anchor::VAL_STRONGLYDISC));
        return StronglyDiscreteDecision { verdict: Verdict::Free, certificate: cert };
    }
    cert.push(Step::new("open in general for strongly discrete Prüfer domains", anchor::CONJ_STRONGLY_DISCRETE));
    StronglyDiscreteDecision { verdict: Verdict::Unknown, certificate: cert }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::split_test;
    use crate::prufer::PrimeNode;
    use Slot::*;

    fn tree(rec: PrimeNode) -> SpecTree {
        SpecTree::from_record(&rec, true).unwrap()
    }

    fn y_tree(root_label: Slot) -> SpecTree {
        tree(PrimeNode::inner(
            "0",
            vec![],
            vec![PrimeNode::inner("P", vec![root_label], vec![PrimeNode::leaf("M1", vec![Z]), PrimeNode::leaf("M2", vec![Z])])],
        ))
    }

    #[test]
    fn y_tree_is_free_of_rank_three() {
        let d = decide_inv_free(&y_tree(Z));
        assert_eq!(d.verdict, Verdict::Free);
        assert_eq!(d.expr.to_fg().unwrap(), FgGroup::free(3));
        assert_eq!(d.cuts.len(), 1);
        let s = d.cuts[0].instantiate().unwrap();
        assert!(split_test(&s).splits());
        assert!(d.certificate.mentions(anchor::DIVIDED_FREE));
        assert!(d.certificate.mentions(anchor::JAFFARD));
    }

    #[test]
    fn chain_and_gate() {
        let chain = tree(PrimeNode::inner("0", vec![], vec![PrimeNode::leaf("M", vec![Z])]));
        let d = decide_inv_free(&chain);
        assert_eq!((d.verdict, d.expr.to_string()), (Verdict::Free, "Z".to_string()));
        assert_eq!(decide_inv_free(&y_tree(Q)).verdict, Verdict::Unknown);
    }

    #[test]
    fn non_free_leaf() {
        let t = tree(PrimeNode::inner("0", vec![], vec![PrimeNode::leaf("A", vec![Z]), PrimeNode::leaf("B", vec![Q])]));
        let d = decide_inv_free(&t);
        assert_eq!(d.verdict, Verdict::NotFree);
        assert_eq!(d.witness.as_deref(), Some("B"));
        assert_eq!(d.expr.to_string(), "Z ⊕ Q");
    }

    #[test]
    fn div_cases() {
        assert_eq!(decide_div_free(&y_tree(Z)).verdict, Verdict::Free);
        let chain = tree(PrimeNode::inner("0", vec![], vec![PrimeNode::inner("P", vec![Z], vec![PrimeNode::leaf("M", vec![Q])])]));
        let d = decide_div_free(&chain);
        assert_eq!(d.verdict, Verdict::NotFree);
        assert_eq!(d.expr.to_string(), "R ⊕ Z");
        assert_eq!(decide_div_free(&SpecTree::field()).verdict, Verdict::Free);
        let mut rec = PrimeNode::inner("0", vec![], vec![PrimeNode::leaf("M", vec![Z])]);
        rec.children[0].branched = false;
        assert_eq!(decide_div_free(&tree(rec)).verdict, Verdict::Unknown);
    }

    #[test]
    fn strongly_discrete() {
        assert_eq!(strongly_discrete_decide(&y_tree(Z), false).verdict, Verdict::Free);
        assert_eq!(strongly_discrete_decide(&y_tree(Q), true).verdict, Verdict::Unknown);
        let mut t = y_tree(Z);
        t.locally_finite = false;
        let d = strongly_discrete_decide(&t, false);
        assert_eq!(d.verdict, Verdict::Unknown);
        assert!(d.certificate.mentions(anchor::CONJ_STRONGLY_DISCRETE));
        assert_eq!(strongly_discrete_decide(&t, true).verdict, Verdict::Free);
    }
}

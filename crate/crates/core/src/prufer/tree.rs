use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::valgroup::{Slot, ValueTower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("the root (zero ideal) carries no label")]
    RootLabel,
    #[error("node {0} has an empty label")]
    EmptyLabel(String),
    #[error("duplicate node id {0}")]
    DuplicateId(String),
    #[error("no node with id {0}")]
    UnknownNode(String),
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// Nested node record used by instance files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeNode {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub label: Vec<Slot>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<PrimeNode>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub branched: bool,
}

impl PrimeNode {
    pub fn leaf(id: impl Into<String>, label: Vec<Slot>) -> Self {
        PrimeNode { id: id.into(), label, children: Vec::new(), branched: true }
    }

    pub fn inner(id: impl Into<String>, label: Vec<Slot>, children: Vec<PrimeNode>) -> Self {
        PrimeNode { id: id.into(), label, children, branched: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Node {
    pub id: String,
    /// Value group of the step from the parent to this prime.
    pub label: ValueTower,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub branched: bool,
}

/// Finite tree of primes of a Prüfer domain; node 0 is the zero ideal and
/// the leaves are the maximal ideals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecTree {
    pub(crate) nodes: Vec<Node>,
    pub locally_finite: bool,
}

impl SpecTree {
    pub fn from_record(root: &PrimeNode, locally_finite: bool) -> Result<Self, TreeError> {
        if !root.label.is_empty() {
            return Err(TreeError::RootLabel);
        }
        let mut tree = SpecTree { nodes: Vec::new(), locally_finite };
        let mut seen = HashSet::new();
        tree.add(root, None, &mut seen)?;
        Ok(tree)
    }

    fn add(&mut self, rec: &PrimeNode, parent: Option<usize>, seen: &mut HashSet<String>) -> Result<usize, TreeError> {
        if !seen.insert(rec.id.clone()) {
            return Err(TreeError::DuplicateId(rec.id.clone()));
        }
        if parent.is_some() && rec.label.is_empty() {
            return Err(TreeError::EmptyLabel(rec.id.clone()));
        }
        let idx = self.nodes.len();
        self.nodes.push(Node {
            id: rec.id.clone(),
            label: ValueTower::new(rec.label.clone()),
            parent,
            children: Vec::new(),
            branched: rec.branched,
        });
        for c in &rec.children {
            let ci = self.add(c, Some(idx), seen)?;
            self.nodes[idx].children.push(ci);
        }
        Ok(idx)
    }

    pub fn to_record(&self) -> PrimeNode {
        self.record_at(0)
    }

    fn record_at(&self, i: usize) -> PrimeNode {
        let n = &self.nodes[i];
        PrimeNode {
            id: n.id.clone(),
            label: n.label.slots().to_vec(),
            children: n.children.iter().map(|&c| self.record_at(c)).collect(),
            branched: n.branched,
        }
    }

    /// A field: the zero ideal alone.
    pub fn field() -> Self {
        SpecTree::from_record(&PrimeNode::leaf("0", vec![]), true).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root_id(&self) -> &str {
        &self.nodes[0].id
    }

    pub(crate) fn index_of(&self, id: &str) -> Result<usize, TreeError> {
        self.nodes.iter().position(|n| n.id == id).ok_or_else(|| TreeError::UnknownNode(id.to_string()))
    }

    pub fn ids(&self) -> Vec<&str> {
        self.nodes.iter().map(|n| n.id.as_str()).collect()
    }

    pub fn children_of(&self, id: &str) -> Result<Vec<&str>, TreeError> {
        let i = self.index_of(id)?;
        Ok(self.nodes[i].children.iter().map(|&c| self.nodes[c].id.as_str()).collect())
    }

    pub fn label_of(&self, id: &str) -> Result<&ValueTower, TreeError> {
        Ok(&self.nodes[self.index_of(id)?].label)
    }

    pub fn is_branched(&self, id: &str) -> Result<bool, TreeError> {
        Ok(self.nodes[self.index_of(id)?].branched)
    }

    pub(crate) fn is_leaf_idx(&self, i: usize) -> bool {
        i != 0 && self.nodes[i].children.is_empty()
    }

    /// Maximal ideals. A field (a lone root) has the zero ideal as its only
    /// maximal ideal but no leaves in this sense.
    pub fn leaves(&self) -> Vec<&str> {
        (0..self.nodes.len()).filter(|&i| self.is_leaf_idx(i)).map(|i| self.nodes[i].id.as_str()).collect()
    }

    pub(crate) fn leaf_indices(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.is_leaf_idx(i)).collect()
    }

    fn depth_idx(&self, i: usize) -> usize {
        let mut d = 0;
        let mut cur = i;
        while let Some(p) = self.nodes[cur].parent {
            d += self.nodes[cur].label.len();
            cur = p;
        }
        d
    }

    /// Krull dimension: the longest chain, counting every slot as a step.
    pub fn dimension(&self) -> usize {
        (0..self.nodes.len()).map(|i| self.depth_idx(i)).max().unwrap_or(0)
    }

    pub(crate) fn gamma_idx(&self, i: usize) -> ValueTower {
        let mut t = ValueTower::empty();
        let mut cur = i;
        while let Some(p) = self.nodes[cur].parent {
            t = t.concat(&self.nodes[cur].label);
            cur = p;
        }
        t
    }

    /// Subtree at `i` as a tree of its own, with `i` as the new zero ideal.
    pub(crate) fn rerooted_at(&self, i: usize) -> SpecTree {
        let mut rec = self.record_at(i);
        rec.label.clear();
        SpecTree::from_record(&rec, self.locally_finite).expect("subtree of a valid tree")
    }

    /// The tree made of the root and the subtree at child `c`.
    pub(crate) fn class_tree(&self, c: usize) -> SpecTree {
        let rec = PrimeNode {
            id: self.nodes[0].id.clone(),
            label: Vec::new(),
            children: vec![self.record_at(c)],
            branched: self.nodes[0].branched,
        };
        SpecTree::from_record(&rec, self.locally_finite).expect("subtree of a valid tree")
    }

    /// Same tree with every children list reordered by `perm(node_id, len)`.
    pub fn permuted(&self, perm: &mut impl FnMut(&str, usize) -> Vec<usize>) -> SpecTree {
        fn go(t: &SpecTree, i: usize, perm: &mut impl FnMut(&str, usize) -> Vec<usize>) -> PrimeNode {
            let n = &t.nodes[i];
            let order = perm(&n.id, n.children.len());
            PrimeNode {
                id: n.id.clone(),
                label: n.label.slots().to_vec(),
                children: order.iter().map(|&k| go(t, n.children[k], perm)).collect(),
                branched: n.branched,
            }
        }
        SpecTree::from_record(&go(self, 0, perm), self.locally_finite).expect("permutation of a valid tree")
    }
}

/// `Γ(D_P)`: the labels along the path from `p` down to the root, `p`'s own
/// step on top. The root gives the empty tower.
pub fn gamma_at(tree: &SpecTree, p: &str) -> Result<ValueTower, TreeError> {
    Ok(tree.gamma_idx(tree.index_of(p)?))
}

pub(crate) fn branching_indices(tree: &SpecTree) -> Vec<usize> {
    (0..tree.nodes.len()).filter(|&i| tree.nodes[i].children.len() >= 2).collect()
}

/// Non-maximal primes equal to the infimum of the maximal ideals above
/// them: in a tree, the nodes with at least two children. The root is
/// listed when it qualifies.
pub fn branching_points(tree: &SpecTree) -> Vec<&str> {
    branching_indices(tree).into_iter().map(|i| tree.nodes[i].id.as_str()).collect()
}

/// Contraction to the root, the maximal ideals and the branching points.
/// Labels along a contracted path are composed, lower steps below.
pub fn spec_hi(tree: &SpecTree) -> SpecTree {
    fn go(t: &SpecTree, i: usize) -> PrimeNode {
        let n = &t.nodes[i];
        let mut children = Vec::new();
        for &c in &n.children {
            let mut cur = c;
            while t.nodes[cur].children.len() == 1 {
                cur = t.nodes[cur].children[0];
            }
            let mut rec = go(t, cur);
            rec.label = compose_path(t, c, cur).slots().to_vec();
            children.push(rec);
        }
        PrimeNode { id: n.id.clone(), label: n.label.slots().to_vec(), children, branched: n.branched }
    }
    let mut rec = go(tree, 0);
    rec.label.clear();
    SpecTree::from_record(&rec, tree.locally_finite).expect("contraction of a valid tree")
}

/// Labels from `bottom` up to `top` (inclusive, `top` a descendant of
/// `bottom`), with `top`'s step first.
fn compose_path(t: &SpecTree, bottom: usize, top: usize) -> ValueTower {
    let mut out = ValueTower::empty();
    let mut cur = top;
    loop {
        out = out.concat(&t.nodes[cur].label);
        if cur == bottom {
            break;
        }
        cur = t.nodes[cur].parent.expect("bottom is an ancestor of top");
    }
    out
}

/// One tree per child of the root: the dependency classes of maximal ideals.
pub fn standard_decomposition(tree: &SpecTree) -> Vec<SpecTree> {
    tree.nodes[0].children.iter().map(|&c| tree.class_tree(c)).collect()
}

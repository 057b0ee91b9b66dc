//! Random instance generators and brute-force oracles shared by the
//! integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use igl_core::abelian::{AmalgamPart, FgGroup, FgHom, ShortExactSeq, SnakeDiagram};
use igl_core::matrix::IntMatrix;
use igl_core::prufer::PrimeNode;
use igl_core::scattered::Ordinal;
use igl_core::valgroup::{GroupExpr, Slot};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- matrices

pub fn random_entries(rng: &mut StdRng, rows: usize, cols: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect()).collect()
}

pub fn to_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows_with_cols(rows, cols).expect("rectangular")
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    to_matrix(&random_entries(rng, rows, cols, -bound, bound), cols)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by cofactor expansion along the first row.
pub fn det_laplace(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        total += s * m[0][j] * det_laplace(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Gcd of all `k × k` minors, by enumeration.
pub fn minor_gcd(m: &[Vec<i64>], k: usize) -> i128 {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if k == 0 {
        return 1;
    }
    let mut g = 0i128;
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect()).collect();
            g = gcd(g, det_laplace(&sub));
        }
    }
    g
}

/// Invariant factors `d_k / d_{k−1}` from determinantal divisors, stopping
/// at the first vanishing divisor.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let d = minor_gcd(m, k);
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Random unimodular matrix with its inverse, as a product of elementary
/// row operations.
pub fn random_unimodular(rng: &mut StdRng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut w = IntMatrix::identity(n);
    let mut w_inv = IntMatrix::identity(n);
    if n < 2 {
        return (w, w_inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k: i64 = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2);
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = BigInt::from(k);
        let mut e_inv = IntMatrix::identity(n);
        e_inv[(i, j)] = BigInt::from(-k);
        w = &e * &w;
        w_inv = &w_inv * &e_inv;
    }
    (w, w_inv)
}

// ---------------------------------------------------------------- groups

/// `Z^k / diag(orders)`, order 0 meaning a free summand.
pub fn cyclic_sum(orders: &[u64]) -> FgGroup {
    let k = orders.len();
    let cols: Vec<Vec<BigInt>> = orders
        .iter()
        .enumerate()
        .filter(|&(_, &o)| o != 0)
        .map(|(i, &o)| {
            let mut c = vec![BigInt::from(0); k];
            c[i] = BigInt::from(o);
            c
        })
        .collect();
    FgGroup::new(k, IntMatrix::from_columns(k, &cols)).expect("shape")
}

pub fn random_orders(rng: &mut StdRng, max_gens: usize, max_torsion: u64) -> Vec<u64> {
    let k = rng.gen_range(0..=max_gens);
    (0..k).map(|_| if rng.gen_bool(0.35) { 0 } else { rng.gen_range(1..=max_torsion) }).collect()
}

/// Group with a random relation matrix, entries in `[-bound, bound]`.
pub fn random_group(rng: &mut StdRng, max_gens: usize, max_rels: usize, bound: i64) -> FgGroup {
    let n = rng.gen_range(1..=max_gens);
    let r = rng.gen_range(0..=max_rels);
    FgGroup::new(n, random_matrix(rng, n, r, bound)).expect("shape")
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors (greater than one, ascending) and free rank of a direct
/// sum of cyclic groups, via elementary divisors.
pub fn invariants_of_cyclics(orders: &[u64]) -> (Vec<u64>, usize) {
    let rank = orders.iter().filter(|&&o| o == 0).count();
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &o in orders.iter().filter(|&&o| o > 1) {
        for (p, e) in prime_powers(o) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (p, mut es) in by_prime {
        es.sort_unstable_by(|a, b| b.cmp(a));
        for (j, e) in es.into_iter().enumerate() {
            factors[j] *= p.pow(e);
        }
    }
    factors.reverse();
    (factors, rank)
}

pub fn torsion_u64(g: &FgGroup) -> Vec<u64> {
    g.torsion().iter().map(|t| u64::try_from(t).expect("small torsion")).collect()
}

// ---------------------------------------------------------------- diagrams

/// `0 → ⟨columns of gens⟩ → b → b/⟨gens⟩ → 0`.
pub fn ses_from_generators(b: &FgGroup, gens: &IntMatrix) -> ShortExactSeq {
    let k = gens.cols();
    let h = FgHom::new(FgGroup::free(k), b.clone(), gens.clone()).expect("free source");
    let inj = h.image_inclusion();
    let surj = inj.cokernel_projection();
    ShortExactSeq::new(inj, surj).expect("image and cokernel form an exact row")
}

/// A commuting diagram with exact rows: a random middle map `g`, the top
/// subgroup pushed forward plus extra generators below, and `f`, `h`
/// induced.
pub fn random_snake(rng: &mut StdRng) -> SnakeDiagram {
    let b1 = random_group(rng, 3, 2, 6);
    let n1 = b1.generators();
    let k1 = rng.gen_range(0..=2);
    let m1 = random_matrix(rng, n1, k1, 4);
    let top = ses_from_generators(&b1, &m1);

    let n2 = rng.gen_range(1..=3);
    let g_m = random_matrix(rng, n2, n1, 3);
    let k2 = rng.gen_range(0..=2);
    let r2 = random_matrix(rng, n2, k2, 6);
    let pushed = &g_m * b1.relations();
    let b2 = FgGroup::new(n2, r2.hstack(&pushed)).expect("shape");
    let e2 = rng.gen_range(0..=1);
    let extra = random_matrix(rng, n2, e2, 3);
    let gens2 = (&g_m * top.inj().matrix()).hstack(&extra);
    let bottom = ses_from_generators(&b2, &gens2);

    let g = FgHom::new(b1, b2, g_m).expect("relations pushed forward");
    let f = g.restrict(top.inj(), bottom.inj()).expect("subgroup maps into subgroup");
    let h = g.induced_on_quotients(top.surj(), bottom.surj()).expect("induced map");
    SnakeDiagram::new(top, bottom, f, g, h).expect("commuting by construction")
}

pub struct AmalgamCase {
    pub g: FgGroup,
    pub parts: Vec<AmalgamPart>,
    pub g_orders: Vec<u64>,
    pub b_orders: Vec<Vec<u64>>,
}

/// `Aᵢ = Bᵢ ⊕ G` presented in a random basis.
pub fn random_amalgam(rng: &mut StdRng, max_n: usize, max_rank: usize, max_torsion: u64) -> AmalgamCase {
    let n = rng.gen_range(1..=max_n);
    let g_orders = random_orders(rng, max_rank, max_torsion);
    let g = cyclic_sum(&g_orders);
    let ng = g_orders.len();
    let mut parts = Vec::new();
    let mut b_orders = Vec::new();
    for _ in 0..n {
        let bo = random_orders(rng, max_rank, max_torsion);
        let nb = bo.len();
        let big = nb + ng;
        let plain = FgGroup::direct_sum(&[&cyclic_sum(&bo), &g]);
        let (w, w_inv) = random_unimodular(rng, big, 6);
        let a = FgGroup::new(big, &w * plain.relations()).expect("shape");
        let eye = IntMatrix::identity(big);
        let phi = &w * &eye.submatrix(0..big, nb..big);
        let pi = &eye.submatrix(0..nb, 0..big) * &w_inv;
        let theta = &eye.submatrix(nb..big, 0..big) * &w_inv;
        parts.push(AmalgamPart {
            phi: FgHom::new(g.clone(), a.clone(), phi).expect("phi"),
            pi: FgHom::new(a.clone(), cyclic_sum(&bo), pi).expect("pi"),
            theta: FgHom::new(a, g.clone(), theta).expect("theta"),
        });
        b_orders.push(bo);
    }
    AmalgamCase { g, parts, g_orders, b_orders }
}

// ---------------------------------------------------------------- trees

/// Random tree of depth at most `max_depth` below the root and at most
/// `max_nodes` nodes, labels drawn from `slots`.
pub fn random_tree(rng: &mut StdRng, max_nodes: usize, max_depth: usize, slots: &[Slot]) -> PrimeNode {
    let total = rng.gen_range(1..=max_nodes);
    let mut parent = vec![usize::MAX];
    let mut depth = vec![0usize];
    for i in 1..total {
        let candidates: Vec<usize> = (0..i).filter(|&j| depth[j] < max_depth).collect();
        let p = *candidates.choose(rng).expect("root is always a candidate");
        parent.push(p);
        depth.push(depth[p] + 1);
    }
    let labels: Vec<Vec<Slot>> =
        (0..total).map(|i| if i == 0 { Vec::new() } else { vec![*slots.choose(rng).expect("slots")] }).collect();
    tree_from_parents(&parent, &labels)
}

/// Tree from a parent array (`parent[0]` ignored) and per-node labels.
pub fn tree_from_parents(parent: &[usize], labels: &[Vec<Slot>]) -> PrimeNode {
    fn build(i: usize, parent: &[usize], labels: &[Vec<Slot>]) -> PrimeNode {
        let children: Vec<PrimeNode> = (1..parent.len()).filter(|&j| parent[j] == i).map(|j| build(j, parent, labels)).collect();
        PrimeNode { id: format!("p{i}"), label: labels[i].clone(), children, branched: true }
    }
    build(0, parent, labels)
}

/// All parent arrays with `parent[i] < i`: every rooted tree shape on `n`
/// nodes, with repetitions.
pub fn all_parent_arrays(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![usize::MAX]];
    for i in 1..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..i).map(move |q| {
                    let mut p = p.clone();
                    p.push(q);
                    p
                })
            })
            .collect();
    }
    out
}

/// Edges of the contracted tree on the root, the leaves and the nodes with
/// at least two children, each weighted by the number of original edges it
/// replaces. Computed straight from the parent array.
pub fn contracted_weighted_edges(parent: &[usize]) -> usize {
    let n = parent.len();
    let mut kids = vec![0usize; n];
    for &p in &parent[1..] {
        kids[p] += 1;
    }
    let kept = |i: usize| i == 0 || kids[i] != 1;
    let mut total = 0;
    for i in 1..n {
        if !kept(i) {
            continue;
        }
        let mut len = 1;
        let mut cur = parent[i];
        while !kept(cur) {
            len += 1;
            cur = parent[cur];
        }
        total += len;
    }
    total
}

/// Random permutation callback for `SpecTree::permuted`.
pub fn shuffler(rng: &mut StdRng) -> impl FnMut(&str, usize) -> Vec<usize> + '_ {
    move |_, n| {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        v
    }
}

/// Order-free rendering of an expression: sums are flattened and sorted,
/// towers keep their order.
pub fn canon(e: &GroupExpr) -> String {
    fn flat(e: &GroupExpr, out: &mut Vec<String>) {
        match e {
            GroupExpr::Sum(v) => v.iter().for_each(|x| flat(x, out)),
            _ => out.push(canon(e)),
        }
    }
    match e {
        GroupExpr::Sum(_) => {
            let mut parts = Vec::new();
            flat(e, &mut parts);
            parts.retain(|p| p != "0");
            parts.sort();
            format!("sum[{}]", parts.join(","))
        }
        GroupExpr::Lex(v) => format!("lex[{}]", v.iter().map(canon).collect::<Vec<_>>().join(";")),
        GroupExpr::Power(b, m) => format!("pow[{},{m:?}]", canon(b)),
        _ => e.to_string(),
    }
}

// ---------------------------------------------------------------- ordinals

/// `ω²·a + ω·b + c`.
pub type Tri = (u64, u64, u64);

pub fn tri_of(o: &Ordinal) -> Tri {
    let mut t = (0, 0, 0);
    for &(e, c) in o.terms() {
        match e {
            0 => t.2 = c,
            1 => t.1 = c,
            2 => t.0 = c,
            _ => panic!("ordinal beyond ω³"),
        }
    }
    t
}

pub fn ordinal_of(t: Tri) -> Ordinal {
    let mut terms = Vec::new();
    if t.0 > 0 {
        terms.push((2, t.0));
    }
    if t.1 > 0 {
        terms.push((1, t.1));
    }
    if t.2 > 0 {
        terms.push((0, t.2));
    }
    Ordinal::from_terms(terms)
}

/// Brute-force iterated derived sets of `[0, bound]` for `bound < ω³`.
///
/// A point belongs to the `n`-th derived set when it is in the previous one
/// and points of the previous one approach it from below; "approach" is
/// tested on two far windows of candidates below the point.
pub struct DerivedOracle {
    bound: Tri,
    memo: HashMap<(u32, Tri), bool>,
}

impl DerivedOracle {
    pub fn new(bound: Tri) -> Self {
        DerivedOracle { bound, memo: HashMap::new() }
    }

    pub fn contains(&mut self, n: u32, x: Tri) -> bool {
        if x > self.bound {
            return false;
        }
        if n == 0 {
            return true;
        }
        if let Some(&v) = self.memo.get(&(n, x)) {
            return v;
        }
        let v = self.contains(n - 1, x) && self.is_limit_of(n - 1, x);
        self.memo.insert((n, x), v);
        v
    }

    fn is_limit_of(&mut self, n: u32, x: Tri) -> bool {
        let (a, b, c) = x;
        if c > 0 || x == (0, 0, 0) {
            return false;
        }
        let windows = [20u64..24, 40..44];
        windows.into_iter().all(|w| {
            w.into_iter().any(|m| {
                if b > 0 {
                    self.contains(n, (a, b - 1, m))
                } else {
                    (0..4).any(|j| self.contains(n, (a - 1, m, j)))
                }
            })
        })
    }

    /// Least `n` whose derived set has no point in the sample grid.
    pub fn rank(&mut self, grid: &[Tri]) -> u32 {
        (0..).find(|&n| !grid.iter().any(|&x| self.contains(n, x))).expect("scattered")
    }
}

/// Sample points with small coordinates.
pub fn sample_grid(max_a: u64, max_bc: u64) -> Vec<Tri> {
    let mut out = Vec::new();
    for a in 0..=max_a {
        for b in 0..=max_bc {
            for c in 0..=max_bc {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Inverts `x ↦ ω·(1+x)` on triples, if `y` is in the image.
pub fn derived_preimage(y: Tri) -> Option<Tri> {
    let (a, b, c) = y;
    if c != 0 {
        return None;
    }
    let z = (0, a, b);
    if z == (0, 0, 0) {
        return None;
    }
    Some(if a == 0 { (0, 0, b - 1) } else { z })
}

/// Finite fields `F_{p^r}` with `p^r ≤ max`.
pub fn small_fields(max: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in 2..=max {
        if (2..p).any(|d| p % d == 0) {
            continue;
        }
        let mut r = 1;
        while p.pow(r) <= max {
            out.push((p, r));
            r += 1;
        }
    }
    out
}

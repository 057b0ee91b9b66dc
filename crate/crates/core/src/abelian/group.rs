use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::AbelianError;
use crate::matrix::{kernel_basis, snf, solve, IntMatrix};

/// Isomorphism invariants of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariants {
    /// Nonzero Smith diagonal of the relation matrix (a divisibility chain,
    /// unit entries included).
    pub factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl Invariants {
    /// Invariant factors greater than one: the torsion part is
    /// `Z/t₁ ⊕ … ⊕ Z/tₖ` with `t₁ | … | tₖ`.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// A finitely generated abelian group `Zⁿ / L`, where `L` is spanned by the
/// columns of the relation matrix.
///
/// `PartialEq` is isomorphism (equal invariants); use
/// [`FgGroup::same_presentation`] when the generating sets matter, e.g. when
/// composing homomorphisms given by matrices.
#[derive(Clone)]
pub struct FgGroup {
    generators: usize,
    relations: IntMatrix,
    invariants: OnceLock<Invariants>,
}

impl FgGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self, AbelianError> {
        if relations.rows() != generators {
            return Err(AbelianError::Shape(format!(
                "relation matrix has {} rows but the group has {} generators",
                relations.rows(),
                generators
            )));
        }
        Ok(FgGroup { generators, relations, invariants: OnceLock::new() })
    }

    pub fn free(rank: usize) -> Self {
        FgGroup { generators: rank, relations: IntMatrix::zero(rank, 0), invariants: OnceLock::new() }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/n`; `n = 0` gives `Z`.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        let n = n.into();
        if n.is_zero() {
            return Self::free(1);
        }
        FgGroup { generators: 1, relations: IntMatrix::diagonal(&[n]), invariants: OnceLock::new() }
    }

    /// `Z/t₁ ⊕ … ⊕ Z/tₖ ⊕ Z^rank` with one generator per summand.
    pub fn from_invariants(torsion: &[BigInt], rank: usize) -> Self {
        let n = torsion.len() + rank;
        let mut rel = IntMatrix::zero(n, torsion.len());
        for (i, t) in torsion.iter().enumerate() {
            rel[(i, i)] = t.clone();
        }
        FgGroup { generators: n, relations: rel, invariants: OnceLock::new() }
    }

    pub fn direct_sum(parts: &[&FgGroup]) -> Self {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|g| &g.relations).collect();
        let generators = parts.iter().map(|g| g.generators).sum();
        FgGroup { generators, relations: IntMatrix::block_diag(&blocks), invariants: OnceLock::new() }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariants(&self) -> &Invariants {
        self.invariants.get_or_init(|| {
            let f = snf(&self.relations);
            let factors: Vec<BigInt> = f.diagonal().into_iter().filter(|d| !d.is_zero()).collect();
            let free_rank = self.generators - factors.len();
            Invariants { factors, free_rank }
        })
    }

    pub fn free_rank(&self) -> usize {
        self.invariants().free_rank
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants().torsion()
    }

    /// Free iff the torsion part is trivial.
    pub fn is_free(&self) -> bool {
        self.invariants().factors.iter().all(One::is_one)
    }

    pub fn is_trivial(&self) -> bool {
        self.is_free() && self.free_rank() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Order of a finite group, `None` for infinite ones.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariants().factors.iter().product())
    }

    /// Exponent of the torsion subgroup (1 if torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion().last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn same_presentation(&self, other: &FgGroup) -> bool {
        self.generators == other.generators && self.relations == other.relations
    }

    /// Whether the vector `v ∈ Zⁿ` lies in the relation lattice, i.e.
    /// represents the identity.
    pub fn is_identity(&self, v: &[BigInt]) -> bool {
        in_lattice(&self.relations, v)
    }

    pub fn elements_equal(&self, a: &[BigInt], b: &[BigInt]) -> bool {
        let d: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_identity(&d)
    }

    /// Whether `v` is divisible by `n` inside the group: `v ∈ n·G`.
    pub fn is_divisible_by(&self, v: &[BigInt], n: &BigInt) -> bool {
        let scaled = IntMatrix::identity(self.generators).scaled(n);
        in_lattice(&scaled.hstack(&self.relations), v)
    }

    /// Same group with the relation matrix replaced by a basis of its
    /// column lattice.
    pub fn pruned(&self) -> FgGroup {
        FgGroup {
            generators: self.generators,
            relations: lattice_basis(&self.relations),
            invariants: self.invariants.clone(),
        }
    }
}

impl PartialEq for FgGroup {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank() == other.free_rank() && self.torsion() == other.torsion()
    }
}

impl Eq for FgGroup {}

impl fmt::Debug for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgGroup({} gens, {:?} ≅ {})", self.generators, self.relations, self)
    }
}

impl fmt::Display for FgGroup {
    /// Structure-theorem form, e.g. `Z/2 ⊕ Z/4 ⊕ Z^2`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion().iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Whether `v` is an integer combination of the columns of `gens`.
pub fn in_lattice(gens: &IntMatrix, v: &[BigInt]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if gens.cols() == 0 {
        return false;
    }
    solve(gens, v).is_some()
}

/// Whether every column of `sub` lies in the lattice spanned by `sup`.
pub fn lattice_contains(sup: &IntMatrix, sub: &IntMatrix) -> bool {
    if sub.is_zero() {
        return true;
    }
    if sup.cols() == 0 {
        return false;
    }
    let f = snf(sup);
    sub.columns().iter().all(|c| crate::matrix::solve_with(&f, c).is_some())
}

/// A basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    if gens.cols() == 0 {
        return gens.clone();
    }
    let f = snf(gens);
    let rank = f.rank();
    let spanned = gens * &f.v;
    spanned.select_columns(&(0..rank).collect::<Vec<_>>())
}

/// Generators of `{x : m·x ∈ colspan(target_rel)}`, a sublattice of `Z^cols(m)`.
pub fn preimage_lattice(m: &IntMatrix, target_rel: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let k = kernel_basis(&m.hstack(target_rel));
    lattice_basis(&k.submatrix(0..n, 0..k.cols()))
}

/// Lattice equality by mutual containment.
pub fn lattices_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    lattice_contains(a, b) && lattice_contains(b, a)
}

/// All elements of a finite group in canonical coordinates `0 ≤ xᵢ < tᵢ`
/// with respect to its torsion invariants. `None` if the group is infinite
/// or has more than `limit` elements.
pub fn enumerate_canonical(g: &FgGroup, limit: usize) -> Option<Vec<Vec<BigInt>>> {
    let order = g.order()?;
    if order > BigInt::from(limit) {
        return None;
    }
    let torsion = g.torsion();
    let mut out = vec![Vec::new()];
    for t in &torsion {
        let mut next = Vec::new();
        for prefix in &out {
            let mut x = BigInt::zero();
            while &x < t {
                let mut v = prefix.clone();
                v.push(x.clone());
                next.push(v);
                x += 1;
            }
        }
        out = next;
    }
    Some(out)
}

/// Order of an element of `Z/t₁ ⊕ … ⊕ Z/tₖ` given in canonical coordinates.
pub fn canonical_order(torsion: &[BigInt], x: &[BigInt]) -> BigInt {
    torsion
        .iter()
        .zip(x)
        .map(|(t, xi)| t / t.gcd(xi))
        .fold(BigInt::one(), |acc, o| acc.lcm(&o))
}

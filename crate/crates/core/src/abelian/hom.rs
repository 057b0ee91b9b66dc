use num_bigint::BigInt;

use super::group::{in_lattice, lattice_basis, lattice_contains, lattices_equal, preimage_lattice, FgGroup};
use super::AbelianError;
use crate::matrix::{solve, IntMatrix};

/// A homomorphism between presented groups, given by its action on
/// generators: column `j` of `matrix` is the image of source generator `j`.
#[derive(Clone, Debug)]
pub struct FgHom {
    source: FgGroup,
    target: FgGroup,
    matrix: IntMatrix,
}

impl FgHom {
    /// Checks shape and that every source relation maps into the target's
    /// relation lattice.
    pub fn new(source: FgGroup, target: FgGroup, matrix: IntMatrix) -> Result<Self, AbelianError> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(AbelianError::Shape(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        let images = &matrix * source.relations();
        if !lattice_contains(target.relations(), &images) {
            return Err(AbelianError::IllDefined(
                "a source relation does not map to a target relation".into(),
            ));
        }
        Ok(FgHom { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: FgGroup, target: FgGroup, matrix: IntMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), target.generators());
        debug_assert_eq!(matrix.cols(), source.generators());
        FgHom { source, target, matrix }
    }

    pub fn identity(g: &FgGroup) -> Self {
        FgHom::new_unchecked(g.clone(), g.clone(), IntMatrix::identity(g.generators()))
    }

    pub fn zero(source: &FgGroup, target: &FgGroup) -> Self {
        FgHom::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zero(target.generators(), source.generators()),
        )
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FgGroup, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        FgHom::new_unchecked(g.clone(), g.clone(), IntMatrix::identity(g.generators()).scaled(&k))
    }

    pub fn source(&self) -> &FgGroup {
        &self.source
    }

    pub fn target(&self) -> &FgGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FgHom) -> Result<FgHom, AbelianError> {
        if !self.target.same_presentation(&other.source) {
            return Err(AbelianError::Shape("composition of non-composable maps".into()));
        }
        Ok(FgHom::new_unchecked(self.source.clone(), other.target.clone(), &other.matrix * &self.matrix))
    }

    pub fn add(&self, other: &FgHom) -> Result<FgHom, AbelianError> {
        self.check_parallel(other)?;
        Ok(FgHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)))
    }

    pub fn sub(&self, other: &FgHom) -> Result<FgHom, AbelianError> {
        self.check_parallel(other)?;
        Ok(FgHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix)))
    }

    fn check_parallel(&self, other: &FgHom) -> Result<(), AbelianError> {
        if self.source.same_presentation(&other.source) && self.target.same_presentation(&other.target) {
            Ok(())
        } else {
            Err(AbelianError::Shape("maps have different source or target".into()))
        }
    }

    /// Equality as maps: the matrices differ by target relations.
    pub fn agrees_with(&self, other: &FgHom) -> bool {
        self.check_parallel(other).is_ok()
            && lattice_contains(self.target.relations(), &self.matrix.sub(&other.matrix))
    }

    pub fn is_zero_map(&self) -> bool {
        lattice_contains(self.target.relations(), &self.matrix)
    }

    /// Generators of `{x ∈ Zⁿ : h(x) = 0}`; contains the source relations.
    pub fn kernel_lattice(&self) -> IntMatrix {
        preimage_lattice(&self.matrix, self.target.relations())
    }

    /// Generators (in the target's coordinates) of `h(G) + L_target`.
    pub fn image_lattice(&self) -> IntMatrix {
        lattice_basis(&self.matrix.hstack(self.target.relations()))
    }

    pub fn is_injective(&self) -> bool {
        lattice_contains(self.source.relations(), &self.kernel_lattice())
    }

    pub fn is_surjective(&self) -> bool {
        lattice_contains(&self.image_lattice(), &IntMatrix::identity(self.target.generators()))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inclusion of the kernel into the source.
    pub fn kernel_inclusion(&self) -> FgHom {
        subgroup_inclusion(&self.source, &self.kernel_lattice())
    }

    /// Inclusion of the image into the target.
    pub fn image_inclusion(&self) -> FgHom {
        subgroup_inclusion(&self.target, &lattice_basis(&self.matrix))
    }

    /// Projection of the target onto the cokernel. The cokernel's relations are
    /// the target relations joined with the columns of the matrix.
    pub fn cokernel_projection(&self) -> FgHom {
        let rel = self.target.relations().hstack(&self.matrix);
        let coker = FgGroup::new(self.target.generators(), rel).expect("row counts agree");
        FgHom::new_unchecked(self.target.clone(), coker, IntMatrix::identity(self.target.generators()))
    }

    /// Finds some `x` with `h(x) = y`, if one exists.
    pub fn lift(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = self.source.generators();
        let sol = solve(&self.matrix.hstack(self.target.relations()), y)?;
        Some(sol[..n].to_vec())
    }

    /// Restricts `self` to the subgroup `sub` of the source and corestricts to
    /// the subgroup `onto` of the target (both given as inclusions). Fails if
    /// the image of `sub` is not inside `onto`.
    pub fn restrict(&self, sub: &FgHom, onto: &FgHom) -> Result<FgHom, AbelianError> {
        let composed = sub.then(self)?;
        let mut cols = Vec::with_capacity(composed.matrix.cols());
        for c in composed.matrix.columns() {
            let pre = onto
                .lift(&c)
                .ok_or_else(|| AbelianError::IllDefined("image is not contained in the codomain subgroup".into()))?;
            cols.push(pre);
        }
        let m = IntMatrix::from_columns(onto.source.generators(), &cols);
        FgHom::new(sub.source.clone(), onto.source.clone(), m)
    }

    /// Map induced on cokernels: `self` must send the image lattice of `from`
    /// into that of `to`. Both arguments are projections.
    pub fn induced_on_quotients(&self, from: &FgHom, to: &FgHom) -> Result<FgHom, AbelianError> {
        if !from.source.same_presentation(&self.source) || !to.source.same_presentation(&self.target) {
            return Err(AbelianError::Shape("quotient maps do not match".into()));
        }
        FgHom::new(from.target.clone(), to.target.clone(), self.matrix.clone())
    }

    pub fn kernel(&self) -> FgGroup {
        self.kernel_inclusion().source.clone()
    }

    pub fn image(&self) -> FgGroup {
        self.image_inclusion().source.clone()
    }

    pub fn cokernel(&self) -> FgGroup {
        self.cokernel_projection().target.clone()
    }

    /// Direct sum `⊕ hᵢ : ⊕ Sᵢ → ⊕ Tᵢ`.
    pub fn direct_sum(maps: &[&FgHom]) -> FgHom {
        let sources: Vec<&FgGroup> = maps.iter().map(|h| &h.source).collect();
        let targets: Vec<&FgGroup> = maps.iter().map(|h| &h.target).collect();
        let blocks: Vec<&IntMatrix> = maps.iter().map(|h| &h.matrix).collect();
        FgHom::new_unchecked(
            FgGroup::direct_sum(&sources),
            FgGroup::direct_sum(&targets),
            IntMatrix::block_diag(&blocks),
        )
    }

    /// `x ↦ (h₁(x), …, hₙ(x))` into the direct sum of the targets.
    pub fn pairing(maps: &[&FgHom]) -> Result<FgHom, AbelianError> {
        let first = maps.first().ok_or_else(|| AbelianError::Shape("empty pairing".into()))?;
        let mut m = IntMatrix::zero(0, first.source.generators());
        for h in maps {
            if !h.source.same_presentation(&first.source) {
                return Err(AbelianError::Shape("pairing of maps with different sources".into()));
            }
            m = m.vstack(&h.matrix);
        }
        let targets: Vec<&FgGroup> = maps.iter().map(|h| &h.target).collect();
        Ok(FgHom::new_unchecked(first.source.clone(), FgGroup::direct_sum(&targets), m))
    }

    /// `(x₁, …, xₙ) ↦ Σ hᵢ(xᵢ)` out of the direct sum of the sources.
    pub fn copairing(maps: &[&FgHom]) -> Result<FgHom, AbelianError> {
        let first = maps.first().ok_or_else(|| AbelianError::Shape("empty copairing".into()))?;
        let mut m = IntMatrix::zero(first.target.generators(), 0);
        for h in maps {
            if !h.target.same_presentation(&first.target) {
                return Err(AbelianError::Shape("copairing of maps with different targets".into()));
            }
            m = m.hstack(&h.matrix);
        }
        let sources: Vec<&FgGroup> = maps.iter().map(|h| &h.source).collect();
        Ok(FgHom::new_unchecked(FgGroup::direct_sum(&sources), first.target.clone(), m))
    }
}

/// Presents the subgroup of `ambient` generated by the columns of `gens`
/// (which should contain no redundancy beyond the relations) and returns its
/// inclusion.
pub fn subgroup_inclusion(ambient: &FgGroup, gens: &IntMatrix) -> FgHom {
    let k = gens.cols();
    let rel = preimage_lattice(gens, ambient.relations());
    let sub = FgGroup::new(k, rel).expect("preimage lattice lives in Z^k");
    FgHom::new_unchecked(sub, ambient.clone(), gens.clone())
}

/// Whether `image(f) = kernel(g)` inside the middle group.
pub fn exact_at(f: &FgHom, g: &FgHom) -> bool {
    f.target.same_presentation(&g.source) && lattices_equal(&f.image_lattice(), &g.kernel_lattice())
}

/// Whether `x` lies in the kernel of `h`.
pub fn in_kernel(h: &FgHom, x: &[BigInt]) -> bool {
    in_lattice(h.target.relations(), &h.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::bigvec;

    fn z() -> FgGroup {
        FgGroup::free(1)
    }

    #[test]
    fn times_two_on_z() {
        let h = FgHom::scalar(&z(), 2);
        assert!(h.kernel().is_trivial());
        assert_eq!(h.cokernel(), FgGroup::cyclic(2));
        assert_eq!(h.image(), z());
        assert!(h.is_injective() && !h.is_surjective());
    }

    #[test]
    fn zero_map_on_z() {
        let h = FgHom::zero(&z(), &z());
        assert_eq!(h.kernel(), z());
        assert_eq!(h.cokernel(), z());
        assert!(h.image().is_trivial());
    }

    #[test]
    fn diag_2_3_cokernel() {
        let h = FgHom::new(
            FgGroup::free(2),
            FgGroup::free(2),
            IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]),
        )
        .unwrap();
        let c = h.cokernel();
        assert_eq!(c.invariants().factors, bigvec(&[1, 6]));
    }

    #[test]
    fn ill_defined_rejected() {
        // Z/2 → Z sending the generator to 1 is not a homomorphism.
        let r = FgHom::new(FgGroup::cyclic(2), z(), IntMatrix::from_rows(&[vec![1]]));
        assert!(matches!(r, Err(AbelianError::IllDefined(_))));
        // Z/4 → Z/2 reduction is fine.
        assert!(FgHom::new(FgGroup::cyclic(4), FgGroup::cyclic(2), IntMatrix::from_rows(&[vec![1]])).is_ok());
    }

    #[test]
    fn kernel_of_reduction() {
        let h = FgHom::new(FgGroup::cyclic(4), FgGroup::cyclic(2), IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert_eq!(h.kernel(), FgGroup::cyclic(2));
        assert!(h.is_surjective());
        assert!(exact_at(&h.kernel_inclusion(), &h));
    }

    #[test]
    fn lift_and_restrict() {
        let h = FgHom::scalar(&z(), 3);
        assert_eq!(h.lift(&bigvec(&[6])), Some(bigvec(&[2])));
        assert_eq!(h.lift(&bigvec(&[1])), None);
    }
}

use super::group::{lattices_equal, FgGroup};
use super::hom::FgHom;
use super::AbelianError;
use crate::matrix::IntMatrix;

/// One factor `A = B ⊕ φ(G)` of an amalgam, given by the embedding
/// `φ : G → A` and the two projections `π : A → B`, `θ : A → G`.
#[derive(Clone, Debug)]
pub struct AmalgamPart {
    pub phi: FgHom,
    pub pi: FgHom,
    pub theta: FgHom,
}

impl AmalgamPart {
    pub fn a(&self) -> &FgGroup {
        self.phi.target()
    }

    pub fn b(&self) -> &FgGroup {
        self.pi.target()
    }
}

#[derive(Clone, Debug)]
pub struct AmalgamOutput {
    /// `(A₁ ⊕ … ⊕ Aₙ) / φ(G)` with `φ` the diagonal embedding.
    pub quotient: FgGroup,
    /// `B₁ ⊕ … ⊕ Bₙ ⊕ G^{n−1}`.
    pub target: FgGroup,
    /// `ψ = (ψ₁, ψ₂)` defined on `⊕Aᵢ`.
    pub psi: FgHom,
    /// The isomorphism induced by `ψ` on the quotient.
    pub iso: FgHom,
}

/// Quotient of `⊕Aᵢ` by the diagonal image of `G`, with the explicit
/// isomorphism onto `⊕Bᵢ ⊕ G^{n−1}`.
///
/// `ψ₁` is `⊕πᵢ` and the `j`-th component of `ψ₂` is `θⱼ(aⱼ) − θₙ(aₙ)` for
/// `j < n`. Both the kernel (`= φ(G)`) and surjectivity are checked.
pub fn amalgam_quotient(g: &FgGroup, parts: &[AmalgamPart]) -> Result<AmalgamOutput, AbelianError> {
    let n = parts.len();
    if n == 0 {
        return Err(AbelianError::Shape("amalgam of no groups".into()));
    }
    for (i, p) in parts.iter().enumerate() {
        check_part(g, i, p)?;
    }

    let a_groups: Vec<&FgGroup> = parts.iter().map(AmalgamPart::a).collect();
    let a_sum = FgGroup::direct_sum(&a_groups);
    let phis: Vec<&FgHom> = parts.iter().map(|p| &p.phi).collect();
    let diag = FgHom::pairing(&phis)?;
    let diag = FgHom::new(g.clone(), a_sum.clone(), diag.matrix().clone())?;

    let mut target_parts: Vec<&FgGroup> = parts.iter().map(AmalgamPart::b).collect();
    for _ in 1..n {
        target_parts.push(g);
    }
    let target = FgGroup::direct_sum(&target_parts);

    // ψ₁ = ⊕ πᵢ on top, then n−1 rows of blocks [.. θⱼ .. −θₙ].
    let pis: Vec<&FgHom> = parts.iter().map(|p| &p.pi).collect();
    let mut m = FgHom::direct_sum(&pis).matrix().clone();
    let widths: Vec<usize> = a_groups.iter().map(|a| a.generators()).collect();
    let offsets: Vec<usize> = widths.iter().scan(0, |acc, w| { let o = *acc; *acc += w; Some(o) }).collect();
    let total = a_sum.generators();
    let gn = g.generators();
    let theta_n = parts[n - 1].theta.matrix();
    for j in 0..n - 1 {
        let mut block = IntMatrix::zero(gn, total);
        let theta_j = parts[j].theta.matrix();
        for r in 0..gn {
            for c in 0..widths[j] {
                block[(r, offsets[j] + c)] += &theta_j[(r, c)];
            }
            for c in 0..widths[n - 1] {
                block[(r, offsets[n - 1] + c)] -= &theta_n[(r, c)];
            }
        }
        m = m.vstack(&block);
    }
    let psi = FgHom::new(a_sum.clone(), target.clone(), m)?;

    if !psi.is_surjective() {
        return Err(AbelianError::InvalidDecomposition { part: n - 1, reason: "ψ is not surjective".into() });
    }
    if !lattices_equal(&psi.kernel_lattice(), &diag.image_lattice()) {
        return Err(AbelianError::InvalidDecomposition { part: n - 1, reason: "ker ψ differs from φ(G)".into() });
    }

    let proj = diag.cokernel_projection();
    let iso = psi.induced_on_quotients(&proj, &FgHom::identity(&target))?;
    debug_assert!(iso.is_isomorphism());
    Ok(AmalgamOutput { quotient: proj.target().clone(), target, psi, iso })
}

fn check_part(g: &FgGroup, i: usize, p: &AmalgamPart) -> Result<(), AbelianError> {
    let bad = |reason: &str| AbelianError::InvalidDecomposition { part: i, reason: reason.into() };
    if !p.phi.source().same_presentation(g) || !p.theta.target().same_presentation(g) {
        return Err(bad("φ or θ does not use the common group G"));
    }
    if !p.pi.source().same_presentation(p.a()) || !p.theta.source().same_presentation(p.a()) {
        return Err(bad("π or θ is not defined on A"));
    }
    if !p.phi.is_injective() {
        return Err(bad("φ is not injective"));
    }
    if !p.phi.then(&p.theta)?.agrees_with(&FgHom::identity(g)) {
        return Err(bad("θ∘φ is not the identity"));
    }
    if !p.phi.then(&p.pi)?.is_zero_map() {
        return Err(bad("π does not vanish on φ(G)"));
    }
    let split = FgHom::pairing(&[&p.pi, &p.theta])?;
    if !split.is_isomorphism() {
        return Err(bad("(π, θ) is not an isomorphism A → B ⊕ G"));
    }
    Ok(())
}

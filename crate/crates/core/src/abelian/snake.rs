use super::group::FgGroup;
use super::hom::{exact_at, FgHom};
use super::seq::ShortExactSeq;
use super::AbelianError;
use crate::matrix::IntMatrix;

/// Two short exact rows joined by vertical maps `f`, `g`, `h`:
///
/// ```text
/// 0 → A₁ → B₁ → C₁ → 0
///     f↓   g↓   h↓
/// 0 → A₂ → B₂ → C₂ → 0
/// ```
#[derive(Clone, Debug)]
pub struct SnakeDiagram {
    top: ShortExactSeq,
    bottom: ShortExactSeq,
    f: FgHom,
    g: FgHom,
    h: FgHom,
}

impl SnakeDiagram {
    /// Checks that the verticals connect the rows and that both squares
    /// commute.
    pub fn new(top: ShortExactSeq, bottom: ShortExactSeq, f: FgHom, g: FgHom, h: FgHom) -> Result<Self, AbelianError> {
        let ends = [
            ("f", &f, top.left(), bottom.left()),
            ("g", &g, top.mid(), bottom.mid()),
            ("h", &h, top.right(), bottom.right()),
        ];
        for (name, map, s, t) in ends {
            if !map.source().same_presentation(s) || !map.target().same_presentation(t) {
                return Err(AbelianError::Shape(format!("vertical map {name} does not connect the rows")));
            }
        }
        let left_down = f.then(bottom.inj())?;
        let left_across = top.inj().then(&g)?;
        if !left_down.agrees_with(&left_across) {
            return Err(AbelianError::NonCommuting { square: "left (i₂∘f = g∘i₁)".into() });
        }
        let right_down = g.then(bottom.surj())?;
        let right_across = top.surj().then(&h)?;
        if !right_down.agrees_with(&right_across) {
            return Err(AbelianError::NonCommuting { square: "right (p₂∘g = h∘p₁)".into() });
        }
        Ok(SnakeDiagram { top, bottom, f, g, h })
    }

    pub fn top(&self) -> &ShortExactSeq {
        &self.top
    }

    pub fn bottom(&self) -> &ShortExactSeq {
        &self.bottom
    }

    pub fn verticals(&self) -> [&FgHom; 3] {
        [&self.f, &self.g, &self.h]
    }
}

/// `0 → ker f → ker g → ker h → coker f → coker g → coker h → 0`.
#[derive(Clone, Debug)]
pub struct SixTerm {
    /// `[ker f, ker g, ker h, coker f, coker g, coker h]`.
    pub groups: [FgGroup; 6],
    /// The five maps between consecutive groups; `maps[2]` is the
    /// connecting map.
    pub maps: [FgHom; 5],
}

pub const SIX_TERM_NAMES: [&str; 6] = ["ker f", "ker g", "ker h", "coker f", "coker g", "coker h"];

impl SixTerm {
    /// Exactness at all six positions, reporting the first failure.
    pub fn verify(&self) -> Result<(), AbelianError> {
        if !self.maps[0].is_injective() {
            return Err(AbelianError::NotExact(format!("at {}: first map not injective", SIX_TERM_NAMES[0])));
        }
        for i in 0..4 {
            if !exact_at(&self.maps[i], &self.maps[i + 1]) {
                return Err(AbelianError::NotExact(format!("at {}", SIX_TERM_NAMES[i + 1])));
            }
        }
        if !self.maps[4].is_surjective() {
            return Err(AbelianError::NotExact(format!("at {}: last map not surjective", SIX_TERM_NAMES[5])));
        }
        Ok(())
    }
}

/// Builds the six-term sequence with its connecting map and checks it is
/// exact everywhere.
///
/// The connecting map sends `c ∈ ker h` to the class of `a ∈ A₂` where
/// `p₁(b) = c` and `i₂(a) = g(b)`. Lifts are the solver's particular
/// solutions; any other choice changes `a` by an element of `f(A₁)`.
pub fn snake(d: &SnakeDiagram) -> Result<SixTerm, AbelianError> {
    let (i1, p1) = (d.top.inj(), d.top.surj());
    let (i2, p2) = (d.bottom.inj(), d.bottom.surj());

    let kf = d.f.kernel_inclusion();
    let kg = d.g.kernel_inclusion();
    let kh = d.h.kernel_inclusion();
    let cf = d.f.cokernel_projection();
    let cg = d.g.cokernel_projection();
    let ch = d.h.cokernel_projection();

    let m0 = i1.restrict(&kf, &kg)?;
    let m1 = p1.restrict(&kg, &kh)?;

    let mut cols = Vec::with_capacity(kh.matrix().cols());
    for c in kh.matrix().columns() {
        let b = p1.lift(&c).ok_or_else(|| AbelianError::NotExact("top row: p₁ cannot be lifted".into()))?;
        let gb = d.g.apply(&b);
        let a = i2
            .lift(&gb)
            .ok_or_else(|| AbelianError::NotExact("bottom row: g(b) is not in the image of i₂".into()))?;
        cols.push(a);
    }
    let delta = FgHom::new(
        kh.source().clone(),
        cf.target().clone(),
        IntMatrix::from_columns(cf.target().generators(), &cols),
    )?;

    let m3 = i2.induced_on_quotients(&cf, &cg)?;
    let m4 = p2.induced_on_quotients(&cg, &ch)?;

    let six = SixTerm {
        groups: [
            kf.source().clone(),
            kg.source().clone(),
            kh.source().clone(),
            cf.target().clone(),
            cg.target().clone(),
            ch.target().clone(),
        ],
        maps: [m0, m1, delta, m3, m4],
    };
    six.verify()?;
    Ok(six)
}

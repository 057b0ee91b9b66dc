use num_bigint::BigInt;

use super::group::FgGroup;
use super::hom::{exact_at, FgHom};
use super::AbelianError;
use crate::matrix::{solve, IntMatrix};

/// `0 → left → mid → right → 0`, validated at construction.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    inj: FgHom,
    surj: FgHom,
}

impl ShortExactSeq {
    pub fn new(inj: FgHom, surj: FgHom) -> Result<Self, AbelianError> {
        if !inj.target().same_presentation(surj.source()) {
            return Err(AbelianError::Shape("the two maps do not meet in the middle group".into()));
        }
        if !inj.is_injective() {
            return Err(AbelianError::NotExact("left map is not injective".into()));
        }
        if !surj.is_surjective() {
            return Err(AbelianError::NotExact("right map is not surjective".into()));
        }
        if !exact_at(&inj, &surj) {
            return Err(AbelianError::NotExact("image of the left map differs from the kernel of the right map".into()));
        }
        Ok(ShortExactSeq { inj, surj })
    }

    /// `0 → A → A ⊕ C → C → 0` with the standard inclusion and projection.
    pub fn split(left: &FgGroup, right: &FgGroup) -> Self {
        let (a, c) = (left.generators(), right.generators());
        let mid = FgGroup::direct_sum(&[left, right]);
        let inj = IntMatrix::identity(a + c).submatrix(0..a + c, 0..a);
        let surj = IntMatrix::identity(a + c).submatrix(a..a + c, 0..a + c);
        ShortExactSeq {
            inj: FgHom::new_unchecked(left.clone(), mid.clone(), inj),
            surj: FgHom::new_unchecked(mid, right.clone(), surj),
        }
    }

    pub fn left(&self) -> &FgGroup {
        self.inj.source()
    }

    pub fn mid(&self) -> &FgGroup {
        self.inj.target()
    }

    pub fn right(&self) -> &FgGroup {
        self.surj.target()
    }

    pub fn inj(&self) -> &FgHom {
        &self.inj
    }

    pub fn surj(&self) -> &FgHom {
        &self.surj
    }
}

/// Outcome of [`split_test`]: a section of the quotient map when one exists.
#[derive(Clone, Debug)]
pub struct SplitOutcome {
    pub section: Option<FgHom>,
}

impl SplitOutcome {
    pub fn splits(&self) -> bool {
        self.section.is_some()
    }
}

/// Decides whether `0 → A → B → C → 0` splits by solving for a section
/// `s : C → B` with `p ∘ s = id`.
///
/// The unknowns are the entries of `s` together with the relation
/// coefficients witnessing `p·S − I ∈ L_C` and `S·R_C ∈ L_B`; the resulting
/// linear system over `Z` is solved exactly, so a `false` answer is a proof
/// that no section exists.
pub fn split_test(s: &ShortExactSeq) -> SplitOutcome {
    let b = s.mid();
    let c = s.right();
    let p = s.surj().matrix();
    let (nb, nc) = (b.generators(), c.generators());
    let rc = c.relations();
    let rb = b.relations();
    let (kc, kb) = (rc.cols(), rb.cols());

    // Unknown layout: vec(S) (nb·nc, column-major), vec(Y) (kc·nc), vec(W) (kb·kc).
    let n_s = nb * nc;
    let n_y = kc * nc;
    let n_w = kb * kc;
    let unknowns = n_s + n_y + n_w;
    let n_eq1 = nc * nc; // p·S − R_C·Y = I
    let n_eq2 = nb * kc; // S·R_C − R_B·W = 0
    let mut a = IntMatrix::zero(n_eq1 + n_eq2, unknowns);
    let mut rhs = vec![BigInt::from(0); n_eq1 + n_eq2];

    for j in 0..nc {
        for i in 0..nc {
            let row = j * nc + i;
            for k in 0..nb {
                a[(row, j * nb + k)] += &p[(i, k)];
            }
            for k in 0..kc {
                a[(row, n_s + j * kc + k)] -= &rc[(i, k)];
            }
            if i == j {
                rhs[row] = BigInt::from(1);
            }
        }
    }
    for j in 0..kc {
        for i in 0..nb {
            let row = n_eq1 + j * nb + i;
            for k in 0..nc {
                a[(row, k * nb + i)] += &rc[(k, j)];
            }
            for k in 0..kb {
                a[(row, n_s + n_y + j * kb + k)] -= &rb[(i, k)];
            }
        }
    }

    let section = if unknowns == 0 {
        // C has no generators: the zero map is a section.
        Some(FgHom::zero(c, b))
    } else {
        solve(&a, &rhs).map(|x| {
            let mut m = IntMatrix::zero(nb, nc);
            for j in 0..nc {
                for i in 0..nb {
                    m[(i, j)] = x[j * nb + i].clone();
                }
            }
            FgHom::new(c.clone(), b.clone(), m).expect("solution satisfies the well-definedness equations")
        })
    };
    SplitOutcome { section }
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::group::{canonical_order, enumerate_canonical, FgGroup};

/// Divisibility data of a finitely generated group, in canonical
/// coordinates `Z/t₁ ⊕ … ⊕ Z/tₖ ⊕ Z^r` (torsion coordinates only; the free
/// coordinates of the listed elements are zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibleElements {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    /// Elements divisible by every positive integer: always just zero.
    pub divisible: Vec<Vec<BigInt>>,
    /// Torsion elements divisible by every `n` coprime to their order.
    pub coprime_divisible: Vec<Vec<BigInt>>,
    /// `false` when the torsion subgroup was too large to enumerate.
    pub complete: bool,
}

impl DivisibleElements {
    pub fn divisible_subgroup_is_trivial(&self) -> bool {
        self.divisible.iter().all(|x| x.iter().all(|c| c == &BigInt::from(0)))
    }
}

/// Enumerates the torsion subgroup (up to `limit` elements) and tests
/// divisibility directly. Multiplication by `n` only depends on `n` modulo
/// the exponent, so `n ≤ exponent` covers every positive integer. An element
/// with a nonzero free coordinate `c` is not divisible by `2|c|`, so only
/// torsion elements need checking.
pub fn divisible_elements(g: &FgGroup, limit: usize) -> DivisibleElements {
    let torsion = g.torsion();
    let free_rank = g.free_rank();
    let t = FgGroup::from_invariants(&torsion, 0);
    let exponent = t.torsion_exponent();
    let Some(elements) = enumerate_canonical(&t, limit) else {
        return DivisibleElements {
            torsion,
            free_rank,
            divisible: vec![vec![BigInt::from(0); t.generators()]],
            coprime_divisible: Vec::new(),
            complete: false,
        };
    };
    let mut divisible = Vec::new();
    let mut coprime_divisible = Vec::new();
    for x in &elements {
        let order = canonical_order(&torsion, x);
        let mut all = true;
        let mut coprime = true;
        let mut n = BigInt::one();
        while n <= exponent {
            let ok = t.is_divisible_by(x, &n);
            if !ok {
                all = false;
                if n.gcd(&order).is_one() {
                    coprime = false;
                }
            }
            n += 1;
        }
        if all {
            divisible.push(x.clone());
        }
        if coprime {
            coprime_divisible.push(x.clone());
        }
    }
    DivisibleElements { torsion, free_rank, divisible, coprime_divisible, complete: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_group() {
        let d = divisible_elements(&FgGroup::free(2), 100);
        assert_eq!(d.divisible.len(), 1);
        assert!(d.divisible_subgroup_is_trivial());
    }

    #[test]
    fn z4() {
        let d = divisible_elements(&FgGroup::cyclic(4), 100);
        assert_eq!(d.divisible, vec![vec![BigInt::from(0)]]);
        assert_eq!(d.coprime_divisible.len(), 4);
    }

    #[test]
    fn trivial() {
        let d = divisible_elements(&FgGroup::trivial(), 100);
        assert_eq!(d.divisible, vec![Vec::<BigInt>::new()]);
    }
}

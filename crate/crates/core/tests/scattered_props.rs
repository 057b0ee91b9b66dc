mod common;

use common::*;
use igl_core::scattered::{cb_derivative, cb_rank, escape_index, Ordinal, ScatterError, ScatteredSpace};
use proptest::prelude::*;
use rand::Rng;

fn all_small_bounds() -> Vec<Tri> {
    let mut out = Vec::new();
    for a in 0..=3 {
        for b in 0..=3 {
            for c in 0..=3 {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// The `n`-th derived set as the library describes it, pulled back to
/// triples through the iterated embeddings.
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

#[test]
fn derivatives_match_limit_point_oracle() {
    let grid = sample_grid(3, 7);
    for bound in all_small_bounds() {
        let mut oracle = DerivedOracle::new(bound);
        let mut spaces = vec![ScatteredSpace::interval(ordinal_of(bound))];
        while !spaces.last().unwrap().is_empty() {
            let next = cb_derivative(spaces.last().unwrap());
            spaces.push(next);
        }
        for n in 0..spaces.len() {
            for &y in &grid {
                assert_eq!(
                    library_contains(&spaces, n, y),
                    oracle.contains(n as u32, y),
                    "bound {bound:?}, derivative {n}, point {y:?}"
                );
            }
        }
        let rank = oracle.rank(&grid);
        assert_eq!(cb_rank(&spaces[0]), Ordinal::finite(rank.into()), "bound {bound:?}");
        assert_eq!(spaces.len() - 1, rank as usize);
    }
}

#[test]
fn rank_of_omega_powers() {
    for k in 0..=5 {
        assert_eq!(cb_rank(&ScatteredSpace::interval(Ordinal::omega_pow(k))), Ordinal::finite(u64::from(k) + 1));
    }
}

fn random_ordinal(r: &mut impl Rng) -> Ordinal {
    ordinal_of((r.gen_range(0..=2), r.gen_range(0..=3), r.gen_range(0..=3)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn escape_index_rejects_exactly_limit_escapes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut starts: Vec<Ordinal> = (0..r.gen_range(1..6)).map(|_| random_ordinal(&mut r)).collect();
        starts.push(Ordinal::zero());
        starts.sort();
        starts.dedup();
        let cut = r.gen_range(0..starts.len());
        let runs: Vec<(Ordinal, bool)> = starts.iter().enumerate().map(|(i, o)| (o.clone(), i < cut)).collect();
        let bound = ordinal_of((3, 0, 0));
        let gamma = tri_of(&starts[cut]);
        let result = escape_index(&runs, &bound);
        let limit = gamma.2 == 0 && gamma != (0, 0, 0);
        match result {
            Err(ScatterError::EscapesAtLimit(g)) => prop_assert!(limit && tri_of(&g) == gamma),
            Err(ScatterError::EscapesAtZero) => prop_assert_eq!(gamma, (0, 0, 0)),
            Ok(g) => prop_assert!(!limit && tri_of(&g) == gamma && gamma != (0, 0, 0)),
            Err(e) => prop_assert!(false, "unexpected {e:?}"),
        }
    }

    #[test]
    fn ordinal_text_round_trip(a in 0u64..4, b in 0u64..4, c in 0u64..4) {
        let o = ordinal_of((a, b, c));
        let back: Ordinal = o.to_string().parse().unwrap();
        prop_assert_eq!(back, o);
    }
}

#[test]
fn malformed_traces_are_rejected() {
    let o = |s: &str| s.parse::<Ordinal>().unwrap();
    let b = o("w^2");
    assert!(matches!(escape_index(&[], &b), Err(ScatterError::EmptyTrace)));
    assert!(matches!(escape_index(&[(o("1"), false)], &b), Err(ScatterError::TraceStart)));
    assert!(matches!(escape_index(&[(o("0"), true)], &b), Err(ScatterError::NeverEscapes)));
    assert!(matches!(
        escape_index(&[(o("0"), true), (o("2"), false), (o("3"), true)], &b),
        Err(ScatterError::NonMonotone)
    ));
}

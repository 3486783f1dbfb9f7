mod common;

use common::{el, element, random_element};
use grig_core::coset::{
    coset_of, km_coset_of, km_coset_of_permutation, lift_table_from, schreier_dot, verify_lift_table, KCoset, KOracle,
    KmCoset, KMUL, LIFT, LIFT_ENTRIES, REPRESENTATIVES, SCHREIER,
};
use grig_core::quotient::project;
use grig_core::{FiniteQuotient, GrigElement, Guards};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn z(i: u8) -> KCoset {
    KCoset::new(i).unwrap()
}

#[test]
fn schreier_walk_matches_quotient_identification() {
    let oracle = KOracle::new();
    let q = oracle.quotient();
    for x in 0..q.len() as u32 {
        assert_eq!(coset_of(&q.word_of(x)), oracle.coset_of_index(x));
    }
}

#[test]
fn embedded_tables_rederive_from_the_quotient() {
    let oracle = KOracle::new();
    let q = oracle.quotient();
    let rep = |i: usize| q.index_of_element(&el(REPRESENTATIVES[i]));
    for i in 0..16 {
        for (col, gen) in ["a", "b", "d"].iter().enumerate() {
            let image = q.compose(rep(i), q.index_of_element(&el(gen)));
            assert_eq!(oracle.coset_of_index(image).index(), SCHREIER[i][col]);
        }
        for j in 0..16 {
            assert_eq!(oracle.coset_of_index(q.compose(rep(i), rep(j))).index(), KMUL[i][j]);
        }
    }
}

#[test]
fn coset_examples() {
    assert_eq!(coset_of(&el("")), z(0));
    assert_eq!(coset_of(&el("d")), z(1));
    assert_eq!(coset_of(&el("ab")), z(15));
    assert_eq!(z(7).mul(z(7)), z(0));
    assert_eq!(z(1).mul(z(7)), coset_of(&el("da")));
    for i in 0..16 {
        assert_eq!(z(0).mul(z(i)), z(i));
    }
}

#[test]
fn structure_constants() {
    let oracle = KOracle::new();
    let q = oracle.quotient();
    assert_eq!(q.len() / oracle.kernel().len(), 16);

    let gens = ["a", "b", "c", "d"];
    let commutators: Vec<u32> = gens
        .iter()
        .flat_map(|x| gens.iter().map(move |y| (el(x), el(y))))
        .map(|(x, y)| q.index_of_element(&x.invert().multiply(&y.invert()).multiply(&x).multiply(&y)))
        .collect();
    let derived = q.subgroup_closure(&commutators);
    assert_eq!(q.len() / derived.len(), 8);
    for x in 0..q.len() as u32 {
        let c = oracle.coset_of_index(x);
        assert_eq!(derived.contains(x), c == z(0) || c == z(4));
    }
    assert_eq!(coset_of(&el("(ad)^2")), z(4));
}

#[test]
fn k_sits_between_stabilizers() {
    let q4 = FiniteQuotient::enumerate(4, &Guards::default()).unwrap();
    let seeds: Vec<u32> = ["(ab)^2", "(bada)^2", "(abad)^2"].iter().map(|w| q4.index_of_element(&el(w))).collect();
    let k = q4.subgroup_closure(&seeds);
    assert_eq!(q4.len() / k.len(), 16);
    for x in 0..q4.len() as u32 {
        if q4.get(x).restrict(3).is_identity() {
            assert!(k.contains(x));
        }
    }
    for w in ["(ab)^2", "(bada)^2", "(abad)^2"] {
        assert!(el(w).in_stab(1));
    }
}

#[test]
fn lift_table_verifies_at_depth_four() {
    let oracle = KOracle::new();
    let q4 = FiniteQuotient::enumerate(4, &Guards::default()).unwrap();
    let report = verify_lift_table(&q4, &oracle, &LIFT);
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.entries, 32);
    assert_eq!(report.witnessed, 32);
    assert!(report.contradictions.is_empty());
    assert_eq!(report.summary(), "32/32 entries verified");
}

#[test]
fn corrupted_lift_table_is_caught() {
    let oracle = KOracle::new();
    let q4 = FiniteQuotient::enumerate(4, &Guards::default()).unwrap();
    let mut entries = LIFT_ENTRIES;
    entries[5].1 = 12;
    let report = verify_lift_table(&q4, &oracle, &lift_table_from(&entries));
    assert!(!report.passed());
    let ((j, k), _) = entries[5];
    assert!(report.contradictions.iter().any(|&(a, b, _)| (a, b) == (j, k)));
    assert!(report.unwitnessed.contains(&(j, k, 12)));
}

#[test]
fn lift_table_at_depth_three_has_no_contradictions() {
    let oracle = KOracle::new();
    let report = verify_lift_table(oracle.quotient(), &oracle, &LIFT);
    assert!(report.passed());
    assert!(report.contradictions.is_empty());
    assert!(report.witnessed <= 32);
}

#[test]
fn sections_of_commutator_classes() {
    let class = |g: &GrigElement| {
        let c = coset_of(g);
        c.index().min(c.mul(z(4)).index())
    };
    let (a, ab, ac, ad, b) = (class(&el("a")), class(&el("ab")), class(&el("ac")), class(&el("ad")), class(&el("b")));
    let expected = [(a, 0), (ab, ac), (ac, ad), (ad, b)];
    let mut counts = [0usize; 4];
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    while counts.iter().any(|&n| n < 200) {
        let g = random_element(&mut rng, 20);
        if !g.twist() {
            continue;
        }
        let Some(slot) = expected.iter().position(|&(from, _)| from == class(&g)) else { continue };
        let s = g.first_level();
        assert_eq!(class(&s.left.multiply(&s.right)), expected[slot].1, "{g}");
        assert_eq!(class(&s.right.multiply(&s.left)), expected[slot].1, "{g}");
        counts[slot] += 1;
    }
}

#[test]
fn tower_indices() {
    assert_eq!(KmCoset::all(0).len(), 16);
    assert_eq!(KmCoset::all(1).len(), 64);
    assert_eq!(KmCoset::all(2).len(), 1024);
    let guards = Guards::default();
    assert_eq!(
        km_coset_of(&el("d"), 1, &guards).unwrap(),
        KmCoset::node(false, KmCoset::Base(z(0)), KmCoset::Base(z(8)))
    );
    assert_eq!(km_coset_of(&el(""), 3, &guards).unwrap(), KmCoset::identity(3));
    assert!(km_coset_of(&el("a"), 5, &guards).is_err());
}

#[test]
fn level_one_cosets_match_the_quotient() {
    let oracle = KOracle::new();
    let q4 = FiniteQuotient::enumerate(4, &Guards::default()).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for x in 0..q4.len() as u32 {
        let from_word = km_coset_of(&q4.word_of(x), 1, &Guards::default()).unwrap();
        assert_eq!(from_word, km_coset_of_permutation(&q4.get(x), 1, &oracle));
        seen.insert(from_word);
    }
    assert_eq!(seen.len(), 64);
}

#[test]
fn schreier_graph_export() {
    let dot = schreier_dot();
    assert_eq!(dot.matches("[label=\"z").count(), 16);
    assert!(dot.contains("z0 -> z7 [label=\"a\""));
}

proptest! {
    #[test]
    fn coset_multiplication_is_consistent(g in element(20), h in element(20)) {
        prop_assert_eq!(coset_of(&g.multiply(&h)), coset_of(&g).mul(coset_of(&h)));
        prop_assert_eq!(coset_of(&g.invert()), coset_of(&g).inv());
    }

    #[test]
    fn lifts_are_single_valued(g in element(24)) {
        let g = if g.twist() { g.multiply(&el("a")) } else { g };
        let s = g.first_level();
        prop_assert_eq!(grig_core::coset::lift(coset_of(&s.left), coset_of(&s.right)), Some(coset_of(&g)));
    }

    #[test]
    fn tower_multiplication_is_a_homomorphism(g in element(16), h in element(16), m in 0u8..4) {
        let guards = Guards::default();
        let (cg, ch) = (km_coset_of(&g, m, &guards).unwrap(), km_coset_of(&h, m, &guards).unwrap());
        prop_assert_eq!(cg.mul(&ch).unwrap(), km_coset_of(&g.multiply(&h), m, &guards).unwrap());
        prop_assert_eq!(cg.inv(), km_coset_of(&g.invert(), m, &guards).unwrap());
        prop_assert_eq!(cg.inv().inv(), cg.clone());
        prop_assert_eq!(cg.base(), Some(coset_of(&g)));
        prop_assert!(cg.is_realizable());
    }

    #[test]
    fn level_one_cosets_are_determined_by_depth_four(g in element(20)) {
        thread_local!(static ORACLE: KOracle = KOracle::new());
        let guards = Guards::default();
        ORACLE.with(|oracle| {
            assert_eq!(km_coset_of_permutation(&project(&g, 4), 1, oracle), km_coset_of(&g, 1, &guards).unwrap());
        });
    }
}

use std::collections::BTreeSet;

use grig_core::wreath::{FiniteGroup, WreathElement, WreathProduct};
use grig_core::{GrigError, Guards};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn wp(a: &str, b: &str) -> WreathProduct {
    WreathProduct::new(FiniteGroup::by_name(a).unwrap(), FiniteGroup::by_name(b).unwrap(), &Guards::default()).unwrap()
}

fn random_reduced(w: &WreathProduct, rng: &mut impl Rng) -> WreathElement {
    loop {
        let x = w.element(rng.gen_range(0..w.order()));
        if x.b != w.top().identity() {
            return w.reduce_element(&x).unwrap().0;
        }
    }
}

#[test]
fn group_laws() {
    let w = wp("S3", "C3");
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let id = w.identity();
    for _ in 0..300 {
        let (x, y, z) = (
            w.element(rng.gen_range(0..w.order())),
            w.element(rng.gen_range(0..w.order())),
            w.element(rng.gen_range(0..w.order())),
        );
        assert_eq!(w.mul(&w.mul(&x, &y), &z), w.mul(&x, &w.mul(&y, &z)));
        assert_eq!(w.mul(&x, &w.inv(&x)), id);
        assert_eq!(w.mul(&id, &x), x);
    }
    let d = wp("C2", "D4");
    for _ in 0..300 {
        let (x, y, z) = (
            d.element(rng.gen_range(0..d.order())),
            d.element(rng.gen_range(0..d.order())),
            d.element(rng.gen_range(0..d.order())),
        );
        assert_eq!(d.mul(&d.mul(&x, &y), &z), d.mul(&x, &d.mul(&y, &z)));
    }
}

#[test]
fn base_products_are_pointwise() {
    let w = wp("C4", "C3");
    let f = WreathElement { f: vec![1, 2, 3], b: 0 };
    let g = WreathElement { f: vec![3, 3, 1], b: 0 };
    assert_eq!(w.mul(&f, &g), WreathElement { f: vec![0, 1, 0], b: 0 });
}

#[test]
fn meldrum_matches_brute_force_everywhere() {
    for (a, b) in [("C2", "C2"), ("C2", "C3"), ("C4", "C2"), ("S3", "C2"), ("S3", "C3")] {
        let w = wp(a, b);
        for i in 0..w.order() {
            let x = w.element(i);
            let brute = w.centralizer_brute(&x);
            assert_eq!(w.centralizer_meldrum(&x), brute, "{a} wr {b}: {x:?}");
            if w.base().is_abelian() && w.is_reduced(&x) {
                assert_eq!(w.centralizer_abelian(&x).unwrap(), brute, "{a} wr {b}: {x:?}");
            }
        }
    }
}

#[test]
fn centralizer_special_cases() {
    let w = wp("C2", "C4");
    assert_eq!(w.centralizer_meldrum(&w.identity()).len(), w.order());
    let top = WreathElement { f: vec![0; 4], b: 1 };
    let predicted: BTreeSet<usize> = (0..w.order())
        .filter(|&i| {
            let y = w.element(i);
            w.top().commutes(y.b, 1) && (0..4).all(|x| y.f[w.top().mul(1, x)] == y.f[x])
        })
        .collect();
    assert_eq!(w.centralizer_meldrum(&top), predicted);
    assert_eq!(w.cbfb(&top).unwrap().len(), 4);

    let f_only = WreathElement { f: vec![1, 0, 1, 0], b: 0 };
    let stable: Vec<usize> = (0..4).filter(|&c| (0..4).all(|x| f_only.f[w.top().mul(c, x)] == f_only.f[x])).collect();
    assert_eq!(w.cbfb(&f_only).unwrap(), stable);
}

#[test]
fn simplified_criteria_require_abelian_reduced_input() {
    let w = wp("S3", "C2");
    assert_eq!(w.centralizer_abelian(&w.identity()), Err(GrigError::NotAbelian));
    let v = wp("C2", "C2");
    let unreduced = WreathElement { f: vec![1, 1], b: 1 };
    assert!(!v.is_reduced(&unreduced));
    assert_eq!(v.centralizer_abelian(&unreduced), Err(GrigError::NotReduced));
}

#[test]
fn reduction_collapses_orbits() {
    let w = wp("C3", "C4");
    let x = WreathElement { f: vec![1, 1, 0, 0], b: 1 };
    let (r, conj) = w.reduce_element(&x).unwrap();
    assert_eq!(w.mul(&w.mul(&w.inv(&conj), &x), &conj), r);
    assert!(w.is_reduced(&r));
    assert_eq!(r.support(w.base()).len(), 1);
    assert_eq!(r.f[r.support(w.base())[0]], 2);
    let plain = WreathElement { f: vec![0; 4], b: 2 };
    assert_eq!(w.reduce_element(&plain).unwrap().0, plain);

    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for (a, b) in [("C2", "C4"), ("C2", "D4"), ("C3", "S3")] {
        let w = wp(a, b);
        for _ in 0..100 {
            let x = w.element(rng.gen_range(0..w.order()));
            let (r, conj) = w.reduce_element(&x).unwrap();
            assert_eq!(conj.b, w.top().identity());
            assert_eq!(w.mul(&w.mul(&w.inv(&conj), &x), &conj), r);
            assert!(w.is_reduced(&r));
        }
    }
}

#[test]
fn centralizer_structure_on_random_reduced_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for (a, b) in [("C2", "C4"), ("C2", "D4"), ("C3", "S3")] {
        let w = wp(a, b);
        for _ in 0..50 {
            let x = random_reduced(&w, &mut rng);
            let report = w.check_centralizer_structure(&x).unwrap();
            assert!(report.matches, "{a} wr {b}: {x:?}");
            assert!(report.order_identity_holds, "{report:?}");
            assert!(report.factorization_ok, "{report:?}");
            assert!(report.kernel_is_cyclic_part, "{report:?}");
            assert_eq!(report.cbfb_order, report.action_kernel * report.action_image);
            assert!(report.sigma_order >= report.action_image as u128);
        }
    }
}

#[test]
fn wrong_exponent_is_reported() {
    let w = wp("C2", "C4");
    let x = WreathElement { f: vec![1, 0, 0, 0], b: 2 };
    let honest = w.check_centralizer_structure(&x).unwrap();
    assert!(honest.order_identity_holds);
    let faulty = w.centralizer_structure_with(&x, Some(honest.cosets as u32 + 1)).unwrap();
    assert!(!faulty.order_identity_holds);
}

#[test]
fn single_point_support_has_trivial_sigma() {
    let w = wp("C2", "C6");
    let x = WreathElement { f: vec![1, 0, 0, 0, 0, 0], b: 3 };
    let report = w.check_centralizer_structure(&x).unwrap();
    assert_eq!(report.sigma_order, 1);
    assert_eq!(report.action_image, 1);
    assert_eq!(report.cbfb_order, 2);
}

#[test]
fn abelian_projection() {
    let guards = Guards::default();
    let w = wp("C2", "C4");
    let half = w.project_abelian(&[0, 2], &guards).unwrap();
    assert!(half.homomorphism && half.kernel_matches);
    assert_eq!(half.kernel_order as u128, half.predicted_kernel_order);
    let iso = w.project_abelian(&[0], &guards).unwrap();
    assert_eq!(iso.kernel_order, 1);
    let all = w.project_abelian(&[0, 1, 2, 3], &guards).unwrap();
    assert!(all.homomorphism && all.kernel_matches);
    assert_eq!(all.kernel_order, w.order() / 2);
    assert_eq!(w.project_abelian(&[0, 1], &guards), Err(GrigError::NotNormal));
    let s = wp("C3", "S3");
    let a3 = s.project_abelian(&[0, 3, 4], &guards).unwrap();
    assert!(a3.homomorphism && a3.kernel_matches);
}

#[test]
fn factoring_through_the_base() {
    let w = wp("C4", "C2");
    let everything: BTreeSet<usize> = (0..w.order()).collect();
    assert_eq!(w.factor_through_base(&everything, Some(2)).unwrap().len(), 4);
    let trivial: BTreeSet<usize> = [w.index(&w.identity())].into();
    assert_eq!(w.factor_through_base(&trivial, None).unwrap(), vec![w.base().identity()]);

    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for _ in 0..30 {
        let seeds: Vec<WreathElement> =
            (0..rng.gen_range(1..3)).map(|_| w.element(rng.gen_range(0..w.order()))).collect();
        let k = w.normal_closure(&seeds);
        let ka = w.factor_through_base(&k, Some(2)).expect("a base subgroup always exists");
        for &v in &ka {
            for x in 0..2 {
                assert!(k.contains(&w.index(&w.delta(x, v))));
            }
        }
        let largest: Vec<usize> = (0..4).filter(|&v| k.contains(&w.index(&w.delta(0, v)))).collect();
        assert_eq!(ka, largest);
    }
}

#[test]
fn cayley_tables_are_validated() {
    let bad = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
    assert!(matches!(FiniteGroup::from_table(bad, None), Err(GrigError::InvalidTable(_))));
    let c3 = FiniteGroup::from_table(FiniteGroup::cyclic(3).table(), None).unwrap();
    assert!(c3.is_abelian());
    assert!(matches!(
        WreathProduct::new(FiniteGroup::cyclic(10), FiniteGroup::cyclic(10), &Guards::default()),
        Err(GrigError::WreathTooLarge { .. })
    ));
}

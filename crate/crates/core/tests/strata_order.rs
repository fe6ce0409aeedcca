mod common;

use std::cmp::Ordering;

use nilorbit::algebra::jordan_holder_flag;
use nilorbit::coadjoint::Functional;
use nilorbit::families::{generate, FamilySpec};
use nilorbit::sample;
use nilorbit::strata::{
    classify_point, compare_fine_labels, compare_index_sets, composition_layers, default_probes, enumerate_strata,
    FineLabel, IndexSet, OrderVariant,
};
use nilorbit::Error;
use proptest::prelude::*;

fn arb_set(m: usize) -> impl Strategy<Value = IndexSet> {
    proptest::collection::btree_set(1..=m, 0..=m).prop_map(|s| IndexSet::new(s.into_iter().collect()))
}

proptest! {
    #[test]
    fn index_set_order_is_a_total_order(a in arb_set(7), b in arb_set(7), c in arb_set(7)) {
        let ab = compare_index_sets(&a, &b);
        prop_assert_eq!(ab, compare_index_sets(&b, &a).reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab != Ordering::Greater && compare_index_sets(&b, &c) != Ordering::Greater {
            prop_assert_ne!(compare_index_sets(&a, &c), Ordering::Greater);
        }
        prop_assert_ne!(compare_index_sets(&IndexSet::empty(), &a), Ordering::Less);
    }

    #[test]
    fn fine_label_variants_are_total(xs in proptest::collection::vec(arb_set(5), 5), ys in proptest::collection::vec(arb_set(5), 5)) {
        let (a, b) = (FineLabel::new(xs), FineLabel::new(ys));
        for v in [OrderVariant::LexAscending, OrderVariant::LexDescending] {
            prop_assert_eq!(compare_fine_labels(&a, &b, v), compare_fine_labels(&b, &a, v).reverse());
            prop_assert_eq!(compare_fine_labels(&a, &b, v) == Ordering::Equal, a == b);
        }
    }
}

#[test]
fn pedersen_order_examples() {
    let s = |v: &[usize]| IndexSet::new(v.to_vec());
    assert_eq!(compare_index_sets(&s(&[1, 4]), &s(&[2, 3])), Ordering::Less);
    assert_eq!(compare_index_sets(&s(&[2, 3]), &s(&[]))  , Ordering::Less);
    assert_eq!(compare_index_sets(&s(&[1, 2]), &s(&[1])), Ordering::Less);
}

#[test]
fn h3_layers() {
    let g = generate(&FamilySpec::Heisenberg(1)).unwrap();
    let flag = jordan_holder_flag(&g).unwrap();
    let strata = enumerate_strata(&flag, 64, 0, &default_probes(3)).unwrap();
    for v in [OrderVariant::LexAscending, OrderVariant::LexDescending] {
        let r = composition_layers(&flag, &strata, v).unwrap();
        assert_eq!(r.layer_count, 2);
        assert_eq!(r.layers[0].orbit_dim, 2);
        assert_eq!(r.layers[0].coarse, IndexSet::new(vec![2, 3]));
        assert!(r.layers[1].is_character_layer);
        assert_eq!(r.layers[1].character_space_dim, Some(2));
        assert_eq!(r.index, 1);
    }
}

#[test]
fn layers_start_generic_and_end_with_characters() {
    for (name, g) in common::fixtures(8) {
        let flag = jordan_holder_flag(&g).unwrap();
        let strata = enumerate_strata(&flag, 40, 9, &default_probes(g.dim())).unwrap();
        let r = composition_layers(&flag, &strata, OrderVariant::default()).unwrap();
        assert!(r.layers.last().unwrap().is_character_layer, "{name}");
        let max_orbit = r.layers.iter().map(|l| l.orbit_dim).max().unwrap();
        assert_eq!(r.layers[0].orbit_dim, max_orbit, "{name}");
        for w in r.layers.windows(2) {
            assert_eq!(compare_fine_labels(&w[0].label, &w[1].label, OrderVariant::default()), Ordering::Less);
        }
    }
}

#[test]
fn labels_are_constant_on_scaled_representatives() {
    let mut rng = sample::rng(6);
    for (name, g) in common::fixtures(8) {
        let flag = jordan_holder_flag(&g).unwrap();
        let strata = enumerate_strata(&flag, 30, 1, &default_probes(g.dim())).unwrap();
        for s in &strata.strata {
            let t = sample::random_nonzero_scalar(&mut rng, 7);
            assert_eq!(classify_point(&flag, &s.representative.scaled(&t)).unwrap().fine, s.label, "{name}");
        }
    }
}

#[test]
fn zero_samples_and_missing_character_are_errors() {
    let g = generate(&FamilySpec::Heisenberg(1)).unwrap();
    let flag = jordan_holder_flag(&g).unwrap();
    assert!(matches!(enumerate_strata(&flag, 0, 0, &[]), Err(Error::ZeroSamples)));
    let only_generic = enumerate_strata(&flag, 4, 0, &[Functional::dual_basis(3, 0)]).unwrap();
    let generic_only = nilorbit::strata::StrataSample {
        strata: only_generic.strata.into_iter().filter(|s| !s.label.is_character()).collect(),
        ..only_generic
    };
    assert!(matches!(
        composition_layers(&flag, &generic_only, OrderVariant::default()),
        Err(Error::MissingCharacterLabel)
    ));
}

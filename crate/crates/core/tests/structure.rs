mod common;

use nilorbit::algebra::{
    center, derived_subalgebra, direct_product, is_ideal, jordan_holder_flag, lower_central_series, quotient,
    validate_algebra, Diagnostic, LieAlgebra,
};
use nilorbit::families::{generate, hmn_x, hmn_y, FamilySpec};
use nilorbit::linalg::{self, int};
use nilorbit::sample;
use nilorbit::{Error, Subspace};
use proptest::prelude::*;

#[test]
fn hmn_step_is_one_more_than_n() {
    for m in 1..=5 {
        for n in 1..=m {
            let g = generate(&FamilySpec::Hmn(m, n)).unwrap();
            assert_eq!(lower_central_series(&g).unwrap().step, n + 1, "hmn({m},{n})");
        }
    }
}

#[test]
fn hmn_center_is_y_n_and_trailing_x() {
    for m in 1..=4 {
        for n in 1..=m {
            let g = generate(&FamilySpec::Hmn(m, n)).unwrap();
            let d = g.dim();
            let mut idx = vec![hmn_y(m, n)];
            idx.extend((n + 1..=m).map(|i| hmn_x(m, i)));
            assert_eq!(center(&g), Subspace::coordinate(d, &idx), "hmn({m},{n})");
        }
    }
}

#[test]
fn every_fixture_validates_and_has_an_ideal_flag() {
    for (name, g) in common::fixtures(20) {
        assert!(validate_algebra(&g).is_empty(), "{name}");
        let flag = jordan_holder_flag(&g).unwrap();
        for j in 0..=g.dim() {
            assert_eq!(flag.member(j).dim(), j, "{name}");
            assert!(is_ideal(&g, flag.member(j)), "{name} g_{j}");
        }
        // the flag refines the lower central series
        for t in lower_central_series(&g).unwrap().terms {
            assert_eq!(flag.member(t.dim()), &t, "{name}");
        }
    }
}

#[test]
fn product_center_dimension_adds() {
    let fx = common::fixtures(6);
    for (a, g1) in &fx {
        for (b, g2) in &fx {
            let p = direct_product(g1, g2);
            assert_eq!(center(&p).dim(), center(g1).dim() + center(g2).dim(), "{a} x {b}");
            assert_eq!(derived_subalgebra(&p).dim(), derived_subalgebra(g1).dim() + derived_subalgebra(g2).dim());
        }
    }
}

#[test]
fn product_with_zero_dimensional_algebra_is_identity() {
    let h3 = generate(&FamilySpec::Heisenberg(1)).unwrap();
    let a0 = generate(&FamilySpec::Abelian(0)).unwrap();
    assert_eq!(direct_product(&h3, &a0).to_json(), h3.to_json());
}

#[test]
fn hmn_quotient_by_top_y_is_previous_member() {
    for m in 2..=4 {
        for n in 2..=m {
            let g = generate(&FamilySpec::Hmn(m, n)).unwrap();
            let q = quotient(&g, &Subspace::coordinate(g.dim(), &[hmn_y(m, n)])).unwrap();
            assert_eq!(q.algebra.to_json(), generate(&FamilySpec::Hmn(m, n - 1)).unwrap().to_json(), "hmn({m},{n})");
        }
    }
}

#[test]
fn heisenberg_redirected_bracket_is_not_nilpotent() {
    let g = LieAlgebra::new(
        vec!["Z".into(), "X".into(), "Y".into()],
        vec![((1, 2), 1, int(1))],
    )
    .unwrap();
    match validate_algebra(&g).as_slice() {
        [Diagnostic::NotNilpotent { stabilized_dim, .. }] => assert_eq!(*stabilized_dim, 1),
        other => panic!("unexpected diagnostics {other:?}"),
    }
    assert!(matches!(lower_central_series(&g), Err(Error::NotNilpotent { dim: 1 })));
}

#[test]
fn non_ideal_quotient_is_rejected() {
    let g = generate(&FamilySpec::Heisenberg(1)).unwrap();
    let x = Subspace::coordinate(3, &[1]);
    assert!(matches!(quotient(&g, &x), Err(Error::NotAnIdeal(_))));
}

#[test]
fn basis_change_preserves_invariants() {
    let mut rng = sample::rng(11);
    for (name, g) in common::fixtures(7) {
        let u = sample::random_unimodular(&mut rng, g.dim());
        let names: Vec<String> = (1..=g.dim()).map(|i| format!("B{i}")).collect();
        let h = g.change_basis(&u, names).unwrap();
        assert!(validate_algebra(&h).is_empty(), "{name}");
        assert_eq!(lower_central_series(&h).unwrap().dims(), lower_central_series(&g).unwrap().dims());
        assert_eq!(center(&h).dim(), center(&g).dim());
        // [u_i, u_j] expressed in the new basis maps back to the old bracket
        let ui: Vec<_> = u.clone();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let old = g.bracket(&ui[i], &ui[j]);
                let new = h.bracket_basis(i, j);
                assert_eq!(linalg::vec_mat(&new, &u, g.dim()), old, "{name}");
            }
        }
    }
}

fn arb_algebra() -> impl Strategy<Value = LieAlgebra> {
    (0usize..6, 1u64..1000).prop_map(|(which, seed)| {
        let fx = common::fixtures(9);
        let (_, g) = &fx[(which * 7 + seed as usize) % fx.len()];
        let mut rng = sample::rng(seed);
        let u = sample::random_unimodular(&mut rng, g.dim());
        let names: Vec<String> = (1..=g.dim()).map(|i| format!("E{i}")).collect();
        g.change_basis(&u, names).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip_is_bit_exact(g in arb_algebra()) {
        let text = g.to_json();
        let back = LieAlgebra::from_json(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back.content_hash(), g.content_hash());
    }
}

mod common;

use nilorbit::algebra::{derived_subalgebra, jordan_holder_flag};
use nilorbit::coadjoint::{coadjoint_move, isotropy, jump_data, jump_set, Functional};
use nilorbit::families::{generate, FamilySpec};
use nilorbit::linalg::int;
use nilorbit::poly::{rank_profile, MPoly};
use nilorbit::sample;
use nilorbit::strata::IndexSet;

const POINTS: usize = 100;

#[test]
fn jump_set_size_matches_rank_and_is_even() {
    let mut rng = sample::rng(1);
    for (name, g) in common::fixtures(9) {
        let flag = jordan_holder_flag(&g).unwrap();
        for _ in 0..POINTS {
            let xi = common::random_functional(&mut rng, g.dim());
            let jd = jump_data(&flag, &xi).unwrap();
            let rank = common::oracle_rank(&g, &xi);
            assert_eq!(jd.coarse.len(), rank, "{name} at {xi:?}");
            assert_eq!(jd.orbit_dim, rank, "{name}");
            assert_eq!(rank % 2, 0, "{name}");
            assert_eq!(jd.fine.last(), Some(&jd.coarse), "{name}");
        }
    }
}

#[test]
fn jump_set_is_scaling_and_orbit_invariant() {
    let mut rng = sample::rng(2);
    for (name, g) in common::fixtures(9) {
        let flag = jordan_holder_flag(&g).unwrap();
        let m = g.dim();
        for _ in 0..20 {
            let xi = common::random_functional(&mut rng, m);
            let j = jump_set(&flag, &xi).unwrap();
            for _ in 0..5 {
                let t = sample::random_nonzero_scalar(&mut rng, sample::DEFAULT_BOUND);
                assert_eq!(jump_set(&flag, &xi.scaled(&t)).unwrap(), j, "{name}");
                let x = sample::random_vector(&mut rng, m, sample::DEFAULT_BOUND);
                let moved = coadjoint_move(&g, &xi, &x).unwrap();
                assert_eq!(jump_set(&flag, &moved).unwrap(), j, "{name}");
            }
        }
    }
}

#[test]
fn character_iff_empty_jump_set() {
    let mut rng = sample::rng(3);
    for (name, g) in common::fixtures(9) {
        let flag = jordan_holder_flag(&g).unwrap();
        let m = g.dim();
        let derived = derived_subalgebra(&g);
        for i in 0..60 {
            let mut xi = common::random_functional(&mut rng, m);
            if i % 2 == 0 {
                // project onto [g,g]^⊥ so characters actually occur
                let ann = derived.annihilator();
                let c: Vec<_> = (0..ann.dim()).map(|_| sample::random_nonzero_scalar(&mut rng, 3)).collect();
                xi = Functional(nilorbit::linalg::vec_mat(&c, &ann.basis().to_vec(), m));
            }
            let kills_derived = derived.basis().iter().all(|z| xi.pair(z) == int(0));
            assert_eq!(jump_set(&flag, &xi).unwrap().is_empty(), kills_derived, "{name}");
        }
    }
}

#[test]
fn fine_tuple_matches_restricted_form_oracle() {
    let mut rng = sample::rng(4);
    for (name, g) in common::fixtures(8) {
        let flag = jordan_holder_flag(&g).unwrap();
        let m = g.dim();
        let mut points: Vec<Functional> = (0..m).map(|i| Functional::dual_basis(m, i)).collect();
        points.extend((0..50).map(|_| common::random_functional(&mut rng, m)));
        for xi in points {
            let fine = jump_data(&flag, &xi).unwrap().fine;
            let got: Vec<Vec<usize>> = fine.components().iter().map(|s| s.as_slice().to_vec()).collect();
            assert_eq!(got, common::oracle_fine_tuple(&flag, &xi), "{name} at {xi:?}");
        }
    }
}

#[test]
fn fine_tuple_matches_rank_profiles_of_leading_blocks() {
    let mut rng = sample::rng(5);
    for (name, g) in common::fixtures(8) {
        let flag = jordan_holder_flag(&g).unwrap();
        let m = g.dim();
        for _ in 0..10 {
            let xi = common::random_functional(&mut rng, m);
            let oracle = common::oracle_fine_tuple(&flag, &xi);
            // constant polynomials reuse the generic elimination path
            let form = nilorbit::coadjoint::bform_matrix(&g, &xi).unwrap();
            let p = flag.vectors();
            let pm = nilorbit::linalg::mat_mul(p, &form, m);
            let f = nilorbit::linalg::mat_mul(&pm, &nilorbit::linalg::transpose(p, m), m);
            for k in 1..=m {
                let block: Vec<Vec<MPoly>> = f[..k].iter().map(|r| r[..k].iter().map(|c| MPoly::constant(0, c.clone())).collect()).collect();
                let profile: Vec<usize> = rank_profile(block, k).unwrap().iter().map(|j| j + 1).collect();
                assert_eq!(profile, oracle[k - 1], "{name} k={k}");
            }
        }
    }
}

#[test]
fn heisenberg_examples() {
    let g = generate(&FamilySpec::Heisenberg(1)).unwrap();
    let flag = jordan_holder_flag(&g).unwrap();
    let z = Functional::dual_basis(3, 0);
    assert_eq!(jump_set(&flag, &z).unwrap(), IndexSet::new(vec![2, 3]));
    assert_eq!(isotropy(&g, &z).unwrap().orbit_dim, 2);
    let x = Functional::dual_basis(3, 1);
    assert!(jump_set(&flag, &x).unwrap().is_empty());
}

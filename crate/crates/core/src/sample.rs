//! Seeded sampling of integer points. All randomness in the crate comes
//! from here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{int, Matrix, Vector};

/// Default coordinate bound `B`: entries are drawn from `[-B, B]`.
pub const DEFAULT_BOUND: i64 = 7;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a labelled sub-task.
pub fn sub_rng(seed: u64, stream: u64) -> SampleRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn random_vector(rng: &mut SampleRng, dim: usize, bound: i64) -> Vector {
    (0..dim).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

/// Random vector with every coordinate nonzero.
pub fn random_nonzero_vector(rng: &mut SampleRng, dim: usize, bound: i64) -> Vector {
    (0..dim)
        .map(|_| {
            let v = rng.gen_range(1..=bound);
            int(if rng.gen_bool(0.5) { v } else { -v })
        })
        .collect()
}

pub fn random_nonzero_scalar(rng: &mut SampleRng, bound: i64) -> crate::linalg::Scalar {
    random_nonzero_vector(rng, 1, bound).pop().expect("one entry")
}

/// Integer matrix of determinant ±1 with entries in `[-3, 3]`.
///
/// Tries products `L U` of unit triangular matrices with entries in
/// `[-1, 1]` and falls back to a permuted unit upper-triangular matrix.
pub fn random_unimodular(rng: &mut SampleRng, dim: usize) -> Matrix {
    let within = |m: &[Vec<i64>]| m.iter().flatten().all(|x| x.abs() <= 3);
    for _ in 0..200 {
        let l = unit_triangular(rng, dim, 1, true);
        let u = unit_triangular(rng, dim, 1, false);
        let p = mul_int(&l, &u);
        if within(&p) {
            return to_scalar(&p);
        }
    }
    let u = unit_triangular(rng, dim, 3, false);
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    to_scalar(&perm.iter().map(|&i| u[i].clone()).collect::<Vec<_>>())
}

fn unit_triangular(rng: &mut SampleRng, dim: usize, bound: i64, lower: bool) -> Vec<Vec<i64>> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| match (i == j, (j < i) == lower) {
                    (true, _) => 1,
                    (false, true) => rng.gen_range(-bound..=bound),
                    (false, false) => 0,
                })
                .collect()
        })
        .collect()
}

fn mul_int(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn to_scalar(m: &[Vec<i64>]) -> Matrix {
    m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inverse;
    use num_traits::Signed;

    #[test]
    fn unimodular_is_invertible_over_integers() {
        let mut r = rng(11);
        for dim in 1..8 {
            let u = random_unimodular(&mut r, dim);
            assert!(u.iter().flatten().all(|x| x.abs() <= int(3)));
            let inv = inverse(&u).expect("invertible");
            assert!(inv.iter().flatten().all(|x| x.is_integer()));
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a = random_vector(&mut rng(5), 6, DEFAULT_BOUND);
        let b = random_vector(&mut rng(5), 6, DEFAULT_BOUND);
        assert_eq!(a, b);
        assert!(a.iter().all(|x| x.abs() <= int(DEFAULT_BOUND)));
    }
}

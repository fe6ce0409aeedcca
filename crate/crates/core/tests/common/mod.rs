#![allow(dead_code)]

use nilorbit::algebra::{Flag, LieAlgebra};
use nilorbit::coadjoint::{bform_matrix, Functional};
use nilorbit::families::{generate, heisenberg_times_abelian, FamilySpec};
use nilorbit::sample::{self, SampleRng};
use nilorbit::Scalar;
use num_traits::{One, Zero};

pub fn fixtures(max_dim: usize) -> Vec<(String, LieAlgebra)> {
    let mut out = Vec::new();
    for k in 1..=6 {
        out.push((format!("abelian({k})"), generate(&FamilySpec::Abelian(k)).unwrap()));
    }
    for d in 1..=3 {
        for k in 0..=2 {
            out.push((format!("heisenberg({d})xabelian({k})"), heisenberg_times_abelian(d, k).unwrap()));
        }
    }
    for m in 1..=4 {
        for n in 1..=m {
            out.push((format!("hmn({m},{n})"), generate(&FamilySpec::Hmn(m, n)).unwrap()));
        }
    }
    for n in 3..=5 {
        out.push((format!("threadlike({n})"), generate(&FamilySpec::Threadlike(n)).unwrap()));
    }
    out.retain(|(_, g)| g.dim() <= max_dim);
    out
}

pub fn random_functional(rng: &mut SampleRng, dim: usize) -> Functional {
    Functional(sample::random_vector(rng, dim, sample::DEFAULT_BOUND))
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Null space of a square matrix by plain Gauss-Jordan elimination.
fn null_space(a: &[Vec<Scalar>], n: usize) -> Vec<Vec<Scalar>> {
    let mut rows: Vec<Vec<Scalar>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Scalar::zero(); n];
            v[free] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rows[i][free].clone();
            }
            v
        })
        .collect()
}

/// Indices attained as the last nonzero coordinate of some vector in the span.
fn last_index_set(mut vs: Vec<Vec<Scalar>>, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for c in (0..n).rev() {
        let Some(p) = vs.iter().position(|v| !v[c].is_zero()) else {
            continue;
        };
        let pv = vs.remove(p);
        for v in vs.iter_mut() {
            if !v[c].is_zero() {
                let f = &v[c] / &pv[c];
                for (x, y) in v.iter_mut().zip(&pv) {
                    *x -= &f * y;
                }
            }
        }
        out.push(c);
    }
    out
}

/// Fine tuple from the kernels of the leading blocks of the form written in
/// flag coordinates: `j ∉ J^k` exactly when some kernel vector of the
/// `k × k` block has its last nonzero coordinate at `j`.
pub fn oracle_fine_tuple(flag: &Flag, xi: &Functional) -> Vec<Vec<usize>> {
    let m = flag.dim();
    let form = bform_matrix(flag.algebra(), xi).unwrap();
    let p = flag.vectors();
    let f: Vec<Vec<Scalar>> = (0..m)
        .map(|a| {
            let row: Vec<Scalar> = (0..m).map(|j| dot(&p[a], &(0..m).map(|i| form[i][j].clone()).collect::<Vec<_>>())).collect();
            (0..m).map(|b| dot(&row, &p[b])).collect()
        })
        .collect();
    (1..=m)
        .map(|k| {
            let block: Vec<Vec<Scalar>> = f[..k].iter().map(|r| r[..k].to_vec()).collect();
            let missing = last_index_set(null_space(&block, k), k);
            (0..k).filter(|j| !missing.contains(j)).map(|j| j + 1).collect()
        })
        .collect()
}

/// Rank of the form by the same elimination.
pub fn oracle_rank(g: &LieAlgebra, xi: &Functional) -> usize {
    let m = g.dim();
    m - null_space(&bform_matrix(g, xi).unwrap(), m).len()
}

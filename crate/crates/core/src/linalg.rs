//! Exact linear algebra over the rationals: reduced row-echelon forms,
//! ranks, kernels and subspaces stored in canonical form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Exact rational scalar.
pub type Scalar = BigRational;

/// Dense rational vector.
pub type Vector = Vec<Scalar>;

/// Dense rational matrix stored row by row.
pub type Matrix = Vec<Vector>;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| unit_vector(n, i)).collect()
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Scalar], s: &Scalar) -> Vector {
    a.iter().map(|x| x * s).collect()
}

/// `v * A` for a row vector `v`.
pub fn vec_mat(v: &[Scalar], a: &Matrix, ncols: usize) -> Vector {
    let mut out = zero_vector(ncols);
    for (vi, row) in v.iter().zip(a) {
        if vi.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            if !r.is_zero() {
                *o += vi * r;
            }
        }
    }
    out
}

/// `A * v` for a column vector `v`.
pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vector {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, ncols: usize) -> Matrix {
    a.iter().map(|row| vec_mat(row, b, ncols)).collect()
}

pub fn transpose(a: &Matrix, ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row-echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vector], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        if !inv.is_one() {
            for x in m[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : A x = 0}`.
pub fn kernel(a: &[Vector], ncols: usize) -> Matrix {
    let (r, pivots) = rref(a, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = zero_vector(ncols);
            v[f] = Scalar::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vector(n, i));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// A linear subspace of `Q^n`, kept as the reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    #[serde(with = "crate::format::matrix_strings")]
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        let (basis, pivots) = rref(vectors, ambient);
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vs: Matrix = indices.iter().map(|&i| unit_vector(ambient, i)).collect();
        Self::span(ambient, &vs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after clearing the pivot columns with the basis rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &f * b;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    /// `{f : f(v) = 0 for all v in self}`, in dual coordinates.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        Subspace::span(self.ambient, &kernel(&self.basis, self.ambient))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}", self.dim(), self.ambient)?;
        for row in &self.basis {
            let s: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, " [{}]", s.join(" "))?;
        }
        write!(f, ")")
    }
}

pub fn check_len(expected: usize, got: usize) -> Result<(), Error> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub fn abs_max(v: &[Scalar]) -> Scalar {
    v.iter().map(|x| x.abs()).fold(Scalar::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vector {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rref_and_rank() {
        let rows = vec![q(&[1, 2, 3]), q(&[2, 4, 6]), q(&[0, 1, 1])];
        let (r, p) = rref(&rows, 3);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r, vec![q(&[1, 0, 1]), q(&[0, 1, 1])]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = vec![q(&[1, 1, 0, 2]), q(&[0, 0, 1, -1])];
        let k = kernel(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vector(&mat_vec(&a, v)));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![q(&[2, 1]), q(&[1, 1])];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv, 2), identity(2));
        assert!(inverse(&vec![q(&[1, 2]), q(&[2, 4])]).is_none());
    }

    #[test]
    fn subspace_operations() {
        let a = Subspace::coordinate(3, &[0, 1]);
        let b = Subspace::span(3, &[q(&[0, 1, 1])]);
        assert_eq!(a.intersection(&b).dim(), 0);
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert_eq!(a.annihilator(), Subspace::coordinate(3, &[2]));
        assert!(b.contains(&q(&[0, 3, 3])));
        assert!(!b.contains(&q(&[0, 3, 2])));
        let c = Subspace::span(3, &[q(&[1, 1, 0]), q(&[0, 1, 1])]);
        assert_eq!(a.intersection(&c).dim(), 1);
    }
}

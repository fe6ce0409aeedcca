//! Lie algebras given by rational structure constants: validation, central
//! series, center, flags, quotients and products.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::format::{parse_scalar, scalar_string, AlgebraFile, BracketEntry, Coeffs};
use crate::linalg::{self, Matrix, Scalar, Subspace, Vector};

/// A finite-dimensional Lie algebra `[X_i, X_j] = sum_k c_ij^k X_k`.
///
/// Only nonzero constants with `i < j` are stored; indices are 0-based
/// internally and 1-based in the file format.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    brackets: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>>,
}

/// A single structure-constant entry `c_ij^k` with 0-based indices.
pub type Constant = ((usize, usize), usize, Scalar);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Diagnostic {
    Malformed { message: String },
    Jacobi { i: usize, j: usize, k: usize },
    NotNilpotent { stabilized_dim: usize, basis: Vec<Vec<String>> },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Malformed { message } => write!(f, "malformed: {message}"),
            Diagnostic::Jacobi { i, j, k } => write!(f, "Jacobi identity fails for ({i},{j},{k})"),
            Diagnostic::NotNilpotent { stabilized_dim, .. } => write!(
                f,
                "not nilpotent: lower central series stabilizes at a nonzero term of dimension {stabilized_dim}"
            ),
        }
    }
}

impl Diagnostic {
    pub fn is_malformed(&self) -> bool {
        matches!(self, Diagnostic::Malformed { .. })
    }
}

fn malformed(message: impl Into<String>) -> Diagnostic {
    Diagnostic::Malformed {
        message: message.into(),
    }
}

impl LieAlgebra {
    /// Builds an algebra from 0-based constants. Entries with `i > j` are
    /// folded in with a sign flip; repeated entries accumulate.
    pub fn new(basis_names: Vec<String>, constants: impl IntoIterator<Item = Constant>) -> Result<Self> {
        let dim = basis_names.len();
        let mut brackets: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
        let mut errs = Vec::new();
        for ((i, j), k, c) in constants {
            if i >= dim || j >= dim || k >= dim {
                errs.push(malformed(format!("index out of range in c_{{{i},{j}}}^{k}")));
                continue;
            }
            if i == j {
                if !c.is_zero() {
                    errs.push(malformed(format!("nonzero [X_{0},X_{0}]", i + 1)));
                }
                continue;
            }
            let (a, b, c) = if i < j { (i, j, c) } else { (j, i, -c) };
            *brackets.entry((a, b)).or_default().entry(k).or_insert_with(Scalar::zero) += c;
        }
        if !errs.is_empty() {
            return Err(Error::Malformed(errs));
        }
        for coeffs in brackets.values_mut() {
            coeffs.retain(|_, c| !c.is_zero());
        }
        brackets.retain(|_, coeffs| !coeffs.is_empty());
        Ok(LieAlgebra {
            dim,
            basis_names,
            brackets,
        })
    }

    pub fn abelian(names: Vec<String>) -> Self {
        LieAlgebra::new(names, std::iter::empty()).expect("abelian algebra is well-formed")
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        let mut errs = Vec::new();
        if file.basis.len() != file.dim {
            errs.push(malformed(format!(
                "basis has {} names but dim is {}",
                file.basis.len(),
                file.dim
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut constants = Vec::new();
        for BracketEntry { i, j, coeffs } in &file.brackets {
            let (i, j) = (*i, *j);
            if i == 0 || j == 0 || i > file.dim || j > file.dim {
                errs.push(malformed(format!("bracket index ({i},{j}) out of range 1..={}", file.dim)));
                continue;
            }
            if i >= j {
                errs.push(malformed(format!("bracket ({i},{j}) must have i < j")));
                continue;
            }
            if !seen.insert((i, j)) {
                errs.push(malformed(format!("bracket ({i},{j}) listed twice")));
                continue;
            }
            for (k, v) in &coeffs.0 {
                let k: usize = match k.parse() {
                    Ok(k) if k >= 1 && k <= file.dim => k,
                    _ => {
                        errs.push(malformed(format!("coefficient index {k:?} in ({i},{j}) out of range")));
                        continue;
                    }
                };
                match parse_scalar(v) {
                    Ok(c) => constants.push(((i - 1, j - 1), k - 1, c)),
                    Err(e) => errs.push(malformed(format!("in ({i},{j}): {e}"))),
                }
            }
        }
        if !errs.is_empty() {
            return Err(Error::Malformed(errs));
        }
        LieAlgebra::new(file.basis.clone(), constants)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&AlgebraFile::from_json(s)?)
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            dim: self.dim,
            basis: self.basis_names.clone(),
            brackets: self
                .brackets
                .iter()
                .map(|(&(i, j), coeffs)| BracketEntry {
                    i: i + 1,
                    j: j + 1,
                    coeffs: Coeffs(
                        coeffs
                            .iter()
                            .map(|(k, c)| ((k + 1).to_string(), scalar_string(c)))
                            .collect(),
                    ),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    /// SHA-256 of the canonical file encoding, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    /// Nonzero constants, `i < j`, 0-based.
    pub fn constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        self.brackets
            .iter()
            .flat_map(|(&(i, j), cs)| cs.iter().map(move |(&k, c)| (i, j, k, c)))
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// `[X_i, X_j]` as a dense coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let mut out = linalg::zero_vector(self.dim);
        let (a, b, sign) = match i.cmp(&j) {
            std::cmp::Ordering::Less => (i, j, false),
            std::cmp::Ordering::Greater => (j, i, true),
            std::cmp::Ordering::Equal => return out,
        };
        if let Some(cs) = self.brackets.get(&(a, b)) {
            for (&k, c) in cs {
                out[k] = if sign { -c.clone() } else { c.clone() };
            }
        }
        out
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = linalg::zero_vector(self.dim);
        for (&(i, j), cs) in &self.brackets {
            let w = &x[i] * &y[j] - &x[j] * &y[i];
            if w.is_zero() {
                continue;
            }
            for (&k, c) in cs {
                out[k] += &w * c;
            }
        }
        out
    }

    /// Matrix of `ad X` acting on column vectors: column `j` is `[X, X_j]`.
    pub fn ad_matrix(&self, x: &[Scalar]) -> Matrix {
        let m = self.dim;
        let cols: Vec<Vector> = (0..m).map(|j| self.bracket(x, &linalg::unit_vector(m, j))).collect();
        linalg::transpose(&cols, m)
    }

    /// Structure constants re-expressed in the basis given by the rows of
    /// `change` (row `i` is the new `i`-th basis vector in old coordinates).
    pub fn change_basis(&self, change: &Matrix, names: Vec<String>) -> Result<LieAlgebra> {
        let m = self.dim;
        linalg::check_len(m, change.len())?;
        let inv = linalg::inverse(change)
            .ok_or_else(|| Error::Internal("basis change is singular".into()))?;
        let mut constants = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let v = self.bracket(&change[i], &change[j]);
                if linalg::is_zero_vector(&v) {
                    continue;
                }
                let coords = linalg::vec_mat(&v, &inv, m);
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        constants.push(((i, j), k, c));
                    }
                }
            }
        }
        LieAlgebra::new(names, constants)
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {}", self.dim)?;
        for (i, j, k, c) in self.constants() {
            write!(
                f,
                ", [{},{}]_{}={}",
                self.basis_names[i], self.basis_names[j], self.basis_names[k], c
            )?;
        }
        write!(f, ")")
    }
}

/// Jacobi and nilpotency violations; empty iff the algebra is a valid
/// nilpotent Lie algebra.
pub fn validate_algebra(g: &LieAlgebra) -> Vec<Diagnostic> {
    let m = g.dim();
    let mut out = Vec::new();
    let brackets: Vec<Vec<Vector>> = (0..m)
        .map(|i| (0..m).map(|j| g.bracket_basis(i, j)).collect())
        .collect();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let a = g.bracket(&brackets[i][j], &linalg::unit_vector(m, k));
                let b = g.bracket(&brackets[j][k], &linalg::unit_vector(m, i));
                let c = g.bracket(&brackets[k][i], &linalg::unit_vector(m, j));
                let s = linalg::add(&linalg::add(&a, &b), &c);
                if !linalg::is_zero_vector(&s) {
                    out.push(Diagnostic::Jacobi {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                    });
                }
            }
        }
    }
    if let Err(stuck) = descending_series(g) {
        out.push(Diagnostic::NotNilpotent {
            stabilized_dim: stuck.dim(),
            basis: stuck.basis().iter().map(|r| crate::format::vector_strings(r)).collect(),
        });
    }
    out
}

/// `[g, V]` for a subspace `V`.
pub fn bracket_with_algebra(g: &LieAlgebra, v: &Subspace) -> Subspace {
    let m = g.dim();
    let mut vs = Vec::new();
    for i in 0..m {
        let e = linalg::unit_vector(m, i);
        for b in v.basis() {
            let w = g.bracket(&e, b);
            if !linalg::is_zero_vector(&w) {
                vs.push(w);
            }
        }
    }
    Subspace::span(m, &vs)
}

fn descending_series(g: &LieAlgebra) -> std::result::Result<Vec<Subspace>, Subspace> {
    let m = g.dim();
    let mut terms = vec![Subspace::full(m)];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_zero() {
            return Ok(terms);
        }
        let next = bracket_with_algebra(g, last);
        if next.dim() == last.dim() {
            return Err(next);
        }
        terms.push(next);
    }
}

/// Lower central series `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ ... ⊇ {0}`.
#[derive(Debug, Clone, Serialize)]
pub struct CentralSeries {
    pub terms: Vec<Subspace>,
    /// Number of nonzero terms.
    pub step: usize,
}

impl CentralSeries {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }
}

pub fn lower_central_series(g: &LieAlgebra) -> Result<CentralSeries> {
    let terms = descending_series(g).map_err(|s| Error::NotNilpotent { dim: s.dim() })?;
    let step = terms.iter().filter(|t| !t.is_zero()).count();
    Ok(CentralSeries { terms, step })
}

pub fn center(g: &LieAlgebra) -> Subspace {
    let m = g.dim();
    // [X_i, X] = 0 for all i, as linear equations in the coordinates of X.
    let mut rows = Vec::new();
    for i in 0..m {
        let ad = g.ad_matrix(&linalg::unit_vector(m, i));
        rows.extend(ad.into_iter().filter(|r| !linalg::is_zero_vector(r)));
    }
    Subspace::span(m, &linalg::kernel(&rows, m))
}

pub fn derived_subalgebra(g: &LieAlgebra) -> Subspace {
    let m = g.dim();
    let vs: Vec<Vector> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .map(|(i, j)| g.bracket_basis(i, j))
        .filter(|v| !linalg::is_zero_vector(v))
        .collect();
    Subspace::span(m, &vs)
}

/// `None` if `v` is an ideal; otherwise a description of a bracket escaping it.
pub fn ideal_witness(g: &LieAlgebra, v: &Subspace) -> Option<String> {
    let m = g.dim();
    for i in 0..m {
        let e = linalg::unit_vector(m, i);
        for (b_idx, b) in v.basis().iter().enumerate() {
            let w = g.bracket(&e, b);
            if !v.contains(&w) {
                return Some(format!(
                    "[{}, basis vector {} of the subspace] = {:?} escapes it",
                    g.basis_names()[i],
                    b_idx + 1,
                    crate::format::vector_strings(&w)
                ));
            }
        }
    }
    None
}

pub fn is_ideal(g: &LieAlgebra, v: &Subspace) -> bool {
    ideal_witness(g, v).is_none()
}

/// A chain of ideals `g_0 ⊂ g_1 ⊂ ... ⊂ g_m = g` with `dim g_j = j`,
/// realized by an adapted basis: `g_j` is the span of the first `j` rows.
#[derive(Debug, Clone)]
pub struct Flag {
    algebra: LieAlgebra,
    vectors: Matrix,
    prefixes: Vec<Subspace>,
}

impl Flag {
    pub fn new(algebra: LieAlgebra, vectors: Matrix) -> Result<Self> {
        let m = algebra.dim();
        linalg::check_len(m, vectors.len())?;
        if m > 0 && linalg::inverse(&vectors).is_none() {
            return Err(Error::Internal("flag basis is not invertible".into()));
        }
        let prefixes: Vec<Subspace> = (0..=m).map(|j| Subspace::span(m, &vectors[..j])).collect();
        for (j, p) in prefixes.iter().enumerate() {
            if let Some(w) = ideal_witness(&algebra, p) {
                return Err(Error::Internal(format!("flag member g_{j} is not an ideal: {w}")));
            }
        }
        Ok(Flag {
            algebra,
            vectors,
            prefixes,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Row `j-1` is `X_j`, in the stored basis of the algebra.
    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    /// `g_j`, for `0 <= j <= m`.
    pub fn member(&self, j: usize) -> &Subspace {
        &self.prefixes[j]
    }

    pub fn is_identity(&self) -> bool {
        self.vectors == linalg::identity(self.dim())
    }
}

/// Jordan-Hölder flag refining the lower central series: starts from the
/// deepest nonzero term and extends through each layer by the echelon rows
/// of the next term, taken in order.
pub fn jordan_holder_flag(g: &LieAlgebra) -> Result<Flag> {
    let series = lower_central_series(g)?;
    let m = g.dim();
    let mut current = Subspace::zero(m);
    let mut vectors = Vec::with_capacity(m);
    for term in series.terms.iter().rev() {
        for row in term.basis() {
            if !current.contains(row) {
                vectors.push(row.clone());
                current = Subspace::span(m, &vectors);
            }
        }
    }
    Flag::new(g.clone(), vectors)
}

/// `g / I` with the basis given by the non-pivot standard vectors of `I`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: LieAlgebra,
    pub ideal: Subspace,
    /// Stored-basis indices of `g` forming the quotient basis.
    pub complement: Vec<usize>,
}

impl Quotient {
    /// Coordinates of the class of `v` in the quotient basis.
    pub fn project(&self, v: &[Scalar]) -> Vector {
        let r = self.ideal.reduce(v);
        self.complement.iter().map(|&i| r[i].clone()).collect()
    }
}

pub fn quotient(g: &LieAlgebra, ideal: &Subspace) -> Result<Quotient> {
    linalg::check_len(g.dim(), ideal.ambient())?;
    if let Some(w) = ideal_witness(g, ideal) {
        return Err(Error::NotAnIdeal(w));
    }
    let m = g.dim();
    let complement: Vec<usize> = (0..m).filter(|i| !ideal.pivots().contains(i)).collect();
    let names = complement.iter().map(|&i| g.basis_names()[i].clone()).collect();
    let partial = Quotient {
        algebra: LieAlgebra::abelian(Vec::new()),
        ideal: ideal.clone(),
        complement: complement.clone(),
    };
    let mut constants = Vec::new();
    for (a, &i) in complement.iter().enumerate() {
        for (b, &j) in complement.iter().enumerate().skip(a + 1) {
            let coords = partial.project(&g.bracket_basis(i, j));
            for (k, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    constants.push(((a, b), k, c));
                }
            }
        }
    }
    Ok(Quotient {
        algebra: LieAlgebra::new(names, constants)?,
        ..partial
    })
}

pub fn direct_product(g1: &LieAlgebra, g2: &LieAlgebra) -> LieAlgebra {
    let off = g1.dim();
    let mut names = g1.basis_names().to_vec();
    names.extend(g2.basis_names().iter().cloned());
    let constants = g1
        .constants()
        .map(|(i, j, k, c)| ((i, j), k, c.clone()))
        .chain(g2.constants().map(|(i, j, k, c)| ((i + off, j + off), k + off, c.clone())))
        .collect::<Vec<_>>();
    LieAlgebra::new(names, constants).expect("product of well-formed algebras")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    /// h3 in the order (Z, X, Y) with [X, Y] = Z.
    fn h3() -> LieAlgebra {
        LieAlgebra::new(names(&["Z", "X", "Y"]), vec![((1, 2), 0, int(1))]).unwrap()
    }

    #[test]
    fn h3_is_valid_and_two_step() {
        let g = h3();
        assert!(validate_algebra(&g).is_empty());
        let s = lower_central_series(&g).unwrap();
        assert_eq!(s.step, 2);
        assert_eq!(s.dims(), vec![3, 1, 0]);
        assert_eq!(center(&g), Subspace::coordinate(3, &[0]));
        assert_eq!(derived_subalgebra(&g), Subspace::coordinate(3, &[0]));
    }

    #[test]
    fn redirected_bracket_is_not_nilpotent() {
        // [X, Y] = X: series stabilizes at span{X}.
        let g = LieAlgebra::new(names(&["Z", "X", "Y"]), vec![((1, 2), 1, int(1))]).unwrap();
        let d = validate_algebra(&g);
        assert_eq!(d.len(), 1);
        match &d[0] {
            Diagnostic::NotNilpotent { stabilized_dim, basis } => {
                assert_eq!(*stabilized_dim, 1);
                assert_eq!(basis, &vec![vec!["0".to_string(), "1".into(), "0".into()]]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(lower_central_series(&g), Err(Error::NotNilpotent { dim: 1 })));
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [e1,e2]=e3, [e1,e3]=e4, [e2,e4]=e5: the cyclic sum on (1,2,3) is e5.
        let g = LieAlgebra::new(
            names(&["e1", "e2", "e3", "e4", "e5"]),
            vec![((0, 1), 2, int(1)), ((0, 2), 3, int(1)), ((1, 3), 4, int(1))],
        )
        .unwrap();
        let d = validate_algebra(&g);
        assert_eq!(d, vec![Diagnostic::Jacobi { i: 1, j: 2, k: 3 }]);
    }

    #[test]
    fn malformed_file_inputs() {
        let bad = r#"{"dim":2,"basis":["A","B"],"brackets":[{"i":2,"j":3,"coeffs":{"1":"1/0"}}]}"#;
        match LieAlgebra::from_json(bad) {
            Err(Error::Malformed(ds)) => assert!(ds.iter().all(Diagnostic::is_malformed)),
            other => panic!("unexpected {other:?}"),
        }
        let bad = r#"{"dim":2,"basis":["A","B"],"brackets":[{"i":1,"j":2,"coeffs":{"1":"1/0"}}]}"#;
        assert!(matches!(LieAlgebra::from_json(bad), Err(Error::Malformed(_))));
        let bad = r#"{"dim":2,"basis":["A"],"brackets":[]}"#;
        assert!(matches!(LieAlgebra::from_json(bad), Err(Error::Malformed(_))));
    }

    #[test]
    fn file_round_trip_is_bit_exact() {
        let s = "{\n  \"dim\": 3,\n  \"basis\": [\n    \"Z\",\n    \"X\",\n    \"Y\"\n  ],\n  \"brackets\": [\n    {\n      \"i\": 2,\n      \"j\": 3,\n      \"coeffs\": {\n        \"1\": \"1\"\n      }\n    }\n  ]\n}\n";
        let g = LieAlgebra::from_json(s).unwrap();
        assert_eq!(g, h3());
        assert_eq!(g.to_json(), s);
    }

    #[test]
    fn h3_flag_is_identity() {
        let f = jordan_holder_flag(&h3()).unwrap();
        assert!(f.is_identity());
        // hand check: [g, span{Z}] = 0 and [g, span{Z,X}] ⊆ span{Z}
        assert!(is_ideal(&h3(), f.member(1)));
        assert!(is_ideal(&h3(), f.member(2)));
    }

    #[test]
    fn non_ideal_rejected() {
        let g = h3();
        let x = Subspace::coordinate(3, &[1]);
        assert!(matches!(quotient(&g, &x), Err(Error::NotAnIdeal(_))));
        assert!(Flag::new(g, vec![linalg::unit_vector(3, 1), linalg::unit_vector(3, 0), linalg::unit_vector(3, 2)]).is_err());
    }

    #[test]
    fn quotient_of_h3_by_center_is_abelian() {
        let g = h3();
        let q = quotient(&g, &center(&g)).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        assert!(q.algebra.is_abelian());
        assert_eq!(q.algebra.basis_names(), &names(&["X", "Y"])[..]);
        let id = quotient(&g, &Subspace::zero(3)).unwrap();
        assert_eq!(id.algebra, g);
    }

    #[test]
    fn product_center() {
        let a2 = LieAlgebra::abelian(names(&["A1", "A2"]));
        let p = direct_product(&h3(), &a2);
        assert_eq!(p.dim(), 5);
        assert_eq!(center(&p).dim(), 3);
        let a1 = LieAlgebra::abelian(names(&["A"]));
        assert!(direct_product(&a1, &a1).is_abelian());
        assert_eq!(direct_product(&h3(), &LieAlgebra::abelian(vec![])), h3());
    }

    #[test]
    fn basis_change_preserves_invariants() {
        let g = h3();
        let u = vec![
            vec![int(1), int(1), int(0)],
            vec![int(0), int(1), int(2)],
            vec![int(0), int(0), int(1)],
        ];
        let h = g.change_basis(&u, names(&["b1", "b2", "b3"])).unwrap();
        assert!(validate_algebra(&h).is_empty());
        assert_eq!(center(&h).dim(), 1);
        assert_eq!(derived_subalgebra(&h).dim(), 1);
    }
}

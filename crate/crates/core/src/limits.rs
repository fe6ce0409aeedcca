//! Limits of one-parameter families of orbits in the Grassmannian.
//!
//! A family `ξ(t)` with polynomial coordinates gives the direction planes
//! `V(t) = g(ξ(t))^⊥`, the row space of the form matrix `M(t)`. The limit
//! plane at `t₀` is read off from the Plücker vector of a polynomial basis
//! after dividing out the content of its coordinates, which is the
//! continuous extension to `t₀` even where the basis itself degenerates.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{center, is_ideal, jordan_holder_flag, quotient, Flag, LieAlgebra};
use crate::coadjoint::{is_flat_orbit, Functional};
use crate::error::{Error, Result};
use crate::format;
use crate::linalg::{self, int, Matrix, Scalar, Subspace, Vector};
use crate::poly::{determinant, rank_profile, UniPoly};
use crate::sample;
use crate::strata::{classify_point, generic_stratum, FineLabel, GenericMode};

/// `ξ(t)` with polynomial coordinates, evaluated near `t₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneParamFunctional {
    pub coords: Vec<UniPoly>,
    pub t0: Scalar,
}

impl OneParamFunctional {
    pub fn new(coords: Vec<UniPoly>, t0: Scalar) -> Self {
        OneParamFunctional { coords, t0 }
    }

    /// Parses coordinate strings such as `["t/1", "1", "0"]`.
    pub fn parse(coords: &[String], t0: Scalar) -> Result<Self> {
        let coords = coords.iter().map(|s| UniPoly::parse(s)).collect::<Result<_>>()?;
        Ok(OneParamFunctional { coords, t0 })
    }

    /// The constant family at `ξ`.
    pub fn constant(xi: &Functional) -> Self {
        OneParamFunctional {
            coords: xi.iter().map(|c| UniPoly::constant(c.clone())).collect(),
            t0: Scalar::zero(),
        }
    }

    /// `t·a + b`.
    pub fn linear(slope: &[Scalar], offset: &[Scalar]) -> Self {
        OneParamFunctional {
            coords: slope
                .iter()
                .zip(offset)
                .map(|(a, b)| UniPoly::new(vec![b.clone(), a.clone()]))
                .collect(),
            t0: Scalar::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn at(&self, t: &Scalar) -> Functional {
        Functional(self.coords.iter().map(|p| p.eval(t)).collect())
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(UniPoly::to_text).collect()
    }
}

/// A polynomial basis of `V(t)`: the independent rows of `M(t)`.
#[derive(Debug, Clone)]
pub struct DirectionFamily {
    pub basis: Vec<Vec<UniPoly>>,
    /// Rows of the form matrix that were kept.
    pub rows: Vec<usize>,
    pub ambient: usize,
}

impl DirectionFamily {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Span of the basis evaluated at `t`; may lose rank at special `t`.
    pub fn at(&self, t: &Scalar) -> Subspace {
        let rows: Matrix = self.basis.iter().map(|r| r.iter().map(|p| p.eval(t)).collect()).collect();
        Subspace::span(self.ambient, &rows)
    }
}

fn form_family(g: &LieAlgebra, xi_t: &OneParamFunctional) -> Result<Vec<Vec<UniPoly>>> {
    let m = g.dim();
    linalg::check_len(m, xi_t.dim())?;
    let mut out = vec![vec![UniPoly::zero(); m]; m];
    for (i, j, k, c) in g.constants() {
        let v = xi_t.coords[k].scale(c);
        out[i][j] = out[i][j].add(&v);
        out[j][i] = out[j][i].sub(&v);
    }
    Ok(out)
}

/// `V(t) = g(ξ(t))^⊥` over the rational functions in `t`.
pub fn direction_family(g: &LieAlgebra, xi_t: &OneParamFunctional) -> Result<DirectionFamily> {
    let m = g.dim();
    let form = form_family(g, xi_t)?;
    // independent rows of M are the independent columns of M^T
    let transposed: Vec<Vec<UniPoly>> = (0..m).map(|j| (0..m).map(|i| form[i][j].clone()).collect()).collect();
    let rows = rank_profile(transposed, m)?;
    if rows.is_empty() {
        return Err(Error::IdenticallyCharacter);
    }
    Ok(DirectionFamily {
        basis: rows.iter().map(|&i| form[i].clone()).collect(),
        rows,
        ambient: m,
    })
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// Plücker coordinates `p_I` for increasing `I`, only nonzero ones kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerVector {
    pub rank: usize,
    pub ambient: usize,
    pub coords: Vec<(Vec<usize>, Scalar)>,
}

impl PluckerVector {
    fn get_sorted(&self, idx: &[usize]) -> Scalar {
        self.coords
            .binary_search_by(|(k, _)| k.as_slice().cmp(idx))
            .map(|i| self.coords[i].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    /// `p` at an arbitrary tuple, with the sign of the sorting permutation.
    fn get(&self, idx: &[usize]) -> Scalar {
        let mut v = idx.to_vec();
        let mut sign = false;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                match v[j].cmp(&v[j + 1]) {
                    std::cmp::Ordering::Greater => {
                        v.swap(j, j + 1);
                        sign = !sign;
                    }
                    std::cmp::Ordering::Equal => return Scalar::zero(),
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        let x = self.get_sorted(&v);
        if sign {
            -x
        } else {
            x
        }
    }

    /// The plane with this (decomposable) Plücker vector.
    pub fn plane(&self) -> Result<Subspace> {
        let (pivot, p_i) = self.coords.first().ok_or(Error::DegeneratePlucker)?;
        let rows: Matrix = (0..self.rank)
            .map(|a| {
                (0..self.ambient)
                    .map(|j| {
                        let mut idx = pivot.clone();
                        idx[a] = j;
                        self.get(&idx) / p_i
                    })
                    .collect()
            })
            .collect();
        Ok(Subspace::span(self.ambient, &rows))
    }
}

/// Plücker coordinates of a plane given by a basis over the rationals.
pub fn plucker_of(s: &Subspace) -> PluckerVector {
    let r = s.dim();
    let coords = combinations(s.ambient(), r)
        .into_iter()
        .filter_map(|idx| {
            let minor: Matrix = s.basis().iter().map(|row| idx.iter().map(|&j| row[j].clone()).collect()).collect();
            let d = determinant(minor, &Scalar::zero()).expect("rational determinant");
            (!d.is_zero()).then_some((idx, d))
        })
        .collect();
    PluckerVector {
        rank: r,
        ambient: s.ambient(),
        coords,
    }
}

#[derive(Debug, Clone)]
pub struct PluckerLimit {
    pub plane: Subspace,
    /// Monic gcd of the polynomial Plücker coordinates.
    pub content: UniPoly,
    /// Multiplicity of `(t - t₀)` in the content.
    pub vanishing_order: usize,
    pub vector: PluckerVector,
}

pub fn plucker_limit(family: &DirectionFamily, t0: &Scalar) -> Result<PluckerLimit> {
    let r = family.rank();
    let m = family.ambient;
    let minors: Vec<(Vec<usize>, UniPoly)> = combinations(m, r)
        .into_iter()
        .map(|idx| {
            let minor: Vec<Vec<UniPoly>> = family
                .basis
                .iter()
                .map(|row| idx.iter().map(|&j| row[j].clone()).collect())
                .collect();
            determinant(minor, &UniPoly::zero()).map(|d| (idx, d))
        })
        .collect::<Result<_>>()?;
    let content = minors
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .fold(UniPoly::zero(), |acc, (_, p)| acc.gcd(p));
    if content.is_zero() {
        return Err(Error::DegeneratePlucker);
    }
    let linear = UniPoly::new(vec![-t0.clone(), Scalar::from_integer(1.into())]);
    let mut vanishing_order = 0;
    let mut c = content.clone();
    while let Some((q, rem)) = c.div_rem(&linear) {
        if !rem.is_zero() || c.degree() == Some(0) {
            break;
        }
        vanishing_order += 1;
        c = q;
    }
    let mut coords = Vec::new();
    for (idx, p) in minors {
        if p.is_zero() {
            continue;
        }
        let (q, rem) = p.div_rem(&content).expect("content nonzero");
        debug_assert!(rem.is_zero());
        let v = q.eval(t0);
        if !v.is_zero() {
            coords.push((idx, v));
        }
    }
    let vector = PluckerVector { rank: r, ambient: m, coords };
    Ok(PluckerLimit {
        plane: vector.plane()?,
        content,
        vanishing_order,
        vector,
    })
}

/// Limit of `V(t)` as `t → t₀` in the Grassmannian.
pub fn subspace_limit(family: &DirectionFamily, t0: &Scalar) -> Result<Subspace> {
    Ok(plucker_limit(family, t0)?.plane)
}

/// Basis of `s` normalized so that the columns in `chart` form the identity.
pub fn chart_basis(s: &Subspace, chart: &[usize]) -> Option<Matrix> {
    let a = s.basis();
    let square: Matrix = a.iter().map(|row| chart.iter().map(|&j| row[j].clone()).collect()).collect();
    let inv = linalg::inverse(&square)?;
    Some(linalg::mat_mul(&inv, a, s.ambient()))
}

/// Entrywise distance between `V(t)` and the limit, both in the limit's
/// pivot chart, at `t = t₀ + 10^{-k}`.
pub fn chart_deviations(family: &DirectionFamily, limit: &Subspace, t0: &Scalar, ks: &[u32]) -> Vec<Option<Scalar>> {
    let target = chart_basis(limit, limit.pivots()).expect("limit chart is the identity");
    ks.iter()
        .map(|&k| {
            let t = t0 + Scalar::new(1.into(), num_bigint::BigInt::from(10u32).pow(k));
            let v = family.at(&t);
            if v.dim() != limit.dim() {
                return None;
            }
            let b = chart_basis(&v, limit.pivots())?;
            let diff: Vector = b.iter().zip(&target).flat_map(|(x, y)| linalg::sub(x, y)).collect();
            Some(linalg::abs_max(&diff))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitClass {
    pub representative: Functional,
    pub orbit_dim: usize,
    pub label: FineLabel,
    /// Sample points found in this orbit.
    pub points: usize,
    /// Whether membership was decided exactly via the flat affine orbit.
    pub exact_membership: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Slice {
    /// Restriction of the slice's points to the center basis.
    #[serde(with = "format::vector_strings")]
    pub eta: Vector,
    pub points: usize,
    pub orbit_count: usize,
    pub label_count: usize,
    pub orbits: Vec<OrbitClass>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientPoint {
    pub point: Functional,
    pub quotient_point: Functional,
    pub orbit_dim: usize,
    pub quotient_orbit_dim: usize,
    pub quotient_label: FineLabel,
}

/// Limit points read in `g / I`, where `I` is spanned by the central basis
/// vectors that every limit point annihilates.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientCheck {
    pub ideal: Vec<String>,
    pub quotient_basis: Vec<String>,
    pub quotient_hash: String,
    pub points: Vec<QuotientPoint>,
    pub orbit_dims_match: bool,
    #[serde(skip)]
    pub algebra: LieAlgebra,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    #[serde(with = "format::scalar_str")]
    pub t0: Scalar,
    pub family: Vec<String>,
    pub generic_rank: usize,
    /// Generic orbit dimension of the algebra, for comparison.
    pub algebra_generic_orbit_dim: usize,
    pub maximal_rank: bool,
    #[serde(with = "format::scalar_str")]
    pub flatness_sample_t: Scalar,
    pub limit_direction: Subspace,
    pub vanishing_order: usize,
    pub limit_base: Functional,
    pub base_orbit_dim: usize,
    pub degenerated: bool,
    /// Basis vectors killed by every point of `ξ̄ + V₀`.
    pub annihilated: Vec<String>,
    pub decomposition: Vec<OrbitClass>,
    pub slices: Vec<Slice>,
    pub isolated_point_flag: bool,
    pub m_dim: usize,
    pub quotient: Option<QuotientCheck>,
    pub sample_points: usize,
    pub seed: u64,
    pub sample_resolution_only: bool,
    pub notes: Vec<String>,
}

fn generic_sample_t(family: &DirectionFamily, t0: &Scalar) -> Scalar {
    (1..=64)
        .map(|k| t0 + int(k))
        .find(|t| family.at(t).dim() == family.rank())
        .unwrap_or_else(|| t0 + int(1))
}

/// Limit set of the orbits through `ξ(t)` as `t → t₀`, decomposed at sample
/// resolution into orbits grouped by central restriction.
pub fn orbit_limit_set(
    g: &LieAlgebra,
    xi_t: &OneParamFunctional,
    sample_budget: usize,
    seed: u64,
) -> Result<LimitReport> {
    let m = g.dim();
    let t0 = xi_t.t0.clone();
    let family = direction_family(g, xi_t)?;
    let r = family.rank();
    let flag = jordan_holder_flag(g)?;

    let ts = generic_sample_t(&family, &t0);
    let generic_point = xi_t.at(&ts);
    if !is_flat_orbit(g, &generic_point, 8, seed)?.flat {
        return Err(Error::NotFlat(ts.to_string()));
    }
    let algebra_generic = generic_stratum(&flag, GenericMode::Symbolic)?.generic_orbit_dim;

    let limit = plucker_limit(&family, &t0)?;
    let v0 = limit.plane.clone();
    let base = xi_t.at(&t0);
    let base_class = classify_point(&flag, &base)?;

    let annihilated_idx: Vec<usize> = (0..m)
        .filter(|&i| base[i].is_zero() && v0.basis().iter().all(|row| row[i].is_zero()))
        .collect();

    let z = center(g);
    let central_restriction: Vec<Vector> = v0
        .basis()
        .iter()
        .map(|row| z.basis().iter().map(|zb| linalg::dot(row, zb)).collect())
        .collect();
    let m_dim = linalg::rank(&central_restriction, z.dim());

    let mut rng = sample::sub_rng(seed, 7);
    let mut points = vec![base.clone()];
    for _ in 0..sample_budget {
        let c = sample::random_vector(&mut rng, v0.dim(), sample::DEFAULT_BOUND);
        let offset = linalg::vec_mat(&c, v0.basis(), m);
        points.push(Functional(linalg::add(&base, &offset)));
    }

    let mut slices: Vec<Slice> = Vec::new();
    let mut reps: Vec<Vec<Option<crate::coadjoint::AffineOrbit>>> = Vec::new();
    for (n_pt, p) in points.iter().enumerate() {
        debug_assert!(v0.contains(&linalg::sub(p, &base)));
        let eta: Vector = z.basis().iter().map(|zb| p.pair(zb)).collect();
        let s_idx = match slices.iter().position(|s| s.eta == eta) {
            Some(i) => i,
            None => {
                slices.push(Slice {
                    eta,
                    points: 0,
                    orbit_count: 0,
                    label_count: 0,
                    orbits: Vec::new(),
                });
                reps.push(Vec::new());
                slices.len() - 1
            }
        };
        let class = classify_point(&flag, p)?;
        let slice = &mut slices[s_idx];
        slice.points += 1;
        let found = slice.orbits.iter().zip(&reps[s_idx]).position(|(o, affine)| {
            o.label == class.fine
                && match affine {
                    Some(a) => a.contains(p),
                    // non-flat representative: fall back to the label
                    None => true,
                }
        });
        match found {
            Some(i) => slice.orbits[i].points += 1,
            None => {
                let cert = is_flat_orbit(g, p, 4, seed.wrapping_add(n_pt as u64))?;
                slice.orbits.push(OrbitClass {
                    representative: p.clone(),
                    orbit_dim: class.orbit_dim,
                    label: class.fine,
                    points: 1,
                    exact_membership: cert.flat,
                });
                reps[s_idx].push(cert.orbit);
            }
        }
    }
    for s in &mut slices {
        s.orbit_count = s.orbits.len();
        let mut labels: Vec<&FineLabel> = s.orbits.iter().map(|o| &o.label).collect();
        labels.dedup();
        let mut distinct: Vec<&FineLabel> = Vec::new();
        for l in labels {
            if !distinct.contains(&l) {
                distinct.push(l);
            }
        }
        s.label_count = distinct.len();
    }
    let isolated_point_flag = !slices.iter().all(|s| s.orbit_count >= 2);
    let decomposition: Vec<OrbitClass> = slices.iter().flat_map(|s| s.orbits.iter().cloned()).collect();

    let ideal_idx: Vec<usize> = annihilated_idx
        .iter()
        .copied()
        .filter(|&i| z.contains(&linalg::unit_vector(m, i)))
        .collect();
    let quotient_check = if ideal_idx.is_empty() {
        None
    } else {
        Some(quotient_check(g, &ideal_idx, &points)?)
    };

    let degenerated = base_class.orbit_dim < r;
    let mut notes = vec!["orbit decomposition and isolated-point verdict hold at sample resolution only".to_string()];
    if !degenerated {
        notes.push("family did not degenerate: the base point has the generic orbit dimension".into());
    }
    Ok(LimitReport {
        t0,
        family: xi_t.coord_strings(),
        generic_rank: r,
        algebra_generic_orbit_dim: algebra_generic,
        maximal_rank: r == algebra_generic,
        flatness_sample_t: ts,
        limit_direction: v0,
        vanishing_order: limit.vanishing_order,
        base_orbit_dim: base_class.orbit_dim,
        limit_base: base,
        degenerated,
        annihilated: annihilated_idx.iter().map(|&i| g.basis_names()[i].clone()).collect(),
        decomposition,
        slices,
        isolated_point_flag,
        m_dim,
        quotient: quotient_check,
        sample_points: points.len(),
        seed,
        sample_resolution_only: true,
        notes,
    })
}

fn quotient_check(g: &LieAlgebra, ideal_idx: &[usize], points: &[Functional]) -> Result<QuotientCheck> {
    let m = g.dim();
    let ideal = Subspace::coordinate(m, ideal_idx);
    debug_assert!(is_ideal(g, &ideal));
    let q = quotient(g, &ideal)?;
    let qflag: Flag = jordan_holder_flag(&q.algebra)?;
    let mut out = Vec::new();
    for p in points {
        // a functional killing I descends to g / I
        let qp = Functional(q.complement.iter().map(|&i| p[i].clone()).collect());
        let full = crate::coadjoint::isotropy(g, p)?;
        let qc = classify_point(&qflag, &qp)?;
        out.push(QuotientPoint {
            point: p.clone(),
            quotient_point: qp,
            orbit_dim: full.orbit_dim,
            quotient_orbit_dim: qc.orbit_dim,
            quotient_label: qc.fine,
        });
    }
    Ok(QuotientCheck {
        ideal: ideal_idx.iter().map(|&i| g.basis_names()[i].clone()).collect(),
        quotient_basis: q.algebra.basis_names().to_vec(),
        quotient_hash: q.algebra.content_hash(),
        orbit_dims_match: out.iter().all(|p| p.orbit_dim == p.quotient_orbit_dim),
        points: out,
        algebra: q.algebra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, FamilySpec};

    fn functional(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn plucker_round_trip() {
        let s = Subspace::span(4, &[functional(&[1, 2, 0, 3]), functional(&[0, 1, 1, -1])]);
        assert_eq!(plucker_of(&s).plane().unwrap(), s);
    }

    #[test]
    fn h3_scaled_center_family() {
        let g = generate(&FamilySpec::Heisenberg(1)).unwrap();
        let xi = OneParamFunctional::linear(&functional(&[1, 0, 0]), &functional(&[0, 0, 0]));
        let fam = direction_family(&g, &xi).unwrap();
        assert_eq!(fam.rank(), 2);
        let lim = plucker_limit(&fam, &int(0)).unwrap();
        assert_eq!(lim.plane, Subspace::coordinate(3, &[1, 2]));
        assert_eq!(lim.vanishing_order, 2);
        let at_zero = fam.at(&int(0));
        assert_eq!(at_zero.dim(), 0, "row-wise evaluation drops rank at t = 0");
    }

    #[test]
    fn character_family_is_rejected() {
        let g = generate(&FamilySpec::Heisenberg(1)).unwrap();
        let xi = OneParamFunctional::linear(&functional(&[0, 1, 0]), &functional(&[0, 0, 1]));
        assert!(matches!(direction_family(&g, &xi), Err(Error::IdenticallyCharacter)));
    }
}

//! Coadjoint machinery: the skew form `B_ξ(X, Y) = ⟨ξ, [X, Y]⟩`, isotropy
//! algebras, jump indices relative to a flag, the coadjoint action and
//! flat-orbit detection.

use std::ops::Deref;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{ideal_witness, Flag, LieAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Scalar, Subspace, Vector};
use crate::sample;
use crate::strata::{FineLabel, IndexSet};

/// A linear functional in dual-basis coordinates: `⟨ξ, X_j⟩ = coords[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional(#[serde(with = "crate::format::vector_strings")] pub Vector);

impl Functional {
    pub fn zero(dim: usize) -> Self {
        Functional(linalg::zero_vector(dim))
    }

    /// The dual basis vector `X_i*` (0-based).
    pub fn dual_basis(dim: usize, i: usize) -> Self {
        Functional(linalg::unit_vector(dim, i))
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn pair(&self, x: &[Scalar]) -> Scalar {
        linalg::dot(&self.0, x)
    }

    pub fn scaled(&self, t: &Scalar) -> Self {
        Functional(linalg::scale(&self.0, t))
    }
}

impl Deref for Functional {
    type Target = [Scalar];
    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl From<Vector> for Functional {
    fn from(v: Vector) -> Self {
        Functional(v)
    }
}

/// `M_ij = ⟨ξ, [X_i, X_j]⟩`.
pub fn bform_matrix(g: &LieAlgebra, xi: &Functional) -> Result<Matrix> {
    let m = g.dim();
    linalg::check_len(m, xi.len())?;
    let mut out = vec![linalg::zero_vector(m); m];
    for (i, j, k, c) in g.constants() {
        if xi[k].is_zero() {
            continue;
        }
        let v = &xi[k] * c;
        out[i][j] += &v;
        out[j][i] -= &v;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Isotropy {
    pub subspace: Subspace,
    pub orbit_dim: usize,
}

/// `g(ξ)`, the radical of the form, and the orbit dimension `m - dim g(ξ)`.
pub fn isotropy(g: &LieAlgebra, xi: &Functional) -> Result<Isotropy> {
    let m = g.dim();
    let form = bform_matrix(g, xi)?;
    let subspace = Subspace::span(m, &linalg::kernel(&form, m));
    Ok(Isotropy {
        orbit_dim: m - subspace.dim(),
        subspace,
    })
}

/// `g_k(ξ) = {X ∈ g_k : ⟨ξ, [X, Y]⟩ = 0 for all Y ∈ g_k}`, in the stored basis.
pub fn partial_isotropy(flag: &Flag, form: &Matrix, k: usize) -> Subspace {
    let m = flag.dim();
    let rows = &flag.vectors()[..k];
    // restricted form in flag coordinates: B_k M B_k^T
    let bm = linalg::mat_mul(&rows.to_vec(), form, m);
    let restricted: Matrix = bm.iter().map(|r| rows.iter().map(|b| linalg::dot(r, b)).collect()).collect();
    let coords = linalg::kernel(&restricted, k);
    let vs: Vec<Vector> = coords.iter().map(|c| linalg::vec_mat(c, &rows.to_vec(), m)).collect();
    Subspace::span(m, &vs)
}

/// `{j ≤ k : g_j ⊄ h + g_{j-1}}` for a subspace `h`.
fn jumps_against(flag: &Flag, h: &Subspace, k: usize) -> IndexSet {
    let members: Vec<usize> = (1..=k)
        .filter(|&j| !flag.member(j).is_subspace_of(&h.sum(flag.member(j - 1))))
        .collect();
    IndexSet::new(members)
}

/// Coarse jump set `J_ξ = {j : g_j ⊄ g(ξ) + g_{j-1}}`.
pub fn jump_set(flag: &Flag, xi: &Functional) -> Result<IndexSet> {
    let iso = isotropy(flag.algebra(), xi)?;
    Ok(jumps_against(flag, &iso.subspace, flag.dim()))
}

/// Fine tuple `(J_ξ^1, ..., J_ξ^m)` with `J_ξ^k = {j ≤ k : g_j ⊄ g_k(ξ) + g_{j-1}}`.
pub fn fine_jump_tuple(flag: &Flag, xi: &Functional) -> Result<FineLabel> {
    Ok(jump_data(flag, xi)?.fine)
}

/// Isotropy, partial isotropies, coarse and fine jump sets at `ξ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JumpData {
    pub isotropy: Subspace,
    pub partial_isotropies: Vec<Subspace>,
    pub coarse: IndexSet,
    pub fine: FineLabel,
    pub orbit_dim: usize,
}

pub fn jump_data(flag: &Flag, xi: &Functional) -> Result<JumpData> {
    let g = flag.algebra();
    let m = g.dim();
    let form = bform_matrix(g, xi)?;
    let isotropy = Subspace::span(m, &linalg::kernel(&form, m));
    let coarse = jumps_against(flag, &isotropy, m);
    let partial_isotropies: Vec<Subspace> = (1..=m).map(|k| partial_isotropy(flag, &form, k)).collect();
    let fine = FineLabel::new(
        partial_isotropies
            .iter()
            .enumerate()
            .map(|(k, h)| jumps_against(flag, h, k + 1))
            .collect(),
    );
    Ok(JumpData {
        orbit_dim: m - isotropy.dim(),
        isotropy,
        partial_isotropies,
        coarse,
        fine,
    })
}

/// `Ad*(exp X) ξ = ξ ∘ e^{-ad X}`; the series is finite because `ad X` is
/// nilpotent.
pub fn coadjoint_move(g: &LieAlgebra, xi: &Functional, x: &[Scalar]) -> Result<Functional> {
    let m = g.dim();
    linalg::check_len(m, xi.len())?;
    linalg::check_len(m, x.len())?;
    let minus_ad: Matrix = g
        .ad_matrix(x)
        .into_iter()
        .map(|r| r.into_iter().map(|v| -v).collect())
        .collect();
    let mut result = xi.0.clone();
    let mut term = xi.0.clone();
    for p in 1..=m + 1 {
        term = linalg::vec_mat(&term, &minus_ad, m);
        if linalg::is_zero_vector(&term) {
            return Ok(Functional(result));
        }
        term = linalg::scale(&term, &linalg::int(p as i64).recip());
        result = linalg::add(&result, &term);
    }
    Err(Error::NotNilpotent { dim: m })
}

/// `ξ + g(ξ)^⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineOrbit {
    pub base: Functional,
    pub direction: Subspace,
}

impl AffineOrbit {
    pub fn contains(&self, eta: &Functional) -> bool {
        self.direction.contains(&linalg::sub(eta, &self.base))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatnessCertificate {
    pub flat: bool,
    pub isotropy_is_ideal: bool,
    /// A bracket leaving `g(ξ)` when it is not an ideal.
    pub ideal_witness: Option<String>,
    pub samples_checked: usize,
    pub samples_in_affine_set: usize,
    /// First group element whose image leaves `ξ + g(ξ)^⊥`.
    #[serde(with = "opt_vector")]
    pub escaping_sample: Option<Vector>,
    pub orbit_dim: usize,
    pub direction_dim: usize,
    pub orbit: Option<AffineOrbit>,
}

mod opt_vector {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vector>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|v| crate::format::vector_strings(v)).serialize(s)
    }
}

/// Extra draws allowed when certifying a non-flat orbit by an escaping sample.
const MAX_ESCAPE_DRAWS: usize = 256;

/// Flatness of the orbit through `ξ`: `g(ξ)` is an ideal, cross-checked by
/// `samples` seeded coadjoint images. A disagreement between the two tests
/// is reported as an internal error.
pub fn is_flat_orbit(g: &LieAlgebra, xi: &Functional, samples: usize, seed: u64) -> Result<FlatnessCertificate> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let m = g.dim();
    let iso = isotropy(g, xi)?;
    let witness = ideal_witness(g, &iso.subspace);
    let ideal = witness.is_none();
    let orbit = AffineOrbit {
        base: xi.clone(),
        direction: iso.subspace.annihilator(),
    };
    if orbit.direction.dim() != iso.orbit_dim {
        return Err(Error::Internal("dim g(ξ)^⊥ differs from the orbit dimension".into()));
    }
    let mut rng = sample::rng(seed);
    let mut checked = 0;
    let mut inside = 0;
    let mut escaping = None;
    let limit = if ideal { samples } else { samples.max(MAX_ESCAPE_DRAWS) };
    while checked < limit && (checked < samples || escaping.is_none()) {
        let x = sample::random_vector(&mut rng, m, sample::DEFAULT_BOUND);
        let image = coadjoint_move(g, xi, &x)?;
        checked += 1;
        if orbit.contains(&image) {
            inside += 1;
        } else if escaping.is_none() {
            escaping = Some(x);
        }
    }
    if ideal && escaping.is_some() {
        return Err(Error::Internal(
            "isotropy is an ideal but a coadjoint image left ξ + g(ξ)^⊥".into(),
        ));
    }
    if !ideal && escaping.is_none() {
        return Err(Error::Internal(format!(
            "isotropy is not an ideal but all {checked} coadjoint images stayed in ξ + g(ξ)^⊥"
        )));
    }
    Ok(FlatnessCertificate {
        flat: ideal,
        isotropy_is_ideal: ideal,
        ideal_witness: witness,
        samples_checked: checked,
        samples_in_affine_set: inside,
        escaping_sample: escaping,
        orbit_dim: iso.orbit_dim,
        direction_dim: orbit.direction.dim(),
        orbit: ideal.then_some(orbit),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{jordan_holder_flag, LieAlgebra};
    use crate::families::{generate, FamilySpec};
    use crate::linalg::int;

    fn h3() -> LieAlgebra {
        generate(&FamilySpec::Heisenberg(1)).unwrap()
    }

    fn f(v: &[i64]) -> Functional {
        Functional(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn h3_form_at_z_star() {
        let m = bform_matrix(&h3(), &f(&[1, 0, 0])).unwrap();
        let expected = vec![
            vec![int(0), int(0), int(0)],
            vec![int(0), int(0), int(1)],
            vec![int(0), int(-1), int(0)],
        ];
        assert_eq!(m, expected);
        let zero = bform_matrix(&h3(), &f(&[0, 0, 0])).unwrap();
        assert!(zero.iter().flatten().all(Zero::is_zero));
        assert!(matches!(bform_matrix(&h3(), &f(&[1, 0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn h3_jump_data() {
        let flag = jordan_holder_flag(&h3()).unwrap();
        let jd = jump_data(&flag, &f(&[1, 0, 0])).unwrap();
        assert_eq!(jd.coarse, IndexSet::new(vec![2, 3]));
        assert_eq!(
            jd.fine,
            FineLabel::new(vec![IndexSet::empty(), IndexSet::empty(), IndexSet::new(vec![2, 3])])
        );
        assert_eq!(jd.orbit_dim, 2);
        let jd0 = jump_data(&flag, &f(&[0, 0, 0])).unwrap();
        assert!(jd0.coarse.is_empty());
        assert!(jd0.fine.components().iter().all(IndexSet::is_empty));
        assert_eq!(jd0.isotropy, Subspace::full(3));
    }

    #[test]
    fn h3_move_along_x() {
        // ξ = Z*, X = X: ξ ∘ (1 - ad X)(Y) = -⟨ξ, Z⟩
        let g = h3();
        let moved = coadjoint_move(&g, &f(&[1, 0, 0]), &[int(0), int(1), int(0)]).unwrap();
        assert_eq!(moved, f(&[1, 0, -1]));
        let same = coadjoint_move(&g, &f(&[2, 3, 5]), &[int(0), int(0), int(0)]).unwrap();
        assert_eq!(same, f(&[2, 3, 5]));
    }

    #[test]
    fn threadlike_four_is_not_flat() {
        let g = generate(&FamilySpec::Threadlike(4)).unwrap();
        let xi = f(&[1, 2, 3, 4]);
        let cert = is_flat_orbit(&g, &xi, 8, 1).unwrap();
        assert!(!cert.flat);
        assert!(cert.ideal_witness.is_some());
        assert!(cert.escaping_sample.is_some());
    }

    #[test]
    fn abelian_orbits_are_points() {
        let g = generate(&FamilySpec::Abelian(3)).unwrap();
        let cert = is_flat_orbit(&g, &f(&[1, -2, 3]), 4, 0).unwrap();
        assert!(cert.flat);
        assert_eq!(cert.direction_dim, 0);
        assert!(matches!(is_flat_orbit(&g, &f(&[0, 0, 0]), 0, 0), Err(Error::ZeroSamples)));
    }
}

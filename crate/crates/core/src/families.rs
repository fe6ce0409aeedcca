//! Example families (Heisenberg, abelian, `h_{m,n}`, threadlike), the
//! property verifier for `h_{m,n}` and recognition of `h_{2d+1} × a_k`.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{
    center, derived_subalgebra, direct_product, lower_central_series, quotient,
    validate_algebra, LieAlgebra,
};
use crate::coadjoint::{bform_matrix, is_flat_orbit, isotropy, Functional};
use crate::error::{Error, Result};
use crate::linalg::{self, int, Subspace};
use crate::sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    Heisenberg(usize),
    Abelian(usize),
    Hmn(usize, usize),
    Threadlike(usize),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Heisenberg(d) => write!(f, "heisenberg({d})"),
            FamilySpec::Abelian(k) => write!(f, "abelian({k})"),
            FamilySpec::Hmn(m, n) => write!(f, "hmn({m},{n})"),
            FamilySpec::Threadlike(n) => write!(f, "threadlike({n})"),
        }
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FamilySpec {
    /// Parses `["hmn", "2", "2"]`-style argument lists.
    pub fn parse(args: &[String]) -> Result<FamilySpec> {
        let bad = || Error::InvalidFamily(format!("cannot parse family {:?}", args.join(" ")));
        let nums: Vec<usize> = args
            .iter()
            .skip(1)
            .map(|a| a.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let spec = match (args.first().map(String::as_str), nums.as_slice()) {
            (Some("heisenberg"), [d]) => FamilySpec::Heisenberg(*d),
            (Some("abelian"), [k]) => FamilySpec::Abelian(*k),
            (Some("hmn"), [m, n]) => FamilySpec::Hmn(*m, *n),
            (Some("threadlike"), [n]) => FamilySpec::Threadlike(*n),
            _ => return Err(bad()),
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        let err = |msg: &str| Err(Error::InvalidFamily(format!("{self}: {msg}")));
        match *self {
            FamilySpec::Heisenberg(0) => err("needs d >= 1"),
            FamilySpec::Hmn(m, n) if m == 0 || n == 0 => err("needs m, n >= 1"),
            FamilySpec::Threadlike(n) if n < 3 => err("needs n >= 3"),
            _ => Ok(()),
        }
    }
}

fn labels(prefix: &str, range: impl Iterator<Item = usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

pub fn generate(spec: &FamilySpec) -> Result<LieAlgebra> {
    spec.check()?;
    let one = || int(1);
    match *spec {
        FamilySpec::Heisenberg(d) => {
            // basis Z, X_1..X_d, Y_1..Y_d with [X_i, Y_i] = Z
            let mut names = vec!["Z".to_string()];
            if d == 1 {
                names.extend(["X".to_string(), "Y".to_string()]);
            } else {
                names.extend(labels("X", 1..=d));
                names.extend(labels("Y", 1..=d));
            }
            LieAlgebra::new(names, (1..=d).map(|i| ((i, d + i), 0, one())))
        }
        FamilySpec::Abelian(k) => Ok(LieAlgebra::abelian(labels("A", 1..=k))),
        FamilySpec::Hmn(m, n) => {
            // basis X_1..X_m, Y_0..Y_n; X_i at i-1, Y_j at m+j
            let mut names = labels("X", 1..=m);
            names.extend(labels("Y", 0..=n));
            let constants = (1..=m)
                .flat_map(|i| (0..=n).filter(move |j| i + j <= n).map(move |j| (i, j)))
                .map(|(i, j)| ((i - 1, m + j), m + i + j, one()))
                .collect::<Vec<_>>();
            LieAlgebra::new(names, constants)
        }
        FamilySpec::Threadlike(n) => {
            LieAlgebra::new(labels("X", 1..=n), (2..n).map(|j| ((0, j - 1), j, one())))
        }
    }
}

/// `h_{2d+1} × a_k`.
pub fn heisenberg_times_abelian(d: usize, k: usize) -> Result<LieAlgebra> {
    Ok(direct_product(
        &generate(&FamilySpec::Heisenberg(d))?,
        &generate(&FamilySpec::Abelian(k))?,
    ))
}

/// Index of `X_i` (1-based `i`) in the stored basis of `h_{m,n}`.
pub fn hmn_x(_m: usize, i: usize) -> usize {
    i - 1
}

/// Index of `Y_j` in the stored basis of `h_{m,n}`.
pub fn hmn_y(m: usize, j: usize) -> usize {
    m + j
}

/// Center of `h_{m,n}` as stated: `Y_n`, plus `X_{n+1}, ..., X_m` when `m > n`.
pub fn hmn_expected_center(m: usize, n: usize) -> Subspace {
    let mut idx = vec![hmn_y(m, n)];
    idx.extend((n + 1..=m).map(|i| hmn_x(m, i)));
    Subspace::coordinate(m + n + 1, &idx)
}

/// Isotropy at `ξ` with `⟨ξ,Y_k⟩ ≠ 0` and `⟨ξ,Y_j⟩ = 0` for `j > k`:
/// `span{Y_k, ..., Y_n} ∪ {X_{k+1}, ..., X_m}`.
pub fn hmn_expected_partial_isotropy(m: usize, n: usize, k: usize) -> Subspace {
    let mut idx: Vec<usize> = (k..=n).map(|j| hmn_y(m, j)).collect();
    idx.extend((k + 1..=m).map(|i| hmn_x(m, i)));
    Subspace::coordinate(m + n + 1, &idx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub what: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

impl Check {
    fn new(what: impl Into<String>, expected: impl fmt::Display, observed: impl fmt::Display) -> Check {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        Check {
            what: what.into(),
            passed: expected == observed,
            expected,
            observed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ItemReport {
    pub item: String,
    pub status: ItemStatus,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ItemReport {
    fn from_checks(item: &str, checks: Vec<Check>, notes: Vec<String>) -> ItemReport {
        let status = if checks.iter().all(|c| c.passed) {
            ItemStatus::Pass
        } else {
            ItemStatus::Fail
        };
        ItemReport {
            item: item.into(),
            status,
            checks,
            notes,
        }
    }

    fn not_applicable(item: &str, why: &str) -> ItemReport {
        ItemReport {
            item: item.into(),
            status: ItemStatus::NotApplicable,
            checks: Vec::new(),
            notes: vec![why.into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HmnReport {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub valid: bool,
    pub items: Vec<ItemReport>,
    /// Whether the literal "n-step nilpotent" statement matched the computed step.
    pub literal_step_claim_holds: bool,
    pub all_passed: bool,
}

impl HmnReport {
    pub fn item(&self, name: &str) -> Option<&ItemReport> {
        self.items.iter().find(|i| i.item == name)
    }
}

/// Random flatness probes used by item (v).
pub const FLATNESS_SAMPLES: usize = 20;

fn dims_text(s: &Subspace, names: &[String]) -> String {
    // subspaces here are coordinate subspaces, so list the pivot names
    let coordinate = s.basis().iter().all(|r| r.iter().filter(|x| !x.is_zero()).count() == 1);
    if coordinate {
        let mut ns: Vec<&str> = s.pivots().iter().map(|&p| names[p].as_str()).collect();
        ns.sort_unstable();
        format!("span{{{}}}", ns.join(","))
    } else {
        format!("{s:?}")
    }
}

/// Probe with the vanishing pattern `⟨ξ,Y_j⟩ = 0` for `j > k` and
/// `⟨ξ,Y_k⟩ ≠ 0`, other coordinates random.
fn perturbed_probe(m: usize, n: usize, k: usize, rng: &mut sample::SampleRng) -> Functional {
    let dim = m + n + 1;
    let mut v = sample::random_vector(rng, dim, sample::DEFAULT_BOUND);
    for j in k + 1..=n {
        v[hmn_y(m, j)] = int(0);
    }
    v[hmn_y(m, k)] = sample::random_nonzero_scalar(rng, sample::DEFAULT_BOUND);
    Functional(v)
}

/// Checks the listed properties of `h_{m,n}`: (i) nilpotency step and
/// center, (ii) `h_{m,n}/RY_n ≅ h_{m,n-1}`, (iii) generic isotropy is the
/// center, (iv) isotropy on the partial strata, (v) flatness of orbits.
pub fn verify_hmn(m: usize, n: usize, seed: u64) -> Result<HmnReport> {
    let g = generate(&FamilySpec::Hmn(m, n))?;
    let names = g.basis_names().to_vec();
    let dim = g.dim();
    let valid = validate_algebra(&g).is_empty();
    let mut items = Vec::new();

    let series = lower_central_series(&g)?;
    let z = center(&g);
    let literal = series.step == n;
    let mut notes = vec![format!(
        "stated as {n}-step nilpotent; the chain [X_1,[X_1,...,[X_1,Y_0]]] = Y_{n} has {} factors, so the computed step is {}",
        n + 1,
        series.step
    )];
    if !literal {
        notes.push("literal step claim does not hold; checked against n + 1".into());
    }
    items.push(ItemReport::from_checks(
        "i",
        vec![
            Check::new("Jacobi identity and nilpotency", true, valid),
            Check::new("nilpotency step", n + 1, series.step),
            Check::new("center", dims_text(&hmn_expected_center(m, n), &names), dims_text(&z, &names)),
        ],
        notes,
    ));

    if n >= 2 {
        let y_n = Subspace::coordinate(dim, &[hmn_y(m, n)]);
        let q = quotient(&g, &y_n)?;
        let target = generate(&FamilySpec::Hmn(m, n - 1))?;
        items.push(ItemReport::from_checks(
            "ii",
            vec![
                Check::new("quotient basis", target.basis_names().join(","), q.algebra.basis_names().join(",")),
                Check::new("quotient structure constants", target.to_json(), q.algebra.to_json()),
            ],
            vec![],
        ));
    } else {
        items.push(ItemReport::not_applicable("ii", "requires n >= 2"));
    }

    if m >= n {
        let mut rng = sample::sub_rng(seed, 3);
        let mut checks = Vec::new();
        let probes = [Functional::dual_basis(dim, hmn_y(m, n)), perturbed_probe(m, n, n, &mut rng)];
        for (p_idx, xi) in probes.iter().enumerate() {
            let iso = isotropy(&g, xi)?;
            checks.push(Check::new(
                format!("isotropy at probe {}", p_idx + 1),
                dims_text(&z, &names),
                dims_text(&iso.subspace, &names),
            ));
            checks.push(Check::new(format!("orbit dimension at probe {}", p_idx + 1), 2 * n, iso.orbit_dim));
        }
        items.push(ItemReport::from_checks("iii", checks, vec![]));
    } else {
        items.push(ItemReport::not_applicable("iii", "requires m >= n"));
    }

    if m >= n && n >= 2 {
        let mut rng = sample::sub_rng(seed, 4);
        let mut checks = Vec::new();
        for k in 1..n {
            let expected = hmn_expected_partial_isotropy(m, n, k);
            let probes = [Functional::dual_basis(dim, hmn_y(m, k)), perturbed_probe(m, n, k, &mut rng)];
            for (p_idx, xi) in probes.iter().enumerate() {
                let iso = isotropy(&g, xi)?;
                checks.push(Check::new(
                    format!("isotropy at k = {k}, probe {}", p_idx + 1),
                    dims_text(&expected, &names),
                    dims_text(&iso.subspace, &names),
                ));
            }
        }
        items.push(ItemReport::from_checks("iv", checks, vec![]));
    } else {
        items.push(ItemReport::not_applicable("iv", "requires m >= n > k >= 1"));
    }

    let mut rng = sample::sub_rng(seed, 5);
    let mut flat = 0;
    for s in 0..FLATNESS_SAMPLES {
        let xi = Functional(sample::random_vector(&mut rng, dim, sample::DEFAULT_BOUND));
        if is_flat_orbit(&g, &xi, 8, seed.wrapping_add(s as u64))?.flat {
            flat += 1;
        }
    }
    items.push(ItemReport::from_checks(
        "v",
        vec![Check::new(
            format!("flat orbits among {FLATNESS_SAMPLES} random functionals"),
            FLATNESS_SAMPLES,
            flat,
        )],
        vec![],
    ));

    let all_passed = items.iter().all(|i| i.status != ItemStatus::Fail);
    Ok(HmnReport {
        m,
        n,
        seed,
        valid,
        items,
        literal_step_claim_holds: literal,
        all_passed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recognition {
    pub d: usize,
    pub k: usize,
    pub note: Option<String>,
}

/// `Some((d, k))` iff `[g,g]` is one-dimensional and central, in which case
/// `g ≅ h_{2d+1} × a_k` with `2d` the rank of the form at any `ξ` with
/// `⟨ξ, z⟩ = 1`.
pub fn recognize_heisenberg_times_abelian(g: &LieAlgebra) -> Result<Option<Recognition>> {
    let m = g.dim();
    let derived = derived_subalgebra(g);
    if derived.dim() != 1 || !derived.is_subspace_of(&center(g)) {
        return Ok(None);
    }
    let z = &derived.basis()[0];
    let p = z.iter().position(|x| !x.is_zero()).expect("nonzero generator");
    let mut xi = linalg::zero_vector(m);
    xi[p] = z[p].recip();
    let xi = Functional(xi);
    debug_assert!(xi.pair(z) == int(1));
    let form = bform_matrix(g, &xi)?;
    let rank = linalg::rank(&form, m);
    let kernel = Subspace::span(m, &linalg::kernel(&form, m));
    if !rank.is_multiple_of(2) || rank == 0 || !kernel.contains(z) {
        return Ok(None);
    }
    let (d, k) = (rank / 2, kernel.dim() - 1);
    let note = (k == 0).then(|| "Heisenberg recognition hypotheses met: ind = 1".to_string());
    Ok(Some(Recognition { d, k, note }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hmn22_brackets() {
        let g = generate(&FamilySpec::Hmn(2, 2)).unwrap();
        assert_eq!(g.dim(), 5);
        let names = g.basis_names();
        let listed: Vec<String> = g
            .constants()
            .map(|(i, j, k, c)| format!("[{},{}]={}{}", names[i], names[j], c, names[k]))
            .collect();
        assert_eq!(listed, vec!["[X1,Y0]=1Y1", "[X1,Y1]=1Y2", "[X2,Y0]=1Y2"]);
    }

    #[test]
    fn small_family_members() {
        assert!(generate(&FamilySpec::Abelian(3)).unwrap().is_abelian());
        let h5 = generate(&FamilySpec::Heisenberg(2)).unwrap();
        assert_eq!(h5.dim(), 5);
        assert_eq!(center(&h5).dim(), 1);
        assert!(generate(&FamilySpec::Threadlike(2)).is_err());
        assert!(generate(&FamilySpec::Hmn(0, 1)).is_err());
        assert!(generate(&FamilySpec::Heisenberg(0)).is_err());
    }

    #[test]
    fn spec_parsing() {
        let args = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
        assert_eq!(FamilySpec::parse(&args("hmn 3 2")).unwrap(), FamilySpec::Hmn(3, 2));
        assert!(FamilySpec::parse(&args("hmn 3")).is_err());
        assert!(FamilySpec::parse(&args("threadlike 2")).is_err());
    }

    #[test]
    fn hmn11_report_records_step_claim() {
        let r = verify_hmn(1, 1, 0).unwrap();
        assert!(!r.literal_step_claim_holds);
        assert_eq!(r.item("i").unwrap().status, ItemStatus::Pass);
        assert_eq!(r.item("ii").unwrap().status, ItemStatus::NotApplicable);
    }

    #[test]
    fn recognition_basics() {
        let r = recognize_heisenberg_times_abelian(&generate(&FamilySpec::Heisenberg(3)).unwrap()).unwrap();
        assert_eq!(r.as_ref().map(|r| (r.d, r.k)), Some((3, 0)));
        assert!(r.unwrap().note.is_some());
        assert!(recognize_heisenberg_times_abelian(&generate(&FamilySpec::Abelian(4)).unwrap())
            .unwrap()
            .is_none());
    }
}

//! Index-set labels and their ordering, point classification, the generic
//! stratum and group index, sampled stratum discovery and the layering of
//! the dual into composition-series layers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{derived_subalgebra, Flag};
use crate::coadjoint::{jump_data, Functional};
use crate::error::{Error, Result};
use crate::format::vector_strings;
use crate::linalg::{self, Scalar};
use crate::poly::{rank_profile, MPoly};
use crate::sample;

/// A subset of `{1, ..., m}`, ordered by `e1 ≺ e2 ⟺ min(e1∖e2) < min(e2∖e1)`
/// with `min ∅ = ∞`. The empty set is the maximum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    fn min_not_in(&self, other: &IndexSet) -> usize {
        self.0.iter().copied().find(|&i| !other.contains(i)).unwrap_or(usize::MAX)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

pub fn compare_index_sets(a: &IndexSet, b: &IndexSet) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    a.min_not_in(b).cmp(&b.min_not_in(a))
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_index_sets(self, other)
    }
}

/// The tuple `(J^1, ..., J^m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FineLabel(Vec<IndexSet>);

impl FineLabel {
    pub fn new(components: Vec<IndexSet>) -> Self {
        FineLabel(components)
    }

    pub fn components(&self) -> &[IndexSet] {
        &self.0
    }

    pub fn last(&self) -> Option<&IndexSet> {
        self.0.last()
    }

    pub fn is_character(&self) -> bool {
        self.0.iter().all(IndexSet::is_empty)
    }
}

impl fmt::Display for FineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// How tuples of index sets are compared: component by component starting
/// from `k = 1` or from `k = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderVariant {
    #[default]
    LexAscending,
    LexDescending,
}

impl OrderVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderVariant::LexAscending => "lex_ascending",
            OrderVariant::LexDescending => "lex_descending",
        }
    }
}

impl fmt::Display for OrderVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "lex_ascending" => Ok(OrderVariant::LexAscending),
            "lex_descending" => Ok(OrderVariant::LexDescending),
            _ => Err(Error::Parse(format!("unknown order variant {s:?}"))),
        }
    }
}

pub fn compare_fine_labels(a: &FineLabel, b: &FineLabel, variant: OrderVariant) -> Ordering {
    let pairs = a.0.iter().zip(&b.0);
    let first_diff = match variant {
        OrderVariant::LexAscending => pairs.map(|(x, y)| compare_index_sets(x, y)).find(|o| o.is_ne()),
        OrderVariant::LexDescending => pairs.rev().map(|(x, y)| compare_index_sets(x, y)).find(|o| o.is_ne()),
    };
    first_diff.unwrap_or_else(|| a.0.len().cmp(&b.0.len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub coarse: IndexSet,
    pub fine: FineLabel,
    pub orbit_dim: usize,
}

pub fn classify_point(flag: &Flag, xi: &Functional) -> Result<Classification> {
    let jd = jump_data(flag, xi)?;
    Ok(Classification {
        coarse: jd.coarse,
        fine: jd.fine,
        orbit_dim: jd.orbit_dim,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenericMode {
    /// Coordinates of `ξ` treated as indeterminates.
    Symbolic,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Certification {
    Symbolic,
    Sampled {
        samples: usize,
        seed: u64,
        /// Samples whose coarse label equals the generic one.
        agreeing: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexResult {
    pub ind: usize,
    pub generic_label: IndexSet,
    pub generic_fine: FineLabel,
    pub generic_orbit_dim: usize,
    pub certification: Certification,
}

/// Generic coarse and fine labels, and `ind = m - |e₁|`.
pub fn generic_stratum(flag: &Flag, mode: GenericMode) -> Result<IndexResult> {
    let m = flag.dim();
    match mode {
        GenericMode::Symbolic => {
            let f = symbolic_flag_form(flag);
            let coarse = profile_label(rank_profile(f.clone(), m)?);
            let fine = (1..=m)
                .map(|k| {
                    let sub: Vec<Vec<MPoly>> = f[..k].iter().map(|r| r[..k].to_vec()).collect();
                    rank_profile(sub, k).map(profile_label)
                })
                .collect::<Result<Vec<_>>>()?;
            let fine = FineLabel::new(fine);
            if fine.last() != Some(&coarse) && m > 0 {
                return Err(Error::Internal("generic fine label does not end in the coarse label".into()));
            }
            Ok(IndexResult {
                ind: m - coarse.len(),
                generic_orbit_dim: coarse.len(),
                generic_label: coarse,
                generic_fine: fine,
                certification: Certification::Symbolic,
            })
        }
        GenericMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::ZeroSamples);
            }
            let mut rng = sample::rng(seed);
            let mut seen: Vec<Classification> = Vec::with_capacity(samples);
            for _ in 0..samples {
                let xi = Functional(sample::random_vector(&mut rng, m, sample::DEFAULT_BOUND));
                seen.push(classify_point(flag, &xi)?);
            }
            let coarse = seen.iter().map(|c| c.coarse.clone()).min().expect("samples > 0");
            let agreeing = seen.iter().filter(|c| c.coarse == coarse).count();
            let fine = most_common(seen.iter().filter(|c| c.coarse == coarse).map(|c| &c.fine));
            Ok(IndexResult {
                ind: m - coarse.len(),
                generic_orbit_dim: coarse.len(),
                generic_label: coarse,
                generic_fine: fine,
                certification: Certification::Sampled { samples, seed, agreeing },
            })
        }
    }
}

fn most_common<'a>(labels: impl Iterator<Item = &'a FineLabel>) -> FineLabel {
    let mut counts: Vec<(&FineLabel, usize)> = Vec::new();
    for l in labels {
        match counts.iter_mut().find(|(x, _)| *x == l) {
            Some((_, n)) => *n += 1,
            None => counts.push((l, 1)),
        }
    }
    // first seen wins ties
    let best = counts.iter().map(|(_, n)| *n).max().unwrap_or(0);
    counts
        .into_iter()
        .find(|(_, n)| *n == best)
        .map(|(l, _)| l.clone())
        .expect("at least one label")
}

fn profile_label(profile: Vec<usize>) -> IndexSet {
    IndexSet::new(profile.into_iter().map(|c| c + 1).collect())
}

/// `P M P^T` at a generic point, with `P` the flag basis. The form only sees
/// `ξ` on `[g,g]`, so the indeterminates are `u_s = ⟨ξ, d_s⟩` for the RREF
/// basis `d_s` of `[g,g]`; a bracket's coordinate on `d_s` is its entry at
/// the pivot of `d_s`.
fn symbolic_flag_form(flag: &Flag) -> Vec<Vec<MPoly>> {
    let g = flag.algebra();
    let m = g.dim();
    let p = flag.vectors();
    let derived = derived_subalgebra(g);
    let pivots = derived.pivots();
    (0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    let br = g.bracket(&p[a], &p[b]);
                    let cs: Vec<Scalar> = pivots.iter().map(|&c| br[c].clone()).collect();
                    MPoly::linear(&cs)
                })
                .collect()
        })
        .collect()
}

/// One realized fine stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub label: FineLabel,
    pub coarse: IndexSet,
    pub representative: Functional,
    pub orbit_dim: usize,
    /// Classified points that landed here.
    pub hits: usize,
}

/// Realized strata found by sampling; a lower bound on the true set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataSample {
    pub strata: Vec<Stratum>,
    pub random_points: usize,
    pub probe_points: usize,
    pub seed: u64,
    pub sampled_lower_bound: bool,
}

/// Probe points: `0`, every dual basis vector and every sum of two of them.
pub fn default_probes(dim: usize) -> Vec<Functional> {
    let mut out = vec![Functional::zero(dim)];
    out.extend((0..dim).map(|i| Functional::dual_basis(dim, i)));
    for i in 0..dim {
        for j in i + 1..dim {
            let mut v = linalg::unit_vector(dim, i);
            v[j] = Scalar::from_integer(1.into());
            out.push(Functional(v));
        }
    }
    out
}

/// Classifies the probes and then `n` seeded random points; one
/// representative (the first one seen) per fine label.
pub fn enumerate_strata(flag: &Flag, n: usize, seed: u64, probes: &[Functional]) -> Result<StrataSample> {
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    let m = flag.dim();
    let mut rng = sample::rng(seed);
    let random: Vec<Functional> = (0..n)
        .map(|_| Functional(sample::random_vector(&mut rng, m, sample::DEFAULT_BOUND)))
        .collect();
    let mut strata: Vec<Stratum> = Vec::new();
    for xi in probes.iter().chain(&random) {
        let c = classify_point(flag, xi)?;
        match strata.iter_mut().find(|s| s.label == c.fine) {
            Some(s) => s.hits += 1,
            None => strata.push(Stratum {
                label: c.fine,
                coarse: c.coarse,
                representative: xi.clone(),
                orbit_dim: c.orbit_dim,
                hits: 1,
            }),
        }
    }
    Ok(StrataSample {
        strata,
        random_points: n,
        probe_points: probes.len(),
        seed,
        sampled_lower_bound: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layer {
    /// 1-based position `j`; the open set `V_j` is the union of layers `1..=j`.
    pub index: usize,
    pub label: FineLabel,
    pub coarse: IndexSet,
    pub representative: Functional,
    pub orbit_dim: usize,
    pub is_character_layer: bool,
    /// `dim [g,g]^⊥` on the character layer.
    pub character_space_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerReport {
    pub algebra_hash: String,
    pub flag: Vec<Vec<String>>,
    pub order_variant: OrderVariant,
    pub seed: u64,
    pub sampled_lower_bound: bool,
    pub random_points: usize,
    pub probe_points: usize,
    pub layer_count: usize,
    /// `m - |coarse label of layer 1|`.
    pub index: usize,
    pub layers: Vec<Layer>,
}

/// Sorts realized strata increasingly; layer 1 is the generic stratum and
/// the character stratum comes last.
pub fn composition_layers(flag: &Flag, strata: &StrataSample, variant: OrderVariant) -> Result<LayerReport> {
    let m = flag.dim();
    if !strata.strata.iter().any(|s| s.label.is_character()) {
        return Err(Error::MissingCharacterLabel);
    }
    let mut sorted: Vec<&Stratum> = strata.strata.iter().collect();
    sorted.sort_by(|a, b| compare_fine_labels(&a.label, &b.label, variant));
    let char_dim = m - derived_subalgebra(flag.algebra()).dim();
    let layers: Vec<Layer> = sorted
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let is_char = s.label.is_character();
            Layer {
                index: i + 1,
                label: s.label.clone(),
                coarse: s.coarse.clone(),
                representative: s.representative.clone(),
                orbit_dim: s.orbit_dim,
                is_character_layer: is_char,
                character_space_dim: is_char.then_some(char_dim),
            }
        })
        .collect();
    if !layers.last().is_some_and(|l| l.is_character_layer) {
        return Err(Error::Internal("character layer does not sort last".into()));
    }
    Ok(LayerReport {
        algebra_hash: flag.algebra().content_hash(),
        flag: flag.vectors().iter().map(|r| vector_strings(r)).collect(),
        order_variant: variant,
        seed: strata.seed,
        sampled_lower_bound: strata.sampled_lower_bound,
        random_points: strata.random_points,
        probe_points: strata.probe_points,
        layer_count: layers.len(),
        index: m - layers[0].coarse.len(),
        layers,
    })
}

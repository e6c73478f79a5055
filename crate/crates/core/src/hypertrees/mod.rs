//! CT hypertrees, checkerboard sphere triangulations, trinity matchings,
//! on-shell diagrams and the birational inverse of the amplitude map on
//! maximally degenerate curves.
//!
//! A hypertree is a collection of `d` triples in `{1..n}`. It is a CT
//! hypertree when every nonempty subset `S` of triples covers at least
//! `|S| + 2` marked points; maximally degenerate MHV curves are exactly the
//! curves assembled from such data.

mod diagram;
mod onshell;
mod spinor;
mod triangulation;
mod trinity;

pub use diagram::trivalent_diagram;
pub(crate) use onshell::cdet;
pub use onshell::{
    amplitude_pullback, amplitude_pullback_with_step, inverse_scattering, onshell_from_hypertree,
    InverseScattering, OnShellGraph, PullbackValue, TorusCoordinates,
};
pub use spinor::{spinor_factorize, Mat2, MomentumDiagram, SpinorFactorization, VertexColor};
pub use triangulation::{bipyramid, from_triangulation, octahedron, random_checkerboard, Face, FaceColor, Triangulation};
pub use trinity::{brute_force_matching_size, max_bipartite_matching, trinity_match, verify_matching, TrinityMatching};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subset-enumeration capacity for the condition-(‡) scan.
pub const MAX_TRIPLES: usize = 24;

/// A collection of `d` triples in `{1..n}` (1-based labels).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypertreeRaw", into = "HypertreeRaw")]
pub struct Hypertree {
    n: usize,
    triples: Vec<[usize; 3]>,
}

#[derive(Serialize, Deserialize)]
struct HypertreeRaw {
    n: usize,
    triples: Vec<Vec<usize>>,
}

impl TryFrom<HypertreeRaw> for Hypertree {
    type Error = Error;
    fn try_from(raw: HypertreeRaw) -> Result<Self> {
        let mut triples = Vec::with_capacity(raw.triples.len());
        for (j, t) in raw.triples.iter().enumerate() {
            if t.len() != 3 {
                return Err(Error::Invalid(format!(
                    "triple {} has {} members, expected 3",
                    j + 1,
                    t.len()
                )));
            }
            triples.push([t[0], t[1], t[2]]);
        }
        Hypertree::new(raw.n, triples)
    }
}

impl From<Hypertree> for HypertreeRaw {
    fn from(ht: Hypertree) -> Self {
        HypertreeRaw {
            n: ht.n,
            triples: ht.triples.iter().map(|t| t.to_vec()).collect(),
        }
    }
}

/// Outcome of the condition-(‡) scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtVerdict {
    Ct,
    /// A violating subset of triple indices (0-based), minimal in size.
    Violating(Vec<usize>),
}

impl Hypertree {
    /// Validates member ranges and distinctness; members are sorted within
    /// each triple.
    pub fn new(n: usize, triples: Vec<[usize; 3]>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("hypertree needs n >= 1".into()));
        }
        let mut sorted = triples;
        for (j, t) in sorted.iter_mut().enumerate() {
            t.sort_unstable();
            if t[0] == t[1] || t[1] == t[2] {
                return Err(Error::Invalid(format!(
                    "triple {} has repeated members {:?}",
                    j + 1,
                    t
                )));
            }
            if t[0] < 1 || t[2] > n {
                return Err(Error::Invalid(format!(
                    "triple {} members {:?} out of range 1..={}",
                    j + 1,
                    t,
                    n
                )));
            }
        }
        Ok(Hypertree { n, triples: sorted })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of triples `d`.
    pub fn d(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Genus of the associated maximally degenerate curve, `d - 1`.
    pub fn genus(&self) -> usize {
        self.d().saturating_sub(1)
    }

    fn member_masks(&self) -> Vec<u64> {
        self.triples
            .iter()
            .map(|t| t.iter().fold(0u64, |m, &v| m | (1 << (v - 1))))
            .collect()
    }

    /// Checks condition (‡): every nonempty subset `S` of triples must
    /// cover at least `|S| + 2` marked points. On failure returns a
    /// violating subset of minimal size.
    pub fn check_ct(&self) -> Result<CtVerdict> {
        let d = self.d();
        if d > MAX_TRIPLES {
            return Err(Error::Capacity(format!(
                "subset scan supports at most {MAX_TRIPLES} triples, got {d}"
            )));
        }
        let masks = self.member_masks();
        // Size-ordered scan so the first violation found is minimal.
        let mut subset = Vec::new();
        for size in 1..=d {
            if let Some(bad) = violating_subset(&masks, size, 0, 0u64, &mut subset) {
                return Ok(CtVerdict::Violating(bad));
            }
        }
        Ok(CtVerdict::Ct)
    }

    /// True when (‡) holds strictly for every `S` with `1 < |S| < d`.
    /// Errors on non-CT input.
    pub fn is_irreducible(&self) -> Result<bool> {
        match self.check_ct()? {
            CtVerdict::Violating(s) => {
                return Err(Error::Invalid(format!(
                    "irreducibility is only defined for CT hypertrees; violating subset {s:?}"
                )))
            }
            CtVerdict::Ct => {}
        }
        let d = self.d();
        let masks = self.member_masks();
        for mask in 1u64..(1 << d) {
            let size = mask.count_ones() as usize;
            if size <= 1 || size >= d {
                continue;
            }
            let mut union = 0u64;
            for (j, m) in masks.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    union |= m;
                }
            }
            if (union.count_ones() as usize) <= size + 2 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn violating_subset(
    masks: &[u64],
    size: usize,
    start: usize,
    union: u64,
    subset: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if subset.len() == size {
        if (union.count_ones() as usize) < size + 2 {
            return Some(subset.clone());
        }
        return None;
    }
    let remaining = size - subset.len();
    for j in start..=masks.len().saturating_sub(remaining) {
        subset.push(j);
        if let Some(bad) = violating_subset(masks, size, j + 1, union | masks[j], subset) {
            return Some(bad);
        }
        subset.pop();
    }
    None
}

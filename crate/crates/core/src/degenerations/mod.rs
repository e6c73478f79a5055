//! Dual graphs and multidegrees of stable curves: structural checks,
//! stability, component enumeration and genus-1 nodal closed forms.

mod channels;
mod mhv;
mod nodal;
mod stability;
mod theta;

pub use channels::{channel_factorizations, ChannelCut, CutKind, TwoChannelCase};
pub use mhv::{mhv_structural_check, MhvFailure, MhvVerdict};
pub use nodal::{
    nodal_genus1_lambda, nodal_genus1_preimages, twochannel_discriminant, twochannel_genus1_lambda,
};
pub use stability::{check_stability, enumerate_multidegrees, StabilityKind, StabilityReport};
pub use theta::{theta_vector, ThetaVector};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex of a dual graph: an irreducible component with its geometric
/// genus and the marked points (legs) it carries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexData {
    pub genus: usize,
    #[serde(default)]
    pub legs: BTreeSet<usize>,
}

/// Dual graph of a connected nodal curve. Edges are nodes of the curve;
/// loops and parallel edges are allowed. Vertices are 0-based in memory and
/// 1-based in the JSON schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DualGraphRaw", into = "DualGraphRaw")]
pub struct DualGraph {
    vertices: Vec<VertexData>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DualGraphRaw {
    vertices: Vec<VertexData>,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<DualGraphRaw> for DualGraph {
    type Error = Error;
    fn try_from(raw: DualGraphRaw) -> Result<Self> {
        let v = raw.vertices.len();
        let edges = raw
            .edges
            .iter()
            .map(|&(a, b)| {
                if a < 1 || a > v || b < 1 || b > v {
                    Err(Error::Invalid(format!("edge ({a},{b}) out of range 1..={v}")))
                } else {
                    Ok((a - 1, b - 1))
                }
            })
            .collect::<Result<_>>()?;
        DualGraph::new(raw.vertices, edges)
    }
}

impl From<DualGraph> for DualGraphRaw {
    fn from(g: DualGraph) -> Self {
        DualGraphRaw {
            vertices: g.vertices,
            edges: g.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect(),
        }
    }
}

impl DualGraph {
    pub fn new(vertices: Vec<VertexData>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Invalid("dual graph needs at least one vertex".into()));
        }
        for &(a, b) in &edges {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::Invalid(format!("edge ({a},{b}) out of range")));
            }
        }
        let mut seen = BTreeSet::new();
        for (vi, v) in vertices.iter().enumerate() {
            for &l in &v.legs {
                if !seen.insert(l) {
                    return Err(Error::Invalid(format!(
                        "marked point {l} appears on more than one vertex (vertex {vi})"
                    )));
                }
            }
        }
        let g = DualGraph { vertices, edges };
        if !g.subset_connected(&(0..g.vertices.len()).collect::<Vec<_>>()) {
            return Err(Error::Invalid("dual graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Total number of legs.
    pub fn n_marked(&self) -> usize {
        self.vertices.iter().map(|v| v.legs.len()).sum()
    }

    /// Arithmetic genus: sum of vertex genera plus the first Betti number.
    pub fn genus(&self) -> usize {
        let gsum: usize = self.vertices.iter().map(|v| v.genus).sum();
        gsum + self.edges.len() + 1 - self.vertices.len()
    }

    /// Edge endpoints incident to each vertex, loops counted twice.
    pub fn edge_valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Whether the vertex subset induces a connected subgraph.
    pub fn subset_connected(&self, subset: &[usize]) -> bool {
        if subset.is_empty() {
            return false;
        }
        let inset: BTreeSet<usize> = subset.iter().copied().collect();
        let mut reach = BTreeSet::from([subset[0]]);
        let mut stack = vec![subset[0]];
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && inset.contains(&y) && reach.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        reach.len() == subset.len()
    }

    /// Degree, genus and leg count of the subcurve over a vertex subset
    /// (assumed connected): edges internal to the subset count toward its
    /// genus, loops included.
    pub fn subcurve_stats(&self, subset: &[usize], deg: &Multidegree) -> SubcurveStats {
        let inset: BTreeSet<usize> = subset.iter().copied().collect();
        let internal_edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| inset.contains(&a) && inset.contains(&b))
            .count();
        let cross_edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| inset.contains(&a) != inset.contains(&b))
            .count();
        let gsum: usize = subset.iter().map(|&v| self.vertices[v].genus).sum();
        SubcurveStats {
            degree: subset.iter().map(|&v| deg.d[v]).sum(),
            genus: (gsum + internal_edges + 1) as i64 - subset.len() as i64,
            legs: subset.iter().map(|&v| self.vertices[v].legs.len()).sum(),
            cross_edges,
        }
    }

    /// All proper nonempty connected vertex subsets (as sorted vectors).
    pub fn connected_proper_subsets(&self) -> Result<Vec<Vec<usize>>> {
        let v = self.vertices.len();
        if v > 20 {
            return Err(Error::Capacity(format!(
                "connected-subset enumeration supports at most 20 vertices, got {v}"
            )));
        }
        let mut out = Vec::new();
        for mask in 1u32..((1u32 << v) - 1) {
            let subset: Vec<usize> = (0..v).filter(|&i| mask & (1 << i) != 0).collect();
            if self.subset_connected(&subset) {
                out.push(subset);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SubcurveStats {
    pub degree: i64,
    pub genus: i64,
    pub legs: usize,
    pub cross_edges: usize,
}

/// A multidegree: one integer per vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multidegree {
    pub d: Vec<i64>,
}

impl Multidegree {
    pub fn new(d: Vec<i64>) -> Self {
        Multidegree { d }
    }

    pub fn total(&self) -> i64 {
        self.d.iter().sum()
    }
}

/// Builds the wheel of `k` rational curves with one marked point each.
pub fn wheel_graph(k: usize) -> DualGraph {
    let vertices = (0..k)
        .map(|i| VertexData { genus: 0, legs: BTreeSet::from([i + 1]) })
        .collect();
    let edges = (0..k).map(|i| (i, (i + 1) % k)).collect();
    DualGraph::new(vertices, edges).expect("wheel is connected")
}

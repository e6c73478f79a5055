//! Structural checks for on-shell diagrams of candidate MHV curves.

use std::collections::BTreeSet;

use crate::degenerations::{DualGraph, Multidegree};
use crate::error::{Error, Result};
use crate::hypertrees::{CtVerdict, Hypertree};

/// Named structural obstructions, reported on the first rule that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MhvFailure {
    /// A separating node: curves of compact type are never MHV.
    SeparatingNode { edge: (usize, usize) },
    /// A negative-degree component cannot carry a globally generated bundle.
    NegativeDegree { vertex: usize },
    /// A degree-0 connected subcurve of positive genus or with two or more
    /// marked points is contracted badly.
    DegreeZeroSubgraph { vertices: Vec<usize>, genus: i64, legs: usize },
    /// A subcurve with `d_Y <= g_Y` (positive genus) violates the degree
    /// lower bound.
    SubcurveDegreeLow { vertices: Vec<usize>, degree: i64, genus: i64 },
    /// A subcurve with `d_Y = g_Y + 1` carries more than `g_Y + 3` marked
    /// points, so the restricted amplitude map cannot dominate.
    SubcurveTooManyLegs { vertices: Vec<usize>, degree: i64, genus: i64, legs: usize },
    /// The trivalent diagram does not assemble into triples.
    NotHypertreeShape { reason: String },
    /// The assembled hypertree violates the covering condition.
    NotCt { violating: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MhvVerdict {
    /// Trivalent all-0/1 diagram passing every gate, with its hypertree.
    Mhv { hypertree: Hypertree },
    /// All structural gates pass, but the diagram is not trivalent with
    /// degrees in {0,1}, so the full verdict is out of reach here.
    PassesStructuralChecks,
    Rejected(MhvFailure),
}

/// Runs the structural gates in order: separating nodes, degree-0
/// subgraphs, subcurve degree bounds; for trivalent all-0/1 diagrams the
/// hypertree is assembled and the covering condition decides MHV.
pub fn mhv_structural_check(graph: &DualGraph, deg: &Multidegree) -> Result<MhvVerdict> {
    let g = graph.genus() as i64;
    let n = graph.n_marked() as i64;
    if n != g + 3 {
        return Err(Error::Invalid(format!("expected n = g + 3, got n = {n}, g = {g}")));
    }
    if deg.total() != g + 1 {
        return Err(Error::Invalid(format!(
            "expected total degree g + 1 = {}, got {}",
            g + 1,
            deg.total()
        )));
    }
    if deg.d.len() != graph.vertex_count() {
        return Err(Error::Invalid("multidegree length differs from vertex count".into()));
    }

    if let Some(v) = (0..deg.d.len()).find(|&v| deg.d[v] < 0) {
        return Ok(MhvVerdict::Rejected(MhvFailure::NegativeDegree { vertex: v }));
    }

    // Bridges: remove each non-loop edge and test connectivity.
    let all: Vec<usize> = (0..graph.vertex_count()).collect();
    for (ei, &(a, b)) in graph.edges().iter().enumerate() {
        if a == b {
            continue;
        }
        let mut edges = graph.edges().to_vec();
        edges.remove(ei);
        let probe = DualGraph::new(graph.vertices().to_vec(), edges);
        let disconnected = match probe {
            Err(_) => true,
            Ok(p) => !p.subset_connected(&all),
        };
        if disconnected {
            return Ok(MhvVerdict::Rejected(MhvFailure::SeparatingNode { edge: (a, b) }));
        }
    }

    // Maximal connected degree-0 subgraphs must be rational trees with at
    // most one marked point.
    let zero: Vec<usize> = (0..deg.d.len()).filter(|&v| deg.d[v] == 0).collect();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &start in &zero {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(a, b) in graph.edges() {
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && zero.contains(&y) && comp.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        seen.extend(comp.iter().copied());
        let comp: Vec<usize> = comp.into_iter().collect();
        let s = graph.subcurve_stats(&comp, deg);
        if s.genus > 0 || s.legs >= 2 {
            return Ok(MhvVerdict::Rejected(MhvFailure::DegreeZeroSubgraph {
                vertices: comp,
                genus: s.genus,
                legs: s.legs,
            }));
        }
    }

    // Degree bounds on every proper connected subcurve.
    for subset in graph.connected_proper_subsets()? {
        let s = graph.subcurve_stats(&subset, deg);
        if s.genus > 0 && s.degree <= s.genus {
            return Ok(MhvVerdict::Rejected(MhvFailure::SubcurveDegreeLow {
                vertices: subset,
                degree: s.degree,
                genus: s.genus,
            }));
        }
        if s.degree == s.genus + 1 && (s.legs as i64) > s.genus + 3 {
            return Ok(MhvVerdict::Rejected(MhvFailure::SubcurveTooManyLegs {
                vertices: subset,
                degree: s.degree,
                genus: s.genus,
                legs: s.legs,
            }));
        }
    }

    // Full verdict only for trivalent diagrams with degrees in {0, 1}.
    let trivalent = (0..graph.vertex_count()).all(|v| {
        graph.vertices()[v].genus == 0
            && graph.edge_valence(v) + graph.vertices()[v].legs.len() == 3
    });
    let zero_one = deg.d.iter().all(|&d| d == 0 || d == 1);
    if !(trivalent && zero_one) {
        return Ok(MhvVerdict::PassesStructuralChecks);
    }

    match assemble_hypertree(graph, deg) {
        Err(reason) => Ok(MhvVerdict::Rejected(MhvFailure::NotHypertreeShape { reason })),
        Ok(ht) => match ht.check_ct()? {
            CtVerdict::Ct => Ok(MhvVerdict::Mhv { hypertree: ht }),
            CtVerdict::Violating(s) => Ok(MhvVerdict::Rejected(MhvFailure::NotCt { violating: s })),
        },
    }
}

/// Contracts the degree-0 trees of a trivalent 0/1 diagram to megacircles
/// and reads off one triple per degree-1 vertex.
fn assemble_hypertree(graph: &DualGraph, deg: &Multidegree) -> std::result::Result<Hypertree, String> {
    let v = graph.vertex_count();
    // White components and their single marked point.
    let mut white_comp: Vec<Option<usize>> = vec![None; v];
    let mut comp_mark: Vec<usize> = Vec::new();
    for start in 0..v {
        if deg.d[start] != 0 || white_comp[start].is_some() {
            continue;
        }
        let id = comp_mark.len();
        let mut members = vec![start];
        white_comp[start] = Some(id);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(a, b) in graph.edges() {
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && deg.d[y] == 0 && white_comp[y].is_none() {
                        white_comp[y] = Some(id);
                        members.push(y);
                        stack.push(y);
                    }
                }
            }
        }
        let legs: Vec<usize> = members
            .iter()
            .flat_map(|&m| graph.vertices()[m].legs.iter().copied())
            .collect();
        match legs.as_slice() {
            [one] => comp_mark.push(*one),
            [] => return Err(format!("white tree {members:?} carries no marked point")),
            many => return Err(format!("white tree {members:?} carries marked points {many:?}")),
        }
    }

    let mut triples = Vec::new();
    for b in 0..v {
        if deg.d[b] != 1 {
            continue;
        }
        let mut members: Vec<usize> = graph.vertices()[b].legs.iter().copied().collect();
        for &(x, y) in graph.edges() {
            for (s, t) in [(x, y), (y, x)] {
                if s == b {
                    match white_comp[t] {
                        Some(id) => members.push(comp_mark[id]),
                        None => {
                            return Err(format!(
                                "degree-1 components {b} and {t} share a node"
                            ))
                        }
                    }
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        if members.len() != 3 {
            return Err(format!(
                "degree-1 component {b} sees marked points {members:?}, expected 3 distinct"
            ));
        }
        triples.push([members[0], members[1], members[2]]);
    }
    Hypertree::new(graph.n_marked(), triples).map_err(|e| e.to_string())
}

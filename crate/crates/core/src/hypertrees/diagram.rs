//! Conversion of a hypertree into a trivalent on-shell diagram.
//!
//! Marked points lying in a single triple sit directly on their degree-1
//! component; points in two triples become a degree-0 component with two
//! nodes and one leg; points in three or more triples expand into a
//! caterpillar tree of trivalent degree-0 components.

use std::collections::BTreeSet;

use crate::degenerations::{DualGraph, Multidegree, VertexData};
use crate::error::{Error, Result};
use crate::hypertrees::Hypertree;

/// Builds the maximally degenerate stable curve of a hypertree as a dual
/// graph with multidegree: one degree-1 vertex per triple and degree-0
/// trees for the shared marked points.
pub fn trivalent_diagram(ht: &Hypertree) -> Result<(DualGraph, Multidegree)> {
    let d = ht.d();
    let n = ht.n();
    // Which triples contain each marked point.
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (b, t) in ht.triples().iter().enumerate() {
        for &m in t {
            owners[m].push(b);
        }
    }
    for m in 1..=n {
        if owners[m].is_empty() {
            return Err(Error::Invalid(format!(
                "marked point {m} lies in no triple; the curve would be disconnected"
            )));
        }
    }

    let mut vertices: Vec<VertexData> = (0..d)
        .map(|_| VertexData { genus: 0, legs: BTreeSet::new() })
        .collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for m in 1..=n {
        match owners[m].as_slice() {
            [only] => {
                // Dummy megacircle contracted: the leg sits on the black.
                vertices[*only].legs.insert(m);
            }
            [b1, b2] => {
                let w = vertices.len();
                vertices.push(VertexData { genus: 0, legs: BTreeSet::from([m]) });
                edges.push((*b1, w));
                edges.push((*b2, w));
            }
            many => {
                // Caterpillar of k-1 trivalent vertices for k incident
                // blacks plus the leg.
                let k = many.len();
                let first = vertices.len();
                for i in 0..k - 1 {
                    let legs = if i == 0 { BTreeSet::from([m]) } else { BTreeSet::new() };
                    vertices.push(VertexData { genus: 0, legs });
                    if i > 0 {
                        edges.push((first + i - 1, first + i));
                    }
                }
                // Slot assignment: the first path vertex holds the leg and
                // one black, the last holds two, interiors one each.
                edges.push((many[0], first));
                for (i, &b) in many.iter().enumerate().skip(1) {
                    let host = first + i.min(k - 2);
                    edges.push((b, host));
                }
            }
        }
    }

    let graph = DualGraph::new(vertices, edges)?;
    let mut deg = vec![0i64; graph.vertex_count()];
    for b in 0..d {
        deg[b] = 1;
    }
    Ok((graph, Multidegree::new(deg)))
}

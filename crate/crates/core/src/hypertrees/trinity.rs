//! Perfect matchings between interior vertices and interior white faces of
//! a checkerboard sphere triangulation.
//!
//! The construction follows the classical arborescence recipe: 3-color the
//! vertices, grow a directed tree over one color class whose arrows each
//! cross a black and then a white triangle, partially match along it, then
//! connect the other two color classes by the uncrossed edges and shrink
//! that tree leaf by leaf. Determinism: every choice is broken by lowest
//! vertex index.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hypertrees::triangulation::{FaceColor, Triangulation};

/// A perfect matching from interior vertices to interior white faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrinityMatching {
    /// Pairs `(vertex, face index)`; each face is incident to its vertex.
    pub pairs: Vec<(usize, usize)>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// 3-colors the vertices so that every face sees all three colors.
/// Returns `colors[vertex] in {0,1,2}` (1-based vertices) or the offending
/// face on failure.
fn three_color(tri: &Triangulation) -> Result<Vec<u8>> {
    let mut colors: Vec<Option<u8>> = vec![None; tri.n() + 1];
    let f0 = &tri.faces()[0];
    let mut base = f0.v;
    base.sort_unstable();
    for (c, &v) in base.iter().enumerate() {
        colors[v] = Some(c as u8);
    }
    let edges = tri.edge_faces();
    let mut queue = vec![0usize];
    let mut visited = vec![false; tri.faces().len()];
    visited[0] = true;
    while let Some(fi) = queue.pop() {
        let f = &tri.faces()[fi];
        // BFS over face adjacency guarantees at least two vertices of the
        // popped face are colored; fill in the third and verify.
        let known: Vec<u8> = f.v.iter().filter_map(|&v| colors[v]).collect();
        if known.len() == 2 {
            let missing_color = (0u8..3)
                .find(|c| !known.contains(c))
                .ok_or_else(|| Error::Invalid(format!("face {fi} repeats vertex colors")))?;
            for &v in &f.v {
                if colors[v].is_none() {
                    colors[v] = Some(missing_color);
                }
            }
        }
        let mut cs: Vec<u8> = f.v.iter().filter_map(|&v| colors[v]).collect();
        cs.sort_unstable();
        if cs != vec![0, 1, 2] {
            return Err(Error::Invalid(format!(
                "vertex 3-coloring fails at face {fi} (vertices {:?})",
                f.v
            )));
        }
        for k in 0..3 {
            let e = edge_key(f.v[k], f.v[(k + 1) % 3]);
            for &g in &edges[&e] {
                if !visited[g] {
                    visited[g] = true;
                    queue.push(g);
                }
            }
        }
    }
    colors
        .iter()
        .skip(1)
        .map(|c| c.ok_or_else(|| Error::Internal("uncolored vertex".into())))
        .collect::<Result<Vec<u8>>>()
        .map(|mut v| {
            v.insert(0, 3); // dummy slot for 1-based indexing
            v
        })
}

/// Runs the arborescence matching for the given outer white face.
/// The outer face's three vertices are excluded; every other vertex is
/// matched to an incident interior white face.
pub fn trinity_match(tri: &Triangulation, outer: usize) -> Result<TrinityMatching> {
    let faces = tri.faces();
    if outer >= faces.len() || faces[outer].color != FaceColor::White {
        return Err(Error::Invalid(format!("outer face {outer} is not a white face")));
    }
    let colors = three_color(tri)?;
    let outer_vs = faces[outer].v;

    // "Red" is the color of the lowest-indexed outer vertex.
    let root = *outer_vs.iter().min().unwrap();
    let red = colors[root];

    // Arrows: each green-blue edge lies in one black and one white face;
    // the arrow runs from the black face's red vertex to the white face's
    // red vertex and crosses that white face.
    let edges = tri.edge_faces();
    struct Arrow {
        from: usize,
        to: usize,
        white_face: usize,
        edge: (usize, usize),
    }
    let mut arrows = Vec::new();
    for (&e, fs) in &edges {
        if colors[e.0] == red || colors[e.1] == red {
            continue;
        }
        let (bf, wf) = if faces[fs[0]].color == FaceColor::Black {
            (fs[0], fs[1])
        } else {
            (fs[1], fs[0])
        };
        let red_of = |fi: usize| {
            faces[fi]
                .v
                .iter()
                .copied()
                .find(|&v| colors[v] == red)
                .expect("every face has one vertex of each color")
        };
        arrows.push(Arrow { from: red_of(bf), to: red_of(wf), white_face: wf, edge: e });
    }
    arrows.sort_by_key(|a| (a.from, a.to, a.edge));

    // Grow the arborescence from the root: one incoming arrow per interior
    // red vertex, lowest target index first.
    let red_vertices: Vec<usize> = (1..=tri.n()).filter(|&v| colors[v] == red).collect();
    let mut incoming: BTreeMap<usize, usize> = BTreeMap::new(); // vertex -> arrow idx
    let mut reached: Vec<usize> = vec![root];
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        // Candidate arrows out of the current frontier, lowest target first.
        let mut candidates: Vec<usize> = (0..arrows.len())
            .filter(|&i| frontier.contains(&arrows[i].from))
            .collect();
        candidates.sort_by_key(|&i| (arrows[i].to, i));
        for i in candidates {
            let a = &arrows[i];
            if a.to == root || incoming.contains_key(&a.to) || a.white_face == outer {
                continue;
            }
            incoming.insert(a.to, i);
            reached.push(a.to);
            next.push(a.to);
        }
        frontier = next;
    }
    let missing: Vec<usize> = red_vertices
        .iter()
        .copied()
        .filter(|v| *v != root && !incoming.contains_key(v))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Internal(format!(
            "arborescence search exhausted: red vertices {missing:?} unreachable"
        )));
    }

    let mut pairs: Vec<(usize, usize)> = incoming
        .iter()
        .map(|(&v, &i)| (v, arrows[i].white_face))
        .collect();

    // Second tree: green/blue vertices joined by the edges not crossed by
    // the arborescence.
    let crossed: Vec<(usize, usize)> = incoming.values().map(|&i| arrows[i].edge).collect();
    let gb_vertices: Vec<usize> = (1..=tri.n()).filter(|&v| colors[v] != red).collect();
    let mut adj: BTreeMap<usize, Vec<((usize, usize), usize)>> = BTreeMap::new(); // v -> (edge, other)
    let mut tree_edges = 0usize;
    for (&e, _) in &edges {
        if colors[e.0] == red || colors[e.1] == red || crossed.contains(&e) {
            continue;
        }
        adj.entry(e.0).or_default().push((e, e.1));
        adj.entry(e.1).or_default().push((e, e.0));
        tree_edges += 1;
    }
    if tree_edges + 1 != gb_vertices.len() {
        return Err(Error::Internal(format!(
            "uncrossed green-blue graph has {tree_edges} edges over {} vertices, not a tree",
            gb_vertices.len()
        )));
    }

    // Shrink interior leaves (lowest vertex first), matching each to the
    // white face of its pendant edge. The outer face's green-blue edge is
    // never crossed, so the two outer green/blue vertices stay adjacent in
    // the tree and survive as the final edge.
    let outer_gb: Vec<usize> = outer_vs.iter().copied().filter(|&v| colors[v] != red).collect();
    let mut alive: BTreeMap<usize, Vec<((usize, usize), usize)>> = adj;
    while alive.len() > 2 {
        let leaf = alive
            .iter()
            .filter(|(v, nb)| nb.len() == 1 && !outer_gb.contains(v))
            .map(|(&v, _)| v)
            .min()
            .ok_or_else(|| Error::Internal("no interior leaf in green-blue tree".into()))?;
        let (edge, other) = alive[&leaf][0];
        let wf = edges[&edge]
            .iter()
            .copied()
            .find(|&fi| faces[fi].color == FaceColor::White)
            .expect("every edge has a white side");
        if wf == outer {
            return Err(Error::Internal(
                "leaf shrink attempted to match the outer face".into(),
            ));
        }
        pairs.push((leaf, wf));
        alive.remove(&leaf);
        if let Some(nb) = alive.get_mut(&other) {
            nb.retain(|&(e, _)| e != edge);
        }
    }
    let survivors: Vec<usize> = alive.keys().copied().collect();
    let mut expected = outer_gb.clone();
    expected.sort_unstable();
    if survivors != expected {
        return Err(Error::Internal(format!(
            "leaf shrink left {survivors:?} instead of the outer pair {expected:?}"
        )));
    }

    pairs.sort_unstable();
    let matching = TrinityMatching { pairs };
    verify_matching(tri, outer, &matching)?;
    Ok(matching)
}

/// Checks that `m` is a perfect matching between interior vertices and
/// interior white faces, with every face incident to its vertex.
pub fn verify_matching(tri: &Triangulation, outer: usize, m: &TrinityMatching) -> Result<()> {
    let faces = tri.faces();
    let outer_vs = faces[outer].v;
    let interior: Vec<usize> = (1..=tri.n()).filter(|v| !outer_vs.contains(v)).collect();
    let interior_whites: Vec<usize> = tri
        .faces_of_color(FaceColor::White)
        .into_iter()
        .filter(|&fi| fi != outer)
        .collect();
    let mut vs: Vec<usize> = m.pairs.iter().map(|p| p.0).collect();
    let mut fs: Vec<usize> = m.pairs.iter().map(|p| p.1).collect();
    vs.sort_unstable();
    fs.sort_unstable();
    if vs != interior {
        return Err(Error::Internal("matching does not cover interior vertices exactly".into()));
    }
    if fs != interior_whites {
        return Err(Error::Internal("matching does not cover interior white faces exactly".into()));
    }
    for &(v, fi) in &m.pairs {
        if !faces[fi].v.contains(&v) {
            return Err(Error::Internal(format!("matched face {fi} not incident to vertex {v}")));
        }
    }
    Ok(())
}

/// Kuhn's augmenting-path maximum bipartite matching; returns the matched
/// right partner for each left vertex. Independent of the arborescence
/// path and used as its feasibility oracle.
pub fn max_bipartite_matching(left: usize, right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    assert_eq!(adj.len(), left);
    let mut match_right: Vec<Option<usize>> = vec![None; right];

    fn try_augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if match_right[v].is_none()
                    || try_augment(match_right[v].unwrap(), adj, seen, match_right)
                {
                    match_right[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }

    for u in 0..left {
        let mut seen = vec![false; right];
        try_augment(u, adj, &mut seen, &mut match_right);
    }
    let mut match_left = vec![None; left];
    for (v, m) in match_right.iter().enumerate() {
        if let Some(u) = *m {
            match_left[u] = Some(v);
        }
    }
    match_left
}

/// Size of the maximum matching between interior vertices and incident
/// interior white faces.
pub fn brute_force_matching_size(tri: &Triangulation, outer: usize) -> usize {
    let outer_vs = tri.faces()[outer].v;
    let interior: Vec<usize> = (1..=tri.n()).filter(|v| !outer_vs.contains(v)).collect();
    let whites: Vec<usize> = tri
        .faces_of_color(FaceColor::White)
        .into_iter()
        .filter(|&fi| fi != outer)
        .collect();
    let adj: Vec<Vec<usize>> = interior
        .iter()
        .map(|&v| {
            whites
                .iter()
                .enumerate()
                .filter(|(_, &fi)| tri.faces()[fi].v.contains(&v))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    max_bipartite_matching(interior.len(), whites.len(), &adj)
        .iter()
        .filter(|m| m.is_some())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypertrees::triangulation::{octahedron, random_checkerboard};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn octahedron_matches_three_interior_vertices() {
        let tri = octahedron();
        for outer in tri.faces_of_color(FaceColor::White) {
            let m = trinity_match(&tri, outer).unwrap();
            assert_eq!(m.pairs.len(), 3);
            verify_matching(&tri, outer, &m).unwrap();
        }
    }

    #[test]
    fn matched_faces_are_incident() {
        let tri = octahedron();
        let outer = tri.faces_of_color(FaceColor::White)[0];
        let m = trinity_match(&tri, outer).unwrap();
        for (v, fi) in m.pairs {
            assert!(tri.faces()[fi].v.contains(&v));
        }
    }

    #[test]
    fn random_triangulations_match_brute_force_feasibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let tri = random_checkerboard(20, &mut rng);
            let whites = tri.faces_of_color(FaceColor::White);
            let outer = whites[0];
            let m = trinity_match(&tri, outer).unwrap();
            verify_matching(&tri, outer, &m).unwrap();
            // The independent matcher must agree a perfect matching exists.
            let interior = tri.n() - 3;
            assert_eq!(brute_force_matching_size(&tri, outer), interior);
            assert_eq!(m.pairs.len(), interior);
        }
    }

    #[test]
    fn black_outer_face_rejected() {
        let tri = octahedron();
        let black = tri.faces_of_color(FaceColor::Black)[0];
        assert!(trinity_match(&tri, black).is_err());
    }
}

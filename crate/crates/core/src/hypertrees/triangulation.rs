//! Checkerboard triangulations of the 2-sphere.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypertrees::{CtVerdict, Hypertree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceColor {
    Black,
    White,
}

impl FaceColor {
    pub fn opposite(self) -> FaceColor {
        match self {
            FaceColor::Black => FaceColor::White,
            FaceColor::White => FaceColor::Black,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub v: [usize; 3],
    pub color: FaceColor,
}

/// A 2-colored triangulation of the sphere: every edge lies in exactly two
/// faces of opposite colors and the Euler characteristic is 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TriangulationRaw", into = "TriangulationRaw")]
pub struct Triangulation {
    n: usize,
    faces: Vec<Face>,
}

#[derive(Serialize, Deserialize)]
struct TriangulationRaw {
    n: usize,
    faces: Vec<Face>,
}

impl TryFrom<TriangulationRaw> for Triangulation {
    type Error = Error;
    fn try_from(raw: TriangulationRaw) -> Result<Self> {
        Triangulation::new(raw.n, raw.faces)
    }
}

impl From<Triangulation> for TriangulationRaw {
    fn from(t: Triangulation) -> Self {
        TriangulationRaw { n: t.n, faces: t.faces }
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Triangulation {
    pub fn new(n: usize, faces: Vec<Face>) -> Result<Self> {
        let tri = Triangulation { n, faces };
        tri.validate()?;
        Ok(tri)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Map from undirected edge to the (at most two) face indices using it.
    pub fn edge_faces(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                map.entry(edge_key(f.v[k], f.v[(k + 1) % 3]))
                    .or_default()
                    .push(fi);
            }
        }
        map
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Invalid("triangulation needs at least 3 vertices".into()));
        }
        let mut seen = vec![false; self.n + 1];
        for (fi, f) in self.faces.iter().enumerate() {
            let mut v = f.v;
            v.sort_unstable();
            if v[0] == v[1] || v[1] == v[2] {
                return Err(Error::Invalid(format!("face {fi} has repeated vertices")));
            }
            if v[0] < 1 || v[2] > self.n {
                return Err(Error::Invalid(format!("face {fi} vertex out of range")));
            }
            for x in f.v {
                seen[x] = true;
            }
        }
        if let Some(missing) = (1..=self.n).find(|&v| !seen[v]) {
            return Err(Error::Invalid(format!("vertex {missing} appears in no face")));
        }
        let edges = self.edge_faces();
        for (e, fs) in &edges {
            if fs.len() != 2 {
                return Err(Error::Invalid(format!(
                    "edge {e:?} lies in {} faces, expected 2 (not a closed surface)",
                    fs.len()
                )));
            }
            if self.faces[fs[0]].color == self.faces[fs[1]].color {
                return Err(Error::Invalid(format!(
                    "faces {} and {} share edge {e:?} but have the same color",
                    fs[0], fs[1]
                )));
            }
        }
        // Sphere check: V - E + F = 2.
        let chi = self.n as i64 - edges.len() as i64 + self.faces.len() as i64;
        if chi != 2 {
            return Err(Error::Invalid(format!(
                "Euler characteristic {chi}, expected 2 for a sphere"
            )));
        }
        // Face-adjacency connectivity.
        let mut reach = vec![false; self.faces.len()];
        let mut stack = vec![0usize];
        reach[0] = true;
        let mut count = 1;
        while let Some(fi) = stack.pop() {
            let f = &self.faces[fi];
            for k in 0..3 {
                let e = edge_key(f.v[k], f.v[(k + 1) % 3]);
                for &g in &edges[&e] {
                    if !reach[g] {
                        reach[g] = true;
                        count += 1;
                        stack.push(g);
                    }
                }
            }
        }
        if count != self.faces.len() {
            return Err(Error::Invalid("triangulation is not connected".into()));
        }
        Ok(())
    }

    pub fn faces_of_color(&self, color: FaceColor) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.faces[i].color == color)
            .collect()
    }

    /// Swaps the 2-coloring.
    pub fn recolored(&self) -> Triangulation {
        let faces = self
            .faces
            .iter()
            .map(|f| Face { v: f.v, color: f.color.opposite() })
            .collect();
        Triangulation { n: self.n, faces }
    }
}

/// Extracts the two hypertrees of a checkerboard triangulation: black
/// triangles give the triples of the first, white triangles those of the
/// second. Both are verified to satisfy (‡) before returning.
pub fn from_triangulation(tri: &Triangulation) -> Result<(Hypertree, Hypertree)> {
    let mut out = Vec::with_capacity(2);
    for color in [FaceColor::Black, FaceColor::White] {
        let triples: Vec<[usize; 3]> = tri
            .faces
            .iter()
            .filter(|f| f.color == color)
            .map(|f| f.v)
            .collect();
        let ht = Hypertree::new(tri.n, triples)?;
        if let CtVerdict::Violating(s) = ht.check_ct()? {
            return Err(Error::Internal(format!(
                "{color:?} triples of a valid checkerboard triangulation violate (‡) at {s:?}"
            )));
        }
        out.push(ht);
    }
    let white = out.pop().unwrap();
    let black = out.pop().unwrap();
    Ok((black, white))
}

/// The octahedron: 4 black and 4 white faces on 6 vertices.
pub fn octahedron() -> Triangulation {
    let f = |v: [usize; 3], color| Face { v, color };
    Triangulation::new(
        6,
        vec![
            f([1, 2, 3], FaceColor::Black),
            f([1, 3, 4], FaceColor::White),
            f([1, 4, 5], FaceColor::Black),
            f([1, 5, 2], FaceColor::White),
            f([6, 3, 2], FaceColor::White),
            f([6, 4, 3], FaceColor::Black),
            f([6, 5, 4], FaceColor::White),
            f([6, 2, 5], FaceColor::Black),
        ],
    )
    .expect("octahedron is a valid checkerboard triangulation")
}

/// Bipyramid over an even cycle of length `2m` (m >= 2): a checkerboard
/// triangulation with `2m + 2` vertices.
pub fn bipyramid(m: usize) -> Triangulation {
    assert!(m >= 2);
    let n = 2 * m;
    let north = n + 1;
    let south = n + 2;
    let mut faces = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let j = if i == n { 1 } else { i + 1 };
        let top = if i % 2 == 1 { FaceColor::Black } else { FaceColor::White };
        faces.push(Face { v: [north, i, j], color: top });
        faces.push(Face { v: [south, i, j], color: top.opposite() });
    }
    Triangulation::new(n + 2, faces).expect("bipyramid over an even cycle is checkerboard")
}

/// Grows a random checkerboard triangulation by repeated double edge
/// subdivision, which preserves the checkerboard property: the shared edge
/// of a black/white face pair is replaced by a path through two new
/// vertices and each face splits into three of alternating colors.
pub fn random_checkerboard<R: Rng>(max_vertices: usize, rng: &mut R) -> Triangulation {
    let mut tri = if max_vertices >= 10 && rng.gen_bool(0.5) {
        bipyramid(2 + rng.gen_range(0..=((max_vertices - 2) / 2 - 2).min(3)))
    } else {
        octahedron()
    };
    while tri.n() + 2 <= max_vertices {
        let edges: Vec<((usize, usize), Vec<usize>)> = tri.edge_faces().into_iter().collect();
        let (&(u, v), fs) = {
            let pick = rng.gen_range(0..edges.len());
            (&edges[pick].0, edges[pick].1.clone())
        };
        let (black_fi, white_fi) = if tri.faces[fs[0]].color == FaceColor::Black {
            (fs[0], fs[1])
        } else {
            (fs[1], fs[0])
        };
        let w = *tri.faces[black_fi].v.iter().find(|&&x| x != u && x != v).unwrap();
        let x = *tri.faces[white_fi].v.iter().find(|&&x| x != u && x != v).unwrap();
        let p = tri.n + 1;
        let q = tri.n + 2;
        let mut faces = tri.faces.clone();
        let hi = black_fi.max(white_fi);
        let lo = black_fi.min(white_fi);
        faces.remove(hi);
        faces.remove(lo);
        faces.push(Face { v: [u, p, w], color: FaceColor::Black });
        faces.push(Face { v: [p, q, w], color: FaceColor::White });
        faces.push(Face { v: [q, v, w], color: FaceColor::Black });
        faces.push(Face { v: [u, p, x], color: FaceColor::White });
        faces.push(Face { v: [p, q, x], color: FaceColor::Black });
        faces.push(Face { v: [q, v, x], color: FaceColor::White });
        tri = Triangulation::new(tri.n + 2, faces)
            .expect("double edge subdivision preserves the checkerboard property");
        if rng.gen_bool(0.25) {
            break;
        }
    }
    tri
}

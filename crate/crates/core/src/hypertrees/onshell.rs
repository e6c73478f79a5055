//! On-shell diagrams of maximally degenerate curves, the birational inverse
//! of the amplitude map and the dlog amplitude pullback.
//!
//! The inverse map places the marked points at the reference positions
//! `(0, 1, inf)` of each degree-1 component (ordered by increasing member
//! index) and carries the unique Möbius map to the targets. The torus
//! coordinate `z` of a basis cycle is the holonomy of the glued line bundle:
//! on each degree-1 component of the cycle, rigidify the coordinate so the
//! entering node sits at 0, the exiting node at infinity and the remaining
//! special point at 1, and multiply the rigidified positions of a common
//! fiber of the maps around the cycle. The product is independent of the
//! chosen fiber and exactly invariant under a Möbius map applied to all
//! targets.


use crate::error::{Error, Result};
use crate::hypertrees::{CtVerdict, Hypertree};
use crate::scalars::{cross_ratio, mobius_from_triple, Mobius, ProjPoint, C};

/// Bipartite graph of a hypertree: one trivalent black vertex per triple,
/// one white vertex per marked point, an edge whenever the point belongs to
/// the triple.
#[derive(Clone, Debug)]
pub struct OnShellGraph {
    pub d: usize,
    pub n: usize,
    /// Edges `(black, white)`, both 0-based; whites are `marked - 1`.
    pub edges: Vec<(usize, usize)>,
}

impl OnShellGraph {
    /// First Betti number `E - V + C` of the bipartite graph.
    pub fn genus(&self) -> usize {
        let v = self.d + self.n;
        let e = self.edges.len();
        let c = self.component_count();
        (e + c).saturating_sub(v)
    }

    fn component_count(&self) -> usize {
        let v = self.d + self.n;
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(b, w) in &self.edges {
            let (rb, rw) = (find(&mut parent, b), find(&mut parent, self.d + w));
            parent[rb] = rw;
        }
        let mut roots: Vec<usize> = (0..v).map(|x| find(&mut parent, x)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Fundamental cycles over a BFS spanning tree, each returned as a
    /// closed alternating vertex sequence `[b0, w0, b1, w1, ...]`.
    pub fn cycle_basis(&self) -> Vec<Vec<usize>> {
        let v = self.d + self.n;
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); v]; // (other, edge idx)
        for (ei, &(b, w)) in self.edges.iter().enumerate() {
            adj[b].push((self.d + w, ei));
            adj[self.d + w].push((b, ei));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; v];
        let mut depth: Vec<Option<usize>> = vec![None; v];
        let mut tree_edge: Vec<bool> = vec![false; self.edges.len()];
        for start in 0..v {
            if depth[start].is_some() {
                continue;
            }
            depth[start] = Some(0);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(w, ei) in &adj[u] {
                    if depth[w].is_none() {
                        depth[w] = Some(depth[u].unwrap() + 1);
                        parent[w] = Some((u, ei));
                        tree_edge[ei] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut cycles = Vec::new();
        for (ei, &(b, w)) in self.edges.iter().enumerate() {
            if tree_edge[ei] {
                continue;
            }
            // Tree path from w-vertex up to the common ancestor with b.
            let (mut x, mut y) = (b, self.d + w);
            let mut px = vec![x];
            let mut py = vec![y];
            while depth[x] != depth[y] {
                if depth[x] > depth[y] {
                    x = parent[x].unwrap().0;
                    px.push(x);
                } else {
                    y = parent[y].unwrap().0;
                    py.push(y);
                }
            }
            while x != y {
                x = parent[x].unwrap().0;
                px.push(x);
                y = parent[y].unwrap().0;
                py.push(y);
            }
            py.pop();
            py.reverse();
            px.extend(py);
            // Rotate so the cycle starts at a black vertex.
            let pos = px.iter().position(|&u| u < self.d).expect("cycle must contain a black");
            px.rotate_left(pos);
            cycles.push(px);
        }
        cycles
    }
}

/// Builds the bipartite on-shell graph of a CT hypertree.
pub fn onshell_from_hypertree(ht: &Hypertree) -> Result<OnShellGraph> {
    if let CtVerdict::Violating(s) = ht.check_ct()? {
        return Err(Error::Invalid(format!(
            "hypertree violates (‡) at subset {s:?}"
        )));
    }
    let mut edges = Vec::with_capacity(3 * ht.d());
    for (b, t) in ht.triples().iter().enumerate() {
        for &m in t {
            edges.push((b, m - 1));
        }
    }
    Ok(OnShellGraph { d: ht.d(), n: ht.n(), edges })
}

/// Torus coordinates of the recovered configuration: a cycle basis of the
/// on-shell graph with one nonzero scalar per cycle.
#[derive(Clone, Debug)]
pub struct TorusCoordinates {
    /// Closed alternating vertex sequences `[b0, w0, b1, w1, ...]`.
    pub cycles: Vec<Vec<usize>>,
    pub z: Vec<C>,
}

/// The recovered maps and coordinates of the inverse amplitude map.
#[derive(Clone, Debug)]
pub struct InverseScattering {
    /// One Möbius map per triple, sending `(0, 1, inf)` to the targets of
    /// its members in increasing order.
    pub black_maps: Vec<Mobius>,
    pub torus: TorusCoordinates,
}

const STD: [f64; 2] = [0.0, 1.0];

fn std_positions() -> [ProjPoint; 3] {
    [ProjPoint::real(STD[0]), ProjPoint::real(STD[1]), ProjPoint::infinity()]
}

fn black_map(t: &[usize; 3], q: &[ProjPoint]) -> Result<Mobius> {
    let dst = [q[t[0] - 1], q[t[1] - 1], q[t[2] - 1]];
    mobius_from_triple(&std_positions(), &dst)
}

/// Holonomy of one basis cycle, evaluated at a probe fiber `u`.
fn cycle_holonomy(cycle: &[usize], maps: &[Mobius], ht: &Hypertree, u: &ProjPoint) -> Result<C> {
    let k = cycle.len();
    let d = ht.d();
    let mut prod = C::new(1.0, 0.0);
    for j in (0..k).step_by(2) {
        let b = cycle[j];
        debug_assert!(b < d);
        let w_in = cycle[(j + k - 1) % k] - d; // entering white (0-based marked)
        let w_out = cycle[(j + 1) % k] - d; // exiting white
        let t = ht.triples()[b];
        let pos = |member: usize| -> ProjPoint {
            let idx = t.iter().position(|&m| m == member + 1).expect("member on triple");
            std_positions()[idx]
        };
        let third = t
            .iter()
            .copied()
            .find(|&m| m != w_in + 1 && m != w_out + 1)
            .ok_or_else(|| Error::Internal("cycle enters and exits a black through one node".into()))?;
        // Rigidified coordinate: entering -> 0, exiting -> inf, third -> 1.
        let wb = mobius_from_triple(
            &[pos(w_in), pos(w_out), pos(third - 1)],
            &[ProjPoint::real(0.0), ProjPoint::infinity(), ProjPoint::real(1.0)],
        )?;
        let fiber_pt = maps[b].inverse().apply(u);
        let factor = wb.apply(&fiber_pt);
        let val = factor
            .value()
            .ok_or_else(|| Error::Degenerate("holonomy factor at infinity; probe hit a node".into()))?;
        if val.norm() == 0.0 {
            return Err(Error::Degenerate("holonomy factor zero; probe hit a node".into()));
        }
        prod *= val;
    }
    Ok(prod)
}

/// Inverse of the amplitude map on a maximally degenerate curve: recovers
/// the per-component Möbius maps sending marked points to the targets `q`,
/// plus torus coordinates of the corresponding line bundle class.
pub fn inverse_scattering(ht: &Hypertree, q: &[ProjPoint]) -> Result<InverseScattering> {
    if q.len() != ht.n() {
        return Err(Error::Invalid(format!(
            "expected {} target points, got {}",
            ht.n(),
            q.len()
        )));
    }
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            if q[i].same_point(&q[j], 1e-12) {
                return Err(Error::Degenerate(format!(
                    "target points {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let graph = onshell_from_hypertree(ht)?;
    let maps: Vec<Mobius> = ht
        .triples()
        .iter()
        .map(|t| black_map(t, q))
        .collect::<Result<_>>()?;
    let cycles = graph.cycle_basis();
    let mut z = Vec::with_capacity(cycles.len());
    for cycle in &cycles {
        // Two generic probes; agreement checks the fiber independence of
        // the holonomy (and that neither probe hit a node).
        let u1 = ProjPoint::finite(C::new(0.537213, 0.731948));
        let u2 = ProjPoint::finite(C::new(-1.214717, 0.392837));
        let h1 = cycle_holonomy(cycle, &maps, ht, &u1)?;
        let h2 = cycle_holonomy(cycle, &maps, ht, &u2)?;
        if (h1 - h2).norm() > 1e-8 * h1.norm().max(h2.norm()) {
            return Err(Error::Internal(format!(
                "cycle holonomy depends on the probe fiber: {h1} vs {h2}"
            )));
        }
        z.push(h1);
    }
    Ok(InverseScattering { black_maps: maps, torus: TorusCoordinates { cycles, z } })
}

/// Density of the dlog amplitude form against a cross-ratio chart volume,
/// or a flagged singular value on a contracted locus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PullbackValue {
    Finite(f64),
    /// Singular chart Jacobian: the configuration sits on a contracted
    /// locus and the density is unbounded.
    Singular,
}

impl PullbackValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            PullbackValue::Finite(x) => Some(x),
            PullbackValue::Singular => None,
        }
    }
}

fn config_z(ht: &Hypertree, vals: &[C], anchors: &[ProjPoint; 3]) -> Result<Vec<C>> {
    let n = ht.n();
    let mut q: Vec<ProjPoint> = Vec::with_capacity(n);
    for v in vals {
        q.push(ProjPoint::finite(*v));
    }
    q.extend_from_slice(anchors);
    let inv = inverse_scattering(ht, &q)?;
    Ok(inv.torus.z)
}

fn chart_values(q: &[ProjPoint], chart: &[[usize; 4]]) -> Result<Vec<C>> {
    chart
        .iter()
        .map(|&[i, j, k, l]| {
            let cr = cross_ratio(&q[i - 1], &q[j - 1], &q[k - 1], &q[l - 1])?;
            cr.value()
                .ok_or_else(|| Error::Chart("chart cross-ratio is infinite at q".into()))
        })
        .collect()
}

/// `|det d(log z) / d(lambda_chart)|` via central finite differences with
/// the given relative step.
pub fn amplitude_pullback_with_step(
    ht: &Hypertree,
    q: &[ProjPoint],
    chart: &[[usize; 4]],
    rel_step: f64,
) -> Result<PullbackValue> {
    let n = ht.n();
    let g = ht.genus();
    if chart.len() != g {
        return Err(Error::Invalid(format!("expected {g} chart quadruples, got {}", chart.len())));
    }
    if q.len() != n {
        return Err(Error::Invalid(format!("expected {n} points, got {}", q.len())));
    }
    for quad in chart {
        for &idx in quad {
            if idx < 1 || idx > n {
                return Err(Error::Invalid(format!("chart index {idx} out of range 1..={n}")));
            }
        }
    }
    // Gauge: move the last three points to fixed positions, vary the rest.
    let anchors = [ProjPoint::real(0.0), ProjPoint::real(1.0), ProjPoint::infinity()];
    let m = mobius_from_triple(&[q[n - 3], q[n - 2], q[n - 1]], &anchors)?;
    let vals: Vec<C> = (0..n - 3)
        .map(|i| {
            m.apply(&q[i])
                .value()
                .ok_or_else(|| Error::Chart("gauge normalization sends a point to infinity".into()))
        })
        .collect::<Result<_>>()?;

    let eval = |v: &[C]| -> Result<(Vec<C>, Vec<C>)> {
        let z = config_z(ht, v, &anchors)?;
        let mut qq: Vec<ProjPoint> = v.iter().map(|&x| ProjPoint::finite(x)).collect();
        qq.extend_from_slice(&anchors);
        let lam = chart_values(&qq, chart)?;
        Ok((z, lam))
    };

    let mut jac_logz = vec![vec![C::new(0.0, 0.0); g]; g];
    let mut jac_lam = vec![vec![C::new(0.0, 0.0); g]; g];
    for i in 0..g {
        let h = rel_step * vals[i].norm().max(1.0);
        let mut vp = vals.clone();
        let mut vm = vals.clone();
        vp[i] += C::new(h, 0.0);
        vm[i] -= C::new(h, 0.0);
        let (zp, lp) = eval(&vp)?;
        let (zm, lm) = eval(&vm)?;
        for gidx in 0..g {
            // log-derivative via the ratio, safe against branch cuts
            jac_logz[gidx][i] = (zp[gidx] / zm[gidx]).ln() / (2.0 * h);
            jac_lam[gidx][i] = (lp[gidx] - lm[gidx]) / (2.0 * h);
        }
    }
    let dz = cdet(&jac_logz);
    let dl = cdet(&jac_lam);
    if !dl.norm().is_finite() || dl.norm() < 1e-12 * dz.norm().max(1e-300) {
        return Ok(PullbackValue::Singular);
    }
    let ratio = (dz / dl).norm();
    if !ratio.is_finite() {
        return Ok(PullbackValue::Singular);
    }
    Ok(PullbackValue::Finite(ratio))
}

/// Pullback density with the default relative step of 1e-6.
pub fn amplitude_pullback(ht: &Hypertree, q: &[ProjPoint], chart: &[[usize; 4]]) -> Result<PullbackValue> {
    amplitude_pullback_with_step(ht, q, chart, 1e-6)
}

/// Determinant of a small complex matrix by Gaussian elimination.
pub(crate) fn cdet(m: &[Vec<C>]) -> C {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut det = C::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let sub = f * a[col][k];
                a[row][k] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wheel() -> Hypertree {
        Hypertree::new(4, vec![[1, 2, 4], [2, 3, 4]]).unwrap()
    }

    fn rand_mobius(rng: &mut ChaCha8Rng) -> Mobius {
        loop {
            let e = |r: &mut ChaCha8Rng| C::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            if let Ok(m) = Mobius::new([[e(rng), e(rng)], [e(rng), e(rng)]]) {
                if m.det().norm() > 0.1 {
                    return m;
                }
            }
        }
    }

    #[test]
    fn wheel_graph_counts() {
        let g = onshell_from_hypertree(&wheel()).unwrap();
        assert_eq!(g.d, 2);
        assert_eq!(g.n, 4);
        assert_eq!(g.edges.len(), 6);
        assert_eq!(g.genus(), 1);
        assert_eq!(g.cycle_basis().len(), 1);
    }

    #[test]
    fn single_triple_star() {
        let ht = Hypertree::new(3, vec![[1, 2, 3]]).unwrap();
        let g = onshell_from_hypertree(&ht).unwrap();
        assert_eq!(g.genus(), 0);
        assert!(g.cycle_basis().is_empty());
    }

    #[test]
    fn octahedron_genus_three() {
        let ht = Hypertree::new(6, vec![[1, 2, 3], [1, 4, 5], [3, 4, 6], [2, 5, 6]]).unwrap();
        let g = onshell_from_hypertree(&ht).unwrap();
        // Euler count: e - v + 1 = 12 - 10 + 1.
        assert_eq!(g.genus(), 3);
        assert_eq!(g.cycle_basis().len(), 3);
    }

    #[test]
    fn wheel_torus_coordinate_is_q3_power() {
        // Normalization (q2, q4, q1) = (0, inf, 1): the basis cycle
        // coordinate must be q3 up to orientation (a single power).
        let ht = wheel();
        for q3 in [0.7, 1.9, -2.3] {
            let q = [
                ProjPoint::real(1.0),
                ProjPoint::real(0.0),
                ProjPoint::real(q3),
                ProjPoint::infinity(),
            ];
            let inv = inverse_scattering(&ht, &q).unwrap();
            assert_eq!(inv.torus.z.len(), 1);
            let z = inv.torus.z[0];
            let q3c = C::new(q3, 0.0);
            let matches_plus = (z - q3c).norm() < 1e-9 * q3.abs().max(1.0);
            let matches_minus = (z - 1.0 / q3c).norm() < 1e-9 * (1.0 / q3.abs()).max(1.0);
            assert!(
                matches_plus || matches_minus,
                "wheel cycle coordinate {z} is not q3^+-1 for q3 = {q3}"
            );
        }
    }

    #[test]
    fn recovered_maps_hit_marked_points() {
        let ht = wheel();
        let q = [
            ProjPoint::real(1.0),
            ProjPoint::real(0.0),
            ProjPoint::real(2.5),
            ProjPoint::infinity(),
        ];
        let inv = inverse_scattering(&ht, &q).unwrap();
        let std = [ProjPoint::real(0.0), ProjPoint::real(1.0), ProjPoint::infinity()];
        for (b, t) in ht.triples().iter().enumerate() {
            for (k, &member) in t.iter().enumerate() {
                let img = inv.black_maps[b].apply(&std[k]);
                assert!(img.same_point(&q[member - 1], 1e-12));
            }
        }
    }

    #[test]
    fn torus_coordinates_are_mobius_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ht = Hypertree::new(6, vec![[1, 2, 3], [1, 4, 5], [3, 4, 6], [2, 5, 6]]).unwrap();
        for _ in 0..10 {
            let q: Vec<ProjPoint> = (0..6)
                .map(|i| ProjPoint::finite(C::new(i as f64 + rng.gen_range(0.0..0.5), rng.gen_range(0.1..0.9))))
                .collect();
            let m = rand_mobius(&mut rng);
            let mq: Vec<ProjPoint> = q.iter().map(|p| m.apply(p)).collect();
            let z1 = inverse_scattering(&ht, &q).unwrap().torus.z;
            let z2 = inverse_scattering(&ht, &mq).unwrap().torus.z;
            for (a, b) in z1.iter().zip(&z2) {
                assert!(
                    (a - b).norm() <= 1e-9 * a.norm().max(b.norm()),
                    "holonomy not Möbius invariant: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn wheel_pullback_is_reciprocal_lambda() {
        // In the 4-point chart the density is exactly 1/|lambda|: simple
        // poles at 0 and infinity with unit residue normalization.
        let ht = wheel();
        let chart = [[1usize, 2, 3, 4]];
        for q3 in [0.2, 0.5, 1.7, 6.0, 40.0] {
            let q = [
                ProjPoint::real(1.0),
                ProjPoint::real(0.0),
                ProjPoint::real(q3),
                ProjPoint::infinity(),
            ];
            let qq: Vec<ProjPoint> = q.to_vec();
            let lam = chart_values(&qq, &chart).unwrap()[0];
            let p = amplitude_pullback(&ht, &q, &chart).unwrap().finite().unwrap();
            assert!(
                (p * lam.norm() - 1.0).abs() < 1e-5,
                "pullback {p} at lambda {lam} is not 1/|lambda|"
            );
        }
    }

    #[test]
    fn repeated_chart_quadruples_flag_singular() {
        // A chart that reuses one quadruple has a rank-deficient Jacobian.
        let ht = Hypertree::new(6, vec![[1, 2, 3], [1, 4, 5], [3, 4, 6], [2, 5, 6]]).unwrap();
        let chart = [[1usize, 4, 5, 6], [1, 4, 5, 6], [3, 4, 5, 6]];
        let q: Vec<ProjPoint> = [0.3, 1.7, -0.9, 2.6, 4.1, -2.2]
            .iter()
            .map(|&x| ProjPoint::real(x))
            .collect();
        let out = amplitude_pullback(&ht, &q, &chart).unwrap();
        assert_eq!(out, PullbackValue::Singular);
    }

    #[test]
    fn pullback_mobius_invariance_and_richardson() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ht = wheel();
        let chart = [[1usize, 2, 3, 4]];
        let q: Vec<ProjPoint> = vec![
            ProjPoint::real(1.3),
            ProjPoint::real(-0.4),
            ProjPoint::real(2.2),
            ProjPoint::real(5.0),
        ];
        let p0 = amplitude_pullback(&ht, &q, &chart).unwrap().finite().unwrap();
        // Möbius moves of q leave the chart value and the density alone.
        for _ in 0..5 {
            let m = rand_mobius(&mut rng);
            let mq: Vec<ProjPoint> = q.iter().map(|p| m.apply(p)).collect();
            let p1 = amplitude_pullback(&ht, &mq, &chart).unwrap().finite().unwrap();
            assert!((p0 - p1).abs() < 1e-6 * p0.abs());
        }
        // Step-halving agreement.
        let ph = amplitude_pullback_with_step(&ht, &q, &chart, 5e-7).unwrap().finite().unwrap();
        assert!((p0 - ph).abs() < 1e-4 * p0.abs());
    }
}

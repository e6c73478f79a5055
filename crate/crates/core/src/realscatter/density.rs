//! Pushforward probability densities of the amplitude map.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::realscatter::charts::{
    angle_diff, chart_angles_in, component_mass, piece_frame, piece_triple,
    pieces_for_component, standard_chart, Piece,
};
use crate::realscatter::preimage::newton_chart;
use crate::realscatter::{ComponentIndex, MCurve};
use crate::scalars::C;

/// Invariant-measure density of a real divisor `(t_i, s_i)` against the
/// `t` chart: `|det [ t_i^(j-1) / s_i ]|`.
pub fn invariant_density(t: &[f64], s: &[f64]) -> Result<f64> {
    let g = t.len();
    if s.len() != g {
        return Err(Error::Invalid("t and s lengths differ".into()));
    }
    if s.iter().any(|&x| x == 0.0) {
        return Err(Error::Chart("branch-point collision: s = 0".into()));
    }
    for i in 0..g {
        for j in i + 1..g {
            if t[i] == t[j] {
                return Err(Error::Chart("repeated divisor coordinates".into()));
            }
        }
    }
    let m: Vec<Vec<C>> = (0..g)
        .map(|k| (0..g).map(|i| C::new(t[i].powi(k as i32) / s[i], 0.0)).collect())
        .collect();
    Ok(crate::hypertrees::cdet(&m).norm())
}

/// A sampled pushforward density on the angle-compactified chart.
///
/// Cells are centered at `u = -pi/2 + pi (j + 1/2) / resolution` per axis
/// (period pi); `lambda = tan(u)` and `rho_lambda = rho_u cos^2(u...)` per
/// axis converts to the density against the lambda volume.
#[derive(Clone, Debug)]
pub struct DensityGrid {
    pub genus: usize,
    pub resolution: usize,
    /// Cross-ratio index quadruples defining the chart axes.
    pub chart: Vec<[usize; 4]>,
    pub u_axis: Vec<f64>,
    pub lambda_axis: Vec<f64>,
    /// Row-major over `resolution^genus` cells, against the angle volume.
    pub rho_u: Vec<f64>,
    /// Against the lambda volume.
    pub rho_lambda: Vec<f64>,
    /// Quadrature mass of `rho_u` (should be 1 within tolerance).
    pub mass: f64,
    /// Cells where no chart piece produced a preimage.
    pub empty_cells: usize,
    /// Component mass used for normalization.
    pub normalization: f64,
}

fn axis(resolution: usize) -> Vec<f64> {
    (0..resolution)
        .map(|j| -PI / 2.0 + PI * (j as f64 + 0.5) / resolution as f64)
        .collect()
}

/// Density of the pushforward at one converged chart point:
/// `|det A| / |det du/dtheta|`, with the chart Jacobian by central
/// differences.
fn local_density(mc: &MCurve, piece: &Piece, theta: &[f64], chart: &[[usize; 4]]) -> Option<f64> {
    let g = mc.genus();
    let fr = piece_frame(mc, piece, theta).ok()?;
    let h = 1e-6;
    let mut jac = vec![vec![0.0; g]; g];
    for m in 0..g {
        let mut tp = theta.to_vec();
        let mut tm = theta.to_vec();
        tp[m] += h;
        tm[m] -= h;
        let up = chart_angles_in(mc, &piece_triple(mc, piece, &tp).ok()?, chart).ok()?;
        let um = chart_angles_in(mc, &piece_triple(mc, piece, &tm).ok()?, chart).ok()?;
        for k in 0..g {
            jac[k][m] = angle_diff(up[k], um[k]) / (2.0 * h);
        }
    }
    let det_u = match g {
        1 => jac[0][0],
        2 => jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0],
        _ => return None,
    };
    // A collapsing chart Jacobian means the cell center sits on a
    // contracted locus; its density is not resolvable at this scale.
    if det_u.abs() < 1e-9 {
        return None;
    }
    Some(fr.det_a().abs() / det_u.abs())
}

/// Sweep table of a piece: sample angles and their chart images, used to
/// seed the per-cell Newton solves.
fn sweep(
    mc: &MCurve,
    piece: &Piece,
    per_axis: usize,
    chart: &[[usize; 4]],
) -> Vec<(Vec<f64>, Vec<f64>)> {
    let g = mc.genus();
    let mut out = Vec::new();
    let thetas: Vec<Vec<f64>> = match (piece, g) {
        (Piece::Real { .. }, 1) => (0..per_axis)
            .map(|i| vec![2.0 * PI * (i as f64 + 0.13) / per_axis as f64])
            .collect(),
        (Piece::Real { ovals }, 2) => {
            let mut v = Vec::new();
            for i in 0..per_axis {
                for j in 0..per_axis {
                    v.push(vec![
                        2.0 * PI * (i as f64 + 0.13) / per_axis as f64,
                        2.0 * PI * (j as f64 + 0.47) / per_axis as f64,
                    ]);
                }
            }
            // Angles near pi on the unbounded oval park the divisor near
            // infinity; that neighborhood contracts under the chart, so
            // refine it geometrically to keep seeds available there.
            for (axis, &oval) in ovals.iter().enumerate() {
                if oval != mc.genus() + 1 {
                    continue;
                }
                for k in 1..=8 {
                    for sign in [-1.0, 1.0] {
                        let near = PI + sign * 0.5f64.powi(k);
                        for i in 0..per_axis {
                            let other = 2.0 * PI * (i as f64 + 0.29) / per_axis as f64;
                            let mut theta = vec![0.0; 2];
                            theta[axis] = near;
                            theta[1 - axis] = other;
                            v.push(theta);
                        }
                    }
                }
            }
            v
        }
        (Piece::Conj { .. }, _) => {
            let mut v = Vec::new();
            for i in 0..per_axis {
                for j in 0..per_axis {
                    v.push(vec![
                        -PI / 2.0 + PI * (i as f64 + 0.5) / per_axis as f64,
                        0.5 * PI * (j as f64 + 0.5) / per_axis as f64,
                    ]);
                }
            }
            v
        }
        _ => vec![],
    };
    for theta in thetas {
        if let Ok(triple) = piece_triple(mc, piece, &theta) {
            if let Ok(u) = chart_angles_in(mc, &triple, chart) {
                out.push((theta, u));
            }
        }
    }
    out
}

fn target_distance(u: &[f64], target: &[f64]) -> f64 {
    u.iter()
        .zip(target)
        .map(|(&a, &b)| angle_diff(a, b).abs())
        .fold(0.0f64, f64::max)
}

fn solve_cell(
    mc: &MCurve,
    pieces: &[Piece],
    sweeps: &[Vec<(Vec<f64>, Vec<f64>)>],
    carry: &mut [Option<Vec<f64>>],
    target: &[f64],
    chart: &[[usize; 4]],
) -> Option<(usize, Vec<f64>)> {
    // Continuation from the neighboring cell first, then sweep seeds.
    for (pi, piece) in pieces.iter().enumerate() {
        if let Some(seed) = carry[pi].clone() {
            if let Some((theta, _)) = newton_chart(mc, piece, &seed, target, chart, 60) {
                carry[pi] = Some(theta.clone());
                return Some((pi, theta));
            }
        }
    }
    for (pi, piece) in pieces.iter().enumerate() {
        let mut seeds: Vec<&(Vec<f64>, Vec<f64>)> = sweeps[pi].iter().collect();
        seeds.sort_by(|a, b| target_distance(&a.1, target).total_cmp(&target_distance(&b.1, target)));
        for (seed, _) in seeds.into_iter().take(10) {
            if let Some((theta, _)) = newton_chart(mc, piece, seed, target, chart, 120) {
                carry[pi] = Some(theta.clone());
                return Some((pi, theta));
            }
        }
        carry[pi] = None;
    }
    None
}

/// Reusable pointwise evaluator of a component's pushforward density:
/// the sweep tables and the normalizing mass are prepared once. The
/// evaluator is stateful: each query reseeds from the previous solution,
/// so walking a path of nearby targets continues the solution branch.
pub struct ComponentDensity {
    mc: MCurve,
    pieces: Vec<Piece>,
    sweeps: Vec<Vec<(Vec<f64>, Vec<f64>)>>,
    carry: Vec<Option<Vec<f64>>>,
    chart: Vec<[usize; 4]>,
    z: f64,
}

impl ComponentDensity {
    pub fn new(mc: &MCurve, component: ComponentIndex) -> Result<Self> {
        ComponentDensity::with_chart(mc, component, standard_chart(mc.genus()))
    }

    pub fn with_chart(
        mc: &MCurve,
        component: ComponentIndex,
        chart: Vec<[usize; 4]>,
    ) -> Result<Self> {
        let pieces = pieces_for_component(mc, component)?;
        let per_axis = if mc.genus() == 1 { 512 } else { 28 };
        let sweeps: Vec<_> = pieces.iter().map(|p| sweep(mc, p, per_axis, &chart)).collect();
        let nodes = if mc.genus() == 1 { 4096 } else { 220 };
        let z = component_mass(mc, component, nodes)?;
        let carry = vec![None; pieces.len()];
        Ok(ComponentDensity { mc: mc.clone(), pieces, sweeps, carry, chart, z })
    }

    pub fn normalization(&self) -> f64 {
        self.z
    }

    /// Forgets the continuation state.
    pub fn reset(&mut self) {
        self.carry = vec![None; self.pieces.len()];
    }

    /// Density at a chart point (angle coordinates), or `None` when no
    /// preimage was found there.
    pub fn at(&mut self, target_u: &[f64]) -> Option<f64> {
        let (pi, theta) = solve_cell(
            &self.mc,
            &self.pieces,
            &self.sweeps,
            &mut self.carry,
            target_u,
            &self.chart,
        )?;
        local_density(&self.mc, &self.pieces[pi], &theta, &self.chart).map(|d| d / self.z)
    }
}

/// One-shot pointwise density; prefer [`ComponentDensity`] for repeated
/// queries against the same component.
pub fn density_at(mc: &MCurve, component: ComponentIndex, target_u: &[f64]) -> Result<Option<f64>> {
    Ok(ComponentDensity::new(mc, component)?.at(target_u))
}

/// Pushforward density of a genus-1 component on the angle-compactified
/// line, normalized to total mass 1.
pub fn genus1_density(mc: &MCurve, component: ComponentIndex, resolution: usize) -> Result<DensityGrid> {
    if mc.genus() != 1 {
        return Err(Error::Invalid("genus1_density needs a genus-1 curve".into()));
    }
    let chart = standard_chart(1);
    let z = component_mass(mc, component, 4096)?;
    let pieces = pieces_for_component(mc, component)?;
    let sweeps: Vec<_> = pieces.iter().map(|p| sweep(mc, p, 512, &chart)).collect();
    let u_axis = axis(resolution);
    let mut rho_u = vec![0.0; resolution];
    let mut empty = 0usize;
    let mut carry: Vec<Option<Vec<f64>>> = vec![None; pieces.len()];
    for (j, &u) in u_axis.iter().enumerate() {
        match solve_cell(mc, &pieces, &sweeps, &mut carry, &[u], &chart) {
            Some((pi, theta)) => match local_density(mc, &pieces[pi], &theta, &chart) {
                Some(d) => rho_u[j] = d / z,
                None => empty += 1,
            },
            None => empty += 1,
        }
    }
    let du = PI / resolution as f64;
    let mass: f64 = rho_u.iter().sum::<f64>() * du;
    let rho_lambda: Vec<f64> = rho_u
        .iter()
        .zip(&u_axis)
        .map(|(&r, &u)| r * u.cos() * u.cos())
        .collect();
    Ok(DensityGrid {
        genus: 1,
        resolution,
        chart,
        lambda_axis: u_axis.iter().map(|&u| u.tan()).collect(),
        u_axis,
        rho_u,
        rho_lambda,
        mass,
        empty_cells: empty,
        normalization: z,
    })
}

/// Pushforward density of a genus-2 component on the angle-compactified
/// torus chart, normalized by the component mass. Cells are solved by
/// Newton continuation along rows with sweep-table reseeding. `chart`
/// overrides the two cross-ratio quadruples; the default is the standard
/// forgetful chart.
pub fn genus2_density_grid(
    mc: &MCurve,
    component: ComponentIndex,
    resolution: usize,
) -> Result<DensityGrid> {
    genus2_density_grid_in(mc, component, resolution, None)
}

pub fn genus2_density_grid_in(
    mc: &MCurve,
    component: ComponentIndex,
    resolution: usize,
    chart: Option<[[usize; 4]; 2]>,
) -> Result<DensityGrid> {
    if mc.genus() != 2 {
        return Err(Error::Invalid("genus2_density_grid needs a genus-2 curve".into()));
    }
    let chart: Vec<[usize; 4]> = match chart {
        Some(c) => c.to_vec(),
        None => standard_chart(2),
    };
    let z = component_mass(mc, component, 220)?;
    let pieces = pieces_for_component(mc, component)?;
    let sweeps: Vec<_> = pieces.iter().map(|p| sweep(mc, p, 28, &chart)).collect();
    let u_axis = axis(resolution);
    let mut rho_u = vec![0.0; resolution * resolution];
    let mut empty = 0usize;
    for (row, &u1) in u_axis.iter().enumerate() {
        let mut carry: Vec<Option<Vec<f64>>> = vec![None; pieces.len()];
        for (col, &u2) in u_axis.iter().enumerate() {
            let target = [u1, u2];
            match solve_cell(mc, &pieces, &sweeps, &mut carry, &target, &chart) {
                Some((pi, theta)) => match local_density(mc, &pieces[pi], &theta, &chart) {
                    Some(d) => rho_u[row * resolution + col] = d / z,
                    None => empty += 1,
                },
                None => empty += 1,
            }
        }
    }
    let du = PI / resolution as f64;
    let mass: f64 = rho_u.iter().sum::<f64>() * du * du;
    let rho_lambda: Vec<f64> = rho_u
        .iter()
        .enumerate()
        .map(|(idx, &r)| {
            let (row, col) = (idx / resolution, idx % resolution);
            let (c1, c2) = (u_axis[row].cos(), u_axis[col].cos());
            r * c1 * c1 * c2 * c2
        })
        .collect();
    Ok(DensityGrid {
        genus: 2,
        resolution,
        chart,
        lambda_axis: u_axis.iter().map(|&u| u.tan()).collect(),
        u_axis,
        rho_u,
        rho_lambda,
        mass,
        empty_cells: empty,
        normalization: z,
    })
}

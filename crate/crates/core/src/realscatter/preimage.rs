//! Per-component preimages of the amplitude map by damped Newton search
//! over the chart pieces.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mumford::MumfordTriple;
use crate::realscatter::charts::{
    angle_diff, chart_angles_in, piece_triple, pieces_for_component, standard_chart, Piece,
};
#[cfg(test)]
use crate::realscatter::charts::chart_angles;
use crate::realscatter::{ComponentIndex, MCurve};

/// Search outcome for one component.
#[derive(Clone, Debug)]
pub struct ComponentPreimage {
    pub component: ComponentIndex,
    /// `None` when no seed converged: the target may lie outside the
    /// component's image.
    pub triple: Option<MumfordTriple>,
    pub piece: Option<Piece>,
    pub theta: Vec<f64>,
    /// Max angle residual of the converged solution.
    pub residual: f64,
}

/// Chart angles at a piece point, or `None` on a degenerate evaluation.
fn eval_chart(mc: &MCurve, piece: &Piece, theta: &[f64], chart: &[[usize; 4]]) -> Option<Vec<f64>> {
    let triple = piece_triple(mc, piece, theta).ok()?;
    chart_angles_in(mc, &triple, chart).ok()
}

fn residual_vec(
    mc: &MCurve,
    piece: &Piece,
    theta: &[f64],
    target: &[f64],
    chart: &[[usize; 4]],
) -> Option<Vec<f64>> {
    let u = eval_chart(mc, piece, theta, chart)?;
    Some(u.iter().zip(target).map(|(&a, &b)| angle_diff(a, b)).collect())
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}

fn solve_small(j: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    match rhs.len() {
        1 => {
            if j[0][0].abs() < 1e-300 {
                return None;
            }
            Some(vec![rhs[0] / j[0][0]])
        }
        2 => {
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.abs() < 1e-300 {
                return None;
            }
            Some(vec![
                (rhs[0] * j[1][1] - rhs[1] * j[0][1]) / det,
                (j[0][0] * rhs[1] - j[1][0] * rhs[0]) / det,
            ])
        }
        _ => None,
    }
}

/// Damped Newton iteration on the chart equation `u(theta) = target`.
/// Returns the solved angles and the final residual.
pub(crate) fn newton_chart(
    mc: &MCurve,
    piece: &Piece,
    seed: &[f64],
    target: &[f64],
    chart: &[[usize; 4]],
    max_iter: usize,
) -> Option<(Vec<f64>, f64)> {
    let g = mc.genus();
    let mut theta = seed.to_vec();
    let mut res = residual_vec(mc, piece, &theta, target, chart)?;
    let mut best = norm_inf(&res);
    for _ in 0..max_iter {
        if best < 1e-11 {
            return Some((theta, best));
        }
        // Central-difference Jacobian d(residual)/d(theta).
        let h = 1e-6;
        let mut jac = vec![vec![0.0; g]; g];
        for m in 0..g {
            let mut tp = theta.clone();
            let mut tm = theta.clone();
            tp[m] += h;
            tm[m] -= h;
            let rp = residual_vec(mc, piece, &tp, target, chart)?;
            let rm = residual_vec(mc, piece, &tm, target, chart)?;
            for k in 0..g {
                jac[k][m] = (angle_diff(rp[k], rm[k])) / (2.0 * h);
            }
        }
        let step = solve_small(&jac, &res)?;
        // Damping: halve the step while the residual grows.
        let mut factor = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial: Vec<f64> = (0..g).map(|m| theta[m] - factor * step[m]).collect();
            if let Some(tr) = residual_vec(mc, piece, &trial, target, chart) {
                let n = norm_inf(&tr);
                if n < best {
                    theta = trial;
                    res = tr;
                    best = n;
                    improved = true;
                    break;
                }
            }
            factor *= 0.5;
        }
        if !improved {
            return (best < 1e-8).then(|| (theta, best));
        }
    }
    (best < 1e-8).then(|| (theta, best))
}

/// Seed grid for a piece: 64 points spread over its angle domain.
fn seeds_for(piece: &Piece, g: usize) -> Vec<Vec<f64>> {
    match (piece, g) {
        (Piece::Real { .. }, 1) => (0..64)
            .map(|i| vec![2.0 * PI * (i as f64 + 0.37) / 64.0])
            .collect(),
        (Piece::Real { .. }, 2) => {
            let mut out = Vec::with_capacity(64);
            for i in 0..8 {
                for j in 0..8 {
                    out.push(vec![
                        2.0 * PI * (i as f64 + 0.37) / 8.0,
                        2.0 * PI * (j as f64 + 0.61) / 8.0,
                    ]);
                }
            }
            out
        }
        (Piece::Conj { .. }, _) => {
            let mut out = Vec::with_capacity(64);
            for i in 0..8 {
                for j in 0..8 {
                    out.push(vec![
                        -PI / 2.0 + PI * (i as f64 + 0.5) / 8.0,
                        0.5 * PI * (j as f64 + 0.5) / 8.0,
                    ]);
                }
            }
            out
        }
        _ => vec![],
    }
}

/// Locates the preimage of a chart target (angle coordinates, period pi)
/// in each of the requested components. At most one class exists per
/// component; distinct converged classes in one component are reported as
/// an internal inconsistency.
pub fn find_preimages_real(
    mc: &MCurve,
    target: &[f64],
    components: &[ComponentIndex],
) -> Result<Vec<ComponentPreimage>> {
    let g = mc.genus();
    if target.len() != g {
        return Err(Error::Invalid(format!(
            "expected {g} chart angles, got {}",
            target.len()
        )));
    }
    let chart = standard_chart(g);
    let mut out = Vec::with_capacity(components.len());
    for &component in components {
        let mut found: Option<(Piece, Vec<f64>, f64, MumfordTriple)> = None;
        for piece in pieces_for_component(mc, component)? {
            for seed in seeds_for(&piece, g) {
                let Some((theta, res)) = newton_chart(mc, &piece, &seed, target, &chart, 100) else {
                    continue;
                };
                let Ok(triple) = piece_triple(mc, &piece, &theta) else {
                    continue;
                };
                match &found {
                    None => found = Some((piece.clone(), theta, res, triple)),
                    Some((_, _, _, prev)) => {
                        // Same class reached from another seed is fine;
                        // a genuinely different class would violate
                        // per-component injectivity.
                        let same = (&prev.u - &triple.u).norm_inf()
                            < 1e-5 * prev.u.norm_inf().max(1.0)
                            && (&prev.v - &triple.v).norm_inf()
                                < 1e-5 * prev.v.norm_inf().max(1.0);
                        if !same {
                            return Err(Error::Internal(format!(
                                "two distinct preimages in {component:?}: injectivity violated"
                            )));
                        }
                        if res < found.as_ref().unwrap().2 {
                            found = Some((piece.clone(), theta, res, triple));
                        }
                    }
                }
            }
        }
        out.push(match found {
            Some((piece, theta, residual, triple)) => ComponentPreimage {
                component,
                triple: Some(triple),
                piece: Some(piece),
                theta,
                residual,
            },
            None => ComponentPreimage {
                component,
                triple: None,
                piece: None,
                theta: vec![],
                residual: f64::INFINITY,
            },
        });
    }
    Ok(out)
}

/// All components of `Pic^(g+1)(R)` for the curve's genus (those whose
/// parity matches `g + 1`).
pub fn all_components(g: usize) -> Vec<ComponentIndex> {
    let want = (g + 1) % 2;
    (0u32..(1 << (g + 1)))
        .map(ComponentIndex)
        .filter(|c| c.parity() == want)
        .collect()
}

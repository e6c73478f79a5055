//! Spinor factorization of massless momentum matrices on a diagram.
//!
//! Each momentum is a 2x2 matrix of rank at most 1 and factors as an outer
//! product `p = lambda lambda~^T`. At a trivalent vertex with momentum
//! conservation and no two proportional momenta, either all incident
//! `lambda` or all incident `lambda~` are proportional; the alternative
//! fixes the ruling, i.e. the 0/1 degree coloring of the vertex.

use crate::error::{Error, Result};
use crate::scalars::C;

pub type Mat2 = [[C; 2]; 2];

/// Momenta attached to the edges (internal and legs) of a diagram, plus the
/// incidence lists of its vertices. Each vertex entry is `(edge, sign)`
/// with signs encoding orientation so that the per-vertex conservation law
/// reads `sum sign * p = 0`.
#[derive(Clone, Debug)]
pub struct MomentumDiagram {
    pub momenta: Vec<Mat2>,
    pub vertices: Vec<Vec<(usize, f64)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexColor {
    /// Degree 1: the first-factor spinors vary over the vertex.
    Black,
    /// Degree 0: the first-factor spinors are all proportional.
    White,
}

#[derive(Clone, Debug)]
pub struct SpinorFactorization {
    /// Per-edge pair `(lambda, lambda~)` with `p = lambda lambda~^T`.
    pub spinors: Vec<([C; 2], [C; 2])>,
    pub colors: Vec<VertexColor>,
}

fn mat_norm(p: &Mat2) -> f64 {
    p.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

fn det2(p: &Mat2) -> C {
    p[0][0] * p[1][1] - p[0][1] * p[1][0]
}

fn factor_rank_one(p: &Mat2, edge: usize) -> Result<([C; 2], [C; 2])> {
    let scale = mat_norm(p);
    if scale == 0.0 {
        return Err(Error::Invalid(format!("momentum {edge} is zero")));
    }
    if det2(p).norm() > 1e-9 * scale * scale {
        return Err(Error::Invalid(format!(
            "momentum {edge} is not massless: |det| = {:.3e} exceeds tolerance",
            det2(p).norm()
        )));
    }
    // Dominant entry as pivot: lambda from its column, lambda~ from its row
    // scaled so the outer product reconstructs the pivot exactly.
    let (mut pi, mut pj) = (0, 0);
    for i in 0..2 {
        for j in 0..2 {
            if p[i][j].norm() > p[pi][pj].norm() {
                (pi, pj) = (i, j);
            }
        }
    }
    let lambda = [p[0][pj], p[1][pj]];
    let lambda_t = [p[pi][0] / lambda[pi], p[pi][1] / lambda[pi]];
    Ok((lambda, lambda_t))
}

fn proportional(a: &[C; 2], b: &[C; 2], tol: f64) -> bool {
    let det = a[0] * b[1] - b[0] * a[1];
    let na = a[0].norm().max(a[1].norm());
    let nb = b[0].norm().max(b[1].norm());
    det.norm() <= tol * na * nb
}

/// Factorizes every momentum and colors the vertices by their ruling.
pub fn spinor_factorize(diag: &MomentumDiagram) -> Result<SpinorFactorization> {
    // Conservation first, reported per vertex.
    for (vi, inc) in diag.vertices.iter().enumerate() {
        let mut sum = [[C::new(0.0, 0.0); 2]; 2];
        let mut scale = 0.0f64;
        for &(e, sign) in inc {
            let p = diag
                .momenta
                .get(e)
                .ok_or_else(|| Error::Invalid(format!("vertex {vi} references unknown edge {e}")))?;
            scale = scale.max(mat_norm(p));
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] += p[i][j] * sign;
                }
            }
        }
        if mat_norm(&sum) > 1e-9 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Invalid(format!(
                "momentum conservation violated at vertex {vi}: residual {:.3e}",
                mat_norm(&sum)
            )));
        }
    }

    let spinors: Vec<([C; 2], [C; 2])> = diag
        .momenta
        .iter()
        .enumerate()
        .map(|(e, p)| factor_rank_one(p, e))
        .collect::<Result<_>>()?;

    let mut colors = Vec::with_capacity(diag.vertices.len());
    for (vi, inc) in diag.vertices.iter().enumerate() {
        let ls: Vec<&[C; 2]> = inc.iter().map(|&(e, _)| &spinors[e].0).collect();
        let lts: Vec<&[C; 2]> = inc.iter().map(|&(e, _)| &spinors[e].1).collect();
        let all_prop = |v: &[&[C; 2]]| -> bool {
            v.iter()
                .zip(v.iter().skip(1))
                .all(|(a, b)| proportional(a, b, 1e-8))
        };
        let first_prop = all_prop(&ls);
        let second_prop = all_prop(&lts);
        // Two proportional momenta at the vertex would make both rulings
        // degenerate at once.
        if first_prop && second_prop && inc.len() > 1 {
            return Err(Error::Degenerate(format!(
                "vertex {vi} has proportional momenta; ruling is ambiguous"
            )));
        }
        if first_prop {
            colors.push(VertexColor::White);
        } else if second_prop {
            colors.push(VertexColor::Black);
        } else {
            return Err(Error::Invalid(format!(
                "vertex {vi} admits no consistent ruling; residues are not on one quadric line"
            )));
        }
    }
    Ok(SpinorFactorization { spinors, colors })
}

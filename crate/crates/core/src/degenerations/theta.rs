//! Oda–Seshadri theta vectors of polarized multidegrees.

use num_traits::Zero;

use crate::degenerations::{DualGraph, Multidegree};
use crate::error::{Error, Result};
use crate::scalars::Fraction;

/// Exact rational theta parameters, one per vertex:
/// `theta_i = -d_i + 4 l_i / (d n) + n (e_i - 2) / (2 d)`,
/// with `e_i` the edge valence (loops twice) and `l_i` the leg count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaVector {
    pub theta: Vec<Fraction>,
}

pub fn theta_vector(graph: &DualGraph, deg: &Multidegree) -> Result<ThetaVector> {
    if deg.d.len() != graph.vertex_count() {
        return Err(Error::Invalid("multidegree length differs from vertex count".into()));
    }
    if graph.vertices().iter().any(|v| v.genus != 0) {
        return Err(Error::Invalid(
            "theta vector is defined for graphs with all rational vertices".into(),
        ));
    }
    let d = deg.total();
    let n = graph.n_marked() as i64;
    if d <= 0 || n == 0 {
        return Err(Error::Invalid(format!("theta vector needs d > 0 and n > 0, got d={d}, n={n}")));
    }
    let theta = (0..graph.vertex_count())
        .map(|i| {
            let li = graph.vertices()[i].legs.len() as i64;
            let ei = graph.edge_valence(i) as i64;
            Fraction::new((-deg.d[i]).into(), 1.into())
                + Fraction::new((4 * li).into(), (d * n).into())
                + Fraction::new((n * (ei - 2)).into(), (2 * d).into())
        })
        .collect();
    Ok(ThetaVector { theta })
}

impl ThetaVector {
    pub fn sum(&self) -> Fraction {
        self.theta.iter().fold(Fraction::zero(), |a, b| a + b)
    }
}

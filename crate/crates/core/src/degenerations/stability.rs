//! A-stability of multidegrees and component enumeration for compactified
//! Jacobians.
//!
//! A multidegree is stable when every proper connected subcurve `Y`
//! satisfies `d_Y > g_Y - 1 + (2/n) n_Y` and semistable when the inequality
//! is allowed to be an equality. All comparisons use exact rationals.

use crate::degenerations::{DualGraph, Multidegree};
use crate::error::{Error, Result};
use crate::scalars::Fraction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityReport {
    Stable,
    /// Equality holds on the witness subcurve.
    StrictlySemistable { witness: Vec<usize> },
    /// The inequality fails on the witness subcurve.
    Unstable { witness: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityKind {
    Stable,
    Semistable,
}

pub fn check_stability(graph: &DualGraph, deg: &Multidegree) -> Result<StabilityReport> {
    if deg.d.len() != graph.vertex_count() {
        return Err(Error::Invalid("multidegree length differs from vertex count".into()));
    }
    let n = graph.n_marked() as i64;
    let mut equality_witness: Option<Vec<usize>> = None;
    for subset in graph.connected_proper_subsets()? {
        let s = graph.subcurve_stats(&subset, deg);
        let lhs = Fraction::new(s.degree.into(), 1.into());
        let rhs = Fraction::new((s.genus - 1).into(), 1.into())
            + Fraction::new((2 * s.legs as i64).into(), n.into());
        if lhs < rhs {
            return Ok(StabilityReport::Unstable { witness: subset });
        }
        if lhs == rhs && equality_witness.is_none() {
            equality_witness = Some(subset);
        }
    }
    Ok(match equality_witness {
        Some(witness) => StabilityReport::StrictlySemistable { witness },
        None => StabilityReport::Stable,
    })
}

/// All multidegrees of total degree `d` of the requested kind, with each
/// entry searched over the window `[-d, 2d]`, sorted lexicographically.
pub fn enumerate_multidegrees(
    graph: &DualGraph,
    d: i64,
    kind: StabilityKind,
) -> Result<Vec<Multidegree>> {
    let v = graph.vertex_count();
    if v > 12 {
        return Err(Error::Capacity(format!(
            "multidegree enumeration supports at most 12 vertices, got {v}"
        )));
    }
    let lo = -d;
    let hi = 2 * d;
    let mut out = Vec::new();
    let mut current = vec![0i64; v];

    fn rec(
        graph: &DualGraph,
        kind: StabilityKind,
        lo: i64,
        hi: i64,
        d: i64,
        idx: usize,
        sum: i64,
        current: &mut Vec<i64>,
        out: &mut Vec<Multidegree>,
    ) -> Result<()> {
        let v = current.len();
        if idx == v {
            if sum != d {
                return Ok(());
            }
            let md = Multidegree::new(current.clone());
            let keep = match (check_stability(graph, &md)?, kind) {
                (StabilityReport::Stable, _) => true,
                (StabilityReport::StrictlySemistable { .. }, StabilityKind::Semistable) => true,
                _ => false,
            };
            if keep {
                out.push(md);
            }
            return Ok(());
        }
        let remaining = (v - idx - 1) as i64;
        for di in lo..=hi {
            let s = sum + di;
            // The tail must be able to reach d.
            if s + remaining * lo > d || s + remaining * hi < d {
                continue;
            }
            current[idx] = di;
            rec(graph, kind, lo, hi, d, idx + 1, s, current, out)?;
        }
        current[idx] = 0;
        Ok(())
    }

    rec(graph, kind, lo, hi, d, 0, 0, &mut current, &mut out)?;
    out.sort();
    Ok(out)
}

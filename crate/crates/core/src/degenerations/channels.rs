//! Channel factorizations: separations of a curve by one or two nodes.

use crate::degenerations::{DualGraph, Multidegree};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoChannelCase {
    /// `n_A = g_A + 3`, `n_B = g_B + 1` up to swapping the sides.
    CaseI,
    /// `n_A = g_A + 2`, `n_B = g_B + 2`.
    CaseII,
    Invalid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutKind {
    OneChannel,
    TwoChannel(TwoChannelCase),
}

/// A separation of the diagram into two connected sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelCut {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub kind: CutKind,
}

/// All bridges (one-channel) and all two-edge separations of the diagram,
/// the latter classified by marked-point counts. A separation where one
/// side is a single rational vertex of degree 0 carrying one marked point
/// is not a factorization and is skipped.
pub fn channel_factorizations(graph: &DualGraph, deg: &Multidegree) -> Result<Vec<ChannelCut>> {
    let v = graph.vertex_count();
    let mut cuts = Vec::new();
    for side_a in graph.connected_proper_subsets()? {
        if !side_a.contains(&0) {
            continue; // canonical side to avoid double counting
        }
        let side_b: Vec<usize> = (0..v).filter(|x| !side_a.contains(x)).collect();
        if !graph.subset_connected(&side_b) {
            continue;
        }
        let sa = graph.subcurve_stats(&side_a, deg);
        let sb = graph.subcurve_stats(&side_b, deg);
        debug_assert_eq!(sa.cross_edges, sb.cross_edges);
        let kind = match sa.cross_edges {
            1 => CutKind::OneChannel,
            2 => {
                let excluded = |side: &[usize], s: &crate::degenerations::SubcurveStats| {
                    side.len() == 1
                        && s.genus == 0
                        && s.degree == 0
                        && s.legs == 1
                };
                if excluded(&side_a, &sa) || excluded(&side_b, &sb) {
                    continue;
                }
                let pa = sa.legs as i64 - sa.genus;
                let pb = sb.legs as i64 - sb.genus;
                let case = if (pa, pb) == (3, 1) || (pa, pb) == (1, 3) {
                    TwoChannelCase::CaseI
                } else if (pa, pb) == (2, 2) {
                    TwoChannelCase::CaseII
                } else {
                    TwoChannelCase::Invalid
                };
                CutKind::TwoChannel(case)
            }
            _ => continue,
        };
        cuts.push(ChannelCut { side_a, side_b, kind });
    }
    Ok(cuts)
}

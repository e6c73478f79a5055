//! The sixteen special divisor classes of a genus-2 curve and their
//! distribution among the real Picard components.
//!
//! With `P = p1 + ... + p5` and `K` the canonical class, the classes are
//! `delta = P - K`, `delta_i = K + p_i` and `delta_ij = P - p_i - p_j`.
//! Since `K` is a multiple of the fiber class it has even degree on every
//! oval, so components follow from marked-point parities alone. In type B
//! a class is real only when it involves both halves of the conjugate
//! pair or neither.

use crate::error::{Error, Result};
use crate::realscatter::{ComponentIndex, MCurve, MarkedPlace};

/// One of the sixteen classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialPointEntry {
    /// `None` for delta, `Some([i])` for delta_i, `Some([i, j])` for
    /// delta_ij (1-based marked indices).
    pub indices: Option<Vec<usize>>,
    /// Real component, or `None` when the class is not real (type B
    /// classes through exactly one half of the conjugate pair).
    pub component: Option<ComponentIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialPointsTable {
    pub entries: Vec<SpecialPointEntry>,
}

impl SpecialPointsTable {
    /// All entries assigned to the given component.
    pub fn in_component(&self, c: ComponentIndex) -> Vec<&SpecialPointEntry> {
        self.entries.iter().filter(|e| e.component == Some(c)).collect()
    }

    pub fn non_real(&self) -> Vec<&SpecialPointEntry> {
        self.entries.iter().filter(|e| e.component.is_none()).collect()
    }

    pub fn get(&self, indices: Option<&[usize]>) -> Option<&SpecialPointEntry> {
        self.entries
            .iter()
            .find(|e| e.indices.as_deref() == indices)
    }
}

fn is_real_subset(mc: &MCurve, marked: &[usize]) -> bool {
    // A set of marked points is conjugation-invariant when each conjugate
    // half appears together with its partner.
    marked.iter().all(|&i| match mc.places()[i - 1] {
        MarkedPlace::Real { .. } => true,
        MarkedPlace::Conj { partner } => marked.contains(&(partner + 1)),
    })
}

/// Component assignment of the sixteen special classes of a genus-2
/// M-curve (both placements).
pub fn special_points_table(mc: &MCurve) -> Result<SpecialPointsTable> {
    if mc.genus() != 2 {
        return Err(Error::Invalid("the special-point table needs genus 2".into()));
    }
    let n = 5usize;
    let parity_p = mc.marked_parity(&(0..n).collect::<Vec<_>>());

    let mut entries = Vec::with_capacity(16);
    // delta = P - K: parity of P.
    entries.push(SpecialPointEntry { indices: None, component: Some(parity_p) });
    // delta_i = K + p_i.
    for i in 1..=n {
        let component = if is_real_subset(mc, &[i]) {
            Some(mc.marked_parity(&[i - 1]))
        } else {
            None
        };
        entries.push(SpecialPointEntry { indices: Some(vec![i]), component });
    }
    // delta_ij = P - p_i - p_j.
    for i in 1..=n {
        for j in i + 1..=n {
            let component = if is_real_subset(mc, &[i, j]) {
                Some(
                    parity_p
                        .xor(mc.marked_parity(&[i - 1]))
                        .xor(mc.marked_parity(&[j - 1])),
                )
            } else {
                None
            };
            entries.push(SpecialPointEntry { indices: Some(vec![i, j]), component });
        }
    }
    debug_assert_eq!(entries.len(), 16);
    Ok(SpecialPointsTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realscatter::testutil::*;

    fn comp(ovals: &[usize]) -> Option<ComponentIndex> {
        Some(ComponentIndex::from_ovals(ovals))
    }

    #[test]
    fn type_a_table_matches_worked_distribution() {
        let mc = genus2_type_a();
        let t = special_points_table(&mc).unwrap();
        let h = ComponentIndex::huisman(2);

        // Pic_H: delta, delta_45, delta_34, delta_35.
        assert_eq!(t.get(None).unwrap().component, Some(h));
        for ij in [[4, 5], [3, 4], [3, 5]] {
            assert_eq!(t.get(Some(&ij)).unwrap().component, Some(h), "delta_{ij:?}");
        }
        // Pic_{1}: delta_1, delta_23, delta_24, delta_25.
        for idx in [vec![1], vec![2, 3], vec![2, 4], vec![2, 5]] {
            assert_eq!(t.get(Some(&idx)).unwrap().component, comp(&[1]), "{idx:?}");
        }
        // Pic_{2}: delta_2, delta_13, delta_14, delta_15.
        for idx in [vec![2], vec![1, 3], vec![1, 4], vec![1, 5]] {
            assert_eq!(t.get(Some(&idx)).unwrap().component, comp(&[2]), "{idx:?}");
        }
        // Pic_{3}: delta_3, delta_4, delta_5, delta_12.
        for idx in [vec![3], vec![4], vec![5], vec![1, 2]] {
            assert_eq!(t.get(Some(&idx)).unwrap().component, comp(&[3]), "{idx:?}");
        }
        assert!(t.non_real().is_empty());
        // Four classes per component.
        for c in [h, ComponentIndex::from_ovals(&[1]), ComponentIndex::from_ovals(&[2]), ComponentIndex::from_ovals(&[3])] {
            assert_eq!(t.in_component(c).len(), 4);
        }
    }

    #[test]
    fn type_b_table_flags_eight_non_real() {
        let mc = genus2_type_b();
        let t = special_points_table(&mc).unwrap();
        let h = ComponentIndex::huisman(2);

        assert_eq!(t.get(None).unwrap().component, Some(h));
        assert_eq!(t.get(Some(&[4, 5])).unwrap().component, Some(h));
        assert_eq!(t.get(Some(&[1])).unwrap().component, comp(&[1]));
        assert_eq!(t.get(Some(&[2, 3])).unwrap().component, comp(&[1]));
        assert_eq!(t.get(Some(&[2])).unwrap().component, comp(&[2]));
        assert_eq!(t.get(Some(&[1, 3])).unwrap().component, comp(&[2]));
        assert_eq!(t.get(Some(&[3])).unwrap().component, comp(&[3]));
        assert_eq!(t.get(Some(&[1, 2])).unwrap().component, comp(&[3]));
        // The other eight involve exactly one conjugate half.
        let non_real = t.non_real();
        assert_eq!(non_real.len(), 8);
        for e in non_real {
            let idx = e.indices.as_ref().unwrap();
            assert_eq!(
                idx.iter().filter(|&&i| i == 4 || i == 5).count() % 2,
                1,
                "{idx:?} flagged non-real but conjugation-even"
            );
        }
    }

    #[test]
    fn relabeling_equivariance() {
        // Swapping the two points on oval 3 (indices 4 and 5 in type A)
        // permutes the table consistently.
        let mc = genus2_type_a();
        let swapped = MCurve::new(
            &[0.0, 1.0, 2.0, 3.0, 4.0],
            &[
                crate::realscatter::MarkedSpec::Real { x: 0.3, sheet: 1 },
                crate::realscatter::MarkedSpec::Real { x: 2.4, sheet: -1 },
                crate::realscatter::MarkedSpec::Real { x: 4.5, sheet: 1 },
                crate::realscatter::MarkedSpec::Real { x: 7.0, sheet: 1 },
                crate::realscatter::MarkedSpec::Real { x: 5.5, sheet: -1 },
            ],
            crate::realscatter::PlacementType::A,
        )
        .unwrap();
        let t1 = special_points_table(&mc).unwrap();
        let t2 = special_points_table(&swapped).unwrap();
        let perm = |i: usize| match i {
            4 => 5,
            5 => 4,
            other => other,
        };
        for e in &t1.entries {
            let mapped: Option<Vec<usize>> = e
                .indices
                .as_ref()
                .map(|v| {
                    let mut m: Vec<usize> = v.iter().map(|&i| perm(i)).collect();
                    m.sort_unstable();
                    m
                });
            let other = t2.get(mapped.as_deref()).unwrap();
            assert_eq!(other.component, e.component, "{:?} vs {mapped:?}", e.indices);
        }
    }
}

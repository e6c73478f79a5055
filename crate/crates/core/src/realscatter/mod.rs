//! Real M-curves: ovals, Picard component indexing, Huisman
//! parametrization, pushforward densities and elementary transformations.
//!
//! An M-curve here is `y^2 = f(x)` with all `2g + 1` roots real, so the
//! real locus has the maximal `g + 1` ovals: `g` bounded ones over
//! `[r_1, r_2], ..., [r_(2g-1), r_(2g)]` and one unbounded oval through
//! infinity over `[r_(2g+1), inf)`. Marked points follow one of two
//! placements: all real with three on the unbounded oval (type A), or one
//! per oval plus a complex-conjugate pair (type B).

mod charts;
mod cremona;
mod density;
mod montecarlo;
mod preimage;
mod special;

pub use charts::{chart_angles, chart_angles_in, pieces_for_component, piece_frame, piece_mass, standard_chart, Piece, PieceFrame};
pub use cremona::{configs_match_mod_mobius, elementary_action_divisor, elementary_cremona};
pub use density::{density_at, genus1_density, genus2_density_grid, genus2_density_grid_in, invariant_density, ComponentDensity, DensityGrid};
pub use montecarlo::{montecarlo_pushforward, Histogram};
pub use preimage::{all_components, find_preimages_real, ComponentPreimage};
pub use special::{special_points_table, SpecialPointEntry, SpecialPointsTable};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mumford::{mumford_from_points, HyperellipticCurve, MarkedPoint, MumfordTriple};
use crate::scalars::C;

/// Placement of the marked points, following the two real configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlacementType {
    A,
    B,
}

/// A connected component of the real locus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oval {
    /// 1-based index; ovals are ordered by their intervals.
    pub index: usize,
    pub lo: f64,
    /// `None` for the unbounded oval through infinity.
    pub hi: Option<f64>,
}

/// A real point of the curve, or the point at infinity (which lies on the
/// last oval).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OvalPoint {
    Finite { x: f64, sheet: i8 },
    Infinity,
}

/// Index of a connected component of `Pic^d(R)`: the set of ovals meeting
/// a real divisor with odd multiplicity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentIndex(pub u32);

impl ComponentIndex {
    pub fn empty() -> Self {
        ComponentIndex(0)
    }

    pub fn from_ovals(ovals: &[usize]) -> Self {
        let mut bits = 0u32;
        for &o in ovals {
            assert!(o >= 1, "ovals are 1-based");
            bits ^= 1 << (o - 1);
        }
        ComponentIndex(bits)
    }

    /// The component containing one point on every oval.
    pub fn huisman(genus: usize) -> Self {
        ComponentIndex((1 << (genus + 1)) - 1)
    }

    pub fn contains(&self, oval: usize) -> bool {
        self.0 & (1 << (oval - 1)) != 0
    }

    pub fn xor(&self, other: ComponentIndex) -> ComponentIndex {
        ComponentIndex(self.0 ^ other.0)
    }

    pub fn ovals(&self) -> Vec<usize> {
        (1..=32).filter(|&o| self.contains(o)).collect()
    }

    pub fn parity(&self) -> usize {
        self.0.count_ones() as usize % 2
    }
}

impl std::fmt::Debug for ComponentIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pic_{{{}}}", self.ovals().iter().map(|o| o.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Placement data of one marked point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MarkedPlace {
    Real { x: f64, sheet: i8, oval: usize },
    /// One half of a complex-conjugate pair; `partner` is the 0-based
    /// index of the other half.
    Conj { partner: usize },
}

/// A real M-curve with placed marked points.
#[derive(Clone, Debug)]
pub struct MCurve {
    curve: HyperellipticCurve,
    roots: Vec<f64>,
    placement: PlacementType,
    places: Vec<MarkedPlace>,
}

/// JSON schema for curve input: real roots plus marked points given either
/// as `{x, sheet}` or as one half of a conjugate pair `{re, im, conj_pair}`
/// (1-based partner index).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveSpec {
    pub roots: Vec<f64>,
    pub marked: Vec<MarkedSpec>,
    #[serde(rename = "type")]
    pub placement: PlacementType,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MarkedSpec {
    Real { x: f64, sheet: i8 },
    Conj { re: f64, im: f64, conj_pair: usize },
}

impl MCurve {
    /// Builds and validates the curve: sorted distinct real roots, marked
    /// points on their ovals with the type A or B placement.
    pub fn new(roots_in: &[f64], marked: &[MarkedSpec], placement: PlacementType) -> Result<Self> {
        let mut roots = roots_in.to_vec();
        roots.sort_by(f64::total_cmp);
        if roots.len() < 3 || roots.len() % 2 == 0 {
            return Err(Error::Invalid(format!(
                "an M-curve of genus g needs 2g+1 real roots, got {}",
                roots.len()
            )));
        }
        let genus = (roots.len() - 1) / 2;
        let n = genus + 3;
        if marked.len() != n {
            return Err(Error::Invalid(format!(
                "expected {n} marked points for genus {genus}, got {}",
                marked.len()
            )));
        }
        let croots: Vec<C> = roots.iter().map(|&x| C::new(x, 0.0)).collect();
        let bare = HyperellipticCurve::from_roots(&croots, vec![])?;

        let mut places = Vec::with_capacity(n);
        let mut points = Vec::with_capacity(n);
        for (i, spec) in marked.iter().enumerate() {
            match *spec {
                MarkedSpec::Real { x, sheet } => {
                    if !(sheet == 1 || sheet == -1) {
                        return Err(Error::Invalid(format!("marked point {}: sheet must be +-1", i + 1)));
                    }
                    let oval = oval_of(&roots, x).ok_or_else(|| {
                        Error::Invalid(format!(
                            "marked point {} at x = {x} is off the real locus (f < 0)",
                            i + 1
                        ))
                    })?;
                    let y = bare.f().eval(&C::new(x, 0.0)).re.max(0.0).sqrt() * sheet as f64;
                    places.push(MarkedPlace::Real { x, sheet, oval });
                    points.push(MarkedPoint { z: C::new(x, 0.0), y: C::new(y, 0.0) });
                }
                MarkedSpec::Conj { re, im, conj_pair } => {
                    if im == 0.0 {
                        return Err(Error::Invalid(format!(
                            "marked point {}: conjugate-pair member must be off the real axis",
                            i + 1
                        )));
                    }
                    let partner = conj_pair
                        .checked_sub(1)
                        .filter(|&p| p < n && p != i)
                        .ok_or_else(|| Error::Invalid(format!("marked point {}: bad conj_pair", i + 1)))?;
                    let z = C::new(re, im);
                    places.push(MarkedPlace::Conj { partner });
                    points.push(MarkedPoint { z, y: bare.f().eval(&z).sqrt() });
                }
            }
        }
        // Conjugate pairs must be mutual and actually conjugate.
        for i in 0..n {
            if let MarkedPlace::Conj { partner } = places[i] {
                match places[partner] {
                    MarkedPlace::Conj { partner: back } if back == i => {}
                    _ => {
                        return Err(Error::Invalid(format!(
                            "marked points {} and {} are not a mutual conjugate pair",
                            i + 1,
                            partner + 1
                        )))
                    }
                }
                if i < partner {
                    let (a, b) = (points[i].z, points[partner].z);
                    if (a - b.conj()).norm() > 1e-12 * a.norm().max(1.0) {
                        return Err(Error::Invalid(format!(
                            "marked points {} and {} are not complex conjugate",
                            i + 1,
                            partner + 1
                        )));
                    }
                    // Conjugate sheets: y values conjugate as well.
                    points[partner].y = points[i].y.conj();
                }
            }
        }

        // Placement gates.
        let oval_at = |i: usize| match places[i] {
            MarkedPlace::Real { oval, .. } => Some(oval),
            MarkedPlace::Conj { .. } => None,
        };
        for i in 0..genus + 1 {
            if oval_at(i) != Some(i + 1) {
                return Err(Error::Invalid(format!(
                    "marked point {} must be real on oval {}",
                    i + 1,
                    i + 1
                )));
            }
        }
        match placement {
            PlacementType::A => {
                for i in [genus + 1, genus + 2] {
                    if oval_at(i) != Some(genus + 1) {
                        return Err(Error::Invalid(format!(
                            "type A: marked point {} must lie on the last oval",
                            i + 1
                        )));
                    }
                }
            }
            PlacementType::B => {
                let ok = matches!(places[genus + 1], MarkedPlace::Conj { partner } if partner == genus + 2)
                    && matches!(places[genus + 2], MarkedPlace::Conj { partner } if partner == genus + 1);
                if !ok {
                    return Err(Error::Invalid(
                        "type B: the last two marked points must form the conjugate pair".into(),
                    ));
                }
            }
        }

        let curve = bare.with_marked(points)?;
        Ok(MCurve { curve, roots, placement, places })
    }

    pub fn from_spec(spec: &CurveSpec) -> Result<Self> {
        MCurve::new(&spec.roots, &spec.marked, spec.placement)
    }

    pub fn curve(&self) -> &HyperellipticCurve {
        &self.curve
    }

    pub fn genus(&self) -> usize {
        self.curve.genus()
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn placement(&self) -> PlacementType {
        self.placement
    }

    pub fn places(&self) -> &[MarkedPlace] {
        &self.places
    }

    /// The `g + 1` ovals of the real locus.
    pub fn ovals(&self) -> Vec<Oval> {
        let g = self.genus();
        let mut out = Vec::with_capacity(g + 1);
        for k in 0..g {
            out.push(Oval { index: k + 1, lo: self.roots[2 * k], hi: Some(self.roots[2 * k + 1]) });
        }
        out.push(Oval { index: g + 1, lo: self.roots[2 * g], hi: None });
        out
    }

    /// Parity vector of the marked-point prefix `I` (real points add their
    /// oval, conjugate halves add nothing).
    pub fn marked_parity(&self, indices: &[usize]) -> ComponentIndex {
        let mut idx = ComponentIndex::empty();
        for &i in indices {
            if let MarkedPlace::Real { oval, .. } = self.places[i] {
                idx = idx.xor(ComponentIndex::from_ovals(&[oval]));
            }
        }
        idx
    }

    /// Divisor class through a point on each of the first `g` ovals plus
    /// the implicit point at infinity on the last: the Huisman chart.
    pub fn huisman_point(&self, zs: &[OvalPoint]) -> Result<MumfordTriple> {
        let g = self.genus();
        if zs.len() != g {
            return Err(Error::Invalid(format!("expected {g} finite points, got {}", zs.len())));
        }
        let mut ts = Vec::with_capacity(g);
        let mut ss = Vec::with_capacity(g);
        for (k, p) in zs.iter().enumerate() {
            match *p {
                OvalPoint::Infinity => {
                    return Err(Error::Invalid("Huisman chart points must be finite".into()))
                }
                OvalPoint::Finite { x, sheet } => {
                    let oval = oval_of(&self.roots, x).ok_or_else(|| {
                        Error::Invalid(format!("point {k} at x = {x} is off the real locus"))
                    })?;
                    if oval != k + 1 {
                        return Err(Error::Invalid(format!(
                            "point {} must lie on oval {}, found oval {oval}",
                            k + 1,
                            k + 1
                        )));
                    }
                    ts.push(C::new(x, 0.0));
                    let y = self.curve.f().eval(&C::new(x, 0.0)).re.max(0.0).sqrt();
                    ss.push(C::new(y * sheet as f64, 0.0));
                }
            }
        }
        mumford_from_points(&self.curve, &ts, &ss)
    }

    /// Component of a real divisor given by its points (and the point at
    /// infinity, which counts on the last oval).
    pub fn component_of_divisor(&self, points: &[DivisorPart], d: i64) -> Result<ComponentIndex> {
        let mut idx = ComponentIndex::empty();
        let mut total = 0i64;
        for p in points {
            match *p {
                DivisorPart::Real { x, mult } => {
                    let oval = oval_of(&self.roots, x).ok_or_else(|| {
                        Error::Invalid(format!("divisor point at x = {x} is off the real locus"))
                    })?;
                    if mult % 2 != 0 {
                        idx = idx.xor(ComponentIndex::from_ovals(&[oval]));
                    }
                    total += mult;
                }
                DivisorPart::Infinity { mult } => {
                    if mult % 2 != 0 {
                        idx = idx.xor(ComponentIndex::from_ovals(&[self.genus() + 1]));
                    }
                    total += mult;
                }
                DivisorPart::ConjPair { mult } => {
                    total += 2 * mult;
                }
            }
        }
        if total != d {
            return Err(Error::Invalid(format!("divisor degree {total} differs from stated {d}")));
        }
        if idx.parity() != (d.rem_euclid(2)) as usize {
            return Err(Error::Internal(format!(
                "parity violation: |I| = {} vs degree {d}",
                idx.ovals().len()
            )));
        }
        Ok(idx)
    }

    /// Component of the class of a full-chart triple (finite divisor plus
    /// one point at infinity).
    pub fn component_of_triple(&self, m: &MumfordTriple) -> Result<ComponentIndex> {
        let mut parts = vec![DivisorPart::Infinity { mult: 1 }];
        let pts = m.divisor_points();
        let mut used = vec![false; pts.len()];
        for i in 0..pts.len() {
            if used[i] {
                continue;
            }
            let (t, _s) = pts[i];
            if t.im.abs() <= 1e-7 * t.norm().max(1.0) {
                parts.push(DivisorPart::Real { x: t.re, mult: 1 });
            } else {
                // Find the conjugate partner.
                let j = (i + 1..pts.len())
                    .find(|&j| !used[j] && (pts[j].0 - t.conj()).norm() <= 1e-6 * t.norm().max(1.0))
                    .ok_or_else(|| {
                        Error::Invalid("complex divisor point without conjugate partner".into())
                    })?;
                used[j] = true;
                parts.push(DivisorPart::ConjPair { mult: 1 });
            }
            used[i] = true;
        }
        self.component_of_divisor(&parts, self.genus() as i64 + 1)
    }
}

/// A constituent of a real divisor for parity bookkeeping.
#[derive(Clone, Copy, Debug)]
pub enum DivisorPart {
    Real { x: f64, mult: i64 },
    Infinity { mult: i64 },
    /// A conjugate pair counted once (contributes twice its multiplicity
    /// to the degree and nothing to parity).
    ConjPair { mult: i64 },
}

/// Which oval (1-based) contains `x`, if any.
pub fn oval_of(roots: &[f64], x: f64) -> Option<usize> {
    let g = (roots.len() - 1) / 2;
    for k in 0..g {
        if x >= roots[2 * k] && x <= roots[2 * k + 1] {
            return Some(k + 1);
        }
    }
    if x >= roots[2 * g] {
        return Some(g + 1);
    }
    None
}

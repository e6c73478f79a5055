//! The hyperelliptic matrix model: line-bundle classes as polynomial
//! triples `(U, V, W)` with `V^2 + UW = f`, translation-invariant Lax
//! flows, divisor arithmetic, eigenspace slopes and amplitude branches.
//!
//! The curve is `y^2 = f(z)` with `f` monic of degree `2g + 1` (one
//! branch point at infinity) and distinct roots.

mod cantor;
mod lax;
mod slopes;
mod triple;

pub use cantor::{class_add, class_to_triple, jacobian_add, jacobian_sub, point_class, ReducedClass};
pub use lax::{lax_conservation_check, lax_field, lax_flow, lax_tangent_polys, FlowResult, LaxTangent, LaxVariant};
pub use slopes::{amplitude_branch, moduli_chart, scattering_slopes, BranchValue};
pub use triple::{mumford_from_points, mumford_validate, MumfordTriple, ValidationReport};

use crate::error::{Error, Result};
use crate::scalars::{Poly, C};

/// Minimal pairwise distance between curve roots (the chart requires a
/// smooth curve).
pub const MIN_ROOT_GAP: f64 = 1e-8;

/// A marked point `(z, y)` with `y^2 = f(z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarkedPoint {
    pub z: C,
    pub y: C,
}

/// A smooth hyperelliptic curve `y^2 = f(z)`, `f` monic of degree
/// `2g + 1` with distinct roots, together with its marked points.
#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    f: Poly<C>,
    genus: usize,
    marked: Vec<MarkedPoint>,
}

impl HyperellipticCurve {
    /// Builds the curve from the roots of `f`. Marked points may be empty
    /// for pure Jacobian work; otherwise there must be `g + 3` of them
    /// with pairwise distinct `z` (no two in hyperelliptic involution).
    pub fn from_roots(roots: &[C], marked: Vec<MarkedPoint>) -> Result<Self> {
        if roots.len() < 3 || roots.len() % 2 == 0 {
            return Err(Error::Invalid(format!(
                "need an odd number >= 3 of roots, got {}",
                roots.len()
            )));
        }
        let genus = (roots.len() - 1) / 2;
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if (roots[i] - roots[j]).norm() <= MIN_ROOT_GAP {
                    return Err(Error::Invalid(format!(
                        "roots {i} and {j} are closer than {MIN_ROOT_GAP}; the curve is singular"
                    )));
                }
            }
        }
        let f = Poly::from_roots(roots);
        let curve = HyperellipticCurve { f, genus, marked: vec![] };
        curve.with_marked(marked)
    }

    /// Replaces the marked points after validation.
    pub fn with_marked(mut self, marked: Vec<MarkedPoint>) -> Result<Self> {
        if !marked.is_empty() {
            if marked.len() != self.genus + 3 {
                return Err(Error::Invalid(format!(
                    "expected {} marked points for genus {}, got {}",
                    self.genus + 3,
                    self.genus,
                    marked.len()
                )));
            }
            let scale = self.f.norm_inf();
            for (i, p) in marked.iter().enumerate() {
                let res = (p.y * p.y - self.f.eval(&p.z)).norm();
                if res > 1e-9 * scale.max(1.0) {
                    return Err(Error::Invalid(format!(
                        "marked point {} is off the curve: |y^2 - f(z)| = {res:.3e}",
                        i + 1
                    )));
                }
                for (j, q) in marked.iter().enumerate().skip(i + 1) {
                    if (p.z - q.z).norm() <= 1e-10 * p.z.norm().max(1.0) {
                        return Err(Error::Invalid(format!(
                            "marked points {} and {} share a fiber of the double cover",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        self.marked = marked;
        Ok(self)
    }

    pub fn f(&self) -> &Poly<C> {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn marked(&self) -> &[MarkedPoint] {
        &self.marked
    }

    /// Principal square root of `f` at `z`; the sheet is the caller's
    /// choice of sign.
    pub fn y_at(&self, z: C) -> C {
        self.f.eval(&z).sqrt()
    }
}

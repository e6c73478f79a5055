//! Points of the projective line and the cross-ratio.

use crate::error::{Error, Result};
use crate::scalars::C;

/// A point of P^1 as a homogeneous pair `(a : b)`, not both zero.
/// Equality is equality up to a common nonzero scale; the affine value is
/// `a/b` and infinity is `(1 : 0)`.
#[derive(Clone, Copy, Debug)]
pub struct ProjPoint {
    pub a: C,
    pub b: C,
}

impl ProjPoint {
    pub fn new(a: C, b: C) -> Self {
        assert!(
            a.norm() > 0.0 || b.norm() > 0.0,
            "projective point needs a nonzero pair"
        );
        ProjPoint { a, b }
    }

    pub fn finite(z: C) -> Self {
        ProjPoint { a: z, b: C::new(1.0, 0.0) }
    }

    pub fn real(x: f64) -> Self {
        ProjPoint::finite(C::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        ProjPoint { a: C::new(1.0, 0.0), b: C::new(0.0, 0.0) }
    }

    pub fn is_infinite(&self, tol: f64) -> bool {
        self.b.norm() <= tol * self.a.norm()
    }

    /// Affine value, or `None` when the point is (numerically) infinite.
    pub fn value(&self) -> Option<C> {
        if self.is_infinite(1e-14) {
            None
        } else {
            Some(self.a / self.b)
        }
    }

    /// The determinant pairing `<p, q> = p.a q.b - q.a p.b`; zero exactly
    /// when the two points coincide projectively.
    pub fn det(&self, other: &ProjPoint) -> C {
        self.a * other.b - other.a * self.b
    }

    /// Scale-normalized coincidence test.
    pub fn same_point(&self, other: &ProjPoint, tol: f64) -> bool {
        let scale = (self.a.norm() + self.b.norm()) * (other.a.norm() + other.b.norm());
        self.det(other).norm() <= tol * scale.max(f64::MIN_POSITIVE)
    }

    /// Chordal distance on the Riemann sphere (scale-invariant, bounded).
    pub fn chordal(&self, other: &ProjPoint) -> f64 {
        let na = (self.a.norm_sqr() + self.b.norm_sqr()).sqrt();
        let nb = (other.a.norm_sqr() + other.b.norm_sqr()).sqrt();
        self.det(other).norm() / (na * nb)
    }
}

/// Cross-ratio `[a : b ; c : d] = (d-a)(b-c) / ((b-a)(d-c))`, computed
/// projectively so that infinity among the arguments or in the result needs
/// no special casing. Invariant under a common Möbius map applied to all
/// four arguments.
pub fn cross_ratio(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint, d: &ProjPoint) -> Result<ProjPoint> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].same_point(pts[j], 1e-13) {
                return Err(Error::Degenerate(format!(
                    "cross-ratio arguments {i} and {j} coincide"
                )));
            }
        }
    }
    let num = a.det(d) * c.det(b); // (d-a)(b-c) with common scales cancelling
    let den = a.det(b) * c.det(d); // (b-a)(d-c)
    Ok(ProjPoint::new(num, den))
}

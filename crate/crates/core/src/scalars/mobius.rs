//! Möbius transformations of the projective line.

use crate::error::{Error, Result};
use crate::scalars::{C, ProjPoint};

/// A Möbius map as a 2x2 complex matrix `[[a, b], [c, d]]` acting by
/// `z -> (a z + b) / (c z + d)`; the determinant must be nonzero.
#[derive(Clone, Copy, Debug)]
pub struct Mobius {
    pub m: [[C; 2]; 2],
}

impl Mobius {
    pub fn new(m: [[C; 2]; 2]) -> Result<Self> {
        let mob = Mobius { m };
        let scale = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        if mob.det().norm() <= 1e-13 * scale * scale {
            return Err(Error::Degenerate("Möbius matrix is singular".into()));
        }
        Ok(mob)
    }

    pub fn identity() -> Self {
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        Mobius { m: [[one, zero], [zero, one]] }
    }

    pub fn det(&self) -> C {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(
            self.m[0][0] * p.a + self.m[0][1] * p.b,
            self.m[1][0] * p.a + self.m[1][1] * p.b,
        )
    }

    pub fn inverse(&self) -> Mobius {
        let [[a, b], [c, d]] = self.m;
        Mobius { m: [[d, -b], [-c, a]] }
    }

    pub fn compose(&self, rhs: &Mobius) -> Mobius {
        let a = &self.m;
        let b = &rhs.m;
        Mobius {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    /// Derivative of the affine action at a finite point `z` (both charts
    /// affine): `det / (cz + d)^2`.
    pub fn derivative_at(&self, z: C) -> C {
        let den = self.m[1][0] * z + self.m[1][1];
        self.det() / (den * den)
    }
}

/// Sends `(0, 1, inf)` to the three pairwise distinct points `p0, p1, pinf`.
fn mobius_from_standard(p0: &ProjPoint, p1: &ProjPoint, pinf: &ProjPoint) -> Result<Mobius> {
    // Columns k0*(pinf) and k2*(p0) with scales chosen so that the image of
    // (1 : 1) is p1: solve the 2x2 linear system by Cramer's rule.
    let det = pinf.det(p0);
    if det.norm() == 0.0 {
        return Err(Error::Degenerate("repeated points in Möbius triple".into()));
    }
    let k0 = (p1.a * p0.b - p0.a * p1.b) / det;
    let k2 = (pinf.a * p1.b - p1.a * pinf.b) / det;
    Mobius::new([[pinf.a * k0, p0.a * k2], [pinf.b * k0, p0.b * k2]])
}

/// The unique Möbius map (up to scale) taking `src[i]` to `dst[i]` for the
/// two triples of pairwise distinct points.
pub fn mobius_from_triple(src: &[ProjPoint; 3], dst: &[ProjPoint; 3]) -> Result<Mobius> {
    for pts in [src, dst] {
        for i in 0..3 {
            for j in i + 1..3 {
                if pts[i].same_point(&pts[j], 1e-13) {
                    return Err(Error::Degenerate(format!(
                        "repeated points {i} and {j} in Möbius triple"
                    )));
                }
            }
        }
    }
    let to_dst = mobius_from_standard(&dst[0], &dst[1], &dst[2])?;
    let to_src = mobius_from_standard(&src[0], &src[1], &src[2])?;
    Ok(to_dst.compose(&to_src.inverse()))
}

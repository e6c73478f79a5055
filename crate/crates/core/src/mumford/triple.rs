//! Mumford triples and their construction from divisors.

use crate::error::{Error, Result};
use crate::mumford::HyperellipticCurve;
use crate::scalars::{lagrange_interpolate, Poly, C};

/// A line-bundle class in the affine chart: `U` monic of degree `g`,
/// `deg V <= g - 1`, `W` monic of degree `g + 1`, `V^2 + UW = f`.
#[derive(Clone, Debug)]
pub struct MumfordTriple {
    pub u: Poly<C>,
    pub v: Poly<C>,
    pub w: Poly<C>,
}

/// Residual and degree diagnostics of a candidate triple.
#[derive(Clone, Copy, Debug)]
pub struct ValidationReport {
    /// `max|V^2 + UW - f|` over coefficients, relative to `max|f|`.
    pub residual: f64,
    /// Same residual measured against the size of the identity's own
    /// terms; meaningful for divisors far out in the chart where `V^2`
    /// dwarfs `f`.
    pub residual_scaled: f64,
    pub degrees_ok: bool,
}

impl ValidationReport {
    /// Default identity check at the crate-wide tolerance.
    pub fn ok_default(&self) -> bool {
        self.ok(crate::scalars::DEFAULT_TOL)
    }

    pub fn ok(&self, tol: f64) -> bool {
        self.degrees_ok && self.residual <= tol
    }

    pub fn ok_scaled(&self, tol: f64) -> bool {
        self.degrees_ok && self.residual_scaled <= tol
    }
}

/// Builds the triple through the divisor points `(t_i, s_i)`:
/// `U` vanishes on the `t_i`, `V` interpolates the `s_i`, and
/// `W = (f - V^2) / U` by exact division.
pub fn mumford_from_points(
    curve: &HyperellipticCurve,
    t: &[C],
    s: &[C],
) -> Result<MumfordTriple> {
    let g = curve.genus();
    if t.len() != g || s.len() != g {
        return Err(Error::Invalid(format!(
            "expected {g} divisor points for genus {g}, got {} / {}",
            t.len(),
            s.len()
        )));
    }
    let scale = curve.f().norm_inf().max(1.0);
    for (i, (ti, si)) in t.iter().zip(s).enumerate() {
        let fv = curve.f().eval(ti);
        let res = (si * si - fv).norm();
        if res > 1e-9 * scale.max(fv.norm()).max(si.norm() * si.norm()) {
            return Err(Error::Invalid(format!(
                "divisor point {i}: s^2 differs from f(t) by {res:.3e}"
            )));
        }
    }
    let u = Poly::from_roots(t);
    let v = lagrange_interpolate(t, s)?;
    let num = curve.f() - &(&v * &v);
    let (w, rem) = num.divrem(&u)?;
    if rem.norm_inf() > 1e-9 * scale.max(num.norm_inf()) {
        return Err(Error::Internal(format!(
            "division f - V^2 by U left remainder {:.3e}",
            rem.norm_inf()
        )));
    }
    let triple = MumfordTriple { u, v, w };
    let report = mumford_validate(&triple, curve);
    if !report.ok_scaled(1e-8) {
        return Err(Error::Internal(format!(
            "constructed triple fails validation: residual {:.3e}",
            report.residual_scaled
        )));
    }
    Ok(triple)
}

/// Relative coefficient residual of `V^2 + UW - f` plus degree checks.
pub fn mumford_validate(m: &MumfordTriple, curve: &HyperellipticCurve) -> ValidationReport {
    let g = curve.genus();
    let vv = &m.v * &m.v;
    let uw = &m.u * &m.w;
    let lhs = &vv + &uw;
    let gap = (&lhs - curve.f()).norm_inf();
    let fnorm = curve.f().norm_inf().max(f64::MIN_POSITIVE);
    let residual = gap / fnorm;
    let residual_scaled = gap / fnorm.max(vv.norm_inf()).max(uw.norm_inf());
    let degrees_ok = m.u.is_monic_of_degree(g, 1e-9)
        && m.w.is_monic_of_degree(g + 1, 1e-9)
        && (m.v.is_zero() || m.v.deg0() <= g.saturating_sub(1));
    ValidationReport { residual, residual_scaled, degrees_ok }
}

impl MumfordTriple {
    /// Divisor `t`-coordinates: the roots of `U`.
    pub fn divisor_t(&self) -> Vec<C> {
        self.u.complex_roots()
    }

    /// Divisor points `(t_i, s_i)` with `s_i = V(t_i)`.
    pub fn divisor_points(&self) -> Vec<(C, C)> {
        self.divisor_t()
            .into_iter()
            .map(|t| (t, self.v.eval(&t)))
            .collect()
    }
}

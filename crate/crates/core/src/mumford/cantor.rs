//! Divisor-class composition and reduction in the Mumford chart.
//!
//! Classes are semi-reduced pairs `(u, v)` with `u` monic, `deg v < deg u`
//! and `v^2 = f mod u`; a pair with `deg u = g` fills the full chart and
//! round-trips with [`MumfordTriple`]. Composition is the classical gcd
//! construction, with tolerance-based degree decisions for binary64
//! coefficients.

use crate::error::{Error, Result};
use crate::mumford::{HyperellipticCurve, MumfordTriple};
use crate::scalars::{Poly, C};

/// Semi-reduced divisor class `(u, v)`.
#[derive(Clone, Debug)]
pub struct ReducedClass {
    pub u: Poly<C>,
    pub v: Poly<C>,
}

const EPS: f64 = 1e-10;

fn poly_is_small(p: &Poly<C>, scale: f64) -> bool {
    p.norm_inf() <= EPS * scale.max(1.0)
}

fn make_monic(p: &Poly<C>) -> Poly<C> {
    match p.leading() {
        None => p.clone(),
        Some(l) => p.scale(&(C::new(1.0, 0.0) / l)),
    }
}

/// Drops trailing coefficients that are negligible against `scale`; keeps
/// the polynomial's meaningful degree stable under roundoff.
fn chop(p: &Poly<C>, scale: f64) -> Poly<C> {
    let mut coeffs = p.coeffs().to_vec();
    while matches!(coeffs.last(), Some(c) if c.norm() <= EPS * scale.max(1.0)) {
        coeffs.pop();
    }
    Poly::from_coeffs(coeffs)
}

/// Extended gcd with tolerance: returns monic `g` and `s, t` with
/// `s a + t b = g`.
fn xgcd(a: &Poly<C>, b: &Poly<C>) -> Result<(Poly<C>, Poly<C>, Poly<C>)> {
    let scale = a.norm_inf().max(b.norm_inf());
    let (mut r0, mut r1) = (a.clone(), chop(b, scale));
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    let mut guard = 0;
    while !poly_is_small(&r1, scale) {
        let (q, r2) = r0.divrem(&r1)?;
        let r2 = chop(&r2, scale);
        (r0, r1) = (r1, r2);
        let ns = &s0 - &(&q * &s1);
        (s0, s1) = (s1, ns);
        let nt = &t0 - &(&q * &t1);
        (t0, t1) = (t1, nt);
        guard += 1;
        if guard > 64 {
            return Err(Error::Internal("gcd chain does not terminate".into()));
        }
    }
    let lead = *r0.leading().ok_or(Error::ZeroDivisor)?;
    let inv = C::new(1.0, 0.0) / lead;
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

impl ReducedClass {
    pub fn identity() -> Self {
        ReducedClass { u: Poly::one(), v: Poly::zero() }
    }

    pub fn from_triple(m: &MumfordTriple) -> Self {
        ReducedClass { u: m.u.clone(), v: m.v.clone() }
    }

    /// The inverse class (hyperelliptic involution on the divisor).
    pub fn negate(&self) -> Self {
        ReducedClass { u: self.u.clone(), v: -&self.v }
    }
}

/// The class of a single point `(t, s)` on the curve.
pub fn point_class(curve: &HyperellipticCurve, t: C, s: C) -> Result<ReducedClass> {
    let fv = curve.f().eval(&t);
    let res = (s * s - fv).norm();
    if res > 1e-8 * curve.f().norm_inf().max(fv.norm()).max(1.0) {
        return Err(Error::Invalid(format!(
            "point is off the curve: |s^2 - f(t)| = {res:.3e}"
        )));
    }
    Ok(ReducedClass {
        u: Poly::from_coeffs(vec![-t, C::new(1.0, 0.0)]),
        v: Poly::constant(s),
    })
}

/// Cantor composition followed by reduction to `deg u <= g`.
pub fn class_add(
    curve: &HyperellipticCurve,
    a: &ReducedClass,
    b: &ReducedClass,
) -> Result<ReducedClass> {
    let f = curve.f();
    let scale = f.norm_inf();

    // d1 = gcd(u1, u2) = e1 u1 + e2 u2
    let (d1, e1, e2) = xgcd(&a.u, &b.u)?;
    // d = gcd(d1, v1 + v2) = c1 d1 + c2 (v1 + v2)
    let vsum = &a.v + &b.v;
    let (d, h1, h2, h3);
    if d1.deg0() == 0 {
        d = Poly::one();
        h1 = e1;
        h2 = e2;
        h3 = Poly::zero();
    } else {
        let (dd, c1, c2) = xgcd(&d1, &chop(&vsum, scale))?;
        d = dd;
        h1 = &c1 * &e1;
        h2 = &c1 * &e2;
        h3 = c2;
    }

    let d2 = &d * &d;
    let uprod = &a.u * &b.u;
    let (u3_raw, rem_u) = uprod.divrem(&d2)?;
    if !poly_is_small(&rem_u, uprod.norm_inf()) {
        return Err(Error::Chart("composition gcd does not divide u1 u2".into()));
    }
    let u3 = make_monic(&chop(&u3_raw, scale));

    // v3 = (h1 u1 v2 + h2 u2 v1 + h3 (v1 v2 + f)) / d  mod u3
    let num = &(&(&h1 * &a.u) * &b.v)
        + &(&(&(&h2 * &b.u) * &a.v) + &(&h3 * &(&(&a.v * &b.v) + f)));
    let (v3_raw, rem_v) = num.divrem(&d)?;
    if !poly_is_small(&rem_v, num.norm_inf()) {
        return Err(Error::Chart("composition numerator not divisible by gcd".into()));
    }
    let (_, mut v3) = v3_raw.divrem(&u3)?;
    let mut u = u3;

    // Reduction.
    let g = curve.genus();
    let mut guard = 0;
    while u.deg0() > g && u.degree().is_some() {
        let num = f - &(&v3 * &v3);
        let (unew, rem) = num.divrem(&u)?;
        if !poly_is_small(&rem, num.norm_inf()) {
            return Err(Error::Chart("reduction step left a remainder".into()));
        }
        let unew = make_monic(&chop(&unew, scale));
        let (_, vred) = (-&v3).divrem(&unew)?;
        v3 = vred;
        u = unew;
        guard += 1;
        if guard > 64 {
            return Err(Error::Internal("reduction does not terminate".into()));
        }
    }
    Ok(ReducedClass { u, v: v3 })
}

/// Turns a full-chart class back into a triple; classes of lower `u`
/// degree have left the chart (the excluded theta locus).
pub fn class_to_triple(curve: &HyperellipticCurve, cls: &ReducedClass) -> Result<MumfordTriple> {
    let g = curve.genus();
    if cls.u.deg0() != g {
        return Err(Error::Chart(format!(
            "class has deg U = {} < g = {g}: outside the chart",
            cls.u.deg0()
        )));
    }
    let num = curve.f() - &(&cls.v * &cls.v);
    let (w, rem) = num.divrem(&cls.u)?;
    if !poly_is_small(&rem, num.norm_inf()) {
        return Err(Error::Chart("class does not satisfy v^2 = f mod u".into()));
    }
    Ok(MumfordTriple { u: cls.u.clone(), v: cls.v.clone(), w: make_monic(&w) })
}

/// Sum of two full-chart classes, back in the chart.
pub fn jacobian_add(
    curve: &HyperellipticCurve,
    a: &MumfordTriple,
    b: &MumfordTriple,
) -> Result<MumfordTriple> {
    let sum = class_add(curve, &ReducedClass::from_triple(a), &ReducedClass::from_triple(b))?;
    class_to_triple(curve, &sum)
}

/// Difference of two full-chart classes.
pub fn jacobian_sub(
    curve: &HyperellipticCurve,
    a: &MumfordTriple,
    b: &MumfordTriple,
) -> Result<MumfordTriple> {
    let sum = class_add(
        curve,
        &ReducedClass::from_triple(a),
        &ReducedClass::from_triple(b).negate(),
    )?;
    class_to_triple(curve, &sum)
}

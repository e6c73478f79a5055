//! Translation-invariant Lax vector fields and their flows.
//!
//! For a parameter `c` the tangent at `(U, V, W)` is
//!
//! ```text
//! U' = (V(c) U - U(c) V) / (z - c)
//! V' = (U(c) W - W(c) U) / (2 (z - c)) - U(c) U / 2
//! W' = (W(c) V - V(c) W) / (z - c) + U(c) V
//! ```
//!
//! The `-U(c)U/2` term in `V'` is required by both the degree bound
//! `deg V' <= g - 1` and the conservation law `2VV' + U'W + UW' = 0`;
//! the variant with `-U(c)U` instead leaves the degree-`g` term
//! `-U(c) z^g / 2` and the conservation defect `-U(c) U V`. That variant
//! is kept behind [`LaxVariant::AsPrinted`] for the symbolic comparison
//! tests.

use crate::error::{Error, Result};
use crate::mumford::{HyperellipticCurve, MumfordTriple};
use crate::scalars::Field;
use crate::scalars::{Poly, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaxVariant {
    /// Coefficient -1/2 on the `U(c)U` term of `V'`.
    DegreeCorrected,
    /// Coefficient -1 (fails the degree bound and conservation).
    AsPrinted,
}

/// The tangent triple for any field scalar (exact rationals included).
pub fn lax_tangent_polys<T: Field>(
    u: &Poly<T>,
    v: &Poly<T>,
    w: &Poly<T>,
    c: &T,
    variant: LaxVariant,
) -> (Poly<T>, Poly<T>, Poly<T>) {
    let uc = u.eval(c);
    let vc = v.eval(c);
    let wc = w.eval(c);
    let half = T::one() / (T::one() + T::one());
    let udot = (&u.scale(&vc) - &v.scale(&uc)).div_linear(c);
    let core = (&w.scale(&uc) - &u.scale(&wc)).div_linear(c).scale(&half);
    let vdot = match variant {
        LaxVariant::DegreeCorrected => &core - &u.scale(&(uc.clone() * half)),
        LaxVariant::AsPrinted => &core - &u.scale(&uc),
    };
    let wdot = &(&v.scale(&wc) - &w.scale(&vc)).div_linear(c) + &v.scale(&uc);
    (udot, vdot, wdot)
}

/// Symbolic conservation check over any exact field: returns whether the
/// corrected tangent satisfies `2VV' + U'W + UW' = 0` identically, and
/// whether the printed variant's defect equals `-U(c) U V` exactly.
pub fn lax_conservation_check<T: Field>(
    u: &Poly<T>,
    v: &Poly<T>,
    w: &Poly<T>,
    c: &T,
) -> (bool, bool) {
    let two = T::one() + T::one();
    let conserved = |ud: &Poly<T>, vd: &Poly<T>, wd: &Poly<T>| -> Poly<T> {
        &(&v.scale(&two) * vd) + &(&(ud * w) + &(u * wd))
    };
    let (ud, vd, wd) = lax_tangent_polys(u, v, w, c, LaxVariant::DegreeCorrected);
    let ok = conserved(&ud, &vd, &wd).is_zero();
    let (udp, vdp, wdp) = lax_tangent_polys(u, v, w, c, LaxVariant::AsPrinted);
    let defect = conserved(&udp, &vdp, &wdp);
    let expected = -&(&u.scale(&u.eval(c)) * v);
    let defect_ok = defect == expected && !defect.is_zero();
    (ok, defect_ok)
}

/// Tangent data at a triple for a flow parameter `c`.
#[derive(Clone, Debug)]
pub struct LaxTangent {
    pub udot: Poly<C>,
    pub vdot: Poly<C>,
    pub wdot: Poly<C>,
    pub c: C,
}

/// The corrected tangent at `m`; degree bounds are asserted.
pub fn lax_field(m: &MumfordTriple, c: C) -> LaxTangent {
    let (udot, vdot, wdot) = lax_tangent_polys(&m.u, &m.v, &m.w, &c, LaxVariant::DegreeCorrected);
    LaxTangent { udot, vdot, wdot, c }
}

/// Outcome of a Lax flow integration.
#[derive(Clone, Debug)]
pub struct FlowResult {
    pub triple: MumfordTriple,
    /// False when the chart degenerated mid-flow and the result is the
    /// last healthy state.
    pub completed: bool,
    pub time_reached: f64,
}

struct State {
    g: usize,
    x: Vec<C>,
}

impl State {
    fn from_triple(m: &MumfordTriple, g: usize) -> State {
        let mut x = Vec::with_capacity(3 * g + 1);
        for k in 0..g {
            x.push(m.u.coeff(k));
        }
        for k in 0..g {
            x.push(m.v.coeff(k));
        }
        for k in 0..=g {
            x.push(m.w.coeff(k));
        }
        State { g, x }
    }

    fn to_triple(&self) -> MumfordTriple {
        let g = self.g;
        let one = C::new(1.0, 0.0);
        let mut uc = self.x[..g].to_vec();
        uc.push(one);
        let vc = self.x[g..2 * g].to_vec();
        let mut wc = self.x[2 * g..3 * g + 1].to_vec();
        wc.push(one);
        MumfordTriple {
            u: Poly::from_coeffs(uc),
            v: Poly::from_coeffs(vc),
            w: Poly::from_coeffs(wc),
        }
    }
}

fn derivative(x: &[C], g: usize, c: C) -> Vec<C> {
    let st = State { g, x: x.to_vec() };
    let m = st.to_triple();
    let t = lax_field(&m, c);
    let mut dx = Vec::with_capacity(3 * g + 1);
    for k in 0..g {
        dx.push(t.udot.coeff(k));
    }
    for k in 0..g {
        dx.push(t.vdot.coeff(k));
    }
    for k in 0..=g {
        dx.push(t.wdot.coeff(k));
    }
    dx
}

fn rk4_step(x: &mut [C], g: usize, c: C, dt: f64) {
    let n = x.len();
    let k1 = derivative(x, g, c);
    let mut tmp: Vec<C> = (0..n).map(|i| x[i] + k1[i] * (dt / 2.0)).collect();
    let k2 = derivative(&tmp, g, c);
    for i in 0..n {
        tmp[i] = x[i] + k2[i] * (dt / 2.0);
    }
    let k3 = derivative(&tmp, g, c);
    for i in 0..n {
        tmp[i] = x[i] + k3[i] * dt;
    }
    let k4 = derivative(&tmp, g, c);
    for i in 0..n {
        x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
    }
}

/// RK4 integration of the Lax field for time `time` in `steps` steps,
/// halving locally (up to 12 times) when the state degenerates. The
/// monic leading coefficients are pinned by construction: the tangent
/// degrees never touch them.
pub fn lax_flow(
    curve: &HyperellipticCurve,
    m: &MumfordTriple,
    c: C,
    time: f64,
    steps: usize,
) -> Result<FlowResult> {
    if steps == 0 {
        return Err(Error::Invalid("flow needs at least one step".into()));
    }
    let g = curve.genus();
    let mut st = State::from_triple(m, g);
    let dt = time / steps as f64;
    let mut reached = 0.0f64;
    let scale0 = st.x.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for _ in 0..steps {
        if !advance(&mut st, g, c, dt, scale0, 0) {
            return Ok(FlowResult { triple: st.to_triple(), completed: false, time_reached: reached });
        }
        reached += dt;
    }
    Ok(FlowResult { triple: st.to_triple(), completed: true, time_reached: reached })
}

fn advance(st: &mut State, g: usize, c: C, dt: f64, scale0: f64, depth: usize) -> bool {
    let mut trial = st.x.clone();
    rk4_step(&mut trial, g, c, dt);
    let healthy = trial.iter().all(|z| z.norm().is_finite())
        && trial.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e8 * scale0;
    if healthy {
        st.x = trial;
        return true;
    }
    if depth >= 12 {
        return false;
    }
    advance(st, g, c, dt / 2.0, scale0, depth + 1) && advance(st, g, c, dt / 2.0, scale0, depth + 1)
}

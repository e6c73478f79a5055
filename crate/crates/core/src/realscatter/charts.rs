//! Angle parametrizations of the real Picard components.
//!
//! A component `Pic_I` of `Pic^(g+1)(R)` is covered by chart pieces: the
//! finite divisor of `g` points (the class always carries one extra point
//! at infinity) runs over oval assignments whose parity is `I` without the
//! last oval, plus conjugate-pair pieces when the parity deficit is even.
//! Each real oval is parametrized by an angle that passes smoothly through
//! the branch points (and through infinity on the unbounded oval), so the
//! invariant-measure density against the angles is real-analytic.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mumford::{mumford_from_points, scattering_slopes, MumfordTriple};
use crate::realscatter::{ComponentIndex, MCurve, PlacementType};
use crate::scalars::{Poly, C};

/// One chart piece of a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    /// Finite points on the listed ovals (1-based, one angle each).
    Real { ovals: Vec<usize> },
    /// A conjugate pair `t, conj(t)` (genus 2 only), with the sheet sign
    /// applied to the principal square root.
    Conj { sheet: i8 },
}

impl Piece {
    /// Symmetry factor: orderings of equal-oval assignments that hit the
    /// same unordered divisor.
    pub fn symmetry(&self) -> f64 {
        match self {
            Piece::Real { ovals } => {
                let mut fact = 1.0;
                let mut sorted = ovals.clone();
                sorted.sort_unstable();
                let mut run = 1;
                for i in 1..sorted.len() {
                    if sorted[i] == sorted[i - 1] {
                        run += 1;
                        fact *= run as f64;
                    } else {
                        run = 1;
                    }
                }
                fact
            }
            Piece::Conj { .. } => 1.0,
        }
    }
}

/// Chart pieces covering the component `I` of `Pic^(g+1)(R)`.
///
/// The finite part must have parity `I xor {g+1}`; for `g <= 2` this is
/// either a fixed assignment of distinct ovals, or (parity empty at genus
/// 2) same-oval pairs together with the two conjugate-pair pieces.
pub fn pieces_for_component(mc: &MCurve, component: ComponentIndex) -> Result<Vec<Piece>> {
    let g = mc.genus();
    if component.parity() != (g + 1) % 2 {
        return Err(Error::Invalid(format!(
            "{component:?} is not a component of Pic^{}(R)",
            g + 1
        )));
    }
    let need = component.xor(ComponentIndex::from_ovals(&[g + 1]));
    let odd_ovals = need.ovals();
    match g {
        1 => match odd_ovals.as_slice() {
            [o] => Ok(vec![Piece::Real { ovals: vec![*o] }]),
            _ => Err(Error::Invalid(format!("no genus-1 chart for parity {need:?}"))),
        },
        2 => match odd_ovals.as_slice() {
            [a, b] => Ok(vec![Piece::Real { ovals: vec![*a, *b] }]),
            [] => {
                let mut out: Vec<Piece> =
                    (1..=3).map(|o| Piece::Real { ovals: vec![o, o] }).collect();
                out.push(Piece::Conj { sheet: 1 });
                out.push(Piece::Conj { sheet: -1 });
                Ok(out)
            }
            _ => Err(Error::Invalid(format!("no genus-2 chart for parity {need:?}"))),
        },
        _ => Err(Error::Capacity(format!(
            "component charts are implemented for genus 1 and 2, got {g}"
        ))),
    }
}

/// Divisor data of a chart piece at angles `theta`: the points `(t, s)`
/// and the matrix `A[k][m] = d phi_k / d theta_m` pairing the
/// holomorphic-differential basis `z^k dz / y` with the angle frame.
#[derive(Clone, Debug)]
pub struct PieceFrame {
    pub t: Vec<C>,
    pub s: Vec<C>,
    /// `g x g` real matrix, rows = differential index, columns = angle.
    pub a: Vec<Vec<f64>>,
}

impl PieceFrame {
    pub fn det_a(&self) -> f64 {
        match self.a.len() {
            1 => self.a[0][0],
            2 => self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0],
            n => {
                let m: Vec<Vec<C>> = (0..n)
                    .map(|i| (0..n).map(|j| C::new(self.a[i][j], 0.0)).collect())
                    .collect();
                crate::hypertrees::cdet(&m).re
            }
        }
    }
}

/// Smooth point data on a bounded oval `[a, b]`: `t = m - h cos(phi)`,
/// `s = h sin(phi) sqrt(Q(t))` with `Q = f / ((t - a)(b - t)) > 0`.
/// The ratio `(dt/dphi)/s = 1/sqrt(Q)` has the angle factor cancelled.
fn bounded_point(f: &Poly<C>, a: f64, b: f64, phi: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let t = m - h * phi.cos();
    let q_poly = f.div_linear(&C::new(a, 0.0)).div_linear(&C::new(b, 0.0));
    let q = -q_poly.eval(&C::new(t, 0.0)).re;
    let q = q.max(1e-300);
    let s = h * phi.sin() * q.sqrt();
    let ratio = 1.0 / q.sqrt();
    (t, s, ratio)
}

/// Smooth point data on the unbounded oval `[r, inf)` through infinity:
/// `t = r + kappa tan^2(phi/2)`, `s = sqrt(kappa) tan(phi/2) sqrt(R(t))`
/// with `R = f / (t - r) > 0`; ratio `= sqrt(kappa) sec^2(phi/2)/sqrt(R)`.
fn unbounded_point(f: &Poly<C>, r: f64, kappa: f64, phi: f64) -> (f64, f64, f64) {
    let half = 0.5 * phi;
    let tn = half.tan();
    let t = r + kappa * tn * tn;
    let rr_poly = f.div_linear(&C::new(r, 0.0));
    let rr = rr_poly.eval(&C::new(t, 0.0)).re.max(1e-300);
    let s = kappa.sqrt() * tn * rr.sqrt();
    let sec2 = 1.0 / (half.cos() * half.cos());
    let ratio = kappa.sqrt() * sec2 / rr.sqrt();
    (t, s, ratio)
}

fn kappa_for(mc: &MCurve) -> f64 {
    let roots = mc.roots();
    (roots[roots.len() - 1] - roots[0]).max(1.0)
}

/// Evaluates a chart piece at angles `theta` (radians; real ovals are
/// 2 pi periodic, the conjugate piece uses `alpha in (-pi/2, pi/2)`,
/// `beta in (0, pi/2)`).
pub fn piece_frame(mc: &MCurve, piece: &Piece, theta: &[f64]) -> Result<PieceFrame> {
    let g = mc.genus();
    if theta.len() != g {
        return Err(Error::Invalid(format!("expected {g} angles, got {}", theta.len())));
    }
    let f = mc.curve().f();
    match piece {
        Piece::Real { ovals } => {
            if ovals.len() != g {
                return Err(Error::Invalid("piece arity differs from genus".into()));
            }
            let mut t = Vec::with_capacity(g);
            let mut s = Vec::with_capacity(g);
            let mut ratio = Vec::with_capacity(g);
            for (k, &oval) in ovals.iter().enumerate() {
                let (tv, sv, rv) = if oval <= g {
                    let (a, b) = (mc.roots()[2 * (oval - 1)], mc.roots()[2 * oval - 1]);
                    bounded_point(f, a, b, theta[k])
                } else {
                    unbounded_point(f, mc.roots()[2 * g], kappa_for(mc), theta[k])
                };
                if !tv.is_finite() {
                    return Err(Error::Chart("angle hit the point at infinity".into()));
                }
                t.push(C::new(tv, 0.0));
                s.push(C::new(sv, 0.0));
                ratio.push(rv);
            }
            // A[k][m] = t_m^k * ratio_m (diagonal angle dependence).
            let a = (0..g)
                .map(|k| (0..g).map(|m| t[m].re.powi(k as i32) * ratio[m]).collect())
                .collect();
            Ok(PieceFrame { t, s, a })
        }
        Piece::Conj { sheet } => {
            if g != 2 {
                return Err(Error::Invalid("conjugate pieces exist at genus 2 only".into()));
            }
            let (alpha, beta) = (theta[0], theta[1]);
            if !(0.0..PI / 2.0).contains(&beta) || beta == 0.0 {
                return Err(Error::Chart("conjugate angle beta out of (0, pi/2)".into()));
            }
            let tv = C::new(alpha.tan(), beta.tan());
            let sv = f.eval(&tv).sqrt() * (*sheet as f64);
            if sv.norm() < 1e-300 {
                return Err(Error::Chart("conjugate point hit a branch point".into()));
            }
            let da = 1.0 / (alpha.cos() * alpha.cos());
            let db = 1.0 / (beta.cos() * beta.cos());
            // Points t, conj(t): omega_k pairing sums to twice the real part.
            let mut a = vec![vec![0.0; 2]; 2];
            for k in 0..2 {
                let w = tv.powu(k as u32) / sv;
                a[k][0] = 2.0 * (w * da).re;
                a[k][1] = 2.0 * (w * C::new(0.0, db)).re;
            }
            Ok(PieceFrame {
                t: vec![tv, tv.conj()],
                s: vec![sv, sv.conj()],
                a,
            })
        }
    }
}

/// Mass of a chart piece under the translation-invariant measure,
/// `integral |det A| d theta / symmetry`, by tensor quadrature
/// (trapezoid on the periodic circles, midpoint on the conjugate strip).
pub fn piece_mass(mc: &MCurve, piece: &Piece, nodes: usize) -> Result<f64> {
    let g = mc.genus();
    let eval = |theta: &[f64]| -> f64 {
        match piece_frame(mc, piece, theta) {
            Ok(fr) => fr.det_a().abs(),
            Err(_) => 0.0,
        }
    };
    let mass = match piece {
        Piece::Real { .. } => {
            let h = 2.0 * PI / nodes as f64;
            // Offset grid keeps clear of the point at infinity at phi = pi.
            match g {
                1 => (0..nodes).map(|i| eval(&[h * (i as f64 + 0.31)])).sum::<f64>() * h,
                2 => {
                    let mut acc = 0.0;
                    for i in 0..nodes {
                        for j in 0..nodes {
                            acc += eval(&[h * (i as f64 + 0.31), h * (j as f64 + 0.57)]);
                        }
                    }
                    acc * h * h
                }
                _ => return Err(Error::Capacity("mass quadrature supports genus <= 2".into())),
            }
        }
        Piece::Conj { .. } => {
            let ha = PI / nodes as f64;
            let hb = 0.5 * PI / nodes as f64;
            let mut acc = 0.0;
            for i in 0..nodes {
                let alpha = -PI / 2.0 + ha * (i as f64 + 0.5);
                for j in 0..nodes {
                    let beta = hb * (j as f64 + 0.5);
                    acc += eval(&[alpha, beta]);
                }
            }
            acc * ha * hb
        }
    };
    Ok(mass / piece.symmetry())
}

/// Total invariant mass of a component (the normalization constant of its
/// probability measure).
pub fn component_mass(mc: &MCurve, component: ComponentIndex, nodes: usize) -> Result<f64> {
    let mut total = 0.0;
    for piece in pieces_for_component(mc, component)? {
        total += piece_mass(mc, &piece, nodes)?;
    }
    Ok(total)
}

/// The forgetful chart quadruples `(i, g+1, g+2, g+3)` for `i = 1..g`.
pub fn standard_chart(g: usize) -> Vec<[usize; 4]> {
    (1..=g).map(|i| [i, g + 1, g + 2, g + 3]).collect()
}

/// Validates a chart quadruple against the placement: type B charts must
/// use both halves of the conjugate pair as the last two entries (the
/// values then sit on `Re = 1/2`) or avoid the pair entirely.
fn quadruple_mode(mc: &MCurve, quad: &[usize; 4]) -> Result<ChartMode> {
    let n = mc.genus() + 3;
    for &i in quad {
        if i < 1 || i > n {
            return Err(Error::Invalid(format!("chart index {i} out of range 1..={n}")));
        }
    }
    let mut sorted = *quad;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Invalid(format!("chart quadruple {quad:?} repeats an index")));
    }
    match mc.placement() {
        PlacementType::A => Ok(ChartMode::Real),
        PlacementType::B => {
            let conj = [mc.genus() + 2, mc.genus() + 3];
            let hits = quad.iter().filter(|i| conj.contains(i)).count();
            match hits {
                0 => Ok(ChartMode::Real),
                2 if conj.contains(&quad[2]) && conj.contains(&quad[3]) => Ok(ChartMode::HalfLine),
                _ => Err(Error::Invalid(format!(
                    "type B chart {quad:?} must place the conjugate pair in the last two slots or avoid it"
                ))),
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ChartMode {
    /// Real cross-ratio values: the coordinate is atan(lambda).
    Real,
    /// Values on the line `Re = 1/2`: the coordinate is atan(Im lambda).
    HalfLine,
}

/// Real chart coordinates for arbitrary cross-ratio quadruples; values
/// wrap with period pi.
pub fn chart_angles_in(
    mc: &MCurve,
    m: &MumfordTriple,
    chart: &[[usize; 4]],
) -> Result<Vec<f64>> {
    let q = scattering_slopes(m, mc.curve())?;
    chart
        .iter()
        .map(|quad| {
            let mode = quadruple_mode(mc, quad)?;
            let [a, b, c, d] = quad.map(|i| q[i - 1]);
            // (d-a)(b-c) : (b-a)(d-c) via determinant pairings.
            let num = a.det(&d) * c.det(&b);
            let den = a.det(&b) * c.det(&d);
            let finite = num.re.is_finite() && num.im.is_finite() && den.re.is_finite() && den.im.is_finite();
            if !finite || (num.norm() == 0.0 && den.norm() == 0.0) {
                return Err(Error::Chart(format!(
                    "chart quadruple {quad:?} degenerates: coincident slopes"
                )));
            }
            let l = crate::scalars::ProjPoint::new(num, den);
            match mode {
                ChartMode::Real => {
                    let scale = l.a.norm().max(l.b.norm());
                    if l.a.im.abs() + l.b.im.abs() > 2e-5 * scale {
                        return Err(Error::Internal(format!(
                            "chart value for {quad:?} is not real: {l:?}"
                        )));
                    }
                    Ok(l.a.re.atan2(l.b.re).rem_euclid(PI))
                }
                ChartMode::HalfLine => {
                    let v = l
                        .value()
                        .ok_or_else(|| Error::Chart("chart value at infinity".into()))?;
                    if (v.re - 0.5).abs() > 2e-5 * v.norm().max(1.0) {
                        return Err(Error::Internal(format!(
                            "chart value for {quad:?} is off the line Re = 1/2: {v}"
                        )));
                    }
                    Ok(v.im.atan().rem_euclid(PI))
                }
            }
        })
        .collect()
}

/// Chart coordinates in the standard forgetful chart.
pub fn chart_angles(mc: &MCurve, m: &MumfordTriple) -> Result<Vec<f64>> {
    chart_angles_in(mc, m, &standard_chart(mc.genus()))
}

/// Wrapped difference of chart angles (period pi), in (-pi/2, pi/2].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(PI);
    if d > PI / 2.0 {
        d -= PI;
    }
    d
}

/// Triple of a chart piece at given angles.
pub fn piece_triple(mc: &MCurve, piece: &Piece, theta: &[f64]) -> Result<MumfordTriple> {
    let fr = piece_frame(mc, piece, theta)?;
    mumford_from_points(mc.curve(), &fr.t, &fr.s)
}

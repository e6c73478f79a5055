//! Eigenspace slopes at the marked points, the cross-ratio chart and
//! amplitude-form branches.

use crate::error::{Error, Result};
use crate::hypertrees::cdet;
use crate::mumford::{lax_field, HyperellipticCurve, MumfordTriple};
use crate::scalars::{ProjPoint, C};

/// Slopes `q_i = (y_i - V(z_i)) / U(z_i)` of the matrix eigenspaces at
/// the marked points, as projective values.
pub fn scattering_slopes(m: &MumfordTriple, curve: &HyperellipticCurve) -> Result<Vec<ProjPoint>> {
    if curve.marked().is_empty() {
        return Err(Error::Invalid("curve carries no marked points".into()));
    }
    let scale = curve.f().norm_inf().max(1.0);
    curve
        .marked()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let num = p.y - m.v.eval(&p.z);
            let den = m.u.eval(&p.z);
            if num.norm() <= 1e-10 * scale && den.norm() <= 1e-10 * scale {
                return Err(Error::Chart(format!(
                    "base point of the pencil at marked point {}",
                    i + 1
                )));
            }
            Ok(ProjPoint::new(num, den))
        })
        .collect()
}

/// The forgetful chart: `lambda_i = [q_i : q_(g+1) ; q_(g+2) : q_(g+3)]`
/// for `i = 1..g`. The three anchors must be pairwise distinct; the
/// varying point may hit an anchor, giving the value 0, 1 or infinity.
pub fn moduli_chart(q: &[ProjPoint], g: usize) -> Result<Vec<ProjPoint>> {
    if q.len() != g + 3 {
        return Err(Error::Invalid(format!("expected {} slopes, got {}", g + 3, q.len())));
    }
    let (b, c, d) = (&q[g], &q[g + 1], &q[g + 2]);
    for (i, x) in [(g, b), (g + 1, c)] {
        for (j, y) in [(g + 1, c), (g + 2, d)] {
            if i < j && x.same_point(y, 1e-12) {
                return Err(Error::Chart(format!(
                    "chart anchors {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok((0..g)
        .map(|i| {
            let a = &q[i];
            // (d-a)(b-c) : (b-a)(d-c), computed with determinant pairings.
            ProjPoint::new(a.det(d) * c.det(b), a.det(b) * c.det(d))
        })
        .collect())
}

/// A branch density of the amplitude form against the chart volume.
#[derive(Clone, Copy, Debug)]
pub enum BranchValue {
    Finite(f64),
    /// Singular chart differential: the class sits on the ramification
    /// locus of the chart or two anchors collided.
    Singular,
}

impl BranchValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            BranchValue::Finite(x) => Some(x),
            BranchValue::Singular => None,
        }
    }
}

/// Density of the translation-invariant amplitude form against the chart
/// volume at `m`, computed from `g` Lax fields with parameters `cs`. The
/// fields are measured against the holomorphic-differential basis, which
/// removes the dependence on the choice of `cs`.
pub fn amplitude_branch(
    m: &MumfordTriple,
    curve: &HyperellipticCurve,
    cs: &[C],
) -> Result<BranchValue> {
    let g = curve.genus();
    if cs.len() != g {
        return Err(Error::Invalid(format!("expected {g} flow parameters, got {}", cs.len())));
    }
    for i in 0..g {
        for j in i + 1..g {
            if (cs[i] - cs[j]).norm() <= 1e-12 * cs[i].norm().max(1.0) {
                return Err(Error::Invalid("flow parameters must be distinct".into()));
            }
        }
    }
    let n = curve.marked().len();
    if n != g + 3 {
        return Err(Error::Invalid("curve needs its g + 3 marked points".into()));
    }

    // Divisor points and the q-slopes as affine values.
    let tpts = m.divisor_t();
    let spts: Vec<C> = tpts.iter().map(|t| m.v.eval(t)).collect();
    if spts.iter().any(|s| s.norm() < 1e-12) {
        return Ok(BranchValue::Singular);
    }
    let slopes = scattering_slopes(m, curve)?;
    let qa: Vec<C> = match slopes.iter().map(|p| p.value()).collect::<Option<Vec<C>>>() {
        Some(v) => v,
        None => return Ok(BranchValue::Singular),
    };

    let uprime = m.u.derivative();
    let mut omega = vec![vec![C::new(0.0, 0.0); g]; g]; // omega[k][j]
    let mut lamdot = vec![vec![C::new(0.0, 0.0); g]; g]; // lamdot[i][j]
    for (j, &c) in cs.iter().enumerate() {
        let tang = lax_field(m, c);
        // Divisor rates: t_i' = -U'(t_i)^-1 U.(t_i).
        for (k, row) in omega.iter_mut().enumerate() {
            let mut acc = C::new(0.0, 0.0);
            for (t, s) in tpts.iter().zip(&spts) {
                let tdot = -tang.udot.eval(t) / uprime.eval(t);
                acc += t.powu(k as u32) * tdot / s;
            }
            row[j] = acc;
        }
        // Slope rates at the marked points.
        let qdot: Vec<C> = curve
            .marked()
            .iter()
            .map(|p| {
                let uz = m.u.eval(&p.z);
                (-tang.vdot.eval(&p.z) * uz - (p.y - m.v.eval(&p.z)) * tang.udot.eval(&p.z))
                    / (uz * uz)
            })
            .collect();
        // Chart differential: lambda_i = cr(q_i, q_(g+1), q_(g+2), q_(g+3)).
        let (b, c3, d) = (qa[g], qa[g + 1], qa[g + 2]);
        for i in 0..g {
            let a = qa[i];
            let den = (b - a) * (d - c3);
            if den.norm() < 1e-14 {
                return Ok(BranchValue::Singular);
            }
            let d2 = den * den;
            let da = (b - c3) * (d - c3) * (d - b) / d2;
            let db = (d - a) * (d - c3) * (c3 - a) / d2;
            let dc = (d - a) * (b - a) * (b - d) / d2;
            let dd = (b - c3) * (b - a) * (a - c3) / d2;
            lamdot[i][j] =
                da * qdot[i] + db * qdot[g] + dc * qdot[g + 1] + dd * qdot[g + 2];
        }
    }
    let num = cdet(&omega).norm();
    let den = cdet(&lamdot).norm();
    if !den.is_finite() || den <= 1e-14 * num.max(1e-300) {
        return Ok(BranchValue::Singular);
    }
    Ok(BranchValue::Finite(num / den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mumford::{lax_flow, mumford_from_points, MarkedPoint};
    use crate::scalars::{cross_ratio, Mobius};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> C {
        C::new(x, 0.0)
    }

    fn marked_elliptic() -> HyperellipticCurve {
        let marked = vec![
            MarkedPoint { z: r(2.0), y: r(6.0f64.sqrt()) },
            MarkedPoint { z: r(3.0), y: -r(24.0f64.sqrt()) },
            MarkedPoint { z: r(5.0), y: r(120.0f64.sqrt()) },
            MarkedPoint { z: r(7.0), y: r(336.0f64.sqrt()) },
        ];
        HyperellipticCurve::from_roots(&[r(-1.0), r(0.0), r(1.0)], marked).unwrap()
    }

    fn sample_triple(curve: &HyperellipticCurve) -> MumfordTriple {
        let s = (3.0f64 / 8.0).sqrt();
        mumford_from_points(curve, &[r(-0.5)], &[r(s)]).unwrap()
    }

    #[test]
    fn weierstrass_marked_point_has_finite_slope() {
        // y = 0 at a branch point: slope = -V(z)/U(z), finite for generic M.
        let marked = vec![
            MarkedPoint { z: r(1.0), y: r(0.0) },
            MarkedPoint { z: r(3.0), y: -r(24.0f64.sqrt()) },
            MarkedPoint { z: r(5.0), y: r(120.0f64.sqrt()) },
            MarkedPoint { z: r(7.0), y: r(336.0f64.sqrt()) },
        ];
        let curve = HyperellipticCurve::from_roots(&[r(-1.0), r(0.0), r(1.0)], marked).unwrap();
        let m = sample_triple(&curve);
        let q = scattering_slopes(&m, &curve).unwrap();
        let expect = -m.v.eval(&r(1.0)) / m.u.eval(&r(1.0));
        assert!((q[0].value().unwrap() - expect).norm() < 1e-12);
    }

    #[test]
    fn chart_is_mobius_invariant_and_matches_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let curve = marked_elliptic();
        let m = sample_triple(&curve);
        let q = scattering_slopes(&m, &curve).unwrap();
        let lam = moduli_chart(&q, 1).unwrap();
        // Direct evaluation of the cross-ratio.
        let direct = cross_ratio(&q[0], &q[1], &q[2], &q[3]).unwrap();
        assert!(lam[0].same_point(&direct, 1e-12));
        // A Möbius on all slopes leaves the chart alone.
        for _ in 0..5 {
            let e = |r: &mut ChaCha8Rng| C::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let mob = loop {
                if let Ok(mm) = Mobius::new([[e(&mut rng), e(&mut rng)], [e(&mut rng), e(&mut rng)]]) {
                    if mm.det().norm() > 0.1 {
                        break mm;
                    }
                }
            };
            let mq: Vec<ProjPoint> = q.iter().map(|p| mob.apply(p)).collect();
            let lam2 = moduli_chart(&mq, 1).unwrap();
            assert!(lam[0].same_point(&lam2[0], 1e-10));
        }
    }

    #[test]
    fn chart_normalized_quadruple() {
        // q = (1, 0, q3, inf) gives lambda = q3 under the chart formula.
        let q = vec![
            ProjPoint::real(1.0),
            ProjPoint::real(0.0),
            ProjPoint::real(2.75),
            ProjPoint::infinity(),
        ];
        let lam = moduli_chart(&q, 1).unwrap();
        assert!((lam[0].value().unwrap() - r(2.75)).norm() < 1e-14);
    }

    #[test]
    fn chart_anchor_collision_values() {
        // The varying point at an anchor gives deterministic 0 / 1 / inf.
        let anchors = [ProjPoint::real(0.5), ProjPoint::real(2.0), ProjPoint::real(-1.0)];
        for (which, expect) in [(0usize, None), (1, Some(r(1.0))), (2, Some(r(0.0)))] {
            let q = vec![anchors[which], anchors[0], anchors[1], anchors[2]];
            let lam = moduli_chart(&q, 1).unwrap();
            match expect {
                None => assert!(lam[0].value().is_none(), "expected infinity"),
                Some(v) => assert!((lam[0].value().unwrap() - v).norm() < 1e-13),
            }
        }
    }

    #[test]
    fn sign_flip_leaves_chart_fixed() {
        // Flipping every marked sheet and V negates all slopes, which is a
        // Möbius map: the chart point is unchanged.
        let curve = marked_elliptic();
        let m = sample_triple(&curve);
        let lam1 = moduli_chart(&scattering_slopes(&m, &curve).unwrap(), 1).unwrap();
        let flipped_marked: Vec<MarkedPoint> = curve
            .marked()
            .iter()
            .map(|p| MarkedPoint { z: p.z, y: -p.y })
            .collect();
        let curve2 = curve.clone().with_marked(flipped_marked).unwrap();
        let m2 = MumfordTriple { u: m.u.clone(), v: -&m.v, w: m.w.clone() };
        let lam2 = moduli_chart(&scattering_slopes(&m2, &curve2).unwrap(), 1).unwrap();
        assert!(lam1[0].same_point(&lam2[0], 1e-9));
    }

    #[test]
    fn branch_value_is_c_independent() {
        let curve = marked_elliptic();
        let m = sample_triple(&curve);
        let b1 = amplitude_branch(&m, &curve, &[r(9.0)]).unwrap().finite().unwrap();
        let b2 = amplitude_branch(&m, &curve, &[C::new(4.0, 2.0)]).unwrap().finite().unwrap();
        assert!((b1 - b2).abs() < 1e-6 * b1.abs(), "{b1} vs {b2}");
    }

    #[test]
    fn branch_matches_flow_finite_differences() {
        // Along the Lax flow, dlambda/dtau must equal det(lamdot); compare
        // the analytic branch with a centered difference of the chart.
        let curve = marked_elliptic();
        let m = sample_triple(&curve);
        let c = r(9.0);
        let branch = amplitude_branch(&m, &curve, &[c]).unwrap().finite().unwrap();

        let h = 1e-4;
        let fp = lax_flow(&curve, &m, c, h, 64).unwrap().triple;
        let fm = lax_flow(&curve, &m, c, -h, 64).unwrap().triple;
        let lp = moduli_chart(&scattering_slopes(&fp, &curve).unwrap(), 1).unwrap()[0]
            .value()
            .unwrap();
        let lm = moduli_chart(&scattering_slopes(&fm, &curve).unwrap(), 1).unwrap()[0]
            .value()
            .unwrap();
        let lamdot = (lp - lm) / (2.0 * h);
        // omega(F) = t' / s with t' = -y(t): unit pairing at genus 1.
        let t0 = m.divisor_t()[0];
        let s0 = m.v.eval(&t0);
        let tdot = -m.u.coeffs()[0]; // placeholder, recomputed below
        let _ = tdot;
        let tang = lax_field(&m, c);
        let td = -tang.udot.eval(&t0) / m.u.derivative().eval(&t0);
        let omega = td / s0;
        let expected = (omega / lamdot).norm();
        assert!(
            (branch - expected).abs() < 1e-5 * branch.abs(),
            "branch {branch} vs flow estimate {expected}"
        );
    }
}

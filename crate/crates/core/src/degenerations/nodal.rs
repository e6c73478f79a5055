//! Closed forms of the amplitude map for the two genus-1 degenerations:
//! the irreducible nodal curve and the two-component two-channel curve.


use crate::error::{Error, Result};
use crate::scalars::{cross_ratio, Poly, ProjPoint, C};

fn check_nonzero_distinct(p: &[C; 4]) -> Result<()> {
    for (i, x) in p.iter().enumerate() {
        if x.norm() == 0.0 {
            return Err(Error::Invalid(format!("marked point {} must be nonzero", i + 1)));
        }
        for (j, y) in p.iter().enumerate().skip(i + 1) {
            if (x - y).norm() <= 1e-13 * x.norm().max(y.norm()) {
                return Err(Error::Invalid(format!(
                    "marked points {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Amplitude map of the irreducible nodal genus-1 curve with marked points
/// `p_i` on the smooth locus: the cross-ratio of the four entries
/// `p_i + z/p_i`, a 2:1 map of the class coordinate `z` with
/// `lambda(0) = lambda(inf) = [p1 : p2 ; p3 : p4]`.
pub fn nodal_genus1_lambda(z: C, p: &[C; 4]) -> Result<ProjPoint> {
    check_nonzero_distinct(p)?;
    if z.norm().is_infinite() {
        let e: Vec<ProjPoint> = p.iter().map(|&x| ProjPoint::finite(1.0 / x)).collect();
        return cross_ratio(&e[0], &e[1], &e[2], &e[3])
            .map_err(|_| Error::Chart("chart degenerates at this z".into()));
    }
    let e: Vec<ProjPoint> = p.iter().map(|&x| ProjPoint::finite(x + z / x)).collect();
    cross_ratio(&e[0], &e[1], &e[2], &e[3])
        .map_err(|_| Error::Chart("chart degenerates at this z".into()))
}

/// The two class coordinates `z` mapping to a given `lambda` under the
/// nodal genus-1 amplitude map, as roots of the defining quadratic. Their
/// product is always `p1 p2 p3 p4`.
pub fn nodal_genus1_preimages(lambda: &ProjPoint, p: &[C; 4]) -> Result<Vec<C>> {
    check_nonzero_distinct(p)?;
    // (p4-p1)(p2-p3)(p1p4 - z)(p2p3 - z) = lambda (p2-p1)(p4-p3)(p1p2 - z)(p3p4 - z)
    let k1 = (p[3] - p[0]) * (p[1] - p[2]);
    let k2 = (p[1] - p[0]) * (p[3] - p[2]);
    let (la, lb) = (lambda.a, lambda.b);
    let s1 = p[0] * p[3] + p[1] * p[2];
    let s2 = p[0] * p[1] + p[2] * p[3];
    let prod = p[0] * p[1] * p[2] * p[3];
    let c2 = lb * k1 - la * k2;
    let c1 = -(lb * k1 * s1 - la * k2 * s2);
    let c0 = (lb * k1 - la * k2) * prod;
    solve_quadratic(c2, c1, c0)
}

fn solve_quadratic(a: C, b: C, c: C) -> Result<Vec<C>> {
    if a.norm() <= 1e-14 * (b.norm() + c.norm()) {
        if b.norm() == 0.0 {
            return Err(Error::Degenerate("quadratic degenerates to a constant".into()));
        }
        return Ok(vec![-c / b]);
    }
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Stable pairing: pick the root with larger magnitude first.
    let q = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
    let r1 = -q / (2.0 * a);
    let r2 = if r1.norm() > 0.0 { c / (a * r1) } else { (-b + disc) / (2.0 * a) };
    Ok(vec![r1, r2])
}

/// Amplitude map of the two-channel genus-1 curve:
/// `lambda(z) = (z p4 - p1)(p2 - z p3) / (z (p2 - p1)(p4 - p3))`,
/// with `lambda(0) = lambda(inf) = inf`.
pub fn twochannel_genus1_lambda(z: C, p: &[C; 4]) -> Result<ProjPoint> {
    check_nonzero_distinct(p)?;
    let k2 = (p[1] - p[0]) * (p[3] - p[2]);
    if k2.norm() == 0.0 {
        return Err(Error::Invalid("degenerate marked points".into()));
    }
    if z.norm().is_infinite() {
        return Ok(ProjPoint::infinity());
    }
    let num = (z * p[3] - p[0]) * (p[1] - z * p[2]);
    let den = z * k2;
    if num.norm() == 0.0 && den.norm() == 0.0 {
        return Err(Error::Chart("chart degenerates at this z".into()));
    }
    Ok(ProjPoint::new(num, den))
}

/// Discriminant of the defining equation of the two-channel map, viewed as
/// a quadratic in `z`, returned as a quadratic polynomial in `lambda`.
/// Its roots are the two branch values of the 2:1 map.
pub fn twochannel_discriminant(p: &[C; 4]) -> Result<Poly<C>> {
    check_nonzero_distinct(p)?;
    let k2 = (p[1] - p[0]) * (p[3] - p[2]);
    let s = p[1] * p[3] + p[0] * p[2];
    let prod = p[0] * p[1] * p[2] * p[3];
    // (s - lambda k2)^2 - 4 p1 p2 p3 p4
    Ok(Poly::from_coeffs(vec![s * s - 4.0 * prod, -2.0 * k2 * s, k2 * k2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps() -> [C; 4] {
        [C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(3.0, 0.0), C::new(4.0, 0.0)]
    }

    fn lam(z: f64) -> C {
        nodal_genus1_lambda(C::new(z, 0.0), &ps()).unwrap().value().unwrap()
    }

    #[test]
    fn log_pole_at_origin_and_infinity() {
        // lambda(0) = [1:2;3:4] = -3 by the cross-ratio formula.
        let l0 = lam(0.0);
        assert!((l0 - C::new(-3.0, 0.0)).norm() < 1e-13);
        let linf = nodal_genus1_lambda(C::new(f64::INFINITY, 0.0), &ps())
            .unwrap()
            .value()
            .unwrap();
        assert!((linf - l0).norm() < 1e-13);
    }

    #[test]
    fn critical_points_at_sqrt_of_product() {
        // d lambda / dz must vanish at z = +-sqrt(p1 p2 p3 p4) = +-sqrt(24).
        let zc = 24.0f64.sqrt();
        for z in [zc, -zc] {
            let h = 1e-5;
            let d = (lam(z + h) - lam(z - h)) / (2.0 * h);
            assert!(d.norm() < 1e-8 * lam(z).norm().max(1.0), "dlambda/dz = {d} at {z}");
        }
    }

    #[test]
    fn two_to_one_symmetry() {
        // lambda(z) = lambda(P/z) with P = p1 p2 p3 p4 = 24.
        for z in [0.3, 1.7, -5.2, 11.0] {
            let a = lam(z);
            let b = lam(24.0 / z);
            assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
        }
    }

    #[test]
    fn preimage_quadratic_roots() {
        // Random targets have exactly 2 preimages whose product is P.
        for lt in [0.4, -2.0, 5.5] {
            let target = ProjPoint::real(lt);
            let roots = nodal_genus1_preimages(&target, &ps()).unwrap();
            assert_eq!(roots.len(), 2);
            for r in &roots {
                let v = nodal_genus1_lambda(*r, &ps()).unwrap().value().unwrap();
                assert!((v - C::new(lt, 0.0)).norm() < 1e-9 * lt.abs().max(1.0));
            }
            let prod = roots[0] * roots[1];
            assert!((prod - C::new(24.0, 0.0)).norm() < 1e-9 * 24.0);
        }
        // lambda = 0 forces the numerator pairs: roots {p1 p4, p2 p3}.
        let roots = nodal_genus1_preimages(&ProjPoint::real(0.0), &ps()).unwrap();
        let mut got: Vec<f64> = roots.iter().map(|r| r.re).collect();
        got.sort_by(f64::total_cmp);
        assert!((got[0] - 4.0).abs() < 1e-10 && (got[1] - 6.0).abs() < 1e-10);
    }

    #[test]
    fn twochannel_defining_equation_holds() {
        // lambda z (p2-p1)(p4-p3) = (z p4 - p1)(p2 - z p3) identically.
        let p = ps();
        let k2 = (p[1] - p[0]) * (p[3] - p[2]);
        for z in [0.7, -1.3, 4.2] {
            let zc = C::new(z, 0.0);
            let l = twochannel_genus1_lambda(zc, &p).unwrap().value().unwrap();
            let lhs = l * zc * k2;
            let rhs = (zc * p[3] - p[0]) * (p[1] - zc * p[2]);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn twochannel_log_pole_at_infinity() {
        let p = ps();
        for z in [1e-9, 1e9] {
            let l = twochannel_genus1_lambda(C::new(z, 0.0), &p).unwrap();
            assert!(l.value().map(|v| v.norm() > 1e6).unwrap_or(true));
        }
        let linf = twochannel_genus1_lambda(C::new(f64::INFINITY, 0.0), &p).unwrap();
        assert!(linf.value().is_none());
    }

    #[test]
    fn twochannel_critical_values_match_discriminant_roots() {
        let p = ps();
        // Critical points solve z^2 = p1 p2 / (p3 p4).
        let zc = (2.0f64 / 12.0).sqrt();
        let f2 = twochannel_discriminant(&p).unwrap();
        for z in [zc, -zc] {
            let zcx = C::new(z, 0.0);
            let h = 1e-6;
            let lp = twochannel_genus1_lambda(zcx + h, &p).unwrap().value().unwrap();
            let lm = twochannel_genus1_lambda(zcx - h, &p).unwrap().value().unwrap();
            assert!((lp - lm).norm() < 1e-6 * lp.norm(), "not critical at {z}");
            let lval = twochannel_genus1_lambda(zcx, &p).unwrap().value().unwrap();
            assert!(f2.eval(&lval).norm() < 1e-8 * f2.norm_inf(), "critical value off the discriminant");
        }
    }
}

//! Acceptance suite: one test per gate criterion, each printing a
//! PASS/FAIL line. Tolerances are pinned in the assertions.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scatter_core::degenerations::{
    enumerate_multidegrees, nodal_genus1_lambda, twochannel_discriminant,
    twochannel_genus1_lambda, StabilityKind,
};
use scatter_core::hypertrees::{
    amplitude_pullback, brute_force_matching_size, from_triangulation, random_checkerboard,
    trinity_match, trivalent_diagram, verify_matching, CtVerdict, Hypertree, PullbackValue,
};
use scatter_core::mumford::{
    lax_conservation_check, lax_flow, mumford_from_points, mumford_validate,
};
use scatter_core::realscatter::{
    all_components, chart_angles, configs_match_mod_mobius, density_at, elementary_action_divisor,
    elementary_cremona, find_preimages_real, genus1_density, genus2_density_grid,
    montecarlo_pushforward, special_points_table, ComponentIndex, DensityGrid, MCurve, MarkedSpec,
    OvalPoint, PlacementType,
};
use scatter_core::scalars::{agm, cross_ratio, frac, Fraction, Poly, ProjPoint, C};

fn pass(n: usize, what: &str) {
    println!("ACCEPTANCE {n:02} PASS - {what}");
}

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

fn genus1_curve() -> MCurve {
    MCurve::new(
        &[-1.0, 0.0, 1.0],
        &[
            MarkedSpec::Real { x: -0.7, sheet: 1 },
            MarkedSpec::Real { x: 1.3, sheet: 1 },
            MarkedSpec::Real { x: 2.0, sheet: -1 },
            MarkedSpec::Real { x: 3.5, sheet: 1 },
        ],
        PlacementType::A,
    )
    .unwrap()
}

fn genus2_curve() -> MCurve {
    MCurve::new(
        &[0.0, 1.0, 2.0, 3.0, 4.0],
        &[
            MarkedSpec::Real { x: 0.3, sheet: 1 },
            MarkedSpec::Real { x: 2.4, sheet: -1 },
            MarkedSpec::Real { x: 4.5, sheet: 1 },
            MarkedSpec::Real { x: 5.5, sheet: -1 },
            MarkedSpec::Real { x: 7.0, sheet: 1 },
        ],
        PlacementType::A,
    )
    .unwrap()
}

fn genus2_curve_type_b() -> MCurve {
    MCurve::new(
        &[0.0, 1.0, 2.0, 3.0, 4.0],
        &[
            MarkedSpec::Real { x: 0.3, sheet: 1 },
            MarkedSpec::Real { x: 2.4, sheet: -1 },
            MarkedSpec::Real { x: 4.5, sheet: 1 },
            MarkedSpec::Conj { re: 1.5, im: 1.2, conj_pair: 5 },
            MarkedSpec::Conj { re: 1.5, im: -1.2, conj_pair: 4 },
        ],
        PlacementType::B,
    )
    .unwrap()
}

#[test]
fn criterion_01_hypertree_gate() {
    let wheel = Hypertree::new(4, vec![[1, 2, 4], [2, 3, 4]]).unwrap();
    assert_eq!(wheel.check_ct().unwrap(), CtVerdict::Ct);

    let dup = Hypertree::new(4, vec![[1, 2, 3], [1, 2, 3]]).unwrap();
    match dup.check_ct().unwrap() {
        CtVerdict::Violating(s) => assert_eq!(s, vec![0, 1]),
        CtVerdict::Ct => panic!("duplicated triple must violate the covering condition"),
    }

    let tri = scatter_core::hypertrees::octahedron();
    let (black, white) = from_triangulation(&tri).unwrap();
    assert_eq!(black.check_ct().unwrap(), CtVerdict::Ct);
    assert_eq!(white.check_ct().unwrap(), CtVerdict::Ct);
    assert_eq!((black.n(), black.d()), (6, 4));
    pass(1, "wheel CT, duplicate violates, octahedron gives two CT hypertrees");
}

#[test]
fn criterion_02_trinity_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut count = 0;
    while count < 100 {
        let tri = random_checkerboard(20, &mut rng);
        let whites = tri.faces_of_color(scatter_core::hypertrees::FaceColor::White);
        let outer = whites[count % whites.len()];
        let m = trinity_match(&tri, outer).unwrap();
        verify_matching(&tri, outer, &m).unwrap();
        let interior = tri.n() - 3;
        assert_eq!(m.pairs.len(), interior);
        assert_eq!(
            brute_force_matching_size(&tri, outer),
            interior,
            "independent matcher disagrees on feasibility"
        );
        count += 1;
    }
    pass(2, "trinity matching perfect and feasible on 100 triangulations");
}

#[test]
fn criterion_03_four_wheel_components() {
    let g = scatter_core::degenerations::wheel_graph(4);
    let stable = enumerate_multidegrees(&g, 2, StabilityKind::Stable).unwrap();
    let semi = enumerate_multidegrees(&g, 2, StabilityKind::Semistable).unwrap();
    let stable_d: Vec<Vec<i64>> = stable.iter().map(|m| m.d.clone()).collect();
    assert_eq!(stable_d, vec![vec![0, 1, 0, 1], vec![1, 0, 1, 0]]);
    let strictly: Vec<Vec<i64>> = semi
        .iter()
        .filter(|m| !stable.contains(m))
        .map(|m| m.d.clone())
        .collect();
    assert_eq!(
        strictly,
        vec![vec![0, 0, 1, 1], vec![0, 1, 1, 0], vec![1, 0, 0, 1], vec![1, 1, 0, 0]]
    );
    pass(3, "4-wheel: 2 stable and 4 strictly semistable multidegrees");
}

#[test]
fn criterion_04_nodal_closed_forms() {
    let p = [r(1.0), r(2.0), r(3.0), r(4.0)];
    let lam0 = cross_ratio(
        &ProjPoint::real(1.0),
        &ProjPoint::real(2.0),
        &ProjPoint::real(3.0),
        &ProjPoint::real(4.0),
    )
    .unwrap()
    .value()
    .unwrap();
    let at = |z: f64| nodal_genus1_lambda(r(z), &p).unwrap().value().unwrap();
    assert!((at(0.0) - lam0).norm() < 1e-12);
    let at_inf = nodal_genus1_lambda(C::new(f64::INFINITY, 0.0), &p)
        .unwrap()
        .value()
        .unwrap();
    assert!((at_inf - lam0).norm() < 1e-12);

    // Critical points at +-sqrt(p1 p2 p3 p4) = +-sqrt(24), via centered
    // differences.
    for z in [24.0f64.sqrt(), -(24.0f64.sqrt())] {
        let h = 1e-5;
        let d = (at(z + h) - at(z - h)) / (2.0 * h);
        assert!(d.norm() < 1e-8 * at(z).norm().max(1.0), "derivative {d} at {z}");
    }

    // Two-channel: poles of lambda at z in {0, inf} and critical values on
    // the discriminant quadratic.
    let tc = |z: f64| twochannel_genus1_lambda(r(z), &p).unwrap();
    assert!(tc(1e-10).value().map(|v| v.norm() > 1e8).unwrap_or(true));
    assert!(tc(1e10).value().map(|v| v.norm() > 1e8).unwrap_or(true));
    let f2 = twochannel_discriminant(&p).unwrap();
    let zc = (p[0] * p[1] / (p[2] * p[3])).sqrt();
    for z in [zc, -zc] {
        let h = C::new(1e-6, 0.0);
        let lp = twochannel_genus1_lambda(z + h, &p).unwrap().value().unwrap();
        let lm = twochannel_genus1_lambda(z - h, &p).unwrap().value().unwrap();
        assert!((lp - lm).norm() < 1e-8 * lp.norm().max(1.0), "not critical at {z}");
        let lv = twochannel_genus1_lambda(z, &p).unwrap().value().unwrap();
        assert!(
            f2.eval(&lv).norm() < 1e-8 * f2.norm_inf() * lv.norm().max(1.0),
            "critical value {lv} off the discriminant"
        );
    }
    pass(4, "nodal and two-channel closed forms: poles and critical points");
}

#[test]
fn criterion_05_matrix_model_invariants() {
    // Construction residual < 1e-12.
    let mc = genus2_curve();
    let curve = mc.curve();
    let ts = [r(0.4), r(2.6)];
    let ss = [curve.y_at(ts[0]), -curve.y_at(ts[1])];
    let m = mumford_from_points(curve, &ts, &ss).unwrap();
    let rep = mumford_validate(&m, curve);
    assert!(rep.degrees_ok);
    assert!(rep.residual < 1e-12, "construction residual {}", rep.residual);

    // Unit-time RK4 flow with 1000 steps stays within 1e-8.
    let out = lax_flow(curve, &m, r(6.0), 1.0, 1000).unwrap();
    assert!(out.completed);
    let rep = mumford_validate(&out.triple, curve);
    assert!(rep.residual < 1e-8, "flow residual {}", rep.residual);

    // Exact conservation over rationals at g <= 3, corrected variant;
    // the printed variant fails with defect exactly -U(c) U V.
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let q = |rng: &mut ChaCha8Rng| frac(rng.gen_range(-9i64..9), rng.gen_range(1i64..7));
    for g in 1usize..=3 {
        let mut ucoef: Vec<Fraction> = (0..g).map(|_| q(&mut rng)).collect();
        ucoef.push(frac(1, 1));
        let u: Poly<Fraction> = Poly::from_coeffs(ucoef);
        let v: Poly<Fraction> = Poly::from_coeffs((0..g).map(|_| q(&mut rng)).collect());
        let mut wcoef: Vec<Fraction> = (0..=g).map(|_| q(&mut rng)).collect();
        wcoef.push(frac(1, 1));
        let w: Poly<Fraction> = Poly::from_coeffs(wcoef);
        let c = q(&mut rng);
        let (ok, defect_ok) = lax_conservation_check(&u, &v, &w, &c);
        assert!(ok, "corrected tangent violates conservation at genus {g}");
        assert!(defect_ok, "printed-variant defect is not -U(c)UV at genus {g}");
    }
    pass(5, "triple residuals, flow isospectrality, exact conservation identity");
}

#[test]
fn criterion_06_elliptic_flow_quadrature() {
    // The Lax flow at genus 1 is dt/dtau = -y(t); integrate the same
    // motion through the smooth oval angle (an independent scalar ODE)
    // and compare positions after T = 1.
    let mc = genus1_curve();
    let curve = mc.curve();
    let t0 = -0.5f64;
    let s0 = curve.y_at(r(t0));
    let m = mumford_from_points(curve, &[r(t0)], &[s0]).unwrap();
    let flow = lax_flow(curve, &m, r(5.0), 1.0, 1000).unwrap();
    assert!(flow.completed);
    let t_flow = flow.triple.divisor_t()[0];

    // Oval angle on [-1, 0]: t = m0 - h cos(phi), s = h sin(phi) sqrt(1-t),
    // and dt/dtau = -s becomes dphi/dtau = -sqrt(1 - t(phi)).
    let (m0, h) = (-0.5f64, 0.5f64);
    let t_of = |phi: f64| m0 - h * phi.cos();
    let rhs = |phi: f64| -(1.0 - t_of(phi)).sqrt();
    let mut phi = ((m0 - t0) / h).acos(); // phi with sin(phi) > 0: sheet +
    assert!((t_of(phi) - t0).abs() < 1e-14);
    let steps = 200_000;
    let dt = 1.0 / steps as f64;
    for _ in 0..steps {
        let k1 = rhs(phi);
        let k2 = rhs(phi + 0.5 * dt * k1);
        let k3 = rhs(phi + 0.5 * dt * k2);
        let k4 = rhs(phi + dt * k3);
        phi += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
    let t_oracle = t_of(phi);
    assert!(
        (t_flow.re - t_oracle).abs() < 1e-6 && t_flow.im.abs() < 1e-9,
        "flow endpoint {t_flow} vs oval quadrature {t_oracle}"
    );
    pass(6, "genus-1 Lax flow matches the oval quadrature over T = 1");
}

#[test]
fn criterion_07_degree_two_to_g_localization() {
    // Twenty random targets per genus, each with exactly one preimage in
    // every real component at residual < 1e-8.
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mc1 = genus1_curve();
    let comps1 = all_components(1);
    assert_eq!(comps1.len(), 2);
    for _ in 0..20 {
        let x = rng.gen_range(-0.95..-0.05);
        let sheet = if rng.gen_bool(0.5) { 1 } else { -1 };
        let m = mc1.huisman_point(&[OvalPoint::Finite { x, sheet }]).unwrap();
        let target = chart_angles(&mc1, &m).unwrap();
        let hits = find_preimages_real(&mc1, &target, &comps1).unwrap();
        assert_eq!(hits.iter().filter(|h| h.triple.is_some()).count(), 2);
        for h in &hits {
            assert!(h.residual < 1e-8, "{:?} residual {}", h.component, h.residual);
        }
    }

    let mc2 = genus2_curve();
    let comps2 = all_components(2);
    assert_eq!(comps2.len(), 4);
    let expected: Vec<ComponentIndex> = vec![
        ComponentIndex::from_ovals(&[1]),
        ComponentIndex::from_ovals(&[2]),
        ComponentIndex::from_ovals(&[3]),
        ComponentIndex::huisman(2),
    ];
    for k in 0..20 {
        let x1 = rng.gen_range(0.05..0.95);
        let x2 = rng.gen_range(2.05..2.95);
        let s1 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let s2 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let m = mc2
            .huisman_point(&[
                OvalPoint::Finite { x: x1, sheet: s1 },
                OvalPoint::Finite { x: x2, sheet: s2 },
            ])
            .unwrap();
        let target = chart_angles(&mc2, &m).unwrap();
        let hits = find_preimages_real(&mc2, &target, &comps2).unwrap();
        let found: Vec<ComponentIndex> = hits
            .iter()
            .filter(|h| h.triple.is_some())
            .map(|h| h.component)
            .collect();
        let mut sorted = found.clone();
        sorted.sort();
        let mut want = expected.clone();
        want.sort();
        assert_eq!(sorted, want, "target {k}: preimages in wrong components");
        for h in &hits {
            assert!(h.residual < 1e-8, "{:?} residual {}", h.component, h.residual);
            let t = h.triple.as_ref().unwrap();
            assert_eq!(mc2.component_of_triple(t).unwrap(), h.component);
        }
    }
    pass(7, "2 and 4 real preimages, one per component, residual < 1e-8");
}

#[test]
fn criterion_08_agm_identity() {
    // integral over R of dx / sqrt((x^2+a^2)(x^2+b^2)) = pi / agm(a, b).
    // Quadrature oracle: substitute x = tan(u); the integrand extends
    // smoothly to the closed interval.
    let quad = |a: f64, b: f64| -> f64 {
        let n = 20_000usize;
        let h = PI / n as f64;
        let f = |u: f64| {
            let c = u.cos();
            if c.abs() < 1e-300 {
                return 1.0; // limit value at the endpoints
            }
            let x = u.tan();
            (1.0 / ((x * x + a * a) * (x * x + b * b)).sqrt()) / (c * c)
        };
        // Simpson on [-pi/2, pi/2].
        let mut acc = f(-PI / 2.0) + f(PI / 2.0);
        for k in 1..n {
            let u = -PI / 2.0 + k as f64 * h;
            acc += f(u) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    for a in [0.5, 1.0, 2.0, 5.0] {
        for b in [0.5, 1.0, 2.0, 5.0] {
            if a == b {
                continue;
            }
            let lhs = quad(a, b);
            let rhs = PI / agm(a, b).unwrap();
            assert!(
                (lhs - rhs).abs() < 1e-8,
                "quadrature {lhs} vs pi/agm {rhs} at ({a}, {b})"
            );
        }
    }
    pass(8, "integral dx/sqrt((x^2+a^2)(x^2+b^2)) = pi/agm(a,b) to 1e-8");
}

/// Least-squares quartic fit of 1/rho^2 with relative weighting; returns
/// (coefficients, max relative residual).
fn fit_reciprocal_square(grid: &DensityGrid) -> (Vec<f64>, f64) {
    let samples: Vec<(f64, f64)> = grid
        .lambda_axis
        .iter()
        .zip(&grid.rho_lambda)
        .filter(|(l, &r)| r > 0.0 && l.abs() < 1e6)
        .map(|(&l, &r)| (l, 1.0 / (r * r)))
        .collect();
    let k = 5;
    let mut ata = vec![vec![0.0f64; k]; k];
    let mut atb = vec![0.0f64; k];
    for &(l, y) in &samples {
        let row: Vec<f64> = (0..k).map(|p| l.powi(p as i32) / y).collect();
        for i in 0..k {
            for j in 0..k {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i];
        }
    }
    // Gaussian elimination with partial pivoting.
    let n = k;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| ata[i][col].abs().total_cmp(&ata[j][col].abs()))
            .unwrap();
        ata.swap(col, piv);
        atb.swap(col, piv);
        for row in col + 1..n {
            let f = ata[row][col] / ata[col][col];
            for kk in col..n {
                ata[row][kk] -= f * ata[col][kk];
            }
            atb[row] -= f * atb[col];
        }
    }
    let mut coeffs = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = atb[row];
        for kk in row + 1..n {
            acc -= ata[row][kk] * coeffs[kk];
        }
        coeffs[row] = acc / ata[row][row];
    }
    let rel = samples
        .iter()
        .map(|&(l, y)| {
            let p: f64 = coeffs.iter().enumerate().map(|(i, c)| c * l.powi(i as i32)).sum();
            ((p - y) / y).abs()
        })
        .fold(0.0f64, f64::max);
    (coeffs, rel)
}

fn real_root_count(coeffs: &[f64]) -> usize {
    let p = Poly::from_real_coeffs(coeffs);
    let roots = p.complex_roots();
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    roots.iter().filter(|z| z.im.abs() < 1e-6 * scale).count()
}

#[test]
fn criterion_09_genus1_density_quartic() {
    let mc = genus1_curve();
    let grid = genus1_density(&mc, ComponentIndex::huisman(1), 601).unwrap();
    assert_eq!(grid.empty_cells, 0);
    assert!((grid.mass - 1.0).abs() < 1e-6, "mass {}", grid.mass);
    let (coeffs, rel) = fit_reciprocal_square(&grid);
    assert!(rel < 1e-4, "quartic fit residual {rel}");
    assert_eq!(real_root_count(&coeffs), 0, "Huisman quartic must have no real roots");
    pass(9, "1/rho^2 is a quartic (residual < 1e-4) without real roots");
}

#[test]
fn criterion_10_genus2_huisman_density() {
    let mc = genus2_curve();
    let res = 20usize;
    let sub = 3usize;
    let fine = genus2_density_grid(&mc, ComponentIndex::huisman(2), res * sub).unwrap();
    assert_eq!(fine.empty_cells, 0, "Huisman grid has empty cells");
    assert!(fine.rho_u.iter().all(|&x| x > 0.0), "Huisman grid not strictly positive");
    assert!((fine.mass - 1.0).abs() < 1e-3, "grid mass {}", fine.mass);

    // Monte Carlo cross-check at 1e5 samples: expected counts are
    // sub-cell-aggregated from the fine grid.
    let n = 100_000usize;
    let hist = montecarlo_pushforward(&mc, ComponentIndex::huisman(2), res, n, 99).unwrap();
    let du = PI / (res * sub) as f64;
    let fres = res * sub;
    let mut within = 0usize;
    let mut occupied = 0usize;
    for i in 0..res {
        for j in 0..res {
            let mut e = 0.0;
            for a in 0..sub {
                for b in 0..sub {
                    e += fine.rho_u[(i * sub + a) * fres + (j * sub + b)] * du * du;
                }
            }
            let e = e * n as f64;
            let c = hist.counts[i * res + j] as f64;
            if e >= 1.0 {
                occupied += 1;
                if (c - e).abs() <= 3.0 * e.sqrt().max(1.0) {
                    within += 1;
                }
            }
        }
    }
    assert!(
        within as f64 >= 0.95 * occupied as f64,
        "{within}/{occupied} bins within 3 sigma"
    );
    pass(10, "Huisman grid positive, mass 1 +- 1e-3, Monte Carlo within 3 sigma");
}

#[test]
fn criterion_11_singular_growth_law() {
    // Non-Huisman component {1}: the contracted locus maps to the single
    // chart point o given by the marked-point projections. Along rays
    // through o the density grows like (ray limit)/distance, and the ray
    // limit vanishes along one direction: the zero-density line.
    let mc = genus2_curve();
    let comp = ComponentIndex::from_ovals(&[1]);
    let zs: Vec<f64> = [0.3, 2.4, 4.5, 5.5, 7.0].to_vec();
    let crv = |a: f64, b: f64, c: f64, d: f64| (d - a) * (b - c) / ((b - a) * (d - c));
    let o = [
        crv(zs[0], zs[2], zs[3], zs[4]).atan(),
        crv(zs[1], zs[2], zs[3], zs[4]).atan(),
    ];

    let mut evaluator =
        scatter_core::realscatter::ComponentDensity::new(&mc, comp).unwrap();

    // Direction scan at a fixed radius: the limit function of the rays,
    // whose minimum marks the zero-density line through o.
    let scan_dist = 0.03;
    let mut scan: Vec<Option<f64>> = Vec::new();
    for s in 0..48 {
        let angle = 2.0 * PI * s as f64 / 48.0;
        let dir = [angle.cos(), angle.sin()];
        evaluator.reset();
        // Walk inward so the solver continues its branch to the radius.
        let mut last = None;
        for dist in [0.24, 0.12, 0.06, scan_dist] {
            let target = [o[0] + dist * dir[0], o[1] + dist * dir[1]];
            last = evaluator.at(&target);
        }
        if let Some(rho) = last {
            assert!(rho.is_finite() && rho >= 0.0);
        }
        scan.push(last.map(|rho| rho * scan_dist));
    }
    let found: Vec<f64> = scan.iter().flatten().copied().collect();
    assert!(found.len() >= 40, "too many unsolved directions: {}", 48 - found.len());
    let smax = found.iter().copied().fold(0.0f64, f64::max);
    let smin = found.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(smax > 0.0 && smax.is_finite());
    assert!(
        smin < 0.05 * smax,
        "no zero-density direction through the singular point: min {smin}, max {smax}"
    );
    // Directions where the solve degenerates must sit inside the
    // zero-density dip: their neighbors carry near-zero limits.
    for s in 0..48 {
        if scan[s].is_none() {
            let nb = [scan[(s + 47) % 48], scan[(s + 1) % 48]];
            let small = nb
                .iter()
                .flatten()
                .all(|&v| v < 0.05 * smax);
            assert!(small, "unsolved direction {s} off the zero line");
        }
    }

    // Dyadic approach along rays: rho * dist stabilizes within 5% on the
    // generic (non-zero-line) directions.
    let mut stabilized = 0;
    let mut attempted = 0;
    for ray in 0..8 {
        let angle = 2.0 * PI * ray as f64 / 8.0 + 0.17;
        let dir = [angle.cos(), angle.sin()];
        let mut vals = Vec::new();
        evaluator.reset();
        for k in 3..=7 {
            let dist = 0.5f64.powi(k);
            let target = [o[0] + dist * dir[0], o[1] + dist * dir[1]];
            match evaluator.at(&target) {
                Some(rho) => vals.push(rho * dist),
                None => break,
            }
        }
        if vals.len() < 4 {
            continue; // zero-line neighborhood: the branch degenerates
        }
        attempted += 1;
        let tail = &vals[vals.len() - 3..];
        let stable = tail.windows(2).all(|w| (w[1] / w[0] - 1.0).abs() < 0.05);
        assert!(stable, "ray {ray}: rho*dist not stabilizing: {vals:?}");
        assert!(vals.iter().all(|v| v.is_finite() && *v > 0.0));
        stabilized += 1;
    }
    assert!(
        attempted >= 3 && stabilized == attempted,
        "too few generic rays stabilized: {stabilized}/{attempted}"
    );
    pass(11, "rho * distance stabilizes per ray with a zero-density line through o");
}

#[test]
fn criterion_12_special_points_table() {
    let expect_a = |table: &scatter_core::realscatter::SpecialPointsTable| {
        let h = ComponentIndex::huisman(2);
        let c = |o: &[usize]| Some(ComponentIndex::from_ovals(o));
        assert_eq!(table.get(None).unwrap().component, Some(h));
        for ij in [[4usize, 5], [3, 4], [3, 5]] {
            assert_eq!(table.get(Some(&ij)).unwrap().component, Some(h));
        }
        for idx in [vec![1usize], vec![2, 3], vec![2, 4], vec![2, 5]] {
            assert_eq!(table.get(Some(&idx)).unwrap().component, c(&[1]));
        }
        for idx in [vec![2usize], vec![1, 3], vec![1, 4], vec![1, 5]] {
            assert_eq!(table.get(Some(&idx)).unwrap().component, c(&[2]));
        }
        for idx in [vec![3usize], vec![4], vec![5], vec![1, 2]] {
            assert_eq!(table.get(Some(&idx)).unwrap().component, c(&[3]));
        }
    };
    let ta = special_points_table(&genus2_curve()).unwrap();
    expect_a(&ta);
    assert!(ta.non_real().is_empty());

    let tb = special_points_table(&genus2_curve_type_b()).unwrap();
    let h = ComponentIndex::huisman(2);
    let c = |o: &[usize]| Some(ComponentIndex::from_ovals(o));
    assert_eq!(tb.get(None).unwrap().component, Some(h));
    assert_eq!(tb.get(Some(&[4, 5])).unwrap().component, Some(h));
    assert_eq!(tb.get(Some(&[1])).unwrap().component, c(&[1]));
    assert_eq!(tb.get(Some(&[2, 3])).unwrap().component, c(&[1]));
    assert_eq!(tb.get(Some(&[2])).unwrap().component, c(&[2]));
    assert_eq!(tb.get(Some(&[1, 3])).unwrap().component, c(&[2]));
    assert_eq!(tb.get(Some(&[3])).unwrap().component, c(&[3]));
    assert_eq!(tb.get(Some(&[1, 2])).unwrap().component, c(&[3]));
    assert_eq!(tb.non_real().len(), 8);
    pass(12, "special classes distribute per table in both placements");
}

#[test]
fn criterion_13_square_move() {
    // The two MHV components of the 4-wheel: multidegrees (1,0,1,0) and
    // (0,1,0,1) assemble to the two hypertrees below. Their pullback
    // densities in the 4-point chart agree pointwise and both have simple
    // poles exactly at 0 and infinity.
    let ht1 = Hypertree::new(4, vec![[1, 2, 4], [2, 3, 4]]).unwrap();
    let ht2 = Hypertree::new(4, vec![[1, 2, 3], [1, 3, 4]]).unwrap();
    let chart = [[1usize, 2, 3, 4]];
    let mut pole_products = Vec::new();
    for q3 in [0.05, 0.2, 0.9, 2.5, 12.0, 80.0] {
        let q = [
            ProjPoint::real(1.0),
            ProjPoint::real(0.0),
            ProjPoint::real(q3),
            ProjPoint::infinity(),
        ];
        let lam = cross_ratio(&q[0], &q[1], &q[2], &q[3])
            .unwrap()
            .value()
            .unwrap()
            .norm();
        let p1 = match amplitude_pullback(&ht1, &q, &chart).unwrap() {
            PullbackValue::Finite(x) => x,
            PullbackValue::Singular => panic!("singular pullback"),
        };
        let p2 = match amplitude_pullback(&ht2, &q, &chart).unwrap() {
            PullbackValue::Finite(x) => x,
            PullbackValue::Singular => panic!("singular pullback"),
        };
        assert!(
            (p1 - p2).abs() <= 1e-8 * p1.abs().max(1e-12),
            "square move broken at q3 = {q3}: {p1} vs {p2}"
        );
        pole_products.push(p1 * lam);
    }
    // Simple poles at 0 and infinity: the density is exactly 1/|lambda|
    // in this normalization.
    for p in &pole_products {
        assert!((p - 1.0).abs() < 1e-4, "pole structure drifted: {pole_products:?}");
    }
    pass(13, "square move: identical dlog densities with poles at 0 and infinity");
}

#[test]
fn criterion_14_involutions_and_equivariance() {
    // Cremona involution, exact on pair-normalized configurations.
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let mut z = vec![ProjPoint::real(0.0)];
        let mut q = vec![ProjPoint::real(0.0)];
        for _ in 0..3 {
            z.push(ProjPoint::real(rng.gen_range(0.5..9.0)));
            q.push(ProjPoint::real(rng.gen_range(-5.0..5.0)));
        }
        z.push(ProjPoint::infinity());
        q.push(ProjPoint::infinity());
        let once = elementary_cremona(&z, &q, &[1, 5]).unwrap();
        let twice = elementary_cremona(&z, &once, &[1, 5]).unwrap();
        for (a, b) in twice.iter().zip(&q) {
            assert!(a.same_point(b, 1e-10), "involution drift: {a:?} vs {b:?}");
        }
        // Multi-pair subsets close up to a Möbius map.
        let once = elementary_cremona(&z, &q, &[1, 2, 4, 5]).unwrap();
        let twice = elementary_cremona(&z, &once, &[1, 2, 4, 5]).unwrap();
        assert!(configs_match_mod_mobius(&twice, &q, 1e-10).unwrap());
    }

    // Divisor action vs Cremona two-path comparison on >= 20 random
    // genus-2 samples.
    let mc = genus2_curve();
    let zs: Vec<ProjPoint> = mc
        .curve()
        .marked()
        .iter()
        .map(|p| ProjPoint::finite(p.z))
        .collect();
    let subsets: Vec<Vec<usize>> = vec![
        vec![1, 2],
        vec![1, 4],
        vec![2, 5],
        vec![4, 5],
        vec![1, 2, 4, 5],
    ];
    let mut done = 0;
    while done < 20 {
        let x1 = rng.gen_range(0.05..0.95);
        let x2 = rng.gen_range(2.05..2.95);
        let s1 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let s2 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let m = match mc.huisman_point(&[
            OvalPoint::Finite { x: x1, sheet: s1 },
            OvalPoint::Finite { x: x2, sheet: s2 },
        ]) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let q = scatter_core::mumford::scattering_slopes(&m, mc.curve()).unwrap();
        let subset = &subsets[done % subsets.len()];
        let cremona_q = elementary_cremona(&zs, &q, subset).unwrap();
        let action = elementary_action_divisor(&mc, &m, subset).unwrap();
        let action_q =
            scatter_core::mumford::scattering_slopes(&action.triple, action.curve.curve()).unwrap();
        let la = scatter_core::mumford::moduli_chart(&cremona_q, 2).unwrap();
        let lb = scatter_core::mumford::moduli_chart(&action_q, 2).unwrap();
        for (x, y) in la.iter().zip(&lb) {
            assert!(
                x.same_point(y, 1e-6),
                "two-path drift for {subset:?}: {x:?} vs {y:?}"
            );
        }
        done += 1;
    }
    pass(14, "Cremona involution exact; two-path equivariance on 20 samples");
}

#[test]
fn criterion_15_dimension_identity() {
    // g + n - 1 = 2v - i on every generated trivalent diagram.
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut checked = 0;
    let check = |ht: &Hypertree| {
        let (graph, _deg) = trivalent_diagram(ht).unwrap();
        let g = graph.genus() as i64;
        let n = graph.n_marked() as i64;
        let v = graph.vertex_count() as i64;
        let i = graph.edges().len() as i64;
        assert_eq!(g + n - 1, 2 * v - i, "dimension identity fails for {ht:?}");
    };
    check(&Hypertree::new(4, vec![[1, 2, 4], [2, 3, 4]]).unwrap());
    check(&Hypertree::new(3, vec![[1, 2, 3]]).unwrap());
    check(&Hypertree::new(5, vec![[1, 2, 4], [1, 2, 5], [1, 3, 5]]).unwrap());
    checked += 3;
    for _ in 0..30 {
        let tri = random_checkerboard(20, &mut rng);
        let (black, white) = from_triangulation(&tri).unwrap();
        check(&black);
        check(&white);
        checked += 2;
    }
    assert!(checked >= 60);
    pass(15, "g + n - 1 = 2v - i on every generated trivalent diagram");
}

#[test]
#[ignore = "contingent: the genus-2 compactified-Jacobian component counts (4 MHV + 8 and \
            4 MHV + 11) depend on dual graphs recorded only in a figure; the reconstruction \
            is left open and the counts are not gating"]
fn criterion_16_contingent_component_counts() {
    unimplemented!("requires the figure's dual graphs");
}

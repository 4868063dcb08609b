use std::f64::consts::PI;

use sweepadv::bench::{self, AlphaChoice, Dynamics, Metric, Reference, SchemeKind};
use sweepadv::nonconservative::AlphaPolicy;

/// Central-difference residual of `phi_t + v phi_x` (or `(v phi)_x` when conservative).
fn residual_1d(
    exact: &dyn Fn(f64, f64) -> f64,
    v: &dyn Fn(f64, f64) -> f64,
    conservative: bool,
    x: f64,
    t: f64,
    d: f64,
) -> f64 {
    let pt = (exact(x, t + d) - exact(x, t - d)) / (2.0 * d);
    let px = if conservative {
        (v(x + d, t) * exact(x + d, t) - v(x - d, t) * exact(x - d, t)) / (2.0 * d)
    } else {
        v(x, t) * (exact(x + d, t) - exact(x - d, t)) / (2.0 * d)
    };
    pt + px
}

#[test]
fn one_dimensional_exact_solutions_solve_the_equation() {
    for p in [bench::sine_velocity_1d(), bench::cosine_conservative_1d()] {
        let (q, conservative) = match &p.dynamics {
            Dynamics::NonConservative(q) => (q.clone(), false),
            Dynamics::Conservative(q) => (q.clone(), true),
            Dynamics::Split(_) => unreachable!(),
        };
        let exact = match &p.reference {
            Reference::Exact1D(e) => e.clone(),
            _ => unreachable!(),
        };
        let v = q.velocity.clone();
        for k in 1..40 {
            let x = q.origin + q.length * (k as f64 + 0.37) / 40.0;
            let t = q.final_time * (k % 7 + 1) as f64 / 8.0;
            let r1 = residual_1d(&*exact, &*v, conservative, x, t, 1e-3).abs();
            let r2 = residual_1d(&*exact, &*v, conservative, x, t, 5e-4).abs();
            assert!(r1 < 1e-4, "{} at ({x}, {t}): {r1}", p.name);
            assert!(r2 <= r1 / 3.0 + 1e-9, "{} at ({x}, {t}): {r1} then {r2}", p.name);
        }
    }
}

#[test]
fn optimizer_reference_moves_with_the_flow() {
    let p = bench::optimizer_problem_1d();
    let v = |x: f64, _t: f64| 2.0 + x.sin();
    for k in 0..30 {
        let x = -2.0 + 14.0 * (k as f64 + 0.5) / 30.0;
        let r = residual_1d(&bench::optimizer_exact, &v, false, x, 1.1, 1e-3).abs();
        assert!(r < 1e-4, "{x}: {r}");
    }
    if let Reference::Final1D(e) = &p.reference {
        assert!((e(2.0 * PI) - 1.0).abs() < 1e-15);
    }
}

#[test]
fn two_dimensional_exact_solutions_solve_the_equation() {
    for p in [bench::diagonal_2d(), bench::rotation_2d()] {
        let q = match &p.dynamics {
            Dynamics::Split(q) => q.clone(),
            _ => unreachable!(),
        };
        let e = match &p.reference {
            Reference::Exact2D(e) => e.clone(),
            _ => unreachable!(),
        };
        let d = 1e-4;
        for k in 1..30 {
            let x = q.origin + q.length * ((k * 7 % 29) as f64 + 0.4) / 29.0;
            let y = q.origin + q.length * ((k * 11 % 29) as f64 + 0.6) / 29.0;
            let t = q.final_time * (k % 5 + 1) as f64 / 6.0;
            let pt = (e(x, y, t + d) - e(x, y, t - d)) / (2.0 * d);
            let px = (e(x + d, y, t) - e(x - d, y, t)) / (2.0 * d);
            let py = (e(x, y + d, t) - e(x, y - d, t)) / (2.0 * d);
            let r = pt + (q.v1)(x, y, t) * px + (q.v2)(x, y, t) * py;
            assert!(r.abs() < 1e-4, "{} at ({x}, {y}, {t}): {r}", p.name);
            assert!((e(x, y, 0.0) - (q.initial)(x, y)).abs() < 1e-10);
        }
    }
}

#[test]
fn deformation_field_is_divergence_free() {
    let d = 1e-4;
    for k in 0..50 {
        let (x, y, t) = (
            (k as f64 * 0.137) % 1.0,
            (k as f64 * 0.291) % 1.0,
            (k as f64 * 0.053) % 1.0,
        );
        let div = (bench::deformation_v1(x + d, y, t) - bench::deformation_v1(x - d, y, t)) / (2.0 * d)
            + (bench::deformation_v2(x, y + d, t) - bench::deformation_v2(x, y - d, t)) / (2.0 * d);
        assert!(div.abs() < 1e-5, "{div}");
    }
}

#[test]
fn diagonal_courant_numbers() {
    let p = bench::diagonal_2d();
    let r = bench::run(&p, 20, 1, SchemeKind::Nc2, &AlphaPolicy::Fixed(0.5), |_, _| {}).unwrap();
    assert!((r.max_courant - 1.6).abs() < 1e-3, "{}", r.max_courant);
}

#[test]
fn every_problem_has_published_targets() {
    for name in bench::PROBLEM_NAMES {
        let p = bench::by_name(name).unwrap();
        assert!(!p.published.is_empty(), "{name}");
        assert_eq!(p.name.split('-').next(), Some(name));
    }
    assert!(bench::by_name("nosuch").is_none());
    let d = bench::deformation_2d(bench::DeformationInit::Distance);
    assert_eq!(d.targets(Metric::FinalError, AlphaChoice::Courant).len(), 4);
}

#[test]
fn table_one_middle_row() {
    let p = bench::sine_velocity_1d();
    let r = bench::run(&p, 160, 4, SchemeKind::Nc2, &AlphaPolicy::Fixed(0.5), |_, _| {}).unwrap();
    let e = r.global_error.unwrap();
    assert!((e - 0.035211).abs() / 0.035211 < 0.02, "{e}");
}

#[test]
fn conservative_mass_is_kept() {
    let p = bench::cosine_conservative_1d();
    for kind in [SchemeKind::Fv1, SchemeKind::Fv2] {
        let r = bench::run(&p, 64, 6, kind, &AlphaPolicy::Fixed(1.0), |_, _| {}).unwrap();
        assert!(r.mass_drift() < 1e-13, "{kind:?}: {}", r.mass_drift());
    }
}

#[test]
fn run_observer_sees_every_level() {
    let p = bench::deformation_2d(bench::DeformationInit::Gaussian);
    let mut seen = Vec::new();
    bench::run(&p, 8, 3, SchemeKind::Nc1, &AlphaPolicy::Fixed(0.0), |n, v| {
        seen.push((n, v.len()))
    })
    .unwrap();
    assert_eq!(seen, vec![(0, 81), (1, 81), (2, 81), (3, 81)]);
    assert!(bench::run(&p, 8, 3, SchemeKind::Fv2, &AlphaPolicy::Fixed(0.5), |_, _| {}).is_err());
}

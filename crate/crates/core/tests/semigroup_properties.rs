//! Flow-semigroup property suite: the quantitative error bound of the
//! exponential formula, its Cauchy refinement property, uniformity on
//! bounded time intervals, nonexpansiveness in the initial point, step
//! sharing, the double-sequence bound, the semigroup law, Fejér
//! monotonicity, and asymptotic-center diagnostics.

mod common;

use catflow_core::catalog;
use catflow_core::{
    asymptotic_center, delta_convergence_check, double_seq_verify, error_bound, exp_formula,
    semigroup_law_residual, trajectory, MonotoneField, Point, ResolventConfig,
};
use rand::Rng;

fn base() -> ResolventConfig {
    ResolventConfig::new(1.0)
}

fn quadratic_cases() -> Vec<(String, MonotoneField, Point)> {
    common::catalog_fields()
        .into_iter()
        .filter(|(label, _)| label.starts_with("quadratic/"))
        .map(|(label, field)| {
            let mut rng = common::rng(0x5E01);
            let x = field.space().sample_point(&mut rng);
            (label, field, x)
        })
        .collect()
}

#[test]
fn errors_stay_under_the_quantitative_bound() {
    let k_ref = 4096u64;
    for (label, field, x) in quadratic_cases() {
        let space = field.space().clone();
        let norm = field.min_norm(&x).unwrap();
        for t in [0.5, 1.0] {
            let reference = exp_formula(&field, &x, t, k_ref, &base()).unwrap();
            let mut k = 1u64;
            while k <= 64 {
                let y = exp_formula(&field, &x, t, k, &base()).unwrap();
                let err = space.distance(&y, &reference).unwrap();
                let allowed = error_bound(norm, t, k) + error_bound(norm, t, k_ref) + 1e-8;
                assert!(
                    err <= allowed,
                    "{label}: error {err} exceeds {allowed} at t={t}, k={k}"
                );
                k *= 2;
            }
        }
    }
}

#[test]
fn refinement_is_cauchy_with_the_proof_rate() {
    for (label, field, x) in quadratic_cases() {
        let space = field.space().clone();
        let norm = field.min_norm(&x).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let mut k = 1u64;
            while k <= 128 {
                let coarse = exp_formula(&field, &x, t, k, &base()).unwrap();
                let fine = exp_formula(&field, &x, t, 2 * k, &base()).unwrap();
                let gap = space.distance(&coarse, &fine).unwrap();
                assert!(
                    gap <= error_bound(norm, t, k) + 1e-8,
                    "{label}: doubling gap {gap} at t={t}, k={k}"
                );
                k *= 2;
            }
        }
    }
}

#[test]
fn errors_are_uniform_on_the_time_interval() {
    let k = 64u64;
    let k_ref = 4096u64;
    for (label, field, x) in quadratic_cases() {
        let space = field.space().clone();
        let norm = field.min_norm(&x).unwrap();
        for i in 0..=20 {
            let t = 2.0 * i as f64 / 20.0;
            let (y, reference) = (
                exp_formula(&field, &x, t, k, &base()).unwrap(),
                exp_formula(&field, &x, t, k_ref, &base()).unwrap(),
            );
            let err = space.distance(&y, &reference).unwrap();
            let allowed = error_bound(norm, t, k) + error_bound(norm, t, k_ref) + 1e-8;
            assert!(
                err <= allowed,
                "{label}: uniformity fails at t={t}: {err} > {allowed}"
            );
        }
    }
}

#[test]
fn flow_is_nonexpansive_in_the_initial_point() {
    for (label, field) in common::catalog_fields() {
        let space = field.space().clone();
        let mut rng = common::rng(0x5E02);
        for _ in 0..200 {
            let x = space.sample_point(&mut rng);
            let y = space.sample_point(&mut rng);
            let fx = exp_formula(&field, &x, 1.0, 32, &base()).unwrap();
            let fy = exp_formula(&field, &y, 1.0, 32, &base()).unwrap();
            let excess = space.distance(&fx, &fy).unwrap() - space.distance(&x, &y).unwrap();
            assert!(excess <= 1e-9, "{label}: flow expands by {excess}");
        }
    }
}

#[test]
fn matched_step_counts_share_the_resolvent_sequence() {
    for (label, field, x) in quadratic_cases() {
        let space = field.space().clone();
        let t = 0.75;
        let k = 16u64;
        // n = 2: identical step sizes, identical sequences.
        let whole = exp_formula(&field, &x, 2.0 * t, 2 * k, &base()).unwrap();
        let half = exp_formula(&field, &x, t, k, &base()).unwrap();
        let composed = exp_formula(&field, &half, t, k, &base()).unwrap();
        let gap2 = space.distance(&whole, &composed).unwrap();
        assert!(gap2 <= 1e-12, "{label}: two-fold composition gap {gap2}");
        // n = 3: the step sizes agree up to one rounding.
        let whole3 = exp_formula(&field, &x, 3.0 * t, 3 * k, &base()).unwrap();
        let two = exp_formula(&field, &composed, t, k, &base()).unwrap();
        let gap3 = space.distance(&whole3, &two).unwrap();
        assert!(gap3 <= 1e-12, "{label}: three-fold composition gap {gap3}");
    }
}

#[test]
fn double_sequence_bound_conforms_on_mixed_schedules() {
    // Uniform schedule on the line.
    let line = common::r1();
    let a = line.point(&[0.0]).unwrap();
    let field = catalog::quadratic(&line, &a).unwrap();
    let x = line.point(&[1.0]).unwrap();
    let schedule = vec![0.5; 8];
    let report = double_seq_verify(&field, &x, 0.5, &schedule, 8, 8, &base()).unwrap();
    assert!(
        report.max_violation <= 1e-7,
        "line grid violation {}",
        report.max_violation
    );

    // Mixed schedule on the tripod, anchored at the branch vertex.
    let t = common::tripod();
    let o = t.vertex("o").unwrap();
    let field = catalog::quadratic(&t, &o).unwrap();
    let x = t.edge_point(1, 0.9).unwrap();
    let schedule = vec![0.5, 0.25, 0.5, 0.125, 0.5, 0.25];
    let report = double_seq_verify(&field, &x, 0.5, &schedule, 6, 6, &base()).unwrap();
    assert!(
        report.max_violation <= 1e-7,
        "tripod grid violation {}",
        report.max_violation
    );
}

#[test]
fn semigroup_law_residuals_fit_the_error_envelope() {
    for (label, field, x) in quadratic_cases() {
        for (s, t) in [(0.5, 0.5), (0.5, 1.0), (1.0, 1.0)] {
            let (residual, envelope) =
                semigroup_law_residual(&field, &x, s, t, 1024, &base()).unwrap();
            assert!(
                residual <= envelope + 1e-8,
                "{label}: law residual {residual} exceeds {envelope} at s={s}, t={t}"
            );
        }
    }
}

#[test]
fn trajectories_are_fejer_monotone() {
    let times: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    // Quadratic fields know their zero set exactly.
    for (label, field, x) in quadratic_cases() {
        let traj = trajectory(&field, &x, &times, 0.05, &base()).unwrap();
        let rise = traj.max_distance_increase().unwrap();
        assert!(rise <= 1e-7, "{label}: distance to the zero set rose by {rise}");
    }
    // Rotation flow circles the origin while contracting toward it.
    let space = common::r2();
    let field =
        catalog::complementary(&space, catalog::MapSpec::Rotation(core::f64::consts::PI / 3.0))
            .unwrap();
    let x = space.point(&[1.0, 0.5]).unwrap();
    let traj = trajectory(&field, &x, &times, 0.05, &base()).unwrap();
    let rise = traj.max_distance_increase().unwrap();
    assert!(rise <= 1e-7, "rotation: distance to the fixed point rose by {rise}");
}

#[test]
fn asymptotic_centers_satisfy_the_opial_comparison() {
    // Alternating line sequence: the center minimizes the max distance.
    let line = common::r1();
    let pts: Vec<Point> = (0..40)
        .map(|i| line.point(&[if i % 2 == 0 { -1.0 } else { 1.0 }]).unwrap())
        .collect();
    let (center, radius) = asymptotic_center(&line, &pts, 1.0).unwrap();
    let tail = &pts[..];
    let mut rng = common::rng(0x5E03);
    for _ in 0..100 {
        let u = line.sample_point(&mut rng);
        if line.distance(&u, &center).unwrap() < 0.1 {
            continue;
        }
        let mut r_u: f64 = 0.0;
        for p in tail {
            r_u = r_u.max(line.distance(&u, p).unwrap());
        }
        assert!(
            radius < r_u,
            "Opial comparison fails: center radius {radius} vs {r_u}"
        );
    }

    // Two tripod legs: the center lands on the branch vertex.
    let t = common::tripod();
    let o = t.vertex("o").unwrap();
    let pts: Vec<Point> = (0..30)
        .map(|i| t.edge_point(i % 2, 1.0).unwrap())
        .collect();
    let (center, radius) = asymptotic_center(&t, &pts, 1.0).unwrap();
    assert!(t.distance(&center, &o).unwrap() <= 1e-6);
    assert!((radius - 1.0).abs() <= 1e-6);
}

#[test]
fn delta_reports_distinguish_convergent_from_oscillating_tails() {
    // A trajectory tail that converges to the anchor passes.
    let space = common::r2();
    let a = space.point(&[0.4, -0.3]).unwrap();
    let field = catalog::quadratic(&space, &a).unwrap();
    let x = space.point(&[1.5, 1.0]).unwrap();
    let times: Vec<f64> = (0..=20).map(|i| 1.2 * i as f64).collect();
    let traj = trajectory(&field, &x, &times, 0.5, &base()).unwrap();
    let points = traj.points();
    let tail = &points[10..];
    let report = delta_convergence_check(&space, tail, &a).unwrap();
    assert!(report.pass, "convergent tail rejected: {}", report.center_distance);
    assert!(report.fejer_nonincreasing);
    assert!(!report.banner.is_empty());

    // An oscillating sequence fails against a wrong candidate.
    let line = common::r1();
    let pts: Vec<Point> = (0..40)
        .map(|i| line.point(&[if i % 2 == 0 { -1.0 } else { 1.0 }]).unwrap())
        .collect();
    let candidate = line.point(&[1.0]).unwrap();
    let report = delta_convergence_check(&line, &pts, &candidate).unwrap();
    assert!(!report.pass);
    assert!(report.center_distance > 0.9);
}

#[test]
fn adaptive_step_counts_hit_the_requested_tolerance() {
    let space = common::r2();
    let a = space.point(&[0.0, 0.0]).unwrap();
    let field = catalog::quadratic(&space, &a).unwrap();
    let mut rng = common::rng(0x5E04);
    for _ in 0..50 {
        let x = space.sample_point(&mut rng);
        let t = 0.25 + 2.0 * rng.gen::<f64>();
        let tol = 0.05 + 0.2 * rng.gen::<f64>();
        let (point, k_used) = catflow_core::semigroup(&field, &x, t, tol, &base()).unwrap();
        let norm = field.min_norm(&x).unwrap();
        assert!(error_bound(norm, t, k_used) <= tol, "bound not met at k={k_used}");
        assert!(k_used.is_power_of_two());
        // The reported point is the matching exponential-formula iterate.
        let direct = exp_formula(&field, &x, t, k_used, &base()).unwrap();
        assert_eq!(space.distance(&point, &direct).unwrap(), 0.0);
    }
}

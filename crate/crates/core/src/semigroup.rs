//! The flow semigroup generated by a monotone field: the exponential
//! formula (iterated resolvents), its quantitative error bound, the
//! double-sequence estimate behind the convergence proof, semigroup-law
//! verification, trajectories with adaptive step counts, and finite-sample
//! diagnostics (Fejér monotonicity, asymptotic centers) standing in for
//! weak-convergence statements.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fields::{MonotoneField, ZeroSetWitness};
use crate::math;
use crate::resolvent::ResolventConfig;
use crate::space::{Point, Space};

/// Largest adaptive step count the semigroup driver will accept.
const MAX_ADAPTIVE_K: u64 = 1 << 40;

/// `J_{t/k}` applied `k` times to `x`; time zero returns `x` unchanged.
/// `base` supplies the tolerance and iteration budget for each resolvent.
pub fn exp_formula(
    field: &MonotoneField,
    x: &Point,
    t: f64,
    k: u64,
    base: &ResolventConfig,
) -> Result<Point> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::DomainError("flow time must be finite and >= 0"));
    }
    if k == 0 {
        return Err(Error::DomainError("step count must be positive"));
    }
    if t == 0.0 {
        return Ok(x.clone());
    }
    let cfg = base.at_lambda(t / k as f64);
    let mut y = x.clone();
    for _ in 0..k {
        y = field.resolve(&cfg, &y)?;
    }
    Ok(y)
}

/// The quantitative error of the exponential formula: `min_norm * 2t / sqrt(k)`
/// bounds the distance from the `k`-step iterate to the flow point.
pub fn error_bound(min_norm: f64, t: f64, k: u64) -> f64 {
    debug_assert!(k >= 1);
    min_norm * 2.0 * t / math::sqrt(k as f64)
}

/// Flow point at time `t` with the step count chosen adaptively: the
/// smallest power of two whose error bound is at most `target_tol`.
/// Stationary points and `t = 0` short-circuit with one step.
pub fn semigroup(
    field: &MonotoneField,
    x: &Point,
    t: f64,
    target_tol: f64,
    base: &ResolventConfig,
) -> Result<(Point, u64)> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::DomainError("flow time must be finite and >= 0"));
    }
    if !(target_tol.is_finite() && target_tol > 0.0) {
        return Err(Error::DomainError("flow target tolerance must be positive"));
    }
    if t == 0.0 {
        return Ok((x.clone(), 1));
    }
    let norm = field.min_norm(x)?;
    if norm == 0.0 {
        return Ok((x.clone(), 1));
    }
    if !norm.is_finite() {
        return Err(Error::NoNormBound);
    }
    let mut k: u64 = 1;
    while error_bound(norm, t, k) > target_tol {
        if k >= MAX_ADAPTIVE_K {
            return Err(Error::DomainError(
                "adaptive step count exceeds the 2^40 cap; loosen the target tolerance",
            ));
        }
        k *= 2;
    }
    Ok((exp_formula(field, x, t, k, base)?, k))
}

/// The double-sequence majorant: with `t_j` the partial sums of the
/// schedule, `sqrt((k l - t_j)^2 + k l^2) + sqrt((k l - t_j)^2 + l t_j)`
/// where `l` is `lambda`. Multiplied by `|Ax|` it dominates the distance
/// between the mixed-step and uniform-step resolvent chains.
pub fn double_seq_bound(lambda: f64, mu_schedule: &[f64], j: usize, k: usize) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::ScheduleError("lambda must be positive"));
    }
    if j > mu_schedule.len() {
        return Err(Error::ScheduleError("index j exceeds the schedule length"));
    }
    for &mu in mu_schedule {
        if !(mu.is_finite() && mu > 0.0 && mu <= lambda) {
            return Err(Error::ScheduleError("every mu must lie in (0, lambda]"));
        }
    }
    let t_j: f64 = mu_schedule[..j].iter().sum();
    let kl = k as f64 * lambda;
    let a = kl - t_j;
    Ok(math::sqrt(a * a + kl * lambda) + math::sqrt(a * a + lambda * t_j))
}

/// One cell of a double-sequence conformance grid.
#[derive(Clone, Copy, Debug)]
pub struct DoubleSeqRow {
    pub j: usize,
    pub k: usize,
    /// Measured distance between the two resolvent chains.
    pub value: f64,
    /// `|Ax|` times the double-sequence majorant.
    pub bound: f64,
}

#[derive(Clone, Debug)]
pub struct DoubleSeqReport {
    pub rows: Vec<DoubleSeqRow>,
    /// Maximum of `value - bound` over the grid; nonpositive (within
    /// tolerance) for conforming fields.
    pub max_violation: f64,
    /// The `|Ax|` estimate used in the bounds.
    pub min_norm: f64,
}

/// Verify the double-sequence estimate on a `(0..=j_max) x (0..=k_max)`
/// grid: the mixed chain applies `J_{mu_1}, ..., J_{mu_j}` in order, the
/// uniform chain applies `J_lambda` `k` times, and every measured distance
/// must stay under `|Ax|` times the majorant.
pub fn double_seq_verify(
    field: &MonotoneField,
    x: &Point,
    lambda: f64,
    mu_schedule: &[f64],
    j_max: usize,
    k_max: usize,
    base: &ResolventConfig,
) -> Result<DoubleSeqReport> {
    if j_max > mu_schedule.len() {
        return Err(Error::ScheduleError(
            "j_max exceeds the mixed-step schedule length",
        ));
    }
    // Validate lambda and the schedule once up front.
    double_seq_bound(lambda, mu_schedule, 0, 0)?;
    let min_norm = field.min_norm(x)?;
    if !min_norm.is_finite() {
        return Err(Error::NoNormBound);
    }
    let space = field.space();
    let mut mixed = Vec::with_capacity(j_max + 1);
    mixed.push(x.clone());
    for &mu in &mu_schedule[..j_max] {
        let next = field.resolve(&base.at_lambda(mu), mixed.last().expect("non-empty"))?;
        mixed.push(next);
    }
    let mut uniform = Vec::with_capacity(k_max + 1);
    uniform.push(x.clone());
    for _ in 0..k_max {
        let next = field.resolve(&base.at_lambda(lambda), uniform.last().expect("non-empty"))?;
        uniform.push(next);
    }
    let mut rows = Vec::with_capacity((j_max + 1) * (k_max + 1));
    let mut max_violation = f64::NEG_INFINITY;
    for (j, mixed_j) in mixed.iter().enumerate() {
        for (k, uniform_k) in uniform.iter().enumerate() {
            let value = space.distance(mixed_j, uniform_k)?;
            let bound = min_norm * double_seq_bound(lambda, mu_schedule, j, k)?;
            max_violation = math::fmax(max_violation, value - bound);
            rows.push(DoubleSeqRow {
                j,
                k,
                value,
                bound,
            });
        }
    }
    Ok(DoubleSeqReport {
        rows,
        max_violation,
        min_norm,
    })
}

/// Distance between the one-shot flow to time `s + t` and the composition
/// of flows to `t` then `s`, both at `k_ref` steps, together with the
/// theoretical envelope `bound(s+t) + bound(s) + bound(t)` at `|Ax|`.
pub fn semigroup_law_residual(
    field: &MonotoneField,
    x: &Point,
    s: f64,
    t: f64,
    k_ref: u64,
    base: &ResolventConfig,
) -> Result<(f64, f64)> {
    if !(s.is_finite() && s >= 0.0 && t.is_finite() && t >= 0.0) {
        return Err(Error::DomainError("flow times must be finite and >= 0"));
    }
    let whole = exp_formula(field, x, s + t, k_ref, base)?;
    let first = exp_formula(field, x, t, k_ref, base)?;
    let composed = exp_formula(field, &first, s, k_ref, base)?;
    let residual = field.space().distance(&whole, &composed)?;
    let norm = field.min_norm(x)?;
    let envelope =
        error_bound(norm, s + t, k_ref) + error_bound(norm, s, k_ref) + error_bound(norm, t, k_ref);
    Ok((residual, envelope))
}

/// One trajectory sample: the flow point at `t`, the adaptive step count
/// that produced it, and its distance to the zero set when a witness names
/// one.
#[derive(Clone, Debug)]
pub struct TrajectoryRow {
    pub t: f64,
    pub k_used: u64,
    pub point: Point,
    pub dist_to_zero_set: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
}

impl Trajectory {
    pub fn points(&self) -> Vec<Point> {
        self.rows.iter().map(|r| r.point.clone()).collect()
    }

    /// Largest increase of the distance-to-zero-set column between
    /// consecutive rows (`None` without a witness); Fejér monotone
    /// trajectories keep this at zero up to tolerance.
    pub fn max_distance_increase(&self) -> Option<f64> {
        let mut worst = f64::NEG_INFINITY;
        let mut seen = false;
        for w in self.rows.windows(2) {
            if let (Some(a), Some(b)) = (w[0].dist_to_zero_set, w[1].dist_to_zero_set) {
                worst = math::fmax(worst, b - a);
                seen = true;
            }
        }
        if seen {
            Some(math::fmax(worst, 0.0))
        } else {
            None
        }
    }
}

/// Sample the flow at the given times (nondecreasing, nonnegative), each
/// with its own adaptive step count for the target tolerance.
pub fn trajectory(
    field: &MonotoneField,
    x: &Point,
    times: &[f64],
    target_tol: f64,
    base: &ResolventConfig,
) -> Result<Trajectory> {
    if times.is_empty() {
        return Err(Error::DomainError("trajectory needs at least one time"));
    }
    if !times.iter().all(|t| t.is_finite() && *t >= 0.0) {
        return Err(Error::DomainError("trajectory times must be finite and >= 0"));
    }
    if !times.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::DomainError("trajectory times must be nondecreasing"));
    }
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let (point, k_used) = semigroup(field, x, t, target_tol, base)?;
        let dist_to_zero_set = match field.project_zero_set(&point)? {
            Some(p) => Some(field.space().distance(&point, &p)?),
            None => None,
        };
        rows.push(TrajectoryRow {
            t,
            k_used,
            point,
            dist_to_zero_set,
        });
    }
    Ok(Trajectory { rows })
}

/// Largest distance from `c` to any of the points.
fn max_radius(space: &Space, c: &Point, points: &[Point]) -> Result<f64> {
    let mut r = 0.0_f64;
    for p in points {
        r = math::fmax(r, space.distance(c, p)?);
    }
    Ok(r)
}

/// Asymptotic center proxy: the minimizer of `c -> max_i d(c, x_i)` over
/// the tail window (the last `ceil(tail_fraction * n)` points), found by
/// stepped geodesic descent toward the current farthest point with restarts
/// from every tail point, followed by a longer polish run from the best
/// start. Returns the center and its max-radius value.
pub fn asymptotic_center(
    space: &Space,
    points: &[Point],
    tail_fraction: f64,
) -> Result<(Point, f64)> {
    if !(tail_fraction.is_finite() && tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::DomainError("tail fraction must lie in (0, 1]"));
    }
    let n = points.len();
    let keep = math::ceil_pos(tail_fraction * n as f64).min(n).max(1);
    let tail = &points[n - keep..];
    if tail.len() < 2 {
        return Err(Error::EmptyTail);
    }
    for p in tail {
        space.validate_point(p)?;
    }
    let descend = |start: &Point, iters: usize| -> Result<(Point, f64)> {
        let mut c = start.clone();
        let mut best = (max_radius(space, &c, tail)?, c.clone());
        for j in 0..iters {
            // Farthest tail point from the current center (first maximum).
            let mut far = &tail[0];
            let mut far_d = space.distance(&c, far)?;
            for p in &tail[1..] {
                let d = space.distance(&c, p)?;
                if d > far_d {
                    far = p;
                    far_d = d;
                }
            }
            if far_d == 0.0 {
                return Ok((c, 0.0));
            }
            c = space.geodesic_point(&c, far, 1.0 / (j as f64 + 2.0))?;
            let r = max_radius(space, &c, tail)?;
            if r < best.0 {
                best = (r, c.clone());
            }
        }
        Ok((best.1, best.0))
    };
    let mut best: Option<(f64, Point)> = None;
    for start in tail {
        let (c, r) = descend(start, 384)?;
        if best.as_ref().is_none_or(|(br, _)| r < *br) {
            best = Some((r, c));
        }
    }
    let (r0, c0) = best.expect("tail has at least two points");
    let (c, r) = descend(&c0, 4096)?;
    Ok(if r <= r0 { (c, r) } else { (c0, r0) })
}

/// Finite-sample diagnostic standing in for weak-limit statements: the
/// asymptotic center of the tail, its distance to the candidate limit, a
/// stabilization flag for the distance sequence, and a Fejér flag.
#[derive(Clone, Debug)]
pub struct DeltaReport {
    pub center: Point,
    /// Max radius of the tail around the center.
    pub radius: f64,
    /// Distance from the center to the candidate limit.
    pub center_distance: f64,
    /// Whether the distances to the candidate stabilize over the last
    /// quarter of the tail (spread at most 1e-6).
    pub kadec_stabilized: bool,
    /// Whether the distances to the candidate are nonincreasing along the
    /// tail within 1e-7.
    pub fejer_nonincreasing: bool,
    /// Whether the center sits within 1e-4 of the candidate.
    pub pass: bool,
    /// Always states that this is a finite-sample proxy, not a limit claim.
    pub banner: &'static str,
}

pub const DELTA_PROXY_BANNER: &str =
    "finite-sample proxy: tail asymptotic center stands in for the limit object";

/// Compare a trajectory tail against a candidate limit point.
pub fn delta_convergence_check(
    space: &Space,
    tail: &[Point],
    candidate: &Point,
) -> Result<DeltaReport> {
    if tail.len() < 2 {
        return Err(Error::EmptyTail);
    }
    space.validate_point(candidate)?;
    let mut dists = Vec::with_capacity(tail.len());
    for p in tail {
        let d = space.distance(p, candidate)?;
        if !d.is_finite() {
            return Err(Error::DomainError("trajectory tail must be bounded"));
        }
        dists.push(d);
    }
    let (center, radius) = asymptotic_center(space, tail, 1.0)?;
    let center_distance = space.distance(&center, candidate)?;
    let window = (tail.len() / 4).max(2).min(tail.len());
    let late = &dists[tail.len() - window..];
    let spread = late.iter().cloned().fold(f64::NEG_INFINITY, math::fmax)
        - late.iter().cloned().fold(f64::INFINITY, math::fmin);
    let fejer_nonincreasing = dists.windows(2).all(|w| w[1] <= w[0] + 1e-7);
    Ok(DeltaReport {
        center,
        radius,
        center_distance,
        kadec_stabilized: spread <= 1e-6,
        fejer_nonincreasing,
        pass: center_distance <= 1e-4,
        banner: DELTA_PROXY_BANNER,
    })
}

/// Collect the zero-set projection of a point if the field names one; used
/// by trajectory drivers that need a fixed anchor rather than per-point
/// projections.
pub fn zero_anchor(field: &MonotoneField, x: &Point) -> Result<Option<Point>> {
    match field.zero_set() {
        ZeroSetWitness::Unknown => Ok(None),
        _ => field.project_zero_set(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::catalog;

    fn line() -> Space {
        Space::euclidean(1).unwrap()
    }

    #[test]
    fn exponential_formula_matches_the_scalar_closed_form() {
        let s = line();
        let a = s.point(&[0.0]).unwrap();
        let x = s.point(&[1.0]).unwrap();
        let field = catalog::quadratic(&s, &a).unwrap();
        let base = ResolventConfig::new(1.0);
        let y = exp_formula(&field, &x, 1.0, 10, &base).unwrap();
        // Ten steps of lambda = 0.1, each dividing by 1.1.
        assert!((y.vector().unwrap()[0] - 0.3855432894295314).abs() < 1e-15);
        // Time zero returns the start point.
        let y0 = exp_formula(&field, &x, 0.0, 5, &base).unwrap();
        assert_eq!(s.distance(&y0, &x).unwrap(), 0.0);
    }

    #[test]
    fn exponential_formula_rides_the_anchor_geodesic() {
        let h = Space::hyperbolic(2).unwrap();
        let a = h.lift(&[0.5, -0.3]).unwrap();
        let x = h.lift(&[-1.0, 0.8]).unwrap();
        let field = catalog::quadratic(&h, &a).unwrap();
        let base = ResolventConfig::new(1.0);
        let (t, k) = (1.5, 32u64);
        let got = exp_formula(&field, &x, t, k, &base).unwrap();
        // Each step slides along [x, a] by the factor 1/(1 + t/k), so the
        // k-step iterate sits at parameter (1 + t/k)^(-k) from the anchor.
        let lam = t / k as f64;
        let mut param = 1.0;
        for _ in 0..k {
            param /= 1.0 + lam;
        }
        let want = h.geodesic_point(&a, &x, param).unwrap();
        assert!(h.distance(&got, &want).unwrap() < 1e-10);
    }

    #[test]
    fn error_bound_arithmetic() {
        assert!((error_bound(1.0, 1.0, 4) - 1.0).abs() < 1e-15);
        assert_eq!(error_bound(0.0, 3.0, 7), 0.0);
        assert!((error_bound(2.0, 0.5, 100) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn adaptive_step_count_is_the_smallest_adequate_power_of_two() {
        let s = line();
        let a = s.point(&[0.0]).unwrap();
        let x = s.point(&[1.0]).unwrap();
        let field = catalog::quadratic(&s, &a).unwrap();
        let base = ResolventConfig::new(1.0);
        // |Ax| = 1, t = 1: need 2/sqrt(k) <= 0.125, i.e. k >= 256.
        let (_, k) = semigroup(&field, &x, 1.0, 0.125, &base).unwrap();
        assert_eq!(k, 256);
        let (y, k0) = semigroup(&field, &x, 0.0, 0.125, &base).unwrap();
        assert_eq!(k0, 1);
        assert_eq!(s.distance(&y, &x).unwrap(), 0.0);
        let (ya, ka) = semigroup(&field, &a, 5.0, 0.125, &base).unwrap();
        assert_eq!(ka, 1);
        assert_eq!(s.distance(&ya, &a).unwrap(), 0.0);
    }

    #[test]
    fn double_seq_bound_closed_forms() {
        let mus = [1.0; 8];
        // j = k with unit steps: the first deviation term vanishes.
        for k in [1usize, 4, 8] {
            let b = double_seq_bound(1.0, &mus, k, k).unwrap();
            assert!((b - 2.0 * math::sqrt(k as f64)).abs() < 1e-12);
        }
        assert_eq!(double_seq_bound(1.0, &mus, 0, 0).unwrap(), 0.0);
        let b = double_seq_bound(1.0, &mus, 0, 3).unwrap();
        assert!((b - (math::sqrt(12.0) + 3.0)).abs() < 1e-12);
        // Oversized steps are rejected.
        assert!(double_seq_bound(0.5, &mus, 0, 0).is_err());
    }

    #[test]
    fn double_sequence_grid_conforms_for_the_scalar_quadratic() {
        let s = line();
        let a = s.point(&[0.0]).unwrap();
        let x = s.point(&[1.0]).unwrap();
        let field = catalog::quadratic(&s, &a).unwrap();
        let mus = [0.5; 8];
        let report =
            double_seq_verify(&field, &x, 0.5, &mus, 8, 8, &ResolventConfig::new(1.0)).unwrap();
        assert_eq!(report.rows.len(), 81);
        assert!(
            report.max_violation <= 1e-9,
            "violation {}",
            report.max_violation
        );
        // Stationary start: every chain stays put and all values vanish.
        let stuck =
            double_seq_verify(&field, &a, 0.5, &mus, 8, 8, &ResolventConfig::new(1.0)).unwrap();
        for row in &stuck.rows {
            assert_eq!(row.value, 0.0);
        }
    }

    #[test]
    fn semigroup_law_residual_sits_inside_the_envelope() {
        let s = line();
        let a = s.point(&[0.0]).unwrap();
        let x = s.point(&[1.0]).unwrap();
        let field = catalog::quadratic(&s, &a).unwrap();
        let base = ResolventConfig::new(1.0);
        let (r0, _) = semigroup_law_residual(&field, &x, 0.0, 1.0, 64, &base).unwrap();
        assert_eq!(r0, 0.0);
        let (r, env) = semigroup_law_residual(&field, &x, 1.0, 1.0, 4096, &base).unwrap();
        assert!(r <= env + 1e-8, "residual {r} envelope {env}");
    }

    #[test]
    fn trajectory_is_fejer_monotone_for_the_quadratic() {
        let s = Space::euclidean(2).unwrap();
        let a = s.point(&[0.25, -0.5]).unwrap();
        let x = s.point(&[2.0, 1.0]).unwrap();
        let field = catalog::quadratic(&s, &a).unwrap();
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
        let traj = trajectory(&field, &x, &times, 0.05, &ResolventConfig::new(1.0)).unwrap();
        assert_eq!(traj.rows.len(), 21);
        let increase = traj.max_distance_increase().unwrap();
        assert!(increase <= 1e-7, "distance increase {increase}");
        let first = traj.rows[0].dist_to_zero_set.unwrap();
        let last = traj.rows[20].dist_to_zero_set.unwrap();
        assert!(last < first * 0.2);
    }

    #[test]
    fn asymptotic_center_of_simple_configurations() {
        let s = line();
        // Constant sequence: the center is the point itself.
        let p = s.point(&[0.7]).unwrap();
        let pts = alloc::vec![p.clone(), p.clone(), p.clone()];
        let (c, r) = asymptotic_center(&s, &pts, 1.0).unwrap();
        assert!(s.distance(&c, &p).unwrap() < 1e-12);
        assert!(r < 1e-12);
        // Alternating endpoints: the center is the midpoint.
        let plus = s.point(&[1.0]).unwrap();
        let minus = s.point(&[-1.0]).unwrap();
        let mut alt = Vec::new();
        for i in 0..10 {
            alt.push(if i % 2 == 0 { minus.clone() } else { plus.clone() });
        }
        let (c, r) = asymptotic_center(&s, &alt, 1.0).unwrap();
        assert!(c.vector().unwrap()[0].abs() < 2e-2, "center {:?}", c.vector());
        assert!(r < 1.0 + 2e-2);
    }

    #[test]
    fn asymptotic_center_on_a_tripod_hits_the_branch() {
        use crate::spaces::tree::TreeSpec;
        let spec = TreeSpec::new(
            alloc::vec!["o", "a", "b", "c"],
            alloc::vec![("o", "a", 1.0), ("o", "b", 1.0), ("o", "c", 1.0)],
        );
        let s = Space::tree(&spec).unwrap();
        let branch = s.vertex("o").unwrap();
        let leg_a = s.geodesic_point(&branch, &s.vertex("a").unwrap(), 1.0).unwrap();
        let leg_b = s.geodesic_point(&branch, &s.vertex("b").unwrap(), 1.0).unwrap();
        let pts = alloc::vec![leg_a.clone(), leg_b.clone(), leg_a, leg_b];
        let (c, r) = asymptotic_center(&s, &pts, 1.0).unwrap();
        assert!(s.distance(&c, &branch).unwrap() < 1e-9);
        assert!((r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn delta_check_passes_on_convergent_tails_and_fails_on_alternating_ones() {
        let s = line();
        let zero = s.point(&[0.0]).unwrap();
        let mut tail = Vec::new();
        for i in 0..12 {
            tail.push(s.point(&[1e-6 / (1.0 + i as f64)]).unwrap());
        }
        let report = delta_convergence_check(&s, &tail, &zero).unwrap();
        assert!(report.pass);
        assert!(report.fejer_nonincreasing);
        assert!(report.kadec_stabilized);
        assert_eq!(report.banner, DELTA_PROXY_BANNER);

        let plus = s.point(&[1.0]).unwrap();
        let minus = s.point(&[-1.0]).unwrap();
        let mut alt = Vec::new();
        for i in 0..10 {
            alt.push(if i % 2 == 0 { minus.clone() } else { plus.clone() });
        }
        let report = delta_convergence_check(&s, &alt, &plus).unwrap();
        assert!(!report.pass);
        assert!(!report.fejer_nonincreasing);
        assert!(report.center_distance > 0.9);
    }
}

//! One-dimensional minimization helpers used by projections and proximal
//! solves: golden-section search and a bracketing routine that isolates the
//! finite (feasible) part of a convex objective on an interval.

use crate::math;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimize a unimodal function on [a, b] by golden-section search.
///
/// Returns `(t, f(t))` for the best point seen, including the endpoints.
/// `tol` bounds the final bracket width in the argument.
pub(crate) fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    debug_assert!(a <= b);
    let mut lo = a;
    let mut hi = b;
    let mut best_t = lo;
    let mut best_f = f(lo);
    let f_hi = f(hi);
    if f_hi < best_f {
        best_t = hi;
        best_f = f_hi;
    }
    if hi - lo <= tol {
        return (best_t, best_f);
    }
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if fc < best_f {
            best_t = c;
            best_f = fc;
        }
        if fd < best_f {
            best_t = d;
            best_f = fd;
        }
        if hi - lo <= tol {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    (best_t, best_f)
}

/// Locate the maximal subinterval of [a, b] on which `finite` holds, assuming
/// the feasible set is a (possibly empty) closed subinterval.
///
/// Scans a uniform grid to find a feasible seed, then refines each boundary
/// by bisection. Returns `None` when no grid point is feasible.
pub(crate) fn finite_bracket<F: FnMut(f64) -> bool>(
    mut finite: F,
    a: f64,
    b: f64,
    scan_points: usize,
    bisect_steps: usize,
) -> Option<(f64, f64)> {
    debug_assert!(a <= b);
    let n = scan_points.max(2);
    let mut first = None;
    let mut last = None;
    for i in 0..n {
        let t = a + (b - a) * (i as f64) / ((n - 1) as f64);
        if finite(t) {
            if first.is_none() {
                first = Some(t);
            }
            last = Some(t);
        }
    }
    let (mut lo, mut hi) = (first?, last?);
    // Push the left boundary down toward the true edge of feasibility.
    if lo > a && !finite(a) {
        let mut out = math::fmax(a, lo - (b - a) / ((n - 1) as f64));
        for _ in 0..bisect_steps {
            let mid = 0.5 * (out + lo);
            if finite(mid) {
                lo = mid;
            } else {
                out = mid;
            }
        }
    } else if finite(a) {
        lo = a;
    }
    // Same for the right boundary.
    if hi < b && !finite(b) {
        let mut out = math::fmin(b, hi + (b - a) / ((n - 1) as f64));
        for _ in 0..bisect_steps {
            let mid = 0.5 * (out + hi);
            if finite(mid) {
                hi = mid;
            } else {
                out = mid;
            }
        }
    } else if finite(b) {
        hi = b;
    }
    Some((lo, hi))
}

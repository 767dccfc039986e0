//! The eight experiment runners. Each produces an ordered [`Table`] whose
//! last column is the violation flag; numeric failures inside one row are
//! recorded in place (`NaN` cells, raised flag, message in the JSON
//! mirror) and never abort the remaining rows.
//!
//! Residual convention for the bulk checks (`axioms`, `prox`): every
//! sampled quantity is one that exact arithmetic keeps nonnegative, with
//! deviations from identities entering negated, so a check passes exactly
//! when its minimum stays above `-tol`.

use catflow_core::{
    double_seq_bound, error_bound, exp_formula, firm_nonexpansiveness_profile,
    resolvent_identity_residual, semigroup, yosida_norm, MonotoneField, Point, ResolventConfig,
    Space,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artifact::{Cell, RowError, Table};
use crate::config::{split_seed, Prepared, RunParams};

pub fn dispatch(prep: &Prepared) -> Table {
    let field = prep.field.as_ref();
    match &prep.params {
        RunParams::Axioms { samples } => run_axioms(&prep.space, *samples, prep.tol, prep.stream),
        RunParams::Prox {
            samples,
            lambda_min,
            lambda_max,
        } => run_prox(
            field.expect("prox needs a field"),
            *samples,
            *lambda_min,
            *lambda_max,
            prep.tol,
            &prep.base,
            prep.stream,
        ),
        RunParams::Sweep { x, lambdas } => run_sweep(
            field.expect("sweep needs a field"),
            x,
            lambdas,
            prep.tol,
            &prep.base,
        ),
        RunParams::Yosida { x, lambdas } => run_yosida(
            field.expect("yosida needs a field"),
            x,
            lambdas,
            prep.tol,
            &prep.base,
        ),
        RunParams::Limits {
            x,
            lambdas,
            limit_tol,
        } => run_limits(
            field.expect("limits needs a field"),
            x,
            lambdas,
            *limit_tol,
            prep.tol,
            &prep.base,
        ),
        RunParams::ErrorTable { x, t, ks, k_ref } => run_error_table(
            field.expect("error-table needs a field"),
            x,
            *t,
            ks,
            *k_ref,
            prep.tol,
            &prep.base,
        ),
        RunParams::Trajectory {
            x,
            times,
            target_tol,
        } => run_trajectory(
            field.expect("trajectory needs a field"),
            x,
            times,
            *target_tol,
            prep.tol,
            &prep.base,
        ),
        RunParams::DoubleSeq {
            x,
            lambda,
            mu,
            j_max,
            k_max,
        } => run_double_seq(
            field.expect("double-seq needs a field"),
            x,
            &ChainSchedule {
                lambda: *lambda,
                mu,
                j_max: *j_max,
                k_max: *k_max,
            },
            prep.tol,
            &prep.base,
        ),
    }
}

/// Run one named check over `samples` draws and push its summary row:
/// the minimum residual and whether it fell below `-tol`.
fn bulk_check<F>(
    table: &mut Table,
    name: &'static str,
    samples: u64,
    tol: f64,
    seed: u64,
    mut sample: F,
) where
    F: FnMut(&mut ChaCha8Rng) -> catflow_core::Result<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min = f64::INFINITY;
    let mut failure: Option<String> = None;
    for _ in 0..samples {
        match sample(&mut rng) {
            Ok(r) => min = min.min(r),
            Err(e) => {
                failure = Some(e.to_string());
                break;
            }
        }
    }
    match failure {
        Some(msg) => table.push_error(
            vec![
                Cell::Text(name),
                Cell::UInt(samples),
                Cell::Float(f64::NAN),
                Cell::Flag(true),
            ],
            msg,
        ),
        None => table.push(vec![
            Cell::Text(name),
            Cell::UInt(samples),
            Cell::Float(min),
            Cell::Flag(min < -tol),
        ]),
    }
}

fn run_axioms(space: &Space, samples: u64, tol: f64, stream: u64) -> Table {
    let mut table = Table::new("axioms", &["check", "n_samples", "min_residual", "flag"]);

    bulk_check(&mut table, "nonnegativity", samples, tol, split_seed(stream, 0), |rng| {
        let p = space.sample_point(rng);
        let q = space.sample_point(rng);
        space.distance(&p, &q)
    });
    bulk_check(&mut table, "identity", samples, tol, split_seed(stream, 1), |rng| {
        let p = space.sample_point(rng);
        Ok(-space.distance(&p, &p)?)
    });
    bulk_check(&mut table, "symmetry", samples, tol, split_seed(stream, 2), |rng| {
        let p = space.sample_point(rng);
        let q = space.sample_point(rng);
        Ok(-(space.distance(&p, &q)? - space.distance(&q, &p)?).abs())
    });
    bulk_check(&mut table, "triangle", samples, tol, split_seed(stream, 3), |rng| {
        let p = space.sample_point(rng);
        let q = space.sample_point(rng);
        let r = space.sample_point(rng);
        Ok(space.distance(&p, &q)? + space.distance(&q, &r)? - space.distance(&p, &r)?)
    });
    bulk_check(&mut table, "geodesic_speed", samples, tol, split_seed(stream, 4), |rng| {
        let p = space.sample_point(rng);
        let q = space.sample_point(rng);
        let seg = space.geodesic(&p, &q)?;
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        let ga = seg.eval(space, a)?;
        let gb = seg.eval(space, b)?;
        Ok(-(space.distance(&ga, &gb)? - (a - b).abs() * seg.length()).abs())
    });
    bulk_check(&mut table, "cn_inequality", samples, tol, split_seed(stream, 5), |rng| {
        let p = space.sample_point(rng);
        let q = space.sample_point(rng);
        let v = space.sample_point(rng);
        let t: f64 = rng.gen();
        let seg = space.geodesic(&p, &q)?;
        space.cn_residual(&seg, &v, t)
    });
    bulk_check(&mut table, "quadrilateral", samples, tol, split_seed(stream, 6), |rng| {
        let x = space.sample_point(rng);
        let y = space.sample_point(rng);
        let u = space.sample_point(rng);
        let v = space.sample_point(rng);
        space.quad_residual(&x, &y, &u, &v)
    });

    table
}

/// Log-uniform step sample over `[lo, hi]`.
fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        lo * (hi / lo).powf(rng.gen::<f64>())
    }
}

fn run_prox(
    field: &MonotoneField,
    samples: u64,
    lambda_min: f64,
    lambda_max: f64,
    tol: f64,
    base: &ResolventConfig,
    stream: u64,
) -> Table {
    let mut table = Table::new("prox", &["check", "n_samples", "min_residual", "flag"]);
    let space = field.space();
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();

    bulk_check(&mut table, "resolvent_identity", samples, tol, split_seed(stream, 0), |rng| {
        let x = space.sample_point(rng);
        let lambda = log_uniform(rng, lambda_min, lambda_max);
        let mu = lambda * (0.05 + 0.95 * rng.gen::<f64>());
        Ok(-resolvent_identity_residual(field, &base.at_lambda(lambda), mu, &x)?)
    });
    bulk_check(&mut table, "firm_profile", samples, tol, split_seed(stream, 1), |rng| {
        let x = space.sample_point(rng);
        let y = space.sample_point(rng);
        let lambda = log_uniform(rng, lambda_min, lambda_max);
        let profile = firm_nonexpansiveness_profile(field, &base.at_lambda(lambda), &x, &y, &grid)?;
        let mut min_drop = f64::INFINITY;
        for w in profile.windows(2) {
            min_drop = min_drop.min(w[0].1 - w[1].1);
        }
        Ok(min_drop)
    });
    bulk_check(&mut table, "resolvent_nonexpansive", samples, tol, split_seed(stream, 2), |rng| {
        let x = space.sample_point(rng);
        let y = space.sample_point(rng);
        let cfg = base.at_lambda(log_uniform(rng, lambda_min, lambda_max));
        let jx = field.resolve(&cfg, &x)?;
        let jy = field.resolve(&cfg, &y)?;
        Ok(space.distance(&x, &y)? - space.distance(&jx, &jy)?)
    });

    table
}

/// Row labeling and tolerances shared by the schedule scans.
#[derive(Clone, Copy)]
struct ScanOpts<'a> {
    label: Option<&'static str>,
    tol: f64,
    limit_tol: Option<f64>,
    base: &'a ResolventConfig,
}

/// Resolve the schedule in order and emit one row per step: the distance
/// to the limit reference (a projection witness when one exists, else the
/// final scan iterate), flagged when it rises by more than `tol` over the
/// previous row. With `limit_tol` set and a genuine witness, the final row
/// is also flagged unless it lands within `limit_tol` of the reference.
fn scan_direction(
    table: &mut Table,
    field: &MonotoneField,
    x: &Point,
    schedule: &[f64],
    witness: catflow_core::Result<Option<Point>>,
    opts: &ScanOpts<'_>,
) {
    let ScanOpts {
        label,
        tol,
        limit_tol,
        base,
    } = *opts;
    let space = field.space();
    let (witness, witness_note) = match witness {
        Ok(w) => (w, None),
        Err(e) => (None, Some(format!("reference projection failed: {e}"))),
    };
    if let Some(note) = witness_note {
        table.row_errors.push(RowError {
            row: table.rows.len(),
            message: note,
        });
    }
    let points: Vec<catflow_core::Result<Point>> = schedule
        .iter()
        .map(|&l| field.resolve(&base.at_lambda(l), x))
        .collect();
    let is_witness = witness.is_some();
    let reference = witness.or_else(|| points.iter().rev().find_map(|p| p.as_ref().ok().cloned()));

    let cells = |lambda: f64, value: f64, flag: bool| -> Vec<Cell> {
        let mut row = Vec::with_capacity(4);
        if let Some(l) = label {
            row.push(Cell::Text(l));
        }
        row.push(Cell::Float(lambda));
        row.push(Cell::Float(value));
        row.push(Cell::Flag(flag));
        row
    };

    let mut prev: Option<f64> = None;
    let last = schedule.len().saturating_sub(1);
    for (i, (&lambda, point)) in schedule.iter().zip(points.iter()).enumerate() {
        let dist = match (point, &reference) {
            (Ok(p), Some(r)) => space.distance(p, r).map_err(|e| e.to_string()),
            (Ok(_), None) => Err("no reference point available".to_string()),
            (Err(e), _) => Err(e.to_string()),
        };
        match dist {
            Ok(d) => {
                let mut flag = prev.is_some_and(|pd| d > pd + tol);
                if let (true, Some(lt)) = (i == last && is_witness, limit_tol) {
                    flag = flag || d > lt;
                }
                table.push(cells(lambda, d, flag));
                prev = Some(d);
            }
            Err(msg) => table.push_error(cells(lambda, f64::NAN, true), msg),
        }
    }
}

fn run_sweep(
    field: &MonotoneField,
    x: &Point,
    lambdas: &[f64],
    tol: f64,
    base: &ResolventConfig,
) -> Table {
    let mut table = Table::new("sweep", &["lambda", "dist_to_limit", "flag"]);
    let descending = lambdas.len() > 1 && lambdas[0] > lambdas[1];
    let witness = if descending {
        field.project_domain(x)
    } else {
        field.project_zero_set(x)
    };
    let opts = ScanOpts {
        label: None,
        tol,
        limit_tol: None,
        base,
    };
    scan_direction(&mut table, field, x, lambdas, witness, &opts);
    table
}

fn run_limits(
    field: &MonotoneField,
    x: &Point,
    lambdas: &[f64],
    limit_tol: Option<f64>,
    tol: f64,
    base: &ResolventConfig,
) -> Table {
    let mut table = Table::new("limits", &["direction", "lambda", "dist_to_reference", "flag"]);
    let mut descending: Vec<f64> = lambdas.to_vec();
    descending.reverse();
    let toward_zero = ScanOpts {
        label: Some("zero"),
        tol,
        limit_tol,
        base,
    };
    scan_direction(
        &mut table,
        field,
        x,
        &descending,
        field.project_domain(x),
        &toward_zero,
    );
    let toward_infinity = ScanOpts {
        label: Some("infinity"),
        ..toward_zero
    };
    scan_direction(
        &mut table,
        field,
        x,
        lambdas,
        field.project_zero_set(x),
        &toward_infinity,
    );
    table
}

fn run_yosida(
    field: &MonotoneField,
    x: &Point,
    lambdas: &[f64],
    tol: f64,
    base: &ResolventConfig,
) -> Table {
    let mut table = Table::new("yosida", &["lambda", "yosida_norm", "norm_bound", "flag"]);
    let bound = match field.min_norm(x) {
        Ok(b) => b,
        Err(e) => {
            table.row_errors.push(RowError {
                row: 0,
                message: format!("field norm bound unavailable: {e}"),
            });
            f64::NAN
        }
    };
    for &lambda in lambdas {
        match yosida_norm(field, &base.at_lambda(lambda), x) {
            Ok(norm) => {
                let flag = bound.is_finite() && norm > bound + tol;
                table.push(vec![
                    Cell::Float(lambda),
                    Cell::Float(norm),
                    Cell::Float(bound),
                    Cell::Flag(flag),
                ]);
            }
            Err(e) => table.push_error(
                vec![
                    Cell::Float(lambda),
                    Cell::Float(f64::NAN),
                    Cell::Float(bound),
                    Cell::Flag(true),
                ],
                e.to_string(),
            ),
        }
    }
    table
}

fn run_error_table(
    field: &MonotoneField,
    x: &Point,
    t: f64,
    ks: &[u64],
    k_ref: u64,
    tol: f64,
    base: &ResolventConfig,
) -> Table {
    let mut table = Table::new("error-table", &["k", "error", "bound", "flag"]);
    let space = field.space();
    let norm = match field.min_norm(x) {
        Ok(n) => n,
        Err(e) => {
            table.row_errors.push(RowError {
                row: 0,
                message: format!("field norm bound unavailable: {e}"),
            });
            f64::NAN
        }
    };
    // The reference iterate stands in for the exact flow point, so its own
    // error bound joins the row tolerance as measurement slack.
    let slack = error_bound(norm, t, k_ref) + tol;
    let reference = exp_formula(field, x, t, k_ref, base);
    for &k in ks {
        let bound = error_bound(norm, t, k);
        let error = reference
            .as_ref()
            .map_err(|e| e.to_string())
            .and_then(|r| {
                let y = exp_formula(field, x, t, k, base).map_err(|e| e.to_string())?;
                space.distance(&y, r).map_err(|e| e.to_string())
            });
        match error {
            Ok(err) => {
                let flag = bound.is_finite() && err > bound + slack;
                table.push(vec![
                    Cell::UInt(k),
                    Cell::Float(err),
                    Cell::Float(bound),
                    Cell::Flag(flag),
                ]);
            }
            Err(msg) => table.push_error(
                vec![
                    Cell::UInt(k),
                    Cell::Float(f64::NAN),
                    Cell::Float(bound),
                    Cell::Flag(true),
                ],
                msg,
            ),
        }
    }
    table
}

fn run_trajectory(
    field: &MonotoneField,
    x: &Point,
    times: &[f64],
    target_tol: f64,
    tol: f64,
    base: &ResolventConfig,
) -> Table {
    let mut table = Table::new("trajectory", &["t", "k_used", "dist_to_zero_set", "flag"]);
    let space = field.space();
    let mut prev: Option<f64> = None;
    for &t in times {
        match semigroup(field, x, t, target_tol, base) {
            Ok((p, k_used)) => {
                let dist: catflow_core::Result<Option<f64>> =
                    field.project_zero_set(&p).and_then(|z| match z {
                        Some(z) => Ok(Some(space.distance(&p, &z)?)),
                        None => Ok(None),
                    });
                match dist {
                    Ok(Some(d)) => {
                        let flag = prev.is_some_and(|pd| d > pd + tol);
                        table.push(vec![
                            Cell::Float(t),
                            Cell::UInt(k_used),
                            Cell::Float(d),
                            Cell::Flag(flag),
                        ]);
                        prev = Some(d);
                    }
                    Ok(None) => table.push(vec![
                        Cell::Float(t),
                        Cell::UInt(k_used),
                        Cell::Float(f64::NAN),
                        Cell::Flag(false),
                    ]),
                    Err(e) => table.push_error(
                        vec![
                            Cell::Float(t),
                            Cell::UInt(k_used),
                            Cell::Float(f64::NAN),
                            Cell::Flag(true),
                        ],
                        e.to_string(),
                    ),
                }
            }
            Err(e) => table.push_error(
                vec![
                    Cell::Float(t),
                    Cell::UInt(0),
                    Cell::Float(f64::NAN),
                    Cell::Flag(true),
                ],
                e.to_string(),
            ),
        }
    }
    table
}

/// Step sizes and chain lengths for the two-chain comparison table: a
/// mixed chain following `mu[..j_max]` against a uniform chain taking
/// `k_max` steps of size `lambda`.
#[derive(Clone, Copy)]
struct ChainSchedule<'a> {
    lambda: f64,
    mu: &'a [f64],
    j_max: usize,
    k_max: usize,
}

fn run_double_seq(
    field: &MonotoneField,
    x: &Point,
    schedule: &ChainSchedule<'_>,
    tol: f64,
    base: &ResolventConfig,
) -> Table {
    let ChainSchedule {
        lambda,
        mu,
        j_max,
        k_max,
    } = *schedule;
    let mut table = Table::new("double-seq", &["j", "k", "value", "bound", "flag"]);
    let space = field.space();
    let norm = match field.min_norm(x) {
        Ok(n) => n,
        Err(e) => {
            table.row_errors.push(RowError {
                row: 0,
                message: format!("field norm bound unavailable: {e}"),
            });
            f64::NAN
        }
    };
    if norm.is_infinite() {
        table.row_errors.push(RowError {
            row: 0,
            message: "field norm bound is not finite at x; the majorant is vacuous".to_string(),
        });
    }

    let mut mixed: Vec<Result<Point, String>> = Vec::with_capacity(j_max + 1);
    mixed.push(Ok(x.clone()));
    for &m in &mu[..j_max] {
        let next = match mixed.last().expect("chain is non-empty") {
            Ok(p) => field.resolve(&base.at_lambda(m), p).map_err(|e| e.to_string()),
            Err(_) => Err("previous mixed-chain step failed".to_string()),
        };
        mixed.push(next);
    }
    let mut uniform: Vec<Result<Point, String>> = Vec::with_capacity(k_max + 1);
    uniform.push(Ok(x.clone()));
    for _ in 0..k_max {
        let next = match uniform.last().expect("chain is non-empty") {
            Ok(p) => field.resolve(&base.at_lambda(lambda), p).map_err(|e| e.to_string()),
            Err(_) => Err("previous uniform-chain step failed".to_string()),
        };
        uniform.push(next);
    }

    for (j, mixed_j) in mixed.iter().enumerate() {
        for (k, uniform_k) in uniform.iter().enumerate() {
            let bound = match double_seq_bound(lambda, mu, j, k) {
                Ok(m) => norm * m,
                Err(e) => {
                    table.push_error(
                        vec![
                            Cell::UInt(j as u64),
                            Cell::UInt(k as u64),
                            Cell::Float(f64::NAN),
                            Cell::Float(f64::NAN),
                            Cell::Flag(true),
                        ],
                        e.to_string(),
                    );
                    continue;
                }
            };
            let value = match (mixed_j, uniform_k) {
                (Ok(a), Ok(b)) => space.distance(a, b).map_err(|e| e.to_string()),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            match value {
                Ok(v) => {
                    let flag = bound.is_finite() && v > bound + tol;
                    table.push(vec![
                        Cell::UInt(j as u64),
                        Cell::UInt(k as u64),
                        Cell::Float(v),
                        Cell::Float(bound),
                        Cell::Flag(flag),
                    ]);
                }
                Err(msg) => table.push_error(
                    vec![
                        Cell::UInt(j as u64),
                        Cell::UInt(k as u64),
                        Cell::Float(f64::NAN),
                        Cell::Float(bound),
                        Cell::Flag(true),
                    ],
                    msg,
                ),
            }
        }
    }
    table
}

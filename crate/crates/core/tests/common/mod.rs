//! Shared builders for the integration suites: model spaces, a seeded RNG,
//! and the named field catalog exercised by the property and acceptance
//! tests.
#![allow(dead_code)]

use catflow_core::catalog::{self, MapSpec};
use catflow_core::{ConvexSet, MonotoneField, Point, Space, TreeSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r1() -> Space {
    Space::euclidean(1).unwrap()
}

pub fn r2() -> Space {
    Space::euclidean(2).unwrap()
}

pub fn r3() -> Space {
    Space::euclidean(3).unwrap()
}

pub fn h2() -> Space {
    Space::hyperbolic(2).unwrap()
}

/// Three unit legs meeting at the branch vertex `o`.
pub fn tripod() -> Space {
    let spec = TreeSpec::new(
        vec!["o", "a", "b", "c"],
        vec![("o", "a", 1.0), ("o", "b", 1.0), ("o", "c", 1.0)],
    );
    Space::tree(&spec).unwrap()
}

/// Two legs of lengths 1 and 2 hanging from `root`.
pub fn two_leg_tree() -> Space {
    let spec = TreeSpec::new(
        vec!["root", "a", "b"],
        vec![("root", "a", 1.0), ("root", "b", 2.0)],
    );
    Space::tree(&spec).unwrap()
}

/// Random recursive tree on `n >= 3` vertices with edge lengths in
/// [0.5, 2). The first two children attach to `v0`, so `v0` always has
/// degree at least 2 and can serve as a branch-vertex anchor.
pub fn random_tree(n: usize, seed: u64) -> Space {
    assert!(n >= 3, "random tree needs at least three vertices");
    let mut rng = rng(seed);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for i in 1..n {
        let parent = if i <= 2 { 0 } else { rng.gen_range(0..i) };
        let length = 0.5 + 1.5 * rng.gen::<f64>();
        edges.push((names[parent].clone(), names[i].clone(), length));
    }
    let spec = TreeSpec::new(names, edges);
    Space::tree(&spec).unwrap()
}

/// The product of a line and a tripod.
pub fn line_times_tripod() -> Space {
    Space::product(r1(), tripod())
}

/// A point of a product space assembled from factor coordinates.
pub fn product_point(space: &Space, left_coord: f64, tree_vertex: &str) -> Point {
    let (lf, rf) = space.factors().expect("product space");
    let l = lf.point(&[left_coord]).unwrap();
    let r = rf.vertex(tree_vertex).unwrap();
    space.pair(&l, &r).unwrap()
}

/// Two sampled points at least `min_sep` apart.
pub fn sample_distinct(space: &Space, rng: &mut ChaCha8Rng, min_sep: f64) -> (Point, Point) {
    loop {
        let p = space.sample_point(rng);
        let q = space.sample_point(rng);
        if space.distance(&p, &q).unwrap() > min_sep {
            return (p, q);
        }
    }
}

/// Every built-in field, labeled for report lines. Covers the quadratic
/// field on all four model spaces, the indicator and constrained quadratic
/// on a Euclidean ball, and the complementary fields of the whole map
/// catalog.
pub fn catalog_fields() -> Vec<(String, MonotoneField)> {
    let mut out: Vec<(String, MonotoneField)> = Vec::new();

    let e2 = r2();
    let a2 = e2.point(&[0.4, -0.3]).unwrap();
    out.push((
        "quadratic/euclidean".into(),
        catalog::quadratic(&e2, &a2).unwrap(),
    ));

    let h = h2();
    let ah = h.lift(&[0.3, 0.2]).unwrap();
    out.push((
        "quadratic/hyperbolic".into(),
        catalog::quadratic(&h, &ah).unwrap(),
    ));

    let t = tripod();
    let at = t.vertex("o").unwrap();
    out.push((
        "quadratic/tripod".into(),
        catalog::quadratic(&t, &at).unwrap(),
    ));

    let p = line_times_tripod();
    let ap = product_point(&p, 0.25, "o");
    out.push((
        "quadratic/product".into(),
        catalog::quadratic(&p, &ap).unwrap(),
    ));

    let e = r2();
    let ball = ConvexSet::ball(e.point(&[0.25, 0.25]).unwrap(), 0.75).unwrap();
    out.push((
        "indicator/ball".into(),
        catalog::indicator(&e, ball).unwrap(),
    ));

    let e = r2();
    let ball = ConvexSet::ball(e.point(&[0.0, 0.0]).unwrap(), 0.5).unwrap();
    let a = e.point(&[1.2, 0.5]).unwrap();
    out.push((
        "quadratic-plus-indicator/ball".into(),
        catalog::quadratic_plus_indicator(&e, &a, ball).unwrap(),
    ));

    let e = r2();
    out.push((
        "complementary/identity".into(),
        catalog::complementary(&e, MapSpec::Identity).unwrap(),
    ));

    let e = r2();
    let c = e.point(&[0.5, -0.25]).unwrap();
    out.push((
        "complementary/constant".into(),
        catalog::complementary(&e, MapSpec::Constant(c)).unwrap(),
    ));

    let e = r2();
    out.push((
        "complementary/reflection".into(),
        catalog::complementary(&e, MapSpec::Reflection).unwrap(),
    ));

    let e = r2();
    out.push((
        "complementary/rotation".into(),
        catalog::complementary(&e, MapSpec::Rotation(core::f64::consts::PI / 3.0)).unwrap(),
    ));

    let e = r2();
    let ball = ConvexSet::ball(e.point(&[0.0, 0.0]).unwrap(), 1.0).unwrap();
    out.push((
        "complementary/projection".into(),
        catalog::complementary(&e, MapSpec::Projection(ball)).unwrap(),
    ));

    out
}

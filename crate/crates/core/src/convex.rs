//! Closed convex sets and the metric projection onto them.
//!
//! Five set kinds cover the model spaces: geodesic balls (any space),
//! halfspaces (Euclidean), subtrees (trees), geodesic segments (any space),
//! and factorwise products (product spaces). The projection satisfies the
//! defining obtuse-angle property of CAT(0) projections, checked by the
//! property suites: `d(x, z)^2 + d(z, w)^2 <= d(x, w)^2` for every `w` in
//! the set, where `z` is the projection of `x`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::space::{Coords, Point, Space, SpaceKind};

/// A closed convex subset of a model space.
#[derive(Clone, Debug)]
pub enum ConvexSet {
    /// Closed geodesic ball.
    Ball { center: Point, radius: f64 },
    /// `{ x : <normal, x> <= offset }` in Euclidean coordinates.
    Halfspace { normal: Vec<f64>, offset: f64 },
    /// The union of all edges whose endpoints both lie in the vertex set,
    /// together with those vertices. The vertex set must induce a connected
    /// subtree.
    Subtree { vertices: BTreeSet<usize> },
    /// The geodesic segment between two points.
    Segment { a: Point, b: Point },
    /// Factorwise product of two sets in a product space.
    Product(Box<ConvexSet>, Box<ConvexSet>),
}

impl ConvexSet {
    pub fn ball(center: Point, radius: f64) -> Result<ConvexSet> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::InvalidSpace(
                "ball radius must be finite and nonnegative".into(),
            ));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    pub fn halfspace(normal: Vec<f64>, offset: f64) -> Result<ConvexSet> {
        if !offset.is_finite() || normal.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpace(
                "halfspace parameters must be finite".into(),
            ));
        }
        if normal.iter().all(|c| *c == 0.0) {
            return Err(Error::InvalidSpace(
                "halfspace normal must be nonzero".into(),
            ));
        }
        Ok(ConvexSet::Halfspace { normal, offset })
    }

    /// Subtree spanned by the named vertices, which must induce a connected
    /// subgraph of the given tree space.
    pub fn subtree(space: &Space, names: &[&str]) -> Result<ConvexSet> {
        let SpaceKind::Tree(tree) = space.kind() else {
            return Err(Error::UnsupportedSet);
        };
        if names.is_empty() {
            return Err(Error::InvalidSpace("subtree needs at least one vertex".into()));
        }
        let mut vertices = BTreeSet::new();
        for name in names {
            let idx = tree
                .vertex_index(name)
                .ok_or_else(|| Error::InvalidSpace(alloc::format!("no vertex named `{name}`")))?;
            vertices.insert(idx);
        }
        // Connectivity: between any two chosen vertices, every vertex on the
        // tree path must be chosen too. Sufficient to check pairwise via
        // distances: the induced set is connected iff for each pair some
        // chosen vertex sits strictly between them whenever they are not
        // adjacent in the induced graph. Simpler and robust: grow a
        // component through induced edges and compare.
        let list: Vec<usize> = vertices.iter().copied().collect();
        let mut reached = BTreeSet::new();
        let mut stack = alloc::vec![list[0]];
        reached.insert(list[0]);
        while let Some(w) = stack.pop() {
            for ei in 0..tree.edge_count() {
                let (u, v) = tree.edge_endpoints(ei).expect("edge index in range");
                let other = if u == w {
                    v
                } else if v == w {
                    u
                } else {
                    continue;
                };
                if vertices.contains(&other) && !reached.contains(&other) {
                    reached.insert(other);
                    stack.push(other);
                }
            }
        }
        if reached.len() != vertices.len() {
            return Err(Error::InvalidSpace(
                "subtree vertex set is not connected".into(),
            ));
        }
        Ok(ConvexSet::Subtree { vertices })
    }

    pub fn segment(a: Point, b: Point) -> ConvexSet {
        ConvexSet::Segment { a, b }
    }

    pub fn product(left: ConvexSet, right: ConvexSet) -> ConvexSet {
        ConvexSet::Product(Box::new(left), Box::new(right))
    }

    /// Short description for artifacts and reports.
    pub fn describe(&self) -> alloc::string::String {
        match self {
            ConvexSet::Ball { radius, .. } => alloc::format!("ball(r={radius})"),
            ConvexSet::Halfspace { .. } => "halfspace".into(),
            ConvexSet::Subtree { vertices } => alloc::format!("subtree({}v)", vertices.len()),
            ConvexSet::Segment { .. } => "segment".into(),
            ConvexSet::Product(l, r) => {
                alloc::format!("product({},{})", l.describe(), r.describe())
            }
        }
    }
}

/// Membership test with tolerance `tol` in the metric (or in the linear
/// functional, for halfspaces).
pub fn set_contains(space: &Space, set: &ConvexSet, x: &Point, tol: f64) -> Result<bool> {
    space.check(x)?;
    match (set, space.kind()) {
        (ConvexSet::Ball { center, radius }, _) => {
            Ok(space.distance(center, x)? <= radius + tol)
        }
        (ConvexSet::Halfspace { normal, offset }, SpaceKind::Euclidean(_)) => {
            let v = x.vector().expect("euclidean point");
            if v.len() != normal.len() {
                return Err(Error::UnsupportedSet);
            }
            let dot: f64 = normal.iter().zip(v).map(|(n, c)| n * c).sum();
            Ok(dot <= offset + tol)
        }
        (ConvexSet::Subtree { vertices }, SpaceKind::Tree(tree)) => {
            let Coords::OnEdge(p) = x.coords() else {
                return Err(Error::SpaceMismatch);
            };
            let (u, v) = tree.edge_endpoints(p.edge).expect("validated point");
            let len = tree.edge_length(p.edge).expect("validated point");
            if vertices.contains(&u) && vertices.contains(&v) {
                return Ok(true);
            }
            if vertices.contains(&u) && p.offset <= tol {
                return Ok(true);
            }
            if vertices.contains(&v) && len - p.offset <= tol {
                return Ok(true);
            }
            // Distance to the nearest chosen vertex.
            let mut best = f64::INFINITY;
            for &w in vertices {
                let wp = tree.vertex_point(w);
                best = math::fmin(best, tree.distance(p, &wp));
            }
            Ok(best <= tol)
        }
        (ConvexSet::Segment { a, b }, _) => {
            let da = space.distance(a, x)?;
            let db = space.distance(x, b)?;
            let dab = space.distance(a, b)?;
            Ok(da + db - dab <= tol)
        }
        (ConvexSet::Product(sl, sr), SpaceKind::Product(..)) => {
            let (left_space, right_space) = space.factors().expect("product space");
            let (xl, xr) = space.split(x)?;
            Ok(set_contains(left_space, sl, &xl, tol)?
                && set_contains(right_space, sr, &xr, tol)?)
        }
        _ => Err(Error::UnsupportedSet),
    }
}

/// Metric projection onto a closed convex set.
pub fn project_convex(space: &Space, set: &ConvexSet, x: &Point) -> Result<Point> {
    space.check(x)?;
    match (set, space.kind()) {
        (ConvexSet::Ball { center, radius }, _) => {
            space.check(center)?;
            let d = space.distance(center, x)?;
            if d <= *radius {
                Ok(x.clone())
            } else {
                space.geodesic_point(center, x, radius / d)
            }
        }
        (ConvexSet::Halfspace { normal, offset }, SpaceKind::Euclidean(_)) => {
            let v = x.vector().expect("euclidean point");
            if v.len() != normal.len() {
                return Err(Error::UnsupportedSet);
            }
            let dot: f64 = normal.iter().zip(v).map(|(n, c)| n * c).sum();
            if dot <= *offset {
                return Ok(x.clone());
            }
            let n2: f64 = normal.iter().map(|n| n * n).sum();
            let shift = (dot - offset) / n2;
            let coords: Vec<f64> = v
                .iter()
                .zip(normal)
                .map(|(c, n)| c - shift * n)
                .collect();
            space.point(&coords)
        }
        (ConvexSet::Subtree { vertices }, SpaceKind::Tree(tree)) => {
            let Coords::OnEdge(p) = x.coords() else {
                return Err(Error::SpaceMismatch);
            };
            let (u, v) = tree.edge_endpoints(p.edge).expect("validated point");
            if vertices.contains(&u) && vertices.contains(&v) {
                return Ok(x.clone());
            }
            // The projection of a point outside a convex subtree is the
            // closest point of the subtree; since the point's edge is not
            // induced, that closest point is a chosen vertex (or the point
            // itself when it sits on a chosen endpoint).
            let mut best: Option<(f64, usize)> = None;
            for &w in vertices {
                let wp = tree.vertex_point(w);
                let d = tree.distance(p, &wp);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, w));
                }
            }
            let (_, w) = best.expect("subtree is nonempty");
            Ok(space.wrap(Coords::OnEdge(tree.vertex_point(w))))
        }
        (ConvexSet::Segment { a, b }, _) => {
            space.check(a)?;
            space.check(b)?;
            let d = space.distance(a, b)?;
            if d == 0.0 {
                return Ok(a.clone());
            }
            if space.distance(a, x)? == 0.0 {
                return Ok(a.clone());
            }
            if space.distance(b, x)? == 0.0 {
                return Ok(b.clone());
            }
            // An endpoint is the projection exactly when the angle there
            // between x and the opposite endpoint is at least a right angle.
            let kind = space.kind();
            if kind.cos_angle_c(a.coords(), x.coords(), b.coords()) <= 0.0 {
                return Ok(a.clone());
            }
            if kind.cos_angle_c(b.coords(), x.coords(), a.coords()) <= 0.0 {
                return Ok(b.clone());
            }
            // Interior foot point: along the segment the angle toward x
            // crosses a right angle exactly once, so bisect on the sign of
            // its cosine. A direct line search on the distance cannot do
            // better than ~sqrt(eps) in the parameter because the objective
            // is flat at the minimum; the sign crossing is transversal.
            let mut lo = 0.0_f64;
            let mut hi = 1.0_f64;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let g = space.geodesic_point(a, b, mid)?;
                if space.distance(&g, x)? == 0.0 {
                    return Ok(g);
                }
                let c = kind.cos_angle_c(g.coords(), x.coords(), b.coords());
                if c > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            space.geodesic_point(a, b, 0.5 * (lo + hi))
        }
        (ConvexSet::Product(sl, sr), SpaceKind::Product(..)) => {
            let (left_space, right_space) = space.factors().expect("product space");
            let (xl, xr) = space.split(x)?;
            let pl = project_convex(left_space, sl, &xl)?;
            let pr = project_convex(right_space, sr, &xr)?;
            space.pair(&pl, &pr)
        }
        _ => Err(Error::UnsupportedSet),
    }
}

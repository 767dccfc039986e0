//! Points, spaces, geodesics, and angles.
//!
//! A `Space` owns the geometry of one of four models: Euclidean space, the
//! hyperboloid model of hyperbolic space, a weighted metric tree, or a binary
//! product of two spaces with the l2-combined metric. Every space instance
//! carries a unique id, and points remember which space they belong to, so
//! cross-space mixups surface as errors instead of nonsense numbers.
//!
//! All four models are complete CAT(0) spaces with unique constant-speed
//! geodesics, which is what the rest of the crate builds on: comparison
//! residuals, tangent-cone data, resolvents, and flows.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;

use crate::error::{Error, Result};
use crate::math;
use crate::spaces::euclidean::Euclidean;
use crate::spaces::hyperbolic::Hyperbolic;
use crate::spaces::tree::{Tree, TreePt, TreeSpec};

static NEXT_SPACE_ID: AtomicU64 = AtomicU64::new(1);

/// Coordinates of a point, shaped by the owning space.
#[derive(Clone, Debug, PartialEq)]
pub enum Coords {
    /// Euclidean coordinates.
    Vector(Vec<f64>),
    /// Ambient Minkowski coordinates on the hyperboloid sheet.
    Lorentz(Vec<f64>),
    /// Position on a tree edge.
    OnEdge(TreePt),
    /// Product coordinates: one entry per factor.
    Pair(Box<Coords>, Box<Coords>),
}

impl Coords {
    fn as_vec(&self) -> &[f64] {
        match self {
            Coords::Vector(v) | Coords::Lorentz(v) => v,
            _ => unreachable!("coordinate shape is guaranteed by the space id"),
        }
    }

    fn as_tree(&self) -> &TreePt {
        match self {
            Coords::OnEdge(p) => p,
            _ => unreachable!("coordinate shape is guaranteed by the space id"),
        }
    }

    fn as_pair(&self) -> (&Coords, &Coords) {
        match self {
            Coords::Pair(l, r) => (l, r),
            _ => unreachable!("coordinate shape is guaranteed by the space id"),
        }
    }
}

/// A point of a specific space.
#[derive(Clone, Debug)]
pub struct Point {
    pub(crate) space_id: u64,
    pub(crate) coords: Coords,
}

impl Point {
    pub fn space_id(&self) -> u64 {
        self.space_id
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Euclidean coordinate slice; empty for non-vector points.
    pub fn vector(&self) -> Option<&[f64]> {
        match &self.coords {
            Coords::Vector(v) | Coords::Lorentz(v) => Some(v),
            _ => None,
        }
    }
}

/// How an angle value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleMethod {
    /// Closed-form evaluation for the space at hand.
    ExactClosedForm,
    /// Limit of comparison angles along shrinking geodesic segments,
    /// accelerated by one Richardson step.
    ComparisonLimitExtrapolated,
}

/// An angle in radians together with provenance and an error estimate.
#[derive(Clone, Copy, Debug)]
pub struct AngleResult {
    pub radians: f64,
    pub method: AngleMethod,
    /// Zero for closed forms; the magnitude of the last extrapolation
    /// correction otherwise.
    pub estimated_error: f64,
}

/// A constant-speed geodesic segment between two points.
#[derive(Clone, Debug)]
pub struct GeodesicSegment {
    start: Point,
    end: Point,
    length: f64,
}

impl GeodesicSegment {
    pub fn start(&self) -> &Point {
        &self.start
    }

    pub fn end(&self) -> &Point {
        &self.end
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Evaluate the segment at parameter `t` in [0, 1].
    pub fn eval(&self, space: &Space, t: f64) -> Result<Point> {
        space.geodesic_point(&self.start, &self.end, t)
    }
}

/// Concrete geometry behind a space.
#[derive(Clone, Debug)]
pub enum SpaceKind {
    Euclidean(Euclidean),
    Hyperbolic(Hyperbolic),
    Tree(Tree),
    Product(Box<Space>, Box<Space>),
}

/// One of the four model spaces, with a unique identity.
#[derive(Clone, Debug)]
pub struct Space {
    id: u64,
    kind: SpaceKind,
}

impl Space {
    fn fresh(kind: SpaceKind) -> Space {
        Space {
            id: NEXT_SPACE_ID.fetch_add(1, Ordering::Relaxed),
            kind,
        }
    }

    /// Flat n-dimensional space.
    pub fn euclidean(dim: usize) -> Result<Space> {
        Ok(Space::fresh(SpaceKind::Euclidean(Euclidean::new(dim)?)))
    }

    /// Hyperbolic n-space in the hyperboloid model.
    pub fn hyperbolic(dim: usize) -> Result<Space> {
        Ok(Space::fresh(SpaceKind::Hyperbolic(Hyperbolic::new(dim)?)))
    }

    /// Weighted metric tree from a validated description.
    pub fn tree(spec: &TreeSpec) -> Result<Space> {
        Ok(Space::fresh(SpaceKind::Tree(Tree::build(spec)?)))
    }

    /// Binary product with the l2-combined metric.
    pub fn product(left: Space, right: Space) -> Space {
        Space::fresh(SpaceKind::Product(Box::new(left), Box::new(right)))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    /// Short human-readable description, used in artifacts and reports.
    pub fn describe(&self) -> String {
        match &self.kind {
            SpaceKind::Euclidean(e) => alloc::format!("euclidean({})", e.dim()),
            SpaceKind::Hyperbolic(h) => alloc::format!("hyperbolic({})", h.dim()),
            SpaceKind::Tree(t) => {
                alloc::format!("tree({}v,{}e)", t.vertex_count(), t.edge_count())
            }
            SpaceKind::Product(l, r) => {
                alloc::format!("product({},{})", l.describe(), r.describe())
            }
        }
    }

    /// Product factors, when this is a product space.
    pub fn factors(&self) -> Option<(&Space, &Space)> {
        match &self.kind {
            SpaceKind::Product(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub(crate) fn check(&self, p: &Point) -> Result<()> {
        if p.space_id == self.id {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub(crate) fn wrap(&self, coords: Coords) -> Point {
        Point {
            space_id: self.id,
            coords,
        }
    }

    // ------------------------------------------------------------------
    // Point construction
    // ------------------------------------------------------------------

    /// Euclidean point from coordinates.
    pub fn point(&self, coords: &[f64]) -> Result<Point> {
        match &self.kind {
            SpaceKind::Euclidean(e) => {
                e.validate(coords)?;
                Ok(self.wrap(Coords::Vector(coords.to_vec())))
            }
            _ => Err(Error::Unsupported(
                "plain coordinate points belong to euclidean spaces",
            )),
        }
    }

    /// Hyperbolic point from spatial coordinates, lifted onto the sheet.
    pub fn lift(&self, spatial: &[f64]) -> Result<Point> {
        match &self.kind {
            SpaceKind::Hyperbolic(h) => Ok(self.wrap(Coords::Lorentz(h.lift(spatial)?))),
            _ => Err(Error::Unsupported("lift applies to hyperbolic spaces")),
        }
    }

    /// Hyperbolic point from validated ambient coordinates.
    pub fn ambient_point(&self, ambient: &[f64]) -> Result<Point> {
        match &self.kind {
            SpaceKind::Hyperbolic(h) => {
                h.validate(ambient)?;
                Ok(self.wrap(Coords::Lorentz(ambient.to_vec())))
            }
            _ => Err(Error::Unsupported(
                "ambient points apply to hyperbolic spaces",
            )),
        }
    }

    /// Tree vertex by name.
    pub fn vertex(&self, name: &str) -> Result<Point> {
        match &self.kind {
            SpaceKind::Tree(t) => {
                let idx = t.vertex_index(name).ok_or_else(|| {
                    Error::InvalidSpace(alloc::format!("no vertex named `{name}`"))
                })?;
                Ok(self.wrap(Coords::OnEdge(t.vertex_point(idx))))
            }
            _ => Err(Error::Unsupported("vertex lookup applies to tree spaces")),
        }
    }

    /// Tree point on the given edge at the given offset.
    pub fn edge_point(&self, edge: usize, offset: f64) -> Result<Point> {
        match &self.kind {
            SpaceKind::Tree(t) => {
                let p = TreePt { edge, offset };
                t.validate(&p)?;
                Ok(self.wrap(Coords::OnEdge(p)))
            }
            _ => Err(Error::Unsupported("edge points apply to tree spaces")),
        }
    }

    /// Product point from factor points.
    pub fn pair(&self, left: &Point, right: &Point) -> Result<Point> {
        match &self.kind {
            SpaceKind::Product(l, r) => {
                l.check(left)?;
                r.check(right)?;
                Ok(self.wrap(Coords::Pair(
                    Box::new(left.coords.clone()),
                    Box::new(right.coords.clone()),
                )))
            }
            _ => Err(Error::Unsupported("pair points apply to product spaces")),
        }
    }

    /// Split a product point into factor points.
    pub fn split(&self, p: &Point) -> Result<(Point, Point)> {
        self.check(p)?;
        match &self.kind {
            SpaceKind::Product(l, r) => {
                let (cl, cr) = p.coords.as_pair();
                Ok((l.wrap(cl.clone()), r.wrap(cr.clone())))
            }
            _ => Err(Error::Unsupported("split applies to product spaces")),
        }
    }

    /// A canonical base point: the origin, the origin lift, or the first
    /// vertex, assembled componentwise for products.
    pub fn base_point(&self) -> Point {
        match &self.kind {
            SpaceKind::Euclidean(e) => self.wrap(Coords::Vector(alloc::vec![0.0; e.dim()])),
            SpaceKind::Hyperbolic(h) => {
                let spatial = alloc::vec![0.0; h.dim()];
                self.wrap(Coords::Lorentz(
                    h.lift(&spatial).expect("origin lift is valid"),
                ))
            }
            SpaceKind::Tree(t) => self.wrap(Coords::OnEdge(t.vertex_point(0))),
            SpaceKind::Product(l, r) => {
                let pl = l.base_point();
                let pr = r.base_point();
                self.wrap(Coords::Pair(Box::new(pl.coords), Box::new(pr.coords)))
            }
        }
    }

    /// Validate that a point belongs to this space and its coordinates are
    /// well formed.
    pub fn validate_point(&self, p: &Point) -> Result<()> {
        self.check(p)?;
        self.kind.validate_c(&p.coords)
    }

    /// Uniform-ish sample from a bounded region of the space.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let coords = self.kind.sample_c(rng);
        self.wrap(coords)
    }

    // ------------------------------------------------------------------
    // Metric and geodesics
    // ------------------------------------------------------------------

    pub fn distance(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.kind.distance_c(&p.coords, &q.coords))
    }

    /// Whether two points coincide up to `tol` in the metric.
    pub fn points_equal(&self, p: &Point, q: &Point, tol: f64) -> Result<bool> {
        Ok(self.distance(p, q)? <= tol)
    }

    /// Point at parameter `t` in [0, 1] along the geodesic from `p` to `q`.
    pub fn geodesic_point(&self, p: &Point, q: &Point, t: f64) -> Result<Point> {
        self.check(p)?;
        self.check(q)?;
        if !t.is_finite() || !(0.0..=1.0).contains(&t) {
            return Err(Error::DomainError("geodesic parameter must lie in [0, 1]"));
        }
        Ok(self.wrap(self.kind.geodesic_c(&p.coords, &q.coords, t)))
    }

    /// The geodesic segment from `p` to `q`.
    pub fn geodesic(&self, p: &Point, q: &Point) -> Result<GeodesicSegment> {
        let length = self.distance(p, q)?;
        Ok(GeodesicSegment {
            start: p.clone(),
            end: q.clone(),
            length,
        })
    }

    /// Evaluate the geodesic line through `p` and `x` at any real `s`
    /// (s = 0 gives `p`, s = 1 gives `x`). Requires p != x, and fails with
    /// `NoExtension` where the space cannot continue the geodesic.
    pub fn extend_geodesic(&self, p: &Point, x: &Point, s: f64) -> Result<Point> {
        self.check(p)?;
        self.check(x)?;
        if !s.is_finite() {
            return Err(Error::DomainError("extension parameter must be finite"));
        }
        let d = self.kind.distance_c(&p.coords, &x.coords);
        if d == 0.0 {
            return Err(Error::DomainError(
                "extension requires two distinct points",
            ));
        }
        Ok(self.wrap(self.kind.eval_line_c(&p.coords, &x.coords, s)?))
    }

    // ------------------------------------------------------------------
    // Angles
    // ------------------------------------------------------------------

    /// Euclidean comparison angle at `p` in the triangle (p, q, r), with the
    /// conventions angle(p, p) = 0 and angle(p, r) = pi/2 for r != p.
    pub fn comparison_angle(&self, p: &Point, q: &Point, r: &Point) -> Result<AngleResult> {
        let a = self.distance(p, q)?;
        let b = self.distance(p, r)?;
        let radians = if a == 0.0 && b == 0.0 {
            0.0
        } else if a == 0.0 || b == 0.0 {
            core::f64::consts::FRAC_PI_2
        } else {
            let c = self.distance(q, r)?;
            math::acos_clamped((a * a + b * b - c * c) / (2.0 * a * b))
        };
        Ok(AngleResult {
            radians,
            method: AngleMethod::ExactClosedForm,
            estimated_error: 0.0,
        })
    }

    /// Alexandrov angle at `p` between the geodesics toward `x` and `y`,
    /// via the closed form for this space.
    pub fn alexandrov_angle(&self, p: &Point, x: &Point, y: &Point) -> Result<AngleResult> {
        let dx = self.distance(p, x)?;
        let dy = self.distance(p, y)?;
        if dx == 0.0 || dy == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let cos = self.kind.cos_angle_c(&p.coords, &x.coords, &y.coords);
        Ok(AngleResult {
            radians: math::acos_clamped(cos),
            method: AngleMethod::ExactClosedForm,
            estimated_error: 0.0,
        })
    }

    /// Alexandrov angle through the defining limit: comparison angles of
    /// shrinking segments, extrapolated with one Richardson step. Exists as
    /// an independent cross-check of the closed forms.
    pub fn alexandrov_angle_numeric(&self, p: &Point, x: &Point, y: &Point) -> Result<AngleResult> {
        let dx = self.distance(p, x)?;
        let dy = self.distance(p, y)?;
        if dx == 0.0 || dy == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let s0 = 1e-2 * math::fmin(dx, dy);
        let mut angles = [0.0_f64; 8];
        for (i, slot) in angles.iter_mut().enumerate() {
            let s = s0 * libm_free_powi(0.5, i as u32);
            let qx = self.geodesic_point(p, x, s / dx)?;
            let qy = self.geodesic_point(p, y, s / dy)?;
            *slot = self.comparison_angle(p, &qx, &qy)?.radians;
        }
        let delta = angles[7] - angles[6];
        let radians = (angles[7] + delta).clamp(0.0, core::f64::consts::PI);
        Ok(AngleResult {
            radians,
            method: AngleMethod::ComparisonLimitExtrapolated,
            estimated_error: math::abs(delta),
        })
    }

    // ------------------------------------------------------------------
    // Comparison residuals and quasilinearization
    // ------------------------------------------------------------------

    /// The quasilinearized inner product of the bound vectors `t (p -> x)`
    /// and `s (p -> y)`:
    /// `(t s / 2) (d(p,x)^2 + d(p,y)^2 - d(x,y)^2)`.
    pub fn quasi_inner(&self, p: &Point, x: &Point, y: &Point, t: f64, s: f64) -> Result<f64> {
        if !(t.is_finite() && s.is_finite() && t >= 0.0 && s >= 0.0) {
            return Err(Error::DomainError(
                "quasilinearization scales must be finite and nonnegative",
            ));
        }
        let dpx = self.distance(p, x)?;
        let dpy = self.distance(p, y)?;
        let dxy = self.distance(x, y)?;
        Ok(0.5 * t * s * (dpx * dpx + dpy * dpy - dxy * dxy))
    }

    /// Signed residual of the CN comparison inequality for the segment and
    /// observer `v` at parameter `t`; nonnegative in CAT(0) spaces.
    pub fn cn_residual(&self, seg: &GeodesicSegment, v: &Point, t: f64) -> Result<f64> {
        self.check(v)?;
        if !t.is_finite() || !(0.0..=1.0).contains(&t) {
            return Err(Error::DomainError("cn parameter must lie in [0, 1]"));
        }
        let gt = seg.eval(self, t)?;
        let d0 = self.distance(seg.start(), v)?;
        let d1 = self.distance(seg.end(), v)?;
        let dt = self.distance(&gt, v)?;
        let len = seg.length();
        Ok((1.0 - t) * d0 * d0 + t * d1 * d1 - t * (1.0 - t) * len * len - dt * dt)
    }

    /// Signed residual of the quadrilateral comparison inequality for the
    /// quadruple (x, y, u, v); nonnegative in CAT(0) spaces.
    pub fn quad_residual(&self, x: &Point, y: &Point, u: &Point, v: &Point) -> Result<f64> {
        let dxu = self.distance(x, u)?;
        let dyv = self.distance(y, v)?;
        let dxy = self.distance(x, y)?;
        let duv = self.distance(u, v)?;
        let dxv = self.distance(x, v)?;
        let dyu = self.distance(y, u)?;
        Ok(dxu * dxu + dyv * dyv + 2.0 * dxy * duv - dxv * dxv - dyu * dyu)
    }
}

/// Integer power of a float without any libm dependence.
fn libm_free_powi(base: f64, exp: u32) -> f64 {
    let mut out = 1.0;
    for _ in 0..exp {
        out *= base;
    }
    out
}

impl SpaceKind {
    pub(crate) fn distance_c(&self, a: &Coords, b: &Coords) -> f64 {
        match self {
            SpaceKind::Euclidean(e) => e.distance(a.as_vec(), b.as_vec()),
            SpaceKind::Hyperbolic(h) => h.distance(a.as_vec(), b.as_vec()),
            SpaceKind::Tree(t) => t.distance(a.as_tree(), b.as_tree()),
            SpaceKind::Product(l, r) => {
                let (al, ar) = a.as_pair();
                let (bl, br) = b.as_pair();
                let dl = l.kind.distance_c(al, bl);
                let dr = r.kind.distance_c(ar, br);
                math::sqrt(dl * dl + dr * dr)
            }
        }
    }

    pub(crate) fn geodesic_c(&self, a: &Coords, b: &Coords, t: f64) -> Coords {
        match self {
            SpaceKind::Euclidean(e) => Coords::Vector(e.geodesic(a.as_vec(), b.as_vec(), t)),
            SpaceKind::Hyperbolic(h) => Coords::Lorentz(h.geodesic(a.as_vec(), b.as_vec(), t)),
            SpaceKind::Tree(tr) => Coords::OnEdge(tr.geodesic(a.as_tree(), b.as_tree(), t)),
            SpaceKind::Product(l, r) => {
                let (al, ar) = a.as_pair();
                let (bl, br) = b.as_pair();
                Coords::Pair(
                    Box::new(l.kind.geodesic_c(al, bl, t)),
                    Box::new(r.kind.geodesic_c(ar, br, t)),
                )
            }
        }
    }

    /// Evaluate the geodesic line through `a` (s = 0) and `b` (s = 1) at any
    /// real parameter, extending beyond the segment where needed. A factor
    /// with coincident endpoints stays constant.
    pub(crate) fn eval_line_c(&self, a: &Coords, b: &Coords, s: f64) -> Result<Coords> {
        if (0.0..=1.0).contains(&s) {
            return Ok(self.geodesic_c(a, b, s));
        }
        let d = self.distance_c(a, b);
        if d == 0.0 {
            return Ok(a.clone());
        }
        match self {
            SpaceKind::Euclidean(e) => Ok(Coords::Vector(e.extend(a.as_vec(), b.as_vec(), s))),
            SpaceKind::Hyperbolic(h) => Ok(Coords::Lorentz(h.geodesic(a.as_vec(), b.as_vec(), s))),
            SpaceKind::Tree(t) => {
                let pa = a.as_tree();
                let pb = b.as_tree();
                let pt = if s > 1.0 {
                    t.continue_past(pa, pb, (s - 1.0) * d)?
                } else {
                    t.continue_past(pb, pa, -s * d)?
                };
                Ok(Coords::OnEdge(pt))
            }
            SpaceKind::Product(l, r) => {
                let (al, ar) = a.as_pair();
                let (bl, br) = b.as_pair();
                Ok(Coords::Pair(
                    Box::new(l.kind.eval_line_c(al, bl, s)?),
                    Box::new(r.kind.eval_line_c(ar, br, s)?),
                ))
            }
        }
    }

    /// Cosine of the Alexandrov angle at `p` between directions toward `x`
    /// and `y`. Requires positive distances from `p` to both.
    pub(crate) fn cos_angle_c(&self, p: &Coords, x: &Coords, y: &Coords) -> f64 {
        match self {
            SpaceKind::Euclidean(e) => e.cos_angle(p.as_vec(), x.as_vec(), y.as_vec()),
            SpaceKind::Hyperbolic(h) => h.cos_angle(p.as_vec(), x.as_vec(), y.as_vec()),
            SpaceKind::Tree(t) => t.cos_angle(p.as_tree(), x.as_tree(), y.as_tree()),
            SpaceKind::Product(l, r) => {
                let (pl, pr) = p.as_pair();
                let (xl, xr) = x.as_pair();
                let (yl, yr) = y.as_pair();
                let dlx = l.kind.distance_c(pl, xl);
                let drx = r.kind.distance_c(pr, xr);
                let dly = l.kind.distance_c(pl, yl);
                let dry = r.kind.distance_c(pr, yr);
                let dx = math::sqrt(dlx * dlx + drx * drx);
                let dy = math::sqrt(dly * dly + dry * dry);
                let mut num = 0.0;
                if dlx > 0.0 && dly > 0.0 {
                    num += dlx * dly * l.kind.cos_angle_c(pl, xl, yl);
                }
                if drx > 0.0 && dry > 0.0 {
                    num += drx * dry * r.kind.cos_angle_c(pr, xr, yr);
                }
                (num / (dx * dy)).clamp(-1.0, 1.0)
            }
        }
    }

    pub(crate) fn validate_c(&self, c: &Coords) -> Result<()> {
        match (self, c) {
            (SpaceKind::Euclidean(e), Coords::Vector(v)) => e.validate(v),
            (SpaceKind::Hyperbolic(h), Coords::Lorentz(v)) => h.validate(v),
            (SpaceKind::Tree(t), Coords::OnEdge(p)) => t.validate(p),
            (SpaceKind::Product(l, r), Coords::Pair(cl, cr)) => {
                l.kind.validate_c(cl)?;
                r.kind.validate_c(cr)
            }
            _ => Err(Error::SpaceMismatch),
        }
    }

    pub(crate) fn sample_c<R: Rng + ?Sized>(&self, rng: &mut R) -> Coords {
        match self {
            SpaceKind::Euclidean(e) => Coords::Vector(e.sample(rng)),
            SpaceKind::Hyperbolic(h) => Coords::Lorentz(h.sample(rng)),
            SpaceKind::Tree(t) => Coords::OnEdge(t.sample(rng)),
            SpaceKind::Product(l, r) => {
                let cl = l.kind.sample_c(rng);
                let cr = r.kind.sample_c(rng);
                Coords::Pair(Box::new(cl), Box::new(cr))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn r2() -> Space {
        Space::euclidean(2).unwrap()
    }

    fn two_leg_tree() -> Space {
        let spec = TreeSpec::new(
            alloc::vec!["root", "a", "b"],
            alloc::vec![("root", "a", 1.0), ("root", "b", 2.0)],
        );
        Space::tree(&spec).unwrap()
    }

    fn tripod() -> Space {
        let spec = TreeSpec::new(
            alloc::vec!["o", "a", "b", "c"],
            alloc::vec![("o", "a", 1.0), ("o", "b", 1.0), ("o", "c", 1.0)],
        );
        Space::tree(&spec).unwrap()
    }

    #[test]
    fn plane_distance_and_midpoint() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let q = s.point(&[3.0, 4.0]).unwrap();
        assert_eq!(s.distance(&p, &q).unwrap(), 5.0);
        assert_eq!(s.distance(&p, &p).unwrap(), 0.0);

        let a = s.point(&[2.0, 0.0]).unwrap();
        let mid = s.geodesic_point(&p, &a, 0.5).unwrap();
        assert_eq!(mid.vector().unwrap(), &[1.0, 0.0]);
        let start = s.geodesic_point(&p, &a, 0.0).unwrap();
        assert_eq!(s.distance(&start, &p).unwrap(), 0.0);
        assert!(matches!(
            s.geodesic_point(&p, &a, 1.5),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn cross_space_points_are_rejected() {
        let s = r2();
        let other = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let q = other.point(&[1.0, 0.0]).unwrap();
        assert!(matches!(s.distance(&p, &q), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn tree_distance_sums_legs() {
        let s = two_leg_tree();
        let a = s.vertex("a").unwrap();
        let b = s.vertex("b").unwrap();
        let root = s.vertex("root").unwrap();
        assert_eq!(s.distance(&a, &b).unwrap(), 3.0);
        let m = s.geodesic_point(&a, &b, 1.0 / 3.0).unwrap();
        assert!(s.distance(&m, &root).unwrap() < 1e-10);
    }

    #[test]
    fn extension_reflects_through_start() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 0.0]).unwrap();
        let y = s.extend_geodesic(&p, &x, -1.0).unwrap();
        assert_eq!(y.vector().unwrap(), &[-1.0, 0.0]);
        // The extension point, the start, and the far end line up: p is the
        // midpoint of [y, x].
        let mid = s.geodesic_point(&y, &x, 0.5).unwrap();
        assert!(s.distance(&mid, &p).unwrap() < 1e-10);
        assert!(matches!(
            s.extend_geodesic(&p, &p, 2.0),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn hyperbolic_extension_doubles_distance() {
        let s = Space::hyperbolic(2).unwrap();
        let p = s.lift(&[0.0, 0.0]).unwrap();
        let spatial = [1.1752011936438014_f64, 0.0]; // sinh(1)
        let x = s.lift(&spatial).unwrap();
        assert!((s.distance(&p, &x).unwrap() - 1.0).abs() < 1e-12);
        let y = s.extend_geodesic(&p, &x, 2.0).unwrap();
        assert!((s.distance(&p, &y).unwrap() - 2.0).abs() < 1e-10);
        let back = s.extend_geodesic(&p, &x, -1.0).unwrap();
        let mid = s.geodesic_point(&back, &x, 0.5).unwrap();
        assert!(s.distance(&mid, &p).unwrap() < 1e-10);
    }

    #[test]
    fn tree_extension_stops_at_leaves() {
        let s = tripod();
        let p = s.edge_point(0, 0.25).unwrap();
        let x = s.edge_point(0, 0.75).unwrap();
        // Toward the leaf: 2 * 0.5 = 1.0 from p overshoots the leg end.
        assert!(matches!(
            s.extend_geodesic(&p, &x, 2.0),
            Err(Error::NoExtension)
        ));
        // Away from the leaf the walk passes the branch into edge 1.
        let y = s.extend_geodesic(&x, &p, 2.0).unwrap();
        let on_b = s.edge_point(1, 0.25).unwrap();
        assert!(s.distance(&y, &on_b).unwrap() < 1e-12);
    }

    #[test]
    fn comparison_angle_conventions() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let q = s.point(&[1.0, 0.0]).unwrap();
        let r = s.point(&[0.0, 1.0]).unwrap();
        assert_eq!(s.comparison_angle(&p, &p, &p).unwrap().radians, 0.0);
        assert_eq!(s.comparison_angle(&p, &p, &r).unwrap().radians, FRAC_PI_2);
        let right = s.comparison_angle(&p, &q, &r).unwrap();
        assert!((right.radians - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(right.estimated_error, 0.0);
    }

    #[test]
    fn alexandrov_angles_exact_and_numeric() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 0.0]).unwrap();
        let y = s.point(&[0.0, 1.0]).unwrap();
        let exact = s.alexandrov_angle(&p, &x, &y).unwrap();
        assert!((exact.radians - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(exact.method, AngleMethod::ExactClosedForm);

        let same = s.alexandrov_angle(&p, &x, &x).unwrap();
        assert_eq!(same.radians, 0.0);

        assert!(matches!(
            s.alexandrov_angle(&p, &p, &y),
            Err(Error::ZeroDirection)
        ));

        let numeric = s.alexandrov_angle_numeric(&p, &x, &y).unwrap();
        assert_eq!(numeric.method, AngleMethod::ComparisonLimitExtrapolated);
        assert!((numeric.radians - FRAC_PI_2).abs() < 1e-9);

        let t = tripod();
        let o = t.vertex("o").unwrap();
        let a = t.vertex("a").unwrap();
        let b = t.vertex("b").unwrap();
        let branch = t.alexandrov_angle(&o, &a, &b).unwrap();
        assert!((branch.radians - PI).abs() < 1e-15);
    }

    #[test]
    fn quasi_inner_matches_hand_values() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 0.0]).unwrap();
        let y = s.point(&[0.0, 1.0]).unwrap();
        // Orthogonal directions: zero up to the rounding in sqrt(2)^2.
        assert!(s.quasi_inner(&p, &x, &y, 1.0, 1.0).unwrap().abs() < 1e-15);
        // x = y collapses to the squared distance.
        assert_eq!(s.quasi_inner(&p, &x, &x, 1.0, 1.0).unwrap(), 1.0);

        let t = two_leg_tree();
        let root = t.vertex("root").unwrap();
        let a = t.vertex("a").unwrap();
        let b = t.vertex("b").unwrap();
        // (1 + 4 - 9) / 2 on the two-leg tree.
        assert_eq!(t.quasi_inner(&root, &a, &b, 1.0, 1.0).unwrap(), -2.0);
    }

    #[test]
    fn cn_residual_zero_flat_positive_on_tripod() {
        let s = r2();
        let p = s.point(&[0.3, -0.75]).unwrap();
        let q = s.point(&[-1.4, 0.2]).unwrap();
        let v = s.point(&[0.9, 1.3]).unwrap();
        let seg = s.geodesic(&p, &q).unwrap();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert!(s.cn_residual(&seg, &v, t).unwrap().abs() < 1e-12);
        }
        assert_eq!(s.cn_residual(&seg, &v, 0.0).unwrap(), 0.0);

        let tp = tripod();
        let a = tp.vertex("a").unwrap();
        let b = tp.vertex("b").unwrap();
        let c = tp.vertex("c").unwrap();
        let seg = tp.geodesic(&a, &b).unwrap();
        let resid = tp.cn_residual(&seg, &c, 0.5).unwrap();
        assert!((resid - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quad_residual_examples() {
        let s = r2();
        let x = s.point(&[0.0, 0.0]).unwrap();
        let y = s.point(&[0.0, 1.0]).unwrap();
        let u = s.point(&[1.0, 0.0]).unwrap();
        let v = s.point(&[0.0, 0.0]).unwrap();
        assert_eq!(s.quad_residual(&x, &x, &u, &u).unwrap(), 0.0);
        assert!((s.quad_residual(&x, &y, &u, &v).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn product_metric_combines_factors() {
        let line = Space::euclidean(1).unwrap();
        let tp = tripod();
        let a_leg = tp.vertex("a").unwrap();
        let b_leg = tp.vertex("b").unwrap();
        let s = Space::product(line.clone(), tp.clone());
        let p = s
            .pair(&line.point(&[0.0]).unwrap(), &a_leg)
            .unwrap();
        let q = s.pair(&line.point(&[3.0]).unwrap(), &b_leg).unwrap();
        // sqrt(3^2 + 2^2)
        let d = s.distance(&p, &q).unwrap();
        assert!((d - math::sqrt(13.0)).abs() < 1e-12);

        let mid = s.geodesic_point(&p, &q, 0.5).unwrap();
        let (ml, mr) = s.split(&mid).unwrap();
        assert!((line.point(&[1.5]).unwrap().vector().unwrap()[0]
            - ml.vector().unwrap()[0])
            .abs()
            < 1e-12);
        let o = tp.vertex("o").unwrap();
        assert!(tp.distance(&mr, &o).unwrap() < 1e-12);
    }
}

//! Monotone vector fields and convex functionals.
//!
//! A monotone field is presented through its resolvent oracle: for a step
//! `lambda` and a point `x` it returns the resolvent point. Two constructions
//! cover the catalog: subdifferentials of geodesically convex functionals
//! (resolvent = proximal map) and complements of nonexpansive maps
//! (resolvent = fixed point of a geodesic contraction). Fields can carry
//! optional extras: a graph sampler that emits points with field values at
//! them, a closed-form minimal norm, and witnesses for the zero set and the
//! domain closure.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convex::{project_convex, set_contains, ConvexSet};
use crate::error::{Error, Result};
use crate::math;
use crate::opt::{finite_bracket, golden_min};
use crate::resolvent::ResolventConfig;
use crate::space::{Coords, Point, Space, SpaceKind};
use crate::spaces::euclidean::Euclidean;
use crate::spaces::hyperbolic::Hyperbolic;
use crate::tangent::TangentVec;

/// Norm estimates above this threshold are reported as infinite.
pub const NORM_BLOWUP: f64 = 1e12;
/// Step used by the fallback minimal-norm estimate.
pub const NORM_PROBE_LAMBDA: f64 = 1e-6;

pub type EvalFn = dyn Fn(&Point) -> Result<f64> + Send + Sync;
pub type ProxFn = dyn Fn(&ResolventConfig, &Point) -> Result<Point> + Send + Sync;
pub type MapFn = dyn Fn(&Point) -> Result<Point> + Send + Sync;
pub type MinNormFn = dyn Fn(&Point) -> Result<f64> + Send + Sync;

/// What is known about the zero set of a field.
#[derive(Clone, Debug)]
pub enum ZeroSetWitness {
    /// Every point is a zero (the zero field).
    WholeSpace,
    /// A finite list of known zeros.
    Points(Vec<Point>),
    /// The zero set is exactly this convex set.
    Set(ConvexSet),
    /// Nothing is known.
    Unknown,
}

/// What is known about the closure of the domain of a field or functional.
#[derive(Clone, Debug)]
pub enum DomainWitness {
    WholeSpace,
    Set(ConvexSet),
    Unknown,
}

// ---------------------------------------------------------------------
// Convex functionals
// ---------------------------------------------------------------------

/// A geodesically convex, lower semicontinuous functional, evaluated
/// pointwise with `+inf` outside its effective domain.
pub struct ConvexFunctional {
    space: Space,
    name: String,
    eval: Arc<EvalFn>,
    prox: Option<Arc<ProxFn>>,
    domain: DomainWitness,
    argmin: Option<Point>,
}

impl ConvexFunctional {
    pub fn new<F>(space: Space, name: &str, eval: F) -> ConvexFunctional
    where
        F: Fn(&Point) -> Result<f64> + Send + Sync + 'static,
    {
        ConvexFunctional {
            space,
            name: name.into(),
            eval: Arc::new(eval),
            prox: None,
            domain: DomainWitness::Unknown,
            argmin: None,
        }
    }

    pub fn with_prox<F>(mut self, prox: F) -> Self
    where
        F: Fn(&ResolventConfig, &Point) -> Result<Point> + Send + Sync + 'static,
    {
        self.prox = Some(Arc::new(prox));
        self
    }

    pub fn with_domain(mut self, domain: DomainWitness) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_argmin(mut self, argmin: Point) -> Self {
        self.argmin = Some(argmin);
        self
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &DomainWitness {
        &self.domain
    }

    pub fn argmin(&self) -> Option<&Point> {
        self.argmin.as_ref()
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.space.check(x)?;
        (self.eval)(x)
    }

    /// Proximal point of step `cfg.lambda` at `x`: the minimizer of
    /// `F(y) + d(y, x)^2 / (2 lambda)`. Uses the attached closed form when
    /// present and a per-space numeric solver otherwise.
    pub fn prox(&self, cfg: &ResolventConfig, x: &Point) -> Result<Point> {
        cfg.validate()?;
        self.space.check(x)?;
        if cfg.lambda == 0.0 {
            return Ok(x.clone());
        }
        if let Some(prox) = &self.prox {
            return prox(cfg, x);
        }
        match self.space.kind() {
            SpaceKind::Tree(_) => tree_prox_search(&self.space, cfg, x, |y| (self.eval)(y)),
            _ => descent_prox(&self.space, cfg, x, |y| (self.eval)(y)),
        }
    }
}

/// Minimize `F(y) + d(y, x)^2 / (2 lambda)` over a tree by a bracketed
/// golden-section search on every edge.
fn tree_prox_search<F>(space: &Space, cfg: &ResolventConfig, x: &Point, eval: F) -> Result<Point>
where
    F: Fn(&Point) -> Result<f64>,
{
    let SpaceKind::Tree(tree) = space.kind() else {
        return Err(Error::Unsupported("tree search needs a tree space"));
    };
    let half_inv_lambda = 0.5 / cfg.lambda;
    let objective = |y: &Point| -> f64 {
        let fv = eval(y).unwrap_or(f64::INFINITY);
        if !fv.is_finite() {
            return f64::INFINITY;
        }
        let d = space.distance(y, x).expect("same space");
        fv + d * d * half_inv_lambda
    };
    let mut best: Option<(f64, Point)> = None;
    for edge in 0..tree.edge_count() {
        let len = tree.edge_length(edge).expect("edge in range");
        let at = |t: f64| space.edge_point(edge, t.clamp(0.0, len)).expect("on edge");
        let feasible = |t: f64| objective(&at(t)).is_finite();
        let Some((lo, hi)) = finite_bracket(feasible, 0.0, len, 65, 60) else {
            continue;
        };
        let (t, ft) = golden_min(|t| objective(&at(t)), lo, hi, 1e-12 * math::fmax(len, 1.0), 200);
        if best.as_ref().is_none_or(|(bf, _)| ft < *bf) {
            best = Some((ft, at(t)));
        }
    }
    best.map(|(_, p)| p)
        .ok_or(Error::DomainError("proximal objective is nowhere finite"))
}

/// Coordinate chart for gradient descent: Euclidean blocks and hyperboloid
/// tangent frames, assembled recursively for products. Trees have no chart.
enum Chart<'a> {
    Euclid(&'a Euclidean),
    Hyper(&'a Hyperbolic),
    Prod(Box<Chart<'a>>, Box<Chart<'a>>),
}

impl<'a> Chart<'a> {
    fn build(kind: &'a SpaceKind) -> Option<Chart<'a>> {
        match kind {
            SpaceKind::Euclidean(e) => Some(Chart::Euclid(e)),
            SpaceKind::Hyperbolic(h) => Some(Chart::Hyper(h)),
            SpaceKind::Tree(_) => None,
            SpaceKind::Product(l, r) => Some(Chart::Prod(
                Box::new(Chart::build(l.kind())?),
                Box::new(Chart::build(r.kind())?),
            )),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Chart::Euclid(e) => e.dim(),
            Chart::Hyper(h) => h.dim(),
            Chart::Prod(l, r) => l.dim() + r.dim(),
        }
    }

    /// Move from `c` along the chart direction `dir` (length = `dim()`),
    /// geodesically in each factor.
    fn shift(&self, c: &Coords, dir: &[f64]) -> Coords {
        match self {
            Chart::Euclid(_) => {
                let v = match c {
                    Coords::Vector(v) => v,
                    _ => unreachable!("chart matches the space"),
                };
                Coords::Vector(v.iter().zip(dir).map(|(a, d)| a + d).collect())
            }
            Chart::Hyper(h) => {
                let p = match c {
                    Coords::Lorentz(v) => v,
                    _ => unreachable!("chart matches the space"),
                };
                let basis = h.tangent_basis(p);
                let mut ambient = alloc::vec![0.0; p.len()];
                for (coef, b) in dir.iter().zip(&basis) {
                    for (slot, bi) in ambient.iter_mut().zip(b) {
                        *slot += coef * bi;
                    }
                }
                Coords::Lorentz(h.exp_map(p, &ambient))
            }
            Chart::Prod(l, r) => {
                let (cl, cr) = match c {
                    Coords::Pair(a, b) => (a.as_ref(), b.as_ref()),
                    _ => unreachable!("chart matches the space"),
                };
                let (dl, dr) = dir.split_at(l.dim());
                Coords::Pair(Box::new(l.shift(cl, dl)), Box::new(r.shift(cr, dr)))
            }
        }
    }
}

/// Minimize `F(y) + d(y, x)^2 / (2 lambda)` by geodesic gradient descent
/// with central-difference gradients and Armijo backtracking. Requires a
/// finite objective at the start point `x`.
fn descent_prox<F>(space: &Space, cfg: &ResolventConfig, x: &Point, eval: F) -> Result<Point>
where
    F: Fn(&Point) -> Result<f64>,
{
    let Some(chart) = Chart::build(space.kind()) else {
        return Err(Error::Unsupported(
            "no generic proximal solver for products containing trees",
        ));
    };
    let n = chart.dim();
    let h = 1e-6;
    let half_inv_lambda = 0.5 / cfg.lambda;
    let obj = |y: &Point| -> f64 {
        let fv = eval(y).unwrap_or(f64::INFINITY);
        if !fv.is_finite() {
            return f64::INFINITY;
        }
        let d = space.distance(y, x).expect("same space");
        fv + d * d * half_inv_lambda
    };
    let mut y = x.clone();
    let mut fy = obj(&y);
    if !fy.is_finite() {
        return Err(Error::DomainError(
            "generic proximal descent must start inside the functional domain",
        ));
    }
    let mut eta = 1.0;
    let mut dir = alloc::vec![0.0_f64; n];
    let mut grad = alloc::vec![0.0_f64; n];
    for _ in 0..cfg.max_iter {
        for i in 0..n {
            dir[i] = h;
            let fp = obj(&space.wrap(chart.shift(y.coords(), &dir)));
            dir[i] = -h;
            let fm = obj(&space.wrap(chart.shift(y.coords(), &dir)));
            dir[i] = 0.0;
            grad[i] = (fp - fm) / (2.0 * h);
        }
        let gn2: f64 = grad.iter().map(|g| g * g).sum();
        if !gn2.is_finite() {
            return Err(Error::ProxDiverged {
                iterations: cfg.max_iter,
            });
        }
        if math::sqrt(gn2) < 1e-12 {
            return Ok(y);
        }
        eta = math::fmin(eta * 2.0, 1e3);
        loop {
            for (slot, g) in dir.iter_mut().zip(&grad) {
                *slot = -eta * g;
            }
            let cand = space.wrap(chart.shift(y.coords(), &dir));
            let fc = obj(&cand);
            if fc <= fy - 0.5 * eta * gn2 {
                y = cand;
                fy = fc;
                break;
            }
            eta *= 0.5;
            if eta < 1e-14 {
                for slot in dir.iter_mut() {
                    *slot = 0.0;
                }
                return Ok(y);
            }
        }
        if eta * math::sqrt(gn2) < 1e-10 {
            return Ok(y);
        }
    }
    Err(Error::ProxDiverged {
        iterations: cfg.max_iter,
    })
}

// ---------------------------------------------------------------------
// Monotone fields
// ---------------------------------------------------------------------

type ResolventOracle = dyn Fn(&ResolventConfig, &Point) -> Result<Point> + Send + Sync;
type SamplerFn = dyn Fn(u64) -> Result<(Point, TangentVec)> + Send + Sync;

/// A monotone vector field, presented through its resolvent.
pub struct MonotoneField {
    space: Space,
    name: String,
    resolvent: Arc<ResolventOracle>,
    sampler: Option<Arc<SamplerFn>>,
    min_norm: Option<Arc<MinNormFn>>,
    zero_set: ZeroSetWitness,
    domain: DomainWitness,
}

impl MonotoneField {
    /// Wrap a raw resolvent oracle. The oracle is trusted to implement a
    /// genuine resolvent; the property suites exist to catch violations.
    pub fn from_resolvent<F>(space: Space, name: &str, oracle: F) -> MonotoneField
    where
        F: Fn(&ResolventConfig, &Point) -> Result<Point> + Send + Sync + 'static,
    {
        MonotoneField {
            space,
            name: name.into(),
            resolvent: Arc::new(oracle),
            sampler: None,
            min_norm: None,
            zero_set: ZeroSetWitness::Unknown,
            domain: DomainWitness::Unknown,
        }
    }

    pub fn with_sampler<F>(mut self, sampler: F) -> Self
    where
        F: Fn(u64) -> Result<(Point, TangentVec)> + Send + Sync + 'static,
    {
        self.sampler = Some(Arc::new(sampler));
        self
    }

    pub fn with_min_norm<F>(mut self, f: F) -> Self
    where
        F: Fn(&Point) -> Result<f64> + Send + Sync + 'static,
    {
        self.min_norm = Some(Arc::new(f));
        self
    }

    pub fn with_zero_set(mut self, w: ZeroSetWitness) -> Self {
        self.zero_set = w;
        self
    }

    pub fn with_domain(mut self, w: DomainWitness) -> Self {
        self.domain = w;
        self
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn zero_set(&self) -> &ZeroSetWitness {
        &self.zero_set
    }

    pub fn domain(&self) -> &DomainWitness {
        &self.domain
    }

    pub fn has_sampler(&self) -> bool {
        self.sampler.is_some()
    }

    pub fn has_min_norm_oracle(&self) -> bool {
        self.min_norm.is_some()
    }

    /// The resolvent point for step `cfg.lambda` at `x`. Step zero is the
    /// identity.
    pub fn resolve(&self, cfg: &ResolventConfig, x: &Point) -> Result<Point> {
        cfg.validate()?;
        self.space.check(x)?;
        if cfg.lambda == 0.0 {
            return Ok(x.clone());
        }
        (self.resolvent)(cfg, x)
    }

    /// Resolvent with default tolerance and iteration budget.
    pub fn resolve_at(&self, lambda: f64, x: &Point) -> Result<Point> {
        self.resolve(&ResolventConfig::new(lambda), x)
    }

    /// Draw a `(point, field value at the point)` pair from the graph.
    pub fn sample_graph_pair(&self, seed: u64) -> Result<(Point, TangentVec)> {
        let sampler = self
            .sampler
            .as_ref()
            .ok_or(Error::MissingOracle("graph sampler"))?;
        sampler(seed)
    }

    /// The minimal norm `|Ax|` of the field at `x`: the closed form when
    /// one is attached, otherwise the finite-step estimate
    /// `d(x, J_lambda x) / lambda` at `lambda = 1e-6`, reported as infinite
    /// past 1e12 or when the probe fails.
    pub fn min_norm(&self, x: &Point) -> Result<f64> {
        self.space.check(x)?;
        if let Some(f) = &self.min_norm {
            let v = f(x)?;
            return Ok(if v > NORM_BLOWUP { f64::INFINITY } else { v });
        }
        let cfg = ResolventConfig::new(NORM_PROBE_LAMBDA);
        match self.resolve(&cfg, x) {
            Ok(j) => {
                let est = self.space.distance(x, &j)? / NORM_PROBE_LAMBDA;
                Ok(if est > NORM_BLOWUP { f64::INFINITY } else { est })
            }
            Err(_) => Ok(f64::INFINITY),
        }
    }

    /// Nearest known point of the closed domain, when a witness exists.
    pub fn project_domain(&self, x: &Point) -> Result<Option<Point>> {
        self.space.check(x)?;
        match &self.domain {
            DomainWitness::WholeSpace => Ok(Some(x.clone())),
            DomainWitness::Set(set) => Ok(Some(project_convex(&self.space, set, x)?)),
            DomainWitness::Unknown => Ok(None),
        }
    }

    /// Nearest known zero of the field, when a witness exists.
    pub fn project_zero_set(&self, x: &Point) -> Result<Option<Point>> {
        self.space.check(x)?;
        match &self.zero_set {
            ZeroSetWitness::WholeSpace => Ok(Some(x.clone())),
            ZeroSetWitness::Set(set) => Ok(Some(project_convex(&self.space, set, x)?)),
            ZeroSetWitness::Points(points) => {
                let mut best: Option<(f64, &Point)> = None;
                for p in points {
                    let d = self.space.distance(x, p)?;
                    if best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, p));
                    }
                }
                Ok(best.map(|(_, p)| p.clone()))
            }
            ZeroSetWitness::Unknown => Ok(None),
        }
    }
}

/// The subdifferential field of a convex functional: the resolvent is the
/// proximal map, and sampled graph pairs are the proximal subgradients
/// `(prox(x), d(prox(x), x)/lambda * dir(prox(x) -> x))`.
pub fn subdifferential_field(f: ConvexFunctional) -> MonotoneField {
    let f = Arc::new(f);
    let space = f.space().clone();
    let name: String = f.name().into();
    let zero_set = match f.argmin() {
        Some(a) => ZeroSetWitness::Points(alloc::vec![a.clone()]),
        None => ZeroSetWitness::Unknown,
    };
    let domain = f.domain.clone();
    let resolve_f = f.clone();
    let sampler_f = f.clone();
    let sampler_space = space.clone();
    MonotoneField {
        space,
        name,
        resolvent: Arc::new(move |cfg: &ResolventConfig, x: &Point| resolve_f.prox(cfg, x)),
        sampler: Some(Arc::new(move |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut last_err = Error::ProxDiverged { iterations: 0 };
            for _ in 0..8 {
                let x = sampler_space.sample_point(&mut rng);
                let lambda = 0.05 + 1.95 * rng.gen::<f64>();
                let cfg = ResolventConfig::new(lambda);
                match sampler_f.prox(&cfg, &x) {
                    Ok(p) => {
                        let d = sampler_space.distance(&p, &x)?;
                        let v = if d == 0.0 {
                            sampler_space.zero_tangent(&p)?
                        } else {
                            sampler_space.tangent(&p, d / lambda, &x)?
                        };
                        return Ok((p, v));
                    }
                    Err(e) => last_err = e,
                }
            }
            Err(last_err)
        })),
        min_norm: None,
        zero_set,
        domain,
    }
}

// ---------------------------------------------------------------------
// Nonexpansive maps and complementary fields
// ---------------------------------------------------------------------

/// A self-map of a space, claimed nonexpansive; the claim is checked on
/// sampled pairs when a complementary field is built from it.
pub struct NonexpansiveMap {
    space: Space,
    name: String,
    apply: Arc<MapFn>,
    fixed_set: ZeroSetWitness,
}

impl NonexpansiveMap {
    pub fn new<F>(space: Space, name: &str, apply: F) -> NonexpansiveMap
    where
        F: Fn(&Point) -> Result<Point> + Send + Sync + 'static,
    {
        NonexpansiveMap {
            space,
            name: name.into(),
            apply: Arc::new(apply),
            fixed_set: ZeroSetWitness::Unknown,
        }
    }

    pub fn with_fixed_set(mut self, w: ZeroSetWitness) -> Self {
        self.fixed_set = w;
        self
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.space.check(x)?;
        (self.apply)(x)
    }
}

const NONEXPANSIVE_CHECK_SEED: u64 = 0xC0FFEE;
const NONEXPANSIVE_CHECK_PAIRS: usize = 256;
const NONEXPANSIVE_CHECK_TOL: f64 = 1e-9;

/// The complementary field of a nonexpansive map `T`. The resolvent of step
/// `lambda` is the unique fixed point of `z -> geodesic(x, T z, lambda/(1+lambda))`,
/// found by contraction iteration; an a posteriori bound keeps the output
/// within `cfg.tol` of the true fixed point.
///
/// Fails with `NotNonexpansive` if sampled pairs show expansion beyond 1e-9.
pub fn complementary_field(map: NonexpansiveMap) -> Result<MonotoneField> {
    let space = map.space.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(NONEXPANSIVE_CHECK_SEED);
    for _ in 0..NONEXPANSIVE_CHECK_PAIRS {
        let x = space.sample_point(&mut rng);
        let y = space.sample_point(&mut rng);
        let d = space.distance(&x, &y)?;
        let dt = space.distance(&map.apply(&x)?, &map.apply(&y)?)?;
        if dt > d + NONEXPANSIVE_CHECK_TOL {
            return Err(Error::NotNonexpansive {
                factor: if d > 0.0 { dt / d } else { f64::INFINITY },
            });
        }
    }
    let name = alloc::format!("complementary({})", map.name);
    let map = Arc::new(map);
    let zero_set = map.fixed_set.clone();
    let resolve_map = map.clone();
    let resolve_space = space.clone();
    let norm_map = map.clone();
    let norm_space = space.clone();
    let sampler_map = map.clone();
    let sampler_space = space.clone();
    Ok(MonotoneField {
        space,
        name,
        resolvent: Arc::new(move |cfg: &ResolventConfig, x: &Point| {
            contraction_resolvent(&resolve_space, &resolve_map, cfg, x)
        }),
        sampler: Some(Arc::new(move |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut last_err = Error::NoExtension;
            for _ in 0..64 {
                let x = sampler_space.sample_point(&mut rng);
                let tx = sampler_map.apply(&x)?;
                let d = sampler_space.distance(&x, &tx)?;
                if d == 0.0 {
                    return Ok((x.clone(), sampler_space.zero_tangent(&x)?));
                }
                // The field value is d times the direction opposite to Tx,
                // which needs the geodesic to extend behind x.
                match sampler_space.extend_geodesic(&x, &tx, -1.0) {
                    Ok(w) => {
                        let v = sampler_space.tangent(&x, d, &w)?;
                        return Ok((x, v));
                    }
                    Err(e @ Error::NoExtension) => last_err = e,
                    Err(e) => return Err(e),
                }
            }
            Err(last_err)
        })),
        min_norm: Some(Arc::new(move |x: &Point| {
            let tx = norm_map.apply(x)?;
            norm_space.distance(x, &tx)
        })),
        zero_set,
        domain: DomainWitness::WholeSpace,
    })
}

/// Fixed point of `z -> geodesic(x, T z, s)` with `s = lambda/(1+lambda)`,
/// by Banach iteration from `x`. The map is an `s`-contraction, so after a
/// step of size `delta` the distance to the fixed point is at most
/// `s/(1-s) * delta = lambda * delta`; iteration stops once that bound
/// drops below `cfg.tol`.
///
/// Rounding noise of size `eps * scale` per evaluation keeps steady-state
/// steps near `2 eps * scale * (1+lambda)`, so for large `lambda` the
/// requested bound can lie below what the arithmetic can measure. Exact
/// steps shrink by at least the contraction factor each iteration; a run
/// of steps that fail to shrink therefore certifies the noise floor, and
/// the iterate is accepted there with error about `eps * lambda^2 * scale`.
fn contraction_resolvent(
    space: &Space,
    map: &NonexpansiveMap,
    cfg: &ResolventConfig,
    x: &Point,
) -> Result<Point> {
    let lambda = cfg.lambda;
    let s = lambda / (1.0 + lambda);
    let threshold = math::fmax(cfg.tol / lambda, 1e-300);
    // Halfway between the guaranteed shrink factor and no shrink at all:
    // legitimate steps stay below it, noise-dominated steps do not.
    let shrink = 0.5 * (1.0 + s);
    let mut prev_step = f64::INFINITY;
    let mut stalled = 0_u32;
    let mut z = x.clone();
    for _ in 0..cfg.max_iter {
        let tz = map.apply(&z)?;
        let next = space.geodesic_point(x, &tz, s)?;
        let step = space.distance(&next, &z)?;
        z = next;
        if step <= threshold {
            return Ok(z);
        }
        if step > prev_step * shrink {
            stalled += 1;
            if stalled >= 3 {
                return Ok(z);
            }
        } else {
            stalled = 0;
        }
        prev_step = step;
    }
    Err(Error::ProxDiverged {
        iterations: cfg.max_iter,
    })
}

// ---------------------------------------------------------------------
// Monotonicity
// ---------------------------------------------------------------------

/// The monotonicity residual of two graph pairs `(p, u)` and `(q, v)`:
/// the sum of cone inner products of the field values against the
/// displacement directions `d(p,q) * dir(p -> q)` and `d(p,q) * dir(q -> p)`.
/// Nonpositive (within tolerance) exactly when the pairs are consistent
/// with a monotone field; zero by convention when `p = q`.
pub fn monotonicity_residual(
    space: &Space,
    p: &Point,
    u: &TangentVec,
    q: &Point,
    v: &TangentVec,
) -> Result<f64> {
    space.check(p)?;
    space.check(q)?;
    if space.distance(u.base(), p)? > 1e-12 || space.distance(v.base(), q)? > 1e-12 {
        return Err(Error::BaseMismatch);
    }
    let d = space.distance(p, q)?;
    if d == 0.0 {
        return Ok(0.0);
    }
    let dir_pq = space.tangent(p, d, q)?;
    let dir_qp = space.tangent(q, d, p)?;
    Ok(space.tangent_inner(u, &dir_pq)? + space.tangent_inner(v, &dir_qp)?)
}

/// Convenience alias for `MonotoneField::min_norm`.
pub fn field_min_norm(field: &MonotoneField, x: &Point) -> Result<f64> {
    field.min_norm(x)
}

// ---------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------

/// Named constructions used across the test suites and the command line.
pub mod catalog {
    use super::*;

    /// `F = 0.5 d(., a)^2`: the proximal map slides toward `a` along the
    /// geodesic, `prox_lambda(x) = geodesic(x, a, lambda/(1+lambda))`, in
    /// every model space.
    pub fn quadratic(space: &Space, a: &Point) -> Result<MonotoneField> {
        space.validate_point(a)?;
        let eval_space = space.clone();
        let eval_a = a.clone();
        let prox_space = space.clone();
        let prox_a = a.clone();
        let f = ConvexFunctional::new(space.clone(), "quadratic", move |y: &Point| {
            let d = eval_space.distance(y, &eval_a)?;
            Ok(0.5 * d * d)
        })
        .with_prox(move |cfg: &ResolventConfig, x: &Point| {
            let s = cfg.lambda / (1.0 + cfg.lambda);
            prox_space.geodesic_point(x, &prox_a, s)
        })
        .with_domain(DomainWitness::WholeSpace)
        .with_argmin(a.clone());
        let norm_space = space.clone();
        let norm_a = a.clone();
        Ok(subdifferential_field(f)
            .with_min_norm(move |x: &Point| norm_space.distance(x, &norm_a)))
    }

    /// Indicator of a closed convex set: the proximal map is the metric
    /// projection for every step; the zero set is the whole set.
    pub fn indicator(space: &Space, set: ConvexSet) -> Result<MonotoneField> {
        // Validate the combination early by projecting a sample point.
        let base = space.base_point();
        project_convex(space, &set, &base)?;
        let eval_space = space.clone();
        let eval_set = set.clone();
        let prox_space = space.clone();
        let prox_set = set.clone();
        let f = ConvexFunctional::new(space.clone(), "indicator", move |y: &Point| {
            Ok(if set_contains(&eval_space, &eval_set, y, 1e-9)? {
                0.0
            } else {
                f64::INFINITY
            })
        })
        .with_prox(move |_cfg: &ResolventConfig, x: &Point| {
            project_convex(&prox_space, &prox_set, x)
        })
        .with_domain(DomainWitness::Set(set.clone()));
        let norm_space = space.clone();
        let norm_set = set.clone();
        Ok(subdifferential_field(f)
            .with_zero_set(ZeroSetWitness::Set(set))
            .with_min_norm(move |x: &Point| {
                Ok(if set_contains(&norm_space, &norm_set, x, 1e-9)? {
                    0.0
                } else {
                    f64::INFINITY
                })
            }))
    }

    /// `F = 0.5 d(., a)^2 + indicator(C)`. Exact in Euclidean spaces
    /// (project the unconstrained proximal point), solved edgewise on trees,
    /// and by segment search when `C` is a segment; other combinations are
    /// unsupported.
    pub fn quadratic_plus_indicator(
        space: &Space,
        a: &Point,
        set: ConvexSet,
    ) -> Result<MonotoneField> {
        space.validate_point(a)?;
        let zero = project_convex(space, &set, a)?;
        let eval_space = space.clone();
        let eval_set = set.clone();
        let eval_a = a.clone();
        let prox_space = space.clone();
        let prox_set = set.clone();
        let prox_a = a.clone();
        let f = ConvexFunctional::new(
            space.clone(),
            "quadratic_plus_indicator",
            move |y: &Point| {
                if !set_contains(&eval_space, &eval_set, y, 1e-9)? {
                    return Ok(f64::INFINITY);
                }
                let d = eval_space.distance(y, &eval_a)?;
                Ok(0.5 * d * d)
            },
        )
        .with_prox(move |cfg: &ResolventConfig, x: &Point| {
            constrained_quadratic_prox(&prox_space, &prox_a, &prox_set, cfg, x)
        })
        .with_domain(DomainWitness::Set(set))
        .with_argmin(zero);
        Ok(subdifferential_field(f))
    }

    fn constrained_quadratic_prox(
        space: &Space,
        a: &Point,
        set: &ConvexSet,
        cfg: &ResolventConfig,
        x: &Point,
    ) -> Result<Point> {
        let s = cfg.lambda / (1.0 + cfg.lambda);
        match space.kind() {
            SpaceKind::Euclidean(_) => {
                let m = space.geodesic_point(x, a, s)?;
                project_convex(space, set, &m)
            }
            SpaceKind::Tree(_) => tree_prox_search(space, cfg, x, |y: &Point| {
                if !set_contains(space, set, y, 1e-12)? {
                    return Ok(f64::INFINITY);
                }
                let d = space.distance(y, a)?;
                Ok(0.5 * d * d)
            }),
            _ => match set {
                ConvexSet::Segment { a: sa, b: sb } => {
                    let d_ab = space.distance(sa, sb)?;
                    if d_ab == 0.0 {
                        return Ok(sa.clone());
                    }
                    let objective = |t: f64| {
                        let g = space.geodesic_point(sa, sb, t).expect("t in range");
                        let da = space.distance(&g, a).expect("same space");
                        let dx = space.distance(&g, x).expect("same space");
                        0.5 * da * da + dx * dx * (0.5 / cfg.lambda)
                    };
                    let (t, _) = golden_min(objective, 0.0, 1.0, 1e-13, 220);
                    space.geodesic_point(sa, sb, t)
                }
                _ => Err(Error::Unsupported(
                    "constrained quadratic prox outside euclidean/tree spaces needs a segment set",
                )),
            },
        }
    }

    /// Self-maps available by name.
    pub enum MapSpec {
        Identity,
        Constant(Point),
        /// `x -> -x` in Euclidean coordinates.
        Reflection,
        /// Plane rotation by the angle, about the origin (dimension 2).
        Rotation(f64),
        Projection(ConvexSet),
    }

    pub fn nonexpansive_map(space: &Space, spec: MapSpec) -> Result<NonexpansiveMap> {
        match spec {
            MapSpec::Identity => Ok(NonexpansiveMap::new(space.clone(), "identity", {
                move |x: &Point| Ok(x.clone())
            })
            .with_fixed_set(ZeroSetWitness::WholeSpace)),
            MapSpec::Constant(c) => {
                space.validate_point(&c)?;
                let value = c.clone();
                Ok(
                    NonexpansiveMap::new(space.clone(), "constant", move |_x: &Point| {
                        Ok(value.clone())
                    })
                    .with_fixed_set(ZeroSetWitness::Points(alloc::vec![c])),
                )
            }
            MapSpec::Reflection => {
                let SpaceKind::Euclidean(_) = space.kind() else {
                    return Err(Error::Unsupported(
                        "reflection is a euclidean catalog map",
                    ));
                };
                let map_space = space.clone();
                let origin = space.base_point();
                Ok(
                    NonexpansiveMap::new(space.clone(), "reflection", move |x: &Point| {
                        let v: Vec<f64> = x
                            .vector()
                            .expect("euclidean point")
                            .iter()
                            .map(|c| -c)
                            .collect();
                        map_space.point(&v)
                    })
                    .with_fixed_set(ZeroSetWitness::Points(alloc::vec![origin])),
                )
            }
            MapSpec::Rotation(theta) => {
                let SpaceKind::Euclidean(e) = space.kind() else {
                    return Err(Error::Unsupported("rotation is a euclidean catalog map"));
                };
                if e.dim() != 2 {
                    return Err(Error::Unsupported("rotation needs dimension 2"));
                }
                let (c, s) = (math::cos(theta), math::sin(theta));
                let map_space = space.clone();
                let fixed = if c == 1.0 && s == 0.0 {
                    ZeroSetWitness::WholeSpace
                } else {
                    ZeroSetWitness::Points(alloc::vec![space.base_point()])
                };
                Ok(
                    NonexpansiveMap::new(space.clone(), "rotation", move |x: &Point| {
                        let v = x.vector().expect("euclidean point");
                        map_space.point(&[c * v[0] - s * v[1], s * v[0] + c * v[1]])
                    })
                    .with_fixed_set(fixed),
                )
            }
            MapSpec::Projection(set) => {
                let base = space.base_point();
                project_convex(space, &set, &base)?;
                let map_space = space.clone();
                let map_set = set.clone();
                Ok(
                    NonexpansiveMap::new(space.clone(), "projection", move |x: &Point| {
                        project_convex(&map_space, &map_set, x)
                    })
                    .with_fixed_set(ZeroSetWitness::Set(set)),
                )
            }
        }
    }

    /// Complementary field of a named map.
    pub fn complementary(space: &Space, spec: MapSpec) -> Result<MonotoneField> {
        complementary_field(nonexpansive_map(space, spec)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> Space {
        Space::euclidean(2).unwrap()
    }

    fn pt(s: &Space, x: f64, y: f64) -> Point {
        s.point(&[x, y]).unwrap()
    }

    #[test]
    fn quadratic_prox_slides_toward_anchor() {
        let s = r2();
        let a = pt(&s, 1.0, 1.0);
        let field = catalog::quadratic(&s, &a).unwrap();
        let x = pt(&s, 3.0, 1.0);
        let j = field.resolve_at(1.0, &x).unwrap();
        // lambda = 1: halfway toward the anchor.
        assert!(s.distance(&j, &pt(&s, 2.0, 1.0)).unwrap() < 1e-12);
        // Step zero is the identity.
        let j0 = field.resolve_at(0.0, &x).unwrap();
        assert_eq!(s.distance(&j0, &x).unwrap(), 0.0);
        // The anchor is a fixed point of every resolvent.
        let ja = field.resolve_at(7.5, &a).unwrap();
        assert!(s.distance(&ja, &a).unwrap() < 1e-12);
    }

    #[test]
    fn quadratic_monotonicity_residual_is_minus_square_distance() {
        let s = r2();
        let a = pt(&s, 0.0, 0.0);
        let p = pt(&s, 1.0, 2.0);
        let q = pt(&s, -1.0, 0.5);
        // The subdifferential of the quadratic at p points away from the
        // anchor with norm d(p, a); realize it with a witness behind p.
        let u_w = s.extend_geodesic(&p, &a, -1.0).unwrap();
        let u = s.tangent(&p, s.distance(&p, &a).unwrap(), &u_w).unwrap();
        let v_w = s.extend_geodesic(&q, &a, -1.0).unwrap();
        let v = s.tangent(&q, s.distance(&q, &a).unwrap(), &v_w).unwrap();
        let resid = monotonicity_residual(&s, &p, &u, &q, &v).unwrap();
        let d = s.distance(&p, &q).unwrap();
        assert!((resid + d * d).abs() < 1e-10);
    }

    #[test]
    fn sampled_graph_pairs_are_monotone() {
        let s = r2();
        let a = pt(&s, 0.5, -0.25);
        let field = catalog::quadratic(&s, &a).unwrap();
        for seed in 0..50u64 {
            let (p, u) = field.sample_graph_pair(seed).unwrap();
            let (q, v) = field.sample_graph_pair(seed + 1000).unwrap();
            let r = monotonicity_residual(&s, &p, &u, &q, &v).unwrap();
            assert!(r <= 1e-9, "residual {r} at seed {seed}");
        }
    }

    #[test]
    fn expansive_pairs_show_positive_residual() {
        let s = Space::euclidean(1).unwrap();
        let p = s.point(&[1.0]).unwrap();
        let q = s.point(&[-1.0]).unwrap();
        // Field values of x -> x - 2x = -x scaled by d(x, Tx) = 2|x|:
        // at p = 1 the value points toward Tp = 2, with norm 1... the
        // complementary field of T(x) = 2x evaluates to -(Tx - x) = -x per
        // unit, so at p = 1 it points toward 0 with norm 1, and at q = -1
        // toward 0 with norm 1. These cross and violate monotonicity.
        let u = s.tangent(&p, 1.0, &q).unwrap();
        let v = s.tangent(&q, 1.0, &p).unwrap();
        let r = monotonicity_residual(&s, &p, &u, &q, &v).unwrap();
        assert!((r - 4.0).abs() < 1e-12);
        assert!(r > 0.0);
    }

    #[test]
    fn indicator_resolves_to_projection() {
        let s = r2();
        let c = pt(&s, 0.0, 0.0);
        let set = ConvexSet::ball(c, 1.0).unwrap();
        let field = catalog::indicator(&s, set).unwrap();
        let x = pt(&s, 2.0, 0.0);
        for lambda in [1e-3, 1.0, 1e3] {
            let j = field.resolve_at(lambda, &x).unwrap();
            assert!(s.distance(&j, &pt(&s, 1.0, 0.0)).unwrap() < 1e-12);
        }
        assert_eq!(field.min_norm(&pt(&s, 0.2, 0.0)).unwrap(), 0.0);
        assert_eq!(field.min_norm(&x).unwrap(), f64::INFINITY);
    }

    #[test]
    fn constrained_quadratic_matches_projected_formula() {
        let s = r2();
        let a = pt(&s, 2.0, 2.0);
        let set = ConvexSet::ball(pt(&s, 0.0, 0.0), 1.0).unwrap();
        let field = catalog::quadratic_plus_indicator(&s, &a, set).unwrap();
        let x = pt(&s, -3.0, 0.0);
        let lambda = 2.0;
        let j = field.resolve_at(lambda, &x).unwrap();
        // P_C((x + lambda a) / (1 + lambda)) by hand.
        let m = [
            (x.vector().unwrap()[0] + lambda * 2.0) / 3.0,
            (x.vector().unwrap()[1] + lambda * 2.0) / 3.0,
        ];
        let norm = math::sqrt(m[0] * m[0] + m[1] * m[1]);
        let expect = pt(&s, m[0] / norm, m[1] / norm);
        assert!(s.distance(&j, &expect).unwrap() < 1e-10);
    }

    #[test]
    fn complementary_identity_and_constant() {
        let s = r2();
        let id = catalog::complementary(&s, catalog::MapSpec::Identity).unwrap();
        let x = pt(&s, 0.7, -0.3);
        let j = id.resolve_at(5.0, &x).unwrap();
        assert!(s.distance(&j, &x).unwrap() < 1e-12);
        assert_eq!(id.min_norm(&x).unwrap(), 0.0);

        let c = pt(&s, 1.0, 0.0);
        let con = catalog::complementary(&s, catalog::MapSpec::Constant(c.clone())).unwrap();
        // Fixed point of z -> (x + lambda c) / (1 + lambda): closed form.
        let lambda = 3.0;
        let j = con.resolve_at(lambda, &x).unwrap();
        let expect = pt(
            &s,
            (0.7 + lambda * 1.0) / (1.0 + lambda),
            (-0.3) / (1.0 + lambda),
        );
        assert!(s.distance(&j, &expect).unwrap() < 1e-9);
    }

    #[test]
    fn one_dimensional_negation_resolvent() {
        let line = Space::euclidean(1).unwrap();
        let refl = catalog::complementary(&line, catalog::MapSpec::Reflection).unwrap();
        let x = line.point(&[1.0]).unwrap();
        for lambda in [0.5, 1.0, 2.0] {
            let j = refl.resolve_at(lambda, &x).unwrap();
            let expect = 1.0 / (1.0 + 2.0 * lambda);
            assert!(
                (j.vector().unwrap()[0] - expect).abs() < 1e-9,
                "lambda {lambda}"
            );
        }
        // |A_T x| = d(x, Tx) = 2|x|.
        assert!((refl.min_norm(&x).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn expansive_map_is_rejected() {
        let s = r2();
        let doubling = NonexpansiveMap::new(s.clone(), "doubling", {
            let s = s.clone();
            move |x: &Point| {
                let v: Vec<f64> = x.vector().unwrap().iter().map(|c| 2.0 * c).collect();
                s.point(&v)
            }
        });
        assert!(matches!(
            complementary_field(doubling),
            Err(Error::NotNonexpansive { .. })
        ));
    }

    #[test]
    fn generic_descent_prox_matches_closed_form() {
        let s = r2();
        let a = pt(&s, 0.6, -0.4);
        let eval_space = s.clone();
        let eval_a = a.clone();
        let f = ConvexFunctional::new(s.clone(), "quadratic-no-prox", move |y: &Point| {
            let d = eval_space.distance(y, &eval_a)?;
            Ok(0.5 * d * d)
        });
        let x = pt(&s, 2.0, 1.0);
        let cfg = ResolventConfig::new(1.5);
        let got = f.prox(&cfg, &x).unwrap();
        let want = s.geodesic_point(&x, &a, 1.5 / 2.5).unwrap();
        assert!(s.distance(&got, &want).unwrap() < 1e-6);
    }

    #[test]
    fn generic_descent_prox_on_hyperboloid() {
        let h = Space::hyperbolic(2).unwrap();
        let a = h.lift(&[0.4, -0.2]).unwrap();
        let eval_space = h.clone();
        let eval_a = a.clone();
        let f = ConvexFunctional::new(h.clone(), "quadratic-no-prox", move |y: &Point| {
            let d = eval_space.distance(y, &eval_a)?;
            Ok(0.5 * d * d)
        });
        let x = h.lift(&[-0.9, 0.7]).unwrap();
        let cfg = ResolventConfig::new(2.0);
        let got = f.prox(&cfg, &x).unwrap();
        let want = h.geodesic_point(&x, &a, 2.0 / 3.0).unwrap();
        assert!(h.distance(&got, &want).unwrap() < 1e-6);
    }

    #[test]
    fn tree_prox_search_matches_geodesic_formula() {
        use crate::spaces::tree::TreeSpec;
        let spec = TreeSpec::new(
            alloc::vec!["o", "a", "b", "c"],
            alloc::vec![("o", "a", 1.0), ("o", "b", 1.0), ("o", "c", 1.0)],
        );
        let s = Space::tree(&spec).unwrap();
        let anchor = s.vertex("o").unwrap();
        let eval_space = s.clone();
        let eval_a = anchor.clone();
        let f = ConvexFunctional::new(s.clone(), "quadratic-no-prox", move |y: &Point| {
            let d = eval_space.distance(y, &eval_a)?;
            Ok(0.5 * d * d)
        });
        let x = s.edge_point(2, 0.9).unwrap();
        let cfg = ResolventConfig::new(1.0);
        let got = f.prox(&cfg, &x).unwrap();
        let want = s.geodesic_point(&x, &anchor, 0.5).unwrap();
        assert!(s.distance(&got, &want).unwrap() < 1e-8);
    }
}

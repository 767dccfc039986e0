//! Hyperbolic space in the hyperboloid model.
//!
//! Points are stored in ambient Minkowski coordinates `(x0, x1, ..., xn)`
//! with `<x, x> = -1` and `x0 > 0`, where `<x, y> = -x0 y0 + sum(xi yi)`.
//! Distances use an asinh form of the chord formula, which keeps full
//! precision for nearby points where `acosh(1 + eps)` would lose half the
//! significant digits. Every operation renormalizes its result back onto the
//! hyperboloid sheet.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math;

const SHEET_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct Hyperbolic {
    dim: usize,
}

/// Minkowski inner product on ambient coordinates.
pub(crate) fn mdot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = -a[0] * b[0];
    for i in 1..a.len() {
        s += a[i] * b[i];
    }
    s
}

/// `1 + sum of squared spatial coordinates` as a high/low pair.
///
/// Each square is split exactly through an FMA remainder and the running
/// sum keeps a two-sum compensation term, so the pair carries the value to
/// roughly double-double accuracy. The sheet residual is a difference of
/// numbers of size `x0^2`, and this split is what lets that cancellation
/// happen without swallowing the answer.
fn spatial_form(x: &[f64]) -> (f64, f64) {
    let mut hi = 1.0_f64;
    let mut lo = 0.0_f64;
    for &xi in &x[1..] {
        let p = xi * xi;
        let p_err = math::fma(xi, xi, -p);
        let s = hi + p;
        let b = s - hi;
        let err = (hi - (s - b)) + (p - b);
        hi = s;
        lo += err + p_err;
    }
    (hi, lo)
}

impl Hyperbolic {
    pub fn new(dim: usize) -> Result<Hyperbolic> {
        if dim == 0 {
            return Err(Error::InvalidSpace(
                "hyperbolic dimension must be positive".into(),
            ));
        }
        Ok(Hyperbolic { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ambient coordinate count: dim + 1.
    pub fn ambient_dim(&self) -> usize {
        self.dim + 1
    }

    /// Lift spatial coordinates `u` onto the sheet: `(sqrt(1 + |u|^2), u)`.
    pub fn lift(&self, spatial: &[f64]) -> Result<Vec<f64>> {
        if spatial.len() != self.dim {
            return Err(Error::InvalidSpace(alloc::format!(
                "expected {} spatial coordinates, got {}",
                self.dim,
                spatial.len()
            )));
        }
        if spatial.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpace("non-finite coordinate".into()));
        }
        let norm2: f64 = spatial.iter().map(|c| c * c).sum();
        let mut out = Vec::with_capacity(self.dim + 1);
        out.push(math::sqrt(1.0 + norm2));
        out.extend_from_slice(spatial);
        Ok(out)
    }

    pub fn validate(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim + 1 {
            return Err(Error::InvalidSpace(alloc::format!(
                "expected {} ambient coordinates, got {}",
                self.dim + 1,
                x.len()
            )));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpace("non-finite coordinate".into()));
        }
        if x[0] <= 0.0 {
            return Err(Error::InvalidSpace(
                "point is not on the upper sheet".into(),
            ));
        }
        // q + 1 = (1 + sum xi^2) - x0^2. Both sides are of size x0^2 and
        // agree to machine precision, so subtract the high parts first
        // (exact, the operands are within a factor of two) and fold the
        // compensation terms in afterwards. A plain mdot(x, x) would bury
        // residuals near the tolerance under its own rounding noise once
        // the coordinates grow past a few hundred.
        let (hi, lo) = spatial_form(x);
        let p = x[0] * x[0];
        let p_err = math::fma(x[0], x[0], -p);
        let resid = (hi - p) + (lo - p_err);
        if math::abs(resid) > SHEET_TOL {
            let q = resid - 1.0;
            return Err(Error::InvalidSpace(alloc::format!(
                "point is off the hyperboloid: <x,x> = {q}"
            )));
        }
        Ok(())
    }

    /// Reproject onto the sheet by recomputing the timelike coordinate
    /// from the spatial part: `x0 = sqrt(1 + sum xi^2)`.
    ///
    /// Rescaling by the measured quadratic form would reinject the
    /// cancellation noise of that measurement; recomputing `x0` instead
    /// leaves the spatial coordinates untouched and lands within an ulp
    /// of the nearest representable sheet point.
    pub(crate) fn renormalize(&self, x: &mut [f64]) {
        let (hi, lo) = spatial_form(x);
        let mut x0 = math::sqrt(hi);
        // One Newton step against the split sum pins the last ulp: the
        // square root alone only sees the high part.
        let r = math::fma(x0, x0, -hi) - lo;
        x0 -= r / (2.0 * x0);
        x[0] = x0;
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        // <a-b, a-b> = <a,a> + <b,b> - 2<a,b> = -2 - 2<a,b> >= 0, and
        // d = 2 asinh(sqrt(<a-b, a-b>) / 2) reproduces acosh(-<a,b>) without
        // the catastrophic cancellation near coincident points.
        let mut q = 0.0;
        {
            let d0 = a[0] - b[0];
            q -= d0 * d0;
            for i in 1..a.len() {
                let di = a[i] - b[i];
                q += di * di;
            }
        }
        if q <= 0.0 {
            return 0.0;
        }
        2.0 * math::asinh(0.5 * math::sqrt(q))
    }

    /// Geodesic through `a` and `b`, evaluated at any real parameter `t`.
    /// Requires a != b for parameters outside {0, 1}.
    pub fn geodesic(&self, a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
        let d = self.distance(a, b);
        if d == 0.0 {
            return a.to_vec();
        }
        let sd = math::sinh(d);
        let ca = math::sinh((1.0 - t) * d) / sd;
        let cb = math::sinh(t * d) / sd;
        let mut out: Vec<f64> = a
            .iter()
            .zip(b)
            .map(|(x, y)| ca * x + cb * y)
            .collect();
        self.renormalize(&mut out);
        out
    }

    /// Unit tangent vector at `p` pointing toward `q`, in ambient
    /// coordinates. Requires p != q.
    pub(crate) fn unit_tangent(&self, p: &[f64], q: &[f64]) -> Vec<f64> {
        let d = self.distance(p, q);
        debug_assert!(d > 0.0);
        let ch = math::cosh(d);
        let sh = math::sinh(d);
        p.iter().zip(q).map(|(pi, qi)| (qi - ch * pi) / sh).collect()
    }

    /// Cosine of the angle at `p` between directions toward `x` and `y`.
    pub fn cos_angle(&self, p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        let u = self.unit_tangent(p, x);
        let v = self.unit_tangent(p, y);
        let uu = mdot(&u, &u);
        let vv = mdot(&v, &v);
        let uv = mdot(&u, &v);
        (uv / math::sqrt(uu * vv)).clamp(-1.0, 1.0)
    }

    /// Exponential map: start at `p`, move along the tangent `v` (Minkowski
    /// orthogonal to `p`) for length `|v|`.
    pub(crate) fn exp_map(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        let n2 = mdot(v, v);
        if n2 <= 0.0 {
            return p.to_vec();
        }
        let n = math::sqrt(n2);
        let ch = math::cosh(n);
        let sh_over = math::sinh(n) / n;
        let mut out: Vec<f64> = p
            .iter()
            .zip(v)
            .map(|(pi, vi)| ch * pi + sh_over * vi)
            .collect();
        self.renormalize(&mut out);
        out
    }

    /// Minkowski-orthonormal basis of the tangent space at `p`.
    pub(crate) fn tangent_basis(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim;
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..=n {
            // Project the ambient axis onto the tangent space at p:
            // w = e_i + <e_i, p> p  satisfies <w, p> = 0 since <p,p> = -1.
            let ei_p = if i == 0 { -p[0] } else { p[i] };
            let mut w: Vec<f64> = p.iter().map(|pi| ei_p * pi).collect();
            w[i] += 1.0;
            // Gram-Schmidt against what we already kept.
            for b in &basis {
                let c = mdot(&w, b);
                for (wj, bj) in w.iter_mut().zip(b) {
                    *wj -= c * bj;
                }
            }
            let n2 = mdot(&w, &w);
            if n2 > 1e-12 {
                let inv = 1.0 / math::sqrt(n2);
                for wj in w.iter_mut() {
                    *wj *= inv;
                }
                basis.push(w);
                if basis.len() == n {
                    break;
                }
            }
        }
        debug_assert_eq!(basis.len(), n);
        basis
    }

    /// Sample from a ball of spatial radius 2 around the origin lift.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let spatial: Vec<f64> = (0..self.dim).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
        self.lift(&spatial).expect("sampled coordinates are finite")
    }
}

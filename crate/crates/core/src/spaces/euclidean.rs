//! Flat Euclidean geometry: the simplest model space, and the comparison
//! plane every curvature bound in the crate is tested against.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math;

#[derive(Clone, Debug)]
pub struct Euclidean {
    dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Result<Euclidean> {
        if dim == 0 {
            return Err(Error::InvalidSpace(
                "euclidean dimension must be positive".into(),
            ));
        }
        Ok(Euclidean { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn validate(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::InvalidSpace(alloc::format!(
                "expected {} coordinates, got {}",
                self.dim,
                v.len()
            )));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpace("non-finite coordinate".into()));
        }
        Ok(())
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (x, y) in a.iter().zip(b) {
            let d = x - y;
            sum += d * d;
        }
        math::sqrt(sum)
    }

    pub fn geodesic(&self, a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + (y - x) * t).collect()
    }

    /// Affine extension: defined for every real parameter.
    pub fn extend(&self, a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
        self.geodesic(a, b, s)
    }

    /// Cosine of the angle at `p` between the directions toward `x` and `y`.
    /// Requires both displacements to be nonzero.
    pub fn cos_angle(&self, p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        let mut dot = 0.0;
        let mut nx = 0.0;
        let mut ny = 0.0;
        for i in 0..p.len() {
            let u = x[i] - p[i];
            let v = y[i] - p[i];
            dot += u * v;
            nx += u * u;
            ny += v * v;
        }
        (dot / (math::sqrt(nx) * math::sqrt(ny))).clamp(-1.0, 1.0)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dim).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect()
    }
}

//! Tangent-cone vectors.
//!
//! A tangent vector at a base point is a nonnegative scale together with a
//! witness point: the vector points along the geodesic from the base toward
//! the witness, with norm equal to the scale. The zero vector carries no
//! direction. The cone distance between two vectors at the same base is the
//! law-of-cosines combination of their norms and the Alexandrov angle
//! between their witness directions, and the cone inner product is
//! `|u| |v| cos(angle)`.

use crate::error::{Error, Result};
use crate::math;
use crate::space::{Point, Space};

/// How far apart two base points may sit while still counting as the same
/// anchor. Bases are normally literal clones; the slack only absorbs
/// round-off from equivalent representations.
const BASE_TOL: f64 = 1e-12;

/// A vector in the tangent cone at `base`.
#[derive(Clone, Debug)]
pub struct TangentVec {
    base: Point,
    scale: f64,
    witness: Point,
    zero: bool,
}

impl TangentVec {
    pub fn base(&self) -> &Point {
        &self.base
    }

    /// Norm of the vector: the scale, or zero for the zero vector.
    pub fn norm(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.scale
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// The point the vector aims at; the base itself for the zero vector.
    pub fn witness(&self) -> &Point {
        &self.witness
    }
}

impl Space {
    /// The zero vector at `base`.
    pub fn zero_tangent(&self, base: &Point) -> Result<TangentVec> {
        self.check(base)?;
        Ok(TangentVec {
            base: base.clone(),
            scale: 0.0,
            witness: base.clone(),
            zero: true,
        })
    }

    /// Vector at `base` of norm `scale` pointing toward `witness`.
    /// Collapses to the zero vector when the scale vanishes or the witness
    /// coincides with the base.
    pub fn tangent(&self, base: &Point, scale: f64, witness: &Point) -> Result<TangentVec> {
        self.check(base)?;
        self.check(witness)?;
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(Error::DomainError(
                "tangent scale must be finite and nonnegative",
            ));
        }
        let zero = scale == 0.0 || self.distance(base, witness)? == 0.0;
        Ok(TangentVec {
            base: base.clone(),
            scale: if zero { 0.0 } else { scale },
            witness: if zero { base.clone() } else { witness.clone() },
            zero,
        })
    }

    /// Unit vector at `p` along the geodesic toward `x`.
    pub fn direction(&self, p: &Point, x: &Point) -> Result<TangentVec> {
        if self.distance(p, x)? == 0.0 {
            return Err(Error::ZeroDirection);
        }
        self.tangent(p, 1.0, x)
    }

    /// The vector `d(p, x)` times the unit direction from `p` to `x`;
    /// the zero vector when the points coincide.
    pub fn displacement(&self, p: &Point, x: &Point) -> Result<TangentVec> {
        let d = self.distance(p, x)?;
        if d == 0.0 {
            self.zero_tangent(p)
        } else {
            self.tangent(p, d, x)
        }
    }

    /// Unit vector at `p` opposite to the direction toward `x`: the
    /// direction along the reversed geodesic, which must extend past `p`.
    pub fn negative_direction(&self, p: &Point, x: &Point) -> Result<TangentVec> {
        if self.distance(p, x)? == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let witness = self.extend_geodesic(p, x, -1.0)?;
        self.tangent(p, 1.0, &witness)
    }

    /// Scale a tangent vector by a nonnegative factor.
    pub fn scale_tangent(&self, v: &TangentVec, c: f64) -> Result<TangentVec> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::DomainError(
                "tangent scale factor must be finite and nonnegative",
            ));
        }
        if v.zero || c == 0.0 {
            return self.zero_tangent(&v.base);
        }
        self.tangent(&v.base, v.scale * c, &v.witness)
    }

    fn check_same_base(&self, u: &TangentVec, v: &TangentVec) -> Result<()> {
        self.check(&u.base)?;
        self.check(&v.base)?;
        if self.distance(&u.base, &v.base)? > BASE_TOL {
            return Err(Error::BaseMismatch);
        }
        Ok(())
    }

    /// Cosine of the angle between two nonzero vectors at the same base.
    fn tangent_cos(&self, u: &TangentVec, v: &TangentVec) -> f64 {
        debug_assert!(!u.zero && !v.zero);
        self.kind()
            .cos_angle_c(u.base.coords(), u.witness.coords(), v.witness.coords())
    }

    /// Cone distance between two vectors at the same base:
    /// `sqrt(|u|^2 + |v|^2 - 2 |u| |v| cos(angle))`.
    pub fn tangent_distance(&self, u: &TangentVec, v: &TangentVec) -> Result<f64> {
        self.check_same_base(u, v)?;
        if u.zero && v.zero {
            return Ok(0.0);
        }
        if u.zero {
            return Ok(v.norm());
        }
        if v.zero {
            return Ok(u.norm());
        }
        let cos = self.tangent_cos(u, v);
        let d2 = u.scale * u.scale + v.scale * v.scale - 2.0 * u.scale * v.scale * cos;
        Ok(math::sqrt(math::fmax(d2, 0.0)))
    }

    /// Cone inner product: `|u| |v| cos(angle)`, zero when either vector is
    /// the zero vector.
    pub fn tangent_inner(&self, u: &TangentVec, v: &TangentVec) -> Result<f64> {
        self.check_same_base(u, v)?;
        if u.zero || v.zero {
            return Ok(0.0);
        }
        Ok(u.scale * v.scale * self.tangent_cos(u, v))
    }

    /// Whether two vectors at the same base agree up to `tol` in the cone
    /// metric.
    pub fn tangent_eq(&self, u: &TangentVec, v: &TangentVec, tol: f64) -> Result<bool> {
        Ok(self.tangent_distance(u, v)? <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> Space {
        Space::euclidean(2).unwrap()
    }

    #[test]
    fn collinear_scales_subtract() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 0.0]).unwrap();
        let u = s.tangent(&p, 3.0, &x).unwrap();
        let v = s.tangent(&p, 1.0, &x).unwrap();
        assert!((s.tangent_distance(&u, &v).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_vector_distance_is_the_norm() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 0.0]).unwrap();
        let u = s.tangent(&p, 3.0, &x).unwrap();
        let z = s.zero_tangent(&p).unwrap();
        assert_eq!(s.tangent_distance(&u, &z).unwrap(), 3.0);
        assert_eq!(s.tangent_inner(&u, &z).unwrap(), 0.0);
        assert_eq!(z.norm(), 0.0);
    }

    #[test]
    fn orthogonal_units_are_sqrt2_apart() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 0.0]).unwrap();
        let y = s.point(&[0.0, 1.0]).unwrap();
        let u = s.direction(&p, &x).unwrap();
        let v = s.direction(&p, &y).unwrap();
        let d = s.tangent_distance(&u, &v).unwrap();
        assert!((d - math::sqrt(2.0)).abs() < 1e-12);
    }

    #[test]
    fn bases_must_match() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let q = s.point(&[5.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 0.0]).unwrap();
        let u = s.tangent(&p, 1.0, &x).unwrap();
        let v = s.tangent(&q, 1.0, &x).unwrap();
        assert!(matches!(
            s.tangent_distance(&u, &v),
            Err(Error::BaseMismatch)
        ));
    }

    #[test]
    fn inner_product_values() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 0.0]).unwrap();
        let u = s.tangent(&p, 2.0, &x).unwrap();
        assert!((s.tangent_inner(&u, &u).unwrap() - 4.0).abs() < 1e-12);

        // 60 degrees, scales 2 and 3: inner product 3.
        let w = s.point(&[0.5, 0.8660254037844386]).unwrap();
        let v = s.tangent(&p, 3.0, &w).unwrap();
        assert!((s.tangent_inner(&u, &v).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn negative_direction_reverses() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[2.0, 0.0]).unwrap();
        let n = s.negative_direction(&p, &x).unwrap();
        assert_eq!(n.norm(), 1.0);
        let u = s.direction(&p, &x).unwrap();
        // Opposite unit vectors: inner product -1, distance 2.
        assert!((s.tangent_inner(&u, &n).unwrap() + 1.0).abs() < 1e-12);
        assert!((s.tangent_distance(&u, &n).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_is_bilinear_in_the_inner_product() {
        let s = r2();
        let p = s.point(&[0.0, 0.0]).unwrap();
        let x = s.point(&[1.0, 2.0]).unwrap();
        let y = s.point(&[-1.0, 1.0]).unwrap();
        let u = s.displacement(&p, &x).unwrap();
        let v = s.displacement(&p, &y).unwrap();
        let base = s.tangent_inner(&u, &v).unwrap();
        let u3 = s.scale_tangent(&u, 3.0).unwrap();
        let v05 = s.scale_tangent(&v, 0.5).unwrap();
        let scaled = s.tangent_inner(&u3, &v05).unwrap();
        assert!((scaled - 1.5 * base).abs() < 1e-12);
    }
}

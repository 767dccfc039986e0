//! Scalar math shims that work with or without the standard library.
//!
//! When `std` is enabled these forward to the usual `f64` methods; in
//! `no_std` builds they fall back to `libm`. Everything else in the crate
//! routes transcendental calls through here so the core stays portable.

#![allow(clippy::excessive_precision)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("catflow-core requires either the `std` feature or the `libm` feature");

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sqrt()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sqrt(x)
    }
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.abs()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::fabs(x)
    }
}

#[inline]
pub(crate) fn acos(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.acos()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::acos(x)
    }
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.cos()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::cos(x)
    }
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sin()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sin(x)
    }
}

#[inline]
pub(crate) fn sinh(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.sinh()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::sinh(x)
    }
}

#[inline]
pub(crate) fn cosh(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.cosh()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::cosh(x)
    }
}

#[inline]
pub(crate) fn asinh(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.asinh()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::asinh(x)
    }
}

#[inline]
pub(crate) fn fma(a: f64, b: f64, c: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        a.mul_add(b, c)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::fma(a, b, c)
    }
}

#[inline]
pub(crate) fn fmax(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

#[inline]
pub(crate) fn fmin(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

/// Arc cosine with the argument clamped into [-1, 1] so that floating-point
/// drift just outside the interval never produces NaN.
#[inline]
pub(crate) fn acos_clamped(x: f64) -> f64 {
    acos(x.clamp(-1.0, 1.0))
}

/// Ceiling of a nonnegative finite value, as a count.
#[inline]
pub(crate) fn ceil_pos(x: f64) -> usize {
    debug_assert!(x.is_finite() && x >= 0.0);
    let whole = x as usize;
    if x > whole as f64 {
        whole + 1
    } else {
        whole
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamped_acos_absorbs_drift() {
        assert_eq!(acos_clamped(1.0 + 1e-14), 0.0);
        assert_eq!(acos_clamped(-1.0 - 1e-14), core::f64::consts::PI);
    }

    #[test]
    fn asinh_reference_value() {
        assert!((asinh(1.0) - 0.8813735870195430).abs() < 1e-15);
    }
}

//! Float functions routed through std or libm so the rest of the crate
//! stays oblivious to the build mode.

#[cfg(feature = "std")]
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[cfg(feature = "std")]
#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    x.sin()
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[cfg(feature = "std")]
#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    x.cos()
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

/// Modulus of a complex number without pulling in `Complex::norm`, which
/// needs a `Float` bound that is awkward under `no_std`.
#[inline]
pub(crate) fn cabs(z: crate::Complex64) -> f64 {
    sqrt(z.norm_sqr())
}

pub(crate) const PI: f64 = core::f64::consts::PI;

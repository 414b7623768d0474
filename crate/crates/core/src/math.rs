//! Float math routed through libm so results are identical with and
//! without the `std` feature.

#[inline(always)]
pub(crate) fn powf(x: f64, e: f64) -> f64 {
    libm::pow(x, e)
}

#[inline(always)]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline(always)]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline(always)]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline(always)]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline(always)]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline(always)]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

/// Euclidean length of a short vector (gradient at one quadrature point).
#[inline(always)]
pub(crate) fn norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|c| c * c).sum())
}

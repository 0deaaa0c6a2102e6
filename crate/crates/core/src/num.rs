//! Thin wrappers over `libm` so the rest of the crate stays `no_std`-clean.

#![allow(dead_code)]

#[inline(always)]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}
#[inline(always)]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline(always)]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
#[inline(always)]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline(always)]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline(always)]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline(always)]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}
#[inline(always)]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}
#[inline(always)]
pub fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}
#[inline(always)]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}
#[inline(always)]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Maximum of two floats, NaN-propagating on the first argument.
#[inline(always)]
pub fn max(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}
#[inline(always)]
pub fn min(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

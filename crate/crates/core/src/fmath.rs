//! Float math for `no_std` builds.
//!
//! Under the default `std` feature the inherent `f64` methods are used
//! directly. Without `std` those methods do not exist, so this trait
//! supplies them via `libm`. Inherent methods always win method
//! resolution, so importing the trait in a `std` build is a no-op.

#![cfg_attr(feature = "std", allow(dead_code))]

pub(crate) trait F64Math {
    fn sqrt(self) -> f64;
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn powf(self, e: f64) -> f64;
    fn sin(self) -> f64;
    fn cos(self) -> f64;
    fn atan2(self, other: f64) -> f64;
    fn abs(self) -> f64;
    fn floor(self) -> f64;
    fn ceil(self) -> f64;
    fn round(self) -> f64;
    fn fract(self) -> f64;
}

impl F64Math for f64 {
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn atan2(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    fn ceil(self) -> f64 {
        libm::ceil(self)
    }
    fn round(self) -> f64 {
        libm::round(self)
    }
    fn fract(self) -> f64 {
        self - libm::trunc(self)
    }
}

//! Minimal arithmetic interface shared by the polynomial tables, so the same
//! coefficients can be evaluated in double, complex, exact rational or
//! double-double Laurent arithmetic.

use crate::series::Rational;
use num_bigint::BigInt;
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

pub trait Scalar: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn from_i64(v: i64) -> Self;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

//! Coefficient domains for [`MPoly`](crate::MPoly).

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::qsqrt3::QSqrt3;
use crate::rational::{int, to_f64, Rational};

/// Relative snap-to-zero threshold applied to float polynomials.
pub const FLOAT_SNAP_EPS: f64 = 1e-12;

pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Exact domains never drop coefficients.
    const EXACT: bool;
    /// Name used in the JSON `domain` field.
    const DOMAIN: &'static str;

    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Coeff for Rational {
    const EXACT: bool = true;
    const DOMAIN: &'static str = "rational";

    fn from_i64(n: i64) -> Self {
        int(n)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
}

impl Coeff for QSqrt3 {
    const EXACT: bool = true;
    const DOMAIN: &'static str = "qsqrt3";

    fn from_i64(n: i64) -> Self {
        QSqrt3::rational(int(n))
    }
    fn from_rational(r: &Rational) -> Self {
        QSqrt3::rational(r.clone())
    }
    fn to_f64(&self) -> f64 {
        QSqrt3::to_f64(self)
    }
}

impl Coeff for f64 {
    const EXACT: bool = false;
    const DOMAIN: &'static str = "float";

    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

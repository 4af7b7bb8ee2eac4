//! Angles that stay exact when they are rational multiples of π.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use deltoid_algebra::{int, rat, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::CoreError;

const CLASS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    /// `r·π`
    PiMultiple(Rational),
    Radians(f64),
}

/// Which of the three parameter classes an angle belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AngleClass {
    /// `kπ/3`
    Sigma,
    /// `(2k+1)π/6`
    Simplicial,
    /// everything else
    Generic,
}

impl Angle {
    pub fn pi_frac(num: i64, den: i64) -> Self {
        Angle::PiMultiple(rat(num, den))
    }

    pub fn zero() -> Self {
        Angle::PiMultiple(int(0))
    }

    pub fn radians(&self) -> f64 {
        match self {
            Angle::PiMultiple(r) => deltoid_algebra::Coeff::to_f64(r) * PI,
            Angle::Radians(x) => *x,
        }
    }

    pub fn pi_multiple(&self) -> Option<&Rational> {
        match self {
            Angle::PiMultiple(r) => Some(r),
            Angle::Radians(_) => None,
        }
    }

    pub fn shifted(&self, by: &Angle) -> Angle {
        match (self, by) {
            (Angle::PiMultiple(a), Angle::PiMultiple(b)) => Angle::PiMultiple(a + b),
            _ => Angle::Radians(self.radians() + by.radians()),
        }
    }

    /// `6μ/π` as an integer when the angle is (numerically) a multiple of π/6.
    pub fn sixths(&self) -> Option<i64> {
        match self {
            Angle::PiMultiple(r) => {
                let s = r * int(6);
                s.is_integer().then(|| s.to_integer().to_i64()).flatten()
            }
            Angle::Radians(x) => {
                let s = x * 6.0 / PI;
                ((s - s.round()).abs() < CLASS_TOL).then_some(s.round() as i64)
            }
        }
    }

    pub fn class(&self) -> AngleClass {
        match self.sixths() {
            Some(k) if k.rem_euclid(2) == 0 => AngleClass::Sigma,
            Some(_) => AngleClass::Simplicial,
            None => AngleClass::Generic,
        }
    }

    pub fn in_lambda_sigma(&self) -> bool {
        self.class() == AngleClass::Sigma
    }

    pub fn in_lambda_s(&self) -> bool {
        self.class() == AngleClass::Simplicial
    }

    pub fn in_lambda3(&self) -> bool {
        self.class() == AngleClass::Generic
    }

    pub fn cos(&self) -> f64 {
        match self {
            Angle::PiMultiple(r) => cos_pi(r),
            Angle::Radians(x) => x.cos(),
        }
    }

    pub fn sin(&self) -> f64 {
        match self {
            Angle::PiMultiple(r) => sin_pi(r),
            Angle::Radians(x) => x.sin(),
        }
    }
}

/// Reduces `r` into `[-1, 1)` modulo 2 exactly.
fn reduce_mod2(r: &Rational) -> Rational {
    let two = BigInt::from(2);
    let period = r.denom() * &two;
    let n = r.numer().mod_floor(&period);
    let mut red = Rational::new(n, r.denom().clone());
    if red >= int(1) {
        red -= int(2);
    }
    red
}

/// `cos(rπ)` with exact argument reduction.
pub fn cos_pi(r: &Rational) -> f64 {
    let red = reduce_mod2(r);
    match small_sixths(&red) {
        Some(k) => SIXTH_COS[k.rem_euclid(12) as usize],
        None => (deltoid_algebra::Coeff::to_f64(&red) * PI).cos(),
    }
}

/// `sin(rπ)` with exact argument reduction.
pub fn sin_pi(r: &Rational) -> f64 {
    let red = reduce_mod2(r);
    match small_sixths(&red) {
        Some(k) => SIXTH_SIN[k.rem_euclid(12) as usize],
        None => (deltoid_algebra::Coeff::to_f64(&red) * PI).sin(),
    }
}

fn small_sixths(r: &Rational) -> Option<i64> {
    let s = r * int(6);
    s.is_integer().then(|| s.to_integer().to_i64()).flatten()
}

const H: f64 = 0.866_025_403_784_438_6;
// cos(kπ/6), sin(kπ/6) for k = 0..12, exact zeros where they belong
const SIXTH_COS: [f64; 12] = [1.0, H, 0.5, 0.0, -0.5, -H, -1.0, -H, -0.5, 0.0, 0.5, H];
const SIXTH_SIN: [f64; 12] = [0.0, 0.5, H, 1.0, H, 0.5, 0.0, -0.5, -H, -1.0, -H, -0.5];

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::PiMultiple(r) if r.is_zero() => write!(f, "0"),
            Angle::PiMultiple(r) => {
                let n = r.numer();
                let sign = if n.is_negative() { "-" } else { "" };
                let n = n.abs();
                let num = if n == BigInt::from(1) { String::new() } else { n.to_string() };
                if r.denom() == &BigInt::from(1) {
                    write!(f, "{sign}{num}pi")
                } else {
                    write!(f, "{sign}{num}pi/{}", r.denom())
                }
            }
            Angle::Radians(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Angle {
    type Err = CoreError;

    /// Accepts `<int>pi/<int>`, `pi/<int>`, `<int>pi`, `pi` (optionally
    /// signed) or decimal radians.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoreError::BadAngle(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(pos) = t.find("pi") {
            let head = t[..pos].trim_end_matches('*');
            let tail = &t[pos + 2..];
            let num: i64 = match head {
                "" | "+" => 1,
                "-" => -1,
                h => h.parse().map_err(|_| bad())?,
            };
            let den: i64 = match tail {
                "" => 1,
                t => t.strip_prefix('/').ok_or_else(bad)?.parse().map_err(|_| bad())?,
            };
            if den == 0 {
                return Err(bad());
            }
            return Ok(Angle::PiMultiple(rat(num, den)));
        }
        let x: f64 = t.parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(bad());
        }
        if x == 0.0 {
            return Ok(Angle::zero());
        }
        Ok(Angle::Radians(x))
    }
}

//! Scalar abstractions shared by the cochain and linear-algebra layers.
//!
//! Everything above this module is written against [`Ring`] or [`Field`];
//! the concrete instantiations are `BigInt` (integral cochains),
//! `BigRational` (exact rational cochains) and `f64` (the iterative Hodge
//! solver).

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Commutative ring with the conversions the crate needs.
pub trait Ring:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    /// Embeds an integer.
    fn from_bigint(n: &BigInt) -> Self;

    /// Lossy conversion for diagnostics and norms.
    fn to_f64_lossy(&self) -> f64;

    fn from_sign(sign: i64) -> Self {
        Self::from_i64(sign).expect("small integer embeds in every ring")
    }
}

/// A field. Exact fields get direct elimination, inexact ones tolerance-based
/// pivoting and the conjugate-gradient path.
pub trait Field: Ring {
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;

    /// Exact rational value (floats convert bit-exactly).
    fn to_rational(&self) -> BigRational;

    fn floor(&self) -> Self;

    /// Absolute value as a float, used for pivot selection and residuals.
    fn magnitude(&self) -> f64 {
        self.to_f64_lossy().abs()
    }

    /// Zero test that honours a tolerance for inexact fields.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }
}

impl Ring for BigInt {
    fn from_bigint(n: &BigInt) -> Self {
        n.clone()
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Ring for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Field for BigRational {
    const EXACT: bool = true;
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn floor(&self) -> Self {
        BigRational::floor(self)
    }
}

impl Ring for f64 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Field for f64 {
    const EXACT: bool = false;
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
}

impl Ring for i64 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_i64().expect("integer out of i64 range")
    }
    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parses `"p/q"`, `"p"` or a plain integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Representative of `q mod 1` in `[0, 1)`.
pub fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

/// Representative of `q mod 1` in `(-1/2, 1/2]`.
pub fn reduce_half_open(q: &BigRational) -> BigRational {
    let half = rat(1, 2);
    let f = frac(q);
    if f > half {
        f - BigRational::one()
    } else {
        f
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents).
pub fn rationalize(x: f64, max_den: i64) -> BigRational {
    if !x.is_finite() {
        return BigRational::zero();
    }
    let negative = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let rem = v - a;
        if rem < 1e-15 {
            break;
        }
        v = 1.0 / rem;
    }
    let r = BigRational::new(BigInt::from(p1), BigInt::from(q1.max(1)));
    if negative {
        -r
    } else {
        r
    }
}

pub fn is_integral(q: &BigRational) -> bool {
    q.is_integer()
}

/// Non-negative gcd of two integers.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b).abs()
}

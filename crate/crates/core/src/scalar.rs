//! Scalar backends: `f64` for sampling and `Rational` for exact work.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Real scalar field used by every generic routine in the crate.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True for backends with exact arithmetic.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_frac(num: i64, den: i64) -> Self;
    /// Exact conversion for `Rational` (every finite double is dyadic).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn to_rational(&self) -> Rational;
    fn from_rational(v: &Rational) -> Self;

    /// `|self| <= tol` for floats, `self == 0` for exact backends.
    fn is_negligible(&self, tol: f64) -> bool;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> Rational {
        BigRational::from_float(*self).expect("finite float")
    }
    fn from_rational(v: &Rational) -> Self {
        rational_to_f64(v)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => parse_rational(s).map(|r| rational_to_f64(&r)),
            _ => None,
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_frac(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(Self::from_i64(i))
                } else {
                    n.as_f64().and_then(BigRational::from_float)
                }
            }
            _ => None,
        }
    }
}

/// Fixed-width exact rational for hot loops on small inputs; overflow panics.
pub type SmallRational = num_rational::Ratio<i128>;

impl Scalar for SmallRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        SmallRational::from_integer(v as i128)
    }
    fn from_frac(num: i64, den: i64) -> Self {
        SmallRational::new(num as i128, den as i128)
    }
    fn from_f64(v: f64) -> Self {
        Self::from_rational(&Rational::from_f64(v))
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn to_rational(&self) -> Rational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn from_rational(v: &Rational) -> Self {
        let n = v.numer().to_i128().expect("numerator fits in i128");
        let d = v.denom().to_i128().expect("denominator fits in i128");
        SmallRational::new(n, d)
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn to_json(&self) -> Value {
        self.to_rational().to_json()
    }
    fn from_json(v: &Value) -> Option<Self> {
        let r = Rational::from_json(v)?;
        Some(SmallRational::new(r.numer().to_i128()?, r.denom().to_i128()?))
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // shift both parts into range first
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = nb.max(db) - 1000;
            let n = if shift > 0 { r.numer() >> (shift as usize) } else { r.numer().clone() };
            let d = if shift > 0 { r.denom() >> (shift as usize) } else { r.denom().clone() };
            n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0)
        }
    }
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else if let Ok(p) = s.parse::<BigInt>() {
        Some(BigRational::from_integer(p))
    } else {
        s.parse::<f64>().ok().and_then(BigRational::from_float)
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_frac(num, den)
}

pub fn int(v: i64) -> Rational {
    Rational::from_i64(v)
}

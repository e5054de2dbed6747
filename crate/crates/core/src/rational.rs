use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator. Used for `tau` and `delta`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        // BigRational::new reduces and normalizes the sign
        Ok(ExactRational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_int(n: i64) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    /// `n / 2`, the slope `d/2` of a semistable rank-2 bundle.
    pub fn half(n: i64) -> Self {
        ExactRational(BigRational::new(n.into(), 2.into()))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_int(n)
    }
}

/// Always `p/q`, including `q = 1`.
impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/q` or a bare integer `p`.
impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("not a rational number: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                ExactRational::new(p, q)
            }
            None => Ok(ExactRational(BigRational::from_integer(s.parse().map_err(|_| bad())?))),
        }
    }
}

impl Add for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl Sub for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 - &rhs.0)
    }
}

impl Add<i64> for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: i64) -> ExactRational {
        ExactRational(&self.0 + BigRational::from_integer(rhs.into()))
    }
}

impl Sub<i64> for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: i64) -> ExactRational {
        ExactRational(&self.0 - BigRational::from_integer(rhs.into()))
    }
}

impl Mul<i64> for &ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: i64) -> ExactRational {
        ExactRational(&self.0 * BigRational::from_integer(rhs.into()))
    }
}

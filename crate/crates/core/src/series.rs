//! Truncated power series in one variable `t` with big-integer coefficients,
//! plus a bivariate layer in `(x, t)` used for coefficient extraction.
//!
//! Binary operations truncate to the smaller of the two orders. Division only
//! ever happens by units of `Z[[t]]` (series with constant term ±1), so every
//! coefficient stays an integer.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A power series `sum c_k t^k` known exactly for `k = 0..=order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<BigInt>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigInt::one(), 0, order)
    }

    /// `c * t^k`, which is zero if `k` exceeds `order`.
    pub fn monomial(c: impl Into<BigInt>, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c.into();
        }
        s
    }

    /// Builds a series from leading coefficients; missing ones are zero and
    /// coefficients beyond `order` are dropped.
    pub fn from_coeffs<T: Into<BigInt> + Clone>(coeffs: &[T], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[k] = c.clone().into();
        }
        s
    }

    pub fn from_bigints(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        TruncSeries { coeffs }
    }

    /// Highest exponent whose coefficient is known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Exponent of the lowest nonzero term, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Index of the highest nonzero coefficient within the known range.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_bigints(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    /// `t^k * self`; terms pushed past the order are dropped.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k > order {
                break;
            }
            out.coeffs[i + k] = c.clone();
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Exact multiplicative inverse; requires the constant term to be ±1.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::domain("series inverse needs constant term +-1"));
        }
        let order = self.order();
        let mut inv = Self::zero(order);
        inv.coeffs[0] = c0.clone();
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &inv.coeffs[n - k];
            }
            // c0 is its own inverse
            inv.coeffs[n] = -(acc * c0);
        }
        Ok(inv)
    }

    /// Value at an integer point, treating the series as a polynomial of
    /// degree `order`.
    pub fn eval(&self, t: i64) -> BigInt {
        let t = BigInt::from(t);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &t + c)
    }

    fn map2(a: &Self, b: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let order = a.order().min(b.order());
        TruncSeries { coeffs: (0..=order).map(|k| f(&a.coeffs[k], &b.coeffs[k])).collect() }
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", self, self.order() + 1)
    }
}

/// Human-readable polynomial form, e.g. `1 + 4t + 6t^2`.
impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}t^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        TruncSeries::map2(self, rhs, |a, b| a + b)
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        TruncSeries::map2(self, rhs, |a, b| a - b)
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        let mut out = TruncSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: TruncSeries) -> TruncSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TruncSeries> for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: &TruncSeries) -> TruncSeries {
                (&self).$m(rhs)
            }
        }
        impl $tr<TruncSeries> for &TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: TruncSeries) -> TruncSeries {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        -&self
    }
}

impl std::iter::Sum for TruncSeries {
    /// Panics on an empty iterator, since the order would be unknown.
    fn sum<I: Iterator<Item = TruncSeries>>(mut iter: I) -> TruncSeries {
        let first = iter.next().expect("sum of an empty series iterator");
        iter.fold(first, |acc, s| acc + s)
    }
}

/// `(1 + sign * t^t_power)^exponent` to the given order.
pub fn binomial_power(sign: i8, exponent: u32, t_power: usize, order: usize) -> TruncSeries {
    assert!(sign == 1 || sign == -1, "sign must be +-1");
    assert!(t_power > 0, "t_power must be positive");
    let mut out = TruncSeries::zero(order);
    let mut binom = BigInt::one();
    for k in 0..=exponent as usize {
        let deg = k * t_power;
        if deg > order {
            break;
        }
        let c = if sign < 0 && k % 2 == 1 { -binom.clone() } else { binom.clone() };
        out.coeffs[deg] = c;
        binom = binom * BigInt::from(exponent as usize - k) / BigInt::from(k + 1);
    }
    out
}

/// Expansion of `1 / (1 - t^k)^power`.
///
/// The coefficient of `t^{k m}` is `C(m + power - 1, power - 1)`.
pub fn geometric_factor(k: usize, power: u32, order: usize) -> TruncSeries {
    assert!(k > 0, "k must be positive");
    let mut out = TruncSeries::zero(order);
    let p = power as usize;
    let mut c = BigInt::one();
    let mut m = 0usize;
    while m * k <= order {
        out.coeffs[m * k] = c.clone();
        if p == 0 {
            break;
        }
        // C(m+p, p-1) = C(m+p-1, p-1) * (m+p) / (m+1)
        c = c * BigInt::from(m + p) / BigInt::from(m + 1);
        m += 1;
    }
    out
}

/// Returns the coefficient list `0..=max_degree` if the series vanishes in
/// every degree above `max_degree`. Needs at least one degree of buffer.
pub fn assert_polynomial(s: &TruncSeries, max_degree: usize) -> Result<Vec<BigInt>> {
    if s.order() <= max_degree {
        return Err(Error::InsufficientBuffer { trunc_order: s.order(), max_degree });
    }
    if let Some(degree) = (max_degree + 1..=s.order()).find(|&k| !s.coeffs[k].is_zero()) {
        return Err(Error::NotPolynomial { degree, max_degree });
    }
    Ok(s.coeffs[..=max_degree].to_vec())
}

/// Synthetic division of a polynomial by `1 + t`; `None` if it leaves a remainder.
pub fn divide_by_one_plus_t(poly: &[BigInt]) -> Option<Vec<BigInt>> {
    if poly.is_empty() {
        return Some(Vec::new());
    }
    let n = poly.len() - 1;
    // p(t) = (1 + t) q(t), q of degree n-1
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for k in 0..n {
        q[k] = &poly[k] - &carry;
        carry = q[k].clone();
    }
    if poly[n] == carry {
        Some(q)
    } else {
        None
    }
}

/// A series in `x` whose coefficients are truncated series in `t`, all with
/// the same `t`-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiTruncSeries {
    x_coeffs: Vec<TruncSeries>,
}

impl BiTruncSeries {
    pub fn zero(x_order: usize, t_order: usize) -> Self {
        BiTruncSeries { x_coeffs: vec![TruncSeries::zero(t_order); x_order + 1] }
    }

    /// Builds `sum_n f(n) x^n`; every `f(n)` is truncated to `t_order`.
    pub fn from_fn(x_order: usize, t_order: usize, mut f: impl FnMut(usize) -> TruncSeries) -> Self {
        let x_coeffs = (0..=x_order)
            .map(|n| {
                let s = f(n);
                if s.order() >= t_order {
                    s.truncate(t_order)
                } else {
                    TruncSeries::from_bigints(s.coeffs, t_order)
                }
            })
            .collect();
        BiTruncSeries { x_coeffs }
    }

    pub fn x_order(&self) -> usize {
        self.x_coeffs.len() - 1
    }

    pub fn t_order(&self) -> usize {
        self.x_coeffs[0].order()
    }

    /// `Coeff_{x^n}`.
    pub fn coeff_x(&self, n: usize) -> Result<TruncSeries> {
        self.x_coeffs
            .get(n)
            .cloned()
            .ok_or(Error::OutOfRange { requested: n, available: self.x_order() })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let x_order = self.x_order().min(rhs.x_order());
        BiTruncSeries { x_coeffs: (0..=x_order).map(|n| &self.x_coeffs[n] + &rhs.x_coeffs[n]).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let x_order = self.x_order().min(rhs.x_order());
        let t_order = self.t_order().min(rhs.t_order());
        let mut out = Self::zero(x_order, t_order);
        for i in 0..=x_order {
            if self.x_coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=x_order - i {
                let prod = &self.x_coeffs[i] * &rhs.x_coeffs[j];
                out.x_coeffs[i + j] = &out.x_coeffs[i + j] + &prod;
            }
        }
        out
    }

    /// Multiplies every x-coefficient by the same `t`-series.
    pub fn scale_t(&self, s: &TruncSeries) -> Self {
        BiTruncSeries { x_coeffs: self.x_coeffs.iter().map(|c| c * s).collect() }
    }
}

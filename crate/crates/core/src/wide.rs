//! Non-negative reals with an unbounded binary exponent.
//!
//! Hole radii and contents decay like `4^{-n}`, and the series weights grow
//! like `4^n`; for `n` in the thousands both leave the `f64` range. A
//! [`WideReal`] keeps an `f64` mantissa in `[0.5, 1)` together with an `i64`
//! exponent so that products, quotients and real powers stay exact up to
//! mantissa rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

#[derive(Clone, Copy, PartialEq)]
pub struct WideReal {
    mant: f64,
    exp2: i64,
}

/// Splits a finite positive `x` into `(m, e)` with `x = m * 2^e`, `m ∈ [0.5, 1)`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let mant_bits = (bits & !(0x7ffu64 << 52)) | (1022u64 << 52);
    (f64::from_bits(mant_bits), raw_exp - 1022)
}

fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    if e > 1100 {
        return f64::INFINITY;
    }
    if e < -1200 {
        return 0.0;
    }
    let e = e as i32;
    let half = e / 2;
    m * 2f64.powi(half) * 2f64.powi(e - half)
}

impl WideReal {
    pub const ZERO: WideReal = WideReal { mant: 0.0, exp2: 0 };
    pub const ONE: WideReal = WideReal { mant: 0.5, exp2: 1 };

    /// `x` must be finite and non-negative.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite() && x >= 0.0, "WideReal requires a finite non-negative value, got {x}");
        if x == 0.0 {
            return Self::ZERO;
        }
        let (mant, exp2) = frexp(x);
        WideReal { mant, exp2 }
    }

    /// `m * 2^e`.
    pub fn from_parts(m: f64, e: i64) -> Self {
        let w = Self::from_f64(m);
        if w.is_zero() {
            return w;
        }
        WideReal { mant: w.mant, exp2: w.exp2 + e }
    }

    pub fn pow2(e: i64) -> Self {
        WideReal { mant: 0.5, exp2: e + 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    pub fn mantissa(&self) -> f64 {
        self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp2
    }

    /// Nearest `f64`; underflows to 0 and overflows to infinity.
    pub fn to_f64(&self) -> f64 {
        ldexp(self.mant, self.exp2)
    }

    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mant.ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::ONE / *self
    }

    pub fn powf(&self, gamma: f64) -> Self {
        if self.is_zero() {
            return if gamma == 0.0 { Self::ONE } else { Self::ZERO };
        }
        let scaled = gamma * self.exp2 as f64;
        let whole = scaled.floor();
        let frac = scaled - whole;
        let m = self.mant.powf(gamma) * frac.exp2();
        Self::from_parts(m, whole as i64)
    }

    pub fn powi(&self, k: i32) -> Self {
        if self.is_zero() {
            return if k == 0 { Self::ONE } else { Self::ZERO };
        }
        Self::from_parts(self.mant.powi(k), self.exp2 * k as i64)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Mul for WideReal {
    type Output = WideReal;
    fn mul(self, rhs: WideReal) -> WideReal {
        if self.is_zero() || rhs.is_zero() {
            return WideReal::ZERO;
        }
        WideReal::from_parts(self.mant * rhs.mant, self.exp2 + rhs.exp2)
    }
}

impl Div for WideReal {
    type Output = WideReal;
    fn div(self, rhs: WideReal) -> WideReal {
        assert!(!rhs.is_zero(), "division by zero WideReal");
        if self.is_zero() {
            return WideReal::ZERO;
        }
        WideReal::from_parts(self.mant / rhs.mant, self.exp2 - rhs.exp2)
    }
}

impl Add for WideReal {
    type Output = WideReal;
    fn add(self, rhs: WideReal) -> WideReal {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp2 >= rhs.exp2 { (self, rhs) } else { (rhs, self) };
        let shift = small.exp2 - big.exp2;
        if shift < -60 {
            return big;
        }
        WideReal::from_parts(big.mant + ldexp(small.mant, shift), big.exp2)
    }
}

impl Mul<f64> for WideReal {
    type Output = WideReal;
    fn mul(self, rhs: f64) -> WideReal {
        self * WideReal::from_f64(rhs)
    }
}

impl Div<f64> for WideReal {
    type Output = WideReal;
    fn div(self, rhs: f64) -> WideReal {
        self / WideReal::from_f64(rhs)
    }
}

impl std::iter::Sum for WideReal {
    fn sum<I: Iterator<Item = WideReal>>(iter: I) -> Self {
        iter.fold(WideReal::ZERO, |acc, x| acc + x)
    }
}

impl PartialOrd for WideReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => match self.exp2.cmp(&other.exp2) {
                Ordering::Equal => self.mant.partial_cmp(&other.mant),
                ord => Some(ord),
            },
        }
    }
}

impl From<f64> for WideReal {
    fn from(x: f64) -> Self {
        WideReal::from_f64(x)
    }
}

impl fmt::Debug for WideReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for WideReal {
    /// Scientific notation that survives exponents beyond the f64 range.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let v = self.to_f64();
        if v.is_normal() {
            return write!(f, "{v:e}");
        }
        let log10 = self.ln() / std::f64::consts::LN_10;
        let e10 = log10.floor();
        write!(f, "{}e{}", 10f64.powf(log10 - e10), e10 as i64)
    }
}

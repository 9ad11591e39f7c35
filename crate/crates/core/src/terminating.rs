//! Terminating decimals.
//!
//! A terminating decimal is stored as a signed integer together with the
//! number of digits after the decimal point. Padding with trailing zeros
//! does not change the value, so every value has exactly one normal form:
//! the scale is as small as possible and zero always has scale 0.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// `10^exp` as an unsigned big integer.
pub(crate) fn pow10(exp: usize) -> BigUint {
    BigUint::from(10u32).pow(exp)
}

pub(crate) fn pow10_signed(exp: usize) -> BigInt {
    BigInt::from(pow10(exp))
}

/// An exact decimal `mantissa * 10^(-scale)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TerminatingDecimal {
    value: BigInt,
    scale: usize,
}

impl TerminatingDecimal {
    pub fn zero() -> Self {
        TerminatingDecimal {
            value: BigInt::zero(),
            scale: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_integer(BigInt::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        TerminatingDecimal {
            value: n.into(),
            scale: 0,
        }
    }

    /// The value `unscaled * 10^(-scale)`, normalized.
    pub fn from_scaled(unscaled: impl Into<BigInt>, scale: usize) -> Self {
        let mut t = TerminatingDecimal {
            value: unscaled.into(),
            scale,
        };
        t.normalize();
        t
    }

    /// `10^(-exp)`.
    pub fn unit(exp: usize) -> Self {
        Self::from_scaled(BigInt::one(), exp)
    }

    fn normalize(&mut self) {
        if self.value.is_zero() {
            self.scale = 0;
            return;
        }
        let ten = BigInt::from(10);
        while self.scale > 0 {
            let (q, r) = self.value.div_rem(&ten);
            if !r.is_zero() {
                break;
            }
            self.value = q;
            self.scale -= 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.scale == 0
    }

    /// `Sign::Minus`, `Sign::NoSign` for zero, `Sign::Plus` otherwise.
    pub fn sign(&self) -> Sign {
        self.value.sign()
    }

    /// The digit string with the decimal point removed.
    pub fn mantissa(&self) -> BigUint {
        self.value.magnitude().clone()
    }

    /// Number of fractional digits in the normal form.
    pub fn scale(&self) -> usize {
        self.scale
    }

    /// The signed mantissa, i.e. the value times `10^scale`.
    pub fn unscaled(&self) -> &BigInt {
        &self.value
    }

    /// The signed integer obtained by padding to `scale` fractional digits
    /// and removing the point. `scale` must be at least `self.scale()`.
    pub fn rescaled(&self, scale: usize) -> BigInt {
        assert!(scale >= self.scale, "rescale would drop digits");
        &self.value * pow10_signed(scale - self.scale)
    }

    pub fn abs(&self) -> Self {
        TerminatingDecimal {
            value: self.value.abs(),
            scale: self.scale,
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.value.div_floor(&pow10_signed(self.scale))
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        self.value.div_ceil(&pow10_signed(self.scale))
    }

    /// `floor(self * 10^n)`.
    pub fn floor_scaled(&self, n: usize) -> BigInt {
        if n >= self.scale {
            &self.value * pow10_signed(n - self.scale)
        } else {
            self.value.div_floor(&pow10_signed(self.scale - n))
        }
    }

    /// Digits of `|self|` after the point, padded with zeros to `n` places
    /// and cut at `n`.
    pub fn fractional_digits(&self, n: usize) -> Vec<u8> {
        let frac = self.value.magnitude() % pow10(self.scale);
        let s = if self.scale == 0 {
            String::new()
        } else {
            format!("{:0>width$}", frac.to_str_radix(10), width = self.scale)
        };
        let mut digits: Vec<u8> = s.bytes().map(|b| b - b'0').collect();
        digits.resize(n.max(digits.len()), 0);
        digits.truncate(n);
        digits
    }

    /// Largest multiple of `10^(-n)` not exceeding the value.
    pub fn floor_to(&self, n: usize) -> Self {
        if self.scale <= n {
            return self.clone();
        }
        let q = self.value.div_floor(&pow10_signed(self.scale - n));
        Self::from_scaled(q, n)
    }

    /// Smallest multiple of `10^(-n)` not below the value.
    pub fn ceil_to(&self, n: usize) -> Self {
        if self.scale <= n {
            return self.clone();
        }
        let q = self.value.div_ceil(&pow10_signed(self.scale - n));
        Self::from_scaled(q, n)
    }

    /// Cut to `n` fractional digits towards zero.
    pub fn truncate_to(&self, n: usize) -> Self {
        if self.is_negative() {
            self.ceil_to(n)
        } else {
            self.floor_to(n)
        }
    }
}

/// Order of two terminating decimals: pad to a common number of fractional
/// digits, drop the points and compare the integers.
pub fn compare(a: &TerminatingDecimal, b: &TerminatingDecimal) -> Ordering {
    let m = a.scale.max(b.scale);
    a.rescaled(m).cmp(&b.rescaled(m))
}

pub fn add(a: &TerminatingDecimal, b: &TerminatingDecimal) -> TerminatingDecimal {
    let m = a.scale.max(b.scale);
    TerminatingDecimal::from_scaled(a.rescaled(m) + b.rescaled(m), m)
}

/// Both operands are padded to `m` fractional digits; the integer product
/// then carries `2m` fractional digits.
pub fn mul(a: &TerminatingDecimal, b: &TerminatingDecimal) -> TerminatingDecimal {
    let m = a.scale.max(b.scale);
    TerminatingDecimal::from_scaled(a.rescaled(m) * b.rescaled(m), 2 * m)
}

pub fn neg(a: &TerminatingDecimal) -> TerminatingDecimal {
    TerminatingDecimal {
        value: -&a.value,
        scale: a.scale,
    }
}

/// Parse `-? digits ('.' digits)?`. A multi-digit integer part may not start
/// with `0`; trailing fractional zeros are accepted and normalized away.
pub fn parse_terminating(text: &str) -> Result<TerminatingDecimal> {
    let malformed = |reason| Error::MalformedLiteral {
        literal: text.to_string(),
        reason,
    };
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => {
            if f.is_empty() {
                return Err(malformed("no digits after the decimal point"));
            }
            (i, f)
        }
        None => (body, ""),
    };
    if int_part.is_empty() {
        return Err(malformed("no digits before the decimal point"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed("unexpected character"));
    }
    if int_part.len() > 1 && int_part.starts_with('0') {
        return Err(malformed("leading zero in the integer part"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value: BigInt = digits.parse().expect("validated digit string");
    if negative {
        value = -value;
    }
    Ok(TerminatingDecimal::from_scaled(value, frac_part.len()))
}

impl FromStr for TerminatingDecimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_terminating(s)
    }
}

impl fmt::Display for TerminatingDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negative() {
            f.write_str("-")?;
        }
        let mag = self.value.magnitude();
        if self.scale == 0 {
            return write!(f, "{mag}");
        }
        let unit = pow10(self.scale);
        let (int, frac) = mag.div_rem(&unit);
        write!(f, "{int}.{:0>width$}", frac.to_str_radix(10), width = self.scale)
    }
}

impl fmt::Debug for TerminatingDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({self})")
    }
}

impl PartialOrd for TerminatingDecimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TerminatingDecimal {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl Add for &TerminatingDecimal {
    type Output = TerminatingDecimal;
    fn add(self, rhs: Self) -> TerminatingDecimal {
        add(self, rhs)
    }
}

impl Add for TerminatingDecimal {
    type Output = TerminatingDecimal;
    fn add(self, rhs: Self) -> TerminatingDecimal {
        add(&self, &rhs)
    }
}

impl Sub for &TerminatingDecimal {
    type Output = TerminatingDecimal;
    fn sub(self, rhs: Self) -> TerminatingDecimal {
        add(self, &neg(rhs))
    }
}

impl Sub for TerminatingDecimal {
    type Output = TerminatingDecimal;
    fn sub(self, rhs: Self) -> TerminatingDecimal {
        &self - &rhs
    }
}

impl Mul for &TerminatingDecimal {
    type Output = TerminatingDecimal;
    fn mul(self, rhs: Self) -> TerminatingDecimal {
        mul(self, rhs)
    }
}

impl Mul for TerminatingDecimal {
    type Output = TerminatingDecimal;
    fn mul(self, rhs: Self) -> TerminatingDecimal {
        mul(&self, &rhs)
    }
}

impl Neg for &TerminatingDecimal {
    type Output = TerminatingDecimal;
    fn neg(self) -> TerminatingDecimal {
        neg(self)
    }
}

impl Neg for TerminatingDecimal {
    type Output = TerminatingDecimal;
    fn neg(self) -> TerminatingDecimal {
        neg(&self)
    }
}

impl From<i64> for TerminatingDecimal {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

//! Field operations on canonical reals.
//!
//! Exact inputs (terminating or periodic) go through fraction arithmetic
//! and come back in canonical form. Anything involving an oracle becomes a
//! computed oracle whose enclosures are built from enclosures of the
//! operands.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::rationals::{self, Rational};
use crate::realnum::{classify, Approximant, DigitOracle, RealNumber, SignClass, DEFAULT_BUDGET};
use crate::terminating::{pow10, pow10_signed, TerminatingDecimal};

/// Digits examined when choosing a sign case for products of oracles.
const SIGN_PROBE: usize = 64;

/// A closed interval `[lo, hi]` with terminating endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: TerminatingDecimal,
    hi: TerminatingDecimal,
}

impl Enclosure {
    pub fn new(lo: TerminatingDecimal, hi: TerminatingDecimal) -> Self {
        assert!(lo <= hi, "enclosure bounds out of order: [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(t: TerminatingDecimal) -> Self {
        Enclosure { lo: t.clone(), hi: t }
    }

    pub fn lo(&self) -> &TerminatingDecimal {
        &self.lo
    }

    pub fn hi(&self) -> &TerminatingDecimal {
        &self.hi
    }

    pub fn into_bounds(self) -> (TerminatingDecimal, TerminatingDecimal) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> TerminatingDecimal {
        &self.hi - &self.lo
    }

    pub fn contains(&self, t: &TerminatingDecimal) -> bool {
        &self.lo <= t && t <= &self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        Rational::from(&self.lo) <= *q && *q <= Rational::from(&self.hi)
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    /// Largest absolute value in the interval.
    fn magnitude(&self) -> TerminatingDecimal {
        self.lo.abs().max(self.hi.abs())
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Enclosure{self}")
    }
}

/// An enclosure of `x` of width at most `10^(-n)`.
///
/// Terminating values give the degenerate interval. Periodic values give
/// `[t, t + 10^(-n)]` where `t` is the `n`-digit truncation (mirrored for
/// negative values).
pub fn eval(x: &RealNumber, n: usize) -> Enclosure {
    match x {
        RealNumber::Terminating(t) => Enclosure::point(t.clone()),
        RealNumber::Periodic(_) => {
            let b = x.bracket(n);
            Enclosure::new(b.lo, b.hi)
        }
        RealNumber::Oracle(o) => o.enclosure(n),
    }
}

fn both_exact(x: &RealNumber, y: &RealNumber) -> Option<(Rational, Rational)> {
    Some((x.as_rational()?, y.as_rational()?))
}

/// `x + y`.
pub fn add(x: &RealNumber, y: &RealNumber) -> RealNumber {
    if let Some((a, b)) = both_exact(x, y) {
        return rationals::to_decimal(&(a + b));
    }
    if x.is_exact_zero() {
        return y.clone();
    }
    if y.is_exact_zero() {
        return x.clone();
    }
    lazy_add(x, y)
}

/// `x + y` as a computed oracle, even for exact operands.
pub fn lazy_add(x: &RealNumber, y: &RealNumber) -> RealNumber {
    DigitOracle::computed(Sum(x.clone(), y.clone())).into()
}

/// `x - y`.
pub fn sub(x: &RealNumber, y: &RealNumber) -> RealNumber {
    add(x, &neg(y))
}

/// `-x`. Streams flip their sign and keep their digits.
pub fn neg(x: &RealNumber) -> RealNumber {
    match x {
        RealNumber::Oracle(o) => match o.negated_stream() {
            Some(s) => s.into(),
            None => DigitOracle::computed(Negation(x.clone())).into(),
        },
        _ => {
            let q = x.as_rational().expect("exact value");
            rationals::to_decimal(&-q)
        }
    }
}

/// `x * y`.
///
/// With an oracle operand whose sign is known, negative factors are moved
/// out front so that the interval product only sees non-negative factors;
/// otherwise the general interval product is used.
pub fn mul(x: &RealNumber, y: &RealNumber) -> RealNumber {
    if let Some((a, b)) = both_exact(x, y) {
        return rationals::to_decimal(&(a * b));
    }
    if x.is_exact_zero() || y.is_exact_zero() {
        return RealNumber::zero();
    }
    let sx = classify(x, SIGN_PROBE).ok();
    let sy = classify(y, SIGN_PROBE).ok();
    match (sx, sy) {
        (Some(SignClass::Zero), _) | (_, Some(SignClass::Zero)) => RealNumber::zero(),
        (Some(SignClass::Negative), Some(SignClass::Negative)) => lazy_mul(&neg(x), &neg(y)),
        (Some(SignClass::Negative), Some(SignClass::Positive)) => neg(&lazy_mul(&neg(x), y)),
        (Some(SignClass::Positive), Some(SignClass::Negative)) => neg(&lazy_mul(x, &neg(y))),
        _ => lazy_mul(x, y),
    }
}

/// `x * y` as a computed oracle, even for exact operands.
pub fn lazy_mul(x: &RealNumber, y: &RealNumber) -> RealNumber {
    DigitOracle::computed(Product(x.clone(), y.clone())).into()
}

/// `1 / x`.
pub fn reciprocal(x: &RealNumber) -> Result<RealNumber> {
    if let Some(q) = x.as_rational() {
        return Ok(rationals::to_decimal(&q.recip()?));
    }
    match classify(x, DEFAULT_BUDGET)? {
        SignClass::Zero => Err(Error::DivisionByZero),
        SignClass::Positive => Ok(DigitOracle::computed(Reciprocal::new(x.clone())).into()),
        SignClass::Negative => {
            let r: RealNumber = DigitOracle::computed(Reciprocal::new(neg(x))).into();
            Ok(neg(&r))
        }
    }
}

/// `x / y`.
pub fn div(x: &RealNumber, y: &RealNumber) -> Result<RealNumber> {
    Ok(mul(x, &reciprocal(y)?))
}

/// The non-negative `s` with `s * s = r`.
pub fn sqrt(r: &RealNumber) -> Result<RealNumber> {
    if let Some(q) = r.as_rational() {
        if q.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if let Some(s) = q.exact_sqrt() {
            return Ok(rationals::to_decimal(&s));
        }
        return Ok(DigitOracle::computed(SquareRoot(r.clone())).into());
    }
    match classify(r, DEFAULT_BUDGET)? {
        SignClass::Negative => Err(Error::NegativeRadicand),
        SignClass::Zero => Ok(RealNumber::zero()),
        SignClass::Positive => Ok(DigitOracle::computed(SquareRoot(r.clone())).into()),
    }
}

/// A positive integer `n` with `n * x > y`, for `x > 0`.
///
/// Exact inputs give the least such `n`. Otherwise enclosures of growing
/// precision are tried and the least `n = floor(hi(y) / lo(x)) + 1` seen
/// over the schedule is returned.
pub fn archimedean_witness(x: &RealNumber, y: &RealNumber) -> Result<BigUint> {
    if let Some((a, b)) = both_exact(x, y) {
        if !a.is_positive() {
            return Err(Error::SignUndecided { budget: 0 });
        }
        return Ok(witness_from(&a, &b));
    }
    if classify(x, DEFAULT_BUDGET)? != SignClass::Positive {
        return Err(Error::SignUndecided { budget: DEFAULT_BUDGET });
    }
    let mut best: Option<BigUint> = None;
    let mut n = 0;
    while n <= DEFAULT_BUDGET {
        let (ex, ey) = (eval(x, n), eval(y, n));
        if ex.lo().is_positive() {
            let w = witness_from(&Rational::from(ex.lo()), &Rational::from(ey.hi()));
            let stalled = best.as_ref() == Some(&w);
            if best.as_ref().is_none_or(|b| w < *b) {
                best = Some(w);
            }
            if stalled {
                break;
            }
        }
        n = if n == 0 { 1 } else { n * 2 };
    }
    best.ok_or(Error::SignUndecided { budget: DEFAULT_BUDGET })
}

/// Least positive `n` with `n * a > b`, for `a > 0`.
fn witness_from(a: &Rational, b: &Rational) -> BigUint {
    let q = (b.clone() * a.recip().expect("positive")).floor() + BigInt::one();
    if q.is_positive() {
        q.magnitude().clone()
    } else {
        BigUint::one()
    }
}

fn rational_floor_to(q: &Rational, n: usize) -> TerminatingDecimal {
    let scaled = q.numerator() * pow10_signed(n);
    TerminatingDecimal::from_scaled(scaled.div_floor(q.denominator()), n)
}

fn rational_ceil_to(q: &Rational, n: usize) -> TerminatingDecimal {
    let scaled = q.numerator() * pow10_signed(n);
    TerminatingDecimal::from_scaled(-((-scaled).div_floor(q.denominator())), n)
}

fn fits(enc: &Enclosure, n: usize) -> bool {
    enc.width() <= TerminatingDecimal::unit(n)
}

struct Sum(RealNumber, RealNumber);

impl Approximant for Sum {
    fn enclose(&self, n: usize) -> Enclosure {
        let (a, b) = (eval(&self.0, n + 1), eval(&self.1, n + 1));
        Enclosure::new(a.lo() + b.lo(), a.hi() + b.hi())
    }
}

struct Negation(RealNumber);

impl Approximant for Negation {
    fn enclose(&self, n: usize) -> Enclosure {
        let (lo, hi) = eval(&self.0, n).into_bounds();
        Enclosure::new(-hi, -lo)
    }
}

struct Product(RealNumber, RealNumber);

/// Decimal digits in the integer part of `t`, at least 1.
fn integer_digits(t: &TerminatingDecimal) -> usize {
    t.ceil().magnitude().to_string().len()
}

fn interval_product(a: &Enclosure, b: &Enclosure) -> Enclosure {
    let corners = [a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()];
    let lo = corners.iter().min().expect("four corners").clone();
    let hi = corners.iter().max().expect("four corners").clone();
    Enclosure::new(lo, hi)
}

impl Approximant for Product {
    /// The product width is at most `wa * |b| + wb * |a|`, so operands are
    /// taken at `n` plus the digits of `|a| + |b|`.
    fn enclose(&self, n: usize) -> Enclosure {
        let bound = &(&eval(&self.0, 0).magnitude() + &eval(&self.1, 0).magnitude()) + &TerminatingDecimal::from(2);
        let mut p = n + integer_digits(&bound) + 1;
        loop {
            let enc = interval_product(&eval(&self.0, p), &eval(&self.1, p));
            if fits(&enc, n) {
                return enc;
            }
            p += p - n;
        }
    }
}

struct Reciprocal {
    x: RealNumber,
    /// Precision at which `x`'s enclosure first excludes 0, and that lower
    /// bound.
    floor: (usize, TerminatingDecimal),
}

impl Reciprocal {
    /// `x` must be provably positive.
    fn new(x: RealNumber) -> Self {
        let mut k = 0;
        loop {
            let e = eval(&x, k);
            if e.lo().is_positive() {
                return Reciprocal {
                    floor: (k, e.lo().clone()),
                    x,
                };
            }
            k = if k == 0 { 1 } else { k * 2 };
        }
    }
}

impl Approximant for Reciprocal {
    /// With `x >= L > 0`, the width of `[1/hi, 1/lo]` is at most
    /// `(hi - lo) / L^2`, so `x` is taken at `n + 1` plus the digits of
    /// `1/L^2`. Endpoints are rounded outward onto the `10^-(n+1)` grid.
    fn enclose(&self, n: usize) -> Enclosure {
        let (k0, bound) = &self.floor;
        let inv_sq = Rational::from(bound).recip().expect("positive bound");
        let inv_sq = inv_sq.clone() * inv_sq;
        let mut p = (n + 2 + integer_digits(&rational_ceil_to(&inv_sq, 0))).max(*k0);
        loop {
            let e = eval(&self.x, p);
            if e.lo().is_positive() {
                let lo = rational_floor_to(&Rational::from(e.hi()).recip().expect("positive"), n + 1);
                let hi = rational_ceil_to(&Rational::from(e.lo()).recip().expect("positive"), n + 1);
                let enc = Enclosure::new(lo, hi);
                if fits(&enc, n) {
                    return enc;
                }
            }
            p += p - n;
        }
    }
}

struct SquareRoot(RealNumber);

impl Approximant for SquareRoot {
    /// Both square roots are bracketed on the `10^-(n+1)` grid. The spread
    /// `sqrt(hi) - sqrt(lo)` is at most `sqrt(hi - lo)`, and at most
    /// `(hi - lo) / (2 sqrt(lo))` once `lo > 0`. So the radicand is taken at
    /// `2n + 2` digits near zero, and at `n + 1 + j` digits when it is at
    /// least `10^(-2j)`.
    fn enclose(&self, n: usize) -> Enclosure {
        let k = n + 1;
        let rough = eval(&self.0, k);
        let digits = (0..k)
            .find(|&j| *rough.lo() >= TerminatingDecimal::unit(2 * j))
            .map_or(2 * k, |j| k + j);
        let r = eval(&self.0, digits);
        let zero = TerminatingDecimal::zero();
        let lo_r = r.lo().max(&zero);
        let hi_r = r.hi().max(&zero);
        let low = grid_isqrt(&lo_r.floor_scaled(2 * k), k, Rounding::Down);
        let high = grid_isqrt(&(-(-hi_r).floor_scaled(2 * k)), k, Rounding::Up);
        let (lo, hi) = (TerminatingDecimal::from_scaled(low, k), TerminatingDecimal::from_scaled(high, k));
        // Prefer the n-digit grid when that is still narrow enough.
        let coarse = Enclosure::new(lo.floor_to(n), hi.ceil_to(n));
        if fits(&coarse, n) {
            coarse
        } else {
            Enclosure::new(lo, hi)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rounding {
    Down,
    Up,
}

/// `floor(sqrt(m))` or `ceil(sqrt(m))` for `m = r * 10^(2k) >= 0`, by
/// bisection on the integers. The invariant is `lo^2 <= m < hi^2`; seeds
/// are `[r, 1]` for `r < 1` and `[1, r]` otherwise, scaled by `10^k`.
fn grid_isqrt(m: &BigInt, k: usize, rounding: Rounding) -> BigInt {
    let m = m.magnitude();
    let one_scaled = pow10(k);
    let (mut lo, mut hi) = if *m < &one_scaled * &one_scaled {
        (m / &one_scaled, one_scaled)
    } else {
        (one_scaled.clone(), m / &one_scaled + 1u32)
    };
    debug_assert!(&lo * &lo <= *m && *m < &hi * &hi);
    while &hi - &lo > BigUint::one() {
        let mid = (&lo + &hi) >> 1;
        let sq = &mid * &mid;
        if sq <= *m {
            check_lower_step(&mid, m);
            lo = mid;
        } else {
            check_upper_step(&mid, m);
            hi = mid;
        }
    }
    let exact = &lo * &lo == *m;
    let root = if rounding == Rounding::Up && !exact { lo + 1u32 } else { lo };
    BigInt::from(root)
}

/// For `s^2 < m`, stepping up by `min((m - s^2) / (2s + 1), 1)` keeps the
/// square at most `m`. Checked in integers: with `g = m - s^2` and
/// `d = 2s + 1`, `(s d + g)^2 <= m d^2`.
fn check_lower_step(s: &BigUint, m: &BigUint) {
    if cfg!(debug_assertions) {
        let sq = s * s;
        if sq < *m {
            let gap = m - &sq;
            let d: BigUint = (s << 1u32) + 1u32;
            if gap >= d {
                let next = s + 1u32;
                debug_assert!(&next * &next <= *m);
            } else {
                let top = s * &d + gap;
                debug_assert!(&top * &top <= m * &d * &d);
            }
        }
    }
}

/// For `s^2 > m`, stepping down by `(s^2 - m) / (2s)` keeps the square at
/// least `m`: `(2s^2 - g)^2 >= m (2s)^2` with `g = s^2 - m`.
fn check_upper_step(s: &BigUint, m: &BigUint) {
    if cfg!(debug_assertions) {
        let sq = s * s;
        let gap = &sq - m;
        let top = (&sq << 1u32) - gap;
        let d: BigUint = s << 1u32;
        debug_assert!(&top * &top >= m * &d * &d);
    }
}

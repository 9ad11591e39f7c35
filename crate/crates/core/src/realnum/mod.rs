//! Real numbers as canonical infinite decimals.
//!
//! A real is an infinite decimal `±a.b1 b2 b3 ...` whose digits never end in
//! an infinite run of 9s. Three presentations are supported:
//!
//! * [`RealNumber::Terminating`]: all digits past some point are 0.
//! * [`RealNumber::Periodic`]: eventually repeating, i.e. a rational.
//! * [`RealNumber::Oracle`]: any other real, given by a [`DigitOracle`].
//!
//! Terminating and periodic values are held in a unique minimal form, so
//! structural equality is value equality. Questions about oracles (order,
//! sign, integral part) are answered within a digit budget and may come
//! back undecided.

mod oracle;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub use oracle::{DigitOracle, DigitStream, REFINEMENT_BUDGET};
pub(crate) use oracle::{Approximant, Bracket};

use crate::arithmetic::{self, Enclosure};
use crate::error::{Error, Result};
use crate::rationals::{self, Rational};
use crate::terminating::{pow10, TerminatingDecimal};

/// Default number of fractional digits examined by comparisons.
pub const DEFAULT_BUDGET: usize = 1000;

/// Default look-ahead window for runs of 9s.
pub const DEFAULT_WINDOW: usize = 64;

/// An eventually periodic expansion `±int.pre(period)` in minimal form:
/// the period is the shortest possible, the preperiod is the shortest
/// possible for that period, and the period is neither all 0s nor all 9s.
///
/// The fractional part is held as a reduced fraction `num/den`. Digits come
/// from long division on demand, so a denominator with a huge period costs
/// nothing until the whole period is asked for.
#[derive(Clone)]
pub struct PeriodicDecimal {
    negative: bool,
    int_part: BigUint,
    num: BigUint,
    den: BigUint,
    preperiod_len: usize,
    period: OnceLock<Vec<u8>>,
}

impl PeriodicDecimal {
    /// `num/den` must be reduced, strictly between 0 and 1, and `den` must
    /// have a prime factor other than 2 and 5. `preperiod_len` is the larger
    /// exponent of 2 or 5 in `den`.
    pub(crate) fn from_fraction_unchecked(negative: bool, int_part: BigUint, num: BigUint, den: BigUint, preperiod_len: usize) -> Self {
        debug_assert!(!num.is_zero() && num < den);
        PeriodicDecimal {
            negative,
            int_part,
            num,
            den,
            preperiod_len,
            period: OnceLock::new(),
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn int_part(&self) -> &BigUint {
        &self.int_part
    }

    /// The fractional part `num/den` of the magnitude.
    pub fn fraction(&self) -> (&BigUint, &BigUint) {
        (&self.num, &self.den)
    }

    pub fn preperiod_len(&self) -> usize {
        self.preperiod_len
    }

    /// Digits before the repetition starts.
    pub fn preperiod(&self) -> Vec<u8> {
        self.digits(self.preperiod_len)
    }

    /// One full period. Computed on first use; its length is the order of 10
    /// modulo the odd, non-5 part of the denominator.
    pub fn period(&self) -> &[u8] {
        self.period.get_or_init(|| {
            let mut rem = self.remainder_after(self.preperiod_len);
            let first = rem.clone();
            let mut period = Vec::new();
            loop {
                period.push(self.step(&mut rem));
                if rem == first {
                    return period;
                }
            }
        })
    }

    /// Remainder of the long division after `i` digits.
    fn remainder_after(&self, i: usize) -> BigUint {
        (&self.num * BigUint::from(10u32).modpow(&BigUint::from(i), &self.den)) % &self.den
    }

    fn step(&self, rem: &mut BigUint) -> u8 {
        let (d, next) = (&*rem * 10u32).div_rem(&self.den);
        *rem = next;
        d.to_u8().expect("quotient digit")
    }

    /// Digit `i >= 1` of the magnitude.
    pub fn digit(&self, i: usize) -> u8 {
        if let Some(period) = self.period.get() {
            if i > self.preperiod_len {
                return period[(i - self.preperiod_len - 1) % period.len()];
            }
        }
        self.step(&mut self.remainder_after(i - 1))
    }

    /// The first `n` fractional digits of the magnitude.
    pub fn digits(&self, n: usize) -> Vec<u8> {
        let mut rem = self.num.clone();
        (0..n).map(|_| self.step(&mut rem)).collect()
    }
}

impl PartialEq for PeriodicDecimal {
    fn eq(&self, other: &Self) -> bool {
        (self.negative, &self.int_part, &self.num, &self.den) == (other.negative, &other.int_part, &other.num, &other.den)
    }
}

impl Eq for PeriodicDecimal {}

impl std::hash::Hash for PeriodicDecimal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.negative, &self.int_part, &self.num, &self.den).hash(state);
    }
}

impl fmt::Display for PeriodicDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        write!(f, "{}.", self.int_part)?;
        for d in self.preperiod() {
            write!(f, "{d}")?;
        }
        f.write_str("(")?;
        for d in self.period() {
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for PeriodicDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({self})")
    }
}

/// A sign, an integer part and finitely many fractional digits: the
/// truncation of an expansion after `digits.len()` places.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DigitPrefix {
    negative: bool,
    int_part: BigUint,
    digits: Vec<u8>,
}

impl DigitPrefix {
    pub fn new(negative: bool, int_part: BigUint, digits: Vec<u8>) -> Self {
        debug_assert!(digits.iter().all(|d| *d <= 9));
        DigitPrefix {
            negative,
            int_part,
            digits,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// Integer part of the magnitude.
    pub fn int_part(&self) -> &BigUint {
        &self.int_part
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The first `n` digits only.
    pub fn truncated(&self, n: usize) -> DigitPrefix {
        DigitPrefix::new(self.negative, self.int_part.clone(), self.digits[..n.min(self.digits.len())].to_vec())
    }

    /// The prefix read as a terminating decimal.
    pub fn to_terminating(&self) -> TerminatingDecimal {
        let mut unscaled = &self.int_part * pow10(self.digits.len());
        for (i, d) in self.digits.iter().rev().enumerate() {
            unscaled += BigUint::from(*d) * pow10(i);
        }
        let mut value = BigInt::from(unscaled);
        if self.negative {
            value = -value;
        }
        TerminatingDecimal::from_scaled(value, self.digits.len())
    }
}

impl fmt::Display for DigitPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        write!(f, "{}", self.int_part)?;
        if !self.digits.is_empty() {
            f.write_str(".")?;
            for d in &self.digits {
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

/// A canonical infinite decimal.
#[derive(Clone)]
pub enum RealNumber {
    Terminating(TerminatingDecimal),
    Periodic(PeriodicDecimal),
    Oracle(DigitOracle),
}

/// Sign classification of a real.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

/// Outcome of a budgeted comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl Comparison {
    pub fn ordering(self) -> Option<Ordering> {
        match self {
            Comparison::Less => Some(Ordering::Less),
            Comparison::Equal => Some(Ordering::Equal),
            Comparison::Greater => Some(Ordering::Greater),
            Comparison::Undecided => None,
        }
    }
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

impl RealNumber {
    pub fn zero() -> Self {
        RealNumber::Terminating(TerminatingDecimal::zero())
    }

    pub fn one() -> Self {
        RealNumber::Terminating(TerminatingDecimal::one())
    }

    /// The real `±int.pre(period)`, normalized. A period of all 0s yields
    /// a terminating decimal and a period of all 9s is replaced by the
    /// terminating decimal it is identified with.
    pub fn periodic(negative: bool, int_part: BigUint, preperiod: &[u8], period: &[u8]) -> Self {
        rationals::to_decimal(&rationals::periodic_value(negative, &int_part, preperiod, period))
    }

    /// True for terminating and periodic values, whose arithmetic is exact.
    pub fn is_exact(&self) -> bool {
        !matches!(self, RealNumber::Oracle(_))
    }

    /// Exact value as a fraction, when known.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            RealNumber::Periodic(p) => {
                let (num, den) = p.fraction();
                let magnitude = BigInt::from(p.int_part() * den + num);
                let signed = if p.is_negative() { -magnitude } else { magnitude };
                Some(Rational::new(signed, BigInt::from(den.clone())).expect("nonzero denominator"))
            }
            _ => rationals::from_periodic(self),
        }
    }

    pub fn as_terminating(&self) -> Option<&TerminatingDecimal> {
        match self {
            RealNumber::Terminating(t) => Some(t),
            _ => None,
        }
    }

    /// True only when the value is known to be exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        matches!(self, RealNumber::Terminating(t) if t.is_zero())
    }

    /// Sign, integer part and the first `n` fractional digits of the
    /// canonical expansion.
    pub fn prefix(&self, n: usize) -> Result<DigitPrefix> {
        match self {
            RealNumber::Terminating(t) => Ok(DigitPrefix::new(
                t.is_negative(),
                t.abs().floor().magnitude().clone(),
                t.fractional_digits(n),
            )),
            RealNumber::Periodic(p) => Ok(DigitPrefix::new(
                p.is_negative(),
                p.int_part().clone(),
                p.digits(n),
            )),
            RealNumber::Oracle(o) => o.prefix(n),
        }
    }

    /// Digit `i >= 1` after the decimal point.
    pub fn digit_at(&self, i: usize) -> Result<u8> {
        assert!(i >= 1, "digit positions start at 1");
        match self {
            RealNumber::Terminating(t) => Ok(t.fractional_digits(i)[i - 1]),
            RealNumber::Periodic(p) => Ok(p.digit(i)),
            RealNumber::Oracle(o) => o.digit_at(i),
        }
    }

    /// Bounds from the `n`-digit truncation, open where the canonical form
    /// guarantees strictness.
    pub(crate) fn bracket(&self, n: usize) -> Bracket {
        match self {
            RealNumber::Terminating(t) => Bracket::point(t.clone()),
            RealNumber::Periodic(_) => Bracket::from_prefix(&self.prefix(n).expect("exact digits")),
            RealNumber::Oracle(o) => o.bracket(n),
        }
    }
}

/// Precisions tried by budgeted queries: 0, 1, 2, 4, ... and the budget.
fn schedule(budget: usize) -> impl Iterator<Item = usize> {
    std::iter::once(0)
        .chain(std::iter::successors(Some(1usize), |n| n.checked_mul(2)).take_while(move |n| *n < budget))
        .chain(std::iter::once(budget))
}

/// Order of `x` and `y`. Exact for terminating and periodic pairs; with an
/// oracle involved, truncations up to `budget` digits are compared and
/// `Undecided` is returned when they never separate.
pub fn compare(x: &RealNumber, y: &RealNumber, budget: usize) -> Comparison {
    if let (Some(a), Some(b)) = (x.as_rational(), y.as_rational()) {
        return a.cmp(&b).into();
    }
    for n in schedule(budget) {
        let (bx, by) = (x.bracket(n), y.bracket(n));
        if bx.below(&by) {
            return Comparison::Less;
        }
        if by.below(&bx) {
            return Comparison::Greater;
        }
        if bx.is_point() && by.is_point() && bx.lo == by.lo {
            return Comparison::Equal;
        }
    }
    Comparison::Undecided
}

/// Sign of `x`, scanning at most `budget` digits for oracles.
pub fn classify(x: &RealNumber, budget: usize) -> Result<SignClass> {
    if let Some(q) = x.as_rational() {
        return Ok(match q.numerator().sign() {
            Sign::Minus => SignClass::Negative,
            Sign::NoSign => SignClass::Zero,
            Sign::Plus => SignClass::Positive,
        });
    }
    let zero = Bracket::point(TerminatingDecimal::zero());
    for n in schedule(budget) {
        let b = x.bracket(n);
        if zero.below(&b) {
            return Ok(SignClass::Positive);
        }
        if b.below(&zero) {
            return Ok(SignClass::Negative);
        }
        if b.is_point() && b.lo.is_zero() {
            return Ok(SignClass::Zero);
        }
    }
    Err(Error::SignUndecided { budget })
}

/// The integer `n` with `n <= x < n + 1`.
///
/// For a non-negative expansion this is its integer part; for a negative
/// non-integer `-a.b1 b2 ...` it is `-a - 1`. Oracles sitting on an integer
/// can fail with `DigitsUnstable`.
pub fn integral_part(x: &RealNumber) -> Result<BigInt> {
    integral_part_with_budget(x, DEFAULT_BUDGET)
}

pub fn integral_part_with_budget(x: &RealNumber, budget: usize) -> Result<BigInt> {
    if let Some(q) = x.as_rational() {
        return Ok(q.floor());
    }
    for n in schedule(budget) {
        let b = x.bracket(n);
        let low = b.lo.floor();
        let high = if b.hi_open && b.hi.is_integer() {
            b.hi.floor() - 1
        } else {
            b.hi.floor()
        };
        if low == high {
            return Ok(low);
        }
    }
    Err(Error::DigitsUnstable { index: 0, budget })
}

/// The terminating decimal equal to an expansion whose digits from
/// position `nine_onset` on are all 9: cut the prefix before that position
/// and add one unit in the last remaining place. Position 1 means the
/// integer part is incremented.
///
/// The caller certifies the 9s; nothing here checks the tail.
pub fn canonicalize_trailing_nines(prefix: &DigitPrefix, nine_onset: usize) -> TerminatingDecimal {
    assert!(nine_onset >= 1, "digit positions start at 1");
    let kept = prefix.truncated(nine_onset - 1);
    let magnitude = DigitPrefix::new(false, kept.int_part().clone(), kept.digits().to_vec()).to_terminating();
    let bumped = &magnitude + &TerminatingDecimal::unit(nine_onset - 1);
    if prefix.is_negative() {
        -bumped
    } else {
        bumped
    }
}

/// A terminating decimal strictly between `a` and `b`, with the default
/// budget.
pub fn between(a: &RealNumber, b: &RealNumber) -> Result<TerminatingDecimal> {
    between_with_budget(a, b, DEFAULT_BUDGET)
}

/// A terminating decimal `c` with `a < c < b`.
///
/// * `a < 0 < b`: `c = 0`.
/// * `a = 0 < b`: with `m` the position of the first nonzero digit of `b`,
///   `c = 0.0...01` with the 1 at position `m + 1`.
/// * `0 < a < b`: if the integer parts differ, replace the first fractional
///   digit of `a` below 9 by 9 and cut. Otherwise find where `a` and `b`
///   first differ, then replace the next digit of `a` below 9 after that
///   position by 9 and cut.
/// * `b <= 0`: negate, solve, negate back.
pub fn between_with_budget(a: &RealNumber, b: &RealNumber, budget: usize) -> Result<TerminatingDecimal> {
    match compare(a, b, budget) {
        Comparison::Less => {}
        Comparison::Equal | Comparison::Greater => return Err(Error::NotLess),
        Comparison::Undecided => return Err(Error::OrderUndecided { budget }),
    }
    let sign_a = classify(a, budget).map_err(|_| Error::OrderUndecided { budget })?;
    let sign_b = classify(b, budget).map_err(|_| Error::OrderUndecided { budget })?;
    match (sign_a, sign_b) {
        (SignClass::Negative, SignClass::Positive) => Ok(TerminatingDecimal::zero()),
        (SignClass::Zero, SignClass::Positive) => above_zero(b, budget),
        (SignClass::Positive, SignClass::Positive) => between_positive(a, b, budget),
        _ => {
            let c = between_with_budget(&arithmetic::neg(b), &arithmetic::neg(a), budget)?;
            Ok(-c)
        }
    }
}

fn above_zero(b: &RealNumber, budget: usize) -> Result<TerminatingDecimal> {
    let head = b.prefix(0)?;
    if !head.int_part().is_zero() {
        return Ok(TerminatingDecimal::unit(1));
    }
    for m in 1..=budget {
        if b.digit_at(m)? != 0 {
            return Ok(TerminatingDecimal::unit(m + 1));
        }
    }
    Err(Error::OrderUndecided { budget })
}

fn between_positive(a: &RealNumber, b: &RealNumber, budget: usize) -> Result<TerminatingDecimal> {
    let a0 = a.prefix(0)?.int_part().clone();
    let b0 = b.prefix(0)?.int_part().clone();
    let start = if a0 < b0 {
        0
    } else {
        let mut diverge = None;
        for i in 1..=budget {
            if a.digit_at(i)? != b.digit_at(i)? {
                diverge = Some(i);
                break;
            }
        }
        diverge.ok_or(Error::OrderUndecided { budget })?
    };
    for k in start + 1..=budget.max(start + 1) {
        if a.digit_at(k)? < 9 {
            let mut prefix = a.prefix(k)?;
            prefix.digits[k - 1] = 9;
            return Ok(prefix.to_terminating());
        }
    }
    // Only reachable for oracles whose examined digits are all 9s.
    let next = TerminatingDecimal::from_integer(BigInt::from(a0) + BigInt::one());
    if start == 0 && compare(&RealNumber::Terminating(next.clone()), b, budget) == Comparison::Less {
        return Ok(next);
    }
    Err(Error::OrderUndecided { budget })
}

fn parse_digits(s: &str) -> Option<Vec<u8>> {
    s.bytes()
        .map(|b| b.is_ascii_digit().then(|| b - b'0'))
        .collect()
}

/// Parse `-? digits ('.' digits? ('(' digits ')')?)?`, e.g. `2.12`,
/// `0.1(6)`, `-0.(142857)`. The value is normalized to its canonical form.
pub fn parse_real(text: &str) -> Result<RealNumber> {
    let malformed = |reason| Error::MalformedLiteral {
        literal: text.to_string(),
        reason,
    };
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_str, rest) = match body.split_once('.') {
        Some((i, r)) => (i, Some(r)),
        None => (body, None),
    };
    if int_str.is_empty() {
        return Err(malformed("no digits before the decimal point"));
    }
    let int_digits = parse_digits(int_str).ok_or_else(|| malformed("unexpected character"))?;
    if int_digits.len() > 1 && int_digits[0] == 0 {
        return Err(malformed("leading zero in the integer part"));
    }
    let (pre, period) = match rest {
        None => (Vec::new(), Vec::new()),
        Some(r) => {
            let (pre_str, period_str) = match r.split_once('(') {
                Some((p, tail)) => {
                    let inner = tail.strip_suffix(')').ok_or_else(|| malformed("unclosed period"))?;
                    if inner.is_empty() {
                        return Err(malformed("empty period"));
                    }
                    (p, inner)
                }
                None => (r, ""),
            };
            if pre_str.is_empty() && period_str.is_empty() {
                return Err(malformed("no digits after the decimal point"));
            }
            let pre = parse_digits(pre_str).ok_or_else(|| malformed("unexpected character"))?;
            let period = parse_digits(period_str).ok_or_else(|| malformed("unexpected character"))?;
            (pre, period)
        }
    };
    let int_part: BigUint = int_str.parse().map_err(|_| malformed("bad integer part"))?;
    Ok(RealNumber::periodic(negative, int_part, &pre, &period))
}

impl FromStr for RealNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_real(s)
    }
}

impl PartialEq for RealNumber {
    /// Structural: exact values compare by canonical form, oracles only
    /// equal themselves.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (RealNumber::Terminating(a), RealNumber::Terminating(b)) => a == b,
            (RealNumber::Periodic(a), RealNumber::Periodic(b)) => a == b,
            (RealNumber::Oracle(a), RealNumber::Oracle(b)) => a.ptr_eq(b),
            _ => false,
        }
    }
}

impl fmt::Display for RealNumber {
    /// Terminating and periodic values render in the literal grammar.
    /// Oracles render their first 20 digits followed by `...`, or their
    /// enclosure when those digits cannot be pinned.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealNumber::Terminating(t) => write!(f, "{t}"),
            RealNumber::Periodic(p) => write!(f, "{p}"),
            RealNumber::Oracle(o) => match o.prefix(20) {
                Ok(prefix) => write!(f, "{prefix}..."),
                Err(_) => write!(f, "{}", o.enclosure(20)),
            },
        }
    }
}

impl fmt::Debug for RealNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealNumber::Terminating(t) => write!(f, "{t:?}"),
            RealNumber::Periodic(p) => write!(f, "{p:?}"),
            RealNumber::Oracle(o) => write!(f, "{o:?}"),
        }
    }
}

impl From<TerminatingDecimal> for RealNumber {
    fn from(t: TerminatingDecimal) -> Self {
        RealNumber::Terminating(t)
    }
}

impl From<&Rational> for RealNumber {
    fn from(q: &Rational) -> Self {
        rationals::to_decimal(q)
    }
}

impl From<Rational> for RealNumber {
    fn from(q: Rational) -> Self {
        rationals::to_decimal(&q)
    }
}

impl From<i64> for RealNumber {
    fn from(n: i64) -> Self {
        RealNumber::Terminating(TerminatingDecimal::from_integer(n))
    }
}

impl From<DigitOracle> for RealNumber {
    fn from(o: DigitOracle) -> Self {
        RealNumber::Oracle(o)
    }
}

/// Enclosure of `x` of width at most `10^(-n)`; see [`arithmetic::eval`].
impl RealNumber {
    pub fn enclosure(&self, n: usize) -> Enclosure {
        arithmetic::eval(self, n)
    }
}

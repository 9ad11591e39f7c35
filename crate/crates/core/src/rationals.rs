//! Exact rationals and their periodic decimal expansions.
//!
//! Every rational has a unique canonical expansion: terminating when the
//! reduced denominator has no prime factors other than 2 and 5, otherwise
//! eventually periodic with a minimal period that is never all 9s. The
//! conversions here are the exact oracle that the rest of the crate is
//! checked against.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arithmetic;
use crate::error::{Error, Result};
use crate::realnum::{self, DigitPrefix, PeriodicDecimal, RealNumber, DEFAULT_BUDGET};
use crate::terminating::{pow10, pow10_signed, TerminatingDecimal};

/// A fraction `p/q` with `q > 0` and `gcd(|p|, q) = 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// `numerator / denominator`, reduced. Fails on a zero denominator.
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self> {
        let d = denominator.into();
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numerator.into(), d)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    /// `a/b` where both are perfect squares, if so.
    pub fn exact_sqrt(&self) -> Option<Rational> {
        if self.is_negative() {
            return None;
        }
        let p = self.numerator().magnitude();
        let q = self.denominator().magnitude();
        let (rp, rq) = (p.sqrt(), q.sqrt());
        (&rp * &rp == *p && &rq * &rq == *q).then(|| Rational(BigRational::new(rp.into(), rq.into())))
    }
}

impl From<&TerminatingDecimal> for Rational {
    fn from(t: &TerminatingDecimal) -> Self {
        Rational(BigRational::new(t.unscaled().clone(), pow10_signed(t.scale())))
    }
}

impl From<TerminatingDecimal> for Rational {
    fn from(t: TerminatingDecimal) -> Self {
        Rational::from(&t)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({self})")
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// `p/q` or a plain integer.
    fn from_str(s: &str) -> Result<Self> {
        let malformed = |reason| Error::MalformedLiteral {
            literal: s.to_string(),
            reason,
        };
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let p: BigInt = p.trim().parse().map_err(|_| malformed("bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| malformed("bad denominator"))?;
        if q.is_negative() {
            return Err(malformed("denominator must be positive"));
        }
        Rational::new(p, q).map_err(|_| malformed("zero denominator"))
    }
}

/// Canonical decimal expansion by long division. The period starts at the
/// first repeated remainder, so both the preperiod and the period are as
/// short as possible.
pub fn to_decimal(r: &Rational) -> RealNumber {
    let negative = r.is_negative();
    let num = r.numerator().magnitude();
    let den = r.denominator().magnitude();
    let (int_part, rem) = num.div_rem(den);

    // The preperiod is as long as the larger power of 2 or 5 in the
    // denominator. Anything else left over makes the expansion periodic.
    let twos = den.trailing_zeros().unwrap_or(0) as usize;
    let mut fives = 0;
    let mut rest = den >> twos;
    let five = BigUint::from(5u32);
    loop {
        let (q, r) = rest.div_rem(&five);
        if !r.is_zero() {
            break;
        }
        rest = q;
        fives += 1;
    }
    let scale = twos.max(fives);
    if rest.is_one() {
        // den divides 10^scale.
        let unscaled = BigInt::from(num * (pow10(scale) / den));
        let unscaled = if negative { -unscaled } else { unscaled };
        return RealNumber::Terminating(TerminatingDecimal::from_scaled(unscaled, scale));
    }
    RealNumber::Periodic(PeriodicDecimal::from_fraction_unchecked(negative, int_part, rem, den.clone(), scale))
}

/// The integer spelled by `digits`. Long strings are split in half so the
/// big multiplications stay balanced.
fn digits_value(digits: &[u8]) -> BigUint {
    if digits.len() <= 19 {
        return BigUint::from(digits.iter().fold(0u64, |acc, d| acc * 10 + u64::from(*d)));
    }
    let (high, low) = digits.split_at(digits.len() / 2);
    digits_value(high) * pow10(low.len()) + digits_value(low)
}

/// Exact value of a digit expansion `int.pre(period)`, by the geometric
/// series `period / (10^P - 1)` shifted past the preperiod.
pub(crate) fn periodic_value(negative: bool, int_part: &BigUint, pre: &[u8], period: &[u8]) -> Rational {
    let pre_scale = pow10(pre.len());
    let mut num = BigInt::from(int_part * &pre_scale + digits_value(pre));
    let mut den = BigInt::from(pre_scale);
    if !period.is_empty() {
        let cycle = pow10(period.len()) - 1u32;
        num = num * BigInt::from(cycle.clone()) + BigInt::from(digits_value(period));
        den *= BigInt::from(cycle);
    }
    if negative {
        num = -num;
    }
    Rational(BigRational::new(num, den))
}

/// The fraction whose expansion is `x`. Returns `None` for digit oracles,
/// whose value is not known to be rational.
pub fn from_periodic(x: &RealNumber) -> Option<Rational> {
    match x {
        RealNumber::Terminating(t) => Some(Rational::from(t)),
        RealNumber::Periodic(p) => Some(periodic_value(
            p.is_negative(),
            p.int_part(),
            &p.preperiod(),
            p.period(),
        )),
        RealNumber::Oracle(_) => None,
    }
}

/// Digits by repeated integral parts: `x0 = [x]`, `y0 = x - x0`, then
/// `x(k+1) = [10 y(k)]` and `y(k+1) = 10 y(k) - x(k+1)`. Negative inputs
/// are expanded on their absolute value and the sign is restored.
///
/// Exact inputs run in rational arithmetic. Digit oracles run the same
/// recurrence on the lower end of an enclosure refined until the `n`-digit
/// prefixes of both ends agree; if they never do within the refinement
/// budget the lower end's digits are returned as computed, which may end in
/// 9s that cannot be certified.
pub fn decimal_representation(x: &RealNumber, n: usize) -> DigitPrefix {
    if let Some(q) = from_periodic(x) {
        // With exact arithmetic every remainder stays in [0, 1), so the
        // recurrence never produces an infinite run of 9s and needs no
        // trailing-9 update.
        let (negative, int_part, digits) = recurrence_digits(&q, n);
        return DigitPrefix::new(negative, int_part, digits);
    }

    let mut fallback = None;
    for extra in [1usize, 2, 4, 8, 16, 32, 64] {
        let enc = arithmetic::eval(x, n + extra);
        let lo = recurrence_digits(&Rational::from(enc.lo()), n);
        let hi = recurrence_digits(&Rational::from(enc.hi()), n);
        if lo == hi {
            return DigitPrefix::new(lo.0, lo.1, lo.2);
        }
        // The end nearer zero is a member of the lower cut of |x|.
        fallback = Some(if enc.hi().is_negative() { hi } else { lo });
    }
    let (negative, int_part, digits) = fallback.expect("at least one refinement");
    DigitPrefix::new(negative, int_part, digits)
}

fn recurrence_digits(q: &Rational, n: usize) -> (bool, BigUint, Vec<u8>) {
    let y = q.abs();
    let x0 = y.floor();
    let mut rest = &y - &Rational::from_integer(x0.clone());
    let ten = Rational::from_integer(10);
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        let scaled = &rest * &ten;
        let d = scaled.floor();
        rest = &scaled - &Rational::from_integer(d.clone());
        digits.push(d.to_u8().expect("digit in 0..=9"));
    }
    (q.is_negative(), x0.magnitude().clone(), digits)
}

/// Outcome of a bounded period search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodSearch {
    NoPeriodFound,
    /// Digits after position `offset` repeat with the given block.
    PeriodFound { offset: usize, period: Vec<u8> },
}

/// Look for an eventually periodic pattern in the first
/// `max_offset + 2 * max_period` fractional digits of `x`. The smallest
/// offset wins, then the shortest period. `NoPeriodFound` is evidence of
/// irrationality, not proof.
pub fn assert_no_period(x: &RealNumber, max_period: usize, max_offset: usize) -> Result<PeriodSearch> {
    let total = max_offset + 2 * max_period;
    let digits = x.prefix(total)?.digits().to_vec();
    for offset in 0..=max_offset {
        for p in 1..=max_period {
            let window = &digits[offset..];
            if window.len() < 2 * p {
                continue;
            }
            if (0..window.len() - p).all(|i| window[i] == window[i + p]) {
                return Ok(PeriodSearch::PeriodFound {
                    offset,
                    period: window[..p].to_vec(),
                });
            }
        }
    }
    Ok(PeriodSearch::NoPeriodFound)
}

/// Outcome of [`phi_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiCheck {
    Ok,
    Violation(String),
}

/// Check that the decimal representation map commutes with `+`, `*` and
/// `<` on one pair of rationals. Sums and products are checked both for
/// structural equality on the exact path and for containment in the
/// enclosure built from truncated operands; order is checked against a
/// digit-by-digit comparison of the two expansions.
pub fn phi_check(x: &Rational, y: &Rational) -> PhiCheck {
    let (dx, dy) = (to_decimal(x), to_decimal(y));
    const PRECISION: usize = 30;

    let sum = to_decimal(&(x + y));
    let s = arithmetic::add(&dx, &dy);
    if s != sum {
        return PhiCheck::Violation(format!("phi({x} + {y}) = {sum} but phi({x}) + phi({y}) = {s}"));
    }
    let enc = arithmetic::eval(&arithmetic::lazy_add(&dx, &dy), PRECISION);
    if !enc.contains_rational(&(x + y)) {
        return PhiCheck::Violation(format!("enclosure {enc} of phi({x}) + phi({y}) misses {sum}"));
    }

    let product = to_decimal(&(x * y));
    let p = arithmetic::mul(&dx, &dy);
    if p != product {
        return PhiCheck::Violation(format!("phi({x} * {y}) = {product} but phi({x}) * phi({y}) = {p}"));
    }
    let enc = arithmetic::eval(&arithmetic::lazy_mul(&dx, &dy), PRECISION);
    if !enc.contains_rational(&(x * y)) {
        return PhiCheck::Violation(format!("enclosure {enc} of phi({x}) * phi({y}) misses {product}"));
    }

    let exact = x.cmp(y);
    let by_digits = lexicographic_cmp(&dx, &dy);
    if exact != by_digits {
        return PhiCheck::Violation(format!("{x} vs {y} is {exact:?} but the expansions compare {by_digits:?}"));
    }
    match realnum::compare(&dx, &dy, DEFAULT_BUDGET) {
        c if c.ordering() == Some(exact) => PhiCheck::Ok,
        other => PhiCheck::Violation(format!("{x} vs {y} is {exact:?} but compare gave {other:?}")),
    }
}

/// Order of two exact expansions read off their digits: sign first, then
/// integer parts, then fractional digits, reversed for negatives. Two
/// eventually periodic expansions that agree through the longer preperiod
/// and one common multiple of the periods agree everywhere.
fn lexicographic_cmp(a: &RealNumber, b: &RealNumber) -> Ordering {
    fn shape(x: &RealNumber) -> (Sign, usize, usize) {
        match x {
            RealNumber::Terminating(t) => (t.sign(), t.scale(), 1),
            RealNumber::Periodic(p) => (
                if p.is_negative() { Sign::Minus } else { Sign::Plus },
                p.preperiod_len(),
                p.period().len(),
            ),
            RealNumber::Oracle(_) => unreachable!("exact expansions only"),
        }
    }
    let (sa, pre_a, per_a) = shape(a);
    let (sb, pre_b, per_b) = shape(b);
    if sa != sb {
        return sa.cmp(&sb);
    }
    let horizon = pre_a.max(pre_b) + per_a.lcm(&per_b);
    let pa = a.prefix(horizon).expect("exact digits");
    let pb = b.prefix(horizon).expect("exact digits");
    let magnitude = pa
        .int_part()
        .cmp(pb.int_part())
        .then_with(|| pa.digits().cmp(pb.digits()));
    if sa == Sign::Minus {
        magnitude.reverse()
    } else {
        magnitude
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    /// Digit `i` (1-based) of `p/d` by schoolbook long division, written
    /// independently of `to_decimal`.
    fn long_division_digit(p: u64, d: u64, i: usize) -> u8 {
        let mut r = p % d;
        let mut digit = 0;
        for _ in 0..i {
            r *= 10;
            digit = (r / d) as u8;
            r %= d;
        }
        digit
    }

    #[test]
    fn long_division_oracle_sanity() {
        let sevenths: Vec<u8> = (1..=8).map(|i| long_division_digit(1, 7, i)).collect();
        assert_eq!(sevenths, vec![1, 4, 2, 8, 5, 7, 1, 4]);
    }

    #[test]
    fn to_decimal_examples() {
        assert_eq!(to_decimal(&q(1, 3)).to_string(), "0.(3)");
        assert_eq!(to_decimal(&q(1, 7)).to_string(), "0.(142857)");
        assert_eq!(to_decimal(&q(-5, 4)).to_string(), "-1.25");
        assert_eq!(to_decimal(&q(1, 6)).to_string(), "0.1(6)");
        assert_eq!(to_decimal(&q(22, 7)).to_string(), "3.(142857)");
        assert_eq!(to_decimal(&q(0, 5)).to_string(), "0");
        assert_eq!(to_decimal(&q(-1, 3)).to_string(), "-0.(3)");
    }

    #[test]
    fn from_periodic_examples() {
        assert_eq!(from_periodic(&to_decimal(&q(1, 7))), Some(q(1, 7)));
        let x: RealNumber = "0.(142857)".parse().unwrap();
        assert_eq!(from_periodic(&x), Some(q(142857, 999999)));
        assert_eq!(from_periodic(&x), Some(q(1, 7)));
        let x: RealNumber = "2.12".parse().unwrap();
        assert_eq!(from_periodic(&x), Some(q(53, 25)));
        assert_eq!(from_periodic(&RealNumber::zero()), Some(Rational::zero()));
        assert_eq!(from_periodic(&RealNumber::zero()).unwrap().denominator(), &BigInt::one());
    }

    #[test]
    fn decimal_representation_examples() {
        let r = to_decimal(&q(53, 25));
        assert_eq!(decimal_representation(&r, 4).to_string(), "2.1200");
        assert_eq!(decimal_representation(&to_decimal(&q(1, 3)), 5).to_string(), "0.33333");
        assert_eq!(decimal_representation(&to_decimal(&q(-1, 4)), 3).to_string(), "-0.250");
        assert_eq!(decimal_representation(&RealNumber::zero(), 2).to_string(), "0.00");
        assert_eq!(decimal_representation(&to_decimal(&q(-7, 1)), 0).to_string(), "-7");
    }

    #[test]
    fn decimal_representation_on_oracles() {
        let s = arithmetic::sqrt(&RealNumber::from(2)).unwrap();
        assert_eq!(decimal_representation(&s, 10).to_string(), "1.4142135623");
        // sqrt(2)^2 is exactly 2, which enclosures can never certify; the
        // lower end's digits are emitted as computed.
        let two = arithmetic::mul(&s, &s);
        let rep = decimal_representation(&two, 5).to_string();
        assert!(rep == "1.99999" || rep == "2.00000", "{rep}");
    }

    #[test]
    fn period_search_examples() {
        assert_eq!(
            assert_no_period(&to_decimal(&q(1, 7)), 10, 10).unwrap(),
            PeriodSearch::PeriodFound { offset: 0, period: vec![1, 4, 2, 8, 5, 7] }
        );
        assert_eq!(
            assert_no_period(&to_decimal(&q(1, 6)), 10, 10).unwrap(),
            PeriodSearch::PeriodFound { offset: 1, period: vec![6] }
        );
        assert_eq!(
            assert_no_period(&to_decimal(&q(1, 4)), 5, 5).unwrap(),
            PeriodSearch::PeriodFound { offset: 2, period: vec![0] }
        );
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_check(&q(1, 6), &q(5, 6)), PhiCheck::Ok);
        assert_eq!(phi_check(&q(2, 7), &q(2, 7)), PhiCheck::Ok);
        assert_eq!(phi_check(&q(-1, 3), &q(1, 3)), PhiCheck::Ok);
        assert_eq!(to_decimal(&(q(-1, 3) + q(1, 3))), RealNumber::zero());
    }

    #[test]
    fn parse_fraction() {
        assert_eq!("6/8".parse::<Rational>().unwrap(), q(3, 4));
        assert_eq!("-6/8".parse::<Rational>().unwrap(), q(-3, 4));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
    }

    /// Multiplicative order of 10 modulo `m` (coprime to 10), by brute force.
    fn order_of_ten(m: u64) -> usize {
        if m == 1 {
            return 1;
        }
        let mut x = 10 % m;
        let mut k = 1;
        while x != 1 {
            x = x * 10 % m;
            k += 1;
        }
        k
    }

    #[test]
    fn period_length_is_order_of_ten() {
        for d in 2u64..=1000 {
            let mut stripped = d;
            while stripped % 2 == 0 {
                stripped /= 2;
            }
            while stripped % 5 == 0 {
                stripped /= 5;
            }
            let x = to_decimal(&q(1, d as i64));
            match x {
                RealNumber::Terminating(_) => assert_eq!(stripped, 1, "1/{d}"),
                RealNumber::Periodic(p) => {
                    let ord = order_of_ten(stripped);
                    assert_eq!(ord % p.period().len(), 0, "1/{d}");
                    // For numerator 1 the period is exactly the order.
                    assert_eq!(p.period().len(), ord, "1/{d}");
                }
                RealNumber::Oracle(_) => unreachable!(),
            }
        }
    }

    proptest! {
        #[test]
        fn digits_match_long_division(p in 0u64..100_000, d in 1u64..5_000, i in 1usize..60) {
            let x = to_decimal(&q(p as i64, d as i64));
            prop_assert_eq!(x.digit_at(i).unwrap(), long_division_digit(p, d, i));
        }

        #[test]
        fn minimal_periods(p in -100_000i64..100_000, d in 1i64..5_000) {
            if let RealNumber::Periodic(x) = to_decimal(&q(p, d)) {
                let per = x.period();
                prop_assert!(per.iter().any(|&c| c != 9));
                prop_assert!(per.iter().any(|&c| c != 0));
                for k in 1..per.len() {
                    if per.len() % k == 0 {
                        prop_assert!((0..per.len()).any(|i| per[i] != per[i % k]));
                    }
                }
                if let (Some(a), Some(b)) = (x.preperiod().last(), per.last()) {
                    prop_assert_ne!(a, b, "preperiod could be shortened");
                }
            }
        }

        #[test]
        fn recurrence_matches_long_division(p in -100_000i64..100_000, d in 1i64..2_000, n in 0usize..100) {
            let r = q(p, d);
            let x = to_decimal(&r);
            let rep = decimal_representation(&x, n);
            prop_assert_eq!(rep, x.prefix(n).unwrap());
        }
    }
}

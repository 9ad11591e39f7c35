//! Built-in bounded families.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BoundedSet, PrefixMaxOracle, TailHint};
use crate::error::{Error, Result};
use crate::rationals::Rational;
use crate::realnum::{between, parse_real, DigitPrefix, RealNumber};
use crate::terminating::TerminatingDecimal;

/// True when the expansion of `x` starts with `prefix` (same sign, same
/// integer part, same leading digits).
fn extends(x: &RealNumber, prefix: &DigitPrefix) -> bool {
    x.prefix(prefix.len()).is_ok_and(|p| &p == prefix)
}

fn is_nonnegative(x: &RealNumber) -> bool {
    !x.as_rational().expect("exact member").is_negative()
}

/// Integer part of the magnitude.
fn magnitude_integral(x: &RealNumber) -> BigInt {
    BigInt::from(x.prefix(0).expect("exact member").int_part().clone())
}

/// The walk's choice among `candidates`, which must already be restricted
/// to the participating members.
fn select_digit(candidates: &[RealNumber], prefix: &DigitPrefix, maximize: bool) -> u8 {
    let next = prefix.len() + 1;
    let digits = candidates
        .iter()
        .filter(|m| extends(m, prefix))
        .map(|m| m.digit_at(next).expect("exact member"));
    let chosen = if maximize { digits.max() } else { digits.min() };
    chosen.unwrap_or_else(|| panic!("no member extends {prefix}"))
}

fn select_integral(candidates: &[RealNumber], nonnegative: bool) -> BigInt {
    let parts = candidates.iter().map(magnitude_integral);
    if nonnegative {
        parts.max().expect("nonempty")
    } else {
        -parts.min().expect("nonempty")
    }
}

/// A finite set of exact reals presented to the digit walk.
#[derive(Clone)]
pub struct FiniteFamily {
    active: Arc<Vec<RealNumber>>,
    nonnegative: bool,
}

impl FiniteFamily {
    /// Members must be terminating or periodic.
    pub fn new(members: Vec<RealNumber>) -> Self {
        assert!(!members.is_empty(), "a finite set needs at least one member");
        assert!(members.iter().all(RealNumber::is_exact), "finite families hold exact members");
        let nonneg: Vec<RealNumber> = members.iter().filter(|m| is_nonnegative(m)).cloned().collect();
        let nonnegative = !nonneg.is_empty();
        FiniteFamily {
            active: Arc::new(if nonnegative { nonneg } else { members }),
            nonnegative,
        }
    }
}

/// Where the expansion of an exact real starts repeating, and the period.
fn repetition(x: &RealNumber) -> (usize, usize) {
    match x {
        RealNumber::Terminating(t) => (t.scale() + 1, 1),
        RealNumber::Periodic(p) => (p.preperiod_len() + 1, p.period().len()),
        RealNumber::Oracle(_) => unreachable!("exact member"),
    }
}

impl PrefixMaxOracle for FiniteFamily {
    fn has_nonnegative(&self) -> bool {
        self.nonnegative
    }

    fn max_integral(&self) -> BigInt {
        select_integral(&self.active, self.nonnegative)
    }

    fn max_next_digit(&self, prefix: &DigitPrefix) -> u8 {
        select_digit(&self.active, prefix, self.nonnegative)
    }

    /// Once a single value is left, its own expansion continues the walk.
    fn tail_hint(&self, prefix: &DigitPrefix) -> TailHint {
        let mut matching = self.active.iter().filter(|m| extends(m, prefix));
        let Some(first) = matching.next() else {
            return TailHint::Unknown;
        };
        if matching.all(|m| m == first) {
            let (start, period) = repetition(first);
            TailHint::RepeatsFrom { start, period }
        } else {
            TailHint::Unknown
        }
    }

    fn member_extending(&self, prefix: &DigitPrefix) -> RealNumber {
        self.active
            .iter()
            .find(|m| extends(m, prefix))
            .cloned()
            .unwrap_or_else(|| panic!("no member extends {prefix}"))
    }
}

/// The terminating decimals strictly below an exact real `c`.
///
/// For `c > 0` the walk follows the largest prefix still below `c`; for
/// `c <= 0` every member is negative and the walk follows the smallest
/// magnitude prefix that can still exceed `|c|`. Either way the supremum
/// is `c`.
#[derive(Clone)]
pub struct LowerCut {
    c: RealNumber,
    value: Rational,
    hints: bool,
}

impl LowerCut {
    pub fn new(c: RealNumber) -> Self {
        let value = c.as_rational().expect("lower cuts are taken of exact reals");
        LowerCut { c, value, hints: true }
    }

    /// The same set with tail hints turned off, so the walk has to discover
    /// everything digit by digit.
    pub fn without_hints(mut self) -> Self {
        self.hints = false;
        self
    }

    /// `|c|` when `c <= 0`.
    fn gap(&self) -> Rational {
        -self.value.clone()
    }
}

fn prefix_value(prefix: &DigitPrefix) -> Rational {
    let magnitude = DigitPrefix::new(false, prefix.int_part().clone(), prefix.digits().to_vec());
    Rational::from(magnitude.to_terminating())
}

impl PrefixMaxOracle for LowerCut {
    fn has_nonnegative(&self) -> bool {
        self.value.is_positive()
    }

    fn max_integral(&self) -> BigInt {
        if self.has_nonnegative() {
            self.value.ceil() - BigInt::one()
        } else {
            -self.gap().floor()
        }
    }

    fn max_next_digit(&self, prefix: &DigitPrefix) -> u8 {
        let base = prefix_value(prefix);
        let step = Rational::from(TerminatingDecimal::unit(prefix.len() + 1));
        let with = |d: u8| base.clone() + step.clone() * Rational::from(i64::from(d));
        if self.has_nonnegative() {
            (0..=9).rev().find(|d| with(*d) < self.value).expect("prefix stays below c")
        } else {
            let gap = self.gap();
            (0..=9).find(|d| with(*d) + step.clone() > gap).expect("prefix can exceed |c|")
        }
    }

    fn tail_hint(&self, prefix: &DigitPrefix) -> TailHint {
        if !self.hints {
            return TailHint::Unknown;
        }
        let repeats = || {
            let (start, period) = repetition(&self.c);
            TailHint::RepeatsFrom { start, period }
        };
        if !self.has_nonnegative() {
            return repeats();
        }
        match &self.c {
            RealNumber::Periodic(_) => repeats(),
            _ => {
                let unit = Rational::from(TerminatingDecimal::unit(prefix.len()));
                if prefix_value(prefix) + unit == self.value {
                    TailHint::AllNinesFrom(prefix.len() + 1)
                } else {
                    TailHint::Unknown
                }
            }
        }
    }

    fn member_extending(&self, prefix: &DigitPrefix) -> RealNumber {
        let p = prefix_value(prefix);
        if self.has_nonnegative() {
            return RealNumber::from(&p);
        }
        let gap = self.gap();
        let magnitude = if p > gap {
            RealNumber::from(&p)
        } else {
            let top = p + Rational::from(TerminatingDecimal::unit(prefix.len()));
            between(&RealNumber::from(&gap), &RealNumber::from(&top))
                .expect("prefix can exceed |c|")
                .into()
        };
        crate::arithmetic::neg(&magnitude)
    }
}

/// A countable family whose members relevant at digit depth `L` are all
/// listed by `candidates(L)`, with a family-specific tail hint.
#[derive(Clone)]
struct Enumerated {
    nonnegative: bool,
    integral: i64,
    candidates: fn(usize) -> Vec<RealNumber>,
    hint: fn(&DigitPrefix) -> TailHint,
}

impl PrefixMaxOracle for Enumerated {
    fn has_nonnegative(&self) -> bool {
        self.nonnegative
    }

    fn max_integral(&self) -> BigInt {
        BigInt::from(self.integral)
    }

    fn max_next_digit(&self, prefix: &DigitPrefix) -> u8 {
        select_digit(&self.participating(prefix.len()), prefix, self.nonnegative)
    }

    fn tail_hint(&self, prefix: &DigitPrefix) -> TailHint {
        (self.hint)(prefix)
    }

    fn member_extending(&self, prefix: &DigitPrefix) -> RealNumber {
        self.participating(prefix.len())
            .into_iter()
            .find(|m| extends(m, prefix))
            .unwrap_or_else(|| panic!("no member extends {prefix}"))
    }
}

impl Enumerated {
    fn participating(&self, depth: usize) -> Vec<RealNumber> {
        let all = (self.candidates)(depth);
        if self.nonnegative {
            all.into_iter().filter(is_nonnegative).collect()
        } else {
            all
        }
    }
}

fn lit(s: &str) -> RealNumber {
    parse_real(s).expect("built-in literal")
}

/// `0.99...91` with `k` nines.
fn nines_then_one(k: usize) -> RealNumber {
    lit(&format!("0.{}1", "9".repeat(k)))
}

/// `0.9`, `0.99`, `0.19` and `0.99...91` with at least two 9s. Only the
/// members with at most `depth + 1` nines can differ at digit `depth + 1`
/// from the rest.
fn nines_candidates(depth: usize) -> Vec<RealNumber> {
    let mut out = vec![lit("0.9"), lit("0.99"), lit("0.19")];
    out.extend((2..=(depth + 1).max(2)).map(nines_then_one));
    out
}

fn all_nines(prefix: &DigitPrefix) -> bool {
    prefix.digits().iter().all(|d| *d == 9)
}

/// `{1.0, 2.12, 1.(1), 2.1201(1), 1.12010(1)}`; supremum `2.1201(1)`.
pub fn mixed_expansions() -> BoundedSet {
    let members = ["1.0", "2.12", "1.(1)", "2.1201(1)", "1.12010(1)"].map(lit).to_vec();
    BoundedSet::family(FiniteFamily::new(members), TerminatingDecimal::from(3))
}

/// `{0.9, 0.99, 0.19, 0.991, 0.9991, ...}`; the selected digits are all 9s,
/// so the supremum is 1.
pub fn nines_approaching_one() -> BoundedSet {
    let oracle = Enumerated {
        nonnegative: true,
        integral: 0,
        candidates: nines_candidates,
        hint: |p| {
            if all_nines(p) {
                TailHint::AllNinesFrom(1)
            } else {
                TailHint::Unknown
            }
        },
    };
    BoundedSet::family(oracle, TerminatingDecimal::one())
}

/// `{-1.0, -0.9, -0.99, -0.19, -0.991, ...}`; supremum `-0.19`.
pub fn negated_nines() -> BoundedSet {
    let oracle = Enumerated {
        nonnegative: false,
        integral: 0,
        candidates: |depth| {
            let mut out = vec![lit("-1")];
            out.extend(nines_candidates(depth).iter().map(crate::arithmetic::neg));
            out
        },
        hint: |p| match p.digits().first() {
            Some(1) => TailHint::RepeatsFrom { start: 3, period: 1 },
            _ => TailHint::Unknown,
        },
    };
    BoundedSet::family(oracle, TerminatingDecimal::zero())
}

/// `{-0.1, -0.01, -0.001, ...}`; supremum 0.
pub fn negative_powers_of_ten() -> BoundedSet {
    let oracle = Enumerated {
        nonnegative: false,
        integral: 0,
        candidates: |depth| {
            (1..=depth + 2)
                .map(|k| RealNumber::from(-TerminatingDecimal::unit(k)))
                .collect()
        },
        hint: |p| {
            if p.digits().iter().all(|d| *d == 0) {
                TailHint::RepeatsFrom { start: 1, period: 1 }
            } else {
                TailHint::Unknown
            }
        },
    };
    BoundedSet::family(oracle, TerminatingDecimal::zero())
}

/// The lower cut of `c` as a bounded set.
pub fn lower_cut(c: RealNumber) -> BoundedSet {
    let q = c.as_rational().expect("lower cuts are taken of exact reals");
    let bound = TerminatingDecimal::from_integer(q.ceil().max(BigInt::zero()));
    BoundedSet::family(LowerCut::new(c), bound)
}

/// Built-in family by its set-file name: `paper-A`, `paper-B`, `paper-C`,
/// `paper-D` or `lower-cut <literal>`.
pub fn family_by_name(name: &str) -> Result<BoundedSet> {
    let name = name.trim();
    let unknown = || Error::MalformedLiteral {
        literal: name.to_string(),
        reason: "unknown family",
    };
    match name {
        "paper-A" => Ok(mixed_expansions()),
        "paper-B" => Ok(nines_approaching_one()),
        "paper-C" => Ok(negated_nines()),
        "paper-D" => Ok(negative_powers_of_ten()),
        _ => {
            let literal = name.strip_prefix("lower-cut").ok_or_else(unknown)?;
            if !literal.starts_with(char::is_whitespace) {
                return Err(unknown());
            }
            Ok(lower_cut(parse_real(literal.trim())?))
        }
    }
}

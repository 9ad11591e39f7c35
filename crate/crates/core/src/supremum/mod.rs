//! Least upper bounds by digit selection.
//!
//! A bounded set is either a finite list of reals or a family presented by
//! a [`PrefixMaxOracle`]. The supremum is built one digit at a time: the
//! largest integer part among non-negative members, then the largest first
//! digit among members with that integer part, and so on. When every
//! member is negative the same walk runs on magnitudes with minima instead
//! of maxima, and the result is negated. A selected digit stream that ends
//! in 9s is replaced by the terminating decimal it equals.

pub mod families;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::arithmetic::eval;
use crate::error::{Error, Result};
use crate::realnum::{
    between_with_budget, canonicalize_trailing_nines, compare, Comparison, DigitOracle, DigitPrefix, RealNumber,
    DEFAULT_WINDOW,
};
use crate::terminating::TerminatingDecimal;

pub use families::{family_by_name, FiniteFamily, LowerCut};

/// What an oracle knows about the selected digits from some point on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailHint {
    Unknown,
    /// Every selected digit from this position on is 9.
    AllNinesFrom(usize),
    /// Selected digits from `start` on repeat with this period length.
    RepeatsFrom { start: usize, period: usize },
}

/// A set of reals presented through the digit choices of the supremum walk.
///
/// When [`has_nonnegative`](Self::has_nonnegative) is true only the
/// non-negative members take part and digits are maximized. Otherwise all
/// members are negative and the walk runs over their magnitudes,
/// minimizing.
///
/// Prefixes passed in always carry the sign and integer part chosen by the
/// walk. Answers must be deterministic.
pub trait PrefixMaxOracle: Send + Sync {
    fn has_nonnegative(&self) -> bool;

    /// Largest integer part among non-negative members, or, when all
    /// members are negative, minus the least integer part of the
    /// magnitudes.
    fn max_integral(&self) -> BigInt;

    /// The digit after `prefix` chosen among members extending it: the
    /// maximum, or the minimum magnitude digit for all-negative sets.
    fn max_next_digit(&self, prefix: &DigitPrefix) -> u8;

    fn tail_hint(&self, _prefix: &DigitPrefix) -> TailHint {
        TailHint::Unknown
    }

    /// Some member of the participating subset whose expansion starts with
    /// `prefix`.
    fn member_extending(&self, prefix: &DigitPrefix) -> RealNumber;
}

/// A nonempty set of reals that is bounded above.
#[derive(Clone)]
pub enum BoundedSet {
    Finite(Vec<RealNumber>),
    Family {
        oracle: Arc<dyn PrefixMaxOracle>,
        upper_bound: TerminatingDecimal,
    },
}

impl BoundedSet {
    pub fn finite(members: Vec<RealNumber>) -> Self {
        assert!(!members.is_empty(), "a finite set needs at least one member");
        BoundedSet::Finite(members)
    }

    pub fn family(oracle: impl PrefixMaxOracle + 'static, upper_bound: TerminatingDecimal) -> Self {
        BoundedSet::Family {
            oracle: Arc::new(oracle),
            upper_bound,
        }
    }
}

impl fmt::Debug for BoundedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundedSet::Finite(members) => f.debug_set().entries(members).finish(),
            BoundedSet::Family { upper_bound, .. } => write!(f, "Family(bounded by {upper_bound})"),
        }
    }
}

/// `{x + y : x in a, y in b}`.
pub fn set_sum(a: &BTreeSet<TerminatingDecimal>, b: &BTreeSet<TerminatingDecimal>) -> BTreeSet<TerminatingDecimal> {
    a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()
}

/// `{x * y : x in a, y in b}`.
pub fn set_product(
    a: &BTreeSet<TerminatingDecimal>,
    b: &BTreeSet<TerminatingDecimal>,
) -> BTreeSet<TerminatingDecimal> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// The supremum of `s`.
///
/// A finite set returns its largest member; in debug builds the digit walk
/// is rerun on exact members and must agree. A family runs the digit walk:
/// when the oracle's tail hint settles the remaining digits the result is
/// terminating or periodic, otherwise it is a stream oracle extending the
/// walk on demand. A run of 9s reaching the look-ahead window with no hint
/// fails with `NineTailUndetectable`.
pub fn sup(s: &BoundedSet) -> Result<RealNumber> {
    match s {
        BoundedSet::Finite(members) => {
            let top = finite_max(members, crate::realnum::DEFAULT_BUDGET)?;
            if cfg!(debug_assertions) && members.iter().all(RealNumber::is_exact) {
                let walked = sup_by_digits(&FiniteFamily::new(members.clone()))?;
                debug_assert_eq!(walked, top, "digit walk disagrees with the maximum");
            }
            Ok(top)
        }
        BoundedSet::Family { oracle, .. } => sup_of_oracle(Arc::clone(oracle), DEFAULT_WINDOW),
    }
}

fn finite_max(members: &[RealNumber], budget: usize) -> Result<RealNumber> {
    let mut best = &members[0];
    for m in &members[1..] {
        match compare(m, best, budget) {
            Comparison::Greater => best = m,
            Comparison::Undecided => return Err(Error::OrderUndecided { budget }),
            _ => {}
        }
    }
    Ok(best.clone())
}

/// The digit walk over any oracle, with the default 9-run window.
pub fn sup_by_digits(oracle: &(impl PrefixMaxOracle + Clone + 'static)) -> Result<RealNumber> {
    sup_of_oracle(Arc::new(oracle.clone()), DEFAULT_WINDOW)
}

/// The digit walk with an explicit 9-run window.
pub fn sup_of_oracle(oracle: Arc<dyn PrefixMaxOracle>, window: usize) -> Result<RealNumber> {
    let nonnegative = oracle.has_nonnegative();
    let integral = oracle.max_integral();
    assert!(
        !nonnegative || !integral.is_negative(),
        "integer part of a non-negative member must be non-negative"
    );
    let negative = !nonnegative;
    let int_part: BigUint = integral.magnitude().clone();
    let prefix_of = |digits: &[u8]| DigitPrefix::new(negative, int_part.clone(), digits.to_vec());

    let mut digits: Vec<u8> = Vec::new();
    let mut repeat: Option<(usize, usize)> = None;
    let scan = 2 * window;
    // A hinted cycle is always walked to its end, even past the scan.
    while digits.len() < scan || repeat.is_some() {
        if let Some((start, period)) = repeat {
            if digits.len() + 1 >= start + period {
                let pre = &digits[..start - 1];
                let cycle = &digits[start - 1..start - 1 + period];
                return Ok(RealNumber::periodic(negative, int_part, pre, cycle));
            }
        } else {
            let prefix = prefix_of(&digits);
            match oracle.tail_hint(&prefix) {
                TailHint::AllNinesFrom(i) => {
                    assert!(i >= 1 && i <= digits.len() + 1, "nine tail must start within the walked prefix");
                    return Ok(canonicalize_trailing_nines(&prefix, i).into());
                }
                TailHint::RepeatsFrom { start, period } => {
                    assert!(start >= 1 && period >= 1, "repeat positions start at 1");
                    repeat = Some((start, period));
                    continue;
                }
                TailHint::Unknown => {}
            }
        }
        let d = oracle.max_next_digit(&prefix_of(&digits));
        assert!(d <= 9, "oracle produced digit {d}");
        digits.push(d);
    }
    let run = digits.iter().rev().take_while(|d| **d == 9).count();
    if run >= window {
        return Err(Error::NineTailUndetectable {
            index: digits.len() - run + 1,
        });
    }
    let stream = Walk {
        oracle,
        negative,
        int_part: int_part.clone(),
        digits: Mutex::new(digits),
    };
    Ok(DigitOracle::checked_stream(negative, int_part, stream, window).into())
}

/// Digits selected on demand, continuing an already walked prefix.
struct Walk {
    oracle: Arc<dyn PrefixMaxOracle>,
    negative: bool,
    int_part: BigUint,
    digits: Mutex<Vec<u8>>,
}

impl crate::realnum::DigitStream for Walk {
    fn digit(&self, index: usize) -> u8 {
        let mut digits = self.digits.lock().expect("walk state poisoned");
        while digits.len() < index {
            let prefix = DigitPrefix::new(self.negative, self.int_part.clone(), digits.clone());
            let d = self.oracle.max_next_digit(&prefix);
            assert!(d <= 9, "oracle produced digit {d}");
            digits.push(d);
        }
        digits[index - 1]
    }
}

/// Result of testing a candidate upper bound.
#[derive(Clone, Debug, PartialEq)]
pub enum UpperBound {
    Yes,
    /// A member exceeding the candidate.
    No(RealNumber),
    Undecided,
}

/// Whether every member of `s` is at most `b`, examining at most `budget`
/// digits per comparison and walking at most `budget` digits to find a
/// witness.
pub fn is_upper_bound(b: &RealNumber, s: &BoundedSet, budget: usize) -> UpperBound {
    match s {
        BoundedSet::Finite(members) => {
            let mut undecided = false;
            for m in members {
                match compare(m, b, budget) {
                    Comparison::Greater => return UpperBound::No(m.clone()),
                    Comparison::Undecided => undecided = true,
                    _ => {}
                }
            }
            if undecided {
                UpperBound::Undecided
            } else {
                UpperBound::Yes
            }
        }
        BoundedSet::Family { oracle, upper_bound } => {
            if compare(&upper_bound.clone().into(), b, budget).ordering().is_some_and(|o| o.is_le()) {
                return UpperBound::Yes;
            }
            if let Ok(top) = sup_of_oracle(Arc::clone(oracle), DEFAULT_WINDOW) {
                match compare(&top, b, budget) {
                    Comparison::Less | Comparison::Equal => return UpperBound::Yes,
                    Comparison::Undecided => return UpperBound::Undecided,
                    Comparison::Greater => {}
                }
            }
            find_member_above(oracle.as_ref(), b, budget)
        }
    }
}

/// Walk the selected digits and ask for a member along each prefix; these
/// members approach the supremum, so one eventually exceeds any `b` below
/// it.
fn find_member_above(oracle: &dyn PrefixMaxOracle, b: &RealNumber, budget: usize) -> UpperBound {
    let negative = !oracle.has_nonnegative();
    let int_part = oracle.max_integral().magnitude().clone();
    let mut digits = Vec::new();
    loop {
        let prefix = DigitPrefix::new(negative, int_part.clone(), digits.clone());
        let member = oracle.member_extending(&prefix);
        if compare(&member, b, budget) == Comparison::Greater {
            return UpperBound::No(member);
        }
        if digits.len() >= budget {
            return UpperBound::Undecided;
        }
        digits.push(oracle.max_next_digit(&prefix));
    }
}

/// Outcome of checking that a value is the least upper bound.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Pass,
    /// An upper bound strictly below the candidate.
    FailLeastness(TerminatingDecimal),
    /// A member strictly above the candidate.
    FailBound(RealNumber),
}

/// Check that `s` is the supremum of `set`: it must be an upper bound, and
/// every sampled `p < s` must be exceeded by some member `q <= s`.
///
/// Sample `j` is `lo - 2^-j` where `lo` is the lower end of the
/// `(j + 1)`-digit enclosure of `s`; after those come terminating decimals
/// strictly between each sample and `s`. Samples whose status cannot be
/// settled within `budget` are skipped.
pub fn check_sup_certificate(s: &RealNumber, set: &BoundedSet, samples: usize, budget: usize) -> Certificate {
    assert!(samples >= 1, "at least one sample is required");
    if let UpperBound::No(w) = is_upper_bound(s, set, budget) {
        return Certificate::FailBound(w);
    }
    let half: TerminatingDecimal = "0.5".parse().expect("literal");
    let mut below = Vec::with_capacity(samples);
    let mut half_power = TerminatingDecimal::one();
    for j in 0..samples {
        below.push(eval(s, j + 1).lo() - &half_power);
        half_power = &half_power * &half;
    }
    let inside: Vec<TerminatingDecimal> = below
        .iter()
        .filter_map(|p| between_with_budget(&p.clone().into(), s, budget).ok())
        .collect();
    for p in below.into_iter().chain(inside) {
        match is_upper_bound(&p.clone().into(), set, budget) {
            UpperBound::Yes => return Certificate::FailLeastness(p),
            UpperBound::No(q) => {
                if compare(&q, s, budget) == Comparison::Greater {
                    return Certificate::FailBound(q);
                }
            }
            UpperBound::Undecided => {}
        }
    }
    Certificate::Pass
}

#[cfg(test)]
mod tests;

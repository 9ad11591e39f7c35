//! Reals given by a procedure rather than by a finite expansion.
//!
//! A [`DigitOracle`] is either a *stream*, a sign and integer part plus a
//! function producing fractional digits, or a *computed* value that can
//! only be enclosed to any requested width. Streams promise that their
//! digits never end in an infinite run of 9s; computed values derive digits
//! from enclosures and may fail to pin a digit that sits on a decimal
//! boundary.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arithmetic::Enclosure;
use crate::error::{Error, Result};
use crate::realnum::DigitPrefix;
use crate::terminating::{pow10, TerminatingDecimal};

/// Extra digits of refinement tried before a digit is declared unstable.
pub const REFINEMENT_BUDGET: usize = 64;

/// Fractional digits `1, 2, 3, ...` of a real's magnitude.
///
/// Implementations must be deterministic. The library calls `digit` with
/// increasing indices starting from 1 and memoizes the results.
pub trait DigitStream: Send + Sync {
    fn digit(&self, index: usize) -> u8;
}

impl<F> DigitStream for F
where
    F: Fn(usize) -> u8 + Send + Sync,
{
    fn digit(&self, index: usize) -> u8 {
        self(index)
    }
}

/// A value that can be enclosed to any precision.
pub(crate) trait Approximant: Send + Sync {
    /// An enclosure of width at most `10^(-n)`.
    fn enclose(&self, n: usize) -> Enclosure;
}

/// Bounds on a real that are open at an end when the value is known to
/// stay strictly inside.
#[derive(Clone, Debug)]
pub(crate) struct Bracket {
    pub lo: TerminatingDecimal,
    pub hi: TerminatingDecimal,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Bracket {
    pub fn closed(enc: Enclosure) -> Self {
        let (lo, hi) = enc.into_bounds();
        Bracket {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn point(t: TerminatingDecimal) -> Self {
        Bracket::closed(Enclosure::point(t))
    }

    /// Bounds of a canonical expansion from its `n`-digit truncation: the
    /// tail after a truncation is strictly less than one unit in the last
    /// place, because it is not all 9s.
    pub fn from_prefix(prefix: &DigitPrefix) -> Self {
        let t = prefix.to_terminating();
        let unit = TerminatingDecimal::unit(prefix.digits().len());
        if prefix.is_negative() {
            Bracket {
                lo: &t - &unit,
                hi: t,
                lo_open: true,
                hi_open: false,
            }
        } else {
            Bracket {
                hi: &t + &unit,
                lo: t,
                lo_open: false,
                hi_open: true,
            }
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi && !self.lo_open && !self.hi_open
    }

    /// True when every point of `self` is strictly below every point of
    /// `other`.
    pub fn below(&self, other: &Bracket) -> bool {
        self.hi < other.lo || (self.hi == other.lo && (self.hi_open || other.lo_open))
    }
}

enum Source {
    Stream {
        negative: bool,
        int_part: BigUint,
        digits: Arc<dyn DigitStream>,
        window: Option<usize>,
    },
    Computed(Box<dyn Approximant>),
}

#[derive(Default)]
struct State {
    /// Stream: memoized digits. Computed: digits of the longest pinned
    /// prefix.
    digits: Vec<u8>,
    /// Computed only: sign and integer part once pinned.
    head: Option<(bool, BigUint)>,
    /// Computed only: tightest enclosure so far and its precision.
    best: Option<(usize, Enclosure)>,
}

struct Inner {
    source: Source,
    state: Mutex<State>,
}

/// A real presented by a digit procedure or by refinable enclosures.
///
/// Clones share memoized state; concurrent queries return identical digits.
#[derive(Clone)]
pub struct DigitOracle(Arc<Inner>);

impl DigitOracle {
    /// `±int_part.d1 d2 d3 ...` with `digits(i)` giving `d_i`.
    ///
    /// The caller promises the stream never ends in all 9s. A stream of all
    /// zeros with `negative` set denotes zero.
    pub fn stream(negative: bool, int_part: impl Into<BigUint>, digits: impl DigitStream + 'static) -> Self {
        Self::from_source(Source::Stream {
            negative,
            int_part: int_part.into(),
            digits: Arc::new(digits),
            window: None,
        })
    }

    /// Like [`DigitOracle::stream`], but digit queries look ahead past any
    /// run of 9s and fail with `CanonicalViolation` when the run is still
    /// going after `window` more digits.
    pub fn checked_stream(
        negative: bool,
        int_part: impl Into<BigUint>,
        digits: impl DigitStream + 'static,
        window: usize,
    ) -> Self {
        Self::from_source(Source::Stream {
            negative,
            int_part: int_part.into(),
            digits: Arc::new(digits),
            window: Some(window),
        })
    }

    pub(crate) fn computed(source: impl Approximant + 'static) -> Self {
        Self::from_source(Source::Computed(Box::new(source)))
    }

    fn from_source(source: Source) -> Self {
        DigitOracle(Arc::new(Inner {
            source,
            state: Mutex::new(State::default()),
        }))
    }

    pub fn ptr_eq(&self, other: &DigitOracle) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_stream(&self) -> bool {
        matches!(self.0.source, Source::Stream { .. })
    }

    /// The same stream with the sign flipped, or `None` for computed values.
    pub(crate) fn negated_stream(&self) -> Option<DigitOracle> {
        match &self.0.source {
            Source::Stream {
                negative,
                int_part,
                digits,
                window,
            } => Some(Self::from_source(Source::Stream {
                negative: !negative,
                int_part: int_part.clone(),
                digits: Arc::clone(digits),
                window: *window,
            })),
            Source::Computed(_) => None,
        }
    }

    fn stream_digits(&self, n: usize) -> Vec<u8> {
        let Source::Stream { digits, .. } = &self.0.source else {
            unreachable!("stream source")
        };
        let mut state = self.0.state.lock().expect("oracle state poisoned");
        while state.digits.len() < n {
            let i = state.digits.len() + 1;
            let d = digits.digit(i);
            assert!(d <= 9, "digit stream produced {d} at index {i}");
            state.digits.push(d);
        }
        state.digits[..n].to_vec()
    }

    /// Enclosure of width at most `10^(-n)`.
    pub fn enclosure(&self, n: usize) -> Enclosure {
        match &self.0.source {
            Source::Stream { negative, int_part, .. } => {
                let prefix = DigitPrefix::new(*negative, int_part.clone(), self.stream_digits(n));
                let b = Bracket::from_prefix(&prefix);
                Enclosure::new(b.lo, b.hi)
            }
            Source::Computed(src) => {
                {
                    let state = self.0.state.lock().expect("oracle state poisoned");
                    if let Some((p, enc)) = &state.best {
                        if *p >= n {
                            return enc.clone();
                        }
                    }
                }
                let fresh = src.enclose(n);
                let mut state = self.0.state.lock().expect("oracle state poisoned");
                // Intersecting keeps successive answers nested.
                let enc = match &state.best {
                    Some((_, old)) => old.intersect(&fresh).unwrap_or(fresh),
                    None => fresh,
                };
                if state.best.as_ref().is_none_or(|(p, _)| *p < n) {
                    state.best = Some((n, enc.clone()));
                }
                enc
            }
        }
    }

    pub(crate) fn bracket(&self, n: usize) -> Bracket {
        match &self.0.source {
            Source::Stream { negative, int_part, .. } => {
                Bracket::from_prefix(&DigitPrefix::new(*negative, int_part.clone(), self.stream_digits(n)))
            }
            Source::Computed(_) => Bracket::closed(self.enclosure(n)),
        }
    }

    /// Sign, integer part and first `n` fractional digits.
    pub fn prefix(&self, n: usize) -> Result<DigitPrefix> {
        match &self.0.source {
            Source::Stream {
                negative,
                int_part,
                window,
                ..
            } => {
                if let Some(window) = *window {
                    self.check_nine_run(n, window)?;
                }
                Ok(DigitPrefix::new(*negative, int_part.clone(), self.stream_digits(n)))
            }
            Source::Computed(_) => self.pinned_prefix(n),
        }
    }

    fn check_nine_run(&self, n: usize, window: usize) -> Result<()> {
        let digits = self.stream_digits(n + window);
        if n == 0 || digits[n - 1] != 9 {
            return Ok(());
        }
        if digits[n..].iter().any(|d| *d != 9) {
            return Ok(());
        }
        let start = digits[..n].iter().rposition(|d| *d != 9).map_or(1, |i| i + 2);
        Err(Error::CanonicalViolation { index: start, window })
    }

    fn pinned_prefix(&self, n: usize) -> Result<DigitPrefix> {
        {
            let state = self.0.state.lock().expect("oracle state poisoned");
            if let Some((negative, int_part)) = &state.head {
                if state.digits.len() >= n {
                    return Ok(DigitPrefix::new(*negative, int_part.clone(), state.digits[..n].to_vec()));
                }
            }
        }
        let mut extra = 1;
        loop {
            let enc = self.enclosure(n + extra);
            if let Some(prefix) = pin(&enc, n) {
                let mut state = self.0.state.lock().expect("oracle state poisoned");
                if state.digits.len() < n || state.head.is_none() {
                    state.head = Some((prefix.is_negative(), prefix.int_part().clone()));
                    state.digits = prefix.digits().to_vec();
                }
                return Ok(prefix);
            }
            if extra >= REFINEMENT_BUDGET {
                return Err(Error::DigitsUnstable {
                    index: n,
                    budget: REFINEMENT_BUDGET,
                });
            }
            extra = (extra * 2).min(REFINEMENT_BUDGET);
        }
    }

    pub fn digit_at(&self, i: usize) -> Result<u8> {
        assert!(i >= 1, "digit positions start at 1");
        Ok(self.prefix(i)?.digits()[i - 1])
    }
}

/// The `n`-digit canonical prefix shared by every point of `enc`, if there
/// is one.
fn pin(enc: &Enclosure, n: usize) -> Option<DigitPrefix> {
    let scaled_floor = |t: &TerminatingDecimal| t.floor_scaled(n);
    let (negative, a, b) = if !enc.lo().is_negative() {
        (false, scaled_floor(enc.lo()), scaled_floor(enc.hi()))
    } else if enc.hi().is_negative() {
        (true, scaled_floor(&-enc.hi()), scaled_floor(&-enc.lo()))
    } else {
        return None;
    };
    if a != b {
        return None;
    }
    let (int_part, frac) = a.magnitude().div_rem(&pow10(n));
    let mut digits = vec![0u8; n];
    let mut rest = frac;
    for slot in digits.iter_mut().rev() {
        let (q, r) = rest.div_rem(&BigUint::from(10u32));
        *slot = r.to_u8().expect("decimal digit");
        rest = q;
    }
    debug_assert!(rest.is_zero());
    Some(DigitPrefix::new(negative, int_part, digits))
}

impl fmt::Debug for DigitOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.source {
            Source::Stream { negative, int_part, .. } => {
                write!(f, "DigitOracle(stream {}{int_part}.…)", if *negative { "-" } else { "" })
            }
            Source::Computed(_) => f.write_str("DigitOracle(computed)"),
        }
    }
}

//! Real numbers as canonical infinite decimals.
//!
//! * [`terminating`]: exact finite decimals.
//! * [`realnum`]: terminating, periodic and oracle-given reals with
//!   budgeted order, sign and density queries.
//! * [`supremum`]: least upper bounds by digit selection.
//! * [`arithmetic`]: field operations with guaranteed enclosures.
//! * [`rationals`]: fractions, long division and digit extraction.
//! * [`cli`]: the `decireal` command line.

pub mod arithmetic;
pub mod cli;
pub mod error;
pub mod rationals;
pub mod realnum;
pub mod supremum;
pub mod terminating;

pub use arithmetic::{add, eval, mul, neg, reciprocal, sqrt, Enclosure};
pub use error::{Error, Result};
pub use rationals::Rational;
pub use realnum::{compare, Comparison, DigitOracle, DigitPrefix, RealNumber, SignClass};
pub use supremum::{sup, BoundedSet};
pub use terminating::TerminatingDecimal;

//! The `decireal` command line.
//!
//! ```text
//! decireal eval EXPR [--digits N] [--enclosure]
//! decireal cmp EXPR EXPR [--budget N]
//! decireal between EXPR EXPR [--budget N]
//! decireal sup FILE [--digits N]
//! decireal rep P/Q [--digits N]
//! ```
//!
//! Exit status: 0 on success, 1 for malformed input or I/O failures, 2 when
//! digits could not be pinned (the enclosure is printed instead), 3 when a
//! comparison is undecided.

use std::fmt::Display;
use std::io::Write;

use clap::{Parser, Subcommand};

use crate::arithmetic::{self, eval};
use crate::error::{Error, Result};
use crate::rationals::{self, Rational};
use crate::realnum::{self, compare, parse_real, Comparison, RealNumber};
use crate::supremum::{self, family_by_name, BoundedSet};

const DEFAULT_DIGITS: usize = 30;

#[derive(Parser, Debug)]
#[command(name = "decireal", version, about = "Exact real numbers as canonical infinite decimals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression to N fractional digits.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: usize,
        /// Print an enclosure `[lo, hi]` of width at most 10^-N instead.
        #[arg(long)]
        enclosure: bool,
    },
    /// Compare two expressions.
    Cmp {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[arg(long, default_value_t = realnum::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// A terminating decimal strictly between two expressions.
    Between {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[arg(long, default_value_t = realnum::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Supremum of the set described by a set file.
    Sup {
        file: String,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: usize,
    },
    /// Digits of a fraction by the repeated integral-part recurrence.
    Rep {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: usize,
    },
}

/// Run the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(err, "{}", line.trim_start_matches("error: "));
            return 1;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Box<dyn Display>> {
    let wrap = |e: Error| -> Box<dyn Display> { Box::new(e) };
    match command {
        Command::Eval {
            expr,
            digits,
            enclosure,
        } => {
            let x = parse_expression(&expr).map_err(wrap)?;
            if enclosure {
                emit(out, eval(&x, digits))?;
                return Ok(0);
            }
            print_value(&x, digits, out, err)
        }
        Command::Cmp { left, right, budget } => {
            let x = parse_expression(&left).map_err(wrap)?;
            let y = parse_expression(&right).map_err(wrap)?;
            let (symbol, code) = match compare(&x, &y, budget) {
                Comparison::Less => ("<", 0),
                Comparison::Equal => ("=", 0),
                Comparison::Greater => (">", 0),
                Comparison::Undecided => ("undecided", 3),
            };
            emit(out, symbol)?;
            Ok(code)
        }
        Command::Between { left, right, budget } => {
            let x = parse_expression(&left).map_err(wrap)?;
            let y = parse_expression(&right).map_err(wrap)?;
            let c = realnum::between_with_budget(&x, &y, budget).map_err(wrap)?;
            emit(out, c)?;
            Ok(0)
        }
        Command::Sup { file, digits } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| -> Box<dyn Display> { Box::new(format!("cannot read {file}: {e}")) })?;
            let set = parse_set_file(&text).map_err(wrap)?;
            match supremum::sup(&set) {
                Ok(s) => print_value(&s, digits, out, err),
                Err(e @ Error::NineTailUndetectable { .. }) => {
                    let _ = writeln!(err, "{e}");
                    Ok(2)
                }
                Err(e) => Err(wrap(e)),
            }
        }
        Command::Rep { fraction, digits } => {
            let q: Rational = fraction.trim().parse().map_err(wrap)?;
            emit(out, rationals::decimal_representation(&rationals::to_decimal(&q), digits))?;
            Ok(0)
        }
    }
}

fn emit(out: &mut dyn Write, value: impl Display) -> Result<(), Box<dyn Display>> {
    writeln!(out, "{value}").map_err(|e| -> Box<dyn Display> { Box::new(format!("write failed: {e}")) })
}

/// Terminating values with at most `digits` fractional digits print in
/// full; anything else prints its `digits`-digit truncation. Digits that
/// cannot be pinned fall back to the enclosure with exit status 2.
fn print_value(x: &RealNumber, digits: usize, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Box<dyn Display>> {
    if let Some(t) = x.as_terminating() {
        if t.scale() <= digits {
            emit(out, t)?;
            return Ok(0);
        }
    }
    match x.prefix(digits) {
        Ok(prefix) => {
            emit(out, prefix)?;
            Ok(0)
        }
        Err(e @ (Error::DigitsUnstable { .. } | Error::CanonicalViolation { .. })) => {
            emit(out, eval(x, digits))?;
            let _ = writeln!(err, "{e}");
            Ok(2)
        }
        Err(e) => Err(Box::new(e)),
    }
}

/// A set file is either a header `# family: <name>` naming a built-in
/// family, or one expression per line. Blank lines and other `#` lines are
/// ignored.
pub fn parse_set_file(text: &str) -> Result<BoundedSet> {
    let mut members = Vec::new();
    for line in text.lines().map(str::trim) {
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(name) = comment.trim().strip_prefix("family:") {
                return family_by_name(name);
            }
            continue;
        }
        if !line.is_empty() {
            members.push(parse_expression(line)?);
        }
    }
    if members.is_empty() {
        return Err(Error::MalformedLiteral {
            literal: String::new(),
            reason: "set file has no members",
        });
    }
    Ok(BoundedSet::finite(members))
}

/// Parse and evaluate an expression:
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := factor (('*' | '/') factor)*
/// factor := '-'? (literal | 'sqrt(' expr ')' | '(' expr ')')
/// ```
///
/// Literals follow the real literal grammar, so `0.1(6)` is a periodic
/// literal while `2*(3)` is a parenthesized factor.
pub fn parse_expression(text: &str) -> Result<RealNumber> {
    let mut p = ExprParser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let value = p.expr()?;
    p.skip_space();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct ExprParser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, reason: &'static str) -> Error {
        Error::MalformedLiteral {
            literal: self.text.to_string(),
            reason,
        }
    }

    fn skip_space(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_space();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8, reason: &'static str) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(reason))
        }
    }

    fn expr(&mut self) -> Result<RealNumber> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = arithmetic::add(&acc, &self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = arithmetic::sub(&acc, &self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RealNumber> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = arithmetic::mul(&acc, &self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = arithmetic::div(&acc, &self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RealNumber> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(arithmetic::neg(&self.unsigned_factor()?));
        }
        self.unsigned_factor()
    }

    fn unsigned_factor(&mut self) -> Result<RealNumber> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')', "unbalanced parenthesis")?;
                Ok(inner)
            }
            Some(b's') => {
                if !self.text[self.pos..].starts_with("sqrt") {
                    return Err(self.error("unknown function"));
                }
                self.pos += 4;
                self.expect(b'(', "expected `(` after sqrt")?;
                let inner = self.expr()?;
                self.expect(b')', "unbalanced parenthesis")?;
                arithmetic::sqrt(&inner)
            }
            Some(b) if b.is_ascii_digit() => self.literal(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn literal(&mut self) -> Result<RealNumber> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.bytes.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
        };
        digits(self);
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
            if self.bytes.get(self.pos) == Some(&b'(') {
                self.pos += 1;
                digits(self);
                if self.bytes.get(self.pos) != Some(&b')') {
                    return Err(self.error("unclosed period"));
                }
                self.pos += 1;
            }
        }
        parse_real(&self.text[start..self.pos])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(s: &str) -> RealNumber {
        parse_expression(s).unwrap()
    }

    #[test]
    fn expressions() {
        assert_eq!(value("1/3"), parse_real("0.(3)").unwrap());
        assert_eq!(value("0.1(6) + 0.8(3)"), parse_real("1").unwrap());
        assert_eq!(value("2*(3)"), parse_real("6").unwrap());
        assert_eq!(value("-2 * 0.(3)"), parse_real("-0.(6)").unwrap());
        assert_eq!(value("1 - 2 - 3"), parse_real("-4").unwrap());
        assert_eq!(value("12 / 2 / 3"), parse_real("2").unwrap());
        assert_eq!(value("-(-1)"), parse_real("1").unwrap());
        assert_eq!(value("sqrt(0.25) + 1"), parse_real("1.5").unwrap());
        assert_eq!(value(" ( 1 + 2 ) * 3 "), parse_real("9").unwrap());
    }

    #[test]
    fn malformed_expressions() {
        for bad in ["", "1 +", "(1", "1)", "sqr(2)", "1..2", "0.(3", "1/0", "sqrt(-1)", "x", "1 2", "01", "--1"] {
            assert!(parse_expression(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn set_files() {
        let set = parse_set_file("# a comment\n0.5\n\n1/3\n").unwrap();
        assert!(matches!(set, BoundedSet::Finite(ref m) if m.len() == 2));
        assert!(matches!(parse_set_file("# family: paper-B\n"), Ok(BoundedSet::Family { .. })));
        assert!(parse_set_file("# family: nothing\n").is_err());
        assert!(parse_set_file("# empty\n").is_err());
    }
}

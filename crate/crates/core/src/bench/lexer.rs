use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use super::{ErrorKind, ParseError, Span};
use crate::scalar::Real;

/// Numeric literal. Multiples of π are kept symbolic so they format back
/// unchanged and evaluate to the nearest double where a constant exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Number {
    Decimal(f64),
    /// `num·π/den`, reduced, `den > 0`.
    PiMultiple { num: i64, den: u64 },
}

impl Number {
    pub fn pi_multiple(num: i64, den: u64) -> Option<Number> {
        if den == 0 {
            return None;
        }
        let g = num.unsigned_abs().gcd(&den).max(1);
        Some(Number::PiMultiple {
            num: num / g as i64,
            den: den / g,
        })
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Number::Decimal(x) => x,
            Number::PiMultiple { num, den } => {
                let exact = match (num.abs(), den) {
                    (0, _) => Some(0.0),
                    (1, 1) => Some(PI),
                    (2, 1) => Some(TAU),
                    (1, 2) => Some(FRAC_PI_2),
                    (1, 3) => Some(FRAC_PI_3),
                    (1, 4) => Some(FRAC_PI_4),
                    (1, 6) => Some(FRAC_PI_6),
                    (1, 8) => Some(FRAC_PI_8),
                    _ => None,
                };
                match exact {
                    Some(x) if num < 0 => -x,
                    Some(x) => x,
                    None => num as f64 * PI / den as f64,
                }
            }
        }
    }

    pub fn value<T: Real>(self) -> T {
        T::lit(self.to_f64())
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Number::Decimal(x) => write!(f, "{x}"),
            Number::PiMultiple { num, den } => {
                match num {
                    1 => f.write_str("pi")?,
                    -1 => f.write_str("-pi")?,
                    k => write!(f, "{k}pi")?,
                }
                if den != 1 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Number {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(at) = s.find("pi") {
            let (coef, rest) = (&s[..at], &s[at + 2..]);
            let num: i64 = match coef {
                "" => 1,
                "-" => -1,
                c => c
                    .parse()
                    .map_err(|_| format!("bad multiplier {c:?} in angle literal {s:?}"))?,
            };
            let den: u64 = match rest {
                "" => 1,
                r => r
                    .strip_prefix('/')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| format!("bad denominator in angle literal {s:?}"))?,
            };
            return Number::pi_multiple(num, den)
                .ok_or_else(|| format!("zero denominator in angle literal {s:?}"));
        }
        let plausible = s
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
            && s.chars().any(|c| c.is_ascii_digit());
        match s.parse::<f64>() {
            Ok(x) if plausible && x.is_finite() => Ok(Number::Decimal(x)),
            _ => Err(format!("malformed number {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Token<'a> {
    pub text: &'a str,
    pub span: Span,
}

fn allowed(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '/' | '=' | '+' | '-')
}

/// Splits one line into whitespace-separated tokens, stopping at `#`.
pub(super) fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token<'_>>, ParseError> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None; // (byte offset, column)
    for (col0, (byte, c)) in line.char_indices().enumerate() {
        let column = col0 + 1;
        if c == '#' || c.is_whitespace() {
            if let Some((b, col)) = start.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    span: Span { line: line_no, column: col },
                });
            }
            if c == '#' {
                return Ok(tokens);
            }
            continue;
        }
        if !allowed(c) {
            return Err(ParseError::new(
                ErrorKind::Lex,
                Span { line: line_no, column },
                format!("unexpected character {c:?}"),
            ));
        }
        if start.is_none() {
            start = Some((byte, column));
        }
    }
    if let Some((b, col)) = start {
        tokens.push(Token {
            text: &line[b..],
            span: Span { line: line_no, column: col },
        });
    }
    Ok(tokens)
}

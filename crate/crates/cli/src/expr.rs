//! The function expression language.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := rational | "ind" "{" wordlist "}" | "g" "[" word "]"
//!         | "g" "^" integer | "(" expr ")"
//! rational := integer ["/" positive-integer]
//! ```
//!
//! Word literals are kept as text and resolved against a graph only when
//! the expression is evaluated.

use std::collections::BTreeSet;
use std::fmt;

use graph_measure::rational::one;
use graph_measure::{
    g_w, monomial, parse_diagram, parse_rational, parse_word, Diagram, Error as CoreError, ExtendedFunction,
    MeasureContext, Rational, SimpleFunction, WordSupport,
};
use thiserror::Error;

/// 1-based character column in the expression text.
pub type Column = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Constant { value: Rational, at: Column },
    Indicator { words: Vec<String>, at: Column },
    Neighborhood { word: String, at: Column },
    Monomial { power: i64, at: Column },
    Sum(Box<Expr>, Box<Expr>),
    Difference(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn column(&self) -> Column {
        match self {
            Expr::Constant { at, .. }
            | Expr::Indicator { at, .. }
            | Expr::Neighborhood { at, .. }
            | Expr::Monomial { at, .. } => *at,
            Expr::Sum(a, _) | Expr::Difference(a, _) | Expr::Product(a, _) => a.column(),
        }
    }

    /// Words `w` of every `g[w]` in the expression, left to right.
    pub fn neighborhood_words(&self) -> Vec<&str> {
        match self {
            Expr::Neighborhood { word, .. } => vec![word.as_str()],
            Expr::Sum(a, b) | Expr::Difference(a, b) | Expr::Product(a, b) => {
                let mut out = a.neighborhood_words();
                out.extend(b.neighborhood_words());
                out
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized, so the output re-parses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant { value, .. } => {
                if value.is_integer() {
                    write!(f, "{}", value.numer())
                } else {
                    write!(f, "{}/{}", value.numer(), value.denom())
                }
            }
            Expr::Indicator { words, .. } => write!(f, "ind{{{}}}", words.join(", ")),
            Expr::Neighborhood { word, .. } => write!(f, "g[{word}]"),
            Expr::Monomial { power, .. } => write!(f, "g^{power}"),
            Expr::Sum(a, b) => write!(f, "({a} + {b})"),
            Expr::Difference(a, b) => write!(f, "({a} - {b})"),
            Expr::Product(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub column: Column,
    pub expected: String,
    pub found: String,
}

pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("an operator or end of input"));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> Column {
        self.pos + 1
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.chars.get(self.pos) {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        ParseError {
            column: self.column(),
            expected: expected.to_string(),
            found,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    left = Expr::Sum(Box::new(left), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    left = Expr::Difference(Box::new(left), Box::new(self.term()?));
                }
                _ => return Ok(left),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            left = Expr::Product(Box::new(left), Box::new(self.factor()?));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let at = match self.peek() {
            Some(_) => self.column(),
            None => return Err(self.error("a factor")),
        };
        let rest: String = self.chars[self.pos..].iter().collect();
        if rest.starts_with("ind") {
            self.pos += 3;
            self.expect('{')?;
            let inner = self.until('}')?;
            let words = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|w| w.trim().to_string()).collect()
            };
            return Ok(Expr::Indicator { words, at });
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('g') => {
                self.pos += 1;
                match self.peek() {
                    Some('[') => {
                        self.pos += 1;
                        let word = self.until(']')?.trim().to_string();
                        Ok(Expr::Neighborhood { word, at })
                    }
                    Some('^') => {
                        self.pos += 1;
                        let exponent_at = self.column();
                        let power: i64 = self.integer()?.parse().map_err(|_| ParseError {
                            column: exponent_at,
                            expected: "an exponent that fits in 64 bits".into(),
                            found: "a larger integer".into(),
                        })?;
                        if power == 0 {
                            return Err(ParseError {
                                column: exponent_at,
                                expected: "a nonzero exponent (use 1 for the constant function)".into(),
                                found: "`0`".into(),
                            });
                        }
                        Ok(Expr::Monomial { power, at })
                    }
                    _ => Err(self.error("`[` or `^` after `g`")),
                }
            }
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' => {
                let mut text = self.integer()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let denom_at = self.pos;
                    let denom = self.digits()?;
                    if denom.bytes().all(|b| b == b'0') {
                        self.pos = denom_at;
                        return Err(self.error("a positive denominator"));
                    }
                    text = format!("{text}/{denom}");
                }
                let value = parse_rational(&text).expect("validated digits");
                Ok(Expr::Constant { value, at })
            }
            _ => Err(self.error("a number, `ind{...}`, `g[...]`, `g^n` or `(`")),
        }
    }

    /// Raw text up to the closing delimiter, which is consumed.
    fn until(&mut self, close: char) -> Result<String, ParseError> {
        let start = self.pos;
        while let Some(&c) = self.chars.get(self.pos) {
            if c == close {
                self.pos += 1;
                return Ok(self.chars[start..self.pos - 1].iter().collect());
            }
            self.pos += 1;
        }
        Err(self.error(&format!("`{close}`")))
    }

    /// An optionally signed run of digits, returned as text.
    fn integer(&mut self) -> Result<String, ParseError> {
        let negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let n = self.digits()?;
        Ok(if negative { format!("-{n}") } else { n })
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("digits"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

fn constant(ctx: &MeasureContext, c: &Rational) -> SimpleFunction<Diagram> {
    SimpleFunction::term(c.clone(), ctx.reduced().to_set())
}

fn indicator(ctx: &MeasureContext, words: &[String]) -> Result<SimpleFunction<Diagram>, CoreError> {
    let set = words
        .iter()
        .map(|w| parse_diagram(ctx.graph(), w))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(SimpleFunction::indicator(set))
}

/// Evaluates to a simple function on the context's diagram domain.
/// Constants are multiples of the indicator of the whole domain.
pub fn evaluate(ctx: &MeasureContext, e: &Expr) -> Result<SimpleFunction<Diagram>, CoreError> {
    Ok(match e {
        Expr::Constant { value, .. } => constant(ctx, value),
        Expr::Indicator { words, .. } => indicator(ctx, words)?,
        Expr::Neighborhood { word, .. } => g_w(ctx, &parse_word(ctx.graph(), word)?)?,
        Expr::Monomial { power, .. } => monomial(ctx, *power)?,
        Expr::Sum(a, b) => evaluate(ctx, a)?.add(&evaluate(ctx, b)?),
        Expr::Difference(a, b) => evaluate(ctx, a)?.sub(&evaluate(ctx, b)?),
        Expr::Product(a, b) => match (a.as_ref(), b.as_ref()) {
            // Scalar multiples keep the other factor's representation.
            (Expr::Constant { value, .. }, other) | (other, Expr::Constant { value, .. }) => {
                evaluate(ctx, other)?.scale(value)
            }
            _ => evaluate(ctx, a)?.product(&evaluate(ctx, b)?),
        },
    })
}

/// Evaluates to a function on words for the extended measure. Supported:
/// `ind{...}` of explicit words, `g[w]` neighborhoods, sums, differences and
/// scalar multiples.
pub fn evaluate_extended(ctx: &MeasureContext, e: &Expr) -> Result<ExtendedFunction, CoreError> {
    let unsupported = |what: &str| {
        CoreError::InvalidArgument(format!(
            "{what} at column {} has no finite extended integral; use ind{{...}}, g[w], sums and scalar multiples",
            e.column()
        ))
    };
    Ok(match e {
        Expr::Indicator { words, .. } => {
            let set = words
                .iter()
                .map(|w| parse_word(ctx.graph(), w))
                .collect::<Result<BTreeSet<_>, _>>()?;
            ExtendedFunction::term(one(), WordSupport::Explicit(set))
        }
        Expr::Neighborhood { word, .. } => {
            ExtendedFunction::term(one(), WordSupport::Neighborhood(parse_word(ctx.graph(), word)?))
        }
        Expr::Sum(a, b) => evaluate_extended(ctx, a)?.add(&evaluate_extended(ctx, b)?),
        Expr::Difference(a, b) => evaluate_extended(ctx, a)?.add(&evaluate_extended(ctx, b)?.scale(&-one())),
        Expr::Product(a, b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Constant { value, .. }, other) | (other, Expr::Constant { value, .. }) => {
                evaluate_extended(ctx, other)?.scale(value)
            }
            _ => return Err(unsupported("a product of functions")),
        },
        Expr::Constant { .. } => return Err(unsupported("a constant function")),
        Expr::Monomial { .. } => return Err(unsupported("a monomial")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_productions() {
        assert_eq!(
            parse_expression("g[v1]").unwrap(),
            Expr::Neighborhood {
                word: "v1".into(),
                at: 1
            }
        );
        assert_eq!(parse_expression("g^-3").unwrap(), Expr::Monomial { power: -3, at: 1 });
        assert!(matches!(parse_expression(" 1 ").unwrap(), Expr::Constant { at: 2, .. }));
    }

    #[test]
    fn precedence_and_positions() {
        let e = parse_expression("1/3*ind{v1,e1.e2.e3} + g^2").unwrap();
        let Expr::Sum(left, right) = &e else { panic!("{e:?}") };
        let Expr::Product(c, ind) = left.as_ref() else {
            panic!("{left:?}")
        };
        assert!(matches!(c.as_ref(), Expr::Constant { at: 1, .. }));
        assert_eq!(
            ind.as_ref(),
            &Expr::Indicator {
                words: vec!["v1".into(), "e1.e2.e3".into()],
                at: 5
            }
        );
        assert_eq!(right.as_ref(), &Expr::Monomial { power: 2, at: 24 });
        let e = parse_expression("2 - g[v1] - g[v2]").unwrap();
        assert_eq!(e.to_string(), "((2 - g[v1]) - g[v2])");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expression("g^0").unwrap_err();
        assert_eq!(err.column, 3);
        let err = parse_expression("g[v1] +").unwrap_err();
        assert_eq!((err.column, err.found.as_str()), (8, "end of input"));
        let err = parse_expression("g(v1)").unwrap_err();
        assert_eq!(err.column, 2);
        let err = parse_expression("1/0").unwrap_err();
        assert_eq!(err.column, 3);
        let err = parse_expression("ind{v1").unwrap_err();
        assert_eq!(err.expected, "`}`");
        assert!(parse_expression("(g[v1]").is_err());
        assert!(parse_expression("g[v1] g[v2]").is_err());
        assert!(parse_expression("").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "1/3*ind{v1, e1.e2.e3} + g^2",
            "-2 * (g[e1] - ind{})",
            "g^-1 * g[v2] + 5",
        ] {
            let e = parse_expression(text).unwrap();
            let again = parse_expression(&e.to_string()).unwrap();
            assert_eq!(again.to_string(), e.to_string());
        }
    }
}

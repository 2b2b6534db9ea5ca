//! Exact expressions in `z`: `+ - * / ^`, parentheses, integer and decimal
//! literals. Exponents are non-negative integer literals.

use nfold::diffalg::{Rational, Rde, Var};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    /// 1-based character column in the source string.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Z,
    Op(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

pub fn parse_expr(src: &str) -> Result<Rde, ExprError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let value = p.sum()?;
    match p.peek() {
        (Tok::End, _) => Ok(value),
        (t, col) => Err(ExprError { column: col, message: format!("unexpected {}", describe(&t)) }),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(r) => format!("number {r}"),
        Tok::Z => "'z'".into(),
        Tok::Op(c) => format!("'{c}'"),
        Tok::End => "end of expression".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let r = parse_decimal(&text).ok_or_else(|| ExprError { column: col, message: format!("malformed number '{text}'") })?;
            out.push((Tok::Num(r), col));
        } else if c == 'z' {
            out.push((Tok::Z, col));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(ExprError { column: col, message: format!("unexpected character '{c}'") });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

impl Parser {
    fn peek(&self) -> (Tok, usize) {
        self.toks[self.pos].clone()
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.peek();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn sum(&mut self) -> Result<Rde, ExprError> {
        let mut acc = self.product()?;
        while let (Tok::Op(c @ ('+' | '-')), _) = self.peek() {
            self.bump();
            let rhs = self.product()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Rde, ExprError> {
        let mut acc = self.unary()?;
        while let (Tok::Op(c @ ('*' | '/')), col) = self.peek() {
            self.bump();
            let rhs = self.unary()?;
            acc = if c == '*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs).map_err(|_| ExprError { column: col, message: "division by zero".into() })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Rde, ExprError> {
        match self.peek() {
            (Tok::Op('-'), _) => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            (Tok::Op('+'), _) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Rde, ExprError> {
        let base = self.atom()?;
        if let (Tok::Op('^'), _) = self.peek() {
            self.bump();
            let (t, col) = self.bump();
            let bad = || ExprError { column: col, message: "exponent must be a non-negative integer literal".into() };
            let Tok::Num(r) = t else { return Err(bad()) };
            if !r.is_integer() {
                return Err(bad());
            }
            let e: u32 = r.to_integer().try_into().map_err(|_| bad())?;
            if let (Tok::Op('^'), col) = self.peek() {
                return Err(ExprError { column: col, message: "chained exponents need parentheses".into() });
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Rde, ExprError> {
        match self.bump() {
            (Tok::Num(r), _) => Ok(Rde::from_rational(&r)),
            (Tok::Z, _) => Ok(Rde::var(Var::z())),
            (Tok::Op('('), col) => {
                let inner = self.sum()?;
                match self.bump() {
                    (Tok::Op(')'), _) => Ok(inner),
                    (_, c) => Err(ExprError { column: c, message: format!("unclosed '(' opened at column {col}") }),
                }
            }
            (t, col) => Err(ExprError { column: col, message: format!("expected a number, 'z' or '(' but found {}", describe(&t)) }),
        }
    }
}

/// Exact rational from `"p"`, `"p/q"` or a decimal such as `"-1.25"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let value = match body.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (parse_decimal(p.trim())?, parse_decimal(q.trim())?);
            if q == Rational::from_integer(0.into()) {
                return None;
            }
            p / q
        }
        None => parse_decimal(body)?,
    };
    Some(if neg { -value } else { value })
}

/// Unsigned decimal literal: digits with at most one point.
fn parse_decimal(text: &str) -> Option<Rational> {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    format!("{int}{frac}/1{}", "0".repeat(frac.len())).parse().ok()
}

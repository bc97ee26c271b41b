//! Text syntax for exponential iterated integrals.
//!
//! A word alternates exponents and letters, e.g. `e^(ipi*dt) dx e^(0)`.
//! Exponents are `e^(...)`; anything else is a letter. Missing exponents are
//! zero. Forms are linear combinations of `d<name>` over the algebra basis
//! with coefficients built from numbers, `i`, `pi` and `ipi`.

use solvhull::linalg::{c, CVec, C64, ONE, ZERO};
use solvhull::paths::IntegralWord;
use solvhull::{Error, Result};

#[derive(Debug, Clone)]
enum Val {
    Scalar(C64),
    Form(CVec),
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

fn err(msg: impl Into<String>) -> Error {
    Error::MalformedWord(msg.into())
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|ch| ch.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Val> {
        self.skip_ws();
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            neg(self.term()?)
        } else {
            self.term()?
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = add(acc, self.term()?)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = add(acc, neg(self.term()?))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                acc = mul(acc, self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Val> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(err("unbalanced parenthesis"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('-') => {
                self.pos += 1;
                Ok(neg(self.factor()?))
            }
            Some(ch) if ch.is_ascii_digit() || ch == '.' => self.number(),
            Some(ch) if ch.is_alphabetic() || ch == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|ch| ch.is_alphanumeric() || ch == '_' || ch == '\'') {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                match ident.as_str() {
                    "i" => Ok(Val::Scalar(c(0.0, 1.0))),
                    "pi" => Ok(Val::Scalar(c(std::f64::consts::PI, 0.0))),
                    "ipi" => Ok(Val::Scalar(c(0.0, std::f64::consts::PI))),
                    _ => {
                        let name = ident.strip_prefix('d').ok_or_else(|| err(format!("unknown symbol `{ident}`")))?;
                        let idx = self
                            .names
                            .iter()
                            .position(|n| n == name)
                            .ok_or_else(|| err(format!("no basis element `{name}` for `{ident}`")))?;
                        let mut v = CVec::zeros(self.names.len());
                        v[idx] = ONE;
                        Ok(Val::Form(v))
                    }
                }
            }
            Some(ch) => Err(err(format!("unexpected `{ch}`"))),
            None => Err(err("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<Val> {
        let start = self.pos;
        while self.peek().is_some_and(|ch| ch.is_ascii_digit() || ch == '.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some('e') | Some('E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+') | Some('-')) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                while self.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map(|x| Val::Scalar(c(x, 0.0)))
            .map_err(|_| err(format!("bad number `{text}`")))
    }
}

fn neg(v: Val) -> Val {
    match v {
        Val::Scalar(s) => Val::Scalar(-s),
        Val::Form(f) => Val::Form(-f),
    }
}

fn add(a: Val, b: Val) -> Result<Val> {
    match (a, b) {
        (Val::Form(x), Val::Form(y)) => Ok(Val::Form(x + y)),
        (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x + y)),
        (Val::Form(f), Val::Scalar(s)) | (Val::Scalar(s), Val::Form(f)) if s == ZERO => Ok(Val::Form(f)),
        _ => Err(err("cannot add a number to a form")),
    }
}

fn mul(a: Val, b: Val) -> Result<Val> {
    match (a, b) {
        (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x * y)),
        (Val::Scalar(s), Val::Form(f)) | (Val::Form(f), Val::Scalar(s)) => Ok(Val::Form(f * s)),
        _ => Err(err("product of two forms")),
    }
}

/// Parses one covector expression over `names`.
pub fn parse_form(text: &str, names: &[String]) -> Result<CVec> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, names };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(err(format!("trailing input in `{text}`")));
    }
    match v {
        Val::Form(f) => Ok(f),
        Val::Scalar(s) if s == ZERO => Ok(CVec::zeros(names.len())),
        Val::Scalar(_) => Err(err(format!("`{text}` is a number, not a form"))),
    }
}

/// Splits on whitespace outside parentheses.
fn tokens(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(err("unbalanced parenthesis"));
        }
        if ch.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(err("unbalanced parenthesis"));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

pub fn parse_integral_word(text: &str, names: &[String]) -> Result<IntegralWord> {
    let toks = tokens(text)?;
    if toks.is_empty() {
        return Err(err("empty word"));
    }
    let n = names.len();
    let mut exponents = Vec::new();
    let mut letters = Vec::new();
    let mut expect_exponent = true;
    for tok in toks {
        if let Some(body) = tok.strip_prefix("e^") {
            if !expect_exponent {
                return Err(err("two exponents in a row"));
            }
            exponents.push(parse_form(body, names)?);
            expect_exponent = false;
        } else {
            if expect_exponent {
                exponents.push(CVec::zeros(n));
            }
            letters.push(parse_form(&tok, names)?);
            expect_exponent = true;
        }
    }
    if expect_exponent {
        exponents.push(CVec::zeros(n));
    }
    IntegralWord::new(exponents, letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn names() -> Vec<String> {
        vec!["t".into(), "x".into(), "y".into()]
    }

    #[test]
    fn exponent_letter_exponent() {
        let w = parse_integral_word("e^(ipi*dt) dx e^(0)", &names()).unwrap();
        assert_eq!(w.exponents.len(), 2);
        assert_eq!(w.exponents[0], CVec::from_vec(vec![c(0.0, PI), ZERO, ZERO]));
        assert_eq!(w.letters[0], CVec::from_vec(vec![ZERO, ONE, ZERO]));
        assert_eq!(w.exponents[1], CVec::zeros(3));
    }

    #[test]
    fn missing_exponents_default_to_zero() {
        let w = parse_integral_word("dt (2*dx - i*pi*dy)", &names()).unwrap();
        assert_eq!(w.exponents.len(), 3);
        assert!(w.exponents.iter().all(|e| e.iter().all(|z| *z == ZERO)));
        assert_eq!(w.letters[1], CVec::from_vec(vec![ZERO, c(2.0, 0.0), c(0.0, -PI)]));
        let w = parse_integral_word("e^(dt)", &names()).unwrap();
        assert!(w.letters.is_empty());
        assert_eq!(parse_form("1.5e-1*dy", &names()).unwrap()[2], c(0.15, 0.0));
    }

    #[test]
    fn malformed_words_are_rejected() {
        for bad in ["", "e^(dt) e^(dx)", "dz", "(dt", "dt*dx", "3", "e^(dt"] {
            assert!(parse_integral_word(bad, &names()).is_err(), "{bad}");
        }
    }
}

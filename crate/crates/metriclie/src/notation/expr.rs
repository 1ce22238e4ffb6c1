//! A small arithmetic expression grammar over the scalar tower, used for
//! coefficient literals and parametric catalog data.
//!
//! Atoms: integers, rationals `a/b`, surds `a/b r d` (meaning `(a/b) sqrt(d)`),
//! `sqrt(d)`, float literals `0.125f`, parameter names, parentheses.
//! Operators: `+ - * /`, unary minus, integer powers with `^`.

use super::ParseError;
use crate::exactnum::Scalar;
use std::collections::BTreeMap;

pub type Params = BTreeMap<String, Scalar>;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Scalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<Token, ParseError> {
        // digits [. digits f] [/ digits] [r digits]
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        // float literal: 0.125f (the trailing `f` is required)
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.src.get(self.pos) != Some(&b'f') {
                return Err(self.error("float literal must end with `f`"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            self.pos += 1;
            let x: f64 = text.parse().map_err(|_| self.error("invalid float literal"))?;
            return Ok(Token::Number(Scalar::float(x)));
        }
        let numer: i64 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer literal out of range"))?;
        let mut denom: i64 = 1;
        if self.src.get(self.pos) == Some(&b'/') {
            // only treat as a fraction when digits follow
            if self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
                let ds = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                denom = std::str::from_utf8(&self.src[ds..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.error("integer literal out of range"))?;
                if denom == 0 {
                    return Err(self.error("zero denominator"));
                }
            }
        }
        // surd suffix: r followed by digits
        if self.src.get(self.pos) == Some(&b'r')
            && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit)
        {
            self.pos += 1;
            let ds = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let d: u32 = std::str::from_utf8(&self.src[ds..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.error("surd radicand out of range"))?;
            if d < 2 {
                return Err(self.error("surd radicand must be at least 2"));
            }
            return Ok(Token::Number(Scalar::surd(numer, denom, d)));
        }
        Ok(Token::Number(Scalar::rat(numer, denom)))
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        self.skip_ws();
        let Some(&b) = self.src.get(self.pos) else {
            return Ok(Token::End);
        };
        match b {
            b'+' => {
                self.pos += 1;
                Ok(Token::Plus)
            }
            b'-' => {
                self.pos += 1;
                Ok(Token::Minus)
            }
            b'*' => {
                self.pos += 1;
                Ok(Token::Star)
            }
            b'/' => {
                self.pos += 1;
                Ok(Token::Slash)
            }
            b'^' => {
                self.pos += 1;
                Ok(Token::Caret)
            }
            b'(' => {
                self.pos += 1;
                Ok(Token::LParen)
            }
            b')' => {
                self.pos += 1;
                Ok(Token::RParen)
            }
            b'r' if self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) => {
                // bare surd r6 = sqrt(6)
                self.pos += 1;
                let ds = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let d: u32 = std::str::from_utf8(&self.src[ds..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.error("surd radicand out of range"))?;
                if d < 2 {
                    return Err(self.error("surd radicand must be at least 2"));
                }
                Ok(Token::Number(Scalar::surd(1, 1, d)))
            }
            _ if b.is_ascii_digit() => self.number(),
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Token::Ident(
                    std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string(),
                ))
            }
            other => Err(self.error(format!("unexpected character `{}`", other as char))),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Token,
    params: &'a Params,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, params: &'a Params) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let current = lexer.next()?;
        Ok(Parser { lexer, current, params })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        self.current = self.lexer.next()?;
        Ok(())
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.current {
                Token::Plus => {
                    self.advance()?;
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.advance()?;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.current {
                Token::Star => {
                    self.advance()?;
                    acc = &acc * &self.factor()?;
                }
                Token::Slash => {
                    self.advance()?;
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return Err(self.lexer.error("division by zero"));
                    }
                    acc = &acc / &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ParseError> {
        if self.current == Token::Minus {
            self.advance()?;
            return Ok(-&self.factor()?);
        }
        let mut base = self.atom()?;
        if self.current == Token::Caret {
            self.advance()?;
            let Token::Number(ref n) = self.current else {
                return Err(self.lexer.error("exponent must be a nonnegative integer"));
            };
            let Some(r) = n.as_rational().cloned() else {
                return Err(self.lexer.error("exponent must be a nonnegative integer"));
            };
            use num::{One, Signed, ToPrimitive};
            if !r.denom().is_one() || r.is_negative() {
                return Err(self.lexer.error("exponent must be a nonnegative integer"));
            }
            let e = r.numer().to_u32().ok_or_else(|| self.lexer.error("exponent too large"))?;
            self.advance()?;
            let mut acc = Scalar::one();
            for _ in 0..e {
                acc = &acc * &base;
            }
            base = acc;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        match self.current.clone() {
            Token::Number(n) => {
                self.advance()?;
                Ok(n)
            }
            Token::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                if self.current != Token::RParen {
                    return Err(self.lexer.error("expected `)`"));
                }
                self.advance()?;
                Ok(inner)
            }
            Token::Ident(name) if name == "sqrt" => {
                self.advance()?;
                if self.current != Token::LParen {
                    return Err(self.lexer.error("expected `(` after sqrt"));
                }
                self.advance()?;
                let Token::Number(ref n) = self.current else {
                    return Err(self.lexer.error("sqrt takes an integer radicand"));
                };
                use num::{One, ToPrimitive};
                let d = n
                    .as_rational()
                    .filter(|r| r.denom().is_one())
                    .and_then(|r| r.numer().to_u32())
                    .ok_or_else(|| self.lexer.error("sqrt takes an integer radicand"))?;
                if d < 2 {
                    return Err(self.lexer.error("sqrt radicand must be at least 2"));
                }
                self.advance()?;
                if self.current != Token::RParen {
                    return Err(self.lexer.error("expected `)`"));
                }
                self.advance()?;
                Ok(Scalar::surd(1, 1, d))
            }
            Token::Ident(name) => {
                self.advance()?;
                self.params
                    .get(&name)
                    .cloned()
                    .ok_or(ParseError::UnknownParam(name))
            }
            _ => Err(self.lexer.error("expected a value")),
        }
    }
}

/// Evaluates an expression with the given parameter bindings.
pub fn eval_expr(src: &str, params: &Params) -> Result<Scalar, ParseError> {
    let mut p = Parser::new(src, params)?;
    let value = p.expr()?;
    if p.current != Token::End {
        return Err(p.lexer.error("trailing input"));
    }
    Ok(value)
}

/// Evaluates an expression with no parameters.
pub fn eval_scalar(src: &str) -> Result<Scalar, ParseError> {
    eval_expr(src, &Params::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(eval_scalar("3/4").unwrap(), Scalar::rat(3, 4));
        assert_eq!(eval_scalar("-5").unwrap(), Scalar::from_int(-5));
        assert_eq!(eval_scalar("1/2r6").unwrap(), Scalar::surd(1, 2, 6));
        assert_eq!(eval_scalar("2r6").unwrap(), Scalar::surd(2, 1, 6));
        assert_eq!(eval_scalar("r6").unwrap(), Scalar::surd(1, 1, 6));
        assert_eq!(eval_scalar("sqrt(6)").unwrap(), Scalar::surd(1, 1, 6));
        assert_eq!(eval_scalar("0.125f").unwrap(), Scalar::float(0.125));
        // the display form of a mixed scalar parses back
        let x = eval_scalar("1/2+1/4*sqrt(6)").unwrap();
        assert_eq!(eval_scalar(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn arithmetic_and_params() {
        let mut params = Params::new();
        params.insert("mu".into(), Scalar::from_int(3));
        params.insert("tau".into(), Scalar::from_int(-1));
        assert_eq!(eval_expr("-mu^2/(8*2)", &params).unwrap(), Scalar::rat(-9, 16));
        assert_eq!(eval_expr("-1/(3*mu*tau)", &params).unwrap(), Scalar::rat(1, 9));
        assert_eq!(eval_expr("(1+mu)*(1-mu)", &params).unwrap(), Scalar::from_int(-8));
        assert!(matches!(eval_expr("nu", &params), Err(ParseError::UnknownParam(_))));
    }

    #[test]
    fn surds_in_expressions() {
        // sqrt(3/8) = (1/4) sqrt(6)
        assert_eq!(eval_scalar("1/4r6").unwrap(), Scalar::surd(1, 4, 6));
        assert_eq!(eval_scalar("r6*r6").unwrap(), Scalar::from_int(6));
        assert_eq!(eval_scalar("(1/2r6)^2").unwrap(), Scalar::rat(3, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(eval_scalar("1 +").is_err());
        assert!(eval_scalar("(1").is_err());
        assert!(eval_scalar("1/0").is_err());
        assert!(eval_scalar("2 3").is_err());
    }
}

//! Polynomial expression grammar.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer ['/' integer] | name | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. Names start with a letter and continue with
//! letters, digits or `_`.

use std::sync::Arc;

use super::{Element, Presentation};
use crate::coeff::{parse_rational, Coeff, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(Rational),
    Name { name: String, column: usize },
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(String),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn parse_error(message: impl Into<String>, column: usize) -> Error {
    Error::Parse {
        message: message.into(),
        line: 1,
        column,
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '^' => Token::Caret,
            '/' => Token::Slash,
            '(' => Token::LParen,
            ')' => Token::RParen,
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Token::Number(chars[start..i].iter().collect()), col));
                continue;
            }
            a if a.is_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Token::Name(chars[start..i].iter().collect()), col));
                continue;
            }
            other => return Err(parse_error(format!("unexpected character `{other}`"), col)),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_column)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(&Token::Minus) {
            self.bump();
            negative = true;
        } else if self.peek() == Some(&Token::Plus) {
            self.bump();
        }
        terms.push((negative, self.term()?));
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    terms.push((false, self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Token::Star) {
            self.bump();
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        Ok(Expr::Product(factors))
    }

    fn factor(&mut self) -> Result<Expr> {
        let atom = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let col = self.column();
            match self.bump() {
                Some(Token::Number(n)) => {
                    let e: u32 = n
                        .parse()
                        .map_err(|_| parse_error(format!("exponent `{n}` out of range"), col))?;
                    return Ok(Expr::Power(Box::new(atom), e));
                }
                _ => return Err(parse_error("expected a nonnegative integer exponent", col)),
            }
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.column();
        match self.bump() {
            Some(Token::Number(n)) => {
                let mut text = n;
                if self.peek() == Some(&Token::Slash) {
                    self.bump();
                    let dcol = self.column();
                    match self.bump() {
                        Some(Token::Number(d)) => {
                            text.push('/');
                            text.push_str(&d);
                        }
                        _ => return Err(parse_error("expected a denominator", dcol)),
                    }
                }
                let q = parse_rational(&text)
                    .ok_or_else(|| parse_error(format!("bad number `{text}`"), col))?;
                Ok(Expr::Number(q))
            }
            Some(Token::Name(name)) => Ok(Expr::Name { name, column: col }),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                let rcol = self.column();
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(parse_error("expected `)`", rcol)),
                }
            }
            Some(other) => Err(parse_error(format!("unexpected token {other:?}"), col)),
            None => Err(parse_error("unexpected end of expression", col)),
        }
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            end_column: text.chars().count() + 1,
        };
        let e = p.expr()?;
        if p.pos < p.tokens.len() {
            return Err(parse_error("trailing input", p.column()));
        }
        Ok(e)
    }

    /// Names referenced by the expression, in order of appearance.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Number(_) => {}
            Expr::Name { name, .. } => out.push(name),
            Expr::Sum(ts) => ts.iter().for_each(|(_, t)| t.collect_names(out)),
            Expr::Product(fs) => fs.iter().for_each(|f| f.collect_names(out)),
            Expr::Power(b, _) => b.collect_names(out),
        }
    }

    pub fn eval<F: Coeff>(&self, pres: &Arc<Presentation<F>>) -> Result<Element<F>> {
        match self {
            Expr::Number(q) => {
                let c = F::from_rational(q).ok_or_else(|| Error::NonIntegral(q.to_string()))?;
                Ok(Element::scalar(pres, c))
            }
            Expr::Name { name, .. } => Element::generator(pres, name),
            Expr::Sum(ts) => {
                let mut acc = Element::zero(pres);
                for (neg, t) in ts {
                    let v = t.eval(pres)?;
                    acc = if *neg { &acc - &v } else { &acc + &v };
                }
                Ok(acc)
            }
            Expr::Product(fs) => {
                let mut acc = Element::one(pres);
                for f in fs {
                    acc = &acc * &f.eval(pres)?;
                }
                Ok(acc)
            }
            Expr::Power(b, e) => Ok(b.eval(pres)?.pow(*e)),
        }
    }
}

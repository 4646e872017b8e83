//! Recursive-descent parser for relation text.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' INT)?
//! primary := NUMBER | NUMBER 'i' | IDENT | '(' expr ')'
//! ```
//!
//! Identifiers resolve to generators first, then parameters. Powers of sums
//! are expanded.

use super::{NcPoly, ParamPoly, Word};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Int(u32),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        let mut after_caret = false;
        while let Some(&b) = lx.src.get(lx.pos) {
            let start = lx.pos;
            if b.is_ascii_whitespace() {
                lx.pos += 1;
                continue;
            }
            let tok = match b {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' | b'.' if after_caret => lx.integer()?,
                b'0'..=b'9' | b'.' => lx.number()?,
                b if b.is_ascii_alphabetic() || b == b'_' => lx.ident(),
                _ => {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("unexpected character `{}`", b as char),
                    })
                }
            };
            after_caret = tok == Tok::Caret;
            out.push((tok, start));
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<Tok> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<u32>().map(Tok::Int).map_err(|_| Error::Parse {
            pos: start,
            msg: "exponent must be a nonnegative integer".into(),
        })
    }

    fn number(&mut self) -> Result<Tok> {
        let start = self.pos;
        let digits = |lx: &mut Self| {
            while lx.src.get(lx.pos).is_some_and(|b| b.is_ascii_digit()) {
                lx.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                digits(self);
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: f64 = text.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("malformed number `{text}`"),
        })?;
        // `2i` is an imaginary literal, `2ix` is not
        if self.src.get(self.pos) == Some(&b'i')
            && !self
                .src
                .get(self.pos + 1)
                .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
            return Ok(Tok::Imag(v));
        }
        Ok(Tok::Num(v))
    }

    fn ident(&mut self) -> Tok {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    generators: &'a [&'a str],
    params: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<NcPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.at += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<NcPoly> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            match self.peek() {
                Some(Tok::Int(e)) => {
                    let e = *e;
                    self.at += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<NcPoly> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Num(v) => Ok(NcPoly::monomial(
                Word::empty(),
                ParamPoly::constant(C64::new(v, 0.0)),
            )),
            Tok::Imag(v) => Ok(NcPoly::monomial(
                Word::empty(),
                ParamPoly::constant(C64::new(0.0, v)),
            )),
            Tok::Ident(name) => {
                if let Some(g) = self.generators.iter().position(|g| *g == name) {
                    Ok(NcPoly::generator(g))
                } else if self.params.contains(&name.as_str()) {
                    Ok(NcPoly::monomial(Word::empty(), ParamPoly::param(&name)))
                } else {
                    Err(Error::UnknownIdentifier { name, pos })
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Tok::Int(_) => unreachable!("integers only follow `^`"),
            _ => {
                self.at -= 1;
                self.err("expected a number, identifier or `(`")
            }
        }
    }
}

/// Parses relation text over the given generator and parameter names.
///
/// ```
/// use sklyrep::freealg::parse_ncpoly;
/// let p = parse_ncpoly("x*y + y*x + c*z^2", &["x", "y", "z"], &["c"]).unwrap();
/// assert_eq!(p.len(), 3);
/// ```
pub fn parse_ncpoly(text: &str, generators: &[&str], params: &[&str]) -> Result<NcPoly> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        generators,
        params,
    };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

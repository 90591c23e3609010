//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ['-'] power
//! power  := atom ['^' ['-'] number]
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Binary operators are left-associative. A sign is accepted on the
//! exponent so that printed negative powers re-parse.

use thiserror::Error;

use super::{BinaryOp, Expr, UnaryOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Expected(&'static str),
    InvalidNumber(String),
    UnknownVariable(String),
    UnknownFunction(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{} at byte {offset}", describe(.kind))]
pub struct ParseError {
    /// Byte offset into the source string.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::UnexpectedChar(c) => format!("unexpected character {c:?}"),
        ParseErrorKind::UnexpectedEnd => "unexpected end of input".to_string(),
        ParseErrorKind::Expected(what) => format!("expected {what}"),
        ParseErrorKind::InvalidNumber(s) => format!("invalid number {s:?}"),
        ParseErrorKind::UnknownVariable(v) => format!("unknown variable {v:?}"),
        ParseErrorKind::UnknownFunction(f) => format!("unknown function {f:?}"),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
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

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += 1;
            return Ok((tok, start));
        }
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        let c = self.src[start..].chars().next().unwrap_or('\0');
        Err(ParseError {
            offset: start,
            kind: ParseErrorKind::UnexpectedChar(c),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        let mut n = digits(&mut self.pos);
        if bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(&mut self.pos);
        }
        if n == 0 {
            return Err(ParseError {
                offset: start,
                kind: ParseErrorKind::InvalidNumber(self.src[start..self.pos].to_string()),
            });
        }
        // Exponent part only when it is followed by digits, so `2e` stays `2` then `e`.
        if matches!(bytes.get(self.pos), Some(b'e' | b'E')) {
            let mut p = self.pos + 1;
            if matches!(bytes.get(p), Some(b'+' | b'-')) {
                p += 1;
            }
            if bytes.get(p).is_some_and(|c| c.is_ascii_digit()) {
                self.pos = p;
                digits(&mut self.pos);
            }
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>()
            .map(|v| (Tok::Num(v), start))
            .map_err(|_| ParseError {
                offset: start,
                kind: ParseErrorKind::InvalidNumber(text.to_string()),
            })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    tok_pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, pos) = self.lexer.next()?;
        self.tok = tok;
        self.tok_pos = pos;
        Ok(())
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let kind = match self.tok {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            _ => ParseErrorKind::Expected(expected),
        };
        ParseError {
            offset: self.tok_pos,
            kind,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::raw_binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.factor()?;
            lhs = Expr::raw_binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Minus {
            self.bump()?;
            let inner = self.power()?;
            return Ok(Expr::raw_unary(UnaryOp::Neg, inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let negative = if self.tok == Tok::Minus {
            self.bump()?;
            true
        } else {
            false
        };
        match self.tok {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::raw_pow(base, if negative { -v } else { v }))
            }
            _ => Err(self.error("numeric exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Const(v))
            }
            Tok::Ident(name) => {
                let at = self.tok_pos;
                self.bump()?;
                if self.tok == Tok::LParen {
                    let op = UnaryOp::from_name(&name).ok_or(ParseError {
                        offset: at,
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                    })?;
                    self.bump()?;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(Expr::raw_unary(op, arg))
                } else if self.vars.contains(&name.as_str()) {
                    Ok(Expr::var(&name))
                } else {
                    Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::UnknownVariable(name),
                    })
                }
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            _ => Err(self.error("number, identifier or '('")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.tok == Tok::RParen {
            self.bump()
        } else {
            Err(self.error("')'"))
        }
    }
}

/// Parse `src` into an expression tree, accepting only the listed
/// variable names. The tree mirrors the source exactly; no folding.
pub fn parse_expr(src: &str, allowed_vars: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        lexer: Lexer { src, pos: 0 },
        tok: Tok::End,
        tok_pos: 0,
        vars: allowed_vars,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.error("operator or end of input"));
    }
    Ok(e)
}

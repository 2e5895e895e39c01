use thiserror::Error;

use super::{Expr, Func};

/// Syntax error with the byte offset of the offending token.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("syntax error at byte {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
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
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((start, Tok::End));
        };
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((start, t));
        }
        if c.is_ascii_digit() || c == '.' {
            let bytes = rest.as_bytes();
            let mut i = 0;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // optional exponent, only when followed by digits
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &rest[..i];
            let v: f64 = text.parse().map_err(|_| ParseError {
                offset: start,
                expected: "a well-formed number".into(),
            })?;
            self.pos += i;
            return Ok((start, Tok::Num(v)));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            self.pos += len;
            return Ok((start, Tok::Ident(rest[..len].to_string())));
        }
        Err(ParseError { offset: start, expected: format!("a token, found '{c}'") })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

const OPERAND: &str = "a number, identifier, '(' or '-'";

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (at, tok) = lexer.next()?;
        Ok(Self { lexer, tok, at })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (at, tok) = self.lexer.next()?;
        self.at = at;
        self.tok = tok;
        Ok(())
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError { offset: self.at, expected: expected.to_string() })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Plus => {
                    self.bump()?;
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.tok {
                Tok::Star => {
                    self.bump()?;
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump()?;
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(Expr::neg(self.factor()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Caret {
            self.bump()?;
            return Ok(Expr::pow(base, self.factor()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.error("')'");
                }
                self.bump()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                match name.as_str() {
                    "s" | "t" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    _ => match Func::from_name(&name) {
                        Some(f) => {
                            if self.tok != Tok::LParen {
                                return self.error(&format!("'(' after function '{name}'"));
                            }
                            self.bump()?;
                            let arg = self.expr()?;
                            if self.tok != Tok::RParen {
                                return self.error("')'");
                            }
                            self.bump()?;
                            Ok(Expr::call(f, arg))
                        }
                        None => Err(ParseError {
                            offset: at,
                            expected: format!("the parameter 's'/'t', 'pi' or a known function, found '{name}'"),
                        }),
                    },
                }
            }
            _ => self.error(OPERAND),
        }
    }
}

/// Parses an expression in the parameter `s` (or `t`).
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.error("an operator or end of input");
    }
    Ok(e)
}

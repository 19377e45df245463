//! Recursive-descent parser.
//!
//! ```text
//! identity := term '=' term
//! term     := unary (op unary)?      op is '.', '/' or '\'
//! unary    := atom '*'*
//! atom     := letter | '[' name ']' | '1' | 'j' | '(' term ')'
//! ```

use thiserror::Error;

use super::{Identity, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, message: message.into() })
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let a = self.unary()?;
        let make: fn(Term, Term) -> Term = match self.peek() {
            Some('.') => Term::mul,
            Some('/') => Term::rdiv,
            Some('\\') => Term::ldiv,
            _ => return Ok(a),
        };
        self.bump();
        let b = self.unary()?;
        if let Some(c @ ('.' | '/' | '\\')) = self.peek() {
            return self.err(format!("'{c}' needs parentheses to group with the preceding operation"));
        }
        Ok(make(a, b))
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while self.peek() == Some('*') {
            self.bump();
            t = Term::star(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let t = self.term()?;
                self.expect(')')?;
                Ok(t)
            }
            Some('[') => {
                self.bump();
                let start = self.pos;
                let len = self.src[start..]
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(self.src.len() - start);
                if len == 0 {
                    return self.err("expected a variable name");
                }
                let name = self.src[start..start + len].to_string();
                self.pos += len;
                self.expect(']')?;
                if name == "j" {
                    return Ok(Term::J);
                }
                Ok(Term::Var(name))
            }
            Some('1') => {
                self.bump();
                Ok(Term::One)
            }
            Some('j') => {
                self.bump();
                Ok(Term::J)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.bump();
                if let Some(d) = self.src[self.pos..].chars().next() {
                    if d.is_ascii_alphanumeric() {
                        return self.err("multi-letter variables must be written in brackets");
                    }
                }
                Ok(Term::Var(c.to_string()))
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_identity(src: &str) -> Result<Identity, ParseError> {
    let mut p = Parser::new(src);
    let lhs = p.term()?;
    p.expect('=')?;
    let rhs = p.term()?;
    p.finish()?;
    Ok(Identity::new(lhs, rhs))
}

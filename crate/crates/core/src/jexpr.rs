//! A small expression language for the shape term j(n).
//!
//! Grammar (whitespace is insignificant, all operators left-associative):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | atom
//! atom  := number | 'n' | 'log' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `log` is the natural logarithm. There is no exponent operator and no other
//! identifier; iterated logarithms are written out as `log(log(n))`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("unbalanced parenthesis at byte {offset}")]
    Unbalanced { offset: usize },
    #[error("expression domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Constant(f64),
    Variable,
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    Neg(Box<ExprNode>),
    Log(Box<ExprNode>),
}

impl ExprNode {
    pub fn eval(&self, n: f64) -> Result<f64, ExprError> {
        use ExprNode::*;
        Ok(match self {
            Constant(c) => *c,
            Variable => n,
            Add(a, b) => a.eval(n)? + b.eval(n)?,
            Sub(a, b) => a.eval(n)? - b.eval(n)?,
            Mul(a, b) => a.eval(n)? * b.eval(n)?,
            Div(a, b) => {
                let d = b.eval(n)?;
                if d == 0.0 {
                    return Err(ExprError::Domain(format!("division by zero at n = {n}")));
                }
                a.eval(n)? / d
            }
            Neg(a) => -a.eval(n)?,
            Log(a) => {
                let v = a.eval(n)?;
                if !(v > 0.0) {
                    return Err(ExprError::Domain(format!("log({v}) at n = {n}")));
                }
                v.ln()
            }
        })
    }

    /// Central-difference estimate of d/dn with step `max(1e-4 n, 1e-3)`.
    pub fn derivative_est(&self, n: f64) -> Result<f64, ExprError> {
        let h = (1e-4 * n).max(1e-3);
        Ok((self.eval(n + h)? - self.eval(n - h)?) / (2.0 * h))
    }
}

/// Fully parenthesised, so that the output parses back to the same tree.
impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ExprNode::*;
        match self {
            Constant(c) => write!(f, "{c}"),
            Variable => f.write_str("n"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Neg(a) => write!(f, "(-{a})"),
            Log(a) => write!(f, "log({a})"),
        }
    }
}

pub fn parse(text: &str) -> Result<ExprNode, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some(b')') => Err(ExprError::Unbalanced { offset: p.pos }),
        Some(c) => Err(ExprError::Syntax {
            offset: p.pos,
            message: format!("unexpected `{}`", c as char),
        }),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<ExprNode, ExprError> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = ExprNode::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = ExprNode::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprNode, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = ExprNode::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = ExprNode::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprNode, ExprError> {
        self.skip_ws();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(ExprNode::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<ExprNode, ExprError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.syntax("expected a number, `n`, `log(` or `(`")),
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let e = self.expr()?;
                self.close(open)?;
                Ok(e)
            }
            Some(b')') => Err(ExprError::Unbalanced { offset: self.pos }),
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("?");
                match name {
                    "n" => Ok(ExprNode::Variable),
                    "log" => {
                        self.skip_ws();
                        if self.peek() != Some(b'(') {
                            return Err(self.syntax("expected `(` after `log`"));
                        }
                        let open = self.pos;
                        self.pos += 1;
                        let e = self.expr()?;
                        self.close(open)?;
                        Ok(ExprNode::Log(Box::new(e)))
                    }
                    _ => Err(ExprError::UnknownIdentifier {
                        name: name.to_string(),
                        offset: start,
                    }),
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected `{}`", c as char))),
        }
    }

    fn close(&mut self, open: usize) -> Result<(), ExprError> {
        self.skip_ws();
        match self.peek() {
            Some(b')') => {
                self.pos += 1;
                Ok(())
            }
            None => Err(ExprError::Unbalanced { offset: open }),
            Some(c) => Err(self.syntax(format!("expected `)`, found `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<ExprNode, ExprError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let frac = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == frac {
                return Err(self.syntax("expected digits after `.`"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse()
            .map(ExprNode::Constant)
            .map_err(|_| ExprError::Syntax {
                offset: start,
                message: format!("bad number `{text}`"),
            })
    }
}

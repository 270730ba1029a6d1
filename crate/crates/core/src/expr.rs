//! Integer expressions in catalog parameters, e.g. `"16*m - 8"`.
//!
//! Grammar: `+ - * /`, parentheses, unary minus, integer literals and
//! parameter names. Division must be exact.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Params = BTreeMap<String, i64>;

/// An integer or an expression string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntExpr {
    Int(i64),
    Expr(String),
}

impl IntExpr {
    pub fn eval(&self, params: &Params) -> Result<i64> {
        match self {
            IntExpr::Int(v) => Ok(*v),
            IntExpr::Expr(s) => eval(s, params),
        }
    }
}

impl fmt::Display for IntExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntExpr::Int(v) => write!(f, "{v}"),
            IntExpr::Expr(s) => f.write_str(s),
        }
    }
}

impl From<i64> for IntExpr {
    fn from(v: i64) -> Self {
        IntExpr::Int(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut n = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                n.push(d);
                chars.next();
            }
            out.push(Tok::Num(n.parse().map_err(|_| {
                Error::Expression(format!("literal {n} overflows"))
            })?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut n = String::new();
            while let Some(&d) = chars
                .peek()
                .filter(|d| d.is_ascii_alphanumeric() || **d == '_')
            {
                n.push(d);
                chars.next();
            }
            out.push(Tok::Ident(n));
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            chars.next();
        } else {
            return Err(Error::Expression(format!("unexpected {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    params: &'a Params,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Expression(format!("{msg} in {:?}", self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn checked(&self, v: Option<i64>) -> Result<i64> {
        v.ok_or_else(|| self.err("overflow"))
    }

    fn expr(&mut self) -> Result<i64> {
        let mut v = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let r = self.term()?;
            v = self.checked(if op == '+' {
                v.checked_add(r)
            } else {
                v.checked_sub(r)
            })?;
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<i64> {
        let mut v = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let r = self.unary()?;
            v = if op == '*' {
                self.checked(v.checked_mul(r))?
            } else {
                if r == 0 || v % r != 0 {
                    return Err(self.err(&format!("{v}/{r} is not an exact division")));
                }
                v / r
            };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<i64> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            let v = self.unary()?;
            return self.checked(v.checked_neg());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<i64> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(n),
            Some(Tok::Ident(name)) => self
                .params
                .get(&name)
                .copied()
                .ok_or_else(|| self.err(&format!("unknown parameter {name}"))),
            Some(Tok::Op('(')) => {
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("unexpected end or operator")),
        }
    }
}

pub fn eval(src: &str, params: &Params) -> Result<i64> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        params,
        src,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

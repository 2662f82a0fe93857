//! Symbolic expressions in named parameters, used for the entries of
//! automorphism-family templates and for parametrized structure constants.
//!
//! Grammar (whitespace-free in data files):
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := '-' factor | primary ('^' uint)?
//! primary := uint | name | '(' expr ')' | 'root' K '(' expr ')'
//! ```
//!
//! Names are letter runs (`a`…`l`, `alpha`); `rootK(x)` denotes an exact
//! k-th root and evaluation fails unless the radicand has one in ℚ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::exactnum::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("cannot parse expression {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("unknown parameter {0:?}")]
    UnknownParam(String),
    #[error("division by zero while evaluating")]
    DivisionByZero,
    #[error("no exact {degree}-th root of {value} in Q(i)")]
    InexactRoot { degree: u32, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamExpr {
    Const(Scalar),
    Param(String),
    Neg(Box<ParamExpr>),
    Add(Box<ParamExpr>, Box<ParamExpr>),
    Sub(Box<ParamExpr>, Box<ParamExpr>),
    Mul(Box<ParamExpr>, Box<ParamExpr>),
    Div(Box<ParamExpr>, Box<ParamExpr>),
    Pow(Box<ParamExpr>, u32),
    Root(Box<ParamExpr>, u32),
}

pub type Assignment = BTreeMap<String, Scalar>;

impl ParamExpr {
    pub fn parse(text: &str) -> Result<ParamExpr, ExprError> {
        Parser::new(text).and_then(|mut p| {
            let e = p.expr()?;
            if p.pos < p.tokens.len() {
                return Err(p.err("trailing input"));
            }
            Ok(e)
        })
    }

    pub fn constant(s: Scalar) -> ParamExpr {
        ParamExpr::Const(s)
    }

    pub fn eval(&self, env: &Assignment) -> Result<Scalar, ExprError> {
        match self {
            ParamExpr::Const(c) => Ok(c.clone()),
            ParamExpr::Param(name) => env
                .get(name)
                .cloned()
                .ok_or_else(|| ExprError::UnknownParam(name.clone())),
            ParamExpr::Neg(e) => Ok(-e.eval(env)?),
            ParamExpr::Add(a, b) => Ok(a.eval(env)? + b.eval(env)?),
            ParamExpr::Sub(a, b) => Ok(a.eval(env)? - b.eval(env)?),
            ParamExpr::Mul(a, b) => Ok(a.eval(env)? * b.eval(env)?),
            ParamExpr::Div(a, b) => {
                let denom = b.eval(env)?;
                a.eval(env)?
                    .checked_div(&denom)
                    .map_err(|_| ExprError::DivisionByZero)
            }
            ParamExpr::Pow(e, k) => Ok(e.eval(env)?.pow(*k)),
            ParamExpr::Root(e, k) => {
                let v = e.eval(env)?;
                v.nth_root_exact(*k).ok_or_else(|| ExprError::InexactRoot {
                    degree: *k,
                    value: v.to_string(),
                })
            }
        }
    }

    /// All parameter names appearing in the expression.
    pub fn params(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.collect_params(&mut acc);
        acc
    }

    fn collect_params(&self, acc: &mut BTreeSet<String>) {
        match self {
            ParamExpr::Const(_) => {}
            ParamExpr::Param(name) => {
                acc.insert(name.clone());
            }
            ParamExpr::Neg(e) | ParamExpr::Pow(e, _) | ParamExpr::Root(e, _) => {
                e.collect_params(acc)
            }
            ParamExpr::Add(a, b)
            | ParamExpr::Sub(a, b)
            | ParamExpr::Mul(a, b)
            | ParamExpr::Div(a, b) => {
                a.collect_params(acc);
                b.collect_params(acc);
            }
        }
    }

    /// Parameters appearing under a root, mapped to the least common root
    /// degree they need (samplers restrict these to perfect powers).
    pub fn root_params(&self) -> BTreeMap<String, u32> {
        let mut acc = BTreeMap::new();
        self.collect_root_params(&mut acc);
        acc
    }

    fn collect_root_params(&self, acc: &mut BTreeMap<String, u32>) {
        match self {
            ParamExpr::Root(e, k) => {
                for p in e.params() {
                    let entry = acc.entry(p).or_insert(1);
                    *entry = lcm(*entry, *k);
                }
                e.collect_root_params(acc);
            }
            ParamExpr::Neg(e) | ParamExpr::Pow(e, _) => e.collect_root_params(acc),
            ParamExpr::Add(a, b)
            | ParamExpr::Sub(a, b)
            | ParamExpr::Mul(a, b)
            | ParamExpr::Div(a, b) => {
                a.collect_root_params(acc);
                b.collect_root_params(acc);
            }
            ParamExpr::Const(_) | ParamExpr::Param(_) => {}
        }
    }

    /// True when the expression is the bare parameter `name`.
    pub fn is_param(&self, name: &str) -> bool {
        matches!(self, ParamExpr::Param(p) if p == name)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // prints with enough parentheses to re-parse to the same tree
        match self {
            ParamExpr::Const(c) => write!(f, "{c}"),
            ParamExpr::Param(p) => write!(f, "{p}"),
            ParamExpr::Neg(e) => write!(f, "-{}", maybe_paren(e, true)),
            ParamExpr::Add(a, b) => write!(f, "{a}+{b}"),
            ParamExpr::Sub(a, b) => write!(f, "{}-{}", a, maybe_paren(b, false)),
            ParamExpr::Mul(a, b) => {
                write!(f, "{}*{}", maybe_paren(a, false), maybe_paren(b, false))
            }
            ParamExpr::Div(a, b) => {
                write!(f, "{}/{}", maybe_paren(a, false), maybe_paren(b, true))
            }
            ParamExpr::Pow(e, k) => write!(f, "{}^{}", maybe_paren(e, true), k),
            ParamExpr::Root(e, k) => write!(f, "root{k}({e})"),
        }
    }
}

fn maybe_paren(e: &ParamExpr, tight: bool) -> String {
    let needs = match e {
        ParamExpr::Add(..) | ParamExpr::Sub(..) => true,
        ParamExpr::Mul(..) | ParamExpr::Div(..) | ParamExpr::Neg(..) => tight,
        _ => false,
    };
    if needs {
        format!("({e})")
    } else {
        format!("{e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(u64),
    Name(String),
    Op(char),
}

struct Parser {
    text: String,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ExprError> {
        let mut tokens = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u64 = text[start..i].parse().map_err(|_| ExprError::Parse {
                    text: text.into(),
                    reason: "number too large".into(),
                })?;
                tokens.push(Token::Num(n));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                tokens.push(Token::Name(text[start..i].to_string()));
            } else if "+-*/^()".contains(c) {
                tokens.push(Token::Op(c));
                i += 1;
            } else {
                return Err(ExprError::Parse {
                    text: text.into(),
                    reason: format!("unexpected character {c:?}"),
                });
            }
        }
        Ok(Parser {
            text: text.to_string(),
            tokens,
            pos: 0,
        })
    }

    fn err(&self, reason: &str) -> ExprError {
        ExprError::Parse {
            text: self.text.clone(),
            reason: reason.to_string(),
        }
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<ParamExpr, ExprError> {
        let mut e = self.term()?;
        while let Some(op) = self.peek_op() {
            if op != '+' && op != '-' {
                break;
            }
            self.pos += 1;
            let rhs = self.term()?;
            e = if op == '+' {
                ParamExpr::Add(Box::new(e), Box::new(rhs))
            } else {
                ParamExpr::Sub(Box::new(e), Box::new(rhs))
            };
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<ParamExpr, ExprError> {
        let mut e = self.factor()?;
        while let Some(op) = self.peek_op() {
            if op != '*' && op != '/' {
                break;
            }
            self.pos += 1;
            let rhs = self.factor()?;
            e = if op == '*' {
                ParamExpr::Mul(Box::new(e), Box::new(rhs))
            } else {
                ParamExpr::Div(Box::new(e), Box::new(rhs))
            };
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<ParamExpr, ExprError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(ParamExpr::Neg(Box::new(self.factor()?)));
        }
        let mut e = self.primary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Token::Num(k)) if *k <= u32::MAX as u64 => {
                    self.pos += 1;
                    e = ParamExpr::Pow(Box::new(e), *k as u32);
                }
                _ => return Err(self.err("exponent must be a nonnegative integer")),
            }
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<ParamExpr, ExprError> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(ParamExpr::Const(Scalar::from_int(n as i64)))
            }
            Some(Token::Name(name)) => {
                self.pos += 1;
                if let Some(deg) = name.strip_prefix("root").and_then(|d| d.parse::<u32>().ok()) {
                    if deg >= 2 && self.peek_op() == Some('(') {
                        self.pos += 1;
                        let inner = self.expr()?;
                        if self.peek_op() != Some(')') {
                            return Err(self.err("missing closing parenthesis"));
                        }
                        self.pos += 1;
                        return Ok(ParamExpr::Root(Box::new(inner), deg));
                    }
                }
                Ok(ParamExpr::Param(name))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("missing closing parenthesis"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("expected a number, name or parenthesis")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, &str)]) -> Assignment {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.parse().unwrap()))
            .collect()
    }

    fn eval(text: &str, e: &Assignment) -> Scalar {
        ParamExpr::parse(text).unwrap().eval(e).unwrap()
    }

    #[test]
    fn arithmetic_and_precedence() {
        let e = env(&[("a", "2"), ("b", "3"), ("c", "-1/2")]);
        assert_eq!(eval("a*b", &e), "6".parse().unwrap());
        assert_eq!(eval("a+b*c", &e), "1/2".parse().unwrap());
        assert_eq!(eval("(a+b)*c", &e), "-5/2".parse().unwrap());
        assert_eq!(eval("-b^2/a", &e), "-9/2".parse().unwrap());
        assert_eq!(eval("a*(a+1)-2*b", &e), "0".parse().unwrap());
        assert_eq!(eval("1/2", &env(&[])), "1/2".parse().unwrap());
    }

    #[test]
    fn rational_function_with_alpha() {
        let e = env(&[("alpha", "-1")]);
        assert_eq!(eval("(1+alpha)/(1-alpha)", &e), "0".parse().unwrap());
        let at1 = ParamExpr::parse("(1+alpha)/(1-alpha)")
            .unwrap()
            .eval(&env(&[("alpha", "1")]));
        assert_eq!(at1, Err(ExprError::DivisionByZero));
    }

    #[test]
    fn roots_require_exact_values() {
        let e = env(&[("a", "8")]);
        assert_eq!(eval("root3(a^2)", &e), "4".parse().unwrap());
        assert_eq!(eval("a*root3(a)", &e), "16".parse().unwrap());
        assert_eq!(eval("2*root3(a^2)-1", &e), "7".parse().unwrap());
        let bad = ParamExpr::parse("root3(a)")
            .unwrap()
            .eval(&env(&[("a", "2")]));
        assert!(matches!(bad, Err(ExprError::InexactRoot { .. })));
    }

    #[test]
    fn unknown_parameter_is_an_error() {
        let r = ParamExpr::parse("a+b").unwrap().eval(&env(&[("a", "1")]));
        assert_eq!(r, Err(ExprError::UnknownParam("b".into())));
    }

    #[test]
    fn parameter_discovery() {
        let e = ParamExpr::parse("2*c*root3(a^2)-b^2").unwrap();
        let names: Vec<String> = e.params().into_iter().collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert_eq!(e.root_params().get("a"), Some(&3));
        assert!(e.root_params().get("b").is_none());
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "a*c",
            "a*f-b*e",
            "(d^2+a*b)/c",
            "-b^2/(2*a)",
            "b*c*(1+alpha)",
            "root3(a^2)",
            "2*c*root3(a^2)-b^2",
            "a*(a+1)-2*d",
            "(1+alpha)/(1-alpha)",
        ] {
            let e = ParamExpr::parse(text).unwrap();
            let printed = e.to_string();
            let back = ParamExpr::parse(&printed).unwrap();
            assert_eq!(e, back, "{text} -> {printed}");
        }
    }

    #[test]
    fn parse_failures() {
        for text in ["", "a+", "(a", "a^b", "a$", "1//2"] {
            assert!(ParamExpr::parse(text).is_err(), "{text:?} should fail");
        }
    }
}

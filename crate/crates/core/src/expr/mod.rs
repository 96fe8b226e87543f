//! Closed-form expressions in `x`, `t` and named scalar parameters.
//!
//! An [`Expression`] is parsed once and evaluated many times, either as a
//! plain value or as a [`Jet2`] carrying exact first and second partials.

mod eval;
mod jet;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use self::jet::Jet2;
pub use self::parse::ParseError;

/// Independent variable of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::T => "t",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Function registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Log,
    Sqrt,
    Abs,
    Gamma,
    Beta,
    BesselJ,
    BesselI,
    /// `J_nu(z) / z^nu`, entire in `z`.
    BesselJr,
    /// `I_nu(z) / z^nu`, entire in `z`.
    BesselIr,
    Gegenbauer,
    Hyp1F2,
}

impl Func {
    pub const ALL: [Func; 16] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
        Func::Gamma,
        Func::Beta,
        Func::BesselJ,
        Func::BesselI,
        Func::BesselJr,
        Func::BesselIr,
        Func::Gegenbauer,
        Func::Hyp1F2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Gamma => "gamma",
            Func::Beta => "beta",
            Func::BesselJ => "besselj",
            Func::BesselI => "besseli",
            Func::BesselJr => "besseljr",
            Func::BesselIr => "besselir",
            Func::Gegenbauer => "gegenbauer",
            Func::Hyp1F2 => "hyp1f2",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Beta | Func::BesselJ | Func::BesselI | Func::BesselJr | Func::BesselIr => 2,
            Func::Gegenbauer => 3,
            Func::Hyp1F2 => 4,
            _ => 1,
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// Expression tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(Var),
    Param(String),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Node {
    fn precedence(&self) -> u8 {
        match self {
            Node::Const(c) if c.is_sign_negative() => PREC_UNARY,
            Node::Const(_) | Node::Var(_) | Node::Param(_) | Node::Call(..) => PREC_ATOM,
            Node::Neg(_) => PREC_UNARY,
            Node::Binary(BinOp::Add | BinOp::Sub, ..) => PREC_ADD,
            Node::Binary(BinOp::Mul | BinOp::Div, ..) => PREC_MUL,
            Node::Binary(BinOp::Pow, ..) => PREC_POW,
        }
    }

    fn write(&self, out: &mut String, min_prec: u8) {
        let paren = self.precedence() < min_prec;
        if paren {
            out.push('(');
        }
        match self {
            Node::Const(c) => out.push_str(&format!("{c:?}")),
            Node::Var(v) => out.push_str(v.name()),
            Node::Param(p) => out.push_str(p),
            Node::Neg(inner) => {
                out.push('-');
                inner.write(out, PREC_UNARY);
            }
            Node::Binary(op, l, r) => {
                let (sym, lp, rp) = match op {
                    BinOp::Add => ("+", PREC_ADD, PREC_MUL),
                    BinOp::Sub => ("-", PREC_ADD, PREC_MUL),
                    BinOp::Mul => ("*", PREC_MUL, PREC_UNARY),
                    BinOp::Div => ("/", PREC_MUL, PREC_UNARY),
                    BinOp::Pow => ("^", PREC_ATOM, PREC_UNARY),
                };
                l.write(out, lp);
                out.push_str(sym);
                r.write(out, rp);
            }
            Node::Call(f, args) => {
                out.push_str(f.name());
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    a.write(out, 0);
                }
                out.push(')');
            }
        }
        if paren {
            out.push(')');
        }
    }

    fn collect_params(&self, acc: &mut BTreeSet<String>) {
        match self {
            Node::Param(p) => {
                acc.insert(p.clone());
            }
            Node::Neg(n) => n.collect_params(acc),
            Node::Binary(_, l, r) => {
                l.collect_params(acc);
                r.collect_params(acc);
            }
            Node::Call(_, args) => args.iter().for_each(|a| a.collect_params(acc)),
            Node::Const(_) | Node::Var(_) => {}
        }
    }

    fn is_var_free(&self) -> bool {
        !self.uses_var(Var::X) && !self.uses_var(Var::T)
    }

    fn uses_var(&self, var: Var) -> bool {
        match self {
            Node::Var(v) => *v == var,
            Node::Neg(n) => n.uses_var(var),
            Node::Binary(_, l, r) => l.uses_var(var) || r.uses_var(var),
            Node::Call(_, args) => args.iter().any(|a| a.uses_var(var)),
            Node::Const(_) | Node::Param(_) => false,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, 0);
        f.write_str(&s)
    }
}

/// A parsed closed-form formula. Immutable; evaluation is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse::parse_node(text).map(|root| Self { root })
    }

    pub fn from_node(root: Node) -> Self {
        Self { root }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            root: Node::Const(c),
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// `self + delta`, used to build perturbed copies of coefficients.
    pub fn plus_constant(&self, delta: f64) -> Self {
        Self {
            root: Node::Binary(BinOp::Add, Box::new(self.root.clone()), Box::new(Node::Const(delta))),
        }
    }

    /// `factor * self`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            root: Node::Binary(BinOp::Mul, Box::new(Node::Const(factor)), Box::new(self.root.clone())),
        }
    }

    pub fn times(&self, other: &Expression) -> Self {
        Self {
            root: Node::Binary(BinOp::Mul, Box::new(self.root.clone()), Box::new(other.root.clone())),
        }
    }

    /// Names of all parameters referenced by the expression.
    pub fn params(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.root.collect_params(&mut acc);
        acc
    }

    pub fn uses_var(&self, var: Var) -> bool {
        self.root.uses_var(var)
    }

    pub fn is_zero_constant(&self) -> bool {
        matches!(self.root, Node::Const(c) if c == 0.0)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expression::parse(s)
    }
}

/// Scalar parameter bindings, ordered by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("malformed parameter assignment `{0}` (expected name=value)")]
    Malformed(String),
    #[error("invalid value for parameter `{name}`: `{value}`")]
    BadValue { name: String, value: String },
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Overlays `other` onto a copy of `self`.
    pub fn merged(&self, other: &Params) -> Params {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.insert(k, v);
        }
        out
    }

    /// Parses `name=value[,name=value...]`.
    pub fn parse_assignments(text: &str) -> Result<Self, ParamsError> {
        let mut out = Params::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| ParamsError::Malformed(item.to_string()))?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ParamsError::Malformed(item.to_string()));
            }
            let v: f64 = value.trim().parse().map_err(|_| ParamsError::BadValue {
                name: name.to_string(),
                value: value.trim().to_string(),
            })?;
            out.insert(name, v);
        }
        Ok(out)
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.0
    }
}

impl FromIterator<(String, f64)> for Params {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Params(iter.into_iter().collect())
    }
}

/// Evaluation failures. `node` is the printed subexpression that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: String },
}

pub use self::eval::Env;

#[cfg(test)]
mod tests;

//! A small expression language for Hamiltonians and observables.
//!
//! Grammar (whitespace free-form):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' integer)?
//! atom   := number | 'pi' | 'sqrt' '(' number ')' | variable
//!         | 'sin' '(' expr ')' | 'cos' '(' expr ')'
//!         | '(' expr ')' | '-' atom
//! ```
//!
//! Variables are chart coordinates: `x1, x2, ...` always work; models whose
//! chart splits into group and dual coordinates also accept `u1..un` for
//! the group block and `nu1..nun` for the dual block. Trig arguments are in
//! radians; angles of period one enter Hamiltonians as `sin(2*pi*x1)` and
//! friends, which keeps every well-formed expression single-valued on the
//! torus.
//!
//! Differentiation is symbolic, so Hamiltonian vector fields come from
//! exact partials evaluated in floats rather than finite differences.

use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ExprError {
    #[error("parse error at byte {0}: {1}")]
    Parse(usize, String),
    #[error("unknown variable {0:?} (chart has {1} coordinates)")]
    UnknownVariable(String, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// chart coordinate index
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, point: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => point[*i],
            Expr::Add(a, b) => a.eval(point) + b.eval(point),
            Expr::Sub(a, b) => a.eval(point) - b.eval(point),
            Expr::Mul(a, b) => a.eval(point) * b.eval(point),
            Expr::Div(a, b) => a.eval(point) / b.eval(point),
            Expr::Pow(a, k) => a.eval(point).powi(*k),
            Expr::Sin(a) => a.eval(point).sin(),
            Expr::Cos(a) => a.eval(point).cos(),
            Expr::Neg(a) => -a.eval(point),
        }
    }

    /// Exact partial derivative with respect to coordinate `var`.
    pub fn diff(&self, var: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(i) => Expr::Const(if *i == var { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => simplify_add(a.diff(var), b.diff(var)),
            Expr::Sub(a, b) => simplify_sub(a.diff(var), b.diff(var)),
            Expr::Mul(a, b) => simplify_add(
                simplify_mul(a.diff(var), (**b).clone()),
                simplify_mul((**a).clone(), b.diff(var)),
            ),
            Expr::Div(a, b) => {
                // (a/b)' = a'/b - a b'/b^2
                let first = simplify_div(a.diff(var), (**b).clone());
                let second = simplify_div(
                    simplify_mul((**a).clone(), b.diff(var)),
                    Expr::Pow(b.clone(), 2),
                );
                simplify_sub(first, second)
            }
            Expr::Pow(a, k) => {
                if *k == 0 {
                    return Expr::Const(0.0);
                }
                let inner = a.diff(var);
                let scaled = simplify_mul(
                    Expr::Const(f64::from(*k)),
                    Expr::Pow(a.clone(), k - 1),
                );
                simplify_mul(scaled, inner)
            }
            Expr::Sin(a) => simplify_mul(Expr::Cos(a.clone()), a.diff(var)),
            Expr::Cos(a) => simplify_mul(
                Expr::Neg(Box::new(Expr::Sin(a.clone()))),
                a.diff(var),
            ),
            Expr::Neg(a) => match a.diff(var) {
                Expr::Const(c) => Expr::Const(-c),
                d => Expr::Neg(Box::new(d)),
            },
        }
    }

    /// Gradient over the first `dim` coordinates.
    pub fn gradient(&self, dim: usize) -> Vec<Expr> {
        (0..dim).map(|i| self.diff(i)).collect()
    }
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == 1.0)
}

fn simplify_add(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    Expr::Add(Box::new(a), Box::new(b))
}

fn simplify_sub(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        return a;
    }
    if is_zero(&a) {
        return Expr::Neg(Box::new(b));
    }
    Expr::Sub(Box::new(a), Box::new(b))
}

fn simplify_mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        return Expr::Const(0.0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    Expr::Mul(Box::new(a), Box::new(b))
}

fn simplify_div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return Expr::Const(0.0);
    }
    if is_one(&b) {
        return a;
    }
    Expr::Div(Box::new(a), Box::new(b))
}

/// How variable names map to chart coordinates.
#[derive(Debug, Clone)]
pub struct VarLayout {
    pub chart_dim: usize,
    /// when set, `u<i>` maps to coordinate i-1 and `nu<i>` to
    /// group_dim + i - 1
    pub group_dim: Option<usize>,
}

impl VarLayout {
    pub fn chart_only(chart_dim: usize) -> Self {
        VarLayout {
            chart_dim,
            group_dim: None,
        }
    }

    pub fn group_and_dual(group_dim: usize) -> Self {
        VarLayout {
            chart_dim: 2 * group_dim,
            group_dim: Some(group_dim),
        }
    }

    fn resolve(&self, name: &str) -> Option<usize> {
        let (prefix, digits) = split_name(name)?;
        let index: usize = digits.parse().ok()?;
        if index == 0 {
            return None;
        }
        let base = match prefix {
            "x" => 0,
            "u" => 0,
            "nu" => self.group_dim?,
            _ => return None,
        };
        if prefix == "u" && self.group_dim.map_or(false, |g| index > g) {
            return None;
        }
        if prefix == "nu" && self.group_dim.map_or(true, |g| index > g) {
            return None;
        }
        let i = base + index - 1;
        (i < self.chart_dim).then_some(i)
    }
}

fn split_name(name: &str) -> Option<(&str, &str)> {
    let pos = name.find(|c: char| c.is_ascii_digit())?;
    Some((&name[..pos], &name[pos..]))
}

pub fn parse(input: &str, layout: &VarLayout) -> Result<Expr, ExprError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
        layout,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(ExprError::Parse(p.pos, "trailing input".into()));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    layout: &'a VarLayout,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ExprError::Parse(
                self.pos,
                format!("expected {:?}", c as char),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = Expr::Add(Box::new(acc), Box::new(t));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = Expr::Sub(Box::new(acc), Box::new(t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = Expr::Mul(Box::new(acc), Box::new(f));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = Expr::Div(Box::new(acc), Box::new(f));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if self.peek() == Some(b'-') {
                self.pos += 1;
            }
            while self
                .bytes
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit())
            {
                self.pos += 1;
            }
            let txt = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
            let k: i32 = txt
                .parse()
                .map_err(|_| ExprError::Parse(start, "integer exponent expected".into()))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let a = self.atom()?;
                Ok(Expr::Neg(Box::new(a)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_lowercase() => self.word(),
            _ => Err(ExprError::Parse(self.pos, "expected an atom".into())),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit() || *b == b'.')
        {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        txt.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| ExprError::Parse(start, "bad number".into()))
    }

    fn word(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match name {
            "pi" => Ok(Expr::Const(std::f64::consts::PI)),
            "sqrt" => {
                self.eat(b'(')?;
                let inner = self.number()?;
                self.eat(b')')?;
                let Expr::Const(v) = inner else { unreachable!() };
                if v < 0.0 {
                    return Err(ExprError::Parse(start, "sqrt of negative constant".into()));
                }
                Ok(Expr::Const(v.sqrt()))
            }
            "sin" => {
                self.eat(b'(')?;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(Expr::Sin(Box::new(e)))
            }
            "cos" => {
                self.eat(b'(')?;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(Expr::Cos(Box::new(e)))
            }
            _ => self
                .layout
                .resolve(name)
                .map(Expr::Var)
                .ok_or_else(|| {
                    ExprError::UnknownVariable(name.to_string(), self.layout.chart_dim)
                }),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, k) => write!(f, "({a}^{k})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
        }
    }
}

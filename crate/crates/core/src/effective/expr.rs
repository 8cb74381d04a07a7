//! Primitive-recursive expressions over ℕ with bounded binders.
//!
//! Text form is an s-expression:
//!
//! ```text
//! 7  x  (S e)  (+ a b)  (* a b)  (- a b)      ; - is truncated subtraction
//! (< a b)  (<= a b)  (= a b)                  ; 1 or 0
//! (and a b)  (or a b)  (not a)                ; nonzero counts as true
//! (sum y b e)  (prod y b e)  (min y b e)      ; over y < b; min returns b if none
//! ```
//!
//! Arithmetic is checked: overflow is an error, not wraparound. `and`, `or`
//! and `*` skip their right operand when the left one decides the result,
//! so an overflow there goes unreported.
//!
//! A name resolves to the innermost enclosing binder, then to the free
//! variables supplied to [`PrExpr::parse`]. Free variables are `Var(i)`,
//! indexing the argument slice; bound ones are de Bruijn indices `Bound(j)`,
//! with 0 the innermost binder.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrExpr {
    Var(usize),
    Bound(usize),
    Const(u64),
    Succ(Box<PrExpr>),
    Add(Box<PrExpr>, Box<PrExpr>),
    Mul(Box<PrExpr>, Box<PrExpr>),
    Monus(Box<PrExpr>, Box<PrExpr>),
    Lt(Box<PrExpr>, Box<PrExpr>),
    Le(Box<PrExpr>, Box<PrExpr>),
    Eq(Box<PrExpr>, Box<PrExpr>),
    And(Box<PrExpr>, Box<PrExpr>),
    Or(Box<PrExpr>, Box<PrExpr>),
    Not(Box<PrExpr>),
    Sum(Binder),
    Prod(Binder),
    Min(Binder),
}

/// `op y < bound. body`, where `body` sees `y` as `Bound(0)`. The name is
/// only a printing hint: equality is up to renaming.
#[derive(Clone, Debug)]
pub struct Binder {
    pub name: String,
    pub bound: Box<PrExpr>,
    pub body: Box<PrExpr>,
}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.body == other.body
    }
}

impl Eq for Binder {}

impl std::hash::Hash for Binder {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bound.hash(state);
        self.body.hash(state);
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("expression needs {needed} arguments, got {given}")]
    Arity { needed: usize, given: usize },
    #[error("arithmetic overflow")]
    Overflow,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprParseError {
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected `{0}`")]
    Unexpected(String),
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("unknown operator `{0}`")]
    UnknownOp(String),
    #[error("`{op}` takes {expected} arguments, got {found}")]
    Arity { op: String, expected: usize, found: usize },
    #[error("numeral `{0}` out of range")]
    Numeral(String),
}

fn b(e: PrExpr) -> Box<PrExpr> {
    Box::new(e)
}

#[allow(clippy::should_implement_trait)]
impl PrExpr {
    pub fn var(i: usize) -> Self {
        PrExpr::Var(i)
    }
    pub fn c(n: u64) -> Self {
        PrExpr::Const(n)
    }
    pub fn succ(a: PrExpr) -> Self {
        PrExpr::Succ(b(a))
    }
    pub fn add(x: PrExpr, y: PrExpr) -> Self {
        PrExpr::Add(b(x), b(y))
    }
    pub fn mul(x: PrExpr, y: PrExpr) -> Self {
        PrExpr::Mul(b(x), b(y))
    }
    pub fn monus(x: PrExpr, y: PrExpr) -> Self {
        PrExpr::Monus(b(x), b(y))
    }
    pub fn lt(x: PrExpr, y: PrExpr) -> Self {
        PrExpr::Lt(b(x), b(y))
    }
    pub fn le(x: PrExpr, y: PrExpr) -> Self {
        PrExpr::Le(b(x), b(y))
    }
    pub fn eq(x: PrExpr, y: PrExpr) -> Self {
        PrExpr::Eq(b(x), b(y))
    }
    pub fn and(x: PrExpr, y: PrExpr) -> Self {
        PrExpr::And(b(x), b(y))
    }
    pub fn or(x: PrExpr, y: PrExpr) -> Self {
        PrExpr::Or(b(x), b(y))
    }
    pub fn not(x: PrExpr) -> Self {
        PrExpr::Not(b(x))
    }
    fn binder(name: &str, bound: PrExpr, body: PrExpr) -> Binder {
        Binder { name: name.into(), bound: b(bound), body: b(body) }
    }
    pub fn sum(name: &str, bound: PrExpr, body: PrExpr) -> Self {
        PrExpr::Sum(Self::binder(name, bound, body))
    }
    pub fn prod(name: &str, bound: PrExpr, body: PrExpr) -> Self {
        PrExpr::Prod(Self::binder(name, bound, body))
    }
    pub fn min(name: &str, bound: PrExpr, body: PrExpr) -> Self {
        PrExpr::Min(Self::binder(name, bound, body))
    }

    /// `x mod n` for a constant `n > 0`.
    pub fn modulo(x: PrExpr, n: u64) -> Self {
        assert!(n > 0, "modulus must be positive");
        let q = Self::div(x.clone(), n);
        PrExpr::monus(x, PrExpr::mul(PrExpr::c(n), q))
    }

    /// `⌊x / n⌋` for a constant `n > 0`: the least `q < x + 1` with `x < n(q + 1)`.
    pub fn div(x: PrExpr, n: u64) -> Self {
        assert!(n > 0, "divisor must be positive");
        let body = PrExpr::lt(x.lift(1), PrExpr::mul(PrExpr::c(n), PrExpr::succ(PrExpr::Bound(0))));
        PrExpr::min("q", PrExpr::succ(x), body)
    }

    /// Number of leading free variables the expression reads.
    pub fn needed_arity(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |e| {
            if let PrExpr::Var(i) = e {
                n = n.max(i + 1);
            }
        });
        n
    }

    /// True if no `Bound` index escapes its binders.
    pub fn is_closed(&self) -> bool {
        self.max_escape(0) == 0
    }

    fn max_escape(&self, depth: usize) -> usize {
        match self {
            PrExpr::Bound(j) => (j + 1).saturating_sub(depth),
            PrExpr::Sum(bd) | PrExpr::Prod(bd) | PrExpr::Min(bd) => {
                bd.bound.max_escape(depth).max(bd.body.max_escape(depth + 1))
            }
            _ => self.children().iter().map(|c| c.max_escape(depth)).max().unwrap_or(0),
        }
    }

    fn children(&self) -> Vec<&PrExpr> {
        use PrExpr::*;
        match self {
            Var(_) | Bound(_) | Const(_) => vec![],
            Succ(a) | Not(a) => vec![a],
            Add(x, y) | Mul(x, y) | Monus(x, y) | Lt(x, y) | Le(x, y) | Eq(x, y) | And(x, y) | Or(x, y) => {
                vec![x, y]
            }
            Sum(bd) | Prod(bd) | Min(bd) => vec![&bd.bound, &bd.body],
        }
    }

    fn visit(&self, f: &mut impl FnMut(&PrExpr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Rebuilds the tree, applying `f` to every leaf with the number of
    /// binders above it.
    fn map_leaves(&self, depth: usize, f: &impl Fn(&PrExpr, usize) -> PrExpr) -> PrExpr {
        use PrExpr::*;
        let m = |e: &PrExpr| b(e.map_leaves(depth, f));
        match self {
            Var(_) | Bound(_) | Const(_) => f(self, depth),
            Succ(a) => Succ(m(a)),
            Not(a) => Not(m(a)),
            Add(x, y) => Add(m(x), m(y)),
            Mul(x, y) => Mul(m(x), m(y)),
            Monus(x, y) => Monus(m(x), m(y)),
            Lt(x, y) => Lt(m(x), m(y)),
            Le(x, y) => Le(m(x), m(y)),
            Eq(x, y) => Eq(m(x), m(y)),
            And(x, y) => And(m(x), m(y)),
            Or(x, y) => Or(m(x), m(y)),
            Sum(bd) => Sum(bd.map(depth, f)),
            Prod(bd) => Prod(bd.map(depth, f)),
            Min(bd) => Min(bd.map(depth, f)),
        }
    }

    /// Adjusts bound indices for use under `by` more binders.
    pub fn lift(&self, by: usize) -> PrExpr {
        self.map_leaves(0, &|e, d| match e {
            PrExpr::Bound(j) if *j >= d => PrExpr::Bound(j + by),
            _ => e.clone(),
        })
    }

    /// Renumbers free variables: `Var(i)` becomes `Var(i + offset)`.
    pub fn shift(&self, offset: usize) -> PrExpr {
        self.map_leaves(0, &|e, _| match e {
            PrExpr::Var(i) => PrExpr::Var(i + offset),
            _ => e.clone(),
        })
    }

    /// Replaces free variable `i` by `subst[i]` for every `i < subst.len()`.
    /// Dangling `Bound` indices in `subst` refer to binders enclosing the
    /// result, and are lifted past the binders they land under.
    pub fn substitute(&self, subst: &[PrExpr]) -> PrExpr {
        self.map_leaves(0, &|e, d| match e {
            PrExpr::Var(i) if *i < subst.len() => subst[*i].lift(d),
            _ => e.clone(),
        })
    }

    pub fn eval(&self, args: &[u64]) -> Result<u64, EvalError> {
        let needed = self.needed_arity();
        if args.len() < needed {
            return Err(EvalError::Arity { needed, given: args.len() });
        }
        self.eval_in(args, &mut Vec::new())
    }

    /// `stack` holds bound values, innermost last.
    fn eval_in(&self, args: &[u64], stack: &mut Vec<u64>) -> Result<u64, EvalError> {
        use PrExpr::*;
        let bit = |c: bool| u64::from(c);
        Ok(match self {
            Var(i) => args[*i],
            Bound(j) => stack[stack.len() - 1 - j],
            Const(n) => *n,
            Succ(a) => a.eval_in(args, stack)?.checked_add(1).ok_or(EvalError::Overflow)?,
            Add(x, y) => x.eval_in(args, stack)?.checked_add(y.eval_in(args, stack)?).ok_or(EvalError::Overflow)?,
            Mul(x, y) => match x.eval_in(args, stack)? {
                0 => 0,
                a => a.checked_mul(y.eval_in(args, stack)?).ok_or(EvalError::Overflow)?,
            },
            Monus(x, y) => x.eval_in(args, stack)?.saturating_sub(y.eval_in(args, stack)?),
            Lt(x, y) => bit(x.eval_in(args, stack)? < y.eval_in(args, stack)?),
            Le(x, y) => bit(x.eval_in(args, stack)? <= y.eval_in(args, stack)?),
            Eq(x, y) => bit(x.eval_in(args, stack)? == y.eval_in(args, stack)?),
            And(x, y) => bit(x.eval_in(args, stack)? != 0 && y.eval_in(args, stack)? != 0),
            Or(x, y) => bit(x.eval_in(args, stack)? != 0 || y.eval_in(args, stack)? != 0),
            Not(a) => bit(a.eval_in(args, stack)? == 0),
            Sum(bd) => {
                let n = bd.bound.eval_in(args, stack)?;
                let mut acc: u64 = 0;
                for y in 0..n {
                    stack.push(y);
                    let v = bd.body.eval_in(args, stack);
                    stack.pop();
                    acc = acc.checked_add(v?).ok_or(EvalError::Overflow)?;
                }
                acc
            }
            Prod(bd) => {
                let n = bd.bound.eval_in(args, stack)?;
                let mut acc: u64 = 1;
                for y in 0..n {
                    stack.push(y);
                    let v = bd.body.eval_in(args, stack);
                    stack.pop();
                    acc = acc.checked_mul(v?).ok_or(EvalError::Overflow)?;
                }
                acc
            }
            Min(bd) => {
                let n = bd.bound.eval_in(args, stack)?;
                let mut found = n;
                for y in 0..n {
                    stack.push(y);
                    let v = bd.body.eval_in(args, stack);
                    stack.pop();
                    if v? != 0 {
                        found = y;
                        break;
                    }
                }
                found
            }
        })
    }

    pub fn parse(text: &str, free: &[&str]) -> Result<PrExpr, ExprParseError> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let mut bound: Vec<String> = Vec::new();
        let e = parse_expr(&tokens, &mut pos, free, &mut bound)?;
        if pos != tokens.len() {
            return Err(ExprParseError::Unexpected(tokens[pos].clone()));
        }
        Ok(e)
    }

    /// Prints with the given free-variable names; binders print their own.
    pub fn to_sexpr(&self, free: &[&str]) -> String {
        let mut out = String::new();
        self.write(free, &mut Vec::new(), &mut out);
        out
    }

    fn write(&self, free: &[&str], scope: &mut Vec<String>, out: &mut String) {
        use PrExpr::*;
        let bin = |op: &str, x: &PrExpr, y: &PrExpr, scope: &mut Vec<String>, out: &mut String| {
            out.push('(');
            out.push_str(op);
            out.push(' ');
            x.write(free, scope, out);
            out.push(' ');
            y.write(free, scope, out);
            out.push(')');
        };
        match self {
            Var(i) => match free.get(*i) {
                Some(n) => out.push_str(n),
                None => out.push_str(&format!("v{i}")),
            },
            Bound(j) => match scope.len().checked_sub(j + 1) {
                Some(k) => out.push_str(&scope[k]),
                None => out.push_str(&format!("b{j}")),
            },
            Const(n) => out.push_str(&n.to_string()),
            Succ(a) | Not(a) => {
                out.push_str(if matches!(self, Succ(_)) { "(S " } else { "(not " });
                a.write(free, scope, out);
                out.push(')');
            }
            Add(x, y) => bin("+", x, y, scope, out),
            Mul(x, y) => bin("*", x, y, scope, out),
            Monus(x, y) => bin("-", x, y, scope, out),
            Lt(x, y) => bin("<", x, y, scope, out),
            Le(x, y) => bin("<=", x, y, scope, out),
            Eq(x, y) => bin("=", x, y, scope, out),
            And(x, y) => bin("and", x, y, scope, out),
            Or(x, y) => bin("or", x, y, scope, out),
            Sum(bd) | Prod(bd) | Min(bd) => {
                let op = match self {
                    Sum(_) => "sum",
                    Prod(_) => "prod",
                    _ => "min",
                };
                // Rename rather than shadow a visible name.
                let mut name = bd.name.clone();
                let mut k = 1;
                while scope.contains(&name) || free.contains(&name.as_str()) {
                    name = format!("{}{k}", bd.name);
                    k += 1;
                }
                out.push_str(&format!("({op} {name} "));
                bd.bound.write(free, scope, out);
                out.push(' ');
                scope.push(name);
                bd.body.write(free, scope, out);
                scope.pop();
                out.push(')');
            }
        }
    }
}

impl Binder {
    fn map(&self, depth: usize, f: &impl Fn(&PrExpr, usize) -> PrExpr) -> Binder {
        Binder {
            name: self.name.clone(),
            bound: b(self.bound.map_leaves(depth, f)),
            body: b(self.body.map_leaves(depth + 1, f)),
        }
    }
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == ';' {
            for d in chars.by_ref() {
                if d == '\n' {
                    break;
                }
            }
            continue;
        }
        if c == '(' || c == ')' || c.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_expr(
    tokens: &[String],
    pos: &mut usize,
    free: &[&str],
    scope: &mut Vec<String>,
) -> Result<PrExpr, ExprParseError> {
    let tok = tokens.get(*pos).ok_or(ExprParseError::Eof)?.clone();
    *pos += 1;
    if tok == ")" {
        return Err(ExprParseError::Unexpected(tok));
    }
    if tok != "(" {
        if tok.chars().all(|c| c.is_ascii_digit()) {
            return tok.parse().map(PrExpr::Const).map_err(|_| ExprParseError::Numeral(tok));
        }
        if let Some(k) = scope.iter().rposition(|v| *v == tok) {
            return Ok(PrExpr::Bound(scope.len() - 1 - k));
        }
        return free.iter().position(|v| *v == tok).map(PrExpr::Var).ok_or(ExprParseError::UnknownVar(tok));
    }
    let op = tokens.get(*pos).ok_or(ExprParseError::Eof)?.clone();
    *pos += 1;
    let e = match op.as_str() {
        "sum" | "prod" | "min" => {
            let name = tokens.get(*pos).ok_or(ExprParseError::Eof)?.clone();
            if name == "(" || name == ")" {
                return Err(ExprParseError::Unexpected(name));
            }
            *pos += 1;
            let bound = parse_expr(tokens, pos, free, scope)?;
            scope.push(name.clone());
            let body = parse_expr(tokens, pos, free, scope);
            scope.pop();
            let bd = Binder { name, bound: b(bound), body: b(body?) };
            match op.as_str() {
                "sum" => PrExpr::Sum(bd),
                "prod" => PrExpr::Prod(bd),
                _ => PrExpr::Min(bd),
            }
        }
        _ => {
            let mut args = Vec::new();
            while tokens.get(*pos).map(String::as_str) != Some(")") {
                if *pos >= tokens.len() {
                    return Err(ExprParseError::Eof);
                }
                args.push(parse_expr(tokens, pos, free, scope)?);
            }
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(ExprParseError::Arity { op: op.clone(), expected: n, found: args.len() })
                }
            };
            let mut it = args.clone().into_iter();
            let mut next = || it.next().expect("arity checked");
            match op.as_str() {
                "S" => {
                    arity(1)?;
                    PrExpr::succ(next())
                }
                "not" => {
                    arity(1)?;
                    PrExpr::not(next())
                }
                "+" | "*" | "-" | "<" | "<=" | "=" | "and" | "or" => {
                    arity(2)?;
                    let (x, y) = (next(), next());
                    match op.as_str() {
                        "+" => PrExpr::add(x, y),
                        "*" => PrExpr::mul(x, y),
                        "-" => PrExpr::monus(x, y),
                        "<" => PrExpr::lt(x, y),
                        "<=" => PrExpr::le(x, y),
                        "=" => PrExpr::eq(x, y),
                        "and" => PrExpr::and(x, y),
                        _ => PrExpr::or(x, y),
                    }
                }
                _ => return Err(ExprParseError::UnknownOp(op)),
            }
        }
    };
    match tokens.get(*pos).map(String::as_str) {
        Some(")") => {
            *pos += 1;
            Ok(e)
        }
        Some(t) => Err(ExprParseError::Unexpected(t.to_string())),
        None => Err(ExprParseError::Eof),
    }
}

impl fmt::Display for PrExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr(&[]))
    }
}

/// An expression together with the names of its free variables, serialized
/// as `{"vars": [...], "expr": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedExpr {
    pub vars: Vec<String>,
    pub expr: PrExpr,
}

#[derive(Serialize, Deserialize)]
struct NamedExprRepr {
    vars: Vec<String>,
    expr: String,
}

impl Serialize for NamedExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        NamedExprRepr { vars: self.vars.clone(), expr: self.expr.to_sexpr(&vars) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NamedExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = NamedExprRepr::deserialize(d)?;
        let vars: Vec<&str> = r.vars.iter().map(String::as_str).collect();
        let expr = PrExpr::parse(&r.expr, &vars).map_err(serde::de::Error::custom)?;
        Ok(NamedExpr { vars: r.vars, expr })
    }
}

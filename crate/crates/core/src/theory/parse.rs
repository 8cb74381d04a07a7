//! Parser for the line-oriented `.eat` theory format.
//!
//! ```text
//! # comment
//! theory monoid
//! sort M
//! sort Obj0 rank 0
//! op e : -> M
//! op mul : M M -> M total
//! axiom unit [x : M]
//!     => mul(e, x) = x, mul(x, e) = x
//! axiom assoc [x y z : M] def(mul(mul(x, y), z)), def(mul(x, mul(y, z)))
//!     => mul(mul(x, y), z) = mul(x, mul(y, z))
//! ```
//!
//! A statement starts at column 1 with a keyword (`theory`, `sort`, `op`,
//! `axiom`); indented lines continue the previous statement. Inside an axiom
//! the atoms before `=>` form the premise, the atoms after it the conclusion.
//! An atom is `def(t)` or `s = t`. A bare identifier is a variable when it is
//! bound by the axiom context, a constant when an operation of that name is
//! declared, and an (unbound) variable otherwise; `c()` is always a constant.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use super::{Atom, Axiom, OpSymbol, Sort, Term, TheoryPresentation};

const KEYWORDS: &[&str] = &["theory", "sort", "op", "axiom", "rank", "total", "def"];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
    #[error("unknown sort `{0}` in signature")]
    UnknownSort(String),
}

/// 1-based source positions of every declaration, by index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub sorts: Vec<(usize, usize)>,
    pub ops: Vec<(usize, usize)>,
    pub axioms: Vec<(usize, usize)>,
}

pub fn parse_theory(text: &str) -> Result<TheoryPresentation, ParseError> {
    parse_theory_spanned(text).map(|(t, _)| t)
}

pub fn parse_theory_spanned(text: &str) -> Result<(TheoryPresentation, SourceMap), ParseError> {
    let statements = split_statements(text);
    let mut theory = TheoryPresentation::default();
    let mut spans = SourceMap::default();
    let mut raw_axioms = Vec::new();
    let mut seen_name = false;

    for stmt in statements {
        let tokens = tokenize(&stmt)?;
        let mut cur = Cursor::new(&tokens, stmt.end_pos());
        let (kw, kw_pos) = cur.ident()?;
        match kw.as_str() {
            "theory" => {
                if seen_name {
                    return Err(err(kw_pos, ParseErrorKind::Syntax("second `theory` line".into())));
                }
                let (name, _) = cur.ident()?;
                theory.name = name;
                seen_name = true;
            }
            "sort" => {
                let (name, pos) = cur.name()?;
                if theory.sort_index(&name).is_some() {
                    return Err(err(pos, ParseErrorKind::Duplicate { what: "sort", name }));
                }
                if cur.peek_ident("rank") {
                    cur.ident()?;
                    let rank = cur.number()?;
                    theory.ranks.insert(name.clone(), rank);
                }
                theory.sorts.push(Sort::new(name));
                spans.sorts.push(pos);
            }
            "op" => {
                let (name, pos) = cur.name()?;
                if theory.op_index(&name).is_some() {
                    return Err(err(pos, ParseErrorKind::Duplicate { what: "op", name }));
                }
                cur.expect(&Tok::Colon)?;
                let mut args = Vec::new();
                while !cur.at(&Tok::Arrow) {
                    let (s, spos) = cur.ident()?;
                    if theory.sort_index(&s).is_none() {
                        return Err(err(spos, ParseErrorKind::UnknownSort(s)));
                    }
                    args.push(s);
                }
                cur.expect(&Tok::Arrow)?;
                let (result, rpos) = cur.ident()?;
                if theory.sort_index(&result).is_none() {
                    return Err(err(rpos, ParseErrorKind::UnknownSort(result)));
                }
                let total = if cur.peek_ident("total") {
                    cur.ident()?;
                    true
                } else {
                    false
                };
                theory.ops.push(OpSymbol { name, args, result, total });
                spans.ops.push(pos);
            }
            "axiom" => {
                let (name, pos) = cur.name()?;
                if raw_axioms.iter().any(|a: &RawAxiom| a.name == name) {
                    return Err(err(pos, ParseErrorKind::Duplicate { what: "axiom", name }));
                }
                let context = parse_context(&mut cur)?;
                let mut premise = Vec::new();
                if !cur.at(&Tok::Implies) {
                    premise = parse_atoms(&mut cur)?;
                }
                cur.expect(&Tok::Implies)?;
                let conclusion = if cur.done() { Vec::new() } else { parse_atoms(&mut cur)? };
                raw_axioms.push(RawAxiom { name, context, premise, conclusion });
                spans.axioms.push(pos);
            }
            other => {
                return Err(err(
                    kw_pos,
                    ParseErrorKind::Syntax(format!("expected `theory`, `sort`, `op` or `axiom`, found `{other}`")),
                ))
            }
        }
        cur.finish()?;
    }

    let ops: HashSet<String> = theory.ops.iter().map(|o| o.name.clone()).collect();
    for raw in raw_axioms {
        let bound: HashSet<&str> = raw.context.iter().map(|(v, _)| v.as_str()).collect();
        let resolve = |a: &RawAtom| a.resolve(&bound, Some(&ops));
        theory.axioms.push(Axiom {
            name: raw.name.clone(),
            context: raw.context.clone(),
            premise: raw.premise.iter().map(resolve).collect(),
            conclusion: raw.conclusion.iter().map(resolve).collect(),
        });
    }
    Ok((theory, spans))
}

/// Parses a single term; identifiers in `vars` become variables.
pub fn parse_term(text: &str, vars: &[&str]) -> Result<Term, ParseError> {
    let stmt = Statement { lines: vec![(1, text.to_string())] };
    let tokens = tokenize(&stmt)?;
    let mut cur = Cursor::new(&tokens, stmt.end_pos());
    let raw = parse_raw_term(&mut cur)?;
    cur.finish()?;
    let bound: HashSet<&str> = vars.iter().copied().collect();
    Ok(raw.resolve(&bound, None))
}

/// Parses a single atom (`s = t` or `def(t)`); identifiers in `vars` become variables.
pub fn parse_atom(text: &str, vars: &[&str]) -> Result<Atom, ParseError> {
    let stmt = Statement { lines: vec![(1, text.to_string())] };
    let tokens = tokenize(&stmt)?;
    let mut cur = Cursor::new(&tokens, stmt.end_pos());
    let raw = parse_raw_atom(&mut cur)?;
    cur.finish()?;
    let bound: HashSet<&str> = vars.iter().copied().collect();
    Ok(raw.resolve(&bound, None))
}

fn err(pos: (usize, usize), kind: ParseErrorKind) -> ParseError {
    ParseError { line: pos.0, col: pos.1, kind }
}

struct Statement {
    lines: Vec<(usize, String)>,
}

impl Statement {
    fn end_pos(&self) -> (usize, usize) {
        let (line, text) = self.lines.last().expect("statement has a line");
        (*line, text.chars().count() + 1)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn split_statements(text: &str) -> Vec<Statement> {
    let mut out: Vec<Statement> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = strip_comment(line);
        if body.trim().is_empty() {
            continue;
        }
        let continuation = body.starts_with(' ') || body.starts_with('\t');
        match out.last_mut() {
            Some(stmt) if continuation => stmt.lines.push((i + 1, body.to_string())),
            _ => out.push(Statement { lines: vec![(i + 1, body.to_string())] }),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Arrow,
    Implies,
    Equals,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::Equals => "`=`".into(),
        }
    }
}

type Spanned = (Tok, (usize, usize));

fn tokenize(stmt: &Statement) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (line, text) in &stmt.lines {
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = (*line, i + 1);
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse()
                    .map_err(|_| err(pos, ParseErrorKind::Syntax(format!("number `{s}` out of range"))))?;
                out.push((Tok::Num(n), pos));
                continue;
            }
            let next = chars.get(i + 1).copied();
            let (tok, width) = match (c, next) {
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('=', Some('>')) => (Tok::Implies, 2),
                ('=', _) => (Tok::Equals, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                (':', _) => (Tok::Colon, 1),
                _ => return Err(err(pos, ParseErrorKind::Syntax(format!("unexpected character `{c}`")))),
            };
            out.push((tok, pos));
            i += width;
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    fn new(tokens: &'a [Spanned], end: (usize, usize)) -> Self {
        Cursor { tokens, pos: 0, end }
    }

    fn peek(&self) -> Option<&'a Spanned> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn done(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn at(&self, tok: &Tok) -> bool {
        matches!(self.peek(), Some((t, _)) if t == tok)
    }

    fn peek_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some((Tok::Ident(s), _)) if s == word)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            Some((t, _)) => t.describe(),
            None => "end of statement".to_string(),
        };
        err(self.here(), ParseErrorKind::Syntax(format!("expected {wanted}, found {found}")))
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.at(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self) -> Result<(String, (usize, usize)), ParseError> {
        match self.peek() {
            Some((Tok::Ident(s), p)) => {
                self.pos += 1;
                Ok((s.clone(), *p))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    /// An identifier that is not a reserved word.
    fn name(&mut self) -> Result<(String, (usize, usize)), ParseError> {
        let (s, p) = self.ident()?;
        if KEYWORDS.contains(&s.as_str()) {
            return Err(err(p, ParseErrorKind::Syntax(format!("`{s}` is a reserved word"))));
        }
        Ok((s, p))
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some((Tok::Num(n), _)) => {
                self.pos += 1;
                Ok(*n)
            }
            _ => Err(self.unexpected("number")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.done() {
            Ok(())
        } else {
            Err(self.unexpected("end of statement"))
        }
    }
}

struct RawAxiom {
    name: String,
    context: Vec<(String, String)>,
    premise: Vec<RawAtom>,
    conclusion: Vec<RawAtom>,
}

enum RawTerm {
    Ident(String),
    Call(String, Vec<RawTerm>),
}

impl RawTerm {
    /// With `ops` given, an unbound bare identifier that names no operation
    /// stays a variable so that validation can report it as unbound.
    fn resolve(&self, bound: &HashSet<&str>, ops: Option<&HashSet<String>>) -> Term {
        match self {
            RawTerm::Ident(s) if bound.contains(s.as_str()) => Term::Var(s.clone()),
            RawTerm::Ident(s) if ops.is_some_and(|o| !o.contains(s)) => Term::Var(s.clone()),
            RawTerm::Ident(s) => Term::App(s.clone(), Vec::new()),
            RawTerm::Call(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| a.resolve(bound, ops)).collect())
            }
        }
    }
}

enum RawAtom {
    Eq(RawTerm, RawTerm),
    Defined(RawTerm),
}

impl RawAtom {
    fn resolve(&self, bound: &HashSet<&str>, ops: Option<&HashSet<String>>) -> Atom {
        match self {
            RawAtom::Eq(l, r) => Atom::Eq(l.resolve(bound, ops), r.resolve(bound, ops)),
            RawAtom::Defined(t) => Atom::Defined(t.resolve(bound, ops)),
        }
    }
}

fn parse_context(cur: &mut Cursor) -> Result<Vec<(String, String)>, ParseError> {
    cur.expect(&Tok::LBracket)?;
    let mut ctx: Vec<(String, String)> = Vec::new();
    let mut positions = BTreeMap::new();
    if cur.at(&Tok::RBracket) {
        cur.pos += 1;
        return Ok(ctx);
    }
    loop {
        let mut names = Vec::new();
        while !cur.at(&Tok::Colon) {
            names.push(cur.name()?);
        }
        if names.is_empty() {
            return Err(cur.unexpected("variable name"));
        }
        cur.expect(&Tok::Colon)?;
        let (sort, _) = cur.ident()?;
        for (n, p) in names {
            if positions.insert(n.clone(), p).is_some() {
                return Err(err(p, ParseErrorKind::Duplicate { what: "variable", name: n }));
            }
            ctx.push((n, sort.clone()));
        }
        if cur.at(&Tok::Comma) {
            cur.pos += 1;
            continue;
        }
        cur.expect(&Tok::RBracket)?;
        return Ok(ctx);
    }
}

fn parse_atoms(cur: &mut Cursor) -> Result<Vec<RawAtom>, ParseError> {
    let mut atoms = vec![parse_raw_atom(cur)?];
    while cur.at(&Tok::Comma) {
        cur.pos += 1;
        atoms.push(parse_raw_atom(cur)?);
    }
    Ok(atoms)
}

fn parse_raw_atom(cur: &mut Cursor) -> Result<RawAtom, ParseError> {
    if cur.peek_ident("def") {
        cur.pos += 1;
        cur.expect(&Tok::LParen)?;
        let t = parse_raw_term(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(RawAtom::Defined(t));
    }
    let lhs = parse_raw_term(cur)?;
    cur.expect(&Tok::Equals)?;
    let rhs = parse_raw_term(cur)?;
    Ok(RawAtom::Eq(lhs, rhs))
}

fn parse_raw_term(cur: &mut Cursor) -> Result<RawTerm, ParseError> {
    let (name, _) = cur.name()?;
    if !cur.at(&Tok::LParen) {
        return Ok(RawTerm::Ident(name));
    }
    cur.pos += 1;
    let mut args = Vec::new();
    if cur.at(&Tok::RParen) {
        cur.pos += 1;
        return Ok(RawTerm::Call(name, args));
    }
    loop {
        args.push(parse_raw_term(cur)?);
        if cur.at(&Tok::Comma) {
            cur.pos += 1;
            continue;
        }
        cur.expect(&Tok::RParen)?;
        return Ok(RawTerm::Call(name, args));
    }
}

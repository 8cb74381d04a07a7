//! Finitely presented essentially algebraic theories in partial Horn form.
//!
//! A [`TheoryPresentation`] is a list of sorts, partial operation symbols and
//! Horn axioms whose atoms are equations and definedness assertions. The
//! concrete `.eat` syntax is handled by [`parse`] and [`print`], static checks
//! by [`validate`], and theory extensions by [`morphism`].

pub mod morphism;
pub mod parse;
pub mod print;
pub mod validate;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use morphism::{check_inclusion, ChainError, TheoryChain, TheoryMorphism};
pub use parse::{parse_atom, parse_term, parse_theory, parse_theory_spanned, ParseError, SourceMap};
pub use print::print_theory;
pub use validate::{validate, Diagnostic, Location, Severity};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sort {
    pub name: String,
}

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort { name: name.into() }
    }
}

/// A partial operation symbol. `total` is a documentation hint only: whether
/// an application is defined is decided by the axioms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub args: Vec<String>,
    pub result: String,
    pub total: bool,
}

impl OpSymbol {
    pub fn new(name: impl Into<String>, args: &[&str], result: impl Into<String>) -> Self {
        OpSymbol {
            name: name.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
            result: result.into(),
            total: false,
        }
    }

    pub fn total(mut self) -> Self {
        self.total = true;
        self
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

/// Terms over a signature. Variables carry only their name; their sort comes
/// from the context of the enclosing axiom (or from the element bound to them).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<String>) -> Term {
        Term::App(op.into(), Vec::new())
    }

    /// Visits every variable occurrence, left to right.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Term::Var(v) => f(v),
            Term::App(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
        }
    }

    pub fn rename_vars(&self, map: &impl Fn(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(map(v)),
            Term::App(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| a.rename_vars(map)).collect())
            }
        }
    }

    pub fn rename_ops(&self, map: &impl Fn(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(v.clone()),
            Term::App(op, args) => {
                Term::App(map(op), args.iter().map(|a| a.rename_ops(map)).collect())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Eq(Term, Term),
    Defined(Term),
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Eq(l, r) => vec![l, r],
            Atom::Defined(t) => vec![t],
        }
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Atom {
        match self {
            Atom::Eq(l, r) => Atom::Eq(f(l), f(r)),
            Atom::Defined(t) => Atom::Defined(f(t)),
        }
    }
}

/// A Horn sequent `context | premise ⊢ conclusion`.
///
/// Premise atoms are matched with Kleene semantics (both sides of an equation
/// must already be defined and equal). Conclusion atoms are strong: an
/// equation asserts that both sides are defined and equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Axiom {
    pub name: String,
    pub context: Vec<(String, String)>,
    pub premise: Vec<Atom>,
    pub conclusion: Vec<Atom>,
}

impl Axiom {
    pub fn new(
        name: impl Into<String>,
        context: &[(&str, &str)],
        premise: Vec<Atom>,
        conclusion: Vec<Atom>,
    ) -> Self {
        Axiom {
            name: name.into(),
            context: context
                .iter()
                .map(|(v, s)| (v.to_string(), s.to_string()))
                .collect(),
            premise,
            conclusion,
        }
    }

    pub fn var_sort(&self, var: &str) -> Option<&str> {
        self.context
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, s)| s.as_str())
    }

    /// The axiom with context variables renamed to `v0, v1, ...` in context
    /// order and the name cleared, used to compare axioms up to renaming.
    pub fn alpha_normal(&self) -> Axiom {
        let index: BTreeMap<&str, usize> = self
            .context
            .iter()
            .enumerate()
            .map(|(i, (v, _))| (v.as_str(), i))
            .collect();
        let rename = |v: &str| match index.get(v) {
            Some(i) => format!("v{i}"),
            None => format!("free:{v}"),
        };
        let rn = |t: &Term| t.rename_vars(&rename);
        Axiom {
            name: String::new(),
            context: self
                .context
                .iter()
                .enumerate()
                .map(|(i, (_, s))| (format!("v{i}"), s.clone()))
                .collect(),
            premise: self.premise.iter().map(|a| a.map_terms(&rn)).collect(),
            conclusion: self.conclusion.iter().map(|a| a.map_terms(&rn)).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoryPresentation {
    pub name: String,
    pub sorts: Vec<Sort>,
    pub ops: Vec<OpSymbol>,
    pub axioms: Vec<Axiom>,
    /// Optional rank index per sort, used by the ranked-topos generators.
    pub ranks: BTreeMap<String, usize>,
}

impl TheoryPresentation {
    pub fn new(name: impl Into<String>) -> Self {
        TheoryPresentation {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn sort_index(&self, name: &str) -> Option<usize> {
        self.sorts.iter().position(|s| s.name == name)
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn op(&self, name: &str) -> Option<&OpSymbol> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn add_sort(&mut self, name: &str) -> &mut Self {
        self.sorts.push(Sort::new(name));
        self
    }

    pub fn add_op(&mut self, op: OpSymbol) -> &mut Self {
        self.ops.push(op);
        self
    }

    pub fn add_axiom(&mut self, axiom: Axiom) -> &mut Self {
        self.axioms.push(axiom);
        self
    }

    /// Sort of `term` in the context of `axiom_context`, if it can be inferred.
    pub fn term_sort<'a>(&'a self, term: &Term, context: &'a [(String, String)]) -> Option<&'a str> {
        match term {
            Term::Var(v) => context
                .iter()
                .find(|(name, _)| name == v)
                .map(|(_, s)| s.as_str()),
            Term::App(op, _) => self.op(op).map(|o| o.result.as_str()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) if args.is_empty() => write!(f, "{op}"),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(l, r) => write!(f, "{l} = {r}"),
            Atom::Defined(t) => write!(f, "def({t})"),
        }
    }
}

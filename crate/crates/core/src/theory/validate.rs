//! Static checks on a presentation: declared symbols, scoping and sorting.

use std::collections::HashSet;

use serde::Serialize;

use super::{Atom, Axiom, SourceMap, Term, TheoryPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Theory,
    Sort(usize),
    Op(usize),
    Axiom(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub location: Location,
}

#[derive(Serialize)]
struct DiagnosticLine<'a> {
    severity: Severity,
    message: &'a str,
    line: Option<usize>,
    col: Option<usize>,
}

impl Diagnostic {
    fn error(location: Location, message: String) -> Self {
        Diagnostic { severity: Severity::Error, message, location }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    pub fn position(&self, spans: Option<&SourceMap>) -> Option<(usize, usize)> {
        let spans = spans?;
        match self.location {
            Location::Theory => None,
            Location::Sort(i) => spans.sorts.get(i).copied(),
            Location::Op(i) => spans.ops.get(i).copied(),
            Location::Axiom(i) => spans.axioms.get(i).copied(),
        }
    }

    /// One JSON object `{severity, message, line, col}`; positions are null
    /// when no source map is available.
    pub fn to_json_line(&self, spans: Option<&SourceMap>) -> String {
        let pos = self.position(spans);
        serde_json::to_string(&DiagnosticLine {
            severity: self.severity,
            message: &self.message,
            line: pos.map(|p| p.0),
            col: pos.map(|p| p.1),
        })
        .expect("diagnostic serializes")
    }
}

pub fn validate(theory: &TheoryPresentation) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, s) in theory.sorts.iter().enumerate() {
        if !seen.insert(s.name.as_str()) {
            out.push(Diagnostic::error(Location::Sort(i), format!("duplicate sort `{}`", s.name)));
        }
    }
    for sort in theory.ranks.keys() {
        if theory.sort_index(sort).is_none() {
            out.push(Diagnostic::error(
                Location::Theory,
                format!("rank annotation for undeclared sort `{sort}`"),
            ));
        }
    }
    let mut seen = HashSet::new();
    for (i, op) in theory.ops.iter().enumerate() {
        if !seen.insert(op.name.as_str()) {
            out.push(Diagnostic::error(Location::Op(i), format!("duplicate op `{}`", op.name)));
        }
        for s in op.args.iter().chain(std::iter::once(&op.result)) {
            if theory.sort_index(s).is_none() {
                out.push(Diagnostic::error(
                    Location::Op(i),
                    format!("op `{}` uses undeclared sort `{s}`", op.name),
                ));
            }
        }
    }
    let mut seen = HashSet::new();
    for (i, ax) in theory.axioms.iter().enumerate() {
        if !seen.insert(ax.name.as_str()) {
            out.push(Diagnostic::error(Location::Axiom(i), format!("duplicate axiom `{}`", ax.name)));
        }
        AxiomChecker { theory, axiom: ax, index: i, out: &mut out }.run();
    }
    out
}

struct AxiomChecker<'a> {
    theory: &'a TheoryPresentation,
    axiom: &'a Axiom,
    index: usize,
    out: &'a mut Vec<Diagnostic>,
}

impl AxiomChecker<'_> {
    fn report(&mut self, msg: String) {
        self.out.push(Diagnostic::error(
            Location::Axiom(self.index),
            format!("axiom `{}`: {msg}", self.axiom.name),
        ));
    }

    fn run(&mut self) {
        let mut vars = HashSet::new();
        for (v, s) in &self.axiom.context {
            if !vars.insert(v.as_str()) {
                self.report(format!("variable `{v}` bound twice"));
            }
            if self.theory.sort_index(s).is_none() {
                self.report(format!("variable `{v}` has undeclared sort `{s}`"));
            }
        }
        for atom in self.axiom.premise.iter().chain(&self.axiom.conclusion) {
            self.atom(atom);
        }
        let mut used = HashSet::new();
        for atom in self.axiom.premise.iter().chain(&self.axiom.conclusion) {
            for t in atom.terms() {
                t.for_each_var(&mut |v| {
                    used.insert(v.to_string());
                });
            }
        }
        for (v, _) in &self.axiom.context {
            if !used.contains(v) {
                self.out.push(Diagnostic {
                    severity: Severity::Warning,
                    message: format!("axiom `{}`: variable `{v}` is never used", self.axiom.name),
                    location: Location::Axiom(self.index),
                });
            }
        }
    }

    fn atom(&mut self, atom: &Atom) {
        match atom {
            Atom::Defined(t) => {
                self.term(t);
            }
            Atom::Eq(l, r) => {
                let (ls, rs) = (self.term(l), self.term(r));
                if let (Some(ls), Some(rs)) = (ls, rs) {
                    if ls != rs {
                        self.report(format!("sort mismatch in `{l} = {r}`: `{ls}` vs `{rs}`"));
                    }
                }
            }
        }
    }

    /// Returns the sort of a well-formed term; reports at most one problem
    /// per offending subterm.
    fn term(&mut self, t: &Term) -> Option<String> {
        match t {
            Term::Var(v) => match self.axiom.var_sort(v) {
                Some(s) => Some(s.to_string()),
                None => {
                    self.report(format!("unbound variable `{v}`"));
                    None
                }
            },
            Term::App(name, args) => {
                let arg_sorts: Vec<Option<String>> = args.iter().map(|a| self.term(a)).collect();
                let Some(op) = self.theory.op(name) else {
                    self.report(format!("undeclared operation `{name}`"));
                    return None;
                };
                if op.args.len() != args.len() {
                    self.report(format!(
                        "`{name}` expects {} arguments, got {}",
                        op.args.len(),
                        args.len()
                    ));
                    return Some(op.result.clone());
                }
                for (k, (want, got)) in op.args.iter().zip(&arg_sorts).enumerate() {
                    if let Some(got) = got {
                        if got != want {
                            self.report(format!(
                                "sort mismatch: argument {} of `{name}` is `{got}`, expected `{want}`",
                                k + 1
                            ));
                        }
                    }
                }
                Some(op.result.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::{parse_theory, parse_theory_spanned};
    use super::*;

    const MONOID: &str = "sort M\nop e : -> M\nop mul : M M -> M\n\
        axiom mul_def [x y : M] => def(mul(x, y))\n\
        axiom unit [x : M] => mul(e, x) = x, mul(x, e) = x\n\
        axiom assoc [x y z : M] def(mul(mul(x, y), z)), def(mul(x, mul(y, z))) => mul(mul(x, y), z) = mul(x, mul(y, z))\n";

    #[test]
    fn valid_monoid_has_no_diagnostics() {
        let t = parse_theory(MONOID).unwrap();
        assert_eq!(validate(&t), vec![]);
    }

    #[test]
    fn unbound_variable() {
        let t = parse_theory("sort M\nop e : -> M\naxiom bad [] => x = e\n").unwrap();
        let d = validate(&t);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("unbound variable `x`"), "{d:?}");
    }

    #[test]
    fn sort_mismatch_in_equation() {
        let t = parse_theory("sort A\nsort B\naxiom bad [a : A, b : B] => a = b\n").unwrap();
        let d = validate(&t);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("sort mismatch"));
        assert!(d[0].is_error());
    }

    #[test]
    fn argument_sort_and_arity() {
        let t = parse_theory("sort A\nsort B\nop f : A -> A\naxiom bad [b : B] => def(f(b))\n").unwrap();
        let d = validate(&t);
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("argument 1"));
        let t = parse_theory("sort A\nop f : A -> A\naxiom bad [a : A] => def(f(a, a))\n").unwrap();
        assert_eq!(validate(&t).len(), 1);
        let t = parse_theory("sort A\naxiom bad [a : A] => def(g(a))\n").unwrap();
        assert!(validate(&t)[0].message.contains("undeclared operation `g`"));
    }

    #[test]
    fn unused_variable_is_a_warning() {
        let t = parse_theory("sort A\nop c : -> A\naxiom w [a : A] => def(c)\n").unwrap();
        let d = validate(&t);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
    }

    #[test]
    fn deterministic_and_positioned() {
        let (t, spans) = parse_theory_spanned("sort A\nsort B\naxiom bad [a : A, b : B] => a = b\n").unwrap();
        assert_eq!(validate(&t), validate(&t));
        let line = validate(&t)[0].to_json_line(Some(&spans));
        assert_eq!(
            line,
            r#"{"severity":"error","message":"axiom `bad`: sort mismatch in `a = b`: `A` vs `B`","line":3,"col":7}"#
        );
    }

    #[test]
    fn programmatic_duplicates() {
        let mut t = TheoryPresentation::default();
        t.add_sort("A").add_sort("A");
        assert_eq!(validate(&t).len(), 1);
    }
}

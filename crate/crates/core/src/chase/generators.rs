//! Generator sets: named constants per sort plus ground relations among them.
//!
//! Text form, one statement per line or separated by `;`:
//!
//! ```text
//! A B C : Obj
//! f g : Mor
//! dom(f) = A; cod(f) = B
//! ```

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::theory::{parse_atom, Atom, Term, TheoryPresentation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("statement {index}: {message}")]
    Syntax { index: usize, message: String },
    #[error("generator `{0}` declared twice")]
    Duplicate(String),
    #[error("generator `{name}` has undeclared sort `{sort}`")]
    UnknownSort { name: String, sort: String },
    #[error("relation {index}: {message}")]
    IllSorted { index: usize, message: String },
}

/// Generators are referred to in relations as variables (`Term::Var`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub constants: Vec<(String, String)>,
    pub relations: Vec<Atom>,
}

impl GeneratorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, names: &[&str], sort: &str) -> Self {
        for n in names {
            self.constants.push((n.to_string(), sort.to_string()));
        }
        self
    }

    pub fn relation(mut self, atom: Atom) -> Self {
        self.relations.push(atom);
        self
    }

    /// Adds `dom(f) = a` and `cod(f) = b` for each edge, for use with the
    /// theory of categories.
    pub fn graph(objects: &[&str], edges: &[(&str, &str, &str)]) -> Self {
        let mut g = GeneratorSet::new().with(objects, "Obj");
        for (name, _, _) in edges {
            g.constants.push((name.to_string(), "Mor".to_string()));
        }
        for (name, src, tgt) in edges {
            let f = Term::var(*name);
            g.relations
                .push(Atom::Eq(Term::app("dom", vec![f.clone()]), Term::var(*src)));
            g.relations.push(Atom::Eq(Term::app("cod", vec![f]), Term::var(*tgt)));
        }
        g
    }

    pub fn names(&self) -> Vec<&str> {
        self.constants.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn parse(text: &str) -> Result<Self, GeneratorError> {
        let mut g = GeneratorSet::new();
        let statements = text
            .split(['\n', ';'])
            .map(|s| s.split('#').next().unwrap_or("").trim())
            .filter(|s| !s.is_empty());
        for (index, stmt) in statements.enumerate() {
            let is_decl = stmt.contains(':') && !stmt.contains('=') && !stmt.contains('(');
            if is_decl {
                let (names, sort) = stmt.split_once(':').expect("contains ':'");
                let sort = sort.trim();
                let names: Vec<&str> = names.split_whitespace().collect();
                if names.is_empty() || sort.is_empty() || sort.contains(char::is_whitespace) {
                    return Err(GeneratorError::Syntax {
                        index,
                        message: format!("expected `names : Sort`, found `{stmt}`"),
                    });
                }
                g = g.with(&names, sort);
            } else {
                let names = g.names();
                let atom = parse_atom(stmt, &names)
                    .map_err(|e| GeneratorError::Syntax { index, message: e.to_string() })?;
                g.relations.push(atom);
            }
        }
        Ok(g)
    }

    pub fn check(&self, theory: &TheoryPresentation) -> Result<(), GeneratorError> {
        let mut seen = HashSet::new();
        for (name, sort) in &self.constants {
            if !seen.insert(name.as_str()) {
                return Err(GeneratorError::Duplicate(name.clone()));
            }
            if theory.sort_index(sort).is_none() {
                return Err(GeneratorError::UnknownSort { name: name.clone(), sort: sort.clone() });
            }
        }
        for (index, atom) in self.relations.iter().enumerate() {
            let sorts: Result<Vec<String>, String> =
                atom.terms().into_iter().map(|t| self.term_sort(theory, t)).collect();
            let sorts = sorts.map_err(|message| GeneratorError::IllSorted { index, message })?;
            if sorts.len() == 2 && sorts[0] != sorts[1] {
                return Err(GeneratorError::IllSorted {
                    index,
                    message: format!("sort mismatch in `{atom}`: `{}` vs `{}`", sorts[0], sorts[1]),
                });
            }
        }
        Ok(())
    }

    fn term_sort(&self, theory: &TheoryPresentation, t: &Term) -> Result<String, String> {
        match t {
            Term::Var(v) => self
                .constants
                .iter()
                .find(|(n, _)| n == v)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| format!("unknown generator `{v}`")),
            Term::App(op, args) => {
                let sym = theory.op(op).ok_or_else(|| format!("undeclared operation `{op}`"))?;
                if sym.args.len() != args.len() {
                    return Err(format!("`{op}` expects {} arguments, got {}", sym.args.len(), args.len()));
                }
                for (want, a) in sym.args.iter().zip(args) {
                    let got = self.term_sort(theory, a)?;
                    if &got != want {
                        return Err(format!("argument `{a}` of `{op}` is `{got}`, expected `{want}`"));
                    }
                }
                Ok(sym.result.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::parse_theory;

    #[test]
    fn parses_declarations_and_relations() {
        let g = GeneratorSet::parse("A B : Obj\nf : Mor; dom(f) = A\n# note\ncod(f) = B").unwrap();
        assert_eq!(g.constants.len(), 3);
        assert_eq!(g.relations.len(), 2);
        assert_eq!(g.relations[0], Atom::Eq(Term::app("dom", vec![Term::var("f")]), Term::var("A")));
        assert_eq!(g, GeneratorSet::graph(&["A", "B"], &[("f", "A", "B")]));
    }

    #[test]
    fn checks_against_theory() {
        let t = parse_theory("sort Obj\nsort Mor\nop dom : Mor -> Obj\n").unwrap();
        let g = GeneratorSet::parse("A : Obj; f : Mor; dom(f) = A").unwrap();
        assert_eq!(g.check(&t), Ok(()));
        let bad = GeneratorSet::parse("A : Obj; f : Mor; dom(A) = f").unwrap();
        assert!(matches!(bad.check(&t), Err(GeneratorError::IllSorted { .. })));
        let dup = GeneratorSet::parse("A A : Obj").unwrap();
        assert_eq!(dup.check(&t), Err(GeneratorError::Duplicate("A".into())));
        let unknown = GeneratorSet::parse("x : Nope").unwrap();
        assert!(matches!(unknown.check(&t), Err(GeneratorError::UnknownSort { .. })));
    }
}

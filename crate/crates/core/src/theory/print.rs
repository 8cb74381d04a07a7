//! Pretty-printer emitting the `.eat` grammar accepted by [`super::parse`].

use std::collections::HashSet;
use std::fmt::Write;

use super::{Atom, Axiom, Term, TheoryPresentation};

pub fn print_theory(theory: &TheoryPresentation) -> String {
    let mut out = String::new();
    if !theory.name.is_empty() {
        writeln!(out, "theory {}", theory.name).unwrap();
    }
    if !theory.sorts.is_empty() {
        out.push('\n');
        for sort in &theory.sorts {
            match theory.ranks.get(&sort.name) {
                Some(r) => writeln!(out, "sort {} rank {r}", sort.name).unwrap(),
                None => writeln!(out, "sort {}", sort.name).unwrap(),
            }
        }
    }
    if !theory.ops.is_empty() {
        out.push('\n');
        for op in &theory.ops {
            write!(out, "op {} :", op.name).unwrap();
            for a in &op.args {
                write!(out, " {a}").unwrap();
            }
            write!(out, " -> {}", op.result).unwrap();
            if op.total {
                out.push_str(" total");
            }
            out.push('\n');
        }
    }
    if !theory.axioms.is_empty() {
        out.push('\n');
        let ops: HashSet<&str> = theory.ops.iter().map(|o| o.name.as_str()).collect();
        for axiom in &theory.axioms {
            print_axiom(&mut out, axiom, &ops);
        }
    }
    out
}

fn print_axiom(out: &mut String, axiom: &Axiom, ops: &HashSet<&str>) {
    write!(out, "axiom {} [", axiom.name).unwrap();
    let mut i = 0;
    while i < axiom.context.len() {
        let sort = &axiom.context[i].1;
        let mut j = i;
        while j < axiom.context.len() && &axiom.context[j].1 == sort {
            j += 1;
        }
        if i > 0 {
            out.push_str(", ");
        }
        let names: Vec<&str> = axiom.context[i..j].iter().map(|(v, _)| v.as_str()).collect();
        write!(out, "{} : {sort}", names.join(" ")).unwrap();
        i = j;
    }
    out.push(']');
    let bound: HashSet<&str> = axiom.context.iter().map(|(v, _)| v.as_str()).collect();
    let printer = TermPrinter { bound: &bound, ops };
    if !axiom.premise.is_empty() {
        out.push(' ');
        printer.atoms(out, &axiom.premise);
    }
    out.push_str("\n    =>");
    if !axiom.conclusion.is_empty() {
        out.push(' ');
        printer.atoms(out, &axiom.conclusion);
    }
    out.push('\n');
}

struct TermPrinter<'a> {
    bound: &'a HashSet<&'a str>,
    ops: &'a HashSet<&'a str>,
}

impl TermPrinter<'_> {
    fn atoms(&self, out: &mut String, atoms: &[Atom]) {
        for (i, a) in atoms.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            match a {
                Atom::Eq(l, r) => {
                    self.term(out, l);
                    out.push_str(" = ");
                    self.term(out, r);
                }
                Atom::Defined(t) => {
                    out.push_str("def(");
                    self.term(out, t);
                    out.push(')');
                }
            }
        }
    }

    fn term(&self, out: &mut String, t: &Term) {
        match t {
            Term::Var(v) => out.push_str(v),
            Term::App(op, args) if args.is_empty() => {
                out.push_str(op);
                // A bare name would reparse as a variable.
                if self.bound.contains(op.as_str()) || !self.ops.contains(op.as_str()) {
                    out.push_str("()");
                }
            }
            Term::App(op, args) => {
                out.push_str(op);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.term(out, a);
                }
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_theory;
    use super::*;

    #[test]
    fn prints_grouped_context_and_shadowed_constants() {
        let src = "theory t\n\nsort A\nsort B rank 2\n\nop c : -> A\nop f : A B -> A total\n\naxiom a [x y : A, z : B, c : A] def(f(x, z))\n    => f(x, z) = c(), x = c\naxiom b []\n    =>\n";
        let t = parse_theory(src).unwrap();
        assert_eq!(print_theory(&t), src);
    }

    #[test]
    fn empty_theory_prints_empty() {
        assert_eq!(print_theory(&TheoryPresentation::default()), "");
    }
}

#![allow(dead_code)]

pub mod effective_gen;

use eatforge::theory::{parse_theory, Term, TheoryPresentation};

pub const MONOID: &str = "\
theory monoid
sort M
op e : -> M
op mul : M M -> M total
axiom mul_def [x y : M] => def(mul(x, y))
axiom unit [x : M] => mul(e, x) = x, mul(x, e) = x
axiom assoc [x y z : M] def(mul(mul(x, y), z)), def(mul(x, mul(y, z)))
    => mul(mul(x, y), z) = mul(x, mul(y, z))
";

pub fn monoid() -> TheoryPresentation {
    parse_theory(MONOID).unwrap()
}

pub fn commutative_monoid() -> TheoryPresentation {
    let text = MONOID.replace("theory monoid", "theory cmonoid")
        + "axiom comm [x y : M] => mul(x, y) = mul(y, x)\n";
    parse_theory(&text).unwrap()
}

/// The word a monoid term denotes, with generators as single letters.
pub fn word(t: &Term) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::App(op, args) if op == "e" && args.is_empty() => String::new(),
        Term::App(op, args) if op == "mul" && args.len() == 2 => word(&args[0]) + &word(&args[1]),
        other => panic!("not a monoid term: {other}"),
    }
}

/// All words over `alphabet` of length at most `n`.
pub fn words_up_to(alphabet: &[char], n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub const POINTED: &str = "sort S\nop pt : -> S\naxiom pt_def [] => def(pt)\n";

pub fn pointed_chain() -> Vec<TheoryPresentation> {
    let t0 = format!("theory pointed\n{POINTED}");
    let t1 = format!("theory pointed_unary\n{POINTED}op f : S -> S\naxiom f_def [x : S] => def(f(x))\n");
    let t2 = format!(
        "theory pointed_involution\n{POINTED}op f : S -> S\naxiom f_def [x : S] => def(f(x))\n\
         axiom involution [x : S] => f(f(x)) = x\n"
    );
    [t0, t1, t2].iter().map(|t| parse_theory(t).unwrap()).collect()
}

/// A morphism of the free category on the 2-cycle `f : A -> B`, `g : B -> A`
/// is a path, determined by its start and its length.
pub fn path(t: &Term) -> Option<(char, usize)> {
    let other = |c| if c == 'A' { 'B' } else { 'A' };
    let end = |(s, n): (char, usize)| if n % 2 == 0 { s } else { other(s) };
    match t {
        Term::Var(v) if v == "f" => Some(('A', 1)),
        Term::Var(v) if v == "g" => Some(('B', 1)),
        Term::App(op, args) if op == "id" => match &args[0] {
            Term::Var(o) => Some((o.chars().next()?, 0)),
            Term::App(op, inner) if op == "dom" => path(&inner[0]).map(|p| (p.0, 0)),
            Term::App(op, inner) if op == "cod" => path(&inner[0]).map(|p| (end(p), 0)),
            _ => None,
        },
        Term::App(op, args) if op == "comp" => {
            let (g, f) = (path(&args[0])?, path(&args[1])?);
            (end(f) == g.0).then_some((f.0, f.1 + g.1))
        }
        _ => None,
    }
}

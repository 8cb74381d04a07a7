//! Random primitive-recursive expressions for the effective-world tests.

use eatforge::effective::PrExpr;
use rand::Rng;

/// A numeric term over free variables `0..vars`.
pub fn term<R: Rng>(rng: &mut R, vars: usize, depth: u32) -> PrExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen_bool(0.6) { PrExpr::Var(rng.gen_range(0..vars)) } else { PrExpr::c(rng.gen_range(0..8)) };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => PrExpr::succ(term(rng, vars, d)),
        1 => PrExpr::add(term(rng, vars, d), term(rng, vars, d)),
        2 => PrExpr::mul(term(rng, vars, d), PrExpr::c(rng.gen_range(0..4))),
        3 => PrExpr::monus(term(rng, vars, d), term(rng, vars, d)),
        4 => PrExpr::modulo(term(rng, vars, d), rng.gen_range(1..6)),
        _ => PrExpr::div(term(rng, vars, d), rng.gen_range(1..4)),
    }
}

/// A {0,1}-valued expression over free variables `0..vars`, occasionally
/// using a bounded quantifier.
pub fn formula<R: Rng>(rng: &mut R, vars: usize, depth: u32) -> PrExpr {
    let d = depth.saturating_sub(1);
    match if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..7) } {
        0 => PrExpr::lt(term(rng, vars, 2), term(rng, vars, 2)),
        1 => PrExpr::le(term(rng, vars, 2), term(rng, vars, 2)),
        2 => PrExpr::eq(term(rng, vars, 2), term(rng, vars, 2)),
        3 => PrExpr::and(formula(rng, vars, d), formula(rng, vars, d)),
        4 => PrExpr::or(formula(rng, vars, d), formula(rng, vars, d)),
        5 => PrExpr::not(formula(rng, vars, d)),
        _ => {
            // ∃ z < t. φ(vars, z), as 0 < Σ_{z<t} φ.
            let bound = term(rng, vars, 1);
            let body = formula(rng, vars + 1, d);
            let z = PrExpr::Bound(0);
            let body = body.substitute(&(0..vars).map(PrExpr::Var).chain(std::iter::once(z)).collect::<Vec<_>>());
            PrExpr::lt(PrExpr::c(0), PrExpr::sum("z", bound, body))
        }
    }
}

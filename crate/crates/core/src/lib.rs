//! Free models of finitely presented essentially algebraic theories, brute-force
//! checks on finite categories, and effective witness extraction over the
//! natural numbers.

pub mod theory;
pub mod chase;
pub mod effective;
pub mod std_theories;
pub mod fincat;

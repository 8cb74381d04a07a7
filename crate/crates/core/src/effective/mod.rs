//! Effective sets over ℕ: decidable subsets, families and maps given by
//! primitive-recursive expressions, with least-witness choice.

pub mod bundle;
pub mod coding;
pub mod expr;
pub mod graph;
pub mod quotient;
pub mod sets;

use thiserror::Error;

pub use bundle::{Bounds, Bundle, SectionEntry, SectionReport};
pub use coding::{decode_list, encode_list, pair, unpair, CodingError};
pub use expr::{Binder, EvalError, ExprParseError, NamedExpr, PrExpr};
pub use graph::{branch_of_total_graph, Branch, TotalGraph};
pub use quotient::{quotient_eq, FormalQuotient, QuotientVerdict};
pub use sets::{
    graph_factorisation, list_family, minimal_representatives, minimal_section, split_image, CodedMap, CodedSubset,
    Family, FamilyMap, GraphFactorisation, ListFamily, MinimalSection, Predicate, SplitImage,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EffectiveError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ExprParseError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error("expression reads {found} variables, at most {expected} allowed")]
    Arity { expected: usize, found: usize },
    #[error("expression has an unbound index")]
    Open,
    #[error("{0} is not in the base")]
    NotInBase(u64),
    #[error("no witness for {point} below {bound}")]
    BoundExceeded { point: u64, bound: u64 },
    #[error("totality certificate violated at step {step}: {} has no witness below {bound}", match node { Some(n) => format!("node {n}"), None => "the root".into() })]
    CertificateViolation { node: Option<u64>, step: usize, bound: u64 },
}

use std::collections::HashSet;

use serde::Serialize;

use super::expr::PrExpr;
use super::sets::{CodedSubset, Result};
use super::EffectiveError;

/// A carrier with a relation `R(x, y)`, read as a pseudo-equivalence.
/// Equality of classes is the symmetric transitive closure of `R`; it is
/// only semi-decidable, so searches range over carrier points below
/// `search_bound` and chains of at most `budget` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalQuotient {
    pub carrier: CodedSubset,
    relation: PrExpr,
    pub search_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum QuotientVerdict {
    /// A chain `x = z0 ~ z1 ~ ... ~ zn = y` with `n ≤ budget`.
    RelatedWithinBudget { chain: Vec<u64> },
    UnknownAtBudget { budget: usize },
}

impl QuotientVerdict {
    pub fn is_related(&self) -> bool {
        matches!(self, QuotientVerdict::RelatedWithinBudget { .. })
    }
}

impl FormalQuotient {
    pub fn new(carrier: CodedSubset, relation: PrExpr, search_bound: u64) -> Result<Self> {
        if !relation.is_closed() {
            return Err(EffectiveError::Open);
        }
        if relation.needed_arity() > 2 {
            return Err(EffectiveError::Arity { expected: 2, found: relation.needed_arity() });
        }
        Ok(FormalQuotient { carrier, relation, search_bound })
    }

    pub fn related(&self, x: u64, y: u64) -> Result<bool> {
        Ok(self.relation.eval(&[x, y])? != 0)
    }

    /// Carrier points below `search_bound` where reflexivity or symmetry fails.
    pub fn pseudo_equivalence_failures(&self) -> Result<Vec<(u64, u64)>> {
        let pts = self.carrier.elements_below(self.search_bound)?;
        let mut bad = Vec::new();
        for &x in &pts {
            if !self.related(x, x)? {
                bad.push((x, x));
            }
            for &y in &pts {
                if self.related(x, y)? && !self.related(y, x)? {
                    bad.push((x, y));
                }
            }
        }
        Ok(bad)
    }
}

/// Breadth-first search for a chain of `R`-steps, in either direction, from
/// `x` to `y`.
pub fn quotient_eq(q: &FormalQuotient, x: u64, y: u64, budget: usize) -> Result<QuotientVerdict> {
    for p in [x, y] {
        if !q.carrier.contains(p)? {
            return Err(EffectiveError::NotInBase(p));
        }
    }
    let pts = q.carrier.elements_below(q.search_bound)?;
    let mut parent: Vec<(u64, u64)> = Vec::new();
    let mut seen: HashSet<u64> = HashSet::from([x]);
    let mut frontier = vec![x];
    let chain_to = |end: u64, parent: &[(u64, u64)]| {
        let mut chain = vec![end];
        let mut cur = end;
        while cur != x {
            cur = parent.iter().find(|&&(c, _)| c == cur).expect("visited").1;
            chain.push(cur);
        }
        chain.reverse();
        chain
    };
    if x == y {
        return Ok(QuotientVerdict::RelatedWithinBudget { chain: vec![x] });
    }
    for _ in 0..budget {
        let mut next = Vec::new();
        for &u in &frontier {
            // y is a legitimate endpoint even when it lies above the search bound.
            for &v in pts.iter().chain(std::iter::once(&y)) {
                if seen.contains(&v) {
                    continue;
                }
                if q.related(u, v)? || q.related(v, u)? {
                    seen.insert(v);
                    parent.push((v, u));
                    if v == y {
                        return Ok(QuotientVerdict::RelatedWithinBudget { chain: chain_to(y, &parent) });
                    }
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(QuotientVerdict::UnknownAtBudget { budget })
}

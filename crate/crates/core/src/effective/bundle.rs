//! JSON bundles describing a family or a graph:
//!
//! ```json
//! {"base": "(< b 10)", "fiberExpr": "(<= (* 2 b) x)", "bounds": {"base": 10, "fiber": 100}}
//! ```
//!
//! `base` is a predicate in `b`; `fiberExpr` reads `b` and `x`. As a graph,
//! `base` gives the nodes and `fiberExpr` the edges from `b` to `x`; the
//! bounds are the root and successor certificates, and `steps` the branch
//! length.

use serde::{Deserialize, Serialize};

use super::expr::PrExpr;
use super::graph::{branch_of_total_graph, Branch, TotalGraph};
use super::sets::{minimal_section, CodedSubset, FamilyMap, Predicate, Result};
use super::EffectiveError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Bundle {
    pub base: String,
    pub fiber_expr: String,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub base: u64,
    pub fiber: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionEntry {
    pub base: u64,
    /// `None` when no witness lies below the fiber bound.
    pub witness: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    pub bound: u64,
    pub entries: Vec<SectionEntry>,
    pub exceeded: Vec<u64>,
}

impl SectionReport {
    pub fn witnesses(&self) -> Vec<Option<u64>> {
        self.entries.iter().map(|e| e.witness).collect()
    }
}

impl Bundle {
    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn base_set(&self) -> Result<CodedSubset> {
        Ok(CodedSubset::new(Predicate::parse(&self.base, "b")?))
    }

    pub fn fiber(&self) -> Result<PrExpr> {
        Ok(PrExpr::parse(&self.fiber_expr, &["b", "x"])?)
    }

    pub fn family(&self) -> Result<FamilyMap> {
        FamilyMap::new(self.base_set()?, self.fiber()?)
    }

    pub fn graph(&self) -> Result<TotalGraph> {
        TotalGraph::new(self.base_set()?, self.fiber()?, self.bounds.base, self.bounds.fiber)
    }

    /// The minimal section at every base point below `bounds.base`.
    pub fn section(&self) -> Result<SectionReport> {
        let fam = self.family()?;
        let s = minimal_section(&fam, self.bounds.fiber);
        let mut entries = Vec::new();
        let mut exceeded = Vec::new();
        for b in fam.base.elements_below(self.bounds.base)? {
            let witness = match s.at(b) {
                Ok(x) => Some(x),
                Err(EffectiveError::BoundExceeded { .. }) => {
                    exceeded.push(b);
                    None
                }
                Err(e) => return Err(e),
            };
            entries.push(SectionEntry { base: b, witness });
        }
        Ok(SectionReport { bound: self.bounds.fiber, entries, exceeded })
    }

    /// `steps` defaults to `steps_default` when the bundle leaves it out.
    pub fn branch(&self, steps_default: usize) -> Result<Branch> {
        branch_of_total_graph(&self.graph()?, self.bounds.steps.unwrap_or(steps_default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_bundle() {
        let b = Bundle::parse(r#"{"base": "1", "fiberExpr": "(<= (* 2 b) x)", "bounds": {"base": 10, "fiber": 100}}"#).unwrap();
        let r = b.section().unwrap();
        assert_eq!(r.witnesses(), (0..10).map(|n| Some(2 * n)).collect::<Vec<_>>());
        assert!(r.exceeded.is_empty());
    }

    #[test]
    fn empty_fibers_are_reported() {
        let b = Bundle::parse(r#"{"base": "(< b 3)", "fiberExpr": "(= b 1)", "bounds": {"base": 10, "fiber": 5}}"#).unwrap();
        let r = b.section().unwrap();
        assert_eq!(r.witnesses(), vec![None, Some(0), None]);
        assert_eq!(r.exceeded, vec![0, 2]);
    }

    #[test]
    fn branch_bundle() {
        let b = Bundle::parse(
            r#"{"base": "(< b 4)", "fiberExpr": "(or (= x (S b)) (and (= b 3) (= x 0)))", "bounds": {"base": 10, "fiber": 10, "steps": 5}}"#,
        )
        .unwrap();
        assert_eq!(b.branch(0).unwrap().nodes, vec![0, 1, 2, 3, 0, 1]);
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(Bundle::parse(&text).unwrap(), b);
    }
}

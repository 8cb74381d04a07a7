use serde::Serialize;

use super::coding::pair;
use super::expr::PrExpr;
use super::sets::{minimal_representatives, CodedSubset, Result};
use super::EffectiveError;

/// A simple graph on a coded node set, with edges `ε(x, y)` from `x` to `y`.
/// The bounds certify totality: a node exists below `root_bound`, and every
/// node `x` has a successor below `edge_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalGraph {
    pub nodes: CodedSubset,
    edge: PrExpr,
    pub root_bound: u64,
    pub edge_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    /// `f0(0), ..., f0(n)`.
    pub nodes: Vec<u64>,
    /// `f1(i) = ⟨f0(i), f0(i + 1)⟩`.
    pub edges: Vec<u64>,
}

impl TotalGraph {
    /// `edge` reads `Var(0)` as the source and `Var(1)` as the target.
    pub fn new(nodes: CodedSubset, edge: PrExpr, root_bound: u64, edge_bound: u64) -> Result<Self> {
        if !edge.is_closed() {
            return Err(EffectiveError::Open);
        }
        if edge.needed_arity() > 2 {
            return Err(EffectiveError::Arity { expected: 2, found: edge.needed_arity() });
        }
        Ok(TotalGraph { nodes, edge, root_bound, edge_bound })
    }

    pub fn edge_expr(&self) -> &PrExpr {
        &self.edge
    }

    pub fn is_edge(&self, x: u64, y: u64) -> Result<bool> {
        Ok(self.nodes.contains(x)? && self.nodes.contains(y)? && self.edge.eval(&[x, y])? != 0)
    }

    /// The least node, found as the unique element of the minimal
    /// representatives of the node predicate.
    pub fn root(&self) -> Result<Option<u64>> {
        let least = CodedSubset::new(minimal_representatives(&self.nodes.predicate));
        Ok(least.elements_below(self.root_bound)?.first().copied())
    }

    /// `k(x)`: the least successor of `x`.
    pub fn successor(&self, x: u64) -> Result<Option<u64>> {
        for y in 0..self.edge_bound {
            if self.is_edge(x, y)? {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }
}

/// `f0(0) = a`, `f0(i + 1) = k(f0(i))` for `i < steps`.
pub fn branch_of_total_graph(g: &TotalGraph, steps: usize) -> Result<Branch> {
    let root = g.root()?.ok_or(EffectiveError::CertificateViolation { node: None, step: 0, bound: g.root_bound })?;
    let mut nodes = vec![root];
    let mut edges = Vec::with_capacity(steps);
    for step in 0..steps {
        let x = nodes[step];
        let y = g
            .successor(x)?
            .ok_or(EffectiveError::CertificateViolation { node: Some(x), step, bound: g.edge_bound })?;
        edges.push(pair(x, y)?);
        nodes.push(y);
    }
    Ok(Branch { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::sets::Predicate;

    fn graph(nodes: &str, edge: &str) -> TotalGraph {
        let nodes = CodedSubset::new(Predicate::parse(nodes, "x").unwrap());
        TotalGraph::new(nodes, PrExpr::parse(edge, &["x", "y"]).unwrap(), 10, 10).unwrap()
    }

    #[test]
    fn cycle_mod_four() {
        let nodes = CodedSubset::below(4);
        let edge = PrExpr::eq(PrExpr::Var(1), PrExpr::modulo(PrExpr::succ(PrExpr::Var(0)), 4));
        let g = TotalGraph::new(nodes, edge, 10, 10).unwrap();
        let b = branch_of_total_graph(&g, 5).unwrap();
        assert_eq!(b.nodes, vec![0, 1, 2, 3, 0, 1]);
        assert_eq!(b.edges[3], pair(3, 0).unwrap());
    }

    #[test]
    fn self_loops_give_a_constant_branch() {
        let g = graph("(<= 3 x)", "(= x y)");
        assert_eq!(branch_of_total_graph(&g, 4).unwrap().nodes, vec![3; 5]);
    }

    #[test]
    fn certificate_violations() {
        let g = graph("(< x 5)", "(and (not (= x 2)) (= y (S x)))");
        assert_eq!(
            branch_of_total_graph(&g, 5),
            Err(EffectiveError::CertificateViolation { node: Some(2), step: 2, bound: 10 })
        );
        assert!(branch_of_total_graph(&g, 2).is_ok());
        let empty = graph("0", "1");
        assert_eq!(
            branch_of_total_graph(&empty, 1),
            Err(EffectiveError::CertificateViolation { node: None, step: 0, bound: 10 })
        );
    }
}

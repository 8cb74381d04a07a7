//! Soundness audit: replaying the provenance log from scratch and checking
//! every recorded axiom instance against the final state.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::engine::SaturationState;
use super::inspect::{CanonicalModel, ClassInfo};
use super::{Cause, ElementId, Event};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("event {event}: expected fresh element {expected}, log says {found}")]
    IdMismatch { event: usize, expected: ElementId, found: ElementId },
    #[error("event {event}: element {id} does not exist yet")]
    Dangling { event: usize, id: ElementId },
    #[error("replayed table for op {op} is not functional at {args:?}")]
    NotFunctional { op: usize, args: Vec<ElementId> },
    #[error("replayed model differs from the saturation: {0}")]
    Differs(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub event: usize,
    pub reason: String,
}

impl SaturationState {
    /// Rebuilds the quotient model from the provenance log alone, using raw
    /// creations and unions and no congruence repair.
    pub fn replay(&self) -> Result<CanonicalModel, ReplayError> {
        let mut parent: Vec<ElementId> = Vec::new();
        let mut sorts: Vec<usize> = Vec::new();
        let mut created: Vec<(usize, Vec<ElementId>, ElementId)> = Vec::new();
        fn find(parent: &[ElementId], mut x: ElementId) -> ElementId {
            while parent[x.index()] != x {
                x = parent[x.index()];
            }
            x
        }
        for (event, ev) in self.provenance.iter().enumerate() {
            let exists = |id: ElementId, len: usize| {
                if id.index() < len {
                    Ok(())
                } else {
                    Err(ReplayError::Dangling { event, id })
                }
            };
            match ev {
                Event::Generator { id, sort, .. } => {
                    let expected = ElementId(parent.len() as u32);
                    if *id != expected {
                        return Err(ReplayError::IdMismatch { event, expected, found: *id });
                    }
                    parent.push(*id);
                    sorts.push(*sort);
                }
                Event::Create { op, args, result, .. } => {
                    for &a in args {
                        exists(a, parent.len())?;
                    }
                    let expected = ElementId(parent.len() as u32);
                    if *result != expected {
                        return Err(ReplayError::IdMismatch { event, expected, found: *result });
                    }
                    let sort = self
                        .theory
                        .sort_index(&self.theory.ops[*op].result)
                        .expect("validated theory");
                    parent.push(*result);
                    sorts.push(sort);
                    created.push((*op, args.clone(), *result));
                }
                Event::Merge { left, right, .. } => {
                    exists(*left, parent.len())?;
                    exists(*right, parent.len())?;
                    let (a, b) = (find(&parent, *left), find(&parent, *right));
                    if a != b {
                        let (root, child) = if a < b { (a, b) } else { (b, a) };
                        parent[child.index()] = root;
                    }
                }
            }
        }
        let representative: Vec<ElementId> =
            (0..parent.len()).map(|i| find(&parent, ElementId(i as u32))).collect();
        let mut tables: Vec<BTreeMap<Vec<ElementId>, ElementId>> =
            vec![BTreeMap::new(); self.theory.ops.len()];
        for (op, args, result) in created {
            let key: Vec<ElementId> = args.iter().map(|a| representative[a.index()]).collect();
            let res = representative[result.index()];
            if let Some(prev) = tables[op].insert(key.clone(), res) {
                if prev != res {
                    return Err(ReplayError::NotFunctional { op, args: key });
                }
            }
        }
        Ok(CanonicalModel {
            classes: representative
                .iter()
                .enumerate()
                .filter(|(i, r)| r.index() == *i)
                .map(|(i, &id)| ClassInfo { id, sort: sorts[i] })
                .collect(),
            representative,
            tables: tables.into_iter().map(|t| t.into_iter().collect()).collect(),
        })
    }

    /// Replays the log and requires the result to equal the saturation,
    /// structurally and byte for byte.
    pub fn verify_replay(&self) -> Result<(), ReplayError> {
        let replayed = self.replay()?;
        let live = self.canonical();
        if replayed.classes != live.classes {
            return Err(ReplayError::Differs("classes"));
        }
        if replayed.representative != live.representative {
            return Err(ReplayError::Differs("union-find"));
        }
        if replayed.tables != live.tables {
            return Err(ReplayError::Differs("tables"));
        }
        if replayed.to_bytes() != live.to_bytes() {
            return Err(ReplayError::Differs("serialized bytes"));
        }
        Ok(())
    }

    /// Checks that every axiom instance and generator relation recorded as a
    /// cause has a true premise and a true conclusion in the final state.
    pub fn audit(&self) -> Vec<AuditFailure> {
        let mut failures = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (event, ev) in self.provenance.iter().enumerate() {
            let cause = match ev {
                Event::Create { cause, .. } | Event::Merge { cause, .. } => cause,
                Event::Generator { .. } => continue,
            };
            if !seen.insert(cause.clone()) {
                continue;
            }
            match cause {
                Cause::Axiom { axiom, subst } => {
                    let ax = &self.theory.axioms[*axiom];
                    let fail = |reason: String| AuditFailure { event, reason: format!("axiom `{}`: {reason}", ax.name) };
                    if subst.len() != ax.context.len() {
                        failures.push(fail("substitution length differs from context".into()));
                        continue;
                    }
                    let sorts_ok = ax
                        .context
                        .iter()
                        .zip(subst)
                        .all(|((_, s), id)| self.sort_of(*id) == s);
                    if !sorts_ok {
                        failures.push(fail("ill-sorted substitution".into()));
                        continue;
                    }
                    let compiled = &self.axioms[*axiom];
                    if !compiled.premise.iter().all(|a| self.holds(a, subst)) {
                        failures.push(fail("premise false in final state".into()));
                    }
                    if !compiled.conclusion.iter().all(|a| self.holds(a, subst)) {
                        failures.push(fail("conclusion false in final state".into()));
                    }
                }
                Cause::Relation { index } => {
                    let env = BTreeMap::new();
                    let rel = &self.generators.relations[*index];
                    let ok = match rel {
                        crate::theory::Atom::Eq(l, r) => {
                            matches!(self.eq_check(&env, l, r), Ok(super::Verdict::EqualAtStage))
                        }
                        crate::theory::Atom::Defined(t) => matches!(self.eval_term(&env, t), Ok(Some(_))),
                    };
                    if !ok {
                        failures.push(AuditFailure { event, reason: format!("relation `{rel}` fails") });
                    }
                }
                Cause::Congruence { op } => {
                    if let Event::Merge { left, right, .. } = ev {
                        if self.find(*left) != self.find(*right) {
                            failures.push(AuditFailure {
                                event,
                                reason: format!("congruence merge on op {op} not reflected"),
                            });
                        }
                    }
                }
            }
        }
        failures
    }
}

#[cfg(test)]
mod tests {
    use crate::chase::{saturate, GeneratorSet};
    use crate::theory::parse_theory;

    #[test]
    fn replay_and_audit_monoid() {
        let t = parse_theory(
            "sort M\nop e : -> M\nop mul : M M -> M\n\
             axiom mul_def [x y : M] => def(mul(x, y))\n\
             axiom unit [x : M] => mul(e, x) = x, mul(x, e) = x\n\
             axiom assoc [x y z : M] def(mul(mul(x, y), z)), def(mul(x, mul(y, z))) => mul(mul(x, y), z) = mul(x, mul(y, z))\n",
        )
        .unwrap();
        let s = saturate(&t, &GeneratorSet::new().with(&["a", "b"], "M"), 2).unwrap();
        assert_eq!(s.verify_replay(), Ok(()));
        assert!(s.audit().is_empty());
    }

    #[test]
    fn replay_detects_tampering() {
        let t = parse_theory("sort S\nop f : S -> S\naxiom f_def [x : S] => def(f(x))\n").unwrap();
        let mut s = saturate(&t, &GeneratorSet::new().with(&["c"], "S"), 2).unwrap();
        s.provenance.pop();
        assert!(s.verify_replay().is_err());
    }
}

//! Read-only queries on a saturation: term evaluation, equality verdicts,
//! Gödel enumeration, witness terms and the JSON dump.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::theory::Term;

use super::engine::SaturationState;
use super::{ElementId, Event};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("undeclared operation `{0}`")]
    UnknownOp(String),
    #[error("`{op}` expects {expected} arguments, got {found}")]
    Arity { op: String, expected: usize, found: usize },
    #[error("sort mismatch: `{term}` has sort `{found}`, expected `{expected}`")]
    SortMismatch { term: String, expected: String, found: String },
    #[error("no element {0}")]
    UnknownElement(ElementId),
    #[error("undeclared sort `{0}`")]
    UnknownSort(String),
    #[error("index {index} out of range: sort `{sort}` has {count} classes")]
    OutOfRange { sort: String, index: usize, count: usize },
}

/// Equality is only ever semi-decided: distinct classes at a finite stage may
/// still merge later.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    EqualAtStage,
    UnknownAtStage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub id: ElementId,
    pub sort: usize,
}

/// The quotient structure of a state: class representatives, the canonical
/// representative of every element, and canonical operation tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalModel {
    pub classes: Vec<ClassInfo>,
    pub representative: Vec<ElementId>,
    pub tables: Vec<Vec<(Vec<ElementId>, ElementId)>>,
}

impl CanonicalModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("canonical model serializes")
    }
}

impl SaturationState {
    /// Canonical representative of `x`.
    pub fn find(&self, x: ElementId) -> ElementId {
        self.store.find(x)
    }

    pub fn sort_of(&self, x: ElementId) -> &str {
        &self.theory.sorts[self.store.sort[x.index()]].name
    }

    /// Round in which `x` was created (0 for generators).
    pub fn born_in_round(&self, x: ElementId) -> usize {
        self.store.born[x.index()] as usize
    }

    fn sort_index(&self, sort: &str) -> Result<usize, EvalError> {
        self.theory
            .sort_index(sort)
            .ok_or_else(|| EvalError::UnknownSort(sort.to_string()))
    }

    /// Class representatives of `sort` in Gödel (birth) order.
    pub fn classes(&self, sort: &str) -> Result<Vec<ElementId>, EvalError> {
        let s = self.sort_index(sort)?;
        Ok(self.store.roots_of_sort(s).collect())
    }

    pub fn class_count(&self, sort: &str) -> Result<usize, EvalError> {
        Ok(self.classes(sort)?.len())
    }

    /// The `n`-th class of `sort`, classes being indexed by their
    /// earliest-born member.
    pub fn enumerate(&self, sort: &str, n: usize) -> Result<ElementId, EvalError> {
        let classes = self.classes(sort)?;
        classes.get(n).copied().ok_or(EvalError::OutOfRange {
            sort: sort.to_string(),
            index: n,
            count: classes.len(),
        })
    }

    /// Evaluates `t` bottom-up. Variables are looked up in `env`, then among
    /// the generator names. `Ok(None)` means undefined at this stage.
    pub fn eval_term(
        &self,
        env: &BTreeMap<String, ElementId>,
        t: &Term,
    ) -> Result<Option<ElementId>, EvalError> {
        self.eval_sorted(env, t).map(|(_, v)| v)
    }

    fn eval_sorted(
        &self,
        env: &BTreeMap<String, ElementId>,
        t: &Term,
    ) -> Result<(usize, Option<ElementId>), EvalError> {
        match t {
            Term::Var(v) => {
                let id = match env.get(v) {
                    Some(&id) => id,
                    None => self
                        .generators
                        .constants
                        .iter()
                        .position(|(n, _)| n == v)
                        .map(|i| ElementId(i as u32))
                        .ok_or_else(|| EvalError::Unbound(v.clone()))?,
                };
                if id.index() >= self.store.len() {
                    return Err(EvalError::UnknownElement(id));
                }
                Ok((self.store.sort[id.index()], Some(self.store.find(id))))
            }
            Term::App(name, args) => {
                let op = self
                    .theory
                    .op_index(name)
                    .ok_or_else(|| EvalError::UnknownOp(name.clone()))?;
                let sym = &self.theory.ops[op];
                if sym.args.len() != args.len() {
                    return Err(EvalError::Arity {
                        op: name.clone(),
                        expected: sym.args.len(),
                        found: args.len(),
                    });
                }
                let mut ids = Some(Vec::with_capacity(args.len()));
                for (a, want) in args.iter().zip(&sym.args) {
                    let (sort, v) = self.eval_sorted(env, a)?;
                    let want_idx = self.sort_index(want)?;
                    if sort != want_idx {
                        return Err(EvalError::SortMismatch {
                            term: a.to_string(),
                            expected: want.clone(),
                            found: self.theory.sorts[sort].name.clone(),
                        });
                    }
                    match (ids.as_mut(), v) {
                        (Some(list), Some(id)) => list.push(id),
                        _ => ids = None,
                    }
                }
                let result = self.sort_index(&sym.result)?;
                Ok((result, ids.and_then(|ids| self.store.lookup(op, &ids))))
            }
        }
    }

    pub fn eq_check(
        &self,
        env: &BTreeMap<String, ElementId>,
        t1: &Term,
        t2: &Term,
    ) -> Result<Verdict, EvalError> {
        let a = self.eval_term(env, t1)?;
        let b = self.eval_term(env, t2)?;
        Ok(match (a, b) {
            (Some(a), Some(b)) if a == b => Verdict::EqualAtStage,
            _ => Verdict::UnknownAtStage,
        })
    }

    /// The term by which `x` itself was created.
    pub fn creation_term(&self, x: ElementId) -> Term {
        match &self.provenance[self.origin[x.index()]] {
            Event::Generator { name, .. } => Term::var(name.clone()),
            Event::Create { op, args, .. } => Term::app(
                self.theory.ops[*op].name.clone(),
                args.iter().map(|&a| self.creation_term(a)).collect(),
            ),
            Event::Merge { .. } => unreachable!("merges create nothing"),
        }
    }

    /// The creation term of the earliest-born member of the class of `x`:
    /// the Gödel-minimal witness of that class.
    pub fn witness(&self, x: ElementId) -> Term {
        self.creation_term(self.store.find(x))
    }

    pub fn canonical(&self) -> CanonicalModel {
        let n = self.store.len();
        CanonicalModel {
            classes: (0..n)
                .map(|i| ElementId(i as u32))
                .filter(|&id| self.store.is_root(id))
                .map(|id| ClassInfo { id, sort: self.store.sort[id.index()] })
                .collect(),
            representative: (0..n).map(|i| self.store.find(ElementId(i as u32))).collect(),
            tables: (0..self.theory.ops.len())
                .map(|op| self.store.rows(op).map(|(args, res, _)| (args.to_vec(), res)).collect())
                .collect(),
        }
    }

    /// The deterministic JSON dump: sorts with class counts and Gödel
    /// enumeration, classes with witnesses, tables and provenance.
    pub fn dump(&self) -> Value {
        let mut members: BTreeMap<ElementId, usize> = BTreeMap::new();
        for i in 0..self.store.len() {
            *members.entry(self.store.find(ElementId(i as u32))).or_default() += 1;
        }
        let sorts: Vec<Value> = self
            .theory
            .sorts
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let enumeration: Vec<ElementId> = self.store.roots_of_sort(i).collect();
                json!({ "name": s.name, "classes": enumeration.len(), "enumeration": enumeration })
            })
            .collect();
        let classes: Vec<Value> = members
            .iter()
            .map(|(&id, &size)| {
                json!({
                    "id": id,
                    "birthIndex": id.0,
                    "bornInRound": self.store.born[id.index()],
                    "sort": self.sort_of(id),
                    "members": size,
                    "witness": self.witness(id).to_string(),
                })
            })
            .collect();
        let tables: Vec<Value> = self
            .theory
            .ops
            .iter()
            .enumerate()
            .map(|(op, sym)| {
                let entries: Vec<Vec<ElementId>> = self
                    .store
                    .rows(op)
                    .map(|(args, res, _)| args.iter().copied().chain([res]).collect())
                    .collect();
                json!({ "op": sym.name, "entries": entries })
            })
            .collect();
        json!({
            "theory": self.theory.name,
            "stage": self.stage(),
            "capExceeded": self.capped(),
            "fixpoint": self.at_fixpoint(),
            "elements": self.store.len(),
            "sorts": sorts,
            "classes": classes,
            "tables": tables,
            "rounds": self.stats(),
            "provenance": self.provenance(),
        })
    }

    pub fn dump_string(&self) -> String {
        serde_json::to_string_pretty(&self.dump()).expect("dump serializes")
    }
}

//! Theory morphisms, syntactic inclusion checks, and linear chains of theory
//! extensions.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use super::{Axiom, TheoryPresentation};

/// A signature map between presentations. Names absent from `sort_map` or
/// `op_map` are mapped to themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryMorphism {
    pub source: TheoryPresentation,
    pub target: TheoryPresentation,
    pub sort_map: BTreeMap<String, String>,
    pub op_map: BTreeMap<String, String>,
}

impl TheoryMorphism {
    /// The name-preserving morphism `source -> target`.
    pub fn inclusion(source: TheoryPresentation, target: TheoryPresentation) -> Self {
        TheoryMorphism { source, target, sort_map: BTreeMap::new(), op_map: BTreeMap::new() }
    }

    pub fn identity(theory: TheoryPresentation) -> Self {
        Self::inclusion(theory.clone(), theory)
    }

    pub fn map_sort<'a>(&'a self, s: &'a str) -> &'a str {
        self.sort_map.get(s).map(String::as_str).unwrap_or(s)
    }

    pub fn map_op<'a>(&'a self, o: &'a str) -> &'a str {
        self.op_map.get(o).map(String::as_str).unwrap_or(o)
    }

    pub fn translate_axiom(&self, ax: &Axiom) -> Axiom {
        let rename = |t: &super::Term| t.rename_ops(&|o: &str| self.map_op(o).to_string());
        Axiom {
            name: ax.name.clone(),
            context: ax
                .context
                .iter()
                .map(|(v, s)| (v.clone(), self.map_sort(s).to_string()))
                .collect(),
            premise: ax.premise.iter().map(|a| a.map_terms(&rename)).collect(),
            conclusion: ax.conclusion.iter().map(|a| a.map_terms(&rename)).collect(),
        }
    }

    /// `other ∘ self`, defined when `self.target == other.source`.
    pub fn then(&self, other: &TheoryMorphism) -> Option<TheoryMorphism> {
        if self.target != other.source {
            return None;
        }
        let mut sort_map = BTreeMap::new();
        for s in &self.source.sorts {
            let image = other.map_sort(self.map_sort(&s.name));
            if image != s.name {
                sort_map.insert(s.name.clone(), image.to_string());
            }
        }
        let mut op_map = BTreeMap::new();
        for o in &self.source.ops {
            let image = other.map_op(self.map_op(&o.name));
            if image != o.name {
                op_map.insert(o.name.clone(), image.to_string());
            }
        }
        Some(TheoryMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            sort_map,
            op_map,
        })
    }
}

/// True iff the signature maps are well-typed and injective on names and
/// every translated source axiom occurs among the target axioms up to
/// renaming of variables.
pub fn check_inclusion(m: &TheoryMorphism) -> bool {
    let mut sort_images = HashSet::new();
    for s in &m.source.sorts {
        let image = m.map_sort(&s.name);
        if m.target.sort_index(image).is_none() || !sort_images.insert(image) {
            return false;
        }
    }
    let mut op_images = HashSet::new();
    for op in &m.source.ops {
        let image = m.map_op(&op.name);
        let Some(target_op) = m.target.op(image) else {
            return false;
        };
        if !op_images.insert(image) {
            return false;
        }
        let args_ok = op.args.len() == target_op.args.len()
            && op.args.iter().zip(&target_op.args).all(|(a, b)| m.map_sort(a) == b);
        if !args_ok || m.map_sort(&op.result) != target_op.result {
            return false;
        }
    }
    let target_axioms: HashSet<Axiom> = m.target.axioms.iter().map(Axiom::alpha_normal).collect();
    m.source
        .axioms
        .iter()
        .all(|ax| target_axioms.contains(&m.translate_axiom(ax).alpha_normal()))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("a chain needs at least one stage")]
    Empty,
    #[error("chain has {stages} stages but {inclusions} inclusions")]
    Shape { stages: usize, inclusions: usize },
    #[error("inclusion {0} does not connect stage {0} to stage {next}", next = .0 + 1)]
    Disconnected(usize),
    #[error("inclusion {0} fails the syntactic inclusion check")]
    NotAnInclusion(usize),
}

/// A finite linear diagram `T_0 -> T_1 -> ... -> T_n` of theory inclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryChain {
    pub stages: Vec<TheoryPresentation>,
    pub inclusions: Vec<TheoryMorphism>,
}

impl TheoryChain {
    /// Chains the given stages with name-preserving inclusions and checks them.
    pub fn linear(stages: Vec<TheoryPresentation>) -> Result<Self, ChainError> {
        let inclusions = stages
            .windows(2)
            .map(|w| TheoryMorphism::inclusion(w[0].clone(), w[1].clone()))
            .collect();
        let chain = TheoryChain { stages, inclusions };
        chain.check()?;
        Ok(chain)
    }

    pub fn check(&self) -> Result<(), ChainError> {
        if self.stages.is_empty() {
            return Err(ChainError::Empty);
        }
        if self.inclusions.len() + 1 != self.stages.len() {
            return Err(ChainError::Shape {
                stages: self.stages.len(),
                inclusions: self.inclusions.len(),
            });
        }
        for (i, m) in self.inclusions.iter().enumerate() {
            if m.source != self.stages[i] || m.target != self.stages[i + 1] {
                return Err(ChainError::Disconnected(i));
            }
            if !check_inclusion(m) {
                return Err(ChainError::NotAnInclusion(i));
            }
        }
        Ok(())
    }

    /// The colimit of the chain. For a finite linear chain of inclusions this
    /// is the last stage.
    pub fn colimit(&self) -> &TheoryPresentation {
        self.stages.last().expect("checked chains are nonempty")
    }

    /// The composite inclusion from stage `i` to stage `j >= i`.
    pub fn inclusion_between(&self, i: usize, j: usize) -> Option<TheoryMorphism> {
        if i > j || j >= self.stages.len() {
            return None;
        }
        let mut acc = TheoryMorphism::identity(self.stages[i].clone());
        for m in &self.inclusions[i..j] {
            acc = acc.then(m)?;
        }
        Some(acc)
    }
}

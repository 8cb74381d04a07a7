//! Bounded compactness check for a chain of theory extensions.
//!
//! Each stage theory and the colimit theory are saturated on the same
//! generators. For every stage `i`, each class of the colimit model whose
//! sort belongs to stage `i`, and each equation between members of such a
//! class, is looked up in the stage models `j >= i`; the report records the
//! least `j` realizing it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::theory::{Term, TheoryChain};

use super::engine::{saturate_with, SaturationState};
use super::generators::GeneratorSet;
use super::{ChaseConfig, ChaseError, ElementId, DEFAULT_ELEMENT_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainConfig {
    /// Rounds for the colimit model.
    pub rounds: usize,
    /// Rounds for the stage models; defaults to `rounds`.
    pub stage_rounds: Option<usize>,
    pub cap: usize,
}

impl ChainConfig {
    pub fn rounds(rounds: usize) -> Self {
        ChainConfig { rounds, stage_rounds: None, cap: DEFAULT_ELEMENT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unrealized {
    pub lhs: String,
    pub rhs: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageReduct {
    pub stage: usize,
    pub elements: usize,
    pub equations: usize,
    /// Number of elements first realized at each stage.
    pub elements_first_at: BTreeMap<usize, usize>,
    /// Number of equations first realized at each stage.
    pub equations_first_at: BTreeMap<usize, usize>,
    /// Equations that first hold strictly above this stage, as
    /// `(lhs, rhs, least stage)`.
    pub late_equations: Vec<(String, String, usize)>,
    pub unrealized: Vec<Unrealized>,
}

impl StageReduct {
    pub fn matches(&self) -> bool {
        self.unrealized.is_empty()
    }
}

#[derive(Debug, Serialize)]
pub struct ChainReport {
    pub rounds: usize,
    pub stage_rounds: usize,
    /// Class counts per sort of each stage model.
    pub stage_classes: Vec<BTreeMap<String, usize>>,
    pub colimit_classes: BTreeMap<String, usize>,
    pub reducts: Vec<StageReduct>,
    #[serde(skip)]
    pub stage_models: Vec<SaturationState>,
    #[serde(skip)]
    pub colimit_model: Option<SaturationState>,
}

impl ChainReport {
    pub fn all_realized(&self) -> bool {
        self.reducts.iter().all(StageReduct::matches)
    }
}

fn class_counts(s: &SaturationState) -> BTreeMap<String, usize> {
    s.theory()
        .sorts
        .iter()
        .map(|sort| (sort.name.clone(), s.class_count(&sort.name).unwrap_or(0)))
        .collect()
}

fn defined_in(s: &SaturationState, t: &Term) -> Option<ElementId> {
    s.eval_term(&BTreeMap::new(), t).ok().flatten()
}

pub fn free_model_of_chain(
    chain: &TheoryChain,
    generators: &GeneratorSet,
    config: &ChainConfig,
) -> Result<ChainReport, ChaseError> {
    let stage_rounds = config.stage_rounds.unwrap_or(config.rounds);
    let stage_cfg = ChaseConfig::rounds(stage_rounds).with_cap(config.cap);
    let stages: Vec<SaturationState> = chain
        .stages
        .iter()
        .map(|t| saturate_with(t, generators, &stage_cfg))
        .collect::<Result<_, _>>()?;
    let top = saturate_with(chain.colimit(), generators, &ChaseConfig::rounds(config.rounds).with_cap(config.cap))?;

    let n = top.num_elements();
    let mut reducts = Vec::new();
    for i in 0..chain.stages.len() {
        let sorts: BTreeSet<&str> = chain.stages[i].sorts.iter().map(|s| s.name.as_str()).collect();
        let least = |realized: &dyn Fn(&SaturationState) -> bool| (i..stages.len()).find(|&j| realized(&stages[j]));
        let mut r = StageReduct {
            stage: i,
            elements: 0,
            equations: 0,
            elements_first_at: BTreeMap::new(),
            equations_first_at: BTreeMap::new(),
            late_equations: Vec::new(),
            unrealized: Vec::new(),
        };
        for k in 0..n {
            let x = ElementId(k as u32);
            if !sorts.contains(top.sort_of(x)) {
                continue;
            }
            let root = top.find(x);
            let w = top.creation_term(root);
            if root == x {
                r.elements += 1;
                match least(&|s| defined_in(s, &w).is_some()) {
                    Some(j) => *r.elements_first_at.entry(j).or_default() += 1,
                    None => r.unrealized.push(Unrealized { lhs: w.to_string(), rhs: None }),
                }
            } else {
                r.equations += 1;
                let t = top.creation_term(x);
                let holds = |s: &SaturationState| match (defined_in(s, &t), defined_in(s, &w)) {
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                };
                match least(&holds) {
                    Some(j) => {
                        *r.equations_first_at.entry(j).or_default() += 1;
                        if j > i {
                            r.late_equations.push((t.to_string(), w.to_string(), j));
                        }
                    }
                    None => r.unrealized.push(Unrealized { lhs: t.to_string(), rhs: Some(w.to_string()) }),
                }
            }
        }
        reducts.push(r);
    }
    Ok(ChainReport {
        rounds: config.rounds,
        stage_rounds,
        stage_classes: stages.iter().map(class_counts).collect(),
        colimit_classes: class_counts(&top),
        reducts,
        stage_models: stages,
        colimit_model: Some(top),
    })
}

//! Bounded-stage free models by fair saturation.
//!
//! A [`SaturationState`] holds a finite approximation of the initial model of
//! a partial Horn theory on a set of generators. Each round matches every
//! axiom premise against the state as it was when the round began, processes
//! every match (creating elements for conclusions that mention undefined
//! terms, merging classes for equations), and then restores congruence
//! closure. Element ids are birth indices, so the canonical representative of
//! a class (its least member) is also its Gödel number.

mod chain;
mod engine;
mod generators;
mod inspect;
mod query;
mod replay;
mod store;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chain::{free_model_of_chain, ChainConfig, ChainReport, StageReduct, Unrealized};
pub use engine::{saturate, saturate_with, PendingMatch, RoundStats, SaturationState};
pub use generators::{GeneratorError, GeneratorSet};
pub use inspect::{CanonicalModel, EvalError, Verdict};
pub use replay::{AuditFailure, ReplayError};

/// Default safety limit on the number of elements a saturation may create.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// An element of the saturation, identified by its birth index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub u32);

impl ElementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Why an element was created or two classes were merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Cause {
    /// An instance of axiom number `axiom`, with `subst` giving the element
    /// bound to each context variable in context order.
    Axiom { axiom: usize, subst: Vec<ElementId> },
    /// Two table entries for `op` acquired equal arguments.
    Congruence { op: usize },
    /// A relation of the generator set.
    Relation { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "camelCase")]
pub enum Event {
    Generator { id: ElementId, name: String, sort: usize },
    Create { op: usize, args: Vec<ElementId>, result: ElementId, cause: Cause },
    Merge { left: ElementId, right: ElementId, cause: Cause },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChaseConfig {
    pub rounds: usize,
    pub cap: usize,
    /// Match every axiom against the whole state each round instead of only
    /// against facts that are new since the previous round.
    pub naive: bool,
}

impl ChaseConfig {
    pub fn rounds(rounds: usize) -> Self {
        ChaseConfig { rounds, cap: DEFAULT_ELEMENT_CAP, naive: false }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn naive(mut self, naive: bool) -> Self {
        self.naive = naive;
        self
    }
}

impl Default for ChaseConfig {
    fn default() -> Self {
        ChaseConfig::rounds(0)
    }
}

#[derive(Debug, Error)]
pub enum ChaseError {
    #[error("theory does not validate: {0}")]
    InvalidTheory(String),
    #[error(transparent)]
    Generators(#[from] GeneratorError),
    #[error("element cap of {cap} exceeded during round {}", partial.stage() + 1)]
    ElementCap { cap: usize, partial: Box<SaturationState> },
}

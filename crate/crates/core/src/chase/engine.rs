//! The saturation loop.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::theory::{validate, TheoryPresentation};

use super::generators::GeneratorSet;
use super::query::{compile_atom, compile_query, CAtom, CTerm, Query, Snapshot};
use super::store::Store;
use super::{Cause, ChaseConfig, ChaseError, ElementId, Event};

pub(crate) struct CompiledAxiom {
    pub query: Query,
    pub premise: Vec<CAtom>,
    pub conclusion: Vec<CAtom>,
    pub has_equations: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundStats {
    pub round: usize,
    /// Matches handed to conclusion processing.
    pub matches: usize,
    pub created: usize,
    pub merged: usize,
    /// Passes of the equality-only closure run after the main phase.
    pub closure_passes: usize,
}

/// An axiom instance whose premise holds but whose conclusion does not yet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PendingMatch {
    pub axiom: usize,
    pub subst: Vec<ElementId>,
}

pub(crate) struct CapHit;

pub struct SaturationState {
    pub(crate) theory: TheoryPresentation,
    pub(crate) generators: GeneratorSet,
    pub(crate) config: ChaseConfig,
    pub(crate) store: Store,
    pub(crate) axioms: Arc<Vec<CompiledAxiom>>,
    pub(crate) provenance: Vec<Event>,
    /// Index into `provenance` of the event that created each element.
    pub(crate) origin: Vec<usize>,
    arities: Vec<usize>,
    result_sorts: Vec<usize>,
    stage: usize,
    stats: Vec<RoundStats>,
    quiescent: bool,
    capped: bool,
}

impl fmt::Debug for SaturationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SaturationState")
            .field("theory", &self.theory.name)
            .field("stage", &self.stage)
            .field("elements", &self.store.len())
            .field("events", &self.provenance.len())
            .field("capped", &self.capped)
            .finish()
    }
}

/// Saturates `theory` on `generators` for `rounds` rounds with the default
/// element cap.
pub fn saturate(
    theory: &TheoryPresentation,
    generators: &GeneratorSet,
    rounds: usize,
) -> Result<SaturationState, ChaseError> {
    saturate_with(theory, generators, &ChaseConfig::rounds(rounds))
}

pub fn saturate_with(
    theory: &TheoryPresentation,
    generators: &GeneratorSet,
    config: &ChaseConfig,
) -> Result<SaturationState, ChaseError> {
    let mut state = SaturationState::new(theory, generators, config)?;
    match state.run(config.rounds) {
        Ok(()) => Ok(state),
        Err(cap) => Err(ChaseError::ElementCap { cap, partial: Box::new(state) }),
    }
}

impl SaturationState {
    /// The round-0 state: generators and their relations only.
    pub fn new(
        theory: &TheoryPresentation,
        generators: &GeneratorSet,
        config: &ChaseConfig,
    ) -> Result<Self, ChaseError> {
        let errors: Vec<String> = validate(theory)
            .into_iter()
            .filter(|d| d.is_error())
            .map(|d| d.message)
            .collect();
        if !errors.is_empty() {
            return Err(ChaseError::InvalidTheory(errors.join("; ")));
        }
        generators.check(theory)?;
        let axioms = theory
            .axioms
            .iter()
            .map(|ax| {
                let names: Vec<&str> = ax.context.iter().map(|(v, _)| v.as_str()).collect();
                let conclusion: Vec<CAtom> =
                    ax.conclusion.iter().map(|a| compile_atom(theory, &names, a)).collect();
                CompiledAxiom {
                    query: compile_query(theory, ax),
                    premise: ax.premise.iter().map(|a| compile_atom(theory, &names, a)).collect(),
                    has_equations: conclusion.iter().any(|a| matches!(a, CAtom::Eq(..))),
                    conclusion,
                }
            })
            .collect();
        let sort_of = |s: &str| theory.sort_index(s).expect("validated");
        let mut state = SaturationState {
            theory: theory.clone(),
            generators: generators.clone(),
            config: config.clone(),
            store: Store::new(theory.ops.len()),
            axioms: Arc::new(axioms),
            provenance: Vec::new(),
            origin: Vec::new(),
            arities: theory.ops.iter().map(|o| o.arity()).collect(),
            result_sorts: theory.ops.iter().map(|o| sort_of(&o.result)).collect(),
            stage: 0,
            stats: Vec::new(),
            quiescent: false,
            capped: false,
        };
        let mut gen_ids = Vec::new();
        for (name, sort) in &generators.constants {
            let sort = sort_of(sort);
            let id = state.store.add_element(sort);
            state.origin.push(state.provenance.len());
            state.provenance.push(Event::Generator { id, name: name.clone(), sort });
            gen_ids.push(id);
        }
        let names = generators.names();
        for (index, rel) in generators.relations.iter().enumerate() {
            let atom = compile_atom(theory, &names, rel);
            if state.assert_atom(&atom, &gen_ids, &Cause::Relation { index }).is_err() {
                state.halt_at_cap();
                return Err(ChaseError::ElementCap { cap: config.cap, partial: Box::new(state) });
            }
        }
        state.store.compress();
        Ok(state)
    }

    /// Runs `rounds` further rounds.
    pub fn run(&mut self, rounds: usize) -> Result<(), usize> {
        for _ in 0..rounds {
            if self.capped || self.step().is_err() {
                self.halt_at_cap();
                return Err(self.config.cap);
            }
        }
        Ok(())
    }

    fn halt_at_cap(&mut self) {
        self.capped = true;
        self.rebuild_logged();
        self.store.compress();
    }

    pub fn theory(&self) -> &TheoryPresentation {
        &self.theory
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn config(&self) -> &ChaseConfig {
        &self.config
    }

    /// Number of completed rounds.
    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn stats(&self) -> &[RoundStats] {
        &self.stats
    }

    pub fn provenance(&self) -> &[Event] {
        &self.provenance
    }

    pub fn num_elements(&self) -> usize {
        self.store.len()
    }

    /// True when the element cap stopped a round part-way.
    pub fn capped(&self) -> bool {
        self.capped
    }

    /// True when some round changed nothing, so the state is a model.
    pub fn at_fixpoint(&self) -> bool {
        self.quiescent
    }

    fn step(&mut self) -> Result<(), CapHit> {
        let round = self.stage + 1;
        let mut stats = RoundStats { round, ..Default::default() };
        if self.quiescent {
            self.stage = round;
            self.stats.push(stats);
            return Ok(());
        }
        self.store.epoch = round as u32;
        let before = self.provenance.len();
        let since = if self.config.naive || round == 1 { None } else { Some(round as u32 - 1) };
        let all = self.collect(since, false);
        let axioms = Arc::clone(&self.axioms);
        for (ai, matches) in all.into_iter().enumerate() {
            for subst in matches {
                stats.matches += 1;
                let subst: Vec<ElementId> = subst.iter().map(|&x| self.store.find(x)).collect();
                let cause = Cause::Axiom { axiom: ai, subst: subst.clone() };
                for atom in &axioms[ai].conclusion {
                    self.assert_atom(atom, &subst, &cause)?;
                }
            }
        }
        if self.provenance.len() > before {
            loop {
                stats.closure_passes += 1;
                if !self.closure_pass() {
                    break;
                }
            }
        }
        for ev in &self.provenance[before..] {
            match ev {
                Event::Create { .. } => stats.created += 1,
                Event::Merge { .. } => stats.merged += 1,
                Event::Generator { .. } => {}
            }
        }
        self.quiescent = self.provenance.len() == before;
        self.store.compress();
        self.stage = round;
        self.stats.push(stats);
        Ok(())
    }

    /// Matches of every axiom (or only those with equational conclusions)
    /// against the current canonical tables.
    fn collect(&self, since: Option<u32>, equational_only: bool) -> Vec<Vec<Vec<ElementId>>> {
        let snap = Snapshot::build(&self.store, &self.arities, self.theory.sorts.len());
        self.axioms
            .par_iter()
            .map(|ax| {
                if equational_only && !ax.has_equations {
                    Vec::new()
                } else {
                    snap.matches(&ax.query, since)
                }
            })
            .collect()
    }

    /// Fires the equations of every matching axiom instance whose sides are
    /// both already defined. Returns whether anything merged.
    fn closure_pass(&mut self) -> bool {
        let all = self.collect(None, true);
        let axioms = Arc::clone(&self.axioms);
        let mut merged = false;
        for (ai, matches) in all.into_iter().enumerate() {
            for subst in matches {
                let subst: Vec<ElementId> = subst.iter().map(|&x| self.store.find(x)).collect();
                for atom in &axioms[ai].conclusion {
                    if let CAtom::Eq(l, r) = atom {
                        if let (Some(a), Some(b)) = (self.eval(l, &subst), self.eval(r, &subst)) {
                            if a != b {
                                let cause = Cause::Axiom { axiom: ai, subst: subst.clone() };
                                self.merge(a, b, cause);
                                merged = true;
                            }
                        }
                    }
                }
            }
        }
        merged
    }

    pub(crate) fn eval(&self, t: &CTerm, subst: &[ElementId]) -> Option<ElementId> {
        match t {
            CTerm::Var(i) => Some(self.store.find(subst[*i])),
            CTerm::App(op, args) => {
                let ids: Option<Vec<ElementId>> = args.iter().map(|a| self.eval(a, subst)).collect();
                self.store.lookup(*op, &ids?)
            }
        }
    }

    pub(crate) fn holds(&self, atom: &CAtom, subst: &[ElementId]) -> bool {
        match atom {
            CAtom::Defined(t) => self.eval(t, subst).is_some(),
            CAtom::Eq(l, r) => match (self.eval(l, subst), self.eval(r, subst)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    }

    fn assert_atom(&mut self, atom: &CAtom, subst: &[ElementId], cause: &Cause) -> Result<(), CapHit> {
        match atom {
            CAtom::Defined(t) => {
                self.materialize(t, subst, cause)?;
            }
            CAtom::Eq(l, r) => {
                let a = self.materialize(l, subst, cause)?;
                let b = self.materialize(r, subst, cause)?;
                self.merge(a, b, cause.clone());
            }
        }
        Ok(())
    }

    fn materialize(&mut self, t: &CTerm, subst: &[ElementId], cause: &Cause) -> Result<ElementId, CapHit> {
        match t {
            CTerm::Var(i) => Ok(self.store.find(subst[*i])),
            CTerm::App(op, args) => {
                let mut ids = Vec::with_capacity(args.len());
                for a in args {
                    ids.push(self.materialize(a, subst, cause)?);
                }
                if let Some(r) = self.store.lookup(*op, &ids) {
                    return Ok(r);
                }
                if self.store.len() >= self.config.cap {
                    return Err(CapHit);
                }
                let id = self.store.add_element(self.result_sorts[*op]);
                self.store.insert(*op, ids.clone(), id);
                self.origin.push(self.provenance.len());
                self.provenance.push(Event::Create { op: *op, args: ids, result: id, cause: cause.clone() });
                Ok(id)
            }
        }
    }

    fn merge(&mut self, a: ElementId, b: ElementId, cause: Cause) {
        if let Some((left, right)) = self.store.union(a, b) {
            self.provenance.push(Event::Merge { left, right, cause });
            self.rebuild_logged();
        }
    }

    fn rebuild_logged(&mut self) {
        for m in self.store.rebuild() {
            self.provenance.push(Event::Merge {
                left: m.left,
                right: m.right,
                cause: Cause::Congruence { op: m.op },
            });
        }
    }

    /// Full naive verification: every axiom instance whose premise holds but
    /// whose conclusion does not. Empty exactly when the state is a model.
    pub fn pending_matches(&self) -> Vec<PendingMatch> {
        let all = self.collect(None, false);
        let mut out = Vec::new();
        for (ai, matches) in all.into_iter().enumerate() {
            for subst in matches {
                if !self.axioms[ai].conclusion.iter().all(|a| self.holds(a, &subst)) {
                    out.push(PendingMatch { axiom: ai, subst });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::parse_theory;

    const MONOID: &str = "sort M\nop e : -> M\nop mul : M M -> M\n\
        axiom mul_def [x y : M] => def(mul(x, y))\n\
        axiom unit [x : M] => mul(e, x) = x, mul(x, e) = x\n\
        axiom assoc [x y z : M] def(mul(mul(x, y), z)), def(mul(x, mul(y, z))) => mul(mul(x, y), z) = mul(x, mul(y, z))\n";

    fn monoid_counts(rounds: usize, naive: bool) -> (usize, Vec<Event>) {
        let t = parse_theory(MONOID).unwrap();
        let g = GeneratorSet::new().with(&["a", "b"], "M");
        let s = saturate_with(&t, &g, &ChaseConfig::rounds(rounds).naive(naive)).unwrap();
        (s.store.roots_of_sort(0).count(), s.provenance.clone())
    }

    #[test]
    fn empty_theory_is_empty() {
        let s = saturate(&TheoryPresentation::default(), &GeneratorSet::new(), 5).unwrap();
        assert_eq!(s.num_elements(), 0);
        assert_eq!(s.stage(), 5);
        assert!(s.at_fixpoint());
    }

    #[test]
    fn round_zero_holds_only_generators() {
        assert_eq!(monoid_counts(0, false).0, 2);
    }

    #[test]
    fn monoid_class_counts_by_round() {
        assert_eq!(monoid_counts(1, false).0, 7);
        assert_eq!(monoid_counts(2, false).0, 31);
    }

    #[test]
    fn naive_and_semi_naive_agree() {
        assert_eq!(monoid_counts(3, false), monoid_counts(3, true));
    }

    #[test]
    fn cap_stops_with_partial_state() {
        let t = parse_theory(MONOID).unwrap();
        let g = GeneratorSet::new().with(&["a", "b"], "M");
        match saturate_with(&t, &g, &ChaseConfig::rounds(3).with_cap(20)) {
            Err(ChaseError::ElementCap { cap, partial }) => {
                assert_eq!(cap, 20);
                assert!(partial.capped());
                assert_eq!(partial.num_elements(), 20);
                assert_eq!(partial.stage(), 1);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_input_is_rejected() {
        let t = parse_theory("sort M\naxiom bad [] => x = x\n").unwrap();
        assert!(matches!(saturate(&t, &GeneratorSet::new(), 1), Err(ChaseError::InvalidTheory(_))));
        let t = parse_theory(MONOID).unwrap();
        let g = GeneratorSet::new().with(&["a"], "N");
        assert!(matches!(saturate(&t, &g, 1), Err(ChaseError::Generators(_))));
    }

    #[test]
    fn fixpoint_has_no_pending_matches() {
        let t = parse_theory("sort S\nop f : S -> S\naxiom f_def [x : S] => def(f(x))\naxiom inv [x : S] => f(f(x)) = x\n")
            .unwrap();
        let g = GeneratorSet::new().with(&["c"], "S");
        let s = saturate(&t, &g, 4).unwrap();
        assert!(s.at_fixpoint());
        assert_eq!(s.store.roots_of_sort(0).count(), 2);
        assert!(s.pending_matches().is_empty());
        let early = saturate(&t, &g, 0).unwrap();
        assert!(!early.pending_matches().is_empty());
    }
}

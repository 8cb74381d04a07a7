//! Premise compilation and backtracking joins over a frozen view of the
//! operation tables.
//!
//! A premise is flattened into relation atoms `R_op(args.., result)`, one per
//! distinct subterm, with premise equations resolved by unifying variables.
//! Context variables that occur in no relation atom range over the classes of
//! their sort. Matching is semi-naive: facts carry the round in which they
//! last changed, and a round only enumerates joins that touch a recent fact.

use std::collections::HashMap;

use crate::theory::{Atom, Axiom, Term, TheoryPresentation};

use super::store::Store;
use super::ElementId;

pub(crate) type Var = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum QAtom {
    Rel { op: usize, args: Vec<Var>, res: Var },
    Range { sort: usize, var: Var },
}

impl QAtom {
    fn vars(&self) -> Vec<Var> {
        match self {
            QAtom::Rel { args, res, .. } => args.iter().copied().chain([*res]).collect(),
            QAtom::Range { var, .. } => vec![*var],
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Query {
    pub nvars: usize,
    /// Query variable of each context position.
    pub ctx: Vec<Var>,
    pub atoms: Vec<QAtom>,
}

/// A term whose variables are context positions and whose ops are indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum CAtom {
    Eq(CTerm, CTerm),
    Defined(CTerm),
}

pub(crate) fn compile_term(theory: &TheoryPresentation, vars: &[&str], t: &Term) -> CTerm {
    match t {
        Term::Var(v) => CTerm::Var(vars.iter().position(|x| x == v).expect("validated: variable bound")),
        Term::App(op, args) => CTerm::App(
            theory.op_index(op).expect("validated: op declared"),
            args.iter().map(|a| compile_term(theory, vars, a)).collect(),
        ),
    }
}

pub(crate) fn compile_atom(theory: &TheoryPresentation, vars: &[&str], a: &Atom) -> CAtom {
    match a {
        Atom::Eq(l, r) => CAtom::Eq(compile_term(theory, vars, l), compile_term(theory, vars, r)),
        Atom::Defined(t) => CAtom::Defined(compile_term(theory, vars, t)),
    }
}

struct Flattener {
    parent: Vec<Var>,
    rels: Vec<(usize, Vec<Var>, Var)>,
}

impl Flattener {
    fn fresh(&mut self) -> Var {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn root(&self, mut v: Var) -> Var {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    fn unify(&mut self, a: Var, b: Var) -> bool {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn term(&mut self, t: &CTerm) -> Var {
        match t {
            CTerm::Var(i) => *i,
            CTerm::App(op, args) => {
                let args: Vec<Var> = args.iter().map(|a| self.term(a)).collect();
                let res = self.fresh();
                self.rels.push((*op, args, res));
                res
            }
        }
    }
}

pub(crate) fn compile_query(theory: &TheoryPresentation, axiom: &Axiom) -> Query {
    let names: Vec<&str> = axiom.context.iter().map(|(v, _)| v.as_str()).collect();
    let mut fl = Flattener { parent: (0..names.len()).collect(), rels: Vec::new() };
    for atom in &axiom.premise {
        match compile_atom(theory, &names, atom) {
            CAtom::Defined(t) => {
                fl.term(&t);
            }
            CAtom::Eq(l, r) => {
                let (vl, vr) = (fl.term(&l), fl.term(&r));
                fl.unify(vl, vr);
            }
        }
    }
    // Functionality: equal arguments force equal results.
    loop {
        let mut seen: HashMap<(usize, Vec<Var>), Var> = HashMap::new();
        let mut changed = false;
        let rels = fl.rels.clone();
        for (op, args, res) in &rels {
            let key = (*op, args.iter().map(|&a| fl.root(a)).collect::<Vec<_>>());
            match seen.get(&key) {
                Some(&other) => changed |= fl.unify(other, *res),
                None => {
                    seen.insert(key, fl.root(*res));
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut atoms: Vec<QAtom> = Vec::new();
    for (op, args, res) in &fl.rels {
        let atom = QAtom::Rel {
            op: *op,
            args: args.iter().map(|&a| fl.root(a)).collect(),
            res: fl.root(*res),
        };
        if !atoms.contains(&atom) {
            atoms.push(atom);
        }
    }
    let ctx: Vec<Var> = (0..names.len()).map(|i| fl.root(i)).collect();
    let mut covered: Vec<Var> = atoms.iter().flat_map(QAtom::vars).collect();
    for (i, (_, sort)) in axiom.context.iter().enumerate() {
        let v = ctx[i];
        if !covered.contains(&v) {
            covered.push(v);
            atoms.push(QAtom::Range {
                sort: theory.sort_index(sort).expect("validated: sort declared"),
                var: v,
            });
        }
    }
    Query { nvars: fl.parent.len(), ctx, atoms }
}

struct RelView {
    arity: usize,
    /// Flattened rows of `arity + 1` ids (arguments then result).
    cells: Vec<ElementId>,
    stamps: Vec<u32>,
    by_pos: Vec<HashMap<ElementId, Vec<u32>>>,
}

impl RelView {
    fn row(&self, i: usize) -> &[ElementId] {
        let w = self.arity + 1;
        &self.cells[i * w..(i + 1) * w]
    }
}

/// A frozen, indexed copy of the canonical tables.
pub(crate) struct Snapshot {
    rels: Vec<RelView>,
    ranges: Vec<Vec<(ElementId, u32)>>,
    born: Vec<u32>,
}

impl Snapshot {
    pub fn build(store: &Store, arities: &[usize], num_sorts: usize) -> Self {
        let rels = arities
            .iter()
            .enumerate()
            .map(|(op, &arity)| {
                let mut view = RelView {
                    arity,
                    cells: Vec::new(),
                    stamps: Vec::new(),
                    by_pos: vec![HashMap::new(); arity + 1],
                };
                for (i, (args, result, stamp)) in store.rows(op).enumerate() {
                    view.cells.extend_from_slice(args);
                    view.cells.push(result);
                    view.stamps.push(stamp);
                    for (p, &id) in args.iter().chain([&result]).enumerate() {
                        view.by_pos[p].entry(id).or_default().push(i as u32);
                    }
                }
                view
            })
            .collect();
        let mut ranges = vec![Vec::new(); num_sorts];
        for i in 0..store.len() {
            let id = ElementId(i as u32);
            if store.is_root(id) {
                ranges[store.sort[i]].push((id, store.born[i]));
            }
        }
        Snapshot { rels, ranges, born: store.born.clone() }
    }

    fn rel_size(&self, atom: &QAtom) -> usize {
        match atom {
            QAtom::Rel { op, .. } => self.rels[*op].stamps.len(),
            QAtom::Range { sort, .. } => self.ranges[*sort].len(),
        }
    }

    /// All context substitutions satisfying `q`. With `since = Some(e)` only
    /// joins using at least one fact stamped `>= e` are returned. The result
    /// is sorted and duplicate-free.
    pub fn matches(&self, q: &Query, since: Option<u32>) -> Vec<Vec<ElementId>> {
        let mut out = Vec::new();
        let n = q.atoms.len();
        if n == 0 {
            if since.is_none_or(|e| e == 0) {
                out.push(Vec::new());
            }
            return out;
        }
        let variants: Vec<Option<usize>> = match since {
            None => vec![None],
            Some(_) => (0..n).map(Some).collect(),
        };
        let threshold = since.unwrap_or(0);
        for delta in variants {
            let ages: Vec<Age> = (0..n)
                .map(|i| match delta {
                    None => Age::Any,
                    Some(d) if i < d => Age::Old,
                    Some(d) if i == d => Age::New,
                    Some(_) => Age::Any,
                })
                .collect();
            if ages.iter().zip(&q.atoms).any(|(age, a)| *age == Age::New && self.rel_size(a) == 0) {
                continue;
            }
            let plan = self.plan(q, delta);
            let mut assign = vec![None; q.nvars];
            let mut search = Search { snap: self, q, plan: &plan, ages: &ages, threshold, out: &mut out };
            search.go(0, &mut assign);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Greedy join order: start from the delta atom (or the smallest
    /// relation), then repeatedly take the atom with the most bound variables.
    fn plan(&self, q: &Query, delta: Option<usize>) -> Vec<usize> {
        let n = q.atoms.len();
        let mut bound = vec![false; q.nvars];
        let mut used = vec![false; n];
        let mut plan = Vec::with_capacity(n);
        let first = delta.unwrap_or_else(|| {
            (0..n).min_by_key(|&i| (self.rel_size(&q.atoms[i]), i)).expect("nonempty")
        });
        let mut next = Some(first);
        while let Some(i) = next {
            used[i] = true;
            plan.push(i);
            for v in q.atoms[i].vars() {
                bound[v] = true;
            }
            next = (0..n).filter(|&j| !used[j]).min_by_key(|&j| {
                let vars = q.atoms[j].vars();
                let unbound = vars.iter().filter(|&&v| !bound[v]).count();
                let fully_free = unbound == vars.len();
                (fully_free, unbound, self.rel_size(&q.atoms[j]), j)
            });
        }
        plan
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Age {
    Old,
    New,
    Any,
}

impl Age {
    fn admits(self, stamp: u32, threshold: u32) -> bool {
        match self {
            Age::Old => stamp < threshold,
            Age::New => stamp >= threshold,
            Age::Any => true,
        }
    }
}

struct Search<'a> {
    snap: &'a Snapshot,
    q: &'a Query,
    plan: &'a [usize],
    ages: &'a [Age],
    threshold: u32,
    out: &'a mut Vec<Vec<ElementId>>,
}

impl Search<'_> {
    fn go(&mut self, depth: usize, assign: &mut Vec<Option<ElementId>>) {
        if depth == self.plan.len() {
            let subst = self.q.ctx.iter().map(|&v| assign[v].expect("context bound")).collect();
            self.out.push(subst);
            return;
        }
        let idx = self.plan[depth];
        let age = self.ages[idx];
        match &self.q.atoms[idx] {
            QAtom::Range { sort, var } => {
                if let Some(id) = assign[*var] {
                    if age.admits(self.snap.born[id.index()], self.threshold) {
                        self.go(depth + 1, assign);
                    }
                    return;
                }
                for &(id, born) in &self.snap.ranges[*sort] {
                    if age.admits(born, self.threshold) {
                        assign[*var] = Some(id);
                        self.go(depth + 1, assign);
                    }
                }
                assign[*var] = None;
            }
            QAtom::Rel { op, args, res } => {
                let rel = &self.snap.rels[*op];
                let vars: Vec<Var> = args.iter().copied().chain([*res]).collect();
                let mut best: Option<&[u32]> = None;
                for (p, &v) in vars.iter().enumerate() {
                    if let Some(id) = assign[v] {
                        let posting = rel.by_pos[p].get(&id).map(Vec::as_slice).unwrap_or(&[]);
                        if best.is_none_or(|b| posting.len() < b.len()) {
                            best = Some(posting);
                        }
                    }
                }
                let all: Vec<u32>;
                let candidates = match best {
                    Some(b) => b,
                    None => {
                        all = (0..rel.stamps.len() as u32).collect();
                        &all
                    }
                };
                let mut newly = Vec::with_capacity(vars.len());
                for &r in candidates {
                    if !age.admits(rel.stamps[r as usize], self.threshold) {
                        continue;
                    }
                    let row = rel.row(r as usize);
                    let mut ok = true;
                    for (p, &v) in vars.iter().enumerate() {
                        match assign[v] {
                            Some(id) if id != row[p] => {
                                ok = false;
                                break;
                            }
                            Some(_) => {}
                            None => {
                                assign[v] = Some(row[p]);
                                newly.push(v);
                            }
                        }
                    }
                    if ok {
                        self.go(depth + 1, assign);
                    }
                    for v in newly.drain(..) {
                        assign[v] = None;
                    }
                }
            }
        }
    }
}

//! Union-find over elements and hash-consed operation tables, with
//! incremental congruence repair driven by per-element use lists.

use std::collections::BTreeMap;

use super::ElementId;

#[derive(Clone, Debug)]
pub(crate) struct Entry {
    pub op: usize,
    pub args: Vec<ElementId>,
    pub result: ElementId,
    /// Round in which the entry last changed form.
    pub stamp: u32,
    pub live: bool,
}

/// A congruence merge performed during [`Store::rebuild`].
pub(crate) struct CongruenceMerge {
    pub op: usize,
    pub left: ElementId,
    pub right: ElementId,
}

#[derive(Clone, Debug)]
pub(crate) struct Store {
    pub sort: Vec<usize>,
    pub born: Vec<u32>,
    parent: Vec<ElementId>,
    uses: Vec<Vec<u32>>,
    pub entries: Vec<Entry>,
    pub tables: Vec<BTreeMap<Vec<ElementId>, u32>>,
    pending: Vec<ElementId>,
    pub epoch: u32,
}

impl Store {
    pub fn new(num_ops: usize) -> Self {
        Store {
            sort: Vec::new(),
            born: Vec::new(),
            parent: Vec::new(),
            uses: Vec::new(),
            entries: Vec::new(),
            tables: vec![BTreeMap::new(); num_ops],
            pending: Vec::new(),
            epoch: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.sort.len()
    }

    pub fn add_element(&mut self, sort: usize) -> ElementId {
        let id = ElementId(u32::try_from(self.sort.len()).expect("element ids fit in u32"));
        self.sort.push(sort);
        self.born.push(self.epoch);
        self.parent.push(id);
        self.uses.push(Vec::new());
        id
    }

    pub fn find(&self, mut x: ElementId) -> ElementId {
        while self.parent[x.index()] != x {
            x = self.parent[x.index()];
        }
        x
    }

    pub fn find_mut(&mut self, x: ElementId) -> ElementId {
        let root = self.find(x);
        let mut cur = x;
        while cur != root {
            let next = self.parent[cur.index()];
            self.parent[cur.index()] = root;
            cur = next;
        }
        root
    }

    /// Points every element directly at its root.
    pub fn compress(&mut self) {
        for i in 0..self.parent.len() {
            let id = ElementId(i as u32);
            self.find_mut(id);
        }
    }

    pub fn is_root(&self, x: ElementId) -> bool {
        self.parent[x.index()] == x
    }

    pub fn canonical_args(&self, args: &[ElementId]) -> Vec<ElementId> {
        args.iter().map(|&a| self.find(a)).collect()
    }

    /// Result of `op(args)` if present. Exact only when no merges are pending.
    pub fn lookup(&self, op: usize, args: &[ElementId]) -> Option<ElementId> {
        let key = self.canonical_args(args);
        self.tables[op]
            .get(&key)
            .map(|&e| self.find(self.entries[e as usize].result))
    }

    /// Inserts `op(args) = result`; `args` must be canonical and absent.
    pub fn insert(&mut self, op: usize, args: Vec<ElementId>, result: ElementId) {
        let eid = u32::try_from(self.entries.len()).expect("entry ids fit in u32");
        let mut touched: Vec<ElementId> = args.iter().copied().chain([result]).collect();
        touched.sort_unstable();
        touched.dedup();
        for t in touched {
            self.uses[t.index()].push(eid);
        }
        let prev = self.tables[op].insert(args.clone(), eid);
        debug_assert!(prev.is_none());
        self.entries.push(Entry { op, args, result, stamp: self.epoch, live: true });
    }

    /// Merges the classes of `a` and `b`, keeping the older root. Returns
    /// the `(root, absorbed)` pair when the classes were distinct.
    pub fn union(&mut self, a: ElementId, b: ElementId) -> Option<(ElementId, ElementId)> {
        let (ra, rb) = (self.find_mut(a), self.find_mut(b));
        if ra == rb {
            return None;
        }
        let (root, child) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[child.index()] = root;
        let moved = self.uses[child.index()].clone();
        self.uses[root.index()].extend(moved);
        self.pending.push(child);
        Some((root, child))
    }

    /// Re-canonicalizes every entry that mentions an absorbed element and
    /// merges results whose argument tuples collide, until no merges remain.
    pub fn rebuild(&mut self) -> Vec<CongruenceMerge> {
        let mut merges = Vec::new();
        while !self.pending.is_empty() {
            let batch = std::mem::take(&mut self.pending);
            for child in batch {
                let list = std::mem::take(&mut self.uses[child.index()]);
                for eid in list {
                    self.repair(eid, &mut merges);
                }
            }
        }
        merges
    }

    fn repair(&mut self, eid: u32, merges: &mut Vec<CongruenceMerge>) {
        let entry = &self.entries[eid as usize];
        if !entry.live {
            return;
        }
        let op = entry.op;
        let args = self.canonical_args(&entry.args);
        let result = self.find(entry.result);
        if args == entry.args && result == entry.result {
            return;
        }
        let old_key = std::mem::take(&mut self.entries[eid as usize].args);
        if self.tables[op].get(&old_key) == Some(&eid) {
            self.tables[op].remove(&old_key);
        }
        match self.tables[op].get(&args) {
            Some(&other) => {
                self.entries[eid as usize].live = false;
                self.entries[eid as usize].args = args;
                let other_result = self.find(self.entries[other as usize].result);
                if let Some((left, right)) = self.union(other_result, result) {
                    merges.push(CongruenceMerge { op, left, right });
                }
            }
            None => {
                let epoch = self.epoch;
                let e = &mut self.entries[eid as usize];
                e.args = args.clone();
                e.result = result;
                e.stamp = epoch;
                self.tables[op].insert(args, eid);
            }
        }
    }

    /// Live entries of `op` in key order, as `(args, result, stamp)`.
    pub fn rows(&self, op: usize) -> impl Iterator<Item = (&[ElementId], ElementId, u32)> + '_ {
        self.tables[op].values().map(move |&e| {
            let entry = &self.entries[e as usize];
            (entry.args.as_slice(), self.find(entry.result), entry.stamp)
        })
    }

    pub fn roots_of_sort(&self, sort: usize) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.len())
            .map(|i| ElementId(i as u32))
            .filter(move |&id| self.sort[id.index()] == sort && self.is_root(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_root_wins() {
        let mut s = Store::new(0);
        let a = s.add_element(0);
        let b = s.add_element(0);
        let c = s.add_element(0);
        assert_eq!(s.union(c, b), Some((b, c)));
        assert_eq!(s.union(b, a), Some((a, b)));
        assert_eq!(s.find(c), a);
        assert_eq!(s.union(a, c), None);
    }

    #[test]
    fn congruence_collapses_entries() {
        // f(a) = x, f(b) = y; merging a and b must merge x and y.
        let mut s = Store::new(1);
        let a = s.add_element(0);
        let b = s.add_element(0);
        let x = s.add_element(0);
        let y = s.add_element(0);
        s.insert(0, vec![a], x);
        s.insert(0, vec![b], y);
        s.union(a, b);
        let merges = s.rebuild();
        assert_eq!(merges.len(), 1);
        assert_eq!(s.find(y), x);
        assert_eq!(s.tables[0].len(), 1);
        assert_eq!(s.lookup(0, &[b]), Some(x));
    }

    #[test]
    fn cascading_repairs_follow_use_lists() {
        // g(f(a), c), g(f(b), c); then a ~ b forces f(a) ~ f(b) and the g's.
        let mut s = Store::new(2);
        let a = s.add_element(0);
        let b = s.add_element(0);
        let c = s.add_element(0);
        let fa = s.add_element(0);
        let fb = s.add_element(0);
        let g1 = s.add_element(0);
        let g2 = s.add_element(0);
        s.insert(0, vec![a], fa);
        s.insert(0, vec![b], fb);
        s.insert(1, vec![fa, c], g1);
        s.insert(1, vec![fb, c], g2);
        s.union(b, a);
        s.rebuild();
        assert_eq!(s.find(fb), fa);
        assert_eq!(s.find(g2), g1);
        // A later merge on `c` still finds the re-keyed entry through c's use list.
        let d = s.add_element(0);
        let g3 = s.add_element(0);
        s.insert(1, vec![fa, d], g3);
        s.union(c, d);
        s.rebuild();
        assert_eq!(s.find(g3), g1);
        assert_eq!(s.tables[1].len(), 1);
    }
}

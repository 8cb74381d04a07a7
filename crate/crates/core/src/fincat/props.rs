//! Monos, covers, limits, subobjects, images and projectivity by exhaustive
//! search. Every search visits candidates in lexicographic index order, so
//! the first hit is the chosen one.

use std::collections::HashMap;

use serde::Serialize;

use super::FiniteCategory;

/// A cone: an apex with one leg per diagram object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cone {
    pub apex: usize,
    pub legs: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct ChosenLimits {
    pub terminal: Option<usize>,
    pub pullbacks: HashMap<(usize, usize), Option<Cone>>,
}

/// Monomorphisms into an object, grouped by mutual factorisation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubobjectLattice {
    pub object: usize,
    /// Each class lists its monos in index order; classes are ordered by
    /// their least member.
    pub classes: Vec<Vec<usize>>,
    /// `leq[i][j]` iff class `i` factors through class `j`.
    pub leq: Vec<Vec<bool>>,
    pub top: usize,
}

impl SubobjectLattice {
    pub fn is_partial_order(&self) -> bool {
        let n = self.classes.len();
        (0..n).all(|i| self.leq[i][i])
            && (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq[i][j] && self.leq[j][i])))
            && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(self.leq[i][j] && self.leq[j][k]) || self.leq[i][k])))
    }

    pub fn top_is_greatest(&self) -> bool {
        (0..self.classes.len()).all(|i| self.leq[i][self.top])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectivityReport {
    pub regular: bool,
    /// Per object: (lifting property, every cover into it splits).
    pub objects: Vec<(bool, bool)>,
    pub mismatches: Vec<usize>,
}

impl FiniteCategory {
    pub fn is_mono(&self, f: usize) -> bool {
        let d = self.dom(f);
        (0..self.num_objects()).all(|x| {
            let h = self.hom(x, d);
            h.iter().all(|&a| h.iter().all(|&b| a == b || self.compose(f, a) != self.compose(f, b)))
        })
    }

    pub fn is_epi(&self, f: usize) -> bool {
        let c = self.cod(f);
        (0..self.num_objects()).all(|x| {
            let h = self.hom(c, x);
            h.iter().all(|&a| h.iter().all(|&b| a == b || self.compose(a, f) != self.compose(b, f)))
        })
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (d, c) = (self.dom(f), self.cod(f));
        self.hom(c, d)
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == Some(self.id(d)) && self.compose(f, g) == Some(self.id(c)))
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    /// A section `s` with `f ∘ s = id`.
    pub fn section(&self, f: usize) -> Option<usize> {
        let (d, c) = (self.dom(f), self.cod(f));
        self.hom(c, d).iter().copied().find(|&s| self.compose(f, s) == Some(self.id(c)))
    }

    pub fn is_split_epi(&self, f: usize) -> bool {
        self.section(f).is_some()
    }

    pub fn is_split_mono(&self, f: usize) -> bool {
        let (d, c) = (self.dom(f), self.cod(f));
        self.hom(c, d).iter().any(|&r| self.compose(r, f) == Some(self.id(d)))
    }

    /// Least object `t` with exactly one map from every object.
    pub fn terminal(&self) -> Option<usize> {
        (0..self.num_objects()).find(|&t| (0..self.num_objects()).all(|a| self.hom(a, t).len() == 1))
    }

    pub fn initial(&self) -> Option<usize> {
        (0..self.num_objects()).find(|&t| (0..self.num_objects()).all(|a| self.hom(t, a).len() == 1))
    }

    /// All cones `(p, p1, p2)` over the cospan `f, g` with `f p1 = g p2`.
    fn cospan_cones(&self, f: usize, g: usize) -> Vec<Cone> {
        let mut out = Vec::new();
        for p in 0..self.num_objects() {
            for &p1 in self.hom(p, self.dom(f)) {
                for &p2 in self.hom(p, self.dom(g)) {
                    if self.compose(f, p1) == self.compose(g, p2) {
                        out.push(Cone { apex: p, legs: vec![p1, p2] });
                    }
                }
            }
        }
        out
    }

    /// Whether `cone` is terminal among `cones`: every cone factors through
    /// it by exactly one mediating map.
    fn is_limit_among(&self, cone: &Cone, cones: &[Cone]) -> bool {
        cones.iter().all(|q| {
            self.hom(q.apex, cone.apex)
                .iter()
                .filter(|&&u| cone.legs.iter().zip(&q.legs).all(|(&l, &ql)| self.compose(l, u) == Some(ql)))
                .take(2)
                .count()
                == 1
        })
    }

    pub fn is_pullback(&self, f: usize, g: usize, cone: &Cone) -> bool {
        let cones = self.cospan_cones(f, g);
        cones.contains(cone) && self.is_limit_among(cone, &cones)
    }

    /// The first universal cone over `f, g` in index order.
    pub fn pullback(&self, f: usize, g: usize) -> Option<Cone> {
        if self.cod(f) != self.cod(g) {
            return None;
        }
        if let Some(c) = self.chosen.get() {
            if let Some(p) = c.pullbacks.get(&(f, g)) {
                return p.clone();
            }
        }
        let cones = self.cospan_cones(f, g);
        cones.iter().find(|c| self.is_limit_among(c, &cones)).cloned()
    }

    pub fn kernel_pair(&self, f: usize) -> Option<Cone> {
        self.pullback(f, f)
    }

    /// Mono via the kernel-pair encoding: the kernel pair exists and both
    /// projections are isomorphisms. `None` when there is no kernel pair.
    pub fn is_mono_by_kernel_pair(&self, f: usize) -> Option<bool> {
        self.kernel_pair(f).map(|k| k.legs.iter().all(|&p| self.is_iso(p)))
    }

    pub fn product(&self, a: usize, b: usize) -> Option<Cone> {
        let mut cones = Vec::new();
        for p in 0..self.num_objects() {
            for &p1 in self.hom(p, a) {
                for &p2 in self.hom(p, b) {
                    cones.push(Cone { apex: p, legs: vec![p1, p2] });
                }
            }
        }
        cones.iter().find(|c| self.is_limit_among(c, &cones)).cloned()
    }

    /// Equalizer of a parallel pair, as a one-legged cone into `dom f`.
    pub fn equalizer(&self, f: usize, g: usize) -> Option<Cone> {
        if self.dom(f) != self.dom(g) || self.cod(f) != self.cod(g) {
            return None;
        }
        let mut cones = Vec::new();
        for e in 0..self.num_objects() {
            for &m in self.hom(e, self.dom(f)) {
                if self.compose(f, m) == self.compose(g, m) {
                    cones.push(Cone { apex: e, legs: vec![m] });
                }
            }
        }
        cones.iter().find(|c| self.is_limit_among(c, &cones)).cloned()
    }

    pub(crate) fn chosen_limits(&self) -> &ChosenLimits {
        self.chosen.get_or_init(|| {
            let mut c = ChosenLimits { terminal: self.terminal(), ..Default::default() };
            for f in 0..self.num_morphisms() {
                for g in self.into(self.cod(f)) {
                    let cones = self.cospan_cones(f, g);
                    let pb = cones.iter().find(|c| self.is_limit_among(c, &cones)).cloned();
                    c.pullbacks.insert((f, g), pb);
                }
            }
            c
        })
    }

    /// Terminal object and all pullbacks exist.
    pub fn has_finite_limits(&self) -> bool {
        let c = self.chosen_limits();
        c.terminal.is_some() && c.pullbacks.values().all(Option::is_some)
    }

    pub fn subobjects(&self, x: usize) -> SubobjectLattice {
        let monos: Vec<usize> = self.into(x).filter(|&m| self.is_mono(m)).collect();
        let factors = |m: usize, n: usize| self.hom(self.dom(m), self.dom(n)).iter().any(|&k| self.compose(n, k) == Some(m));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &m in &monos {
            match classes.iter_mut().find(|c| factors(m, c[0]) && factors(c[0], m)) {
                Some(c) => c.push(m),
                None => classes.push(vec![m]),
            }
        }
        let leq = classes
            .iter()
            .map(|a| classes.iter().map(|b| factors(a[0], b[0])).collect())
            .collect();
        let top = classes.iter().position(|c| c.contains(&self.id(x))).expect("identity is mono");
        SubobjectLattice { object: x, classes, leq, top }
    }

    /// `f` factors through no mono into its codomain that is not an iso.
    pub fn is_cover(&self, f: usize) -> bool {
        let (d, c) = (self.dom(f), self.cod(f));
        self.into(c).all(|m| {
            self.is_iso(m)
                || !self.is_mono(m)
                || !self.hom(d, self.dom(m)).iter().any(|&g| self.compose(m, g) == Some(f))
        })
    }

    /// Epi such that every factorisation `f = m ∘ g` with `m` mono has `m` iso.
    pub fn is_extremal_epi(&self, f: usize) -> bool {
        let (d, c) = (self.dom(f), self.cod(f));
        self.is_epi(f)
            && self.into(c).all(|m| {
                !self.is_mono(m)
                    || self.is_iso(m)
                    || !self.hom(d, self.dom(m)).iter().any(|&g| self.compose(m, g) == Some(f))
            })
    }

    /// A factorisation `f = m ∘ e` with `e` a cover and `m` mono; first by
    /// intermediate object, then `e`, then `m`.
    pub fn image_factorisation(&self, f: usize) -> Option<(usize, usize)> {
        let (d, c) = (self.dom(f), self.cod(f));
        for i in 0..self.num_objects() {
            for &e in self.hom(d, i) {
                for &m in self.hom(i, c) {
                    if self.compose(m, e) == Some(f) && self.is_mono(m) && self.is_cover(e) {
                        return Some((e, m));
                    }
                }
            }
        }
        None
    }

    /// All image factorisations of `f`.
    pub fn image_factorisations(&self, f: usize) -> Vec<(usize, usize)> {
        let (d, c) = (self.dom(f), self.cod(f));
        let mut out = Vec::new();
        for i in 0..self.num_objects() {
            for &e in self.hom(d, i) {
                for &m in self.hom(i, c) {
                    if self.compose(m, e) == Some(f) && self.is_mono(m) && self.is_cover(e) {
                        out.push((e, m));
                    }
                }
            }
        }
        out
    }

    /// An iso `u` between the middle objects with `u e = e'` and `m' u = m`.
    pub fn factorisation_iso(&self, (e, m): (usize, usize), (e2, m2): (usize, usize)) -> Option<usize> {
        self.hom(self.cod(e), self.cod(e2)).iter().copied().find(|&u| {
            self.is_iso(u) && self.compose(u, e) == Some(e2) && self.compose(m2, u) == Some(m)
        })
    }

    /// Finite limits, image factorisations, and covers stable under pullback.
    pub fn is_regular(&self) -> bool {
        if !self.has_finite_limits() {
            return false;
        }
        let m = self.num_morphisms();
        if !(0..m).all(|f| self.image_factorisation(f).is_some()) {
            return false;
        }
        (0..m).filter(|&e| self.is_cover(e)).all(|e| {
            self.into(self.cod(e)).all(|h| {
                let pb = self.pullback(e, h).expect("finite limits");
                self.is_cover(pb.legs[1])
            })
        })
    }

    /// Maps from `p` lift along every cover.
    pub fn is_projective(&self, p: usize) -> bool {
        (0..self.num_morphisms()).filter(|&e| self.is_cover(e)).all(|e| {
            self.hom(p, self.cod(e))
                .iter()
                .all(|&f| self.hom(p, self.dom(e)).iter().any(|&g| self.compose(e, g) == Some(f)))
        })
    }

    pub fn every_cover_splits(&self, p: usize) -> bool {
        self.into(p).filter(|&e| self.is_cover(e)).all(|e| self.is_split_epi(e))
    }

    /// Compares the lifting property with splitting of covers at every
    /// object. Mismatches are only meaningful when the category is regular.
    pub fn check_projectivity_equiv(&self) -> ProjectivityReport {
        let objects: Vec<(bool, bool)> =
            (0..self.num_objects()).map(|p| (self.is_projective(p), self.every_cover_splits(p))).collect();
        let mismatches = objects.iter().enumerate().filter(|(_, (a, b))| a != b).map(|(i, _)| i).collect();
        ProjectivityReport { regular: self.is_regular(), objects, mismatches }
    }
}

#[cfg(test)]
mod tests {
    use super::super::FiniteCategory;

    fn chain(n: usize) -> FiniteCategory {
        let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FiniteCategory::from_preorder(format!("{n}"), &leq).unwrap()
    }

    fn idempotent() -> FiniteCategory {
        FiniteCategory::parse_json(r#"{"objects":["*"],"morphisms":[{"id":"e","dom":"*","cod":"*"}],"comp":[["e","e","e"]]}"#)
            .unwrap()
    }

    #[test]
    fn identity_is_mono_and_split_epi() {
        let c = chain(2);
        assert!(c.is_mono(0) && c.is_split_epi(0) && c.is_cover(0));
        let f = c.morphism_index("0<1").unwrap();
        assert!(c.is_mono(f));
        assert!(!c.is_split_epi(f));
        assert!(!c.is_cover(f));
    }

    #[test]
    fn chains_have_limits_and_trivial_images() {
        let c = chain(3);
        assert_eq!(c.terminal(), Some(2));
        assert!(c.has_finite_limits());
        assert!(c.is_regular());
        for f in 0..c.num_morphisms() {
            assert_eq!(c.image_factorisation(f), Some((c.id(c.dom(f)), f)));
            assert_eq!(c.is_mono_by_kernel_pair(f), Some(true));
        }
        let p = c.pullback(c.morphism_index("0<2").unwrap(), c.morphism_index("1<2").unwrap()).unwrap();
        assert_eq!(p.apex, 0);
        assert_eq!(c.subobjects(2).classes.len(), 3);
    }

    #[test]
    fn idempotent_monoid() {
        let c = idempotent();
        let e = 1;
        assert!(!c.is_mono(e) && !c.is_epi(e));
        assert!(c.is_cover(e), "no proper subobjects: the only mono is the identity");
        assert!(!c.is_extremal_epi(e));
        assert!(!c.is_split_epi(e));
        assert_eq!(c.is_mono_by_kernel_pair(e), None);
        assert!(!c.has_finite_limits());
    }

    #[test]
    fn subobject_lattice_of_chain_top() {
        let c = chain(4);
        let s = c.subobjects(3);
        assert!(s.is_partial_order() && s.top_is_greatest());
        assert_eq!(s.classes[s.top], vec![3]);
    }
}

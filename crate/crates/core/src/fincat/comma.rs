//! Comma and iso-comma categories of finite functors with a common target.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::functor::{all_functors, FinFunctor};
use super::props::Cone;
use super::{CategoryError, FiniteCategory};

/// `F1 ↓ F0` with its projections and the canonical transformation
/// `α : F1 P1 ⇒ F0 P0`.
#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub category: Arc<FiniteCategory>,
    /// `(c1, c0, φ)` per object, with `φ : F1 c1 → F0 c0`.
    pub triples: Vec<(usize, usize, usize)>,
    /// `(f1, f0)` per morphism.
    pub pairs: Vec<(usize, usize)>,
    pub p1: FinFunctor,
    pub p0: FinFunctor,
    /// Component of `α` at each object; equal to that object's `φ`.
    pub alpha: Vec<usize>,
    pub iso: bool,
}

impl CommaCategory {
    pub fn object_of(&self, c1: usize, c0: usize, phi: usize) -> Option<usize> {
        self.triples.iter().position(|&t| t == (c1, c0, phi))
    }

    pub fn morphism_of(&self, src: usize, tgt: usize, f1: usize, f0: usize) -> Option<usize> {
        let c = &self.category;
        c.hom(src, tgt).iter().copied().find(|&m| self.pairs[m] == (f1, f0))
    }
}

pub fn comma(f1: &FinFunctor, f0: &FinFunctor) -> Result<CommaCategory, CategoryError> {
    build(f1, f0, false)
}

pub fn iso_comma(f1: &FinFunctor, f0: &FinFunctor) -> Result<CommaCategory, CategoryError> {
    build(f1, f0, true)
}

fn build(f1: &FinFunctor, f0: &FinFunctor, iso: bool) -> Result<CommaCategory, CategoryError> {
    let d = &*f1.target;
    assert!(*f0.target == *d, "comma of functors with different targets");
    let (c1, c0) = (&*f1.source, &*f0.source);
    let mut triples = Vec::new();
    for a in 0..c1.num_objects() {
        for b in 0..c0.num_objects() {
            for &phi in d.hom(f1.obj(a), f0.obj(b)) {
                if !iso || d.is_iso(phi) {
                    triples.push((a, b, phi));
                }
            }
        }
    }
    let n = triples.len();
    let names: Vec<String> = triples
        .iter()
        .map(|&(a, b, phi)| format!("({},{},{})", c1.objects()[a], c0.objects()[b], d.mor_name(phi)))
        .collect();
    // Full morphism list: identities first, then the rest by (source, target, f1, f0).
    let mut pairs: Vec<(usize, usize)> = triples.iter().map(|&(a, b, _)| (c1.id(a), c0.id(b))).collect();
    let mut ends: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    let mut arrows = Vec::new();
    for (s, &(a, b, phi)) in triples.iter().enumerate() {
        for (t, &(a2, b2, psi)) in triples.iter().enumerate() {
            for &g1 in c1.hom(a, a2) {
                for &g0 in c0.hom(b, b2) {
                    if s == t && g1 == c1.id(a) && g0 == c0.id(b) {
                        continue;
                    }
                    if d.compose(f0.mor(g0), phi) == d.compose(psi, f1.mor(g1)) {
                        arrows.push((format!("({},{}):{}>{}", c1.mor_name(g1), c0.mor_name(g0), s, t), s, t));
                        pairs.push((g1, g0));
                        ends.push((s, t));
                    }
                }
            }
        }
    }
    let index: HashMap<(usize, usize, usize, usize), usize> =
        pairs.iter().zip(&ends).enumerate().map(|(i, (&(g1, g0), &(s, t)))| ((s, t, g1, g0), i)).collect();
    let mut composites = Vec::new();
    for f in 0..pairs.len() {
        let (s, t) = ends[f];
        for g in 0..pairs.len() {
            if ends[g].0 != t {
                continue;
            }
            let u = ends[g].1;
            let h1 = c1.compose(pairs[g].0, pairs[f].0).expect("composable");
            let h0 = c0.compose(pairs[g].1, pairs[f].1).expect("composable");
            let h = index[&(s, u, h1, h0)];
            composites.push((f, g, h));
        }
    }
    let name = format!("{}{}{}", f1.source.name, if iso { "≅" } else { "↓" }, f0.source.name);
    let category = Arc::new(FiniteCategory::build(name, names, arrows, &composites)?);
    let p1 = FinFunctor {
        source: category.clone(),
        target: f1.source.clone(),
        objects: triples.iter().map(|t| t.0).collect(),
        morphisms: pairs.iter().map(|p| p.0).collect(),
    };
    let p0 = FinFunctor {
        source: category.clone(),
        target: f0.source.clone(),
        objects: triples.iter().map(|t| t.1).collect(),
        morphisms: pairs.iter().map(|p| p.1).collect(),
    };
    let alpha = triples.iter().map(|t| t.2).collect();
    Ok(CommaCategory { category, triples, pairs, p1, p0, alpha, iso })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommaHypotheses {
    pub c1_regular: bool,
    pub c0_regular: bool,
    pub d_regular: bool,
    pub f1_regular: bool,
    pub f0_cartesian: bool,
}

impl CommaHypotheses {
    pub fn of(f1: &FinFunctor, f0: &FinFunctor) -> Self {
        CommaHypotheses {
            c1_regular: f1.source.is_regular(),
            c0_regular: f0.source.is_regular(),
            d_regular: f1.target.is_regular(),
            f1_regular: f1.is_regular(),
            f0_cartesian: f0.is_cartesian(),
        }
    }

    pub fn hold(&self) -> bool {
        self.c1_regular && self.c0_regular && self.d_regular && self.f1_regular && self.f0_cartesian
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    /// Whether the claim's hypotheses hold on this instance.
    pub applicable: bool,
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommaReport {
    pub hypotheses: CommaHypotheses,
    pub objects: usize,
    pub morphisms: usize,
    /// Terminal object and pullbacks computed componentwise.
    pub limits_componentwise: ClaimResult,
    /// Maps whose components are both covers are covers.
    pub covers_componentwise: ClaimResult,
    /// Lifts of functor pairs correspond to transformations.
    pub lifts_correspond: ClaimResult,
    /// Covers whose components are not both covers (converse experiment).
    pub converse_failures: Vec<String>,
}

impl CommaReport {
    /// No counterexample on an instance where the hypotheses hold.
    pub fn passed(&self) -> bool {
        let ok = |c: &ClaimResult| !c.applicable || c.passed();
        ok(&self.limits_componentwise) && ok(&self.covers_componentwise) && self.lifts_correspond.passed()
    }
}

pub fn verify_comma_claims(f1: &FinFunctor, f0: &FinFunctor) -> Result<CommaReport, CategoryError> {
    let hypotheses = CommaHypotheses::of(f1, f0);
    let k = comma(f1, f0)?;
    let c = &*k.category;
    let applicable = hypotheses.hold();
    Ok(CommaReport {
        objects: c.num_objects(),
        morphisms: c.num_morphisms(),
        limits_componentwise: if applicable { limits_claim(f1, f0, &k) } else { ClaimResult::default() },
        covers_componentwise: covers_claim(&k, applicable),
        lifts_correspond: lifts_claim(f1, f0, &k),
        converse_failures: converse(&k),
        hypotheses,
    })
}

fn limits_claim(f1: &FinFunctor, f0: &FinFunctor, k: &CommaCategory) -> ClaimResult {
    let (c, c1, c0, d) = (&*k.category, &*f1.source, &*f0.source, &*f1.target);
    let mut r = ClaimResult { applicable: true, ..Default::default() };
    r.checked += 1;
    let terminal = match (c1.terminal(), c0.terminal()) {
        (Some(t1), Some(t0)) => d.hom(f1.obj(t1), f0.obj(t0)).first().and_then(|&phi| k.object_of(t1, t0, phi)),
        _ => None,
    };
    match terminal {
        Some(t) if (0..c.num_objects()).all(|a| c.hom(a, t).len() == 1) => {}
        _ => r.counterexamples.push("componentwise terminal object is not terminal".into()),
    }
    for f in 0..c.num_morphisms() {
        for g in c.into(c.cod(f)) {
            r.checked += 1;
            let (x, y) = (c.dom(f), c.dom(g));
            let (Some(q1), Some(q0)) = (c1.pullback(k.pairs[f].0, k.pairs[g].0), c0.pullback(k.pairs[f].1, k.pairs[g].1))
            else {
                r.counterexamples.push(format!("component pullback missing for {}, {}", c.mor_name(f), c.mor_name(g)));
                continue;
            };
            let cone = d.hom(f1.obj(q1.apex), f0.obj(q0.apex)).iter().find_map(|&phi| {
                let p = k.object_of(q1.apex, q0.apex, phi)?;
                let l1 = k.morphism_of(p, x, q1.legs[0], q0.legs[0])?;
                let l2 = k.morphism_of(p, y, q1.legs[1], q0.legs[1])?;
                Some(Cone { apex: p, legs: vec![l1, l2] })
            });
            match cone {
                Some(cone) if c.is_pullback(f, g, &cone) => {}
                _ => r.counterexamples.push(format!("componentwise pullback of {}, {}", c.mor_name(f), c.mor_name(g))),
            }
        }
    }
    r
}

fn covers_claim(k: &CommaCategory, applicable: bool) -> ClaimResult {
    let (c, c1, c0) = (&*k.category, &*k.p1.target, &*k.p0.target);
    let mut r = ClaimResult { applicable, ..Default::default() };
    for m in 0..c.num_morphisms() {
        let (g1, g0) = k.pairs[m];
        if c1.is_cover(g1) && c0.is_cover(g0) {
            r.checked += 1;
            if !c.is_cover(m) {
                r.counterexamples.push(c.mor_name(m).to_string());
            }
        }
    }
    r
}

fn converse(k: &CommaCategory) -> Vec<String> {
    let (c, c1, c0) = (&*k.category, &*k.p1.target, &*k.p0.target);
    (0..c.num_morphisms())
        .filter(|&m| c.is_cover(m) && !(c1.is_cover(k.pairs[m].0) && c0.is_cover(k.pairs[m].1)))
        .map(|m| c.mor_name(m).to_string())
        .collect()
}

fn test_shapes() -> Vec<Arc<FiniteCategory>> {
    vec![
        Arc::new(FiniteCategory::from_preorder("1", &[vec![true]]).expect("point")),
        Arc::new(FiniteCategory::from_preorder("2", &[vec![true, true], vec![false, true]]).expect("arrow")),
    ]
}

/// Natural transformations `F1 G1 ⇒ F0 G0`, as component lists.
fn transformations(f1: &FinFunctor, f0: &FinFunctor, g1: &FinFunctor, g0: &FinFunctor) -> BTreeSet<Vec<usize>> {
    let x = &*g1.source;
    let d = &*f1.target;
    let mut out = BTreeSet::new();
    let mut comps = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        comps: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
        x: &FiniteCategory,
        d: &FiniteCategory,
        f1: &FinFunctor,
        f0: &FinFunctor,
        g1: &FinFunctor,
        g0: &FinFunctor,
    ) {
        if i == x.num_objects() {
            let natural = (0..x.num_morphisms()).all(|u| {
                let (a, b) = (x.dom(u), x.cod(u));
                d.compose(f0.mor(g0.mor(u)), comps[a]) == d.compose(comps[b], f1.mor(g1.mor(u)))
            });
            if natural {
                out.insert(comps.clone());
            }
            return;
        }
        for &gamma in d.hom(f1.obj(g1.obj(i)), f0.obj(g0.obj(i))) {
            comps.push(gamma);
            go(i + 1, comps, out, x, d, f1, f0, g1, g0);
            comps.pop();
        }
    }
    go(0, &mut comps, &mut out, x, d, f1, f0, g1, g0);
    out
}

fn lifts_claim(f1: &FinFunctor, f0: &FinFunctor, k: &CommaCategory) -> ClaimResult {
    let mut r = ClaimResult { applicable: true, ..Default::default() };
    for x in test_shapes() {
        // Lifts grouped by their projections, as α-component lists.
        let mut lifts: BTreeMap<[Vec<usize>; 4], Vec<Vec<usize>>> = BTreeMap::new();
        for g in all_functors(&x, &k.category) {
            let g1 = g.then(&k.p1).expect("composable");
            let g0 = g.then(&k.p0).expect("composable");
            let alpha_g: Vec<usize> = g.objects.iter().map(|&o| k.alpha[o]).collect();
            lifts.entry([g1.objects, g1.morphisms, g0.objects, g0.morphisms]).or_default().push(alpha_g);
        }
        for g1 in all_functors(&x, &f1.source) {
            for g0 in all_functors(&x, &f0.source) {
                r.checked += 1;
                let gammas = transformations(f1, f0, &g1, &g0);
                let key = [g1.objects.clone(), g1.morphisms.clone(), g0.objects.clone(), g0.morphisms.clone()];
                let mut found = lifts.get(&key).cloned().unwrap_or_default();
                let before = found.len();
                found.sort();
                found.dedup();
                let distinct = found.len() == before;
                if !distinct || found.into_iter().collect::<BTreeSet<_>>() != gammas {
                    r.counterexamples.push(format!("shape {}: G1 {:?}, G0 {:?}", x.name, g1.objects, g0.objects));
                }
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Arc<FiniteCategory> {
        let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        Arc::new(FiniteCategory::from_preorder(format!("{n}"), &leq).unwrap())
    }

    #[test]
    fn comma_of_terminal_is_terminal() {
        let one = chain(1);
        let id = FinFunctor::identity(one);
        let k = comma(&id, &id).unwrap();
        assert_eq!(k.category.num_objects(), 1);
        assert_eq!(k.category.num_morphisms(), 1);
    }

    #[test]
    fn object_count_is_number_of_triples() {
        let (c, d) = (chain(2), chain(2));
        for f1 in all_functors(&c, &d) {
            for f0 in all_functors(&c, &d) {
                let k = comma(&f1, &f0).unwrap();
                let mut triples = 0;
                for a in 0..2 {
                    for b in 0..2 {
                        triples += d.hom(f1.obj(a), f0.obj(b)).len();
                    }
                }
                assert_eq!(k.category.num_objects(), triples);
                for (o, &(_, _, phi)) in k.triples.iter().enumerate() {
                    assert_eq!(k.alpha[o], phi);
                }
            }
        }
    }

    #[test]
    fn iso_comma_contains_diagonal() {
        let c = chain(3);
        let id = FinFunctor::identity(c.clone());
        let k = iso_comma(&id, &id).unwrap();
        for a in 0..3 {
            assert!(k.object_of(a, a, c.id(a)).is_some());
        }
        assert_eq!(k.category.num_objects(), 3);
    }

    #[test]
    fn claims_on_identity_functors() {
        let c = chain(2);
        let id = FinFunctor::identity(c);
        let report = verify_comma_claims(&id, &id).unwrap();
        assert!(report.hypotheses.hold());
        assert!(report.passed());
        assert!(report.limits_componentwise.checked > 1);
        assert!(report.lifts_correspond.checked > 0);
    }
}

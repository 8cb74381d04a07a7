use std::sync::Arc;

use thiserror::Error;

use super::FiniteCategory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object map has {found} entries, source has {expected} objects")]
    ObjectArity { expected: usize, found: usize },
    #[error("morphism map has {found} entries, source has {expected} morphisms")]
    MorphismArity { expected: usize, found: usize },
    #[error("image of `{0}` has the wrong domain or codomain")]
    Typing(String),
    #[error("identity of object {0} is not preserved")]
    Identity(usize),
    #[error("composite {g} ∘ {f} is not preserved")]
    Composition { g: String, f: String },
    #[error("functors do not compose: target and source differ")]
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    pub source: Arc<FiniteCategory>,
    pub target: Arc<FiniteCategory>,
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

impl FinFunctor {
    pub fn new(
        source: Arc<FiniteCategory>,
        target: Arc<FiniteCategory>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self, FunctorError> {
        if objects.len() != source.num_objects() {
            return Err(FunctorError::ObjectArity { expected: source.num_objects(), found: objects.len() });
        }
        if morphisms.len() != source.num_morphisms() {
            return Err(FunctorError::MorphismArity { expected: source.num_morphisms(), found: morphisms.len() });
        }
        for (f, &img) in morphisms.iter().enumerate() {
            if img >= target.num_morphisms()
                || target.dom(img) != objects[source.dom(f)]
                || target.cod(img) != objects[source.cod(f)]
            {
                return Err(FunctorError::Typing(source.mor_name(f).to_string()));
            }
        }
        for a in 0..source.num_objects() {
            if morphisms[source.id(a)] != target.id(objects[a]) {
                return Err(FunctorError::Identity(a));
            }
        }
        for f in 0..source.num_morphisms() {
            for g in source.out_of(source.cod(f)) {
                let gf = source.compose(g, f).expect("composable");
                if target.compose(morphisms[g], morphisms[f]) != Some(morphisms[gf]) {
                    return Err(FunctorError::Composition {
                        g: source.mor_name(g).into(),
                        f: source.mor_name(f).into(),
                    });
                }
            }
        }
        Ok(FinFunctor { source, target, objects, morphisms })
    }

    pub fn identity(c: Arc<FiniteCategory>) -> Self {
        FinFunctor {
            objects: (0..c.num_objects()).collect(),
            morphisms: (0..c.num_morphisms()).collect(),
            source: c.clone(),
            target: c,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor, FunctorError> {
        if *self.target != *other.source {
            return Err(FunctorError::Mismatch);
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            objects: self.objects.iter().map(|&a| other.objects[a]).collect(),
            morphisms: self.morphisms.iter().map(|&f| other.morphisms[f]).collect(),
        })
    }

    pub fn obj(&self, a: usize) -> usize {
        self.objects[a]
    }

    pub fn mor(&self, f: usize) -> usize {
        self.morphisms[f]
    }

    /// Sends terminal objects to terminal objects (vacuous without one).
    pub fn preserves_terminal(&self) -> bool {
        match self.source.terminal() {
            Some(t) => (0..self.target.num_objects()).all(|a| self.target.hom(a, self.obj(t)).len() == 1),
            None => true,
        }
    }

    /// Images of all existing pullback squares are pullback squares.
    pub fn preserves_pullbacks(&self) -> bool {
        let (s, t) = (&*self.source, &*self.target);
        (0..s.num_morphisms()).all(|f| {
            s.into(s.cod(f)).all(|g| match s.pullback(f, g) {
                Some(p) => {
                    let image = super::Cone { apex: self.obj(p.apex), legs: p.legs.iter().map(|&l| self.mor(l)).collect() };
                    t.is_pullback(self.mor(f), self.mor(g), &image)
                }
                None => true,
            })
        })
    }

    pub fn preserves_covers(&self) -> bool {
        (0..self.source.num_morphisms())
            .filter(|&e| self.source.is_cover(e))
            .all(|e| self.target.is_cover(self.mor(e)))
    }

    pub fn is_cartesian(&self) -> bool {
        self.preserves_terminal() && self.preserves_pullbacks()
    }

    pub fn is_regular(&self) -> bool {
        self.is_cartesian() && self.preserves_covers()
    }
}

/// Every functor `c → d`, in lexicographic order of object then morphism
/// assignments.
pub fn all_functors(c: &Arc<FiniteCategory>, d: &Arc<FiniteCategory>) -> Vec<FinFunctor> {
    let mut out = Vec::new();
    let n = c.num_objects();
    let mut objs = vec![0; n];
    fn objects(
        i: usize,
        objs: &mut Vec<usize>,
        c: &Arc<FiniteCategory>,
        d: &Arc<FiniteCategory>,
        out: &mut Vec<FinFunctor>,
    ) {
        if i == objs.len() {
            let mut mors: Vec<usize> = (0..c.num_objects()).map(|a| d.id(objs[a])).collect();
            morphisms(c.num_objects(), objs, &mut mors, c, d, out);
            return;
        }
        for x in 0..d.num_objects() {
            objs[i] = x;
            objects(i + 1, objs, c, d, out);
        }
    }
    fn morphisms(
        f: usize,
        objs: &[usize],
        mors: &mut Vec<usize>,
        c: &Arc<FiniteCategory>,
        d: &Arc<FiniteCategory>,
        out: &mut Vec<FinFunctor>,
    ) {
        if f == c.num_morphisms() {
            out.push(FinFunctor { source: c.clone(), target: d.clone(), objects: objs.to_vec(), morphisms: mors.clone() });
            return;
        }
        for &img in d.hom(objs[c.dom(f)], objs[c.cod(f)]) {
            mors.push(img);
            // Check composites whose factors and result are all assigned.
            let ok = (0..=f).all(|g| {
                (0..=f).all(|h| match c.compose(h, g) {
                    Some(k) if k <= f => d.compose(mors[h], mors[g]) == Some(mors[k]),
                    _ => true,
                })
            });
            if ok {
                morphisms(f + 1, objs, mors, c, d, out);
            }
            mors.pop();
        }
    }
    objects(0, &mut objs, c, d, &mut out);
    out
}

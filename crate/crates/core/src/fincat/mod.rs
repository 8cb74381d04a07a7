//! Explicit finite categories and brute-force categorical structure.
//!
//! Morphisms are numbered so that the first `objects.len()` of them are the
//! identities, in object order. Composition is stored as a dense table
//! indexed by `(g, f)` for `g ∘ f`.

mod comma;
mod corpus;
mod functor;
mod props;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use comma::{comma, iso_comma, verify_comma_claims, ClaimResult, CommaCategory, CommaHypotheses, CommaReport};
pub use corpus::{
    fixtures, posets_up_to, run_corpus, Claim, ClaimOutcome, Corpus, CorpusInstance, CorpusReport,
};
pub use functor::{all_functors, FinFunctor, FunctorError};
pub use props::{Cone, ProjectivityReport, SubobjectLattice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("composite {g} ∘ {f} is not composable")]
    NotComposable { g: String, f: String },
    #[error("composite {g} ∘ {f} = {h} has the wrong type")]
    IllTyped { g: String, f: String, h: String },
    #[error("composite {g} ∘ {f} given twice")]
    Conflict { g: String, f: String },
    #[error("composite {g} ∘ {f} is missing")]
    Missing { g: String, f: String },
    #[error("associativity fails: {h} ∘ ({g} ∘ {f}) ≠ ({h} ∘ {g}) ∘ {f}")]
    Associativity { f: String, g: String, h: String },
    #[error("malformed category JSON: {0}")]
    Json(String),
}

/// A finite category with its composition table.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    pub name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    comp: Vec<Option<usize>>,
    hom: Vec<Vec<usize>>,
    chosen: OnceLock<props::ChosenLimits>,
}

impl PartialEq for FiniteCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.morphisms == other.morphisms && self.comp == other.comp
    }
}

impl Eq for FiniteCategory {}

/// Interchange format: identities are implicit and named `1_<object>`;
/// `comp` lists every composite `[f, g, h]` meaning `g ∘ f = h` of two
/// non-identity morphisms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    #[serde(default)]
    pub comp: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

impl FiniteCategory {
    /// Builds a category from non-identity arrows `(name, dom, cod)` and the
    /// composites `(f, g, h)` meaning `g ∘ f = h`, all given by index into
    /// `arrows`. Category laws are checked.
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        composites: &[(usize, usize, usize)],
    ) -> Result<Self, CategoryError> {
        let n = objects.len();
        let shifted: Vec<_> = composites.iter().map(|&(f, g, h)| (f + n, g + n, h + n)).collect();
        Self::build(name.into(), objects, arrows, &shifted)
    }

    /// As [`FiniteCategory::new`], with composites indexed over all
    /// morphisms (identities first), so a composite may be an identity.
    fn build(
        name: String,
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        composites: &[(usize, usize, usize)],
    ) -> Result<Self, CategoryError> {
        let n = objects.len();
        let mut seen = std::collections::HashSet::new();
        for o in &objects {
            if !seen.insert(o.clone()) {
                return Err(CategoryError::Duplicate(o.clone()));
            }
        }
        let mut morphisms: Vec<Morphism> =
            objects.iter().enumerate().map(|(i, o)| Morphism { name: format!("1_{o}"), dom: i, cod: i }).collect();
        for (a, d, c) in arrows {
            if d >= n || c >= n {
                return Err(CategoryError::UnknownObject(format!("{}", d.max(c))));
            }
            if !seen.insert(a.clone()) {
                return Err(CategoryError::Duplicate(a));
            }
            morphisms.push(Morphism { name: a, dom: d, cod: c });
        }
        let m = morphisms.len();
        let name_of = |i: usize| morphisms[i].name.clone();
        let mut comp = vec![None; m * m];
        for f in 0..m {
            let (d, c) = (morphisms[f].dom, morphisms[f].cod);
            comp[c * m + f] = Some(f);
            comp[f * m + d] = Some(f);
        }
        for &(f, g, h) in composites {
            if let Some(&bad) = [f, g, h].iter().find(|&&x| x >= m) {
                return Err(CategoryError::UnknownMorphism(bad.to_string()));
            }
            if morphisms[f].cod != morphisms[g].dom {
                return Err(CategoryError::NotComposable { g: name_of(g), f: name_of(f) });
            }
            if morphisms[h].dom != morphisms[f].dom || morphisms[h].cod != morphisms[g].cod {
                return Err(CategoryError::IllTyped { g: name_of(g), f: name_of(f), h: name_of(h) });
            }
            match comp[g * m + f] {
                Some(prev) if prev != h => return Err(CategoryError::Conflict { g: name_of(g), f: name_of(f) }),
                _ => comp[g * m + f] = Some(h),
            }
        }
        for f in 0..m {
            for g in 0..m {
                if morphisms[f].cod == morphisms[g].dom && comp[g * m + f].is_none() {
                    return Err(CategoryError::Missing { g: name_of(g), f: name_of(f) });
                }
            }
        }
        let mut hom = vec![Vec::new(); n * n];
        for (i, mo) in morphisms.iter().enumerate() {
            hom[mo.dom * n + mo.cod].push(i);
        }
        let cat = FiniteCategory { name, objects, morphisms, comp, hom, chosen: OnceLock::new() };
        cat.check_associativity()?;
        Ok(cat)
    }

    fn check_associativity(&self) -> Result<(), CategoryError> {
        let m = self.morphisms.len();
        for f in 0..m {
            for g in self.out_of(self.cod(f)) {
                let gf = self.compose(g, f).expect("composable");
                for h in self.out_of(self.cod(g)) {
                    let hg = self.compose(h, g).expect("composable");
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(CategoryError::Associativity {
                            f: self.morphisms[f].name.clone(),
                            g: self.morphisms[g].name.clone(),
                            h: self.morphisms[h].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The category of a preorder on `0..n`; `leq[i][j]` means `i ≤ j`.
    pub fn from_preorder(name: impl Into<String>, leq: &[Vec<bool>]) -> Result<Self, CategoryError> {
        let n = leq.len();
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for i in 0..n {
            index.insert((i, i), i);
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] {
                    index.insert((i, j), n + arrows.len());
                    arrows.push((format!("{i}<{j}"), i, j));
                }
            }
        }
        let mut composites = Vec::new();
        for (&(i, j), &f) in &index {
            for k in 0..n {
                if let Some(&g) = index.get(&(j, k)) {
                    let h = *index.get(&(i, k)).ok_or_else(|| CategoryError::Missing {
                        g: format!("{j}<{k}"),
                        f: format!("{i}<{j}"),
                    })?;
                    composites.push((f, g, h));
                }
            }
        }
        composites.sort_unstable();
        Self::build(name.into(), objects, arrows, &composites)
    }

    pub fn from_json(json: &CategoryJson) -> Result<Self, CategoryError> {
        let obj: BTreeMap<&str, usize> = json.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let get_obj = |s: &str| obj.get(s).copied().ok_or_else(|| CategoryError::UnknownObject(s.into()));
        let mut arrows = Vec::new();
        for m in &json.morphisms {
            arrows.push((m.id.clone(), get_obj(&m.dom)?, get_obj(&m.cod)?));
        }
        let mut names: BTreeMap<String, usize> = BTreeMap::new();
        for (i, o) in json.objects.iter().enumerate() {
            names.insert(format!("1_{o}"), i);
        }
        for (i, (a, _, _)) in arrows.iter().enumerate() {
            names.insert(a.clone(), i + json.objects.len());
        }
        let get = |s: &str| names.get(s).copied().ok_or_else(|| CategoryError::UnknownMorphism(s.into()));
        let composites = json
            .comp
            .iter()
            .map(|[f, g, h]| Ok((get(f)?, get(g)?, get(h)?)))
            .collect::<Result<Vec<_>, CategoryError>>()?;
        Self::build(json.name.clone(), json.objects.clone(), arrows, &composites)
    }

    pub fn parse_json(text: &str) -> Result<Self, CategoryError> {
        let json: CategoryJson = serde_json::from_str(text).map_err(|e| CategoryError::Json(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> CategoryJson {
        let n = self.num_objects();
        let m = self.num_morphisms();
        let mut comp = Vec::new();
        for f in n..m {
            for g in n..m {
                if let Some(h) = self.compose(g, f) {
                    comp.push([self.mor_name(f).into(), self.mor_name(g).into(), self.mor_name(h).into()]);
                }
            }
        }
        CategoryJson {
            name: self.name.clone(),
            objects: self.objects.clone(),
            morphisms: self.morphisms[n..]
                .iter()
                .map(|mo| MorphismJson {
                    id: mo.name.clone(),
                    dom: self.objects[mo.dom].clone(),
                    cod: self.objects[mo.cod].clone(),
                })
                .collect(),
            comp,
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn mor_name(&self, f: usize) -> &str {
        &self.morphisms[f].name
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn id(&self, a: usize) -> usize {
        a
    }

    pub fn is_identity(&self, f: usize) -> bool {
        f < self.objects.len()
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.morphisms.len() + f]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.hom[a * self.objects.len() + b]
    }

    /// Morphisms with domain `a`, in index order.
    pub fn out_of(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].dom == a)
    }

    /// Morphisms with codomain `b`, in index order.
    pub fn into(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].cod == b)
    }

    /// True when every hom-set has at most one element.
    pub fn is_preorder(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }
}

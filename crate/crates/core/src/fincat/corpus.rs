//! Exhaustive verification corpus: every poset with at most four elements
//! up to isomorphism, plus fixed non-poset fixtures.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::comma::comma;
use super::functor::{all_functors, FinFunctor};
use super::{CategoryError, CategoryJson, FiniteCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// Covers are exactly the extremal epis, given finite limits.
    CoverIsExtremalEpi,
    /// Mono iff both kernel-pair projections are isos, where kernel pairs exist.
    MonoByKernelPair,
    /// A cover that is mono is an iso.
    CoverMonoIsIso,
    /// Any two image factorisations are related by a unique-up-to-search iso.
    ImagesAgree,
    /// Projective iff every cover into it splits, in regular categories.
    ProjectiveIffCoversSplit,
    /// In `F ↓ id` and `id ↓ F`, maps with both components covers are covers.
    CommaComponentwiseCovers,
}

impl Claim {
    pub const ALL: [Claim; 6] = [
        Claim::CoverIsExtremalEpi,
        Claim::MonoByKernelPair,
        Claim::CoverMonoIsIso,
        Claim::ImagesAgree,
        Claim::ProjectiveIffCoversSplit,
        Claim::CommaComponentwiseCovers,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimOutcome {
    pub claim: Claim,
    pub instance: String,
    pub applicable: bool,
    pub checked: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub id: String,
    pub category: Result<Arc<FiniteCategory>, CategoryError>,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub instances: Vec<CorpusInstance>,
    /// Also build comma categories from functors between instances.
    pub commas: bool,
}

impl Corpus {
    /// Posets with at most four elements and the fixtures.
    pub fn standard() -> Self {
        let mut instances: Vec<CorpusInstance> = posets_up_to(4)
            .into_iter()
            .map(|c| CorpusInstance { id: c.name.clone(), category: Ok(Arc::new(c)) })
            .collect();
        instances.extend(fixtures().into_iter().map(|c| CorpusInstance { id: c.name.clone(), category: Ok(Arc::new(c)) }));
        Corpus { instances, commas: true }
    }

    /// Instances from JSON category descriptions; construction failures are
    /// kept and surfaced in the report.
    pub fn from_json(items: &[CategoryJson]) -> Self {
        let instances = items
            .iter()
            .enumerate()
            .map(|(i, j)| CorpusInstance {
                id: if j.name.is_empty() { format!("instance{i}") } else { j.name.clone() },
                category: FiniteCategory::from_json(j).map(Arc::new),
            })
            .collect();
        Corpus { instances, commas: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub instances: usize,
    pub commas: usize,
    pub outcomes: Vec<ClaimOutcome>,
    pub errors: Vec<(String, String)>,
    /// Comma covers with a component that is not a cover.
    pub converse_checked: usize,
    pub converse_failures: Vec<String>,
}

impl CorpusReport {
    /// Counterexamples on instances where the claim applies.
    pub fn counterexamples(&self, claim: Claim) -> usize {
        self.outcomes.iter().filter(|o| o.claim == claim && o.applicable && !o.passed).count()
    }

    pub fn applicable(&self, claim: Claim) -> usize {
        self.outcomes.iter().filter(|o| o.claim == claim && o.applicable).count()
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.outcomes.iter().all(|o| !o.applicable || o.passed)
    }
}

/// All partial orders on `n ≤ 4` points up to isomorphism (1, 1, 2, 5, 16),
/// named `poset{n}_{k}`.
pub fn posets_up_to(max: usize) -> Vec<FiniteCategory> {
    let mut out = Vec::new();
    for n in 0..=max {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let mut leq = vec![vec![false; n]; n];
            for i in 0..n {
                leq[i][i] = true;
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                leq[i][j] = mask & (1 << b) != 0;
            }
            let antisymmetric = pairs.iter().all(|&(i, j)| !(leq[i][j] && leq[j][i]));
            let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(leq[i][j] && leq[j][k]) || leq[i][k])));
            if !antisymmetric || !transitive {
                continue;
            }
            let code = |p: &[usize]| -> u32 {
                pairs.iter().enumerate().filter(|(_, &(i, j))| leq[p[i]][p[j]]).map(|(b, _)| 1u32 << b).sum()
            };
            let canon = perms.iter().map(|p| code(p)).min().unwrap_or(0);
            if seen.insert(canon) {
                let mut c = vec![vec![false; n]; n];
                for i in 0..n {
                    c[i][i] = true;
                }
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    c[i][j] = canon & (1 << b) != 0;
                }
                out.push((n, canon, c));
            }
        }
    }
    out.sort_by_key(|(n, canon, _)| (*n, *canon));
    let mut counts = vec![0; max + 1];
    out.into_iter()
        .map(|(n, _, leq)| {
            let k = counts[n];
            counts[n] += 1;
            FiniteCategory::from_preorder(format!("poset{n}_{k}"), &leq).expect("posets are categories")
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Non-poset finite categories.
pub fn fixtures() -> Vec<FiniteCategory> {
    let parse = |name: &str, text: &str| {
        let mut c = FiniteCategory::parse_json(text).expect("fixture");
        c.name = name.to_string();
        c
    };
    vec![
        parse("idempotent", r#"{"objects":["*"],"morphisms":[{"id":"e","dom":"*","cod":"*"}],"comp":[["e","e","e"]]}"#),
        parse("z2", r#"{"objects":["*"],"morphisms":[{"id":"s","dom":"*","cod":"*"}],"comp":[["s","s","1_*"]]}"#),
        parse(
            "parallel",
            r#"{"objects":["A","B"],"morphisms":[{"id":"f","dom":"A","cod":"B"},{"id":"g","dom":"A","cod":"B"}]}"#,
        ),
        parse(
            "span",
            r#"{"objects":["C","A","B"],"morphisms":[{"id":"p","dom":"C","cod":"A"},{"id":"q","dom":"C","cod":"B"}]}"#,
        ),
        parse(
            "iso2",
            r#"{"objects":["A","B"],"morphisms":[{"id":"u","dom":"A","cod":"B"},{"id":"v","dom":"B","cod":"A"}],
                "comp":[["u","v","1_A"],["v","u","1_B"]]}"#,
        ),
        parse(
            "split_idempotent",
            r#"{"objects":["A","B"],"morphisms":[{"id":"r","dom":"A","cod":"B"},{"id":"s","dom":"B","cod":"A"},{"id":"e","dom":"A","cod":"A"}],
                "comp":[["s","r","1_B"],["r","s","e"],["e","e","e"],["e","r","r"],["s","e","s"]]}"#,
        ),
    ]
}

fn outcome(claim: Claim, instance: &str, applicable: bool, checked: usize, bad: Option<String>) -> ClaimOutcome {
    ClaimOutcome { claim, instance: instance.to_string(), applicable, checked, passed: bad.is_none(), counterexample: bad }
}

fn instance_claims(id: &str, c: &FiniteCategory) -> Vec<ClaimOutcome> {
    let m = c.num_morphisms();
    let name = |f: usize| c.mor_name(f).to_string();
    let limits = c.has_finite_limits();
    let regular = c.is_regular();
    let mut out = Vec::new();

    let bad = (0..m).find(|&f| c.is_cover(f) != c.is_extremal_epi(f)).map(name);
    out.push(outcome(Claim::CoverIsExtremalEpi, id, limits, m, bad));

    let kp: Vec<usize> = (0..m).filter(|&f| c.kernel_pair(f).is_some()).collect();
    let bad = kp.iter().copied().find(|&f| c.is_mono_by_kernel_pair(f) != Some(c.is_mono(f))).map(name);
    out.push(outcome(Claim::MonoByKernelPair, id, true, kp.len(), bad));

    let bad = (0..m).find(|&f| c.is_cover(f) && c.is_mono(f) && !c.is_iso(f)).map(name);
    out.push(outcome(Claim::CoverMonoIsIso, id, true, m, bad));

    let bad = (0..m)
        .find(|&f| {
            let fs = c.image_factorisations(f);
            fs.iter().any(|&a| fs.iter().any(|&b| c.factorisation_iso(a, b).is_none()))
        })
        .map(name);
    out.push(outcome(Claim::ImagesAgree, id, true, m, bad));

    let p = c.check_projectivity_equiv();
    let bad = p.mismatches.first().map(|&o| c.objects()[o].clone());
    out.push(outcome(Claim::ProjectiveIffCoversSplit, id, regular, c.num_objects(), bad));
    out
}

struct CommaOutcome {
    outcome: ClaimOutcome,
    converse_checked: usize,
    converse_failures: Vec<String>,
}

fn comma_claim(label: String, f1: &FinFunctor, f0: &FinFunctor, applicable: bool) -> Result<CommaOutcome, (String, String)> {
    let k = comma(f1, f0).map_err(|e| (label.clone(), e.to_string()))?;
    let (c, c1, c0) = (&*k.category, &*f1.source, &*f0.source);
    let mut checked = 0;
    let mut bad = None;
    let mut converse_checked = 0;
    let mut converse_failures = Vec::new();
    for m in 0..c.num_morphisms() {
        let (g1, g0) = k.pairs[m];
        let both = c1.is_cover(g1) && c0.is_cover(g0);
        if both {
            checked += 1;
            if bad.is_none() && !c.is_cover(m) {
                bad = Some(c.mor_name(m).to_string());
            }
        }
        if c.is_cover(m) {
            converse_checked += 1;
            if !both {
                converse_failures.push(format!("{label}: {}", c.mor_name(m)));
            }
        }
    }
    Ok(CommaOutcome {
        outcome: outcome(Claim::CommaComponentwiseCovers, &label, applicable, checked, bad),
        converse_checked,
        converse_failures,
    })
}

pub fn run_corpus(corpus: &Corpus) -> CorpusReport {
    let mut report = CorpusReport { instances: corpus.instances.len(), ..Default::default() };
    let built: Vec<(&str, Arc<FiniteCategory>)> = corpus
        .instances
        .iter()
        .filter_map(|i| match &i.category {
            Ok(c) => Some((i.id.as_str(), c.clone())),
            Err(e) => {
                report.errors.push((i.id.clone(), e.to_string()));
                None
            }
        })
        .collect();
    let per: Vec<Vec<ClaimOutcome>> = built.par_iter().map(|(id, c)| instance_claims(id, c)).collect();
    report.outcomes = per.into_iter().flatten().collect();
    if !corpus.commas {
        return report;
    }
    let regular: Vec<bool> = built.par_iter().map(|(_, c)| c.is_regular()).collect();
    let pairs: Vec<(usize, usize)> =
        (0..built.len()).flat_map(|i| (0..built.len()).map(move |j| (i, j))).collect();
    let results: Vec<Vec<Result<CommaOutcome, (String, String)>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ci, di) = (&built[i].1, &built[j].1);
            let id_d = FinFunctor::identity(di.clone());
            let mut out = Vec::new();
            for (n, f) in all_functors(ci, di).into_iter().enumerate() {
                let base = format!("{}->{}#{n}", built[i].0, built[j].0);
                let hyp = regular[i] && regular[j];
                out.push(comma_claim(format!("({base})/id"), &f, &id_d, hyp && f.is_regular()));
                out.push(comma_claim(format!("id/({base})"), &id_d, &f, hyp && f.is_cartesian()));
            }
            out
        })
        .collect();
    for r in results.into_iter().flatten() {
        match r {
            Ok(c) => {
                report.commas += 1;
                report.converse_checked += c.converse_checked;
                report.converse_failures.extend(c.converse_failures);
                report.outcomes.push(c.outcome);
            }
            Err(e) => report.errors.push(e),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        let ps = posets_up_to(4);
        let by_size: Vec<usize> = (0..=4).map(|n| ps.iter().filter(|c| c.num_objects() == n).count()).collect();
        assert_eq!(by_size, vec![1, 1, 2, 5, 16]);
        assert!(ps.iter().all(FiniteCategory::is_preorder));
    }

    #[test]
    fn fixtures_build() {
        let fx = fixtures();
        assert_eq!(fx.len(), 6);
        assert!(fx.iter().any(|c| !c.is_preorder()));
        let iso2 = fx.iter().find(|c| c.name == "iso2").unwrap();
        assert!(iso2.has_finite_limits() && iso2.is_regular());
    }
}

use std::sync::Arc;

use eatforge::fincat::{
    all_functors, comma, fixtures, posets_up_to, run_corpus, verify_comma_claims, CategoryJson, Claim, Corpus,
    FinFunctor, FiniteCategory,
};

fn chain(n: usize) -> Arc<FiniteCategory> {
    let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
    Arc::new(FiniteCategory::from_preorder(format!("chain{n}"), &leq).unwrap())
}

#[test]
fn standard_corpus_has_no_counterexamples() {
    let t = std::time::Instant::now();
    let report = run_corpus(&Corpus::standard());
    eprintln!(
        "corpus: {} instances, {} commas, converse {}/{}, {:?}",
        report.instances,
        report.commas,
        report.converse_failures.len(),
        report.converse_checked,
        t.elapsed()
    );
    assert_eq!(report.instances, 31);
    assert!(report.errors.is_empty());
    for claim in [
        Claim::CoverIsExtremalEpi,
        Claim::MonoByKernelPair,
        Claim::CoverMonoIsIso,
        Claim::ImagesAgree,
        Claim::ProjectiveIffCoversSplit,
        Claim::CommaComponentwiseCovers,
    ] {
        assert_eq!(report.counterexamples(claim), 0, "{claim:?}");
        assert!(report.applicable(claim) > 0, "{claim:?} never applied");
    }
    assert!(report.passed());
}

#[test]
fn every_finite_poset_object_is_projective() {
    for c in posets_up_to(4) {
        for p in 0..c.num_objects() {
            assert!(c.is_projective(p), "{} object {p}", c.name);
        }
    }
}

#[test]
fn cover_without_limits_need_not_be_extremal() {
    let idem = fixtures().into_iter().find(|c| c.name == "idempotent").unwrap();
    assert!(idem.is_cover(1) && !idem.is_extremal_epi(1));
    let report = run_corpus(&Corpus { instances: Corpus::standard().instances.into_iter().filter(|i| i.id == "idempotent").collect(), commas: false });
    let o = report.outcomes.iter().find(|o| o.claim == Claim::CoverIsExtremalEpi).unwrap();
    assert!(!o.applicable && !o.passed);
    assert!(report.passed());
}

#[test]
fn meet_semilattice_images_are_identity_covers() {
    for c in posets_up_to(4).into_iter().filter(|c| c.has_finite_limits()) {
        for f in 0..c.num_morphisms() {
            assert_eq!(c.image_factorisation(f), Some((c.id(c.dom(f)), f)));
        }
    }
}

#[test]
fn mono_definitions_agree_where_kernel_pairs_exist() {
    for c in posets_up_to(4).into_iter().chain(fixtures()) {
        for f in 0..c.num_morphisms() {
            if let Some(by_kp) = c.is_mono_by_kernel_pair(f) {
                assert_eq!(by_kp, c.is_mono(f), "{} {}", c.name, c.mor_name(f));
            }
        }
    }
}

#[test]
fn comma_claims_on_poset_maps() {
    let (a, b) = (chain(2), chain(3));
    let mut count = 0;
    for f1 in all_functors(&a, &b) {
        for f0 in all_functors(&a, &b) {
            let r = verify_comma_claims(&f1, &f0).unwrap();
            assert!(r.passed(), "{r:?}");
            count += 1;
        }
    }
    assert_eq!(count, 36);
}

#[test]
fn comma_projections_are_functors() {
    let (a, b) = (chain(2), chain(2));
    for f in all_functors(&a, &b) {
        let id = FinFunctor::identity(b.clone());
        let k = comma(&f, &id).unwrap();
        let p1 = FinFunctor::new(k.category.clone(), a.clone(), k.p1.objects.clone(), k.p1.morphisms.clone());
        let p0 = FinFunctor::new(k.category.clone(), b.clone(), k.p0.objects.clone(), k.p0.morphisms.clone());
        assert!(p1.is_ok() && p0.is_ok());
    }
}

#[test]
fn corrupted_instance_is_reported() {
    let good = chain(2).to_json();
    let bad: CategoryJson = serde_json::from_str(
        r#"{"name":"broken","objects":["*"],"morphisms":[{"id":"e","dom":"*","cod":"*"},{"id":"f","dom":"*","cod":"*"}],
            "comp":[["e","e","f"],["e","f","e"],["f","e","f"],["f","f","f"]]}"#,
    )
    .unwrap();
    let report = run_corpus(&Corpus::from_json(&[good, bad]));
    assert_eq!(report.errors.len(), 1);
    assert_eq!(report.errors[0].0, "broken");
    assert!(!report.passed());
    let empty = run_corpus(&Corpus::from_json(&[]));
    assert!(empty.outcomes.is_empty() && empty.passed());
}


use std::collections::BTreeMap;
use std::path::PathBuf;

use eatforge::chase::{free_model_of_chain, saturate, ChainConfig, GeneratorSet, Verdict};
use eatforge::std_theories::{category_theory, r_topos_chain, r_topos_theory, regular_category_theory};
use eatforge::theory::{check_inclusion, parse_term, parse_theory, print_theory, validate, Term, TheoryPresentation};

fn goldens() -> Vec<(&'static str, TheoryPresentation)> {
    let mut v = vec![("cat", category_theory()), ("regular", regular_category_theory())];
    for (r, name) in ["rtopos0", "rtopos1", "rtopos2", "rtopos3"].into_iter().enumerate() {
        v.push((name, r_topos_theory(r).theory));
    }
    v
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("theories").join(format!("{name}.eat"))
}

/// Set `EATFORGE_BLESS=1` to rewrite the shipped files.
#[test]
fn golden_files_match() {
    let bless = std::env::var_os("EATFORGE_BLESS").is_some();
    for (name, t) in goldens() {
        let text = print_theory(&t);
        let path = golden_path(name);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let shipped = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(shipped, text, "{name}.eat is stale");
        assert_eq!(parse_theory(&shipped).unwrap(), t);
        assert!(validate(&t).is_empty());
    }
}

fn term(s: &str) -> Term {
    parse_term(s, &[]).unwrap()
}

#[test]
fn free_category_on_a_point() {
    let s = saturate(&category_theory(), &GeneratorSet::new().with(&["A"], "Obj"), 6).unwrap();
    assert!(s.at_fixpoint());
    assert_eq!(s.class_count("Obj").unwrap(), 1);
    assert_eq!(s.class_count("Mor").unwrap(), 1);
}

#[test]
fn free_category_on_a_chain_graph() {
    let g = GeneratorSet::graph(&["A", "B", "C"], &[("f", "A", "B"), ("g", "B", "C")]);
    let s = saturate(&category_theory(), &g, 6).unwrap();
    assert!(s.at_fixpoint());
    assert_eq!(s.class_count("Mor").unwrap(), 6);
    let env = BTreeMap::new();
    assert!(s.eval_term(&env, &parse_term("comp(g, f)", &["f", "g"]).unwrap()).unwrap().is_some());
    assert_eq!(s.eval_term(&env, &parse_term("comp(f, g)", &["f", "g"]).unwrap()).unwrap(), None);
}

#[test]
fn regular_theory_terminal_and_identity_image() {
    let t = regular_category_theory();
    assert!(check_inclusion(&eatforge::theory::TheoryMorphism::inclusion(category_theory(), t.clone())));
    let s = saturate(&t, &GeneratorSet::new(), 3).unwrap();
    let env = BTreeMap::new();
    assert!(s.eval_term(&env, &term("one")).unwrap().is_some());
    assert_eq!(
        s.eq_check(&env, &term("comp(imm(id(one)), imc(id(one)))"), &term("id(one)")).unwrap(),
        Verdict::EqualAtStage
    );
    assert_eq!(s.eq_check(&env, &term("pb1(id(one), id(one))"), &term("id(one)")).unwrap(), Verdict::EqualAtStage);
}

#[test]
fn identity_of_terminal_is_recognised_as_mono() {
    let t = regular_category_theory();
    let s = saturate(&t, &GeneratorSet::new(), 4).unwrap();
    let env = BTreeMap::new();
    let id1 = s.eval_term(&env, &term("id(one)")).unwrap().unwrap();
    assert!(s.eval_term(&env, &term("inv(pb1(id(one), id(one)))")).unwrap().is_some());
    let intro = t.axioms.iter().position(|a| a.name == "mono_intro").unwrap();
    assert!(s.pending_matches().iter().any(|m| m.axiom == intro && m.subst == vec![id1]));
}

#[test]
fn rank_one_theory_has_one_nno_and_its_square() {
    let sig = r_topos_theory(1);
    let s = saturate(&sig.theory, &GeneratorSet::new(), 2).unwrap();
    let env = BTreeMap::new();
    let ids: Vec<_> = ["one", "nno", "prod(nno, nno)"]
        .iter()
        .map(|t| s.eval_term(&env, &term(t)).unwrap().expect("defined by round 2"))
        .collect();
    assert!(ids[0] != ids[1] && ids[1] != ids[2] && ids[0] != ids[2]);
    let objs = s.classes("Obj").unwrap();
    let pos: Vec<usize> = ids.iter().map(|x| objs.iter().position(|o| o == x).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "birth order one < nno < N×N: {pos:?}");
    for (n, &x) in objs.iter().enumerate() {
        assert_eq!(s.enumerate("Obj", n).unwrap(), x);
    }
    assert!(s.eval_term(&env, &term("emb_0(nno_0)")).unwrap() == Some(ids[1]));
}

#[test]
fn ranked_chain_is_compact_at_small_budget() {
    let chain = r_topos_chain(2);
    assert!(chain.inclusions.iter().all(check_inclusion));
    let report = free_model_of_chain(&chain, &GeneratorSet::new(), &ChainConfig::rounds(2)).unwrap();
    assert!(report.all_realized(), "{:?}", report.reducts.iter().map(|r| &r.unrealized).collect::<Vec<_>>());
    assert!(report.reducts[1].elements > 0);
}

//! Presentations of the theories of categories, regular categories and
//! ranked toposes, and the chain `T_0 ↪ T_1 ↪ ...` of ranked-topos theories.
//!
//! Conventions: `comp(g, f)` is `g ∘ f`; a morphism `f` is mono iff
//! `mono(f)` is defined (and then equals `f`), which holds exactly when the
//! first kernel-pair projection `pb1(f, f)` has an inverse. Covers are the
//! maps whose image inclusion `imm(f)` is invertible. Rank `i` objects are
//! the elements of sort `Obj_i`, embedded injectively into `Obj` by `emb_i`.

use crate::theory::{parse_theory, TheoryChain, TheoryPresentation};

const CAT_SORTS: &str = "sort Obj\nsort Mor\n";

const CAT_OPS: &str = "\
op dom : Mor -> Obj total
op cod : Mor -> Obj total
op id : Obj -> Mor total
op comp : Mor Mor -> Mor
";

const CAT_AXIOMS: &str = "\
axiom dom_total [f : Mor] => def(dom(f))
axiom cod_total [f : Mor] => def(cod(f))
axiom id_typed [a : Obj] => dom(id(a)) = a, cod(id(a)) = a
axiom comp_def [f g : Mor] cod(f) = dom(g) => def(comp(g, f))
axiom comp_typed [f g : Mor] def(comp(g, f))
    => cod(f) = dom(g), dom(comp(g, f)) = dom(f), cod(comp(g, f)) = cod(g)
axiom unit_left [f : Mor] => comp(id(cod(f)), f) = f
axiom unit_right [f : Mor] => comp(f, id(dom(f))) = f
axiom assoc [f g h : Mor] def(comp(g, f)), def(comp(h, g))
    => comp(h, comp(g, f)) = comp(comp(h, g), f)
";

const REG_OPS: &str = "\
op one : -> Obj total
op bang : Obj -> Mor total
op prod : Obj Obj -> Obj total
op pr1 : Obj Obj -> Mor total
op pr2 : Obj Obj -> Mor total
op pair : Mor Mor -> Mor
op eqz : Mor Mor -> Obj
op eqm : Mor Mor -> Mor
op eqlift : Mor Mor Mor -> Mor
op pb1 : Mor Mor -> Mor
op pb2 : Mor Mor -> Mor
op pblift : Mor Mor Mor Mor -> Mor
op inv : Mor -> Mor
op mono : Mor -> Mor
op im : Mor -> Obj total
op imm : Mor -> Mor total
op imc : Mor -> Mor total
op imlift : Mor Mor -> Mor
";

const REG_AXIOMS: &str = "\
axiom one_def [] => def(one)
axiom bang_typed [a : Obj] => dom(bang(a)) = a, cod(bang(a)) = one
axiom bang_unique [f : Mor] cod(f) = one => bang(dom(f)) = f
axiom prod_typed [a b : Obj]
    => dom(pr1(a, b)) = prod(a, b), cod(pr1(a, b)) = a, dom(pr2(a, b)) = prod(a, b), cod(pr2(a, b)) = b
axiom pair_def [f g : Mor] dom(f) = dom(g)
    => dom(pair(f, g)) = dom(f), cod(pair(f, g)) = prod(cod(f), cod(g))
axiom pair_typed [f g : Mor] def(pair(f, g)) => dom(f) = dom(g)
axiom pair_beta [f g : Mor] def(pair(f, g))
    => comp(pr1(cod(f), cod(g)), pair(f, g)) = f, comp(pr2(cod(f), cod(g)), pair(f, g)) = g
axiom pair_eta [h : Mor, a b : Obj] cod(h) = prod(a, b)
    => pair(comp(pr1(a, b), h), comp(pr2(a, b), h)) = h
axiom eqz_def [f g : Mor] dom(f) = dom(g), cod(f) = cod(g)
    => dom(eqm(f, g)) = eqz(f, g), cod(eqm(f, g)) = dom(f), comp(f, eqm(f, g)) = comp(g, eqm(f, g))
axiom eqz_typed [f g : Mor] def(eqz(f, g)) => def(eqm(f, g))
axiom eqm_typed [f g : Mor] def(eqm(f, g)) => dom(f) = dom(g), cod(f) = cod(g)
axiom eqlift_def [f g h : Mor] def(eqm(f, g)), comp(f, h) = comp(g, h)
    => dom(eqlift(f, g, h)) = dom(h), cod(eqlift(f, g, h)) = eqz(f, g), comp(eqm(f, g), eqlift(f, g, h)) = h
axiom eqlift_typed [f g h : Mor] def(eqlift(f, g, h)) => comp(f, h) = comp(g, h)
axiom eqlift_unique [f g k : Mor] cod(k) = eqz(f, g) => eqlift(f, g, comp(eqm(f, g), k)) = k
axiom pb_def [f g : Mor] cod(f) = cod(g)
    => cod(pb1(f, g)) = dom(f), cod(pb2(f, g)) = dom(g), dom(pb2(f, g)) = dom(pb1(f, g)), comp(f, pb1(f, g)) = comp(g, pb2(f, g))
axiom pb_unit [g : Mor] => pb1(id(cod(g)), g) = g, pb2(id(cod(g)), g) = id(dom(g))
axiom pb1_typed [f g : Mor] def(pb1(f, g)) => cod(f) = cod(g)
axiom pb2_typed [f g : Mor] def(pb2(f, g)) => cod(f) = cod(g)
axiom pblift_def [f g h k : Mor] cod(f) = cod(g), comp(f, h) = comp(g, k)
    => dom(pblift(f, g, h, k)) = dom(h), cod(pblift(f, g, h, k)) = dom(pb1(f, g)), comp(pb1(f, g), pblift(f, g, h, k)) = h, comp(pb2(f, g), pblift(f, g, h, k)) = k
axiom pblift_typed [f g h k : Mor] def(pblift(f, g, h, k)) => cod(f) = cod(g), comp(f, h) = comp(g, k)
axiom pblift_unique [f g m : Mor] cod(m) = dom(pb1(f, g))
    => pblift(f, g, comp(pb1(f, g), m), comp(pb2(f, g), m)) = m
axiom inv_laws [f : Mor] def(inv(f))
    => dom(inv(f)) = cod(f), cod(inv(f)) = dom(f), comp(inv(f), f) = id(dom(f)), comp(f, inv(f)) = id(cod(f))
axiom inv_def [f g : Mor] comp(g, f) = id(dom(f)), comp(f, g) = id(cod(f)) => inv(f) = g
axiom mono_intro [f : Mor] def(inv(pb1(f, f))) => mono(f) = f
axiom mono_elim [f : Mor] def(mono(f)) => mono(f) = f, def(inv(pb1(f, f)))
axiom im_fact [f : Mor]
    => dom(imc(f)) = dom(f), cod(imc(f)) = im(f), dom(imm(f)) = im(f), cod(imm(f)) = cod(f), comp(imm(f), imc(f)) = f, mono(imm(f)) = imm(f)
axiom im_least [m f k : Mor] def(mono(m)), comp(m, k) = f
    => dom(imlift(m, f)) = im(f), cod(imlift(m, f)) = dom(m), comp(m, imlift(m, f)) = imm(f)
axiom imlift_typed [m f : Mor] def(imlift(m, f)) => def(mono(m)), cod(m) = cod(f)
axiom cover_stable [e h : Mor] def(inv(imm(e))), cod(h) = cod(e) => def(inv(imm(pb2(e, h))))
";

const NNO_OPS: &str = "\
op nno : -> Obj total
op zero : -> Mor total
op succ : -> Mor total
op rec : Mor Mor -> Mor
";

const NNO_AXIOMS: &str = "\
axiom nno_def [] => dom(zero) = one, cod(zero) = nno, dom(succ) = nno, cod(succ) = nno
axiom rec_def [a s : Mor] dom(a) = one, cod(a) = dom(s), cod(s) = dom(s)
    => dom(rec(a, s)) = nno, cod(rec(a, s)) = dom(s), comp(rec(a, s), zero) = a, comp(rec(a, s), succ) = comp(s, rec(a, s))
axiom rec_typed [a s : Mor] def(rec(a, s)) => dom(a) = one, cod(a) = dom(s), cod(s) = dom(s)
axiom rec_unique [a s h : Mor] dom(h) = nno, comp(h, zero) = a, comp(h, succ) = comp(s, h) => rec(a, s) = h
";

fn rank_sorts(i: usize) -> String {
    format!("sort Obj_{i} rank {i}\n")
}

fn rank_ops(i: usize) -> String {
    format!(
        "\
op emb_{i} : Obj_{i} -> Obj total
op nno_{i} : -> Obj_{i} total
op one_{i} : -> Obj_{i} total
op one_iso_{i} : -> Mor total
op pb_{i} : Mor Mor -> Obj_{i}
op pb_iso_{i} : Mor Mor -> Mor
op im_{i} : Mor -> Obj_{i}
op im_iso_{i} : Mor -> Mor
"
    )
}

fn rank_axioms(i: usize) -> String {
    format!(
        "\
axiom emb_total_{i} [x : Obj_{i}] => def(emb_{i}(x))
axiom emb_injective_{i} [x y : Obj_{i}] emb_{i}(x) = emb_{i}(y) => x = y
axiom nno_rank_{i} [] => emb_{i}(nno_{i}) = nno
axiom one_rank_{i} [] => dom(one_iso_{i}) = emb_{i}(one_{i}), cod(one_iso_{i}) = one, def(inv(one_iso_{i}))
axiom pb_rank_{i} [x y z : Obj_{i}, f g : Mor] dom(f) = emb_{i}(x), dom(g) = emb_{i}(y), cod(f) = emb_{i}(z), cod(g) = emb_{i}(z)
    => dom(pb_iso_{i}(f, g)) = emb_{i}(pb_{i}(f, g)), cod(pb_iso_{i}(f, g)) = dom(pb1(f, g)), def(inv(pb_iso_{i}(f, g)))
axiom pb_rank_typed_{i} [f g : Mor] def(pb_iso_{i}(f, g)) => def(pb_{i}(f, g)), cod(f) = cod(g)
axiom im_rank_{i} [x y : Obj_{i}, f : Mor] dom(f) = emb_{i}(x), cod(f) = emb_{i}(y)
    => dom(im_iso_{i}(f)) = emb_{i}(im_{i}(f)), cod(im_iso_{i}(f)) = im(f), def(inv(im_iso_{i}(f)))
axiom im_rank_typed_{i} [f : Mor] def(im_iso_{i}(f)) => def(im_{i}(f))
"
    )
}

fn up_ops(i: usize) -> String {
    let j = i + 1;
    format!("op up_{i} : Obj_{i} -> Obj_{j} total\n")
}

fn up_axioms(i: usize) -> String {
    let j = i + 1;
    format!("axiom up_{i} [x : Obj_{i}] => emb_{j}(up_{i}(x)) = emb_{i}(x)\n")
}

fn power_ops(i: usize) -> String {
    let j = i + 1;
    format!(
        "\
op pow_{i} : Obj_{i} -> Obj_{j} total
op mem_{i} : Obj_{i} -> Mor total
op classify_{i} : Obj_{i} Mor -> Mor
op cls_iso_{i} : Obj_{i} Mor -> Mor
"
    )
}

fn power_axioms(i: usize) -> String {
    let j = i + 1;
    let pullback = |chi: &str| {
        format!("pb2(mem_{i}(x), pair(comp({chi}, pr1(y, emb_{i}(x))), pr2(y, emb_{i}(x))))")
    };
    let pb_cls = pullback(&format!("classify_{i}(x, m)"));
    let pb_h = pullback("h");
    format!(
        "\
axiom pow_def_{i} [x : Obj_{i}] => cod(mem_{i}(x)) = prod(emb_{j}(pow_{i}(x)), emb_{i}(x)), mono(mem_{i}(x)) = mem_{i}(x)
axiom classify_def_{i} [x : Obj_{i}, y : Obj, m : Mor] def(mono(m)), cod(m) = prod(y, emb_{i}(x))
    => dom(classify_{i}(x, m)) = y, cod(classify_{i}(x, m)) = emb_{j}(pow_{i}(x)), dom(cls_iso_{i}(x, m)) = dom(m), cod(cls_iso_{i}(x, m)) = dom({pb_cls}), comp({pb_cls}, cls_iso_{i}(x, m)) = m, def(inv(cls_iso_{i}(x, m)))
axiom classify_typed_{i} [x : Obj_{i}, m : Mor] def(classify_{i}(x, m)) => def(mono(m)), def(cls_iso_{i}(x, m))
axiom classify_unique_{i} [x : Obj_{i}, y : Obj, m h u : Mor] def(mono(m)), cod(m) = prod(y, emb_{i}(x)), dom(h) = y, cod(h) = emb_{j}(pow_{i}(x)), comp({pb_h}, u) = m, def(inv(u))
    => classify_{i}(x, m) = h
"
    )
}

#[derive(Default)]
struct Builder {
    name: String,
    sorts: String,
    ops: String,
    axioms: String,
}

impl Builder {
    fn add(&mut self, sorts: &str, ops: &str, axioms: &str) {
        self.sorts.push_str(sorts);
        self.ops.push_str(ops);
        self.axioms.push_str(axioms);
    }

    fn build(&self) -> TheoryPresentation {
        let text = format!("theory {}\n{}{}{}", self.name, self.sorts, self.ops, self.axioms);
        parse_theory(&text).expect("standard theory text parses")
    }
}

fn cat_builder() -> Builder {
    let mut b = Builder { name: "cat".into(), ..Default::default() };
    b.add(CAT_SORTS, CAT_OPS, CAT_AXIOMS);
    b
}

fn reg_builder() -> Builder {
    let mut b = cat_builder();
    b.name = "regular".into();
    b.add("", REG_OPS, REG_AXIOMS);
    b
}

/// The theory of categories: sorts `Obj`, `Mor`; `comp(g, f)` is defined
/// exactly when `cod(f) = dom(g)`.
pub fn category_theory() -> TheoryPresentation {
    cat_builder().build()
}

/// Categories with chosen terminal object, binary products, equalizers,
/// pullbacks, inverses, image factorisations, and pullback-stable covers.
pub fn regular_category_theory() -> TheoryPresentation {
    reg_builder().build()
}

/// The generated theory `T_r` together with the names of its rank structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedSignature {
    pub r: usize,
    pub theory: TheoryPresentation,
    pub rank_sorts: Vec<String>,
    pub power_ops: Vec<String>,
}

impl RankedSignature {
    pub fn power_families(&self) -> usize {
        self.power_ops.len()
    }
}

/// `T_r`: regular categories with a natural numbers object and ranks
/// `Obj_0 .. Obj_{r-1}`, each containing the NNO and closed under the
/// regular structure up to chosen isomorphism, with power objects of rank
/// `i` objects landing in rank `i + 1` for `i < r - 1`.
pub fn r_topos_theory(r: usize) -> RankedSignature {
    let mut b = reg_builder();
    b.name = format!("rtopos{r}");
    b.add("", NNO_OPS, NNO_AXIOMS);
    for i in 0..r {
        b.add(&rank_sorts(i), &rank_ops(i), &rank_axioms(i));
        if i + 1 < r {
            b.add("", &up_ops(i), &up_axioms(i));
            b.add("", &power_ops(i), &power_axioms(i));
        }
    }
    RankedSignature {
        r,
        theory: b.build(),
        rank_sorts: (0..r).map(|i| format!("Obj_{i}")).collect(),
        power_ops: (0..r.saturating_sub(1)).map(|i| format!("pow_{i}")).collect(),
    }
}

/// The chain `T_0 ↪ T_1 ↪ ... ↪ T_r_max` of name-preserving inclusions.
pub fn r_topos_chain(r_max: usize) -> TheoryChain {
    TheoryChain::linear((0..=r_max).map(|r| r_topos_theory(r).theory).collect())
        .expect("ranked theories extend each other")
}

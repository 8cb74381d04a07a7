use super::coding::{decode_list, encode_list, pair, unpair};
use super::expr::PrExpr;
use super::EffectiveError;

pub type Result<T> = std::result::Result<T, EffectiveError>;

fn check_arity(e: &PrExpr, max: usize) -> Result<()> {
    if !e.is_closed() {
        return Err(EffectiveError::Open);
    }
    let found = e.needed_arity();
    if found > max {
        return Err(EffectiveError::Arity { expected: max, found });
    }
    Ok(())
}

/// `min(1, e)`, written `1 ∸ (1 ∸ e)`.
fn clamp(e: PrExpr) -> PrExpr {
    PrExpr::monus(PrExpr::c(1), PrExpr::monus(PrExpr::c(1), e))
}

/// A unary expression with values in {0, 1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    expr: PrExpr,
}

impl Predicate {
    /// Wraps `e` (reading at most `Var(0)`) in the clamp `min(1, -)`.
    pub fn new(e: PrExpr) -> Result<Self> {
        check_arity(&e, 1)?;
        Ok(Predicate { expr: clamp(e) })
    }

    pub fn parse(text: &str, var: &str) -> Result<Self> {
        Self::new(PrExpr::parse(text, &[var])?)
    }

    pub fn always() -> Self {
        Predicate { expr: PrExpr::c(1) }
    }

    pub fn never() -> Self {
        Predicate { expr: PrExpr::c(0) }
    }

    pub fn expr(&self) -> &PrExpr {
        &self.expr
    }

    pub fn holds(&self, x: u64) -> Result<bool> {
        Ok(self.expr.eval(&[x])? == 1)
    }

    pub fn and(&self, other: &Predicate) -> Predicate {
        Predicate { expr: PrExpr::and(self.expr.clone(), other.expr.clone()) }
    }
}

/// The subset of ℕ a predicate classifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodedSubset {
    pub predicate: Predicate,
}

impl CodedSubset {
    pub fn new(predicate: Predicate) -> Self {
        CodedSubset { predicate }
    }

    pub fn naturals() -> Self {
        CodedSubset::new(Predicate::always())
    }

    /// `{0, ..., n - 1}`.
    pub fn below(n: u64) -> Self {
        CodedSubset::new(Predicate { expr: PrExpr::lt(PrExpr::Var(0), PrExpr::c(n)) })
    }

    pub fn contains(&self, x: u64) -> Result<bool> {
        self.predicate.holds(x)
    }

    /// Members below `bound`, ascending.
    pub fn elements_below(&self, bound: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for x in 0..bound {
            if self.contains(x)? {
                out.push(x);
            }
        }
        Ok(out)
    }
}

/// `x ↦ α(x) ∧ Σ_{y<x} α(y) = 0`: the least element of α's realisation, if any.
pub fn minimal_representatives(alpha: &Predicate) -> Predicate {
    let at_y = alpha.expr.substitute(&[PrExpr::Bound(0)]);
    let none_before = PrExpr::eq(PrExpr::sum("y", PrExpr::Var(0), at_y), PrExpr::c(0));
    Predicate { expr: PrExpr::and(alpha.expr.clone(), none_before) }
}

/// An indexed family of decidable subsets of ℕ.
pub trait Family {
    fn in_base(&self, b: u64) -> Result<bool>;
    /// Membership of `x` in the fiber over `b`; only meaningful for `b` in the base.
    fn in_fiber(&self, b: u64, x: u64) -> Result<bool>;

    /// Members of the fiber over `b` below `bound`.
    fn fiber_below(&self, b: u64, bound: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for x in 0..bound {
            if self.in_fiber(b, x)? {
                out.push(x);
            }
        }
        Ok(out)
    }
}

/// A family `φ(b, x)` over a coded base; the total space is
/// `{⟨b, x⟩ | b ∈ B, φ(b, x) = 1}` under Cantor pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMap {
    pub base: CodedSubset,
    fiber: PrExpr,
}

impl FamilyMap {
    /// `fiber` reads `Var(0)` as the base point and `Var(1)` as the element.
    pub fn new(base: CodedSubset, fiber: PrExpr) -> Result<Self> {
        check_arity(&fiber, 2)?;
        Ok(FamilyMap { base, fiber: clamp(fiber) })
    }

    pub fn fiber_expr(&self) -> &PrExpr {
        &self.fiber
    }

    /// Membership of a pair code in the total space.
    pub fn in_total(&self, z: u64) -> Result<bool> {
        let (b, x) = unpair(z);
        Ok(self.in_base(b)? && self.in_fiber(b, x)?)
    }

    pub fn total_point(&self, b: u64, x: u64) -> Result<u64> {
        Ok(pair(b, x)?)
    }
}

impl Family for FamilyMap {
    fn in_base(&self, b: u64) -> Result<bool> {
        self.base.contains(b)
    }

    fn in_fiber(&self, b: u64, x: u64) -> Result<bool> {
        Ok(self.fiber.eval(&[b, x])? == 1)
    }
}

/// The choice `b ↦ least x with φ(b, x) = 1`, searched below `bound`.
pub struct MinimalSection<'a, F: Family + ?Sized> {
    family: &'a F,
    bound: u64,
}

pub fn minimal_section<F: Family + ?Sized>(family: &F, bound: u64) -> MinimalSection<'_, F> {
    MinimalSection { family, bound }
}

impl<F: Family + ?Sized> MinimalSection<'_, F> {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn at(&self, b: u64) -> Result<u64> {
        if !self.family.in_base(b)? {
            return Err(EffectiveError::NotInBase(b));
        }
        for x in 0..self.bound {
            if self.family.in_fiber(b, x)? {
                return Ok(x);
            }
        }
        Err(EffectiveError::BoundExceeded { point: b, bound: self.bound })
    }
}

/// A total map `f` between coded subsets. `f` must send source into target;
/// this is checked pointwise by [`CodedMap::check_on`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodedMap {
    pub source: CodedSubset,
    pub target: CodedSubset,
    map: PrExpr,
}

impl CodedMap {
    pub fn new(source: CodedSubset, target: CodedSubset, map: PrExpr) -> Result<Self> {
        check_arity(&map, 1)?;
        Ok(CodedMap { source, target, map })
    }

    pub fn identity(on: CodedSubset) -> Self {
        CodedMap { source: on.clone(), target: on, map: PrExpr::Var(0) }
    }

    pub fn map_expr(&self) -> &PrExpr {
        &self.map
    }

    pub fn apply(&self, x: u64) -> Result<u64> {
        Ok(self.map.eval(&[x])?)
    }

    /// Members of the source below `bound` that `f` sends outside the target.
    pub fn check_on(&self, bound: u64) -> Result<Vec<u64>> {
        let mut bad = Vec::new();
        for x in self.source.elements_below(bound)? {
            if !self.target.contains(self.apply(x)?)? {
                bad.push(x);
            }
        }
        Ok(bad)
    }
}

/// `f = mono ∘ epi` through its image, with the epi split by the least preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitImage {
    /// `y ↦ μ_{x<bound}. x ∈ S ∧ f(x) = y`; equals `bound` off the image.
    pub section: PrExpr,
    /// `y ∈ T ∧ section(y) < bound`.
    pub image: CodedSubset,
    pub bound: u64,
    map: CodedMap,
}

pub fn split_image(f: &CodedMap, bound: u64) -> SplitImage {
    let src_x = f.source.predicate.expr().substitute(&[PrExpr::Bound(0)]);
    let fx = f.map.substitute(&[PrExpr::Bound(0)]);
    let body = PrExpr::and(src_x, PrExpr::eq(fx, PrExpr::Var(0)));
    let section = PrExpr::min("x", PrExpr::c(bound), body);
    let image = CodedSubset::new(
        f.target.predicate.and(&Predicate { expr: PrExpr::lt(section.clone(), PrExpr::c(bound)) }),
    );
    SplitImage { section, image, bound, map: f.clone() }
}

impl SplitImage {
    pub fn map(&self) -> &CodedMap {
        &self.map
    }

    /// The split epi `S → image`, which is `f` with its codomain restricted.
    pub fn epi(&self, x: u64) -> Result<u64> {
        self.map.apply(x)
    }

    /// The mono `image → T`: the inclusion.
    pub fn mono(&self, y: u64) -> Result<u64> {
        if self.image.contains(y)? {
            Ok(y)
        } else {
            Err(EffectiveError::BoundExceeded { point: y, bound: self.bound })
        }
    }

    /// The least preimage of `y`; bound-exceeded when none lies below the bound.
    pub fn section_at(&self, y: u64) -> Result<u64> {
        if !self.map.target.contains(y)? {
            return Err(EffectiveError::NotInBase(y));
        }
        let s = self.section.eval(&[y])?;
        if s < self.bound {
            Ok(s)
        } else {
            Err(EffectiveError::BoundExceeded { point: y, bound: self.bound })
        }
    }

    /// Image points below `upto` where `f(section(y)) ≠ y`.
    pub fn section_law_failures(&self, upto: u64) -> Result<Vec<u64>> {
        let mut bad = Vec::new();
        for y in self.image.elements_below(upto)? {
            let s = self.section_at(y)?;
            if !self.map.source.contains(s)? || self.map.apply(s)? != y {
                bad.push(y);
            }
        }
        Ok(bad)
    }
}

/// The factorisation `f = π₂ ∘ (id, f)` through `S × T`, with the graph
/// `{⟨x, ⟨x, f x⟩⟩}` as a pair-coded relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFactorisation {
    map: CodedMap,
}

pub fn graph_factorisation(f: &CodedMap) -> GraphFactorisation {
    GraphFactorisation { map: f.clone() }
}

impl GraphFactorisation {
    /// `(id, f)(x) = ⟨x, f x⟩`.
    pub fn graph_map(&self, x: u64) -> Result<u64> {
        Ok(pair(x, self.map.apply(x)?)?)
    }

    /// `π₂ ⟨x, y⟩ = y`.
    pub fn projection(&self, z: u64) -> u64 {
        unpair(z).1
    }

    pub fn graph_point(&self, x: u64) -> Result<u64> {
        Ok(pair(x, self.graph_map(x)?)?)
    }

    /// Membership of `z` in `{⟨x, ⟨x, f x⟩⟩ | x ∈ S}`.
    pub fn contains(&self, z: u64) -> Result<bool> {
        let (x, w) = unpair(z);
        let (x2, y) = unpair(w);
        Ok(x == x2 && self.map.source.contains(x)? && self.map.apply(x)? == y)
    }

    /// Source points below `bound` where the factorisation fails: the point
    /// is missing from the graph, `π₂ ∘ (id, f) ≠ f`, or `⟨x, f x⟩` does not
    /// lie over the diagonal of `T` under `f × id`.
    pub fn certify(&self, bound: u64) -> Result<Vec<u64>> {
        let mut bad = Vec::new();
        for x in self.map.source.elements_below(bound)? {
            let fx = self.map.apply(x)?;
            let g = self.graph_map(x)?;
            let (gx, gy) = unpair(g);
            let over_diagonal = gx == x && self.map.apply(gx)? == gy;
            if !self.contains(self.graph_point(x)?)? || self.projection(g) != fx || !over_diagonal {
                bad.push(x);
            }
        }
        Ok(bad)
    }
}

/// `List(q)`: base is the list codes over `q`'s base, and the fiber over
/// `[b1, ..., bk]` is the list codes `[x1, ..., xk]` with each `xi` over `bi`.
#[derive(Clone, Debug)]
pub struct ListFamily<F: Family> {
    pub component: F,
    pub max_len: u64,
}

pub fn list_family<F: Family>(q: F, max_len: u64) -> ListFamily<F> {
    ListFamily { component: q, max_len }
}

impl<F: Family> ListFamily<F> {
    pub fn decode(&self, code: u64) -> Result<Vec<u64>> {
        Ok(decode_list(code, self.max_len)?)
    }

    /// The fiber over a list code, with components searched below `bound`;
    /// exact when every component fiber lies below `bound`.
    pub fn fiber_within(&self, code: u64, bound: u64) -> Result<Vec<u64>> {
        let bs = self.decode(code)?;
        let mut parts = Vec::with_capacity(bs.len());
        for &b in &bs {
            if !self.component.in_base(b)? {
                return Err(EffectiveError::NotInBase(b));
            }
            parts.push(self.component.fiber_below(b, bound)?);
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; parts.len()];
        if parts.iter().any(Vec::is_empty) {
            return Ok(out);
        }
        loop {
            let xs: Vec<u64> = idx.iter().zip(&parts).map(|(&i, p)| p[i]).collect();
            out.push(encode_list(&xs)?);
            let mut k = parts.len();
            loop {
                if k == 0 {
                    out.sort_unstable();
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < parts[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// `[b] ++ [c]`: concatenation of base lists.
    pub fn concat(&self, l: u64, m: u64) -> Result<u64> {
        let mut xs = self.decode(l)?;
        xs.extend(self.decode(m)?);
        Ok(encode_list(&xs)?)
    }
}

impl<F: Family> Family for ListFamily<F> {
    fn in_base(&self, code: u64) -> Result<bool> {
        let bs = match decode_list(code, self.max_len) {
            Ok(bs) => bs,
            Err(_) => return Ok(false),
        };
        for b in bs {
            if !self.component.in_base(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn in_fiber(&self, code: u64, x: u64) -> Result<bool> {
        let bs = self.decode(code)?;
        let xs = match decode_list(x, self.max_len) {
            Ok(xs) => xs,
            Err(_) => return Ok(false),
        };
        if xs.len() != bs.len() {
            return Ok(false);
        }
        for (b, x) in bs.into_iter().zip(xs) {
            if !self.component.in_fiber(b, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(s: &str) -> Predicate {
        Predicate::parse(s, "x").unwrap()
    }

    fn family(base: &str, fiber: &str) -> FamilyMap {
        let base = CodedSubset::new(Predicate::parse(base, "b").unwrap());
        FamilyMap::new(base, PrExpr::parse(fiber, &["b", "x"]).unwrap()).unwrap()
    }

    #[test]
    fn predicates_are_clamped() {
        let p = pred("(+ x 5)");
        assert_eq!(p.expr().eval(&[3]).unwrap(), 1);
        assert_eq!(pred("0").expr().eval(&[3]).unwrap(), 0);
        assert!(Predicate::new(PrExpr::Var(1)).is_err());
    }

    #[test]
    fn minimal_representatives_examples() {
        let mod3 = Predicate::new(PrExpr::eq(PrExpr::modulo(PrExpr::Var(0), 3), PrExpr::c(0))).unwrap();
        let m = CodedSubset::new(minimal_representatives(&mod3));
        assert_eq!(m.elements_below(50).unwrap(), vec![0]);
        let never = CodedSubset::new(minimal_representatives(&Predicate::never()));
        assert!(never.elements_below(50).unwrap().is_empty());
        let ge7 = CodedSubset::new(minimal_representatives(&pred("(<= 7 x)")));
        assert_eq!(ge7.elements_below(50).unwrap(), vec![7]);
    }

    #[test]
    fn section_examples() {
        let f = family("1", "(<= (* 2 b) x)");
        let s = minimal_section(&f, 100);
        assert_eq!((0..3).map(|b| s.at(b).unwrap()).collect::<Vec<_>>(), vec![0, 2, 4]);

        let even = PrExpr::eq(PrExpr::modulo(PrExpr::Var(1), 2), PrExpr::c(0));
        let g = FamilyMap::new(CodedSubset::naturals(), PrExpr::and(PrExpr::lt(PrExpr::Var(0), PrExpr::Var(1)), even)).unwrap();
        let s = minimal_section(&g, 100);
        assert_eq!((1..4).map(|b| s.at(b).unwrap()).collect::<Vec<_>>(), vec![2, 4, 4]);

        let empty = family("1", "0");
        assert_eq!(minimal_section(&empty, 100).at(3), Err(EffectiveError::BoundExceeded { point: 3, bound: 100 }));
        let based = family("(< b 2)", "1");
        assert_eq!(minimal_section(&based, 100).at(5), Err(EffectiveError::NotInBase(5)));
    }

    #[test]
    fn split_image_examples() {
        let evens = CodedSubset::new(Predicate::new(PrExpr::eq(PrExpr::modulo(PrExpr::Var(0), 2), PrExpr::c(0))).unwrap());
        let id = split_image(&CodedMap::identity(evens.clone()), 64);
        assert_eq!(id.image.elements_below(64).unwrap(), evens.elements_below(64).unwrap());
        assert!(id.image.elements_below(64).unwrap().iter().all(|&y| id.section_at(y).unwrap() == y));

        let m3 = CodedMap::new(CodedSubset::naturals(), CodedSubset::below(3), PrExpr::modulo(PrExpr::Var(0), 3)).unwrap();
        let si = split_image(&m3, 64);
        assert_eq!((0..3).map(|y| si.section_at(y).unwrap()).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(si.section_law_failures(10).unwrap().is_empty());
        assert!(si.section_at(5).is_err());

        let dbl = CodedMap::new(CodedSubset::naturals(), CodedSubset::naturals(), PrExpr::parse("(* 2 x)", &["x"]).unwrap()).unwrap();
        let si = split_image(&dbl, 10);
        assert_eq!(si.section_at(8), Ok(4));
        assert_eq!(si.section_at(7), Err(EffectiveError::BoundExceeded { point: 7, bound: 10 }));
        assert!(si.mono(7).is_err());
        assert_eq!(si.image.elements_below(30).unwrap(), vec![0, 2, 4, 6, 8, 10, 12, 14, 16, 18]);
    }

    #[test]
    fn graph_factorisation_examples() {
        let id = graph_factorisation(&CodedMap::identity(CodedSubset::naturals()));
        for x in 0..20 {
            assert_eq!(unpair(id.graph_map(x).unwrap()), (x, x));
        }
        let succ = CodedMap::new(CodedSubset::naturals(), CodedSubset::naturals(), PrExpr::succ(PrExpr::Var(0))).unwrap();
        let g = graph_factorisation(&succ);
        assert!(g.certify(101).unwrap().is_empty());
        for x in 0..=100 {
            assert!(g.contains(pair(x, pair(x, x + 1).unwrap()).unwrap()).unwrap());
            assert!(!g.contains(pair(x, pair(x, x).unwrap()).unwrap()).unwrap());
        }
    }

    #[test]
    fn list_family_examples() {
        // Fiber of size 2 over 0 and 3 over 1.
        let q = family("(< b 2)", "(< x (+ 2 b))");
        let l = list_family(q, 8);
        let nil = encode_list(&[]).unwrap();
        assert_eq!(l.fiber_within(nil, 10).unwrap(), vec![nil]);
        let c = encode_list(&[0, 1, 1]).unwrap();
        let fib = l.fiber_within(c, 10).unwrap();
        assert_eq!(fib.len(), 18);
        assert!(fib.iter().all(|&x| l.in_fiber(c, x).unwrap()));
        for b in 0..2 {
            let single = encode_list(&[b]).unwrap();
            assert_eq!(l.fiber_within(single, 10).unwrap().len(), l.component.fiber_below(b, 10).unwrap().len());
        }
        assert!(!l.in_base(encode_list(&[0, 2]).unwrap()).unwrap());
        let bad = pair(0, 3).unwrap();
        assert!(!l.in_base(bad).unwrap());
        assert!(matches!(l.fiber_within(bad, 10), Err(EffectiveError::Coding(_))));
        let cat = l.concat(encode_list(&[0]).unwrap(), encode_list(&[1, 1]).unwrap()).unwrap();
        assert_eq!(cat, c);
    }
}

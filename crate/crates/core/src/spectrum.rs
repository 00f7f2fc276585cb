//! Well-inside, normality, regular prime filters and rounded ideals of a
//! finite distributive lattice.
//!
//! In a finite lattice every filter and every ideal is principal. A prime
//! filter is `↑j` for a join-irreducible `j`, and it is regular iff `j ≪ j`,
//! i.e. `j` is complemented. An ideal `↓a` is rounded iff `a ≪ a`. The
//! enumerations below use these characterizations; `oracle` re-derives them
//! by filtering all up-sets and down-sets.

use std::sync::Arc;

use num_traits::One;

use crate::algebra::{AlgElement, AlgebraHom, Rational};
use crate::error::{Error, Result};
use crate::lattice::{induced_hom, DLattice, LatElem, LatExpr, LA};

/// First `y` (in element order) with `a ∨ y = ⊤` and `a′ ∧ y = ⊥`.
pub fn well_inside(l: &DLattice, a_prime: LatElem, a: LatElem) -> Result<Option<LatElem>> {
    l.check(a_prime)?;
    l.check(a)?;
    let (top, bottom) = (l.top(), l.bottom());
    Ok(l.elements().iter().copied().find(|&y| l.join(a, y) == top && l.meet(a_prime, y) == bottom))
}

/// The full `≪` relation with a witness per pair.
#[derive(Clone, Debug)]
pub struct WellInsideRel {
    lattice: Arc<DLattice>,
    witness: Vec<Vec<Option<LatElem>>>,
}

impl WellInsideRel {
    pub fn new(lattice: Arc<DLattice>) -> Self {
        let els = lattice.elements();
        let witness = els
            .iter()
            .map(|&ap| els.iter().map(|&a| well_inside(&lattice, ap, a).expect("own elements")).collect())
            .collect();
        WellInsideRel { lattice, witness }
    }

    pub fn lattice(&self) -> &Arc<DLattice> {
        &self.lattice
    }

    pub fn witness(&self, a_prime: LatElem, a: LatElem) -> Result<Option<LatElem>> {
        Ok(self.witness[self.lattice.index_of(a_prime)?][self.lattice.index_of(a)?])
    }

    pub fn holds(&self, a_prime: LatElem, a: LatElem) -> bool {
        matches!(self.witness(a_prime, a), Ok(Some(_)))
    }

    /// All pairs `(a′, a)` with `a′ ≪ a`.
    pub fn pairs(&self) -> Vec<(LatElem, LatElem)> {
        let els = self.lattice.elements();
        let mut out = Vec::new();
        for (i, &ap) in els.iter().enumerate() {
            for (j, &a) in els.iter().enumerate() {
                if self.witness[i][j].is_some() {
                    out.push((ap, a));
                }
            }
        }
        out
    }

    /// `⇓a = {a′ : a′ ≪ a}`.
    pub fn way_below(&self, a: LatElem) -> Vec<LatElem> {
        self.lattice.elements().iter().copied().filter(|&ap| self.holds(ap, a)).collect()
    }

    pub fn is_transitive(&self) -> bool {
        let els = self.lattice.elements();
        els.iter().all(|&a| {
            els.iter().all(|&b| {
                !self.holds(a, b) || els.iter().all(|&c| !self.holds(b, c) || self.holds(a, c))
            })
        })
    }

    pub fn is_interpolative(&self) -> bool {
        self.pairs().into_iter().all(|(ap, a)| self.interpolant(ap, a).is_some())
    }

    fn interpolant(&self, a_prime: LatElem, a: LatElem) -> Option<LatElem> {
        self.lattice.elements().iter().copied().find(|&m| self.holds(a_prime, m) && self.holds(m, a))
    }

    /// A cover `a ∨ b = ⊤` with no `x ≪ a` such that `x ∨ b = ⊤`.
    pub fn normality_counterexample(&self) -> Option<(LatElem, LatElem)> {
        let l = &self.lattice;
        let top = l.top();
        for &a in l.elements() {
            for &b in l.elements() {
                if l.join(a, b) == top && !l.elements().iter().any(|&x| self.holds(x, a) && l.join(x, b) == top) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    fn require_normal(&self) -> Result<()> {
        match self.normality_counterexample() {
            None => Ok(()),
            Some((a, b)) => Err(Error::NotNormal { a: self.lattice.label(a), b: self.lattice.label(b) }),
        }
    }
}

pub fn is_normal(l: &Arc<DLattice>) -> bool {
    WellInsideRel::new(l.clone()).normality_counterexample().is_none()
}

/// Some `a″` with `a′ ≪ a″ ≪ a`, first in element order.
pub fn interpolate(l: &Arc<DLattice>, a_prime: LatElem, a: LatElem) -> Result<LatElem> {
    let rel = WellInsideRel::new(l.clone());
    rel.require_normal()?;
    if rel.witness(a_prime, a)?.is_none() {
        return Err(Error::NotWellInside(l.label(a_prime), l.label(a)));
    }
    Ok(rel.interpolant(a_prime, a).expect("normal lattices interpolate"))
}

/// A prime filter, stored by its least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFilter {
    lattice: Arc<DLattice>,
    generator: LatElem,
}

impl PrimeFilter {
    pub fn lattice(&self) -> &Arc<DLattice> {
        &self.lattice
    }

    pub fn generator(&self) -> LatElem {
        self.generator
    }

    pub fn contains(&self, e: LatElem) -> bool {
        self.lattice.leq(self.generator, e)
    }

    pub fn members(&self) -> Vec<LatElem> {
        self.lattice.up(self.generator)
    }
}

/// A rounded ideal, stored by its greatest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundedIdeal {
    lattice: Arc<DLattice>,
    generator: LatElem,
}

impl RoundedIdeal {
    /// `↓a`, provided it is rounded.
    pub fn principal(lattice: &Arc<DLattice>, a: LatElem) -> Result<Self> {
        lattice.check(a)?;
        if well_inside(lattice, a, a)?.is_none() {
            return Err(Error::NotWellInside(lattice.label(a), lattice.label(a)));
        }
        Ok(RoundedIdeal { lattice: lattice.clone(), generator: a })
    }

    pub fn lattice(&self) -> &Arc<DLattice> {
        &self.lattice
    }

    pub fn generator(&self) -> LatElem {
        self.generator
    }

    pub fn contains(&self, e: LatElem) -> bool {
        self.lattice.leq(e, self.generator)
    }

    pub fn members(&self) -> Vec<LatElem> {
        self.lattice.down(self.generator)
    }

    pub fn meets(&self, x: &PrimeFilter) -> bool {
        x.contains(self.generator)
    }
}

pub fn regular_prime_filters(l: &Arc<DLattice>) -> Vec<PrimeFilter> {
    l.join_irreducibles()
        .into_iter()
        .filter(|&j| l.complement(j).is_some())
        .map(|j| PrimeFilter { lattice: l.clone(), generator: j })
        .collect()
}

pub fn rounded_ideals(l: &Arc<DLattice>) -> Vec<RoundedIdeal> {
    l.elements()
        .iter()
        .copied()
        .filter(|&a| l.complement(a).is_some())
        .map(|a| RoundedIdeal { lattice: l.clone(), generator: a })
        .collect()
}

/// Ideals `↓b` with `⇓a ⊆ ↓b ⇒ a ≤ b`, by their generators.
pub fn regular_ideals(l: &Arc<DLattice>) -> Vec<LatElem> {
    let rel = WellInsideRel::new(l.clone());
    l.elements()
        .iter()
        .copied()
        .filter(|&b| {
            l.elements().iter().all(|&a| l.leq(a, b) || !rel.way_below(a).into_iter().all(|ap| l.leq(ap, b)))
        })
        .collect()
}

/// Outcome of [`regular_rounded_bijection`]. Ideals are named by their
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub regular: Vec<LatElem>,
    pub rounded: Vec<LatElem>,
    /// `(J, ⇓J)` for every regular `J`.
    pub forward: Vec<(LatElem, LatElem)>,
    /// `(I, r⟨I⟩)` for every rounded `I`.
    pub backward: Vec<(LatElem, LatElem)>,
    pub failures: Vec<String>,
}

impl BijectionReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The maps `J ↦ ⇓J` and `I ↦ r⟨I⟩ = {a : ⇓a ⊆ I}`, checked to be mutually
/// inverse.
pub fn regular_rounded_bijection(l: &Arc<DLattice>) -> Result<BijectionReport> {
    let rel = WellInsideRel::new(l.clone());
    rel.require_normal()?;
    let els = l.elements();
    // Ideals as element subsets, so that non-principal results are caught.
    let as_set = |pred: &dyn Fn(LatElem) -> bool| -> Vec<LatElem> { els.iter().copied().filter(|&e| pred(e)).collect() };
    let principal = |set: &[LatElem]| -> Option<LatElem> {
        let top = l.join_all(set.iter().copied());
        (set.contains(&top) && set.iter().all(|&e| l.leq(e, top)) && set.len() == l.down(top).len()).then_some(top)
    };
    let down_wi = |b: LatElem| as_set(&|ap| els.iter().any(|&a| l.leq(a, b) && rel.holds(ap, a)));
    let r_of = |b: LatElem| as_set(&|a| rel.way_below(a).into_iter().all(|ap| l.leq(ap, b)));

    let regular = regular_ideals(l);
    let rounded: Vec<LatElem> = rounded_ideals(l).iter().map(RoundedIdeal::generator).collect();
    let mut report = BijectionReport { regular, rounded, forward: vec![], backward: vec![], failures: vec![] };
    for &j in &report.regular {
        match principal(&down_wi(j)) {
            Some(i) if report.rounded.contains(&i) => {
                report.forward.push((j, i));
                if principal(&r_of(i)) != Some(j) {
                    report.failures.push(format!("r<⇓{}> differs from {}", l.label(j), l.label(j)));
                }
            }
            _ => report.failures.push(format!("⇓{} is not a rounded ideal", l.label(j))),
        }
    }
    for &i in &report.rounded {
        match principal(&r_of(i)) {
            Some(j) if report.regular.contains(&j) => {
                report.backward.push((i, j));
                if principal(&down_wi(j)) != Some(i) {
                    report.failures.push(format!("⇓r<{}> differs from {}", l.label(i), l.label(i)));
                }
            }
            _ => report.failures.push(format!("r<{}> is not a regular ideal", l.label(i))),
        }
    }
    Ok(report)
}

/// The finite space `RSpec L` with opens `ext(I)` for rounded `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RidlReport {
    pub points: Vec<PrimeFilter>,
    /// `ext(I)` as a mask over `points`, one per rounded ideal.
    pub opens: Vec<u64>,
    pub rounded_count: usize,
    pub injective: bool,
    pub closed: bool,
}

impl RidlReport {
    pub fn ok(&self) -> bool {
        self.injective && self.closed && self.opens.len() == self.rounded_count
    }
}

pub fn check_ridl_is_opens(l: &Arc<DLattice>) -> Result<RidlReport> {
    WellInsideRel::new(l.clone()).require_normal()?;
    let points = regular_prime_filters(l);
    if points.len() > 64 {
        return Err(Error::TooLarge { what: "regular spectrum".into(), size: points.len(), max: 64 });
    }
    let ideals = rounded_ideals(l);
    let opens: Vec<u64> = ideals
        .iter()
        .map(|i| points.iter().enumerate().filter(|(_, x)| i.meets(x)).fold(0, |m, (k, _)| m | 1 << k))
        .collect();
    let image: std::collections::BTreeSet<u64> = opens.iter().copied().collect();
    let full = if points.len() == 64 { u64::MAX } else { (1u64 << points.len()) - 1 };
    let closed = image.contains(&0)
        && image.contains(&full)
        && image.iter().all(|&u| image.iter().all(|&v| image.contains(&(u | v)) && image.contains(&(u & v))));
    Ok(RidlReport { injective: image.len() == opens.len(), closed, rounded_count: ideals.len(), points, opens })
}

/// Check that each regular prime filter of `L_A` is `{D(a) : χ(a) > 0}` for
/// exactly one character `χ`, on the given samples.
pub fn gelfand_check(la: &LA, samples: &[AlgElement]) -> Result<Vec<String>> {
    let l = la.lattice();
    let filters = regular_prime_filters(l);
    let mut out = Vec::new();
    if filters.len() != la.algebra().dim() {
        out.push(format!("{} regular prime filters for {} characters", filters.len(), la.algebra().dim()));
    }
    for (o, label) in la.algebra().outcomes().iter().enumerate() {
        let matching: Vec<&PrimeFilter> = filters.iter().filter(|x| x.generator() == LatElem::from_bits(1 << o)).collect();
        let [x] = matching[..] else {
            out.push(format!("character {label} matches {} filters", matching.len()));
            continue;
        };
        for a in samples {
            let by_char = a.values()[o].re() > &Rational::from_integer(0.into());
            if x.contains(la.d(a)?) != by_char {
                out.push(format!("character {label} disagrees with its filter on D({a})"));
            }
        }
    }
    Ok(out)
}

/// Number of halvings tried by [`shrink_witness`].
pub const SHRINK_STEPS: u32 = 64;

fn eval_d(la: &LA, phi: &LatExpr, args: &[(String, AlgElement)], r: Option<&Rational>) -> Result<LatElem> {
    let l = la.lattice();
    phi.eval(
        &l.top(),
        &l.bottom(),
        &mut |g| {
            let (_, a) = args.iter().find(|(n, _)| n == g).ok_or_else(|| Error::UnknownGenerator(g.to_string()))?;
            match r {
                Some(r) => la.d(&a.shift_down(r)),
                None => la.d(a),
            }
        },
        &|x, y| l.meet(x, y),
        &|x, y| l.join(x, y),
    )
}

/// First `r = 1/2^m` (`m = 1, 2, …`) with `v ≤ φ(D(aᵢ − r))`, given
/// `v ≪ φ(D(aᵢ))`.
pub fn shrink_witness(la: &LA, v: LatElem, phi: &LatExpr, args: &[(String, AlgElement)]) -> Result<Rational> {
    let l = la.lattice();
    l.check(v)?;
    let target = eval_d(la, phi, args, None)?;
    if well_inside(l, v, target)?.is_none() {
        return Err(Error::NotWellInside(l.label(v), l.label(target)));
    }
    let mut r = Rational::one();
    for _ in 0..SHRINK_STEPS {
        r /= Rational::from_integer(2.into());
        if l.leq(v, eval_d(la, phi, args, Some(&r))?) {
            return Ok(r);
        }
    }
    Err(Error::SearchExhausted { steps: SHRINK_STEPS })
}

/// Given `v ≪ L_h(u)`, some `u′ ≪ u` with `v ≤ L_h(u′)`.
///
/// Writes `u = D(χ_u)`, shrinks `χ_u` by the witness `r` found on the target
/// side, and returns `u′ = D(χ_u − r)`.
pub fn push_well_inside(h: &AlgebraHom, source: &LA, target: &LA, u: LatElem, v: LatElem) -> Result<LatElem> {
    let lh = induced_hom(h, source, target)?;
    let hu = lh.apply(u)?;
    let tl = target.lattice();
    tl.check(v)?;
    if well_inside(tl, v, hu)?.is_none() {
        return Err(Error::NotWellInside(tl.label(v), tl.label(hu)));
    }
    let chi = source.indicator(u)?;
    let pushed = h.apply(&chi)?;
    let r = shrink_witness(target, v, &LatExpr::gen("a"), &[("a".to_string(), pushed)])?;
    let u_prime = source.d(&chi.shift_down(&r))?;
    let sl = source.lattice();
    if well_inside(sl, u_prime, u)?.is_none() || !tl.leq(v, lh.apply(u_prime)?) {
        return Err(Error::NotWellInside(sl.label(u_prime), sl.label(u)));
    }
    Ok(u_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, sign_samples, FinCommAlgebra};
    use crate::lattice::build_la;
    use crate::poset::FinPoset;
    use std::collections::BTreeMap;

    fn chain3() -> Arc<DLattice> {
        Arc::new(DLattice::chain(3))
    }

    fn square() -> Arc<DLattice> {
        Arc::new(DLattice::powerset(vec!["1".into(), "2".into()]).unwrap())
    }

    fn e(b: u64) -> LatElem {
        LatElem::from_bits(b)
    }

    #[test]
    fn well_inside_examples() {
        let sq = square();
        assert_eq!(well_inside(&sq, e(1), e(1)).unwrap(), Some(e(2)));
        let c = chain3();
        let (bot, m, top) = (c.elem(0), c.elem(1), c.elem(2));
        assert_eq!(well_inside(&c, m, top).unwrap(), Some(bot));
        assert_eq!(well_inside(&c, m, m).unwrap(), None);
        assert_eq!(well_inside(&c, e(8), m), Err(Error::ElementNotInLattice));
    }

    #[test]
    fn normality_and_interpolation() {
        for k in 0..=4 {
            let carrier = (1..=k).map(|i| i.to_string()).collect();
            assert!(is_normal(&Arc::new(DLattice::powerset(carrier).unwrap())));
        }
        let c = chain3();
        assert!(is_normal(&c));
        assert_eq!(interpolate(&c, c.bottom(), c.top()).unwrap(), c.bottom());
        assert_eq!(interpolate(&c, c.bottom(), c.bottom()).unwrap(), c.bottom());
        assert!(matches!(interpolate(&c, c.elem(1), c.elem(1)), Err(Error::NotWellInside(..))));
        let sq = square();
        assert_eq!(interpolate(&sq, e(1), e(3)).unwrap(), e(1));
    }

    #[test]
    fn a_non_normal_lattice() {
        // Down-sets of the "N" poset fail normality.
        let n = FinPoset::from_pairs(
            ["a", "b", "c", "d"].map(String::from).to_vec(),
            &[("a", "c"), ("b", "c"), ("b", "d")].map(|(x, y)| (x.to_string(), y.to_string())),
        )
        .unwrap();
        let l = Arc::new(DLattice::downsets_of(&n));
        if !is_normal(&l) {
            assert!(matches!(regular_rounded_bijection(&l), Err(Error::NotNormal { .. })));
        }
    }

    #[test]
    fn filters_and_ideals() {
        let c = chain3();
        let f = regular_prime_filters(&c);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].members(), vec![c.top()]);
        let r: Vec<Vec<LatElem>> = rounded_ideals(&c).iter().map(RoundedIdeal::members).collect();
        assert_eq!(r, vec![vec![c.bottom()], c.elements().to_vec()]);
        assert_eq!(regular_prime_filters(&square()).len(), 2);
        assert_eq!(rounded_ideals(&square()).len(), 4);
        let two = Arc::new(DLattice::chain(2));
        assert_eq!(regular_prime_filters(&two).len(), 1);
        assert_eq!(rounded_ideals(&two).len(), 2);
    }

    #[test]
    fn degenerate_lattice() {
        let one = Arc::new(DLattice::chain(1));
        assert!(one.is_degenerate());
        assert!(regular_prime_filters(&one).is_empty());
        assert_eq!(rounded_ideals(&one).len(), 1);
        let b = regular_rounded_bijection(&one).unwrap();
        assert!(b.ok());
        assert_eq!((b.regular.len(), b.rounded.len()), (1, 1));
    }

    #[test]
    fn bijection_and_opens() {
        let c = chain3();
        let b = regular_rounded_bijection(&c).unwrap();
        assert!(b.ok(), "{:?}", b.failures);
        // `{⊥}` is not regular: `⇓m = {⊥}` but `m ∉ {⊥}`.
        assert_eq!(b.regular, vec![c.elem(1), c.top()]);
        assert_eq!(b.rounded, vec![c.bottom(), c.top()]);
        assert_eq!(b.forward, vec![(c.elem(1), c.bottom()), (c.top(), c.top())]);
        let r = check_ridl_is_opens(&c).unwrap();
        assert!(r.ok());
        assert_eq!((r.points.len(), r.opens.len()), (1, 2));
        let r = check_ridl_is_opens(&square()).unwrap();
        assert_eq!((r.points.len(), r.opens.len()), (2, 4));
        assert!(r.ok());
    }

    #[test]
    fn gelfand_on_small_algebras() {
        for k in 1..=3 {
            let a = Arc::new(FinCommAlgebra::standard(k).unwrap());
            let la = build_la(a.clone()).unwrap();
            assert!(gelfand_check(&la, &sign_samples(&a)).unwrap().is_empty());
        }
    }

    #[test]
    fn shrink_examples() {
        let a = Arc::new(FinCommAlgebra::standard(2).unwrap());
        let la = build_la(a.clone()).unwrap();
        let v = la.d(&AlgElement::from_ints(a.clone(), &[1, -1]).unwrap()).unwrap();
        let arg = AlgElement::from_ints(a.clone(), &[2, -1]).unwrap();
        let args = [("g".to_string(), arg)];
        assert_eq!(shrink_witness(&la, v, &LatExpr::gen("g"), &args).unwrap(), rat(1, 2));
        assert_eq!(shrink_witness(&la, la.lattice().bottom(), &LatExpr::gen("g"), &args).unwrap(), rat(1, 2));
        assert_eq!(shrink_witness(&la, la.lattice().top(), &LatExpr::Top, &[]).unwrap(), rat(1, 2));
        let tiny = AlgElement::from_rationals(a.clone(), vec![rat(1, 1 << 40), rat(-1, 1)]).unwrap();
        let r = shrink_witness(&la, v, &LatExpr::gen("g"), &[("g".into(), tiny)]).unwrap();
        assert_eq!(r, rat(1, 1 << 41));
        let zero = AlgElement::zero(a.clone());
        assert!(matches!(
            shrink_witness(&la, v, &LatExpr::gen("g"), &[("g".into(), zero)]),
            Err(Error::NotWellInside(..))
        ));
    }

    #[test]
    fn push_examples() {
        let (a1, a2) = (Arc::new(FinCommAlgebra::standard(1).unwrap()), Arc::new(FinCommAlgebra::standard(2).unwrap()));
        let (l1, l2) = (build_la(a1.clone()).unwrap(), build_la(a2.clone()).unwrap());
        let map: BTreeMap<String, String> = [("1", "1"), ("2", "1")].iter().map(|(t, s)| (t.to_string(), s.to_string())).collect();
        let h = AlgebraHom::new(a1, a2.clone(), &map).unwrap();
        assert_eq!(push_well_inside(&h, &l1, &l2, e(1), e(1)).unwrap(), e(1));
        assert_eq!(push_well_inside(&h, &l1, &l2, e(1), e(3)).unwrap(), e(1));
        let id = AlgebraHom::identity(a2);
        assert_eq!(push_well_inside(&id, &l2, &l2, e(3), e(1)).unwrap(), e(3));
        assert!(matches!(push_well_inside(&id, &l2, &l2, e(1), e(2)), Err(Error::NotWellInside(..))));
    }
}

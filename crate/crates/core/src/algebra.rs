//! Exact finite-dimensional commutative *-algebras over the Gaussian rationals.
//!
//! A commutative finite-dimensional *-algebra is determined by its spectrum,
//! so an algebra is stored as an ordered list of outcome labels and an element
//! is a function from outcomes to Gaussian rationals with pointwise operations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat {
    re: Rational,
    im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRat { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::real(int(n))
    }

    pub fn i() -> Self {
        GaussRat { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        GaussRat::from_int(0)
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, -self.im.clone()),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

/// The algebra of functions on a finite, nonempty set of outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinCommAlgebra {
    name: String,
    outcomes: Vec<String>,
}

impl FinCommAlgebra {
    /// Outcomes are stored in lexicographic order.
    pub fn new(name: impl Into<String>, outcomes: impl IntoIterator<Item = impl Into<String>>) -> Result<Self> {
        let mut outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.is_empty() {
            return Err(Error::InvalidAlgebra("an algebra needs at least one outcome".into()));
        }
        outcomes.sort();
        if let Some(w) = outcomes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidAlgebra(format!("duplicate outcome `{}`", w[0])));
        }
        Ok(FinCommAlgebra { name: name.into(), outcomes })
    }

    /// `Q[i]^k` with outcomes labelled `1..=k`.
    pub fn standard(k: usize) -> Result<Self> {
        FinCommAlgebra::new(format!("Q[i]^{k}"), (1..=k).map(|i| i.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn dim(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcome_index(&self, label: &str) -> Result<usize> {
        self.outcomes
            .binary_search_by(|o| o.as_str().cmp(label))
            .map_err(|_| Error::UnknownOutcome(label.to_string()))
    }
}

/// An element of a [`FinCommAlgebra`]: one Gaussian rational per outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement {
    parent: Arc<FinCommAlgebra>,
    values: Vec<GaussRat>,
}

impl AlgElement {
    pub fn new(parent: Arc<FinCommAlgebra>, values: Vec<GaussRat>) -> Result<Self> {
        if values.len() != parent.dim() {
            return Err(Error::InvalidAlgebra(format!(
                "element has {} values but `{}` has {} outcomes",
                values.len(),
                parent.name(),
                parent.dim()
            )));
        }
        Ok(AlgElement { parent, values })
    }

    /// Self-adjoint element with rational coordinates.
    pub fn from_rationals(parent: Arc<FinCommAlgebra>, values: Vec<Rational>) -> Result<Self> {
        AlgElement::new(parent, values.into_iter().map(GaussRat::real).collect())
    }

    pub fn from_ints(parent: Arc<FinCommAlgebra>, values: &[i64]) -> Result<Self> {
        AlgElement::from_rationals(parent, values.iter().map(|&v| int(v)).collect())
    }

    /// Values keyed by outcome label; every outcome must be present.
    pub fn from_map(parent: Arc<FinCommAlgebra>, map: &BTreeMap<String, GaussRat>) -> Result<Self> {
        let values = parent
            .outcomes()
            .iter()
            .map(|o| map.get(o).cloned().ok_or_else(|| Error::UnknownOutcome(o.clone())))
            .collect::<Result<Vec<_>>>()?;
        if map.len() != parent.dim() {
            let extra = map.keys().find(|k| parent.outcome_index(k).is_err()).cloned().unwrap_or_default();
            return Err(Error::UnknownOutcome(extra));
        }
        AlgElement::new(parent, values)
    }

    pub fn zero(parent: Arc<FinCommAlgebra>) -> Self {
        let values = vec![GaussRat::zero(); parent.dim()];
        AlgElement { parent, values }
    }

    pub fn unit(parent: Arc<FinCommAlgebra>) -> Self {
        let values = vec![GaussRat::one(); parent.dim()];
        AlgElement { parent, values }
    }

    /// Indicator function of the outcomes whose bit is set in `mask`.
    pub fn indicator(parent: Arc<FinCommAlgebra>, mask: u64) -> Self {
        let values = (0..parent.dim())
            .map(|i| if mask >> i & 1 == 1 { GaussRat::one() } else { GaussRat::zero() })
            .collect();
        AlgElement { parent, values }
    }

    pub fn parent(&self) -> &Arc<FinCommAlgebra> {
        &self.parent
    }

    pub fn values(&self) -> &[GaussRat] {
        &self.values
    }

    pub fn value(&self, outcome: &str) -> Result<&GaussRat> {
        Ok(&self.values[self.parent.outcome_index(outcome)?])
    }

    fn same_parent(&self, other: &AlgElement) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent {
            Ok(())
        } else {
            Err(Error::MismatchedParent {
                left: self.parent.name().to_string(),
                right: other.parent.name().to_string(),
            })
        }
    }

    fn zip_with(&self, other: &AlgElement, f: impl Fn(&GaussRat, &GaussRat) -> GaussRat) -> Result<AlgElement> {
        self.same_parent(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(AlgElement { parent: self.parent.clone(), values })
    }

    fn map_values(&self, f: impl Fn(&GaussRat) -> GaussRat) -> AlgElement {
        AlgElement { parent: self.parent.clone(), values: self.values.iter().map(f).collect() }
    }

    pub fn add(&self, other: &AlgElement) -> Result<AlgElement> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &AlgElement) -> Result<AlgElement> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &AlgElement) -> Result<AlgElement> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn neg(&self) -> AlgElement {
        self.map_values(|a| -a)
    }

    pub fn star(&self) -> AlgElement {
        self.map_values(GaussRat::conj)
    }

    pub fn scalar_mul(&self, s: &GaussRat) -> AlgElement {
        self.map_values(|a| s * a)
    }

    /// `self - r·1`.
    pub fn shift_down(&self, r: &Rational) -> AlgElement {
        let r = GaussRat::real(r.clone());
        self.map_values(|a| a - &r)
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.values.iter().all(GaussRat::is_real)
    }

    fn real_parts(&self) -> Result<impl Iterator<Item = &Rational>> {
        if !self.is_self_adjoint() {
            return Err(Error::NotSelfAdjoint);
        }
        Ok(self.values.iter().map(GaussRat::re))
    }

    /// Membership in the positive cone: every coordinate is `>= 0`.
    ///
    /// In a full finite function algebra the cone generated by squares under
    /// addition and positive rational scaling is exactly the coordinatewise
    /// nonnegative cone; `oracle::cone_closure` checks this on small cases.
    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.real_parts()?.all(|v| !v.is_negative()))
    }

    /// Least integer `r` with `self <= r·1`.
    pub fn archimedean_bound(&self) -> Result<Rational> {
        let max = self.real_parts()?.max().cloned().expect("algebras are nonempty");
        Ok(max.ceil())
    }

    /// Outcomes where the element is strictly positive, as a bitmask.
    pub(crate) fn positive_support(&self) -> Result<u64> {
        Ok(self
            .real_parts()?
            .enumerate()
            .filter(|(_, v)| v.is_positive())
            .fold(0, |m, (i, _)| m | 1 << i))
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Evaluation at one outcome: a *-homomorphism to the scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    algebra: Arc<FinCommAlgebra>,
    outcome: usize,
}

impl Character {
    pub fn outcome(&self) -> usize {
        self.outcome
    }

    pub fn label(&self) -> &str {
        &self.algebra.outcomes()[self.outcome]
    }

    pub fn apply(&self, a: &AlgElement) -> Result<GaussRat> {
        if *a.parent != *self.algebra {
            return Err(Error::MismatchedParent {
                left: self.algebra.name().to_string(),
                right: a.parent.name().to_string(),
            });
        }
        Ok(a.values[self.outcome].clone())
    }
}

/// One character per outcome, in outcome order.
pub fn characters(algebra: &Arc<FinCommAlgebra>) -> Vec<Character> {
    (0..algebra.dim()).map(|outcome| Character { algebra: algebra.clone(), outcome }).collect()
}

/// A unital injective *-homomorphism `source -> target`, given contravariantly
/// by a surjection from target outcomes onto source outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraHom {
    source: Arc<FinCommAlgebra>,
    target: Arc<FinCommAlgebra>,
    outcome_map: Vec<usize>,
}

impl AlgebraHom {
    /// `map` sends each target outcome to a source outcome.
    pub fn new(
        source: Arc<FinCommAlgebra>,
        target: Arc<FinCommAlgebra>,
        map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut outcome_map = Vec::with_capacity(target.dim());
        for t in target.outcomes() {
            let s = map.get(t).ok_or_else(|| Error::UnknownOutcome(format!("{t} (unmapped target outcome)")))?;
            outcome_map.push(source.outcome_index(s)?);
        }
        if let Some(extra) = map.keys().find(|k| target.outcome_index(k).is_err()) {
            return Err(Error::UnknownOutcome(extra.clone()));
        }
        AlgebraHom::from_indices(source, target, outcome_map)
    }

    pub fn from_indices(source: Arc<FinCommAlgebra>, target: Arc<FinCommAlgebra>, outcome_map: Vec<usize>) -> Result<Self> {
        if outcome_map.len() != target.dim() || outcome_map.iter().any(|&s| s >= source.dim()) {
            return Err(Error::InvalidAlgebra("outcome map is not total".into()));
        }
        let mut hit = vec![false; source.dim()];
        for &s in &outcome_map {
            hit[s] = true;
        }
        if let Some(missed) = hit.iter().position(|h| !h) {
            return Err(Error::NotSurjective(format!(
                "source outcome `{}` of `{}` has no preimage in `{}`",
                source.outcomes()[missed],
                source.name(),
                target.name()
            )));
        }
        Ok(AlgebraHom { source, target, outcome_map })
    }

    pub fn identity(algebra: Arc<FinCommAlgebra>) -> Self {
        let outcome_map = (0..algebra.dim()).collect();
        AlgebraHom { source: algebra.clone(), target: algebra, outcome_map }
    }

    pub fn source(&self) -> &Arc<FinCommAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCommAlgebra> {
        &self.target
    }

    /// Target outcome index -> source outcome index.
    pub fn outcome_map(&self) -> &[usize] {
        &self.outcome_map
    }

    pub fn outcome_map_labels(&self) -> BTreeMap<String, String> {
        self.outcome_map
            .iter()
            .enumerate()
            .map(|(t, &s)| (self.target.outcomes()[t].clone(), self.source.outcomes()[s].clone()))
            .collect()
    }

    /// Push an element forward: `(h a)(t) = a(map(t))`.
    pub fn apply(&self, a: &AlgElement) -> Result<AlgElement> {
        if *a.parent != *self.source {
            return Err(Error::MismatchedParent {
                left: self.source.name().to_string(),
                right: a.parent.name().to_string(),
            });
        }
        let values = self.outcome_map.iter().map(|&s| a.values[s].clone()).collect();
        Ok(AlgElement { parent: self.target.clone(), values })
    }

    /// `next ∘ self`, for `self: A -> B` and `next: B -> C`.
    pub fn then(&self, next: &AlgebraHom) -> Result<AlgebraHom> {
        if *self.target != *next.source {
            return Err(Error::MismatchedParent {
                left: self.target.name().to_string(),
                right: next.source.name().to_string(),
            });
        }
        let outcome_map = next.outcome_map.iter().map(|&b| self.outcome_map[b]).collect();
        Ok(AlgebraHom { source: self.source.clone(), target: next.target.clone(), outcome_map })
    }
}

/// Pointwise check of the unital *-hom laws on a list of sample elements.
pub fn hom_law_violations(h: &AlgebraHom, samples: &[AlgElement]) -> Vec<String> {
    let mut out = Vec::new();
    let apply = |a: &AlgElement| h.apply(a).expect("samples live in the source algebra");
    if apply(&AlgElement::unit(h.source.clone())) != AlgElement::unit(h.target.clone()) {
        out.push("unit not preserved".to_string());
    }
    for a in samples {
        let ha = apply(a);
        if apply(&a.star()) != ha.star() {
            out.push(format!("star not preserved at {a}"));
        }
        if a.is_self_adjoint() && a.is_positive().unwrap() && !ha.is_positive().unwrap() {
            out.push(format!("positivity not preserved at {a}"));
        }
        for b in samples {
            let hb = apply(b);
            if apply(&a.add(b).unwrap()) != ha.add(&hb).unwrap() {
                out.push(format!("sum not preserved at {a}, {b}"));
            }
            if apply(&a.mul(b).unwrap()) != ha.mul(&hb).unwrap() {
                out.push(format!("product not preserved at {a}, {b}"));
            }
        }
    }
    out
}

/// Elements whose coordinates range over `entries`, in lexicographic order.
pub fn grid_elements(parent: &Arc<FinCommAlgebra>, entries: &[GaussRat]) -> Vec<AlgElement> {
    let k = parent.dim();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let values = idx.iter().map(|&i| entries[i].clone()).collect();
        out.push(AlgElement { parent: parent.clone(), values });
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < entries.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All self-adjoint elements with coordinates in `{-1, 0, 1}`.
pub fn sign_samples(parent: &Arc<FinCommAlgebra>) -> Vec<AlgElement> {
    grid_elements(parent, &[GaussRat::from_int(-1), GaussRat::from_int(0), GaussRat::from_int(1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: usize) -> Arc<FinCommAlgebra> {
        Arc::new(FinCommAlgebra::standard(k).unwrap())
    }

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::new(int(re), int(im))
    }

    #[test]
    fn star_conjugates_pointwise() {
        let a = AlgElement::new(q(2), vec![g(1, 1), g(2, 0)]).unwrap();
        assert_eq!(a.star().values(), &[g(1, -1), g(2, 0)]);
    }

    #[test]
    fn unit_is_all_ones() {
        assert_eq!(AlgElement::unit(q(3)).values(), &[g(1, 0), g(1, 0), g(1, 0)]);
    }

    #[test]
    fn square_of_sign_vector() {
        let a = AlgElement::from_ints(q(2), &[1, -1]).unwrap();
        assert_eq!(a.mul(&a).unwrap(), AlgElement::from_ints(q(2), &[1, 1]).unwrap());
    }

    #[test]
    fn mismatched_parent_is_rejected() {
        let a = AlgElement::unit(q(2));
        let b = AlgElement::unit(q(3));
        assert!(matches!(a.add(&b), Err(Error::MismatchedParent { .. })));
    }

    #[test]
    fn positivity() {
        assert!(AlgElement::zero(q(3)).is_positive().unwrap());
        assert!(AlgElement::from_ints(q(2), &[2, 0]).unwrap().is_positive().unwrap());
        assert!(!AlgElement::from_ints(q(2), &[1, -1]).unwrap().is_positive().unwrap());
        let not_sa = AlgElement::new(q(1), vec![g(0, 1)]).unwrap();
        assert_eq!(not_sa.is_positive(), Err(Error::NotSelfAdjoint));
        assert_eq!(not_sa.archimedean_bound(), Err(Error::NotSelfAdjoint));
    }

    #[test]
    fn archimedean_bounds() {
        assert_eq!(AlgElement::zero(q(2)).archimedean_bound().unwrap(), int(0));
        let a = AlgElement::from_rationals(q(2), vec![rat(3, 2), int(-5)]).unwrap();
        assert_eq!(a.archimedean_bound().unwrap(), int(2));
        assert_eq!(AlgElement::unit(q(4)).archimedean_bound().unwrap(), int(1));
        let neg = AlgElement::from_rationals(q(1), vec![rat(-3, 2)]).unwrap();
        assert_eq!(neg.archimedean_bound().unwrap(), int(-1));
    }

    #[test]
    fn characters_evaluate() {
        assert_eq!(characters(&q(1)).len(), 1);
        let chars = characters(&q(3));
        assert_eq!(chars.len(), 3);
        let a = AlgElement::from_ints(q(2), &[1, -1]).unwrap();
        assert_eq!(characters(&q(2))[1].apply(&a).unwrap(), g(-1, 0));
    }

    #[test]
    fn unital_embedding() {
        let h = AlgebraHom::from_indices(q(1), q(2), vec![0, 0]).unwrap();
        let five = AlgElement::from_ints(q(1), &[5]).unwrap();
        assert_eq!(h.apply(&five).unwrap(), AlgElement::from_ints(q(2), &[5, 5]).unwrap());
    }

    #[test]
    fn identity_hom_is_identity() {
        let h = AlgebraHom::identity(q(3));
        for a in sign_samples(&q(3)) {
            assert_eq!(h.apply(&a).unwrap(), a);
        }
    }

    #[test]
    fn duplicating_hom_satisfies_star_hom_laws() {
        let map: BTreeMap<String, String> =
            [("1", "1"), ("2", "1"), ("3", "2")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let h = AlgebraHom::new(q(2), q(3), &map).unwrap();
        let xy = AlgElement::from_ints(q(2), &[4, 7]).unwrap();
        assert_eq!(h.apply(&xy).unwrap(), AlgElement::from_ints(q(3), &[4, 4, 7]).unwrap());
        let entries = [g(-1, 0), g(0, 0), g(1, 0), g(0, 1), g(2, -1)];
        let samples = grid_elements(&q(2), &entries);
        assert!(hom_law_violations(&h, &samples).is_empty());
        for ch in characters(&q(3)) {
            let back = &characters(&q(2))[h.outcome_map()[ch.outcome()]];
            for a in &samples {
                assert_eq!(ch.apply(&h.apply(a).unwrap()).unwrap(), back.apply(a).unwrap());
            }
        }
    }

    #[test]
    fn non_surjective_map_is_rejected() {
        let err = AlgebraHom::from_indices(q(2), q(2), vec![0, 0]).unwrap_err();
        assert!(matches!(err, Error::NotSurjective(_)));
    }

    #[test]
    fn composition_is_contravariant_on_outcomes() {
        let h1 = AlgebraHom::from_indices(q(1), q(2), vec![0, 0]).unwrap();
        let h2 = AlgebraHom::from_indices(q(2), q(3), vec![0, 1, 1]).unwrap();
        let h = h1.then(&h2).unwrap();
        assert_eq!(h.outcome_map(), &[0, 0, 0]);
        let a = AlgElement::from_ints(q(1), &[3]).unwrap();
        assert_eq!(h.apply(&a).unwrap(), h2.apply(&h1.apply(&a).unwrap()).unwrap());
    }

    #[test]
    fn outcomes_are_sorted_and_unique() {
        let a = FinCommAlgebra::new("A", ["u", "d"]).unwrap();
        assert_eq!(a.outcomes(), &["d".to_string(), "u".to_string()]);
        assert!(FinCommAlgebra::new("A", ["u", "u"]).is_err());
        assert!(FinCommAlgebra::new("A", Vec::<String>::new()).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(g(1, -1).to_string(), "1-1i");
        assert_eq!(GaussRat::real(rat(-3, 2)).to_string(), "-3/2");
        assert_eq!(GaussRat::i().to_string(), "1i");
    }
}

//! The lattice `L_A` of a finite commutative *-algebra.
//!
//! `L_A` is realized semantically inside the powerset of outcomes, with
//! `D(a)` the set of outcomes where `a` is strictly positive.

use std::fmt;
use std::sync::Arc;

use super::dlattice::{DLattice, LatElem, LatticeHom};
use crate::algebra::{AlgElement, AlgebraHom, FinCommAlgebra};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LA {
    algebra: Arc<FinCommAlgebra>,
    lattice: Arc<DLattice>,
}

pub fn build_la(algebra: Arc<FinCommAlgebra>) -> Result<LA> {
    let lattice = Arc::new(DLattice::powerset(algebra.outcomes().to_vec())?);
    Ok(LA { algebra, lattice })
}

impl LA {
    pub fn algebra(&self) -> &Arc<FinCommAlgebra> {
        &self.algebra
    }

    pub fn lattice(&self) -> &Arc<DLattice> {
        &self.lattice
    }

    /// The generator map `D`.
    pub fn d(&self, a: &AlgElement) -> Result<LatElem> {
        if **a.parent() != *self.algebra {
            return Err(Error::MismatchedParent {
                left: a.parent().name().to_string(),
                right: self.algebra.name().to_string(),
            });
        }
        Ok(LatElem::from_bits(a.positive_support()?))
    }

    /// The indicator function of an element, whose `D` is the element itself.
    pub fn indicator(&self, e: LatElem) -> Result<AlgElement> {
        self.lattice.check(e)?;
        Ok(AlgElement::indicator(self.algebra.clone(), e.bits()))
    }

    /// For each outcome `o`, an element with `D(a) = {o}`.
    pub fn point_generators(&self) -> Vec<AlgElement> {
        (0..self.algebra.dim()).map(|i| AlgElement::indicator(self.algebra.clone(), 1 << i)).collect()
    }
}

/// A failed instance of one of the `L_A` axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub instance: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.axiom, self.instance)
    }
}

/// Check every instance of axioms (1a)-(1e) over `samples`.
pub fn check_la_axioms(la: &LA, samples: &[AlgElement]) -> Result<Vec<Violation>> {
    let l = &la.lattice;
    let mut out = Vec::new();
    let mut fail = |axiom, instance: String| out.push(Violation { axiom, instance });
    let one = AlgElement::unit(la.algebra.clone());
    if !l.leq(l.top(), la.d(&one)?) {
        fail("1d", "T <= D(1)".into());
    }
    for a in samples {
        let da = la.d(a)?;
        let dna = la.d(&a.neg())?;
        if l.meet(da, dna) != l.bottom() {
            fail("1a", format!("D({a}) & D(-{a}) <= F"));
        }
        if a.neg().is_positive()? && da != l.bottom() {
            fail("1b", format!("D({a}) <= F"));
        }
        for b in samples {
            let db = la.d(b)?;
            if !l.leq(la.d(&a.add(b)?)?, l.join(da, db)) {
                fail("1c", format!("D({a} + {b}) <= D({a}) v D({b})"));
            }
            let rhs = l.join(l.meet(da, db), l.meet(dna, la.d(&b.neg())?));
            if la.d(&a.mul(b)?)? != rhs {
                fail("1e", format!("D({a} * {b}) = (D(a) & D(b)) v (D(-a) & D(-b))"));
            }
        }
    }
    Ok(out)
}

/// `L_h`: the lattice map sending `D(a)` to `D(h(a))`, which is inverse
/// image along the outcome map.
pub fn induced_hom(h: &AlgebraHom, source: &LA, target: &LA) -> Result<LatticeHom> {
    if **h.source() != *source.algebra || **h.target() != *target.algebra {
        return Err(Error::MismatchedLattice);
    }
    let map = h.outcome_map().to_vec();
    LatticeHom::new(source.lattice.clone(), target.lattice.clone(), |u| {
        LatElem::from_bits(map.iter().enumerate().filter(|(_, &s)| u.bits() >> s & 1 == 1).fold(0, |m, (c, _)| m | 1 << c))
    })
}

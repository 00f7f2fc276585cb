use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::{bits, FinPoset};

/// An element of a [`DLattice`]: a subset of the lattice's carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatElem(u64);

impl LatElem {
    pub const fn from_bits(bits: u64) -> Self {
        LatElem(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }
}

/// A finite bounded distributive lattice, represented as a family of subsets
/// of a carrier (at most 64 points) that is closed under union and
/// intersection. Meet is intersection, join is union, order is inclusion.
///
/// Every finite distributive lattice has such a representation (take the
/// carrier to be its join-irreducibles), see [`DLattice::from_order`].
#[derive(Clone)]
pub struct DLattice {
    carrier: Vec<String>,
    elements: Vec<LatElem>,
    index: HashMap<u64, usize>,
}

impl PartialEq for DLattice {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.elements == other.elements
    }
}

impl Eq for DLattice {}

impl fmt::Debug for DLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DLattice").field("carrier", &self.carrier).field("size", &self.len()).finish()
    }
}

fn sort_key(e: &LatElem) -> (u32, u64) {
    (e.0.count_ones(), e.0)
}

impl DLattice {
    /// Wrap a family of subsets that is already closed under `∪` and `∩`.
    pub fn from_sets(carrier: Vec<String>, sets: impl IntoIterator<Item = u64>) -> Result<Self> {
        if carrier.len() > 64 {
            return Err(Error::TooLarge { what: "lattice carrier".into(), size: carrier.len(), max: 64 });
        }
        let set: BTreeSet<u64> = sets.into_iter().collect();
        if set.is_empty() {
            return Err(Error::NotDistributive("a lattice needs at least one element".into()));
        }
        let full = if carrier.len() == 64 { u64::MAX } else { (1u64 << carrier.len()) - 1 };
        for &a in &set {
            if a & !full != 0 {
                return Err(Error::NotDistributive(format!("subset {a:#b} leaves the carrier")));
            }
            for &b in &set {
                if !set.contains(&(a | b)) || !set.contains(&(a & b)) {
                    return Err(Error::NotDistributive(format!(
                        "family is not closed under union/intersection at {a:#b}, {b:#b}"
                    )));
                }
            }
        }
        Ok(DLattice::from_closed(carrier, set))
    }

    fn from_closed(carrier: Vec<String>, set: BTreeSet<u64>) -> Self {
        let mut elements: Vec<LatElem> = set.into_iter().map(LatElem).collect();
        elements.sort_by_key(sort_key);
        let index = elements.iter().enumerate().map(|(i, e)| (e.0, i)).collect();
        DLattice { carrier, elements, index }
    }

    /// The sublattice of the powerset generated by `gens` under `∪` and `∩`.
    pub fn generated(carrier: Vec<String>, gens: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set: BTreeSet<u64> = gens.into_iter().collect();
        let mut frontier: Vec<u64> = set.iter().copied().collect();
        while let Some(a) = frontier.pop() {
            let current: Vec<u64> = set.iter().copied().collect();
            for b in current {
                for c in [a | b, a & b] {
                    if set.insert(c) {
                        frontier.push(c);
                    }
                }
            }
        }
        DLattice::from_sets(carrier, set)
    }

    /// The full powerset of the carrier (a Boolean algebra).
    pub fn powerset(carrier: Vec<String>) -> Result<Self> {
        let n = carrier.len();
        if n > 20 {
            return Err(Error::TooLarge { what: "powerset carrier".into(), size: n, max: 20 });
        }
        let set = (0..1u64 << n).collect();
        Ok(DLattice::from_closed(carrier, set))
    }

    /// Down-set lattice of a finite poset (Birkhoff duality).
    pub fn downsets_of(poset: &FinPoset) -> Self {
        DLattice::from_closed(poset.labels().to_vec(), poset.downsets().into_iter().collect())
    }

    /// Represent an abstract finite order as a set lattice.
    ///
    /// Fails unless `leq` is a distributive lattice order on `0..n`. Returns
    /// the lattice and the element assigned to each abstract index.
    pub fn from_order(names: &[String], leq: impl Fn(usize, usize) -> bool) -> Result<(Self, Vec<LatElem>)> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NotDistributive("empty order".into()));
        }
        let lub = |a: usize, b: usize| -> Option<usize> {
            let ubs: Vec<usize> = (0..n).filter(|&c| leq(a, c) && leq(b, c)).collect();
            ubs.iter().copied().find(|&c| ubs.iter().all(|&d| leq(c, d)))
        };
        let glb = |a: usize, b: usize| -> Option<usize> {
            let lbs: Vec<usize> = (0..n).filter(|&c| leq(c, a) && leq(c, b)).collect();
            lbs.iter().copied().find(|&c| lbs.iter().all(|&d| leq(d, c)))
        };
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq(b, x)))
            .ok_or_else(|| Error::NotDistributive("no bottom element".into()))?;
        // Join-irreducible: not bottom, exactly one lower cover.
        let lower_covers = |x: usize| {
            (0..n)
                .filter(|&y| y != x && leq(y, x) && !(0..n).any(|z| z != y && z != x && leq(y, z) && leq(z, x)))
                .count()
        };
        let irreducibles: Vec<usize> = (0..n).filter(|&x| x != bottom && lower_covers(x) == 1).collect();
        if irreducibles.len() > 64 {
            return Err(Error::TooLarge { what: "join-irreducibles".into(), size: irreducibles.len(), max: 64 });
        }
        let rep: Vec<u64> = (0..n)
            .map(|x| irreducibles.iter().enumerate().filter(|(_, &j)| leq(j, x)).fold(0, |m, (k, _)| m | 1 << k))
            .collect();
        for a in 0..n {
            for b in 0..n {
                let (Some(j), Some(m)) = (lub(a, b), glb(a, b)) else {
                    return Err(Error::NotDistributive(format!("`{}` and `{}` lack a join or meet", names[a], names[b])));
                };
                if rep[j] != rep[a] | rep[b] || rep[m] != rep[a] & rep[b] {
                    return Err(Error::NotDistributive(format!(
                        "distributivity fails around `{}`, `{}`",
                        names[a], names[b]
                    )));
                }
            }
        }
        let carrier = irreducibles.iter().map(|&j| names[j].clone()).collect();
        let set: BTreeSet<u64> = rep.iter().copied().collect();
        if set.len() != n {
            return Err(Error::NotDistributive("order is not antisymmetric".into()));
        }
        let lattice = DLattice::from_closed(carrier, set);
        Ok((lattice, rep.into_iter().map(LatElem).collect()))
    }

    /// The `n`-element chain `⊥ < … < ⊤`.
    pub fn chain(n: usize) -> Self {
        DLattice::downsets_of(&FinPoset::chain(n.saturating_sub(1)))
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in canonical order: by size of the subset, then by bits.
    pub fn elements(&self) -> &[LatElem] {
        &self.elements
    }

    pub fn elem(&self, i: usize) -> LatElem {
        self.elements[i]
    }

    pub fn contains(&self, e: LatElem) -> bool {
        self.index.contains_key(&e.0)
    }

    pub fn check(&self, e: LatElem) -> Result<LatElem> {
        if self.contains(e) {
            Ok(e)
        } else {
            Err(Error::ElementNotInLattice)
        }
    }

    pub fn index_of(&self, e: LatElem) -> Result<usize> {
        self.index.get(&e.0).copied().ok_or(Error::ElementNotInLattice)
    }

    pub fn top(&self) -> LatElem {
        *self.elements.last().expect("lattices are nonempty")
    }

    pub fn bottom(&self) -> LatElem {
        self.elements[0]
    }

    pub fn is_degenerate(&self) -> bool {
        self.len() == 1
    }

    pub fn meet(&self, a: LatElem, b: LatElem) -> LatElem {
        LatElem(a.0 & b.0)
    }

    pub fn join(&self, a: LatElem, b: LatElem) -> LatElem {
        LatElem(a.0 | b.0)
    }

    pub fn leq(&self, a: LatElem, b: LatElem) -> bool {
        a.0 & !b.0 == 0
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = LatElem>) -> LatElem {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = LatElem>) -> LatElem {
        xs.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    /// `↓a`, in canonical order.
    pub fn down(&self, a: LatElem) -> Vec<LatElem> {
        self.elements.iter().copied().filter(|&b| self.leq(b, a)).collect()
    }

    /// `↑a`, in canonical order.
    pub fn up(&self, a: LatElem) -> Vec<LatElem> {
        self.elements.iter().copied().filter(|&b| self.leq(a, b)).collect()
    }

    /// The complement of `a`, if it has one (unique in a distributive lattice).
    pub fn complement(&self, a: LatElem) -> Option<LatElem> {
        let (top, bottom) = (self.top(), self.bottom());
        self.elements.iter().copied().find(|&y| self.join(a, y) == top && self.meet(a, y) == bottom)
    }

    pub fn is_boolean(&self) -> bool {
        self.elements.iter().all(|&a| self.complement(a).is_some())
    }

    /// Join-irreducible elements (not `⊥`, not a join of strictly smaller ones).
    pub fn join_irreducibles(&self) -> Vec<LatElem> {
        self.elements
            .iter()
            .copied()
            .filter(|&x| {
                x != self.bottom() && {
                    let below = self.join_all(self.elements.iter().copied().filter(|&y| y != x && self.leq(y, x)));
                    below != x
                }
            })
            .collect()
    }

    /// Exhaustive check of the lattice laws and distributivity.
    pub fn check_laws(&self) -> Vec<String> {
        let mut out = Vec::new();
        for &a in &self.elements {
            for &b in &self.elements {
                if !self.contains(self.meet(a, b)) || !self.contains(self.join(a, b)) {
                    out.push(format!("not closed at {}, {}", self.label(a), self.label(b)));
                }
                for &c in &self.elements {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        out.push(format!("distributivity fails at {}", self.label(a)));
                    }
                }
            }
        }
        out
    }

    /// Human-readable form of `e` as a set of carrier labels.
    pub fn label(&self, e: LatElem) -> String {
        let names: Vec<&str> = bits(e.0).map(|i| self.carrier[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn carrier_labels(&self, e: LatElem) -> Vec<String> {
        bits(e.0).map(|i| self.carrier[i].clone()).collect()
    }
}

/// A map between finite distributive lattices, stored as a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeHom {
    source: Arc<DLattice>,
    target: Arc<DLattice>,
    table: Vec<LatElem>,
}

impl LatticeHom {
    pub fn new(source: Arc<DLattice>, target: Arc<DLattice>, f: impl Fn(LatElem) -> LatElem) -> Result<Self> {
        let table = source.elements().iter().map(|&e| target.check(f(e))).collect::<Result<Vec<_>>>()?;
        Ok(LatticeHom { source, target, table })
    }

    pub fn identity(l: Arc<DLattice>) -> Self {
        let table = l.elements().to_vec();
        LatticeHom { source: l.clone(), target: l, table }
    }

    pub fn source(&self) -> &Arc<DLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DLattice> {
        &self.target
    }

    pub fn apply(&self, e: LatElem) -> Result<LatElem> {
        Ok(self.table[self.source.index_of(e)?])
    }

    /// Image of a set of source elements.
    pub fn image(&self, xs: &[LatElem]) -> Result<Vec<LatElem>> {
        let mut out: Vec<LatElem> = xs.iter().map(|&x| self.apply(x)).collect::<Result<_>>()?;
        out.sort_by_key(sort_key);
        out.dedup();
        Ok(out)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &LatticeHom) -> Result<LatticeHom> {
        if *self.target != *next.source {
            return Err(Error::MismatchedLattice);
        }
        let table = self.table.iter().map(|&e| next.apply(e)).collect::<Result<_>>()?;
        Ok(LatticeHom { source: self.source.clone(), target: next.target.clone(), table })
    }

    /// Failures of `⊤`, `⊥`, `∧`, `∨` preservation.
    pub fn check_preserves(&self) -> Vec<String> {
        let (s, t) = (&self.source, &self.target);
        let f = |e| self.apply(e).expect("source element");
        let mut out = Vec::new();
        if f(s.top()) != t.top() {
            out.push("top not preserved".into());
        }
        if f(s.bottom()) != t.bottom() {
            out.push("bottom not preserved".into());
        }
        for &a in s.elements() {
            for &b in s.elements() {
                if f(s.meet(a, b)) != t.meet(f(a), f(b)) {
                    out.push(format!("meet not preserved at {}, {}", s.label(a), s.label(b)));
                }
                if f(s.join(a, b)) != t.join(f(a), f(b)) {
                    out.push(format!("join not preserved at {}, {}", s.label(a), s.label(b)));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn chain_has_expected_shape() {
        let c = DLattice::chain(3);
        assert_eq!(c.len(), 3);
        assert!(!c.is_boolean());
        assert_eq!(c.join_irreducibles().len(), 2);
    }

    #[test]
    fn powerset_is_boolean() {
        let b = DLattice::powerset(names(3)).unwrap();
        assert_eq!(b.len(), 8);
        assert!(b.is_boolean());
        assert!(b.check_laws().is_empty());
    }

    #[test]
    fn from_sets_rejects_unclosed_family() {
        assert!(DLattice::from_sets(names(2), [0b00, 0b01, 0b10, 0b11]).is_ok());
        assert!(matches!(DLattice::from_sets(names(2), [0b00, 0b01, 0b10]), Err(Error::NotDistributive(_))));
    }

    #[test]
    fn from_order_rejects_diamond_m3() {
        // ⊥ < a, b, c < ⊤ is modular but not distributive.
        let leq = |x: usize, y: usize| x == y || x == 0 || y == 4;
        assert!(matches!(DLattice::from_order(&names(5), leq), Err(Error::NotDistributive(_))));
    }

    #[test]
    fn from_order_of_square() {
        // ⊥ < a, b < ⊤ is the Boolean algebra 2^2.
        let leq = |x: usize, y: usize| x == y || x == 0 || y == 3;
        let (l, rep) = DLattice::from_order(&names(4), leq).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.is_boolean());
        assert_eq!(rep[0], l.bottom());
        assert_eq!(rep[3], l.top());
    }

    #[test]
    fn generated_closes_under_union_and_intersection() {
        let l = DLattice::generated(names(3), [0b011, 0b110]).unwrap();
        let got: Vec<u64> = l.elements().iter().map(|e| e.bits()).collect();
        assert_eq!(got, vec![0b010, 0b011, 0b110, 0b111]);
    }

    #[test]
    fn hom_composition() {
        let b = Arc::new(DLattice::powerset(names(2)).unwrap());
        let id = LatticeHom::identity(b.clone());
        assert!(id.check_preserves().is_empty());
        assert_eq!(id.then(&id).unwrap(), id);
    }
}

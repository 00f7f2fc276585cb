//! Finite posets of at most 64 elements, stored as bitmask rows.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub const MAX_POSET: usize = 64;

/// Iterate the indices of the set bits of `mask`, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// A finite partial order. `below[i]` is the set of `j` with `j <= i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    labels: Vec<String>,
    below: Vec<u64>,
}

impl FinPoset {
    /// Build from a generating relation `(lo, hi)` meaning `lo <= hi`.
    ///
    /// The reflexive-transitive closure is taken; a cycle through distinct
    /// elements is reported as an antisymmetry violation.
    pub fn new(labels: Vec<String>, generators: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_POSET {
            return Err(Error::TooLarge { what: "poset".into(), size: n, max: MAX_POSET });
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate element `{l}`")));
            }
        }
        let mut below: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(lo, hi) in generators {
            if lo >= n || hi >= n {
                return Err(Error::InvalidPoset(format!("relation index out of range: ({lo}, {hi})")));
            }
            below[hi] |= 1 << lo;
        }
        // Warshall closure on bitmask rows.
        for k in 0..n {
            for i in 0..n {
                if below[i] >> k & 1 == 1 {
                    below[i] |= below[k];
                }
            }
        }
        for i in 0..n {
            for j in bits(below[i]) {
                if j != i && below[j] >> i & 1 == 1 {
                    return Err(Error::InvalidPoset(format!(
                        "antisymmetry fails: `{}` <= `{}` <= `{}`",
                        labels[i], labels[j], labels[i]
                    )));
                }
            }
        }
        Ok(FinPoset { labels, below })
    }

    /// Build from a full order predicate (closure is still applied).
    pub fn from_leq(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && leq(i, j)).collect();
        FinPoset::new(labels, &pairs)
    }

    /// Build from labelled generating pairs.
    pub fn from_pairs(labels: Vec<String>, le: &[(String, String)]) -> Result<Self> {
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let lookup = |l: &String| {
            index.get(l.as_str()).copied().ok_or_else(|| Error::InvalidPoset(format!("unknown element `{l}`")))
        };
        let pairs = le.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>>>()?;
        FinPoset::new(labels, &pairs)
    }

    pub fn chain(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinPoset::new(labels, &pairs).expect("a chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        FinPoset::new((0..n).map(|i| i.to_string()).collect(), &[]).expect("an antichain is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j] >> i & 1 == 1
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// `↓i` as a mask.
    pub fn down(&self, i: usize) -> u64 {
        self.below[i]
    }

    /// `↑i` as a mask.
    pub fn up(&self, i: usize) -> u64 {
        (0..self.len()).filter(|&j| self.leq(i, j)).fold(0, |m, j| m | 1 << j)
    }

    pub fn down_closure(&self, mask: u64) -> u64 {
        bits(mask).fold(0, |m, i| m | self.below[i])
    }

    pub fn up_closure(&self, mask: u64) -> u64 {
        bits(mask).fold(0, |m, i| m | self.up(i))
    }

    pub fn is_downset(&self, mask: u64) -> bool {
        self.down_closure(mask) == mask
    }

    pub fn is_upset(&self, mask: u64) -> bool {
        self.up_closure(mask) == mask
    }

    /// Every pair in `mask` has an upper bound inside `mask`.
    pub fn is_directed(&self, mask: u64) -> bool {
        bits(mask).all(|i| bits(mask).all(|j| bits(mask).any(|k| self.leq(i, k) && self.leq(j, k))))
    }

    /// Greatest element of `mask`, if there is one.
    pub fn greatest(&self, mask: u64) -> Option<usize> {
        bits(mask).find(|&k| self.below[k] & mask == mask)
    }

    pub fn least(&self, mask: u64) -> Option<usize> {
        bits(mask).find(|&k| bits(mask).all(|j| self.leq(k, j)))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.least(self.full_mask())
    }

    pub fn top(&self) -> Option<usize> {
        self.greatest(self.full_mask())
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| (0..self.len()).all(|j| !self.lt(i, j))).collect()
    }

    /// Covering pairs `(lo, hi)` of the Hasse diagram.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for hi in 0..n {
            for lo in bits(self.below[hi]) {
                if lo != hi && !(0..n).any(|m| self.lt(lo, m) && self.lt(m, hi)) {
                    out.push((lo, hi));
                }
            }
        }
        out.sort();
        out
    }

    /// Indices in a linear extension (every element after everything below it).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.below[i].count_ones(), i));
        order
    }

    /// All down-sets, including the empty one, sorted by `(size, mask)`.
    pub fn downsets(&self) -> Vec<u64> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        self.downsets_rec(&order, 0, 0, &mut out);
        out.sort_by_key(|&m| (m.count_ones(), m));
        out
    }

    fn downsets_rec(&self, order: &[usize], pos: usize, cur: u64, out: &mut Vec<u64>) {
        if pos == order.len() {
            out.push(cur);
            return;
        }
        let x = order[pos];
        self.downsets_rec(order, pos + 1, cur, out);
        let strictly_below = self.below[x] & !(1 << x);
        if strictly_below & cur == strictly_below {
            self.downsets_rec(order, pos + 1, cur | 1 << x, out);
        }
    }

    /// All up-sets, sorted by `(size, mask)`.
    pub fn upsets(&self) -> Vec<u64> {
        let full = self.full_mask();
        let mut out: Vec<u64> = self.downsets().into_iter().map(|d| full & !d).collect();
        out.sort_by_key(|&m| (m.count_ones(), m));
        out
    }

    /// The ideals (nonempty directed down-sets), sorted by `(size, mask)`.
    ///
    /// A finite directed set has a greatest element, so the ideals are the
    /// principal down-sets; `oracle::poset_ideals` cross-checks this against
    /// a filter over all down-sets.
    pub fn ideals(&self) -> Vec<PosetIdeal> {
        let mut out: Vec<PosetIdeal> = (0..self.len()).map(|i| PosetIdeal { mask: self.below[i], top: i }).collect();
        out.sort_by_key(|id| (id.mask.count_ones(), id.mask));
        out
    }

    /// The ideal with the given member mask.
    pub fn ideal(&self, mask: u64) -> Option<PosetIdeal> {
        let top = self.greatest(mask)?;
        (self.below[top] == mask).then_some(PosetIdeal { mask, top })
    }

    /// The sub-poset on `mask`; returns it together with the original indices.
    pub fn restrict(&self, mask: u64) -> (FinPoset, Vec<usize>) {
        let keep: Vec<usize> = bits(mask).collect();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let sub = FinPoset::from_leq(labels, |a, b| self.leq(keep[a], keep[b])).expect("sub-poset of a poset");
        (sub, keep)
    }

    /// Whether `f` (indexed by elements of `self`) is monotone into `target`.
    pub fn is_monotone_into(&self, f: &[usize], target: &FinPoset) -> bool {
        f.len() == self.len()
            && f.iter().all(|&x| x < target.len())
            && (0..self.len()).all(|i| bits(self.below[i]).all(|j| target.leq(f[j], f[i])))
    }

    /// Every monotone map `self -> target`, in lexicographic order.
    pub fn monotone_maps_into(&self, target: &FinPoset) -> Vec<Vec<usize>> {
        let order = self.linear_extension();
        let mut out = Vec::new();
        let mut f = vec![usize::MAX; self.len()];
        self.monotone_rec(target, &order, 0, &mut f, &mut out);
        out.sort();
        out
    }

    fn monotone_rec(&self, target: &FinPoset, order: &[usize], pos: usize, f: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == order.len() {
            out.push(f.clone());
            return;
        }
        let x = order[pos];
        for y in 0..target.len() {
            // Everything below x is already assigned.
            if bits(self.below[x]).all(|j| j == x || target.leq(f[j], y)) {
                f[x] = y;
                self.monotone_rec(target, order, pos + 1, f, out);
            }
        }
        f[x] = usize::MAX;
    }
}

/// A nonempty, down-closed, directed subset of a [`FinPoset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetIdeal {
    mask: u64,
    top: usize,
}

impl PosetIdeal {
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// The greatest element; every finite ideal is principal.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    pub fn members(&self) -> impl Iterator<Item = usize> {
        bits(self.mask)
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_subset(&self, other: &PosetIdeal) -> bool {
        self.mask & !other.mask == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn closure_and_antisymmetry() {
        let p = FinPoset::new(labels(&["a", "b", "c"]), &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
        let err = FinPoset::new(labels(&["a", "b"]), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidPoset(_)));
    }

    #[test]
    fn ideals_of_chain() {
        let p = FinPoset::chain(2);
        let ids: Vec<u64> = p.ideals().iter().map(|i| i.mask()).collect();
        assert_eq!(ids, vec![0b01, 0b11]);
    }

    #[test]
    fn antichain_with_bottom_has_three_ideals() {
        let p = FinPoset::new(labels(&["bot", "a", "b"]), &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(p.ideals().len(), 3);
        assert!(!p.is_directed(0b111));
    }

    #[test]
    fn downsets_of_antichain() {
        assert_eq!(FinPoset::antichain(3).downsets().len(), 8);
        assert_eq!(FinPoset::chain(3).downsets().len(), 4);
    }

    #[test]
    fn monotone_maps_count() {
        // Monotone maps 2-chain -> 2-chain: 00, 01, 11.
        assert_eq!(FinPoset::chain(2).monotone_maps_into(&FinPoset::chain(2)).len(), 3);
        let f = vec![1, 0];
        assert!(!FinPoset::chain(2).is_monotone_into(&f, &FinPoset::chain(2)));
    }

    #[test]
    fn covers_of_chain() {
        assert_eq!(FinPoset::chain(3).covers(), vec![(0, 1), (1, 2)]);
    }
}

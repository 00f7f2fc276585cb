//! Brute-force reference enumerations used to cross-check the library.
//!
//! Everything here works straight from the definitions over explicit subsets
//! (bit masks over element indices) and shares no search code with the rest of
//! the crate. Sizes are therefore limited to lattices of at most 64 elements.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{sign_samples, AlgElement, FinCommAlgebra};
use crate::bundle::ContextDiagram;
use crate::lattice::{DLattice, LatElem};
use crate::poset::{bits, FinPoset};

/// Element-index tables of a finite lattice.
struct Table {
    n: usize,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    top: usize,
    bot: usize,
}

impl Table {
    fn new(l: &DLattice) -> Self {
        let els = l.elements();
        let n = els.len();
        assert!(n <= 64, "oracle lattices have at most 64 elements");
        let idx = |e: LatElem| els.iter().position(|&x| x == e).expect("closed");
        let grid = |f: &dyn Fn(LatElem, LatElem) -> usize| -> Vec<Vec<usize>> {
            els.iter().map(|&a| els.iter().map(|&b| f(a, b)).collect()).collect()
        };
        Table {
            n,
            leq: els.iter().map(|&a| els.iter().map(|&b| a.bits() & !b.bits() == 0).collect()).collect(),
            meet: grid(&|a, b| idx(LatElem::from_bits(a.bits() & b.bits()))),
            join: grid(&|a, b| idx(LatElem::from_bits(a.bits() | b.bits()))),
            top: idx(l.top()),
            bot: idx(l.bottom()),
        }
    }

    fn wi(&self, a2: usize, a: usize) -> bool {
        (0..self.n).any(|y| self.join[a][y] == self.top && self.meet[a2][y] == self.bot)
    }

    fn has(mask: u64, i: usize) -> bool {
        mask >> i & 1 == 1
    }

    /// All subsets closed upward (`up = true`) or downward.
    fn closed_sets(&self, up: bool) -> Vec<u64> {
        let mut out = Vec::new();
        self.closed_rec(up, 0, 0, &mut out);
        out
    }

    /// Elements are visited so that everything an element forces (above it
    /// for up-sets, below it for down-sets) is decided first.
    fn closed_rec(&self, up: bool, k: usize, mask: u64, out: &mut Vec<u64>) {
        if k == self.n {
            out.push(mask);
            return;
        }
        let i = if up { self.n - 1 - k } else { k };
        self.closed_rec(up, k + 1, mask, out);
        let fits = (0..self.n).all(|j| {
            let forced = if up { self.leq[i][j] } else { self.leq[j][i] };
            !forced || j == i || Table::has(mask, j)
        });
        if fits {
            self.closed_rec(up, k + 1, mask | 1 << i, out);
        }
    }

    fn is_closed(&self, mask: u64, up: bool) -> bool {
        (0..self.n).all(|i| {
            !Table::has(mask, i) || (0..self.n).all(|j| !(if up { self.leq[i][j] } else { self.leq[j][i] }) || Table::has(mask, j))
        })
    }

    fn filters(&self) -> Vec<u64> {
        self.closed_sets(true)
            .into_iter()
            .filter(|&m| self.is_closed(m, true))
            .filter(|&m| Table::has(m, self.top))
            .filter(|&m| (0..self.n).all(|a| (0..self.n).all(|b| !(Table::has(m, a) && Table::has(m, b)) || Table::has(m, self.meet[a][b]))))
            .collect()
    }

    fn ideals(&self) -> Vec<u64> {
        self.closed_sets(false)
            .into_iter()
            .filter(|&m| self.is_closed(m, false))
            .filter(|&m| Table::has(m, self.bot))
            .filter(|&m| (0..self.n).all(|a| (0..self.n).all(|b| !(Table::has(m, a) && Table::has(m, b)) || Table::has(m, self.join[a][b]))))
            .collect()
    }
}

fn to_elems(l: &DLattice, mask: u64) -> Vec<LatElem> {
    bits(mask).map(|i| l.elem(i)).collect()
}

/// Squares `x·x*` of the sign samples, closed under pairwise sums `rounds`
/// times. Positive rational scaling is left implicit.
pub fn cone_closure(a: &Arc<FinCommAlgebra>, rounds: usize) -> Vec<AlgElement> {
    let mut cone: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut elems: Vec<AlgElement> = Vec::new();
    let add = |x: AlgElement, cone: &mut BTreeSet<Vec<String>>, elems: &mut Vec<AlgElement>| {
        if cone.insert(x.values().iter().map(|v| v.to_string()).collect()) {
            elems.push(x);
        }
    };
    for x in sign_samples(a) {
        add(x.mul(&x.star()).expect("same parent"), &mut cone, &mut elems);
    }
    for _ in 0..rounds {
        let snapshot = elems.clone();
        for x in &snapshot {
            for y in &snapshot {
                add(x.add(y).expect("same parent"), &mut cone, &mut elems);
            }
        }
    }
    elems
}

/// `a′ ≪ a`, straight from the definition.
pub fn well_inside(l: &DLattice, a2: LatElem, a: LatElem) -> bool {
    l.elements().iter().any(|&y| l.join(a, y) == l.top() && l.meet(a2, y) == l.bottom())
}

/// Normality, straight from the definition: every cover `a ∨ b = ⊤` has
/// `x, y` with `a ∨ y = x ∨ b = ⊤` and `x ∧ y = ⊥`.
pub fn is_normal(l: &DLattice) -> bool {
    let t = Table::new(l);
    (0..t.n).all(|a| {
        (0..t.n).all(|b| {
            t.join[a][b] != t.top
                || (0..t.n).any(|x| {
                    (0..t.n).any(|y| t.join[a][y] == t.top && t.join[x][b] == t.top && t.meet[x][y] == t.bot)
                })
        })
    })
}

/// Proper prime filters `F` such that each `a ∈ F` has some `a′ ∈ F` with
/// `a′ ≪ a`; each as its sorted member list.
pub fn regular_prime_filters(l: &DLattice) -> Vec<Vec<LatElem>> {
    let t = Table::new(l);
    t.filters()
        .into_iter()
        .filter(|&m| !Table::has(m, t.bot))
        .filter(|&m| {
            (0..t.n).all(|a| (0..t.n).all(|b| !Table::has(m, t.join[a][b]) || Table::has(m, a) || Table::has(m, b)))
        })
        .filter(|&m| bits(m).all(|a| bits(m).any(|a2| t.wi(a2, a))))
        .map(|m| to_elems(l, m))
        .collect()
}

/// Ideals `I` with each `a ∈ I` below some `a′ ∈ I`, `a ≪ a′`.
pub fn rounded_ideals(l: &DLattice) -> Vec<Vec<LatElem>> {
    let t = Table::new(l);
    t.ideals().into_iter().filter(|&m| bits(m).all(|a| bits(m).any(|a2| t.wi(a, a2)))).map(|m| to_elems(l, m)).collect()
}

/// Ideals `I` such that `⇓a ⊆ I` implies `a ∈ I`.
pub fn regular_ideals(l: &DLattice) -> Vec<Vec<LatElem>> {
    let t = Table::new(l);
    t.ideals()
        .into_iter()
        .filter(|&m| (0..t.n).all(|a| Table::has(m, a) || !(0..t.n).all(|a2| !t.wi(a2, a) || Table::has(m, a2))))
        .map(|m| to_elems(l, m))
        .collect()
}

/// All ideals (nonempty down-closed join-closed subsets).
pub fn lattice_ideals(l: &DLattice) -> Vec<Vec<LatElem>> {
    Table::new(l).ideals().into_iter().map(|m| to_elems(l, m)).collect()
}

/// Every partial order on `n ≤ 4` labelled points, from all relations.
pub fn all_posets(n: usize) -> Vec<FinPoset> {
    assert!(n <= 4, "labelled posets are enumerated only up to four points");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut out = Vec::new();
    for m in 0u64..1 << pairs.len() {
        let rel = |i: usize, j: usize| i == j || pairs.iter().position(|&p| p == (i, j)).is_some_and(|k| m >> k & 1 == 1);
        let antisymmetric = (0..n).all(|i| (0..n).all(|j| i == j || !(rel(i, j) && rel(j, i))));
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel(i, j) && rel(j, k)) || rel(i, k))));
        if antisymmetric && transitive {
            out.push(FinPoset::from_leq(labels.clone(), rel).expect("partial order"));
        }
    }
    out
}

/// Bell numbers from the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for &x in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Nonempty directed down-sets of a poset, from all subsets.
pub fn poset_ideals(p: &FinPoset) -> Vec<u64> {
    let n = p.len();
    assert!(n <= 20, "subset enumeration of at most 20 points");
    (1u64..1 << n)
        .filter(|&m| bits(m).all(|i| (0..n).all(|j| !p.leq(j, i) || m >> j & 1 == 1)))
        .filter(|&m| bits(m).all(|i| bits(m).all(|j| bits(m).any(|k| p.leq(i, k) && p.leq(j, k)))))
        .collect()
}

/// A spectrum point as `(ideal mask, [(context, filter members)])`.
pub type BrutePoint = (u64, Vec<(usize, Vec<LatElem>)>);

/// Points of the external spectrum: an ideal and a regular prime filter per
/// member, compatible along every inclusion inside the ideal.
pub fn external_points(d: &ContextDiagram) -> Vec<BrutePoint> {
    let filters: Vec<Vec<Vec<LatElem>>> = (0..d.len()).map(|c| regular_prime_filters(d.la(c).lattice())).collect();
    let mut out = Vec::new();
    for ideal in poset_ideals(d.poset()) {
        let members: Vec<usize> = bits(ideal).collect();
        let mut choice = vec![0usize; members.len()];
        loop {
            if members.iter().any(|&c| filters[c].is_empty()) {
                break;
            }
            let family: Vec<(usize, Vec<LatElem>)> =
                members.iter().zip(&choice).map(|(&c, &k)| (c, filters[c][k].clone())).collect();
            let compatible = family.iter().all(|(c, fc)| {
                family.iter().all(|(e, fe)| {
                    *c == *e
                        || !d.poset().leq(*c, *e)
                        || d.la(*c).lattice().elements().iter().all(|&a| {
                            let ha = d.lat_hom(*c, *e).expect("comparable").apply(a).expect("own");
                            fc.contains(&a) == fe.contains(&ha)
                        })
                })
            });
            if compatible {
                out.push((ideal, family));
            }
            // Odometer over the product of filter choices.
            let mut k = 0;
            while k < members.len() {
                choice[k] += 1;
                if choice[k] < filters[members[k]].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == members.len() {
                break;
            }
        }
    }
    out
}

/// Opens of the external spectrum: a rounded ideal per context with
/// `L_{CE}(U_C) ⊆ U_E` for `C ≤ E`.
pub fn external_opens(d: &ContextDiagram) -> Vec<Vec<Vec<LatElem>>> {
    let rounded: Vec<Vec<Vec<LatElem>>> = (0..d.len()).map(|c| rounded_ideals(d.la(c).lattice())).collect();
    let mut out = Vec::new();
    let mut fam: Vec<Vec<LatElem>> = Vec::new();
    opens_rec(d, &rounded, &mut fam, &mut out);
    out
}

fn opens_rec(d: &ContextDiagram, rounded: &[Vec<Vec<LatElem>>], fam: &mut Vec<Vec<LatElem>>, out: &mut Vec<Vec<Vec<LatElem>>>) {
    let c = fam.len();
    if c == d.len() {
        out.push(fam.clone());
        return;
    }
    for r in &rounded[c] {
        let ok = (0..c).all(|e| {
            let image_in = |lo: usize, u: &Vec<LatElem>, hi: usize, v: &Vec<LatElem>| {
                u.iter().all(|&a| v.contains(&d.lat_hom(lo, hi).expect("comparable").apply(a).expect("own")))
            };
            (!d.poset().leq(e, c) || image_in(e, &fam[e], c, r)) && (!d.poset().leq(c, e) || image_in(c, r, e, &fam[e]))
        });
        if ok {
            fam.push(r.clone());
            opens_rec(d, rounded, fam, out);
            fam.pop();
        }
    }
}

/// Points of `𝕊^Σ` as `(ideal mask, [(context, ideal members)])`: an ideal of
/// each `L_C` with `(C, a) ∈ U ⇔ (E, L_{CE}(a)) ∈ U` and every `(C, a) ∈ U`
/// well inside some `(E, b) ∈ U`.
pub fn sier_points(d: &ContextDiagram) -> Vec<BrutePoint> {
    let ideals: Vec<Vec<Vec<LatElem>>> = (0..d.len()).map(|c| lattice_ideals(d.la(c).lattice())).collect();
    let mut out = Vec::new();
    for ideal in poset_ideals(d.poset()) {
        let members: Vec<usize> = bits(ideal).collect();
        let mut fam: Vec<(usize, Vec<LatElem>)> = Vec::new();
        sier_rec(d, &ideals, &members, &mut fam, &mut |f| out.push((ideal, f.to_vec())));
    }
    out
}

fn sier_rec(
    d: &ContextDiagram,
    ideals: &[Vec<Vec<LatElem>>],
    members: &[usize],
    fam: &mut Vec<(usize, Vec<LatElem>)>,
    emit: &mut dyn FnMut(&[(usize, Vec<LatElem>)]),
) {
    let k = fam.len();
    if k == members.len() {
        let rounded = fam.iter().all(|(c, u)| {
            u.iter().all(|&a| {
                fam.iter().any(|(e, v)| {
                    d.poset().leq(*c, *e) && {
                        let ha = d.lat_hom(*c, *e).expect("comparable").apply(a).expect("own");
                        v.iter().any(|&b| well_inside(d.la(*e).lattice(), ha, b))
                    }
                })
            })
        });
        if rounded {
            emit(fam);
        }
        return;
    }
    let c = members[k];
    for u in &ideals[c] {
        let ok = fam.iter().all(|(e, v)| {
            let check = |lo: usize, ul: &Vec<LatElem>, hi: usize, uh: &Vec<LatElem>| {
                d.la(lo).lattice().elements().iter().all(|&a| {
                    ul.contains(&a) == uh.contains(&d.lat_hom(lo, hi).expect("comparable").apply(a).expect("own"))
                })
            };
            if d.poset().leq(*e, c) {
                check(*e, v, c, u)
            } else if d.poset().leq(c, *e) {
                check(c, u, *e, v)
            } else {
                true
            }
        });
        if ok {
            fam.push((c, u.clone()));
            sier_rec(d, ideals, members, fam, emit);
            fam.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_of_squares_is_the_nonnegative_orthant() {
        use crate::algebra::grid_elements;
        use crate::algebra::GaussRat;
        let a = Arc::new(FinCommAlgebra::standard(2).unwrap());
        let cone = cone_closure(&a, 1);
        assert!(cone.iter().all(|x| x.is_positive().unwrap()));
        let entries: Vec<GaussRat> = (-1..=2).map(GaussRat::from_int).collect();
        for x in grid_elements(&a, &entries) {
            if x.values().iter().all(|v| *v.re() >= crate::algebra::int(0) && *v.re() <= crate::algebra::int(2)) {
                assert!(cone.contains(&x), "{x}");
            }
        }
    }

    #[test]
    fn bell_triangle() {
        assert_eq!((0..=6).map(bell).collect::<Vec<_>>(), vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn labelled_poset_counts() {
        assert_eq!((0..=4).map(|n| all_posets(n).len()).collect::<Vec<_>>(), vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn chain_of_three() {
        let l = DLattice::chain(3);
        assert!(is_normal(&l));
        assert_eq!(regular_prime_filters(&l).len(), 1);
        assert_eq!(rounded_ideals(&l).len(), 2);
        assert_eq!(regular_ideals(&l).len(), 2);
        assert_eq!(lattice_ideals(&l).len(), 3);
    }

    #[test]
    fn boolean_square() {
        let l = DLattice::powerset(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(regular_prime_filters(&l).len(), 2);
        assert_eq!(rounded_ideals(&l).len(), 4);
    }
}

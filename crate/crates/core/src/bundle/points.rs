use std::sync::Arc;

use super::diagram::ContextDiagram;
use crate::error::{Error, Result};
use crate::lattice::{DLattice, LatElem};
use crate::par;
use crate::poset::{bits, PosetIdeal};
use crate::spectrum::{push_well_inside, regular_prime_filters, well_inside, PrimeFilter};

/// A point `(I, x)` of the external spectrum: an ideal of contexts and a
/// compatible regular prime filter on each `L_C`, `C ∈ I`.
#[derive(Clone, Debug)]
pub struct SpectrumPoint {
    diagram: Arc<ContextDiagram>,
    ideal: PosetIdeal,
    filters: Vec<(usize, PrimeFilter)>,
}

impl PartialEq for SpectrumPoint {
    fn eq(&self, other: &Self) -> bool {
        self.ideal == other.ideal && self.generators() == other.generators()
    }
}

impl Eq for SpectrumPoint {}

impl SpectrumPoint {
    pub fn diagram(&self) -> &Arc<ContextDiagram> {
        &self.diagram
    }

    pub fn ideal(&self) -> PosetIdeal {
        self.ideal
    }

    pub fn filter(&self, c: usize) -> Option<&PrimeFilter> {
        self.filters.iter().find(|(d, _)| *d == c).map(|(_, f)| f)
    }

    pub fn filters(&self) -> &[(usize, PrimeFilter)] {
        &self.filters
    }

    /// Least element of each filter, by context.
    pub fn generators(&self) -> Vec<(usize, LatElem)> {
        self.filters.iter().map(|(c, f)| (*c, f.generator())).collect()
    }

    /// Membership of the subbasic open `(C, a)`.
    pub fn contains(&self, c: usize, a: LatElem) -> bool {
        self.filter(c).is_some_and(|f| f.contains(a))
    }

    /// The outcome picked at context `c`, when `L_C` is a powerset.
    pub fn outcome(&self, c: usize) -> Option<&str> {
        let g = self.filter(c)?.generator().bits();
        (g.count_ones() == 1).then(|| self.diagram.algebra(c).outcomes()[g.trailing_zeros() as usize].as_str())
    }
}

/// `x_C ∋ a ⇔ x_D ∋ L_{CD}(a)` for every `a ∈ L_C`.
fn compatible(d: &ContextDiagram, c: usize, fc: &PrimeFilter, e: usize, fe: &PrimeFilter) -> Result<bool> {
    let h = d.lat_hom(c, e)?;
    for &a in d.la(c).lattice().elements() {
        if fc.contains(a) != fe.contains(h.apply(a)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Points over one ideal, by backtracking over the contexts of the ideal.
pub fn points_over(d: &Arc<ContextDiagram>, ideal: PosetIdeal) -> Result<Vec<SpectrumPoint>> {
    let members: Vec<usize> = ideal.members().collect();
    let choices: Vec<Vec<PrimeFilter>> = members.iter().map(|&c| regular_prime_filters(d.la(c).lattice())).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, PrimeFilter)> = Vec::new();
    points_rec(d, &members, &choices, &mut chosen, &mut |filters| {
        out.push(SpectrumPoint { diagram: d.clone(), ideal, filters: filters.to_vec() })
    })?;
    Ok(out)
}

fn points_rec(
    d: &ContextDiagram,
    members: &[usize],
    choices: &[Vec<PrimeFilter>],
    chosen: &mut Vec<(usize, PrimeFilter)>,
    emit: &mut dyn FnMut(&[(usize, PrimeFilter)]),
) -> Result<()> {
    let k = chosen.len();
    if k == members.len() {
        emit(chosen);
        return Ok(());
    }
    let c = members[k];
    for f in &choices[k] {
        let mut ok = true;
        for (e, fe) in chosen.iter() {
            let fits = if d.poset().leq(*e, c) {
                compatible(d, *e, fe, c, f)?
            } else if d.poset().leq(c, *e) {
                compatible(d, c, f, *e, fe)?
            } else {
                true
            };
            if !fits {
                ok = false;
                break;
            }
        }
        if ok {
            chosen.push((c, f.clone()));
            points_rec(d, members, choices, chosen, emit)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// All points, grouped by ideal in the poset's ideal order.
pub fn external_points(d: &Arc<ContextDiagram>) -> Result<Vec<SpectrumPoint>> {
    let per_ideal = par::try_map(&d.ideals(), |&i| points_over(d, i))?;
    Ok(per_ideal.into_iter().flatten().collect())
}

/// Points over `ideal` read off the top context: each regular prime filter
/// `y` of `L_top` gives `x_C = L_{C,top}^{-1}(y)`.
pub fn points_via_top(d: &Arc<ContextDiagram>, ideal: PosetIdeal) -> Result<Vec<SpectrumPoint>> {
    let t = ideal.top();
    let mut out = Vec::new();
    for y in regular_prime_filters(d.la(t).lattice()) {
        let mut filters = Vec::new();
        for c in ideal.members() {
            let h = d.lat_hom(c, t)?;
            let l = d.la(c).lattice();
            let members: Vec<LatElem> =
                l.elements().iter().copied().filter(|&a| y.contains(h.apply(a).expect("own element"))).collect();
            let f = regular_prime_filters(l)
                .into_iter()
                .find(|f| f.members() == members)
                .ok_or_else(|| Error::diagram("inclusions", format!("preimage at `{}` is not a regular prime filter", d.label(c))))?;
            filters.push((c, f));
        }
        out.push(SpectrumPoint { diagram: d.clone(), ideal, filters });
    }
    Ok(out)
}

/// The colimit of the `L_C` over a directed ideal, built from the disjoint
/// union by identifying `(C, a)` with `(D, L_{CD}(a))`, ordered through any
/// common upper bound.
pub fn colimit_lattice(d: &ContextDiagram, ideal: PosetIdeal) -> Result<Arc<DLattice>> {
    let members: Vec<usize> = ideal.members().collect();
    let mut nodes: Vec<(usize, LatElem)> = Vec::new();
    for &c in &members {
        nodes.extend(d.la(c).lattice().elements().iter().map(|&a| (c, a)));
    }
    let index = |c: usize, a: LatElem| nodes.iter().position(|&n| n == (c, a)).expect("node");
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &c in &members {
        for &e in members.iter().filter(|&&e| e != c && d.poset().leq(c, e)) {
            let h = d.lat_hom(c, e)?;
            for &a in d.la(c).lattice().elements() {
                let (x, y) = (index(c, a), index(e, h.apply(a)?));
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..nodes.len() {
        if find(&mut parent, i) == i {
            reps.push(i);
        }
    }
    let upper_bound = |c: usize, e: usize| {
        members.iter().copied().find(|&u| d.poset().leq(c, u) && d.poset().leq(e, u)).expect("ideals are directed")
    };
    let leq = |i: usize, j: usize| {
        let ((c, a), (e, b)) = (nodes[reps[i]], nodes[reps[j]]);
        let u = upper_bound(c, e);
        let (hc, he) = (d.lat_hom(c, u).expect("c <= u"), d.lat_hom(e, u).expect("e <= u"));
        d.la(u).lattice().leq(hc.apply(a).expect("own"), he.apply(b).expect("own"))
    };
    let names: Vec<String> = reps.iter().map(|&r| format!("{}:{}", d.label(nodes[r].0), nodes[r].1.bits())).collect();
    let (l, _) = DLattice::from_order(&names, leq)?;
    Ok(Arc::new(l))
}

/// Per-ideal agreement of the direct enumeration with the top-context and
/// colimit shortcuts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimitCheck {
    pub ideal: PosetIdeal,
    pub direct: usize,
    pub via_top: usize,
    pub via_colimit: usize,
    pub same_points: bool,
}

impl ColimitCheck {
    pub fn ok(&self) -> bool {
        self.same_points && self.direct == self.via_top && self.direct == self.via_colimit
    }
}

pub fn check_colimit(d: &Arc<ContextDiagram>) -> Result<Vec<ColimitCheck>> {
    par::try_map(&d.ideals(), |&ideal| {
        let direct = points_over(d, ideal)?;
        let top = points_via_top(d, ideal)?;
        let colim = colimit_lattice(d, ideal)?;
        Ok(ColimitCheck {
            ideal,
            direct: direct.len(),
            via_top: top.len(),
            via_colimit: regular_prime_filters(&colim).len(),
            same_points: direct == top,
        })
    })
}

/// Conditions (1)-(3) of the points description plus the regularity repair:
/// whenever `b ≪ L_{CD}(a)` lies in `x_D`, some `a′ ≪ a` with
/// `b ≤ L_{CD}(a′)` lies in `x_C`.
pub fn check_point_conditions(pt: &SpectrumPoint) -> Result<Vec<String>> {
    let d = &pt.diagram;
    let mut out = Vec::new();
    for (c, f) in &pt.filters {
        if !pt.ideal.contains(*c) {
            out.push(format!("filter at `{}` outside the ideal", d.label(*c)));
        }
        if !regular_prime_filters(d.la(*c).lattice()).contains(f) {
            out.push(format!("filter at `{}` is not regular prime", d.label(*c)));
        }
    }
    for c in pt.ideal.members() {
        if pt.filter(c).is_none() {
            out.push(format!("no filter at `{}`", d.label(c)));
        }
    }
    for (c, fc) in &pt.filters {
        for (e, fe) in &pt.filters {
            if c == e || !d.poset().leq(*c, *e) {
                continue;
            }
            if !compatible(d, *c, fc, *e, fe)? {
                out.push(format!("filters at `{}` and `{}` are incompatible", d.label(*c), d.label(*e)));
                continue;
            }
            let (lc, le) = (d.la(*c).lattice(), d.la(*e).lattice());
            let h = d.lat_hom(*c, *e)?;
            for a in fc.members() {
                let ha = h.apply(a)?;
                for b in fe.members() {
                    if well_inside(le, b, ha)?.is_none() {
                        continue;
                    }
                    let a2 = push_well_inside(d.hom(*c, *e)?, d.la(*c), d.la(*e), a, b)?;
                    if well_inside(lc, a2, a)?.is_none() || !le.leq(b, h.apply(a2)?) || !fc.contains(a2) {
                        out.push(format!("regularity repair fails at `{}` for {}", d.label(*c), lc.label(a)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Specialization order of points from the subbasic opens `(C, a)`:
/// `p ⊑ q` iff every subbasic open containing `p` contains `q`.
pub fn point_specialization(points: &[SpectrumPoint]) -> Vec<Vec<bool>> {
    let opens_of = |p: &SpectrumPoint| -> Vec<(usize, LatElem)> {
        p.filters.iter().flat_map(|(c, f)| f.members().into_iter().map(move |a| (*c, a))).collect()
    };
    let sets: Vec<Vec<(usize, LatElem)>> = points.iter().map(opens_of).collect();
    par::map(&sets, |s| points.iter().map(|q| s.iter().all(|&(c, a)| q.contains(c, a))).collect())
}

/// Hasse diagram of a preorder given as a matrix: strict pairs with nothing
/// strictly between.
pub fn covering_pairs(le: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = le.len();
    let lt = |i: usize, j: usize| le[i][j] && !le[j][i];
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Contexts of `pt`'s ideal, as labels.
pub fn ideal_labels(d: &ContextDiagram, ideal: PosetIdeal) -> Vec<String> {
    bits(ideal.mask()).map(|c| d.label(c).to_string()).collect()
}

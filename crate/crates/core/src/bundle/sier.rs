use std::sync::Arc;

use super::diagram::ContextDiagram;
use super::opens::apply_fibre_map;
use crate::error::Result;
use crate::lattice::LatElem;
use crate::par;
use crate::poset::PosetIdeal;
use crate::spectrum::{rounded_ideals, well_inside, RoundedIdeal};

/// A point `(I, U)` of the exponential `𝕊^Σ` bundle: an ideal of contexts and
/// an ideal `U_C = ↓g_C` of each `L_C`, `C ∈ I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SierPoint {
    pub ideal: PosetIdeal,
    /// `(C, g_C)` for `C ∈ I`, in context order.
    pub family: Vec<(usize, LatElem)>,
}

impl SierPoint {
    pub fn generator(&self, c: usize) -> Option<LatElem> {
        self.family.iter().find(|(d, _)| *d == c).map(|&(_, g)| g)
    }

    /// `(C, a) ∈ U`.
    pub fn contains(&self, d: &ContextDiagram, c: usize, a: LatElem) -> bool {
        self.generator(c).is_some_and(|g| d.la(c).lattice().leq(a, g))
    }
}

/// Conditions (2) and (4) on a complete family; (1) and (3) hold by
/// construction.
fn satisfies(d: &ContextDiagram, fam: &[(usize, LatElem)]) -> Result<bool> {
    for &(c, gc) in fam {
        for &(e, ge) in fam {
            if c != e && d.poset().leq(c, e) {
                // (C, a) ∈ U ⇔ (E, L_{CE}(a)) ∈ U.
                let h = d.lat_hom(c, e)?;
                let (lc, le) = (d.la(c).lattice(), d.la(e).lattice());
                for &a in lc.elements() {
                    if lc.leq(a, gc) != le.leq(h.apply(a)?, ge) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    for &(c, gc) in fam {
        let lc = d.la(c).lattice();
        for a in lc.down(gc) {
            let mut found = false;
            'outer: for &(e, ge) in fam {
                if !d.poset().leq(c, e) {
                    continue;
                }
                let ha = d.lat_hom(c, e)?.apply(a)?;
                let le = d.la(e).lattice();
                for b in le.down(ge) {
                    if well_inside(le, ha, b)?.is_some() {
                        found = true;
                        break 'outer;
                    }
                }
            }
            if !found {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Points over one ideal by direct search over an ideal `↓g` of each `L_C`.
pub fn sier_points_over(d: &ContextDiagram, ideal: PosetIdeal) -> Result<Vec<SierPoint>> {
    let members: Vec<usize> = ideal.members().collect();
    let mut out = Vec::new();
    let mut fam: Vec<(usize, LatElem)> = Vec::new();
    sier_rec(d, &members, &mut fam, &mut |f| out.push(SierPoint { ideal, family: f.to_vec() }))?;
    Ok(out)
}

fn sier_rec(
    d: &ContextDiagram,
    members: &[usize],
    fam: &mut Vec<(usize, LatElem)>,
    emit: &mut dyn FnMut(&[(usize, LatElem)]),
) -> Result<()> {
    let k = fam.len();
    if k == members.len() {
        if satisfies(d, fam)? {
            emit(fam);
        }
        return Ok(());
    }
    let c = members[k];
    'choice: for &g in d.la(c).lattice().elements() {
        // Prune with condition (2) against already chosen comparable contexts.
        for &(e, ge) in fam.iter() {
            let (lo, glo, hi, ghi) = if d.poset().leq(e, c) {
                (e, ge, c, g)
            } else if d.poset().leq(c, e) {
                (c, g, e, ge)
            } else {
                continue;
            };
            let h = d.lat_hom(lo, hi)?;
            let (ll, lh) = (d.la(lo).lattice(), d.la(hi).lattice());
            for &a in ll.elements() {
                if ll.leq(a, glo) != lh.leq(h.apply(a)?, ghi) {
                    continue 'choice;
                }
            }
        }
        fam.push((c, g));
        sier_rec(d, members, fam, emit)?;
        fam.pop();
    }
    Ok(())
}

pub fn sier_points(d: &Arc<ContextDiagram>) -> Result<Vec<SierPoint>> {
    Ok(par::try_map(&d.ideals(), |&i| sier_points_over(d, i))?.into_iter().flatten().collect())
}

/// Over `↓T`, the points are the rounded ideals of `L_T`, pulled back to
/// each context.
pub fn sier_points_via_top(d: &ContextDiagram, ideal: PosetIdeal) -> Result<Vec<SierPoint>> {
    let t = ideal.top();
    let mut out = Vec::new();
    for r in rounded_ideals(d.la(t).lattice()) {
        let mut family = Vec::new();
        for c in ideal.members() {
            let (h, lc) = (d.lat_hom(c, t)?, d.la(c).lattice());
            let members: Vec<LatElem> = lc.elements().iter().copied().filter(|&a| r.contains(h.apply(a).expect("own"))).collect();
            family.push((c, lc.join_all(members)));
        }
        out.push(SierPoint { ideal, family });
    }
    Ok(out)
}

/// Outcome of [`check_opfibration_specialization`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpfibrationReport {
    pub points: usize,
    pub related_pairs: usize,
    pub mismatches: Vec<(usize, usize)>,
    /// Ideals where the direct search disagrees with `RIdl(L_top)`.
    pub fibre_mismatches: Vec<PosetIdeal>,
}

impl OpfibrationReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.fibre_mismatches.is_empty()
    }
}

/// Order the `𝕊^Σ` points two ways and compare: (a) by the subbasic opens
/// `{I : C ∈ I}` and `(C, a)`, (b) by ideal inclusion plus the fibre map
/// `RIdl(L_{T₁T₂})(U_{T₁}) ⊆ U_{T₂}` between the top contexts.
pub fn check_opfibration_specialization(d: &Arc<ContextDiagram>) -> Result<OpfibrationReport> {
    let pts = sier_points(d)?;
    let mut fibre_mismatches = Vec::new();
    for ideal in d.ideals() {
        let mut direct: Vec<&SierPoint> = pts.iter().filter(|p| p.ideal == ideal).collect();
        let mut via_top = sier_points_via_top(d, ideal)?;
        direct.sort_by_key(|p| p.family.clone());
        via_top.sort_by_key(|p| p.family.clone());
        if direct.len() != via_top.len() || direct.iter().zip(&via_top).any(|(a, b)| **a != *b) {
            fibre_mismatches.push(ideal);
        }
    }
    let idx: Vec<usize> = (0..pts.len()).collect();
    let rows = par::try_map(&idx, |&i| {
        let p = &pts[i];
        let mut row = Vec::new();
        for (j, q) in pts.iter().enumerate() {
            let subbasic = p.ideal.is_subset(&q.ideal)
                && p.family.iter().all(|&(c, g)| d.la(c).lattice().down(g).into_iter().all(|a| q.contains(d, c, a)));
            let fibrewise = p.ideal.is_subset(&q.ideal) && {
                let (t1, t2) = (p.ideal.top(), q.ideal.top());
                let pushed = apply_fibre_map(d, t1, t2, p.generator(t1).expect("top in ideal"))?;
                d.la(t2).lattice().leq(pushed, q.generator(t2).expect("top in ideal"))
            };
            row.push((j, subbasic, fibrewise));
        }
        Ok(row)
    })?;
    let mut related_pairs = 0;
    let mut mismatches = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        for (j, a, b) in row {
            related_pairs += usize::from(a);
            if a != b {
                mismatches.push((i, j));
            }
        }
    }
    Ok(OpfibrationReport { points: pts.len(), related_pairs, mismatches, fibre_mismatches })
}

/// The rounded ideal of `L_C` at context `c` of a point, if `c` is in its
/// ideal.
pub fn sier_ideal_at(d: &ContextDiagram, p: &SierPoint, c: usize) -> Option<RoundedIdeal> {
    RoundedIdeal::principal(d.la(c).lattice(), p.generator(c)?).ok()
}

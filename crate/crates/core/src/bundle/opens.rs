use std::sync::Arc;

use super::diagram::ContextDiagram;
use super::points::SpectrumPoint;
use crate::error::{Error, Result};
use crate::lattice::{DLattice, LatElem};
use crate::par;
use crate::poset::bits;
use crate::spectrum::{rounded_ideals, well_inside, RoundedIdeal};

/// An open of the external spectrum: one rounded ideal per context, stored
/// by generator, with `L_{CD}(U_C) ⊆ U_D` whenever `C ≤ D`.
#[derive(Clone, Debug)]
pub struct ExternalOpen {
    diagram: Arc<ContextDiagram>,
    family: Vec<LatElem>,
}

impl PartialEq for ExternalOpen {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
    }
}

impl Eq for ExternalOpen {}

impl ExternalOpen {
    /// Validate a family of rounded-ideal generators.
    pub fn new(diagram: Arc<ContextDiagram>, family: Vec<LatElem>) -> Result<Self> {
        if family.len() != diagram.len() {
            return Err(Error::diagram("open", format!("{} entries for {} contexts", family.len(), diagram.len())));
        }
        for (c, &g) in family.iter().enumerate() {
            RoundedIdeal::principal(diagram.la(c).lattice(), g)?;
        }
        let open = ExternalOpen { diagram, family };
        if let Some((c, d)) = open.monotonicity_failure()? {
            let dg = &open.diagram;
            return Err(Error::NotMonotone(format!("open at `{}` <= `{}`", dg.label(c), dg.label(d))));
        }
        Ok(open)
    }

    fn monotonicity_failure(&self) -> Result<Option<(usize, usize)>> {
        let d = &self.diagram;
        for (c, e, _) in d.all_homs() {
            if !d.la(e).lattice().leq(d.lat_hom(c, e)?.apply(self.family[c])?, self.family[e]) {
                return Ok(Some((c, e)));
            }
        }
        Ok(None)
    }

    pub fn diagram(&self) -> &Arc<ContextDiagram> {
        &self.diagram
    }

    pub fn family(&self) -> &[LatElem] {
        &self.family
    }

    pub fn ideal_at(&self, c: usize) -> RoundedIdeal {
        RoundedIdeal::principal(self.diagram.la(c).lattice(), self.family[c]).expect("validated")
    }

    pub fn top(diagram: &Arc<ContextDiagram>) -> Self {
        let family = (0..diagram.len()).map(|c| diagram.la(c).lattice().top()).collect();
        ExternalOpen { diagram: diagram.clone(), family }
    }

    pub fn bottom(diagram: &Arc<ContextDiagram>) -> Self {
        let family = (0..diagram.len()).map(|c| diagram.la(c).lattice().bottom()).collect();
        ExternalOpen { diagram: diagram.clone(), family }
    }

    fn same_diagram(&self, other: &ExternalOpen) -> Result<()> {
        if Arc::ptr_eq(&self.diagram, &other.diagram) || self.diagram == other.diagram {
            Ok(())
        } else {
            Err(Error::DiagramMismatch)
        }
    }

    pub fn leq(&self, other: &ExternalOpen) -> bool {
        (0..self.family.len()).all(|c| self.diagram.la(c).lattice().leq(self.family[c], other.family[c]))
    }

    /// Componentwise join; rounded ideals and monotonicity are preserved.
    pub fn join(&self, other: &ExternalOpen) -> Result<ExternalOpen> {
        self.same_diagram(other)?;
        let d = &self.diagram;
        let family = (0..d.len()).map(|c| d.la(c).lattice().join(self.family[c], other.family[c])).collect();
        Ok(ExternalOpen { diagram: d.clone(), family })
    }

    /// Largest open below both: the componentwise meet, re-rounded and
    /// shrunk until monotone.
    pub fn meet(&self, other: &ExternalOpen) -> Result<ExternalOpen> {
        self.same_diagram(other)?;
        let d = &self.diagram;
        let family = (0..d.len()).map(|c| d.la(c).lattice().meet(self.family[c], other.family[c])).collect();
        reround(d, family)
    }
}

/// Largest rounded-ideal generator below `a`, if the complemented elements
/// below `a` have a join that is itself complemented.
fn rounded_below(l: &DLattice, a: LatElem) -> Result<LatElem> {
    let cands: Vec<LatElem> = l.down(a).into_iter().filter(|&x| l.complement(x).is_some()).collect();
    let j = l.join_all(cands.iter().copied());
    if l.complement(j).is_none() {
        return Err(Error::NotWellInside(l.label(j), l.label(j)));
    }
    Ok(j)
}

/// Iterate re-rounding and monotone shrinking to a fixpoint.
pub fn reround(d: &Arc<ContextDiagram>, mut family: Vec<LatElem>) -> Result<ExternalOpen> {
    loop {
        let mut changed = false;
        for c in 0..d.len() {
            let l = d.la(c).lattice();
            let mut g = rounded_below(l, family[c])?;
            for e in bits(d.poset().up(c)).filter(|&e| e != c) {
                let h = d.lat_hom(c, e)?;
                // Largest rounded element below g whose image lies under family[e].
                let ok: Vec<LatElem> = l
                    .down(g)
                    .into_iter()
                    .filter(|&x| l.complement(x).is_some() && d.la(e).lattice().leq(h.apply(x).expect("own"), family[e]))
                    .collect();
                g = rounded_below(l, l.join_all(ok))?;
            }
            if g != family[c] {
                family[c] = g;
                changed = true;
            }
        }
        if !changed {
            return Ok(ExternalOpen { diagram: d.clone(), family });
        }
    }
}

/// Default enumeration guard for [`external_opens`].
pub const DEFAULT_MAX_OPENS: usize = 200_000;

/// All opens, in lexicographic order of the rounded-ideal choices per
/// context (contexts in index order, ideals in lattice element order).
pub fn external_opens(d: &Arc<ContextDiagram>, max: usize) -> Result<Vec<ExternalOpen>> {
    let n = d.len();
    if n == 0 {
        return Ok(vec![ExternalOpen { diagram: d.clone(), family: vec![] }]);
    }
    let choices: Vec<Vec<LatElem>> =
        (0..n).map(|c| rounded_ideals(d.la(c).lattice()).iter().map(RoundedIdeal::generator).collect()).collect();
    let per_first = par::try_map(&choices[0], |&g| {
        let mut out = Vec::new();
        let mut fam = vec![g];
        opens_rec(d, &choices, &mut fam, max, &mut out)?;
        Ok(out)
    })?;
    let mut all = Vec::new();
    for chunk in per_first {
        all.extend(chunk);
        if all.len() > max {
            return Err(Error::TooLarge { what: "external opens".into(), size: all.len(), max });
        }
    }
    Ok(all.into_iter().map(|family| ExternalOpen { diagram: d.clone(), family }).collect())
}

fn opens_rec(
    d: &ContextDiagram,
    choices: &[Vec<LatElem>],
    fam: &mut Vec<LatElem>,
    max: usize,
    out: &mut Vec<Vec<LatElem>>,
) -> Result<()> {
    let k = fam.len();
    if k == choices.len() {
        if out.len() >= max {
            return Err(Error::TooLarge { what: "external opens".into(), size: out.len() + 1, max });
        }
        out.push(fam.clone());
        return Ok(());
    }
    'choice: for &g in &choices[k] {
        for (j, &gj) in fam.iter().enumerate() {
            if d.poset().leq(j, k) && !d.la(k).lattice().leq(d.lat_hom(j, k)?.apply(gj)?, g) {
                continue 'choice;
            }
            if d.poset().leq(k, j) && !d.la(j).lattice().leq(d.lat_hom(k, j)?.apply(g)?, gj) {
                continue 'choice;
            }
        }
        fam.push(g);
        opens_rec(d, choices, fam, max, out)?;
        fam.pop();
    }
    Ok(())
}

/// Whether `pt` lies in `u`: some `C ∈ I` has `U_C` meeting `x_C`.
pub fn evaluate(pt: &SpectrumPoint, u: &ExternalOpen) -> Result<bool> {
    if !(Arc::ptr_eq(pt.diagram(), &u.diagram) || **pt.diagram() == *u.diagram) {
        return Err(Error::DiagramMismatch);
    }
    Ok(pt.filters().iter().any(|(c, x)| x.contains(u.family[*c])))
}

/// Frame checks on an enumerated set of opens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameReport {
    pub opens: usize,
    pub distributive: bool,
    pub closed: bool,
    /// Componentwise meets that needed re-rounding (expected none).
    pub rerounded: usize,
    pub unseparated: usize,
    pub evaluation_failures: usize,
}

impl FrameReport {
    pub fn ok(&self) -> bool {
        self.distributive && self.closed && self.rerounded == 0 && self.unseparated == 0 && self.evaluation_failures == 0
    }
}

/// Check that the opens form a distributive lattice under the componentwise
/// order, that points evaluate meets and joins correctly, and that distinct
/// opens are separated by points.
pub fn check_frame(opens: &[ExternalOpen], points: &[SpectrumPoint]) -> Result<FrameReport> {
    let n = opens.len();
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let distributive = n > 0 && DLattice::from_order(&names, |i, j| opens[i].leq(&opens[j])).is_ok();
    let evals: Vec<Vec<bool>> = par::try_map(opens, |u| points.iter().map(|p| evaluate(p, u)).collect())?;
    let rows: Vec<(usize, usize, usize, bool)> = par::try_map(&(0..n).collect::<Vec<_>>(), |&i| {
        let (mut rerounded, mut failures, mut unseparated, mut closed) = (0, 0, 0, true);
        for j in 0..n {
            let m = opens[i].meet(&opens[j])?;
            let d = &opens[i].diagram;
            let plain: Vec<LatElem> =
                (0..d.len()).map(|c| d.la(c).lattice().meet(opens[i].family[c], opens[j].family[c])).collect();
            if m.family != plain {
                rerounded += 1;
            }
            let jn = opens[i].join(&opens[j])?;
            closed &= opens.contains(&m) && opens.contains(&jn);
            for (k, p) in points.iter().enumerate() {
                if evaluate(p, &m)? != (evals[i][k] && evals[j][k]) || evaluate(p, &jn)? != (evals[i][k] || evals[j][k]) {
                    failures += 1;
                }
            }
            if i < j && evals[i] == evals[j] {
                unseparated += 1;
            }
        }
        Ok((rerounded, failures, unseparated, closed))
    })?;
    let mut report =
        FrameReport { opens: n, distributive, closed: true, rerounded: 0, unseparated: 0, evaluation_failures: 0 };
    for (r, f, u, c) in rows {
        report.rerounded += r;
        report.evaluation_failures += f;
        report.unseparated += u;
        report.closed &= c;
    }
    Ok(report)
}

/// `RIdl(L_{CD})`: `↓g ↦ ⇓L_{CD}(↓g)`, on rounded-ideal generators.
pub fn fibre_map(d: &ContextDiagram, c: usize, e: usize) -> Result<Vec<(LatElem, LatElem)>> {
    let h = d.lat_hom(c, e)?;
    let le = d.la(e).lattice();
    rounded_ideals(d.la(c).lattice())
        .iter()
        .map(|i| {
            let top = h.apply(i.generator())?;
            // ⇓ of the down-closure of the image is ⇓top.
            let mut below = Vec::new();
            for &x in le.elements() {
                if well_inside(le, x, top)?.is_some() {
                    below.push(x);
                }
            }
            let g = le.join_all(below.iter().copied());
            if !below.contains(&g) || le.down(g).len() != below.len() {
                return Err(Error::NotWellInside(le.label(g), le.label(top)));
            }
            RoundedIdeal::principal(le, g)?;
            Ok((i.generator(), g))
        })
        .collect()
}

pub fn apply_fibre_map(d: &ContextDiagram, c: usize, e: usize, g: LatElem) -> Result<LatElem> {
    fibre_map(d, c, e)?.into_iter().find(|&(a, _)| a == g).map(|(_, b)| b).ok_or(Error::ElementNotInLattice)
}

/// The internal frame as a copresheaf: at `C`, the monotone rounded-ideal
/// families over `↑C`; along `C ≤ C′`, restriction to `↑C′`.
#[derive(Clone, Debug)]
pub struct InternalFrame {
    /// Original context indices of `↑C`, per context.
    pub up: Vec<Vec<usize>>,
    /// Families over `↑C`, aligned with `up[C]`.
    pub values: Vec<Vec<Vec<LatElem>>>,
}

impl InternalFrame {
    /// Index in `values[c2]` of the restriction of `values[c][i]`.
    pub fn restrict(&self, c: usize, c2: usize, i: usize) -> Option<usize> {
        let fam = &self.values[c][i];
        let restricted: Vec<LatElem> = self.up[c2]
            .iter()
            .map(|x| self.up[c].iter().position(|y| y == x).map(|p| fam[p]))
            .collect::<Option<_>>()?;
        self.values[c2].iter().position(|f| *f == restricted)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.values.iter().map(Vec::len).collect()
    }
}

pub fn internal_frame(d: &Arc<ContextDiagram>, max: usize) -> Result<InternalFrame> {
    let cs: Vec<usize> = (0..d.len()).collect();
    let parts = par::try_map(&cs, |&c| {
        let (sub, keep) = d.restrict(d.poset().up(c))?;
        let opens = external_opens(&Arc::new(sub), max)?;
        Ok((keep, opens.into_iter().map(|o| o.family).collect::<Vec<_>>()))
    })?;
    let (up, values) = parts.into_iter().unzip();
    Ok(InternalFrame { up, values })
}

/// Restriction maps land in the target values and compose; at a bottom
/// context the value is the full set of opens.
pub fn check_internal_frame(d: &Arc<ContextDiagram>, frame: &InternalFrame, opens: &[ExternalOpen]) -> Vec<String> {
    let p = d.poset();
    let mut out = Vec::new();
    for c in 0..d.len() {
        for c2 in bits(p.up(c)) {
            for i in 0..frame.values[c].len() {
                let Some(j) = frame.restrict(c, c2, i) else {
                    out.push(format!("restriction `{}` -> `{}` leaves the value", d.label(c), d.label(c2)));
                    continue;
                };
                if c2 == c && j != i {
                    out.push(format!("restriction at `{}` is not the identity", d.label(c)));
                }
                for c3 in bits(p.up(c2)) {
                    if frame.restrict(c2, c3, j) != frame.restrict(c, c3, i) {
                        out.push(format!("restrictions via `{}` do not compose", d.label(c2)));
                    }
                }
            }
        }
    }
    if let Some(b) = p.bottom() {
        let all: Vec<Vec<LatElem>> = opens.iter().map(|o| o.family.clone()).collect();
        if frame.values[b] != all {
            out.push("value at the bottom context differs from the opens".into());
        }
    }
    out
}

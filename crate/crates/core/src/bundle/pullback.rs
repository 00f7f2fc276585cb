use std::sync::Arc;

use super::diagram::ContextDiagram;
use super::opens::{evaluate, external_opens, ExternalOpen};
use super::points::{external_points, points_over, SpectrumPoint};
use crate::error::{Error, Result};
use crate::par;
use crate::poset::FinPoset;

/// `f*Δ`: the diagram over `q` with `algebra(x) = algebra(f(x))`.
pub fn pullback(d: &ContextDiagram, q: &FinPoset, f: &[usize]) -> Result<ContextDiagram> {
    if !q.is_monotone_into(f, d.poset()) {
        return Err(Error::NotMonotone(format!("{:?} into `{}`", f, d.poset().labels().join(","))));
    }
    let algebras = f.iter().map(|&p| d.algebra(p).clone()).collect();
    let mut inclusions = Vec::new();
    for x in 0..q.len() {
        for y in 0..q.len() {
            if x != y && q.leq(x, y) {
                inclusions.push((x, y, d.hom(f[x], f[y])?.clone()));
            }
        }
    }
    ContextDiagram::new(q.clone(), algebras, inclusions)
}

/// Outcome of [`check_pullback`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackReport {
    pub pulled_points: usize,
    pub fibre_points: usize,
    pub bijective: bool,
    pub opens_checked: usize,
    pub naturality_failures: usize,
}

impl PullbackReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.naturality_failures == 0
    }
}

/// `(f*U)_x = U_{f(x)}`.
pub fn pull_open(pulled: &Arc<ContextDiagram>, f: &[usize], u: &ExternalOpen) -> Result<ExternalOpen> {
    ExternalOpen::new(pulled.clone(), f.iter().map(|&p| u.family()[p]).collect())
}

/// Geometricity at finite scale. Points of `f*Δ` over `↓x` are matched with
/// points of `Δ` over the ideal generated by `f(↓x)`, which is `↓f(x)`:
/// `y_{f(x)} = x_x` and `y_p = L_{p,f(x)}^{-1}(y_{f(x)})`. The match must be
/// a bijection and commute with evaluation on every open of `Δ`.
pub fn check_pullback(d: &Arc<ContextDiagram>, q: &FinPoset, f: &[usize], max_opens: usize) -> Result<PullbackReport> {
    let pulled = Arc::new(pullback(d, q, f)?);
    let left = external_points(&pulled)?;
    let ideals = pulled.ideals();
    let fibres: Vec<Vec<SpectrumPoint>> = par::try_map(&ideals, |j| {
        let image = d.poset().ideal(d.poset().down(f[j.top()])).expect("principal");
        points_over(d, image)
    })?;
    let fibre_points: usize = fibres.iter().map(Vec::len).sum();
    // Match each pulled point to a fibre point through the top contexts.
    let mut matched: Vec<Option<(usize, usize)>> = Vec::new();
    for x in &left {
        let k = ideals.iter().position(|j| *j == x.ideal()).expect("own ideal");
        let t = x.ideal().top();
        let gen = x.filter(t).expect("top in ideal").generator();
        matched.push(fibres[k].iter().position(|y| y.filter(f[t]).map(|g| g.generator()) == Some(gen)).map(|i| (k, i)));
    }
    let mut hit: Vec<Vec<usize>> = fibres.iter().map(|v| vec![0; v.len()]).collect();
    for &(k, i) in matched.iter().flatten() {
        hit[k][i] += 1;
    }
    let bijective = matched.iter().all(Option::is_some) && hit.iter().flatten().all(|&h| h == 1);

    let opens = external_opens(d, max_opens)?;
    let mut naturality_failures = 0;
    if bijective {
        for u in &opens {
            let fu = pull_open(&pulled, f, u)?;
            for (x, m) in left.iter().zip(&matched) {
                let (k, i) = m.expect("bijective");
                if evaluate(x, &fu)? != evaluate(&fibres[k][i], u)? {
                    naturality_failures += 1;
                }
            }
        }
    }
    Ok(PullbackReport {
        pulled_points: left.len(),
        fibre_points,
        bijective,
        opens_checked: opens.len(),
        naturality_failures,
    })
}

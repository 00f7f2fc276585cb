//! Nets of algebras over a poset of regions.
//!
//! Each region `O` carries a commutative skeleton `𝔄(O)` (an outcome set)
//! and a finite poset `𝒞_O` of contexts given as partitions of its outcomes.
//! The combined poset `𝒫` has pairs `(O, C)` ordered componentwise, where a
//! context of a smaller region sits below a context of a larger one when the
//! latter refines the pullback of the former along the region inclusion.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{characters, AlgElement, AlgebraHom, FinCommAlgebra};
use crate::bohrify::{user_contexts, BohrContext, BohrDiagram, ContextSpec};
use crate::bundle::{external_points, AlgebraSpec, ContextDiagram, DiagramSpec, InclusionSpec, PosetSpec, SpectrumPoint};
use crate::error::{parse_json, Error, Result};
use crate::lattice::LatElem;
use crate::par;
use crate::poset::{FinPoset, PosetIdeal};
use crate::spectrum::well_inside;

/// Largest number of pairs `(O, C)` accepted in `𝒫`.
pub const MAX_P: usize = 64;

/// JSON form of a [`NetDiagram`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetSpec {
    pub regions: PosetSpec,
    pub net_outcomes: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub region_maps: BTreeMap<String, InclusionSpec>,
    pub contexts_per_region: BTreeMap<String, Vec<ContextSpec>>,
}

impl NetSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text)
    }
}

/// Rename a region-diagram error into the net document's vocabulary.
fn as_net_error(e: Error) -> Error {
    match e {
        Error::InvalidDiagram { path, message } => {
            let path = if let Some(rest) = path.strip_prefix("poset") {
                format!("regions{rest}")
            } else if let Some(rest) = path.strip_prefix("algebras") {
                format!("net_outcomes{}", rest.strip_suffix(".outcomes").unwrap_or(rest))
            } else if let Some(rest) = path.strip_prefix("inclusions") {
                format!("region_maps{rest}")
            } else {
                path
            };
            Error::net(path, message)
        }
        other => other,
    }
}

/// A validated net: the region diagram and each region's context poset.
#[derive(Clone, Debug)]
pub struct NetDiagram {
    regions: Arc<ContextDiagram>,
    contexts: Vec<BohrDiagram>,
}

impl NetDiagram {
    pub fn from_spec(spec: &NetSpec) -> Result<Self> {
        let region_spec = DiagramSpec {
            poset: spec.regions.clone(),
            algebras: spec.net_outcomes.iter().map(|(k, v)| (k.clone(), AlgebraSpec { outcomes: v.clone() })).collect(),
            inclusions: spec.region_maps.clone(),
        };
        let regions = Arc::new(ContextDiagram::from_spec(&region_spec).map_err(as_net_error)?);
        for name in spec.contexts_per_region.keys() {
            if regions.poset().index_of(name).is_none() {
                return Err(Error::net(format!("contexts_per_region.{name}"), "not a region"));
            }
        }
        let mut contexts = Vec::new();
        for (o, name) in regions.poset().labels().iter().enumerate() {
            let path = format!("contexts_per_region.{name}");
            let specs = match spec.contexts_per_region.get(name) {
                Some(s) if !s.is_empty() => s,
                _ => return Err(Error::net(path, "empty context family")),
            };
            let base = regions.algebra(o).outcomes().to_vec();
            let ctx = user_contexts(base, specs, &[]).map_err(|e| match e {
                Error::Schema { path: p, message } => {
                    Error::net(format!("{path}{}", p.strip_prefix("bohr.contexts").unwrap_or(&p)), message)
                }
                other => Error::net(path.clone(), other.to_string()),
            })?;
            contexts.push(ctx);
        }
        let total: usize = contexts.iter().map(|c| c.contexts.len()).sum();
        if total > MAX_P {
            return Err(Error::TooLarge { what: "pairs (region, context)".into(), size: total, max: MAX_P });
        }
        Ok(NetDiagram { regions, contexts })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        NetDiagram::from_spec(&NetSpec::from_json(text)?)
    }

    pub fn regions(&self) -> &Arc<ContextDiagram> {
        &self.regions
    }

    /// The context poset `𝒞_O` of region `o`.
    pub fn contexts(&self, o: usize) -> &BohrDiagram {
        &self.contexts[o]
    }

    fn ctx(&self, o: usize, k: usize) -> &BohrContext {
        &self.contexts[o].contexts[k]
    }

    /// Block of context `(o1, k1)` containing the image of block `b` of
    /// `(o2, k2)`, for `o1 ≤ o2`.
    fn restrict_block(&self, (o1, k1): (usize, usize), (o2, k2): (usize, usize), b: usize) -> usize {
        let m = self.regions.hom(o1, o2).expect("comparable regions").outcome_map();
        let (src, tgt) = (self.ctx(o1, k1), self.ctx(o2, k2));
        let tgt_out = self.regions.algebra(o2).outcomes();
        let src_out = self.regions.algebra(o1).outcomes();
        let first = &tgt.partition.blocks()[b][0];
        let image = &src_out[m[tgt_out.iter().position(|x| x == first).expect("own outcome")]];
        src.partition.blocks().iter().position(|blk| blk.contains(image)).expect("partition covers")
    }

    /// `(o1, k1) ≤ (o2, k2)` in `𝒫`.
    pub fn pair_leq(&self, (o1, k1): (usize, usize), (o2, k2): (usize, usize)) -> bool {
        if !self.regions.poset().leq(o1, o2) {
            return false;
        }
        let (c1, c2) = (self.ctx(o1, k1), self.ctx(o2, k2));
        if c1.partition.len() > 1 && c1.frame != c2.frame {
            return false;
        }
        // σ₂ refines the pullback of π₁: every block of σ₂ lands in one block of π₁.
        (0..c2.partition.len()).all(|b| {
            let m = self.regions.hom(o1, o2).expect("comparable regions").outcome_map();
            let tgt_out = self.regions.algebra(o2).outcomes();
            let src_out = self.regions.algebra(o1).outcomes();
            let block_of = |x: &String| {
                let y = &src_out[m[tgt_out.iter().position(|t| t == x).expect("own outcome")]];
                c1.partition.blocks().iter().position(|blk| blk.contains(y))
            };
            let blk = &c2.partition.blocks()[b];
            blk.iter().all(|x| block_of(x) == block_of(&blk[0]))
        })
    }

    /// The pairs `(O, C)` in region-then-context order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.contexts.len()).flat_map(|o| (0..self.contexts[o].contexts.len()).map(move |k| (o, k))).collect()
    }

    pub fn pair_label(&self, (o, k): (usize, usize)) -> String {
        format!("{}/{}", self.regions.label(o), self.ctx(o, k).label())
    }
}

/// `𝒫` as a context diagram with `algebra(O, C)` the block algebra of `C`.
pub fn build_p(net: &NetDiagram) -> Result<ContextDiagram> {
    let pairs = net.pairs();
    let labels: Vec<String> = pairs.iter().map(|&p| net.pair_label(p)).collect();
    let poset = FinPoset::from_leq(labels.clone(), |i, j| net.pair_leq(pairs[i], pairs[j]))
        .map_err(|e| Error::net("contexts_per_region", e.to_string()))?;
    let algebras: Vec<Arc<FinCommAlgebra>> = pairs
        .iter()
        .zip(&labels)
        .map(|(&(o, k), l)| FinCommAlgebra::new(l.clone(), net.ctx(o, k).partition.block_labels()).map(Arc::new))
        .collect::<Result<_>>()?;
    let mut inclusions = Vec::new();
    for (i, &p) in pairs.iter().enumerate() {
        for (j, &q) in pairs.iter().enumerate() {
            if i != j && poset.leq(i, j) {
                let map = (0..algebras[j].dim()).map(|b| net.restrict_block(p, q, b)).collect();
                inclusions.push((i, j, AlgebraHom::from_indices(algebras[i].clone(), algebras[j].clone(), map)?));
            }
        }
    }
    ContextDiagram::new(poset, algebras, inclusions).map_err(|e| Error::net("contexts_per_region", e.to_string()))
}

/// A point as a triple `(ℛ, ℐ, λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AqftPoint {
    /// Ideal of regions.
    pub regions: PosetIdeal,
    /// `ℐ_O` for each `O ∈ ℛ`, an ideal of `𝒞_O`.
    pub contexts: Vec<(usize, PosetIdeal)>,
    /// `λ_{O,C}` as a block index of `C`, for `C ∈ ℐ_O`.
    pub lambda: Vec<((usize, usize), usize)>,
}

impl AqftPoint {
    pub fn lambda_at(&self, p: (usize, usize)) -> Option<usize> {
        self.lambda.iter().find(|(q, _)| *q == p).map(|&(_, b)| b)
    }
}

/// Both coherence conditions on a choice of context ideals.
fn coherent(net: &NetDiagram, chosen: &[(usize, PosetIdeal)]) -> bool {
    let members: Vec<(usize, usize)> =
        chosen.iter().flat_map(|&(o, id)| id.members().map(move |k| (o, k))).collect();
    // I_{O₂} ∩ 𝒞_{O₁} ⊆ I_{O₁}: anything of a smaller region below a member is a member.
    for &(o1, _) in chosen {
        for k1 in 0..net.contexts[o1].contexts.len() {
            if members.iter().any(|&q| net.pair_leq((o1, k1), q)) && !members.contains(&(o1, k1)) {
                return false;
            }
        }
    }
    members.iter().all(|&a| {
        members.iter().all(|&b| members.iter().any(|&c| net.pair_leq(a, c) && net.pair_leq(b, c)))
    })
}

fn lambda_rec(
    net: &NetDiagram,
    members: &[(usize, usize)],
    chosen: &mut Vec<((usize, usize), usize)>,
    emit: &mut dyn FnMut(&[((usize, usize), usize)]),
) {
    let k = chosen.len();
    if k == members.len() {
        emit(chosen);
        return;
    }
    let p = members[k];
    for b in 0..net.ctx(p.0, p.1).partition.len() {
        let ok = chosen.iter().all(|&(q, bq)| {
            if net.pair_leq(q, p) {
                net.restrict_block(q, p, b) == bq
            } else if net.pair_leq(p, q) {
                net.restrict_block(p, q, bq) == b
            } else {
                true
            }
        });
        if ok {
            chosen.push((p, b));
            lambda_rec(net, members, chosen, emit);
            chosen.pop();
        }
    }
}

/// All triples satisfying the three conditions, by direct search.
pub fn aqft_points(net: &NetDiagram) -> Result<Vec<AqftPoint>> {
    let region_ideals = net.regions.ideals();
    let per = par::map(&region_ideals, |&r| {
        let os: Vec<usize> = r.members().collect();
        let mut out = Vec::new();
        let mut chosen: Vec<(usize, PosetIdeal)> = Vec::new();
        ideal_rec(net, &os, &mut chosen, &mut |ch| {
            if !coherent(net, ch) {
                return;
            }
            let members: Vec<(usize, usize)> = ch.iter().flat_map(|&(o, id)| id.members().map(move |k| (o, k))).collect();
            lambda_rec(net, &members, &mut Vec::new(), &mut |l| {
                out.push(AqftPoint { regions: r, contexts: ch.to_vec(), lambda: l.to_vec() });
            });
        });
        out
    });
    Ok(per.into_iter().flatten().collect())
}

fn ideal_rec(
    net: &NetDiagram,
    os: &[usize],
    chosen: &mut Vec<(usize, PosetIdeal)>,
    emit: &mut dyn FnMut(&[(usize, PosetIdeal)]),
) {
    let k = chosen.len();
    if k == os.len() {
        emit(chosen);
        return;
    }
    let o = os[k];
    for id in net.contexts[o].diagram.ideals() {
        chosen.push((o, id));
        ideal_rec(net, os, chosen, emit);
        chosen.pop();
    }
}

/// `(O, C, a) ◁ W`: with `W₀` the part of `W` at `(O, C)`, every `a′ ≪ a`
/// lies below `⋁W₀` in `L_C`.
pub fn covering_holds(p: &ContextDiagram, x: usize, a: LatElem, w: &[(usize, LatElem)]) -> Result<bool> {
    let l = p.la(x).lattice();
    l.index_of(a)?;
    let mut w0 = Vec::new();
    for &(y, b) in w {
        if y == x {
            l.index_of(b)?;
            w0.push(b);
        }
    }
    let cover = l.join_all(w0);
    for &a2 in l.elements() {
        if well_inside(l, a2, a)?.is_some() && !l.leq(a2, cover) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of [`check_triples_vs_generic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleReport {
    pub triples: usize,
    pub generic: usize,
    pub total: bool,
    pub injective: bool,
    pub surjective: bool,
    pub evaluation_mismatches: usize,
    /// Covers `(O, C, a) ◁ W` with `(O, C, a)` in a point but `W` missing it.
    pub prime_failures: usize,
}

impl TripleReport {
    pub fn ok(&self) -> bool {
        self.triples == self.generic
            && self.total
            && self.injective
            && self.surjective
            && self.evaluation_mismatches == 0
            && self.prime_failures == 0
    }
}

/// Singleton `{b}` of `L_C` for block `b`.
fn atom(p: &ContextDiagram, x: usize, b: usize) -> Result<LatElem> {
    p.la(x).d(&AlgElement::indicator(p.algebra(x).clone(), 1 << b))
}

/// Covers tried for the prime-filter check: all subsets of `L_C` when it is
/// small, else subsets of its atoms.
fn candidate_covers(p: &ContextDiagram, x: usize) -> Result<Vec<Vec<LatElem>>> {
    let l = p.la(x).lattice();
    let pool: Vec<LatElem> = if l.len() <= 8 {
        l.elements().to_vec()
    } else {
        (0..p.algebra(x).dim()).map(|b| atom(p, x, b)).collect::<Result<_>>()?
    };
    Ok((0u64..1 << pool.len()).map(|m| pool.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &e)| e).collect()).collect())
}

/// Match triples with the points of `build_p(net)` and compare membership of
/// every `(O, C, a)`.
pub fn check_triples_vs_generic(net: &NetDiagram) -> Result<TripleReport> {
    let p = Arc::new(build_p(net)?);
    let pairs = net.pairs();
    let index = |q: (usize, usize)| pairs.iter().position(|&r| r == q).expect("pair");
    let triples = aqft_points(net)?;
    let generic: Vec<SpectrumPoint> = external_points(&p)?;
    let as_generic = |t: &AqftPoint| -> Result<(u64, Vec<(usize, LatElem)>)> {
        let mut gens = Vec::new();
        for &(q, b) in &t.lambda {
            gens.push((index(q), atom(&p, index(q), b)?));
        }
        gens.sort();
        Ok((gens.iter().fold(0u64, |m, &(i, _)| m | 1 << i), gens))
    };
    let mut matched: Vec<Option<usize>> = Vec::new();
    for t in &triples {
        let (mask, gens) = as_generic(t)?;
        matched.push(generic.iter().position(|g| g.ideal().mask() == mask && g.generators() == gens));
    }
    let mut hits = vec![0usize; generic.len()];
    for &m in matched.iter().flatten() {
        hits[m] += 1;
    }
    let total = matched.iter().all(Option::is_some);
    let injective = hits.iter().all(|&h| h <= 1);
    let surjective = hits.iter().all(|&h| h >= 1);

    let covers: Vec<Vec<Vec<LatElem>>> = (0..p.len()).map(|x| candidate_covers(&p, x)).collect::<Result<_>>()?;
    let mut evaluation_mismatches = 0;
    let mut prime_failures = 0;
    for (t, m) in triples.iter().zip(&matched) {
        for (x, &q) in pairs.iter().enumerate() {
            let lam = t.lambda_at(q);
            for &a in p.la(x).lattice().elements() {
                let mine = lam.is_some_and(|b| a.bits() >> b & 1 == 1);
                if let Some(g) = m {
                    if mine != generic[*g].contains(x, a) {
                        evaluation_mismatches += 1;
                    }
                }
                if !mine {
                    continue;
                }
                let b = lam.expect("member");
                for w0 in &covers[x] {
                    let w: Vec<(usize, LatElem)> = w0.iter().map(|&e| (x, e)).collect();
                    if covering_holds(&p, x, a, &w)? && !w0.iter().any(|e| e.bits() >> b & 1 == 1) {
                        prime_failures += 1;
                    }
                }
            }
        }
    }
    Ok(TripleReport {
        triples: triples.len(),
        generic: generic.len(),
        total,
        injective,
        surjective,
        evaluation_mismatches,
        prime_failures,
    })
}

/// Causal diamonds of a 1+1-dimensional `m × m` light-cone grid, as
/// rectangles `[u₀, u₁] × [v₀, v₁]` ordered by inclusion.
pub fn double_cone_regions(m: usize) -> Result<FinPoset> {
    if m == 0 || m > 3 {
        return Err(Error::TooLarge { what: "double-cone grid".into(), size: m, max: 3 });
    }
    let spans: Vec<(usize, usize)> = (0..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect();
    let cones: Vec<((usize, usize), (usize, usize))> =
        spans.iter().flat_map(|&u| spans.iter().map(move |&v| (u, v))).collect();
    let labels = cones.iter().map(|(u, v)| format!("D[{}-{},{}-{}]", u.0, u.1, v.0, v.1)).collect();
    let inside = |a: (usize, usize), b: (usize, usize)| b.0 <= a.0 && a.1 <= b.1;
    FinPoset::from_leq(labels, |i, j| inside(cones[i].0, cones[j].0) && inside(cones[i].1, cones[j].1))
}

/// `Σ̱: 𝒫ᵒᵖ → Set`: characters at each pair and restriction along the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaFunctor {
    pub objects: Vec<(String, Vec<String>)>,
    /// `(p, q, r)` for `p ≤ q`: `r[i]` is the restriction of character `i`
    /// of `q` to `p`.
    pub restrictions: Vec<(usize, usize, Vec<usize>)>,
}

pub fn sigma_functor(p: &ContextDiagram) -> SigmaFunctor {
    let objects = (0..p.len())
        .map(|x| (p.label(x).to_string(), characters(p.algebra(x)).iter().map(|c| c.label().to_string()).collect()))
        .collect();
    let restrictions = p.all_homs().map(|(a, b, h)| (a, b, h.outcome_map().to_vec())).collect();
    SigmaFunctor { objects, restrictions }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_bohr() -> &'static str {
        r#"{"regions": {"elements": ["O1","O2"], "le": [["O1","O2"]]},
            "net_outcomes": {"O1": ["1","2"], "O2": ["1","2"]},
            "region_maps": {"O1<=O2": {"outcome_map": {"1":"1","2":"2"}}},
            "contexts_per_region": {"O1": [[["1"],["2"]]], "O2": [[["1"],["2"]]]}}"#
    }

    #[test]
    fn product_order_of_a_chain() {
        let net = NetDiagram::from_json(chain_bohr()).unwrap();
        let p = build_p(&net).unwrap();
        assert_eq!(p.len(), 4);
        let (b1, d2) = (p.context("O1/1,2").unwrap(), p.context("O2/1|2").unwrap());
        assert!(p.poset().leq(b1, d2));
        assert_eq!(p.poset().covers().len(), 4);
    }

    #[test]
    fn empty_family_is_rejected() {
        let text = chain_bohr().replace(r#""O2": [[["1"],["2"]]]"#, r#""O2": []"#);
        let e = NetDiagram::from_json(&text).unwrap_err();
        assert_eq!(e.kind(), "InvalidNet");
        assert_eq!(e.path(), Some("contexts_per_region.O2"));
    }

    #[test]
    fn region_errors_use_net_paths() {
        let text = chain_bohr().replace(r#"{"1":"1","2":"2"}"#, r#"{"1":"1","2":"1"}"#);
        assert_eq!(NetDiagram::from_json(&text).unwrap_err().path(), Some("region_maps.O1<=O2.outcome_map"));
    }

    #[test]
    fn triples_match_points() {
        let net = NetDiagram::from_json(chain_bohr()).unwrap();
        let r = check_triples_vs_generic(&net).unwrap();
        assert!(r.ok(), "{r:?}");
        // ↓O1/bottom: 1; ↓O1/disc: 2; ↓O2/bottom: 1; ↓O2/disc: 2.
        assert_eq!(r.triples, 6);
    }

    #[test]
    fn covers_in_a_boolean_fibre() {
        let net = NetDiagram::from_json(chain_bohr()).unwrap();
        let p = build_p(&net).unwrap();
        let x = p.context("O1/1|2").unwrap();
        let l = p.la(x).lattice();
        let (one, two) = (atom(&p, x, 0).unwrap(), atom(&p, x, 1).unwrap());
        assert!(covering_holds(&p, x, l.top(), &[(x, one), (x, two)]).unwrap());
        assert!(!covering_holds(&p, x, l.top(), &[(x, one)]).unwrap());
        assert!(covering_holds(&p, x, l.bottom(), &[]).unwrap());
        assert!(covering_holds(&p, x, one, &[(x, one)]).unwrap());
    }

    #[test]
    fn double_cones() {
        assert_eq!(double_cone_regions(1).unwrap().len(), 1);
        let d2 = double_cone_regions(2).unwrap();
        assert_eq!(d2.len(), 9);
        assert_eq!(d2.label(d2.top().unwrap()), "D[0-1,0-1]");
        assert_eq!(double_cone_regions(3).unwrap().len(), 36);
        assert!(double_cone_regions(4).is_err());
    }

    #[test]
    fn sigma_restrictions() {
        let net = NetDiagram::from_json(chain_bohr()).unwrap();
        let s = sigma_functor(&build_p(&net).unwrap());
        assert_eq!(s.objects.len(), 4);
        assert!(s.restrictions.iter().all(|(_, _, r)| r.len() <= 2));
    }
}

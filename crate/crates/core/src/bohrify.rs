//! Context diagrams from partitions of a finite outcome set.
//!
//! A commutative unital subalgebra of `ℚ[i]ⁿ` is the algebra of functions
//! constant on the blocks of a partition. Coarser partitions give smaller
//! subalgebras, so `π ≤ σ` iff `σ` refines `π`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{hom_law_violations, sign_samples, AlgElement, AlgebraHom, FinCommAlgebra, GaussRat};
use crate::bundle::{parse_edge_key, ContextDiagram, DiagramSpec};
use crate::error::{parse_json, Error, Result};
use crate::poset::FinPoset;

/// Largest `n` accepted by [`full_context_poset`]; Bell(5) = 52 contexts.
pub const MAX_BOHR_N: usize = 5;

/// A partition of a base set, blocks sorted by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<String>>,
}

impl Partition {
    /// Validate blocks over `base` and bring them into canonical order.
    pub fn new(base: &[String], blocks: Vec<Vec<String>>) -> Result<Self> {
        let pos = |x: &String| base.iter().position(|b| b == x);
        let mut seen = vec![false; base.len()];
        let mut canon = Vec::new();
        for block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidPoset("empty block".into()));
            }
            let mut idx = Vec::new();
            for x in &block {
                let i = pos(x).ok_or_else(|| Error::UnknownOutcome(x.clone()))?;
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPoset(format!("`{x}` appears in two blocks")));
                }
                idx.push(i);
            }
            idx.sort();
            canon.push(idx);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPoset(format!("`{}` is in no block", base[i])));
        }
        canon.sort();
        Ok(Partition { blocks: canon.into_iter().map(|b| b.into_iter().map(|i| base[i].clone()).collect()).collect() })
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_label(block: &[String]) -> String {
        block.join(",")
    }

    pub fn block_labels(&self) -> Vec<String> {
        self.blocks.iter().map(|b| Partition::block_label(b)).collect()
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks.iter().all(|b| coarser.blocks.iter().any(|c| b.iter().all(|x| c.contains(x))))
    }

    /// Target block label to the source (coarser) block containing it.
    fn coarsening_map(&self, coarser: &Partition) -> BTreeMap<String, String> {
        self.blocks
            .iter()
            .map(|b| {
                let c = coarser.blocks.iter().find(|c| c.contains(&b[0])).expect("refines");
                (Partition::block_label(b), Partition::block_label(c))
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.block_labels().join("|"))
    }
}

/// Restricted-growth enumeration of the partitions of `{0..n}`.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// A context: a partition, optionally tagged with a measurement frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohrContext {
    pub frame: Option<String>,
    pub partition: Partition,
}

impl BohrContext {
    pub fn label(&self) -> String {
        match (&self.frame, self.partition.len()) {
            (Some(f), k) if k > 1 => format!("{f}:{}", self.partition),
            _ => self.partition.to_string(),
        }
    }
}

/// A context diagram whose contexts are partitions of a base set.
#[derive(Clone, Debug)]
pub struct BohrDiagram {
    pub base: Vec<String>,
    pub contexts: Vec<BohrContext>,
    pub diagram: Arc<ContextDiagram>,
}

fn build(base: Vec<String>, contexts: Vec<BohrContext>, extra: &[(usize, usize)]) -> Result<BohrDiagram> {
    let labels: Vec<String> = contexts.iter().map(BohrContext::label).collect();
    let related = |i: usize, j: usize| {
        let (a, b) = (&contexts[i], &contexts[j]);
        b.partition.refines(&a.partition) && (a.partition.len() == 1 || a.frame == b.frame)
    };
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..contexts.len() {
        for j in 0..contexts.len() {
            if i != j && related(i, j) {
                pairs.push((i, j));
            }
        }
    }
    for &(i, j) in extra {
        if !contexts[j].partition.refines(&contexts[i].partition) {
            return Err(Error::InconsistentOrder(format!("`{}` does not refine `{}`", labels[j], labels[i])));
        }
        pairs.push((i, j));
    }
    let poset = FinPoset::new(labels, &pairs).map_err(|e| match e {
        Error::InvalidPoset(m) => Error::InconsistentOrder(m),
        other => other,
    })?;
    let algebras: Vec<Arc<FinCommAlgebra>> = contexts
        .iter()
        .zip(poset.labels())
        .map(|(c, l)| FinCommAlgebra::new(l.clone(), c.partition.block_labels()).map(Arc::new))
        .collect::<Result<_>>()?;
    let mut inclusions = Vec::new();
    for i in 0..contexts.len() {
        for j in 0..contexts.len() {
            if i != j && poset.leq(i, j) {
                let map = contexts[j].partition.coarsening_map(&contexts[i].partition);
                inclusions.push((i, j, AlgebraHom::new(algebras[i].clone(), algebras[j].clone(), &map)?));
            }
        }
    }
    let diagram = Arc::new(ContextDiagram::new(poset, algebras, inclusions)?);
    Ok(BohrDiagram { base, contexts, diagram })
}

fn sort_contexts(contexts: &mut [BohrContext]) {
    contexts.sort_by_key(|c| (c.partition.len(), c.label()));
}

/// All partitions of `{1..n}` ordered by refinement.
pub fn full_context_poset(n: usize) -> Result<BohrDiagram> {
    if n == 0 || n > MAX_BOHR_N {
        return Err(Error::TooLarge { what: "Bohrification base".into(), size: n, max: MAX_BOHR_N });
    }
    let base: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut contexts: Vec<BohrContext> = set_partitions(n)
        .into_iter()
        .map(|p| {
            let blocks = p.into_iter().map(|b| b.into_iter().map(|i| base[i].clone()).collect()).collect();
            BohrContext { frame: None, partition: Partition::new(&base, blocks).expect("valid partition") }
        })
        .collect();
    sort_contexts(&mut contexts);
    build(base, contexts, &[])
}

/// One entry of a user context list: bare blocks, or blocks with a frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContextSpec {
    Blocks(Vec<Vec<String>>),
    Framed {
        frame: String,
        blocks: Vec<Vec<String>>,
    },
}

/// User-declared contexts over a common base set.
///
/// Contexts in the same frame (or both unframed) are ordered by refinement;
/// the one-block context is shared and always present. Extra `le` pairs
/// must be refinement-consistent. Repeated contexts are merged.
pub fn user_contexts(base: Vec<String>, specs: &[ContextSpec], le: &[(String, String)]) -> Result<BohrDiagram> {
    let bad = |i: usize, e: Error| Error::Schema { path: format!("bohr.contexts[{i}]"), message: e.to_string() };
    let mut uniq = base.clone();
    uniq.sort();
    uniq.dedup();
    if base.is_empty() || uniq.len() != base.len() {
        return Err(Error::Schema { path: "bohr.base".into(), message: "base must be nonempty and duplicate-free".into() });
    }
    let mut contexts: Vec<BohrContext> = Vec::new();
    let bottom = BohrContext { frame: None, partition: Partition::new(&base, vec![base.clone()])? };
    contexts.push(bottom);
    for (i, s) in specs.iter().enumerate() {
        let (frame, blocks) = match s {
            ContextSpec::Blocks(b) => (None, b.clone()),
            ContextSpec::Framed { frame, blocks } => (Some(frame.clone()), blocks.clone()),
        };
        let partition = Partition::new(&base, blocks).map_err(|e| bad(i, e))?;
        let frame = if partition.len() == 1 { None } else { frame };
        let c = BohrContext { frame, partition };
        if !contexts.contains(&c) {
            contexts.push(c);
        }
    }
    sort_contexts(&mut contexts);
    let labels: Vec<String> = contexts.iter().map(BohrContext::label).collect();
    let extra = le
        .iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let find = |x: &String| {
                labels.iter().position(|l| l == x).ok_or_else(|| Error::Schema {
                    path: format!("bohr.le[{k}]"),
                    message: format!("unknown context `{x}`"),
                })
            };
            Ok((find(a)?, find(b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    build(base, contexts, &extra)
}

/// JSON form: `{"bohr": {"n": 3}}` or `{"bohr": {"base": [...], "contexts": [...]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BohrSpec {
    pub bohr: BohrBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BohrBody {
    Full {
        n: usize,
    },
    User {
        base: Vec<String>,
        contexts: Vec<ContextSpec>,
        #[serde(default)]
        le: Vec<(String, String)>,
    },
}

impl BohrSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn build(&self) -> Result<BohrDiagram> {
        match &self.bohr {
            BohrBody::Full { n } => full_context_poset(*n),
            BohrBody::User { base, contexts, le } => user_contexts(base.clone(), contexts, le),
        }
    }
}

/// A violation of the componentwise *-algebra conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CstarViolation {
    pub kind: &'static str,
    pub path: String,
    pub message: String,
}

/// Samples for the law checks: all sign vectors when small, otherwise
/// indicators, their negatives, and the unit; plus `i` times each indicator.
fn law_samples(a: &Arc<FinCommAlgebra>) -> Vec<AlgElement> {
    let mut out = if a.dim() <= 3 {
        sign_samples(a)
    } else {
        let mut v: Vec<AlgElement> = (0..a.dim()).map(|o| AlgElement::indicator(a.clone(), 1 << o)).collect();
        v.extend((0..a.dim()).map(|o| AlgElement::indicator(a.clone(), 1 << o).neg()));
        v.push(AlgElement::unit(a.clone()));
        v
    };
    out.extend((0..a.dim()).map(|o| AlgElement::indicator(a.clone(), 1 << o).scalar_mul(&GaussRat::i())));
    out
}

fn algebra_law_violations(a: &Arc<FinCommAlgebra>) -> Vec<String> {
    let s = law_samples(a);
    let one = AlgElement::unit(a.clone());
    let mut out = Vec::new();
    for x in &s {
        if x.mul(&one).ok().as_ref() != Some(x) || x.star().star() != *x {
            out.push(format!("unit or involution fails at {x}"));
        }
        let sq = x.mul(&x.star()).expect("same parent");
        if !sq.is_positive().unwrap_or(false) {
            out.push(format!("{x}·{x}* is not positive"));
        }
        for y in &s {
            if x.mul(y).ok() != y.mul(x).ok() || x.mul(y).map(|p| p.star()).ok() != y.star().mul(&x.star()).ok() {
                out.push(format!("commutativity or star fails at {x}, {y}"));
            }
        }
    }
    out
}

/// Check every fibre algebra and every listed inclusion: algebra laws on
/// samples, inclusions total, surjective (so unital and injective), *-hom
/// laws including positivity, and agreement of composites.
pub fn check_componentwise_cstar(spec: &DiagramSpec) -> Vec<CstarViolation> {
    let mut out = Vec::new();
    let mut push = |kind, path: String, message: String| out.push(CstarViolation { kind, path, message });
    let mut algebras: BTreeMap<&str, Arc<FinCommAlgebra>> = BTreeMap::new();
    for (name, a) in &spec.algebras {
        match FinCommAlgebra::new(name.clone(), a.outcomes.clone()) {
            Ok(alg) => {
                let alg = Arc::new(alg);
                for m in algebra_law_violations(&alg) {
                    push("AlgebraLaw", format!("algebras.{name}"), m);
                }
                algebras.insert(name, alg);
            }
            Err(e) => push("InvalidAlgebra", format!("algebras.{name}"), e.to_string()),
        }
    }
    for (key, inc) in &spec.inclusions {
        let path = format!("inclusions.{key}");
        let Some((c, d)) = parse_edge_key(key) else {
            push("Schema", path, "key must have the form `C<=D`".into());
            continue;
        };
        let (Some(src), Some(tgt)) = (algebras.get(c), algebras.get(d)) else {
            push("Schema", path, "unknown context".into());
            continue;
        };
        match AlgebraHom::new(src.clone(), tgt.clone(), &inc.outcome_map) {
            Ok(h) => {
                for m in hom_law_violations(&h, &law_samples(src)) {
                    push("NotStarHom", path.clone(), m);
                }
            }
            Err(e) => push("NotUnitalInclusion", path, e.to_string()),
        }
    }
    if out.is_empty() {
        if let Err(e) = ContextDiagram::from_spec(spec) {
            let path = e.path().unwrap_or_default().to_string();
            out.push(CstarViolation { kind: "NotFunctorial", path, message: e.to_string() });
        }
    }
    out
}

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraHom, FinCommAlgebra};
use crate::error::{parse_json, Error, Result};
use crate::lattice::{build_la, induced_hom, LatticeHom, LA};
use crate::poset::{bits, FinPoset, PosetIdeal};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub le: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub outcomes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionSpec {
    /// Target outcome to source outcome.
    pub outcome_map: BTreeMap<String, String>,
}

/// JSON form of a [`ContextDiagram`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    pub poset: PosetSpec,
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default)]
    pub inclusions: BTreeMap<String, InclusionSpec>,
}

impl DiagramSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text)
    }
}

impl PosetSpec {
    pub fn build(&self) -> Result<FinPoset> {
        FinPoset::from_pairs(self.elements.clone(), &self.le).map_err(|e| match e {
            Error::InvalidPoset(m) => Error::diagram("poset", m),
            other => other,
        })
    }
}

/// Split an inclusion key `"C<=D"`.
pub(crate) fn parse_edge_key(key: &str) -> Option<(&str, &str)> {
    let (c, d) = key.split_once("<=")?;
    Some((c.trim(), d.trim()))
}

/// A finite poset of contexts with a commutative algebra at each context and
/// unital inclusions along the order.
#[derive(Clone, Debug)]
pub struct ContextDiagram {
    poset: FinPoset,
    algebras: Vec<Arc<FinCommAlgebra>>,
    las: Vec<LA>,
    homs: BTreeMap<(usize, usize), AlgebraHom>,
    lat_homs: BTreeMap<(usize, usize), LatticeHom>,
}

impl PartialEq for ContextDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset
            && self.algebras.iter().zip(&other.algebras).all(|(a, b)| a.outcomes() == b.outcomes())
            && self.homs.len() == other.homs.len()
            && self.homs.iter().zip(&other.homs).all(|((k1, h1), (k2, h2))| k1 == k2 && h1.outcome_map() == h2.outcome_map())
    }
}

impl Eq for ContextDiagram {}

impl ContextDiagram {
    /// Validate and complete a diagram from some of its inclusions.
    ///
    /// Every covering pair needs an inclusion unless its source has a single
    /// outcome, in which case the map is forced. All composites along
    /// different paths must agree, and listed non-covering inclusions must
    /// agree with the composite.
    pub fn new(
        poset: FinPoset,
        algebras: Vec<Arc<FinCommAlgebra>>,
        inclusions: Vec<(usize, usize, AlgebraHom)>,
    ) -> Result<Self> {
        let n = poset.len();
        if algebras.len() != n {
            return Err(Error::diagram("algebras", format!("{} algebras for {} contexts", algebras.len(), n)));
        }
        let label = |i: usize| poset.label(i).to_string();
        let key = |c: usize, d: usize| format!("inclusions.{}<={}", label(c), label(d));
        let mut given: BTreeMap<(usize, usize), AlgebraHom> = BTreeMap::new();
        for (c, d, h) in inclusions {
            if c >= n || d >= n {
                return Err(Error::diagram("inclusions", "context index out of range"));
            }
            if !poset.leq(c, d) {
                return Err(Error::diagram(key(c, d), format!("`{}` is not below `{}`", label(c), label(d))));
            }
            if **h.source() != *algebras[c] || **h.target() != *algebras[d] {
                return Err(Error::diagram(key(c, d), "inclusion does not connect the contexts' algebras"));
            }
            if c == d && h.outcome_map() != AlgebraHom::identity(algebras[c].clone()).outcome_map() {
                return Err(Error::diagram(key(c, d), "inclusion of a context into itself must be the identity"));
            }
            if given.insert((c, d), h).is_some() {
                return Err(Error::diagram(key(c, d), "inclusion listed twice"));
            }
        }
        let mut cover_homs = BTreeMap::new();
        for (c, d) in poset.covers() {
            let h = match given.get(&(c, d)) {
                Some(h) => h.clone(),
                None if algebras[c].dim() == 1 => {
                    AlgebraHom::from_indices(algebras[c].clone(), algebras[d].clone(), vec![0; algebras[d].dim()])?
                }
                None => return Err(Error::diagram(key(c, d), "missing inclusion for a covering pair")),
            };
            cover_homs.insert((c, d), h);
        }
        let mut homs: BTreeMap<(usize, usize), AlgebraHom> = BTreeMap::new();
        for &c in poset.linear_extension().iter().rev() {
            homs.insert((c, c), AlgebraHom::identity(algebras[c].clone()));
            for d in bits(poset.up(c)).filter(|&d| d != c) {
                let mut found: Option<AlgebraHom> = None;
                for (&(_, e), first) in cover_homs.range((c, 0)..(c + 1, 0)) {
                    if !poset.leq(e, d) {
                        continue;
                    }
                    let h = first.then(&homs[&(e, d)])?;
                    match &found {
                        Some(prev) if prev.outcome_map() != h.outcome_map() => {
                            return Err(Error::diagram(
                                "inclusions",
                                format!("composites from `{}` to `{}` disagree", label(c), label(d)),
                            ));
                        }
                        Some(_) => {}
                        None => found = Some(h),
                    }
                }
                homs.insert((c, d), found.expect("d lies above some cover of c"));
            }
        }
        for ((c, d), h) in &given {
            if homs[&(*c, *d)].outcome_map() != h.outcome_map() {
                return Err(Error::diagram(key(*c, *d), "listed inclusion disagrees with the composite"));
            }
        }
        let las = algebras.iter().map(|a| build_la(a.clone())).collect::<Result<Vec<_>>>()?;
        let lat_homs = homs
            .iter()
            .map(|(&(c, d), h)| Ok(((c, d), induced_hom(h, &las[c], &las[d])?)))
            .collect::<Result<_>>()?;
        Ok(ContextDiagram { poset, algebras, las, homs, lat_homs })
    }

    pub fn from_spec(spec: &DiagramSpec) -> Result<Self> {
        let poset = spec.poset.build()?;
        for name in spec.algebras.keys() {
            if poset.index_of(name).is_none() {
                return Err(Error::diagram(format!("algebras.{name}"), "not an element of the poset"));
            }
        }
        let algebras = poset
            .labels()
            .iter()
            .map(|c| {
                let a = spec.algebras.get(c).ok_or_else(|| Error::diagram(format!("algebras.{c}"), "missing algebra"))?;
                FinCommAlgebra::new(c.clone(), a.outcomes.clone())
                    .map(Arc::new)
                    .map_err(|e| Error::diagram(format!("algebras.{c}.outcomes"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut inclusions = Vec::new();
        for (k, inc) in &spec.inclusions {
            let path = format!("inclusions.{k}");
            let (c, d) = parse_edge_key(k).ok_or_else(|| Error::diagram(&path, "key must have the form `C<=D`"))?;
            let idx = |x: &str| poset.index_of(x).ok_or_else(|| Error::diagram(&path, format!("unknown context `{x}`")));
            let (c, d) = (idx(c)?, idx(d)?);
            let h = AlgebraHom::new(algebras[c].clone(), algebras[d].clone(), &inc.outcome_map)
                .map_err(|e| Error::diagram(format!("{path}.outcome_map"), e.to_string()))?;
            inclusions.push((c, d, h));
        }
        ContextDiagram::new(poset, algebras, inclusions)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        ContextDiagram::from_spec(&DiagramSpec::from_json(text)?)
    }

    /// The JSON form, listing the inclusions of covering pairs.
    pub fn to_spec(&self) -> DiagramSpec {
        let p = &self.poset;
        let covers = p.covers();
        DiagramSpec {
            poset: PosetSpec {
                elements: p.labels().to_vec(),
                le: covers.iter().map(|&(c, d)| (p.label(c).to_string(), p.label(d).to_string())).collect(),
            },
            algebras: p
                .labels()
                .iter()
                .zip(&self.algebras)
                .map(|(l, a)| (l.clone(), AlgebraSpec { outcomes: a.outcomes().to_vec() }))
                .collect(),
            inclusions: covers
                .iter()
                .map(|&(c, d)| {
                    let key = format!("{}<={}", p.label(c), p.label(d));
                    (key, InclusionSpec { outcome_map: self.homs[&(c, d)].outcome_map_labels() })
                })
                .collect(),
        }
    }

    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn label(&self, c: usize) -> &str {
        self.poset.label(c)
    }

    pub fn context(&self, label: &str) -> Result<usize> {
        self.poset.index_of(label).ok_or_else(|| Error::diagram("poset.elements", format!("unknown context `{label}`")))
    }

    pub fn algebra(&self, c: usize) -> &Arc<FinCommAlgebra> {
        &self.algebras[c]
    }

    pub fn la(&self, c: usize) -> &LA {
        &self.las[c]
    }

    pub fn ideals(&self) -> Vec<PosetIdeal> {
        self.poset.ideals()
    }

    pub fn hom(&self, c: usize, d: usize) -> Result<&AlgebraHom> {
        self.homs.get(&(c, d)).ok_or_else(|| self.not_comparable(c, d))
    }

    /// `L_{CD}`.
    pub fn lat_hom(&self, c: usize, d: usize) -> Result<&LatticeHom> {
        self.lat_homs.get(&(c, d)).ok_or_else(|| self.not_comparable(c, d))
    }

    fn not_comparable(&self, c: usize, d: usize) -> Error {
        let name = |i: usize| if i < self.len() { self.label(i).to_string() } else { i.to_string() };
        Error::NotComparable(name(c), name(d))
    }

    /// The sub-diagram on `mask`, with the original indices of its contexts.
    pub fn restrict(&self, mask: u64) -> Result<(ContextDiagram, Vec<usize>)> {
        let (poset, keep) = self.poset.restrict(mask);
        let algebras = keep.iter().map(|&i| self.algebras[i].clone()).collect();
        let mut inclusions = Vec::new();
        for (a, &c) in keep.iter().enumerate() {
            for (b, &d) in keep.iter().enumerate() {
                if let Some(h) = self.homs.get(&(c, d)) {
                    inclusions.push((a, b, h.clone()));
                }
            }
        }
        Ok((ContextDiagram::new(poset, algebras, inclusions)?, keep))
    }

    /// Every inclusion, including identities and composites.
    pub fn all_homs(&self) -> impl Iterator<Item = (usize, usize, &AlgebraHom)> {
        self.homs.iter().map(|(&(c, d), h)| (c, d, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = r#"{"poset": {"elements": ["C1","D"], "le": [["C1","D"]]},
        "algebras": {"C1": {"outcomes": ["*"]}, "D": {"outcomes": ["u","d"]}},
        "inclusions": {"C1<=D": {"outcome_map": {"u":"*","d":"*"}}}}"#;

    #[test]
    fn parses_two_context_diagram() {
        let d = ContextDiagram::from_json(TWO).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.algebra(1).outcomes(), ["d", "u"]);
        assert_eq!(d.hom(0, 1).unwrap().outcome_map(), [0, 0]);
        assert!(matches!(d.hom(1, 0), Err(Error::NotComparable(..))));
        let back = ContextDiagram::from_spec(&d.to_spec()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn forced_inclusions_may_be_omitted() {
        let text = TWO.replace(r#""inclusions": {"C1<=D": {"outcome_map": {"u":"*","d":"*"}}}"#, r#""inclusions": {}"#);
        assert!(ContextDiagram::from_json(&text).is_ok());
    }

    #[test]
    fn errors_name_paths() {
        let bad_map = TWO.replace(r#"{"u":"*","d":"*"}"#, r#"{"u":"*"}"#);
        let e = ContextDiagram::from_json(&bad_map).unwrap_err();
        assert_eq!(e.path(), Some("inclusions.C1<=D.outcome_map"));
        let cyc = TWO.replace(r#"[["C1","D"]]"#, r#"[["C1","D"],["D","C1"]]"#);
        assert_eq!(ContextDiagram::from_json(&cyc).unwrap_err().path(), Some("poset"));
        let missing = TWO.replace(r#""D": {"outcomes": ["u","d"]}"#, r#""E": {"outcomes": ["u"]}"#);
        assert_eq!(ContextDiagram::from_json(&missing).unwrap_err().path(), Some("algebras.E"));
        let typed = TWO.replace(r#"["u","d"]"#, "7");
        assert_eq!(ContextDiagram::from_json(&typed).unwrap_err().path(), Some("algebras.D.outcomes"));
    }

    #[test]
    fn composites_must_agree() {
        // A square C <= X, Y <= D where the two paths send D's outcomes differently.
        let text = r#"{"poset": {"elements": ["C","X","Y","D"], "le": [["C","X"],["C","Y"],["X","D"],["Y","D"]]},
            "algebras": {"C": {"outcomes": ["a","b"]}, "X": {"outcomes": ["a","b"]}, "Y": {"outcomes": ["a","b"]}, "D": {"outcomes": ["a","b"]}},
            "inclusions": {"C<=X": {"outcome_map": {"a":"a","b":"b"}}, "C<=Y": {"outcome_map": {"a":"a","b":"b"}},
                           "X<=D": {"outcome_map": {"a":"a","b":"b"}}, "Y<=D": {"outcome_map": {"a":"b","b":"a"}}}}"#;
        let e = ContextDiagram::from_json(text).unwrap_err();
        assert_eq!(e.kind(), "InvalidDiagram");
        assert_eq!(e.path(), Some("inclusions"));
    }

    #[test]
    fn restriction_keeps_inclusions() {
        let d = ContextDiagram::from_json(TWO).unwrap();
        let (sub, keep) = d.restrict(0b10).unwrap();
        assert_eq!(keep, vec![1]);
        assert_eq!(sub.algebra(0).outcomes(), ["d", "u"]);
    }
}

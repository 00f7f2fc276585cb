//! Finitely presented distributive lattices.
//!
//! [`Presentation::present`] builds the quotient of the free bounded
//! distributive lattice by the congruence generated by the relations. It
//! works semantically: a lattice homomorphism to `2` is an assignment of the
//! generators to `{0, 1}`, the quotient's prime filters are exactly the
//! assignments that satisfy every relation, and the quotient is the lattice
//! of up-sets of those assignments.
//!
//! [`Presentation::congruence_closure`] is a second, syntactic engine: it
//! materializes the free lattice as normal forms and saturates the relation
//! pairs under meets and joins with every element. The two are cross-checked
//! in the tests and by `bohrspec verify`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::dlattice::{DLattice, LatElem};
use super::expr::{normalize, parse_expr, LatExpr, NormalForm};
use crate::error::{parse_json, Error, Result};
use crate::poset::{bits, FinPoset};

/// Presentations with more generators are rejected.
pub const MAX_GENERATORS: usize = 6;

/// The syntactic engine materializes the free lattice, whose size grows
/// doubly exponentially (20, 168, 7581 for 3, 4, 5 generators).
pub const MAX_CONGRUENCE_GENERATORS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<(LatExpr, LatExpr)>,
}

/// JSON form: `{"generators": [...], "relations": [["lhs", "rhs"], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: Vec<(LatExpr, LatExpr)>) -> Result<Self> {
        if generators.len() > MAX_GENERATORS {
            return Err(Error::TooManyGenerators { count: generators.len(), max: MAX_GENERATORS });
        }
        let declared: BTreeSet<String> = generators.iter().cloned().collect();
        if declared.len() != generators.len() {
            return Err(Error::Schema { path: "generators".into(), message: "duplicate generator".into() });
        }
        for (l, r) in &relations {
            for g in l.generators().union(&r.generators()) {
                if !declared.contains(g) {
                    return Err(Error::UnknownGenerator(g.clone()));
                }
            }
        }
        Ok(Presentation { generators, relations })
    }

    pub fn from_spec(spec: &PresentationSpec) -> Result<Self> {
        let relations = spec
            .relations
            .iter()
            .enumerate()
            .map(|(i, (l, r))| {
                let at = |side: usize, e: Error| match e {
                    Error::Parse { offset, message } => {
                        Error::Schema { path: format!("relations[{i}][{side}]"), message: format!("offset {offset}: {message}") }
                    }
                    other => other,
                };
                Ok((parse_expr(l).map_err(|e| at(0, e))?, parse_expr(r).map_err(|e| at(1, e))?))
            })
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(spec.generators.clone(), relations)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Presentation::from_spec(&parse_json(text)?)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[(LatExpr, LatExpr)] {
        &self.relations
    }

    pub fn declared(&self) -> BTreeSet<String> {
        self.generators.iter().cloned().collect()
    }

    fn holds_at(&self, e: &LatExpr, assignment: u64) -> Result<bool> {
        e.holds(&|g| {
            let i = self.generators.iter().position(|x| x == g).ok_or_else(|| Error::UnknownGenerator(g.to_string()))?;
            Ok(assignment >> i & 1 == 1)
        })
    }

    /// Build the presented lattice.
    pub fn present(&self) -> Result<PresentedLattice> {
        let n = self.generators.len();
        let mut valid = Vec::new();
        for s in 0..1u64 << n {
            let mut ok = true;
            for (l, r) in &self.relations {
                if self.holds_at(l, s)? != self.holds_at(r, s)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                valid.push(s);
            }
        }
        let labels: Vec<String> = valid.iter().map(|&s| self.assignment_label(s)).collect();
        let order = FinPoset::from_leq(labels.clone(), |a, b| valid[a] & !valid[b] == 0)?;
        let lattice = DLattice::from_sets(labels, order.upsets())?;
        Ok(PresentedLattice { presentation: self.clone(), valid, lattice: Arc::new(lattice) })
    }

    fn assignment_label(&self, s: u64) -> String {
        let names: Vec<&str> = bits(s).map(|i| self.generators[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Syntactic quotient by congruence closure on the free lattice.
    pub fn congruence_closure(&self) -> Result<CongruenceQuotient> {
        if self.generators.len() > MAX_CONGRUENCE_GENERATORS {
            return Err(Error::TooManyGenerators { count: self.generators.len(), max: MAX_CONGRUENCE_GENERATORS });
        }
        let declared = self.declared();
        let free = free_lattice(&self.generators);
        let index: HashMap<&NormalForm, usize> = free.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let meet_tab: Vec<Vec<usize>> =
            free.iter().map(|a| free.iter().map(|b| index[&a.meet(b)]).collect()).collect();
        let join_tab: Vec<Vec<usize>> =
            free.iter().map(|a| free.iter().map(|b| index[&a.join(b)]).collect()).collect();

        let mut uf = UnionFind::new(free.len());
        let mut work = Vec::new();
        for (l, r) in &self.relations {
            let (a, b) = (index[&normalize(l, &declared)?], index[&normalize(r, &declared)?]);
            if uf.union(a, b) {
                work.push((a, b));
            }
        }
        // Translating each merged pair by every element suffices: any two
        // congruent elements are linked by a chain of merged pairs.
        while let Some((a, b)) = work.pop() {
            for z in 0..free.len() {
                for tab in [&meet_tab, &join_tab] {
                    let (x, y) = (tab[a][z], tab[b][z]);
                    if uf.union(x, y) {
                        work.push((x, y));
                    }
                }
            }
        }
        let mut class_of = vec![0; free.len()];
        let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, slot) in class_of.iter_mut().enumerate() {
            let root = uf.find(i);
            let next = reps.len();
            *slot = *reps.entry(root).or_insert(next);
        }
        Ok(CongruenceQuotient { declared, free, class_of, classes: reps.len(), meet_tab })
    }
}

/// All elements of the free bounded distributive lattice on `gens`.
pub fn free_lattice(gens: &[String]) -> Vec<NormalForm> {
    let mut set: BTreeSet<NormalForm> = [NormalForm::top(), NormalForm::bottom()].into_iter().collect();
    set.extend(gens.iter().map(|g| NormalForm::gen(g)));
    loop {
        let cur: Vec<NormalForm> = set.iter().cloned().collect();
        let before = set.len();
        for a in &cur {
            for b in &cur {
                set.insert(a.meet(b));
                set.insert(a.join(b));
            }
        }
        if set.len() == before {
            return cur;
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Result of [`Presentation::congruence_closure`].
#[derive(Clone, Debug)]
pub struct CongruenceQuotient {
    declared: BTreeSet<String>,
    free: Vec<NormalForm>,
    class_of: Vec<usize>,
    classes: usize,
    meet_tab: Vec<Vec<usize>>,
}

impl CongruenceQuotient {
    pub fn len(&self) -> usize {
        self.classes
    }

    pub fn is_empty(&self) -> bool {
        self.classes == 0
    }

    pub fn free_elements(&self) -> &[NormalForm] {
        &self.free
    }

    pub fn class_of_index(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn class_of(&self, e: &LatExpr) -> Result<usize> {
        let nf = normalize(e, &self.declared)?;
        let i = self.free.iter().position(|f| *f == nf).expect("free lattice is complete");
        Ok(self.class_of[i])
    }

    /// `[x] <= [y]` iff `[x ∧ y] = [x]`.
    pub fn leq_index(&self, x: usize, y: usize) -> bool {
        self.class_of[self.meet_tab[x][y]] == self.class_of[x]
    }
}

/// A presented lattice together with its quotient map.
#[derive(Clone, Debug)]
pub struct PresentedLattice {
    presentation: Presentation,
    valid: Vec<u64>,
    lattice: Arc<DLattice>,
}

impl PresentedLattice {
    pub fn lattice(&self) -> &Arc<DLattice> {
        &self.lattice
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Assignments of generators (as masks) satisfying every relation.
    pub fn models(&self) -> &[u64] {
        &self.valid
    }

    /// The quotient map from expressions to lattice elements.
    pub fn eval(&self, e: &LatExpr) -> Result<LatElem> {
        let mut mask = 0u64;
        for (k, &s) in self.valid.iter().enumerate() {
            if self.presentation.holds_at(e, s)? {
                mask |= 1 << k;
            }
        }
        self.lattice.check(LatElem::from_bits(mask))
    }

    /// A canonical expression for `e`: the join of the meets of the minimal
    /// models in `e`.
    pub fn normal_form(&self, e: LatElem) -> NormalForm {
        NormalForm::from_terms(bits(e.bits()).map(|k| {
            bits(self.valid[k]).map(|i| self.presentation.generators[i].clone()).collect::<BTreeSet<_>>()
        }))
    }

    pub fn display(&self, e: LatElem) -> String {
        self.normal_form(e).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(gens: &[&str], rels: &[(&str, &str)]) -> Presentation {
        let spec = PresentationSpec {
            generators: gens.iter().map(|s| s.to_string()).collect(),
            relations: rels.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        };
        Presentation::from_spec(&spec).unwrap()
    }

    #[test]
    fn free_on_two_generators_has_six_elements() {
        let p = pres(&["g1", "g2"], &[]);
        assert_eq!(p.present().unwrap().lattice().len(), 6);
        assert_eq!(p.congruence_closure().unwrap().len(), 6);
    }

    #[test]
    fn complementary_pair_gives_boolean_square() {
        let p = pres(&["g1", "g2"], &[("g1 & g2", "F"), ("g1 v g2", "T")]);
        let pl = p.present().unwrap();
        assert_eq!(pl.lattice().len(), 4);
        assert!(pl.lattice().is_boolean());
        assert_eq!(p.congruence_closure().unwrap().len(), 4);
    }

    #[test]
    fn collapse_to_two_elements() {
        let p = pres(&["g"], &[("g", "T")]);
        assert_eq!(p.present().unwrap().lattice().len(), 2);
        assert_eq!(p.congruence_closure().unwrap().len(), 2);
    }

    #[test]
    fn degenerate_presentation() {
        let p = pres(&["g"], &[("T", "F")]);
        let pl = p.present().unwrap();
        assert!(pl.lattice().is_degenerate());
        assert_eq!(p.congruence_closure().unwrap().len(), 1);
    }

    #[test]
    fn guards() {
        let gens: Vec<String> = (0..7).map(|i| format!("g{i}")).collect();
        assert!(matches!(Presentation::new(gens, vec![]), Err(Error::TooManyGenerators { .. })));
        let spec = PresentationSpec { generators: vec!["a".into()], relations: vec![("a".into(), "b".into())] };
        assert_eq!(Presentation::from_spec(&spec), Err(Error::UnknownGenerator("b".into())));
        let bad = PresentationSpec { generators: vec!["a".into()], relations: vec![("a &".into(), "a".into())] };
        let err = Presentation::from_spec(&bad).unwrap_err();
        assert_eq!(err.path(), Some("relations[0][0]"));
    }

    #[test]
    fn normal_form_display() {
        let pl = pres(&["g1", "g2"], &[]).present().unwrap();
        let e = pl.eval(&parse_expr("(g1 & g2) v g1").unwrap()).unwrap();
        assert_eq!(pl.display(e), "g1");
        assert_eq!(pl.display(pl.lattice().top()), "T");
        assert_eq!(pl.display(pl.lattice().bottom()), "F");
    }

    #[test]
    fn free_lattice_sizes() {
        let g = |n: usize| (0..n).map(|i| format!("g{i}")).collect::<Vec<_>>();
        let sizes: Vec<usize> = (0..=3).map(|n| free_lattice(&g(n)).len()).collect();
        assert_eq!(sizes, vec![2, 3, 6, 20]);
    }
}

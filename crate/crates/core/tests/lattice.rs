use std::collections::BTreeSet;
use std::sync::Arc;

use bohrspec::algebra::{sign_samples, AlgebraHom, FinCommAlgebra};
use bohrspec::lattice::{
    build_la, check_la_axioms, free_lattice, induced_hom, normalize, parse_expr, parse_query, LatExpr, Presentation, Query,
};
use proptest::prelude::*;

fn qi(k: usize) -> Arc<FinCommAlgebra> {
    Arc::new(FinCommAlgebra::standard(k).unwrap())
}

fn expr(gens: &'static [&'static str]) -> impl Strategy<Value = LatExpr> {
    let leaf = prop_oneof![
        1 => Just(LatExpr::Top),
        1 => Just(LatExpr::Bottom),
        6 => prop::sample::select(gens).prop_map(LatExpr::gen),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.meet(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.join(b)),
        ]
    })
}

const XYZ: &[&str] = &["x", "y", "z"];
const G12: &[&str] = &["g1", "g2"];

fn declared(gens: &[&str]) -> BTreeSet<String> {
    gens.iter().map(|s| s.to_string()).collect()
}

proptest! {
    #[test]
    fn normalize_is_idempotent_and_a_homomorphism(e1 in expr(XYZ), e2 in expr(XYZ)) {
        let d = declared(XYZ);
        let (n1, n2) = (normalize(&e1, &d).unwrap(), normalize(&e2, &d).unwrap());
        prop_assert_eq!(normalize(&n1.to_expr(), &d).unwrap(), n1.clone());
        prop_assert_eq!(normalize(&e1.clone().meet(e2.clone()), &d).unwrap(), n1.meet(&n2));
        prop_assert_eq!(normalize(&e1.join(e2), &d).unwrap(), n1.join(&n2));
    }

    #[test]
    fn display_round_trips(e in expr(XYZ)) {
        let d = declared(XYZ);
        let n = normalize(&e, &d).unwrap();
        let reparsed = parse_expr(&n.to_string()).unwrap();
        prop_assert_eq!(normalize(&reparsed, &d).unwrap(), n);
    }

    #[test]
    fn semantic_and_syntactic_quotients_agree(rels in prop::collection::vec((expr(G12), expr(G12)), 0..3)) {
        let p = Presentation::new(G12.iter().map(|s| s.to_string()).collect(), rels.clone()).unwrap();
        let sem = p.present().unwrap();
        let syn = p.congruence_closure().unwrap();
        prop_assert_eq!(sem.lattice().len(), syn.len());
        for (l, r) in &rels {
            prop_assert_eq!(sem.eval(l).unwrap(), sem.eval(r).unwrap());
        }
        let free = syn.free_elements();
        for i in 0..free.len() {
            for j in 0..free.len() {
                let same_sem = sem.eval(&free[i].to_expr()).unwrap() == sem.eval(&free[j].to_expr()).unwrap();
                prop_assert_eq!(syn.class_of_index(i) == syn.class_of_index(j), same_sem);
            }
        }
    }
}

#[test]
fn free_lattice_sizes() {
    let sizes: Vec<usize> = (0..=3).map(|n| free_lattice(&(0..n).map(|i| format!("g{i}")).collect::<Vec<_>>()).len()).collect();
    assert_eq!(sizes, vec![2, 3, 6, 20]);
}

#[test]
fn absorption_query_on_free2() {
    let p = Presentation::from_json(bohrspec::fixtures::FREE2).unwrap().present().unwrap();
    let Query::Leq(l, r) = parse_query("(g1 & g2) v g1 <= g1").unwrap() else { panic!("expected <=") };
    assert!(p.lattice().leq(p.eval(&l).unwrap(), p.eval(&r).unwrap()));
    assert_eq!(p.lattice().len(), 6);
}

#[test]
fn boolean2_has_four_elements() {
    let p = Presentation::from_json(bohrspec::fixtures::BOOLEAN2).unwrap().present().unwrap();
    assert_eq!(p.lattice().len(), 4);
    assert!(p.lattice().is_boolean());
}

#[test]
fn la_axioms_and_boolean_shape() {
    for k in 1..=3 {
        let la = build_la(qi(k)).unwrap();
        assert!(check_la_axioms(&la, &sign_samples(la.algebra())).unwrap().is_empty());
    }
    for k in 1..=4 {
        let la = build_la(qi(k)).unwrap();
        assert_eq!(la.lattice().len(), 1 << k);
        assert!(la.lattice().is_boolean());
        let image: BTreeSet<_> = sign_samples(la.algebra()).iter().map(|a| la.d(a).unwrap()).collect();
        assert_eq!(image.len(), 1 << k);
    }
}

#[test]
fn induced_homs_are_functorial() {
    let (a, b, c) = (qi(2), qi(3), qi(4));
    let h1 = AlgebraHom::from_indices(a.clone(), b.clone(), vec![1, 0, 1]).unwrap();
    let h2 = AlgebraHom::from_indices(b.clone(), c.clone(), vec![2, 0, 1, 2]).unwrap();
    let (la, lb, lc) = (build_la(a.clone()).unwrap(), build_la(b).unwrap(), build_la(c).unwrap());
    let composite = induced_hom(&h1.then(&h2).unwrap(), &la, &lc).unwrap();
    let stepwise = induced_hom(&h1, &la, &lb).unwrap().then(&induced_hom(&h2, &lb, &lc).unwrap()).unwrap();
    let id = induced_hom(&AlgebraHom::identity(a), &la, &la).unwrap();
    for &e in la.lattice().elements() {
        assert_eq!(composite.apply(e).unwrap(), stepwise.apply(e).unwrap());
        assert_eq!(id.apply(e).unwrap(), e);
    }
    assert!(composite.check_preserves().is_empty());
}

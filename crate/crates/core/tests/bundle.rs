use std::sync::Arc;

use bohrspec::bundle::{
    apply_fibre_map, check_colimit, check_frame, check_opfibration_specialization, check_pullback, external_opens,
    external_points, internal_frame, points_via_top, pullback, sier_points, ContextDiagram, DEFAULT_MAX_OPENS,
};
use bohrspec::fixtures;
use bohrspec::oracle;
use bohrspec::poset::FinPoset;
use bohrspec::spectrum::rounded_ideals;
use proptest::prelude::*;

fn point() -> FinPoset {
    FinPoset::new(vec!["*".into()], &[]).unwrap()
}

#[test]
fn two_context_counts() {
    let d = fixtures::bohr(2);
    assert_eq!(external_points(&d).unwrap().len(), 3);
    assert_eq!(external_opens(&d, DEFAULT_MAX_OPENS).unwrap().len(), 5);
    assert_eq!(sier_points(&d).unwrap().len(), 6);
    let frame = internal_frame(&d, DEFAULT_MAX_OPENS).unwrap();
    let (b, t) = (d.poset().bottom().unwrap(), d.poset().top().unwrap());
    assert_eq!((frame.values[b].len(), frame.values[t].len()), (5, 4));
}

#[test]
fn two_context_document_matches_bohr2() {
    let d = fixtures::two_context();
    assert_eq!(external_points(&d).unwrap().len(), 3);
    assert_eq!(external_opens(&d, DEFAULT_MAX_OPENS).unwrap().len(), 5);
}

#[test]
fn bohr_three_points_per_ideal() {
    let d = fixtures::bohr(3);
    assert_eq!(external_points(&d).unwrap().len(), 10);
    let per: Vec<usize> = check_colimit(&d).unwrap().iter().map(|c| c.direct).collect();
    assert_eq!(per, vec![1, 2, 2, 2, 3]);
    for ideal in d.ideals() {
        let direct = external_points(&d).unwrap().into_iter().filter(|p| p.ideal() == ideal).count();
        assert_eq!(points_via_top(&d, ideal).unwrap().len(), direct);
    }
}

#[test]
fn shipped_diagrams_match_brute_force() {
    for (name, d) in fixtures::diagrams().unwrap() {
        let pts = external_points(&d).unwrap();
        let opens = external_opens(&d, DEFAULT_MAX_OPENS).unwrap();
        assert_eq!(pts.len(), oracle::external_points(&d).len(), "{name} points");
        assert_eq!(opens.len(), oracle::external_opens(&d).len(), "{name} opens");
        assert_eq!(sier_points(&d).unwrap().len(), oracle::sier_points(&d).len(), "{name} sier points");
        let frame = check_frame(&opens, &pts).unwrap();
        assert!(frame.distributive && frame.closed && frame.evaluation_failures == 0, "{name}: {frame:?}");
        assert!(check_opfibration_specialization(&d).unwrap().ok(), "{name}");
    }
}

#[test]
fn pullback_along_a_point() {
    let d = fixtures::bohr(2);
    let (b, t) = (d.poset().bottom().unwrap(), d.poset().top().unwrap());
    let at_top = Arc::new(pullback(&d, &point(), &[t]).unwrap());
    let at_bottom = Arc::new(pullback(&d, &point(), &[b]).unwrap());
    assert_eq!(external_points(&at_top).unwrap().len(), 2);
    assert_eq!(external_points(&at_bottom).unwrap().len(), 1);
    assert!(check_pullback(&d, &point(), &[t], DEFAULT_MAX_OPENS).unwrap().ok());
    let id: Vec<usize> = (0..d.len()).collect();
    let r = check_pullback(&d, d.poset(), &id, DEFAULT_MAX_OPENS).unwrap();
    assert!(r.ok());
    assert_eq!(r.pulled_points, 3);
}

#[test]
fn pullback_rejects_non_monotone_maps() {
    let d = fixtures::bohr(2);
    let (b, t) = (d.poset().bottom().unwrap(), d.poset().top().unwrap());
    let e = pullback(&d, &FinPoset::chain(2), &[t, b]).unwrap_err();
    assert_eq!(e.kind(), "NotMonotone");
}

#[test]
fn fibre_maps_preserve_bounds() {
    let d = fixtures::bohr(3);
    for c in 0..d.len() {
        for e in 0..d.len() {
            if d.poset().leq(c, e) {
                let (lc, le) = (d.la(c).lattice(), d.la(e).lattice());
                assert_eq!(apply_fibre_map(&d, c, e, lc.top()).unwrap(), le.top());
                assert_eq!(apply_fibre_map(&d, c, e, lc.bottom()).unwrap(), le.bottom());
            }
        }
    }
}

fn monotone_map(d: Arc<ContextDiagram>) -> impl Strategy<Value = (usize, Vec<usize>)> {
    let shapes: Vec<FinPoset> = (1..=3).flat_map(oracle::all_posets).collect();
    (0..shapes.len()).prop_flat_map(move |i| {
        let maps = shapes[i].monotone_maps_into(d.poset());
        (Just(i), prop::sample::select(maps))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pullback_is_geometric((i, f) in monotone_map(fixtures::bohr(3))) {
        let shapes: Vec<FinPoset> = (1..=3).flat_map(oracle::all_posets).collect();
        let d = fixtures::bohr(3);
        prop_assert!(check_pullback(&d, &shapes[i], &f, DEFAULT_MAX_OPENS).unwrap().ok());
    }

    #[test]
    fn fibre_maps_compose(c in 0usize..5, e in 0usize..5, f in 0usize..5) {
        let d = fixtures::bohr(3);
        let p = d.poset();
        prop_assume!(p.leq(c, e) && p.leq(e, f));
        for r in rounded_ideals(d.la(c).lattice()) {
            let g = r.generator();
            let two = apply_fibre_map(&d, e, f, apply_fibre_map(&d, c, e, g).unwrap()).unwrap();
            prop_assert_eq!(two, apply_fibre_map(&d, c, f, g).unwrap());
        }
    }
}

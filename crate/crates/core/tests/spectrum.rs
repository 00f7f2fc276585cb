use std::collections::BTreeSet;
use std::sync::Arc;

use bohrspec::lattice::{DLattice, LatElem};
use bohrspec::oracle;
use bohrspec::poset::FinPoset;
use bohrspec::spectrum::{
    check_ridl_is_opens, interpolate, is_normal, regular_ideals, regular_prime_filters, regular_rounded_bijection,
    rounded_ideals, well_inside, WellInsideRel,
};
use proptest::prelude::*;

fn poset() -> impl Strategy<Value = FinPoset> {
    (0usize..=4).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        prop::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |gens| FinPoset::new((0..n).map(|i| format!("p{i}")).collect(), &gens).unwrap())
    })
}

fn as_set(v: Vec<Vec<LatElem>>) -> BTreeSet<Vec<LatElem>> {
    v.into_iter()
        .map(|mut s| {
            s.sort();
            s
        })
        .collect()
}

proptest! {
    #[test]
    fn well_inside_matches_brute_force(p in poset()) {
        let l = Arc::new(DLattice::downsets_of(&p));
        let rel = WellInsideRel::new(l.clone());
        for &a in l.elements() {
            for &b in l.elements() {
                let fast = well_inside(&l, a, b).unwrap();
                prop_assert_eq!(fast.is_some(), oracle::well_inside(&l, a, b));
                prop_assert_eq!(rel.holds(a, b), fast.is_some());
                if let Some(c) = fast {
                    prop_assert_eq!(l.meet(a, c), l.bottom());
                    prop_assert_eq!(l.join(b, c), l.top());
                }
            }
        }
        prop_assert!(rel.is_transitive());
    }

    #[test]
    fn spectra_match_brute_force(p in poset()) {
        let l = Arc::new(DLattice::downsets_of(&p));
        prop_assert_eq!(is_normal(&l), oracle::is_normal(&l));
        if is_normal(&l) {
            let filters = regular_prime_filters(&l).iter().map(|f| f.members()).collect();
            let rounded = rounded_ideals(&l).iter().map(|r| r.members()).collect();
            let regular = regular_ideals(&l).into_iter().map(|g| l.down(g)).collect();
            prop_assert_eq!(as_set(filters), as_set(oracle::regular_prime_filters(&l)));
            prop_assert_eq!(as_set(rounded), as_set(oracle::rounded_ideals(&l)));
            prop_assert_eq!(as_set(regular), as_set(oracle::regular_ideals(&l)));
            prop_assert!(regular_rounded_bijection(&l).unwrap().ok());
            prop_assert!(check_ridl_is_opens(&l).unwrap().ok());
            prop_assert!(WellInsideRel::new(l.clone()).is_interpolative());
        }
    }

    #[test]
    fn interpolants_sit_between(p in poset()) {
        let l = Arc::new(DLattice::downsets_of(&p));
        prop_assume!(is_normal(&l));
        for &a in l.elements() {
            for &b in l.elements() {
                if oracle::well_inside(&l, a, b) {
                    let c = interpolate(&l, a, b).unwrap();
                    prop_assert!(oracle::well_inside(&l, a, c) && oracle::well_inside(&l, c, b));
                }
            }
        }
    }
}

#[test]
fn three_chain_has_one_point() {
    let l = Arc::new(DLattice::chain(3));
    let r = check_ridl_is_opens(&l).unwrap();
    assert_eq!((r.points.len(), r.opens.len()), (1, 2));
}

#[test]
fn small_poset_census() {
    let counts: Vec<usize> = (0..=4).map(|n| oracle::all_posets(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 3, 19, 219]);
}

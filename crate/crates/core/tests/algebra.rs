use std::sync::Arc;

use bohrspec::algebra::{characters, rat, AlgElement, AlgebraHom, FinCommAlgebra, GaussRat, Rational};
use bohrspec::oracle::cone_closure;
use proptest::prelude::*;

fn qi(k: usize) -> Arc<FinCommAlgebra> {
    Arc::new(FinCommAlgebra::standard(k).unwrap())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (rational(), rational()).prop_map(|(re, im)| GaussRat::new(re, im))
}

fn real_elem(k: usize) -> impl Strategy<Value = AlgElement> {
    prop::collection::vec(rational(), k).prop_map(move |v| AlgElement::from_rationals(qi(k), v).unwrap())
}

fn elem(k: usize) -> impl Strategy<Value = AlgElement> {
    prop::collection::vec(gauss(), k).prop_map(move |v| AlgElement::new(qi(k), v).unwrap())
}

/// A surjection from `kt` target outcomes onto `ks` source outcomes.
fn surjection(ks: usize, kt: usize) -> impl Strategy<Value = Vec<usize>> {
    (prop::collection::vec(0..ks, kt - ks), Just((0..kt).collect::<Vec<_>>()).prop_shuffle()).prop_map(move |(extra, perm)| {
        let base: Vec<usize> = (0..ks).chain(extra).collect();
        perm.iter().map(|&i| base[i]).collect()
    })
}

proptest! {
    #[test]
    fn cone_is_closed(a in real_elem(3), b in real_elem(3), q in (1i64..=5, 1i64..=5)) {
        if a.is_positive().unwrap() && b.is_positive().unwrap() {
            prop_assert!(a.add(&b).unwrap().is_positive().unwrap());
            let s = GaussRat::real(rat(q.0, q.1));
            prop_assert!(a.scalar_mul(&s).is_positive().unwrap());
        }
    }

    #[test]
    fn squares_are_positive(a in elem(3)) {
        prop_assert!(a.mul(&a.star()).unwrap().is_positive().unwrap());
    }

    #[test]
    fn archimedean_bound_is_tight(a in real_elem(3)) {
        let r = a.archimedean_bound().unwrap();
        prop_assert!(r.is_integer());
        prop_assert!(a.shift_down(&r).neg().is_positive().unwrap());
        let below = r - Rational::from_integer(1.into());
        prop_assert!(!a.shift_down(&below).neg().is_positive().unwrap());
    }

    #[test]
    fn homs_commute_with_operations(map in surjection(2, 4), a in elem(2), b in elem(2), s in gauss()) {
        let h = AlgebraHom::from_indices(qi(2), qi(4), map).unwrap();
        let (ha, hb) = (h.apply(&a).unwrap(), h.apply(&b).unwrap());
        prop_assert_eq!(h.apply(&a.add(&b).unwrap()).unwrap(), ha.add(&hb).unwrap());
        prop_assert_eq!(h.apply(&a.mul(&b).unwrap()).unwrap(), ha.mul(&hb).unwrap());
        prop_assert_eq!(h.apply(&a.star()).unwrap(), ha.star());
        prop_assert_eq!(h.apply(&a.scalar_mul(&s)).unwrap(), ha.scalar_mul(&s));
        prop_assert_eq!(h.apply(&AlgElement::unit(qi(2))).unwrap(), AlgElement::unit(qi(4)));
        for chi in characters(&qi(4)) {
            let src = &characters(&qi(2))[h.outcome_map()[chi.outcome()]];
            prop_assert_eq!(chi.apply(&ha).unwrap(), src.apply(&a).unwrap());
        }
    }

    #[test]
    fn composition_is_contravariant(m1 in surjection(2, 3), m2 in surjection(3, 5), a in elem(2)) {
        let h1 = AlgebraHom::from_indices(qi(2), qi(3), m1.clone()).unwrap();
        let h2 = AlgebraHom::from_indices(qi(3), qi(5), m2.clone()).unwrap();
        let h = h1.then(&h2).unwrap();
        let expected: Vec<usize> = m2.iter().map(|&b| m1[b]).collect();
        prop_assert_eq!(h.outcome_map(), &expected[..]);
        prop_assert_eq!(h.apply(&a).unwrap(), h2.apply(&h1.apply(&a).unwrap()).unwrap());
    }
}

#[test]
fn cone_of_squares_matches_positivity() {
    for k in 1..=3 {
        let a = qi(k);
        let cone = cone_closure(&a, 1);
        assert!(cone.iter().all(|x| x.is_positive().unwrap()));
        // Every 0/1/2-valued vector is a sum of two squares of sign vectors.
        assert_eq!(cone.len(), 3usize.pow(k as u32));
    }
}

#[test]
fn non_surjective_maps_are_rejected() {
    let e = AlgebraHom::from_indices(qi(2), qi(2), vec![0, 0]).unwrap_err();
    assert_eq!(e.kind(), "NotSurjective");
}

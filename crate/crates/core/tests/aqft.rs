use bohrspec::aqft::{aqft_points, build_p, check_triples_vs_generic, double_cone_regions, sigma_functor, NetDiagram};
use bohrspec::bundle::external_points;
use bohrspec::fixtures::{self, NETS};
use std::sync::Arc;

fn net(name: &str) -> NetDiagram {
    NetDiagram::from_json(NETS.iter().find(|(n, _)| *n == name).unwrap().1).unwrap()
}

#[test]
fn shipped_nets_agree_with_generic_points() {
    for (name, n) in fixtures::nets() {
        let r = check_triples_vs_generic(&n).unwrap();
        assert!(r.ok(), "{name}: {r:?}");
    }
}

#[test]
fn trivial_chain_has_two_points() {
    let n = net("chain_trivial");
    assert_eq!(aqft_points(&n).unwrap().len(), 2);
    assert_eq!(external_points(&Arc::new(build_p(&n).unwrap())).unwrap().len(), 2);
}

#[test]
fn incomparable_regions_split() {
    let n = net("incomparable");
    let pts = aqft_points(&n).unwrap();
    // No point may pick contexts from both incomparable regions.
    assert!(pts.iter().all(|p| p.regions.len() <= 1));
    assert_eq!(pts.len(), 6);
}

#[test]
fn double_cones_count() {
    let sizes: Vec<usize> = (1..=3).map(|m| double_cone_regions(m).unwrap().len()).collect();
    assert_eq!(sizes, vec![1, 9, 36]);
}

#[test]
fn sigma_functor_covers_every_pair() {
    let n = net("chain_bohr");
    let p = build_p(&n).unwrap();
    let s = sigma_functor(&p);
    assert_eq!(s.objects.len(), p.len());
}

#[test]
fn empty_context_family_is_rejected() {
    let text = r#"{"regions":{"elements":["O"],"le":[]},"net_outcomes":{"O":["a","b"]},"contexts_per_region":{"O":[]}}"#;
    let e = NetDiagram::from_json(text).unwrap_err();
    assert_eq!(e.path(), Some("contexts_per_region.O"));
}

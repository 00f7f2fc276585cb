use bohrspec::bohrify::{check_componentwise_cstar, full_context_poset, set_partitions, user_contexts, BohrSpec, ContextSpec};
use bohrspec::oracle;
use proptest::prelude::*;

fn base(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn named(p: &[Vec<usize>]) -> Vec<Vec<String>> {
    p.iter().map(|b| b.iter().map(|&i| (i + 1).to_string()).collect()).collect()
}

#[test]
fn partition_counts_are_bell_numbers() {
    for n in 0..=6 {
        assert_eq!(set_partitions(n).len() as u64, oracle::bell(n));
    }
    for n in 1..=4 {
        assert_eq!(full_context_poset(n).unwrap().contexts.len() as u64, oracle::bell(n));
    }
    assert_eq!(full_context_poset(6).unwrap_err().kind(), "TooLarge");
}

#[test]
fn shipped_bohr_documents_build() {
    let m2 = BohrSpec::from_json(bohrspec::fixtures::M2).unwrap().build().unwrap();
    let labels: Vec<String> = m2.contexts.iter().map(|c| c.label()).collect();
    assert_eq!(labels, ["1,2", "x:1|2", "z:1|2"]);
    assert_eq!(BohrSpec::from_json(bohrspec::fixtures::BOHR3).unwrap().build().unwrap().contexts.len(), 5);
}

#[test]
fn inconsistent_order_is_rejected() {
    let specs = vec![ContextSpec::Blocks(vec![vec!["1".into()], vec!["2".into(), "3".into()]])];
    let e = user_contexts(base(3), &specs, &[("1|2,3".into(), "1,2,3".into())]).unwrap_err();
    assert_eq!(e.kind(), "InconsistentOrder");
    let e = user_contexts(base(3), &specs, &[("1|2,3".into(), "nope".into())]).unwrap_err();
    assert_eq!(e.path(), Some("bohr.le[0]"));
}

#[test]
fn bad_blocks_report_their_index() {
    let specs = vec![
        ContextSpec::Blocks(vec![vec!["1".into(), "2".into(), "3".into()]]),
        ContextSpec::Blocks(vec![vec!["1".into()], vec!["2".into()]]),
    ];
    let e = user_contexts(base(3), &specs, &[]).unwrap_err();
    assert_eq!(e.path(), Some("bohr.contexts[1]"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn user_contexts_are_componentwise_cstar(
        picks in prop::collection::vec(0usize..15, 0..6),
        frames in prop::collection::vec(prop::option::of(prop::sample::select(vec!["x", "z"])), 6),
    ) {
        let parts = set_partitions(4);
        let specs: Vec<ContextSpec> = picks
            .iter()
            .zip(&frames)
            .map(|(&i, f)| match f {
                Some(f) => ContextSpec::Framed { frame: f.to_string(), blocks: named(&parts[i]) },
                None => ContextSpec::Blocks(named(&parts[i])),
            })
            .collect();
        let b = user_contexts(base(4), &specs, &[]).unwrap();
        let d = &b.diagram;
        prop_assert!(check_componentwise_cstar(&d.to_spec()).is_empty());
        prop_assert_eq!(d.poset().bottom(), Some(0));
        for i in 0..d.len() {
            prop_assert_eq!(d.algebra(i).dim(), b.contexts[i].partition.len());
            for j in 0..d.len() {
                let (ci, cj) = (&b.contexts[i], &b.contexts[j]);
                let expected = cj.partition.refines(&ci.partition) && (ci.partition.len() == 1 || ci.frame == cj.frame);
                prop_assert_eq!(d.poset().leq(i, j), expected);
            }
        }
    }
}

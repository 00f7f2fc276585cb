//! Example documents shipped with the crate.

use std::sync::Arc;

use crate::aqft::NetDiagram;
use crate::bohrify::{full_context_poset, BohrSpec};
use crate::bundle::ContextDiagram;
use crate::error::Result;
use crate::lattice::Presentation;

pub const TWO_CONTEXT: &str = include_str!("../fixtures/two_context.json");
pub const M2: &str = include_str!("../fixtures/m2.json");
pub const BOHR3: &str = include_str!("../fixtures/bohr3.json");
pub const FREE2: &str = include_str!("../fixtures/free2.json");
pub const BOOLEAN2: &str = include_str!("../fixtures/boolean2.json");

/// `(name, document)` for each shipped net.
pub const NETS: [(&str, &str); 4] = [
    ("single", include_str!("../fixtures/net_single.json")),
    ("chain_trivial", include_str!("../fixtures/net_chain_trivial.json")),
    ("chain_bohr", include_str!("../fixtures/net_chain_bohr.json")),
    ("incomparable", include_str!("../fixtures/net_incomparable.json")),
];

pub fn two_context() -> Arc<ContextDiagram> {
    Arc::new(ContextDiagram::from_json(TWO_CONTEXT).expect("shipped fixture"))
}

pub fn m2() -> Arc<ContextDiagram> {
    BohrSpec::from_json(M2).and_then(|s| s.build()).expect("shipped fixture").diagram
}

pub fn bohr(n: usize) -> Arc<ContextDiagram> {
    full_context_poset(n).expect("small n").diagram
}

pub fn presentations() -> Vec<(&'static str, Presentation)> {
    vec![
        ("free2", Presentation::from_json(FREE2).expect("shipped fixture")),
        ("boolean2", Presentation::from_json(BOOLEAN2).expect("shipped fixture")),
    ]
}

pub fn nets() -> Vec<(&'static str, NetDiagram)> {
    NETS.iter().map(|&(n, t)| (n, NetDiagram::from_json(t).expect("shipped fixture"))).collect()
}

/// Every shipped context diagram with a display name: the documents, the
/// partition posets for `n ≤ 3`, and `𝒫` of each net.
pub fn diagrams() -> Result<Vec<(String, Arc<ContextDiagram>)>> {
    let mut out = vec![("two_context".to_string(), two_context()), ("m2".to_string(), m2())];
    for n in 1..=3 {
        out.push((format!("bohr{n}"), bohr(n)));
    }
    for (name, net) in nets() {
        out.push((format!("net_{name}"), Arc::new(crate::aqft::build_p(&net)?)));
    }
    Ok(out)
}

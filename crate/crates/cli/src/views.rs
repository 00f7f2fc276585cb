//! Rendering of command results as JSON, tables and DOT.

use std::sync::Arc;

use serde_json::{json, Value};

use bohrspec::aqft::{aqft_points, build_p, check_triples_vs_generic, sigma_functor, NetDiagram};
use bohrspec::bundle::{
    covering_pairs, external_opens, external_points, ideal_labels, internal_frame, point_specialization, sier_points,
    ContextDiagram, SpectrumPoint,
};
use bohrspec::lattice::{parse_query, DLattice, LatElem, PresentedLattice, Query, LA};
use bohrspec::spectrum::{regular_ideals, regular_prime_filters, rounded_ideals, WellInsideRel};
use bohrspec::verify::{render, Check};
use bohrspec::{Error, Result};

use crate::{Format, Graph, NetView, View};

/// One command result in every format it supports.
pub struct Report {
    pub json: Value,
    pub table: String,
    pub dot: Option<String>,
    /// False when a verification failed.
    pub ok: bool,
}

impl Report {
    fn new(json: Value, table: String) -> Self {
        Report { json, table, dot: None, ok: true }
    }

    pub fn render(&self, format: Format) -> Option<String> {
        match format {
            Format::Json => Some(format!("{}\n", serde_json::to_string_pretty(&self.json).expect("plain values"))),
            Format::Table => Some(self.table.clone()),
            Format::Dot => self.dot.clone(),
        }
    }
}

fn lines<I: IntoIterator<Item = String>>(it: I) -> String {
    it.into_iter().map(|l| l + "\n").collect()
}

fn dot(name: &str, nodes: &[String], edges: &[(usize, usize)]) -> String {
    let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
    let mut out = format!("digraph {name} {{\n  rankdir=BT;\n");
    for (i, n) in nodes.iter().enumerate() {
        out += &format!("  n{i} [label=\"{}\"];\n", esc(n));
    }
    for (a, b) in edges {
        out += &format!("  n{a} -> n{b};\n");
    }
    out + "}\n"
}

pub enum Lat {
    Presented(PresentedLattice),
    Algebra(LA),
}

impl Lat {
    fn lattice(&self) -> &Arc<DLattice> {
        match self {
            Lat::Presented(p) => p.lattice(),
            Lat::Algebra(la) => la.lattice(),
        }
    }

    fn label(&self, e: LatElem) -> String {
        match self {
            Lat::Presented(p) => p.display(e),
            Lat::Algebra(la) => la.lattice().label(e),
        }
    }
}

fn hasse(l: &DLattice) -> Vec<(usize, usize)> {
    let le: Vec<Vec<bool>> = l.elements().iter().map(|&a| l.elements().iter().map(|&b| l.leq(a, b)).collect()).collect();
    covering_pairs(&le)
}

pub fn lattice(lat: &Lat) -> Report {
    let l = lat.lattice();
    let labels: Vec<String> = l.elements().iter().map(|&e| lat.label(e)).collect();
    let covers = hasse(l);
    let json = json!({
        "size": l.len(),
        "boolean": l.is_boolean(),
        "elements": labels,
        "covers": covers.iter().map(|&(a, b)| [&labels[a], &labels[b]]).collect::<Vec<_>>(),
    });
    let table = lines(
        std::iter::once(format!("{} elements, boolean: {}", l.len(), l.is_boolean()))
            .chain(covers.iter().map(|&(a, b)| format!("{} < {}", labels[a], labels[b]))),
    );
    Report { dot: Some(dot("lattice", &labels, &covers)), ..Report::new(json, table) }
}

pub fn query(lat: &Lat, q: &str) -> Result<Report> {
    let Lat::Presented(p) = lat else {
        return Err(Error::Schema { path: "query".into(), message: "queries need a presentation".into() });
    };
    Ok(match parse_query(q)? {
        Query::Leq(a, b) => {
            let holds = p.lattice().leq(p.eval(&a)?, p.eval(&b)?);
            Report::new(json!(holds), format!("{holds}\n"))
        }
        Query::Expr(e) => {
            let v = p.display(p.eval(&e)?);
            Report::new(json!(v), format!("{v}\n"))
        }
    })
}

pub fn spectrum(lat: &Lat) -> Result<Report> {
    let l = lat.lattice();
    let rel = WellInsideRel::new(l.clone());
    if let Some((a, b)) = rel.normality_counterexample() {
        let (a, b) = (lat.label(a), lat.label(b));
        let json = json!({ "normal": false, "counterexample": [a, b] });
        return Ok(Report::new(json, format!("not normal: {a} v {b} = T has no well-inside refinement\n")));
    }
    let names = |xs: Vec<LatElem>| xs.into_iter().map(|e| lat.label(e)).collect::<Vec<_>>();
    let well_inside: Vec<[String; 2]> = rel.pairs().into_iter().map(|(a, b)| [lat.label(a), lat.label(b)]).collect();
    let points = names(regular_prime_filters(l).iter().map(|f| f.generator()).collect());
    let rounded = names(rounded_ideals(l).iter().map(|r| r.generator()).collect());
    let regular = names(regular_ideals(l));
    let table = lines([
        format!("points (filter generators): {}", points.join(" ")),
        format!("rounded ideals (generators): {}", rounded.join(" ")),
        format!("regular ideals (generators): {}", regular.join(" ")),
        format!("well-inside pairs: {}", well_inside.len()),
    ]);
    let json = json!({
        "normal": true,
        "well_inside": well_inside,
        "points": points,
        "rounded_ideals": rounded,
        "regular_ideals": regular,
    });
    Ok(Report::new(json, table))
}

fn point_json(d: &ContextDiagram, p: &SpectrumPoint) -> Value {
    let picks: Vec<[String; 2]> = p
        .generators()
        .into_iter()
        .map(|(c, g)| [d.label(c).to_string(), p.outcome(c).map_or_else(|| d.la(c).lattice().label(g), str::to_string)])
        .collect();
    json!({ "ideal": ideal_labels(d, p.ideal()), "filters": picks })
}

fn point_name(d: &ContextDiagram, p: &SpectrumPoint) -> String {
    let parts: Vec<String> = p
        .generators()
        .into_iter()
        .map(|(c, g)| format!("{}={}", d.label(c), p.outcome(c).map_or_else(|| d.la(c).lattice().label(g), str::to_string)))
        .collect();
    parts.join("; ")
}

fn points_graph(d: &ContextDiagram, pts: &[SpectrumPoint]) -> (Vec<String>, Vec<(usize, usize)>) {
    let names = pts.iter().map(|p| point_name(d, p)).collect();
    (names, covering_pairs(&point_specialization(pts)))
}

fn context_graph(d: &ContextDiagram) -> (Vec<String>, Vec<(usize, usize)>) {
    (d.poset().labels().to_vec(), d.poset().covers())
}

fn family_json(d: &ContextDiagram, family: impl IntoIterator<Item = (usize, LatElem)>) -> Vec<[String; 2]> {
    family.into_iter().map(|(c, g)| [d.label(c).to_string(), d.la(c).lattice().label(g)]).collect()
}

pub fn diagram(d: &Arc<ContextDiagram>, view: View, max: usize) -> Result<Report> {
    Ok(match view {
        View::Contexts => {
            let (labels, covers) = context_graph(d);
            let contexts: Vec<Value> =
                (0..d.len()).map(|c| json!({ "label": d.label(c), "outcomes": d.algebra(c).outcomes() })).collect();
            let json = json!({
                "contexts": contexts,
                "covers": covers.iter().map(|&(a, b)| [&labels[a], &labels[b]]).collect::<Vec<_>>(),
            });
            let table = lines((0..d.len()).map(|c| format!("{}: {}", d.label(c), d.algebra(c).outcomes().join(" "))));
            Report { dot: Some(dot("contexts", &labels, &covers)), ..Report::new(json, table) }
        }
        View::Points => {
            let pts = external_points(d)?;
            let json = json!({ "count": pts.len(), "points": pts.iter().map(|p| point_json(d, p)).collect::<Vec<_>>() });
            let table = lines(pts.iter().map(|p| point_name(d, p)));
            let (names, edges) = points_graph(d, &pts);
            Report { dot: Some(dot("points", &names, &edges)), ..Report::new(json, table) }
        }
        View::Opens => {
            let opens = external_opens(d, max)?;
            let fams: Vec<Vec<[String; 2]>> =
                opens.iter().map(|u| family_json(d, u.family().iter().copied().enumerate())).collect();
            let table = lines(fams.iter().map(|f| f.iter().map(|[c, g]| format!("{c}={g}")).collect::<Vec<_>>().join("; ")));
            Report::new(json!({ "count": opens.len(), "opens": fams }), table)
        }
        View::Sier => {
            let pts = sier_points(d)?;
            let items: Vec<Value> = pts
                .iter()
                .map(|p| json!({ "ideal": ideal_labels(d, p.ideal), "family": family_json(d, p.family.iter().copied()) }))
                .collect();
            let table = lines(pts.iter().map(|p| {
                family_json(d, p.family.iter().copied()).iter().map(|[c, g]| format!("{c}={g}")).collect::<Vec<_>>().join("; ")
            }));
            Report::new(json!({ "count": pts.len(), "points": items }), table)
        }
        View::Frame => {
            let frame = internal_frame(d, max)?;
            let items: Vec<Value> = (0..d.len())
                .map(|c| {
                    let up: Vec<&str> = frame.up[c].iter().map(|&x| d.label(x)).collect();
                    json!({ "context": d.label(c), "up": up, "values": frame.values[c].len() })
                })
                .collect();
            let table = lines((0..d.len()).map(|c| format!("{}: {} values", d.label(c), frame.values[c].len())));
            Report::new(json!({ "contexts": items }), table)
        }
    })
}

pub fn net(net: &NetDiagram, view: NetView) -> Result<Report> {
    Ok(match view {
        NetView::Points => {
            let pts = aqft_points(net)?;
            let describe = |((o, k), b): ((usize, usize), usize)| {
                let ctx = &net.contexts(o).contexts[k];
                (net.regions().label(o).to_string(), ctx.label(), ctx.partition.block_labels()[b].clone())
            };
            let items: Vec<Value> = pts
                .iter()
                .map(|p| {
                    let regions: Vec<&str> = p.regions.members().map(|o| net.regions().label(o)).collect();
                    let choices: Vec<Value> = p
                        .lambda
                        .iter()
                        .map(|&x| {
                            let (r, c, b) = describe(x);
                            json!({ "region": r, "context": c, "block": b })
                        })
                        .collect();
                    json!({ "regions": regions, "choices": choices })
                })
                .collect();
            let table = lines(pts.iter().map(|p| {
                let parts: Vec<String> = p
                    .lambda
                    .iter()
                    .map(|&x| {
                        let (r, c, b) = describe(x);
                        format!("{r}/{c}={b}")
                    })
                    .collect();
                parts.join("; ")
            }));
            Report::new(json!({ "count": pts.len(), "points": items }), table)
        }
        NetView::Generic => diagram(&Arc::new(build_p(net)?), View::Points, 0)?,
        NetView::Check => {
            let r = check_triples_vs_generic(net)?;
            let json = json!({
                "ok": r.ok(),
                "triples": r.triples,
                "generic": r.generic,
                "total": r.total,
                "injective": r.injective,
                "surjective": r.surjective,
                "evaluation_mismatches": r.evaluation_mismatches,
                "prime_failures": r.prime_failures,
            });
            let status = if r.ok() { "PASS" } else { "FAIL" };
            let table = format!(
                "{status} {} triples, {} generic points, {} evaluation mismatches, {} prime failures\n",
                r.triples, r.generic, r.evaluation_mismatches, r.prime_failures
            );
            Report { ok: r.ok(), ..Report::new(json, table) }
        }
        NetView::Sigma => {
            let p = build_p(net)?;
            let s = sigma_functor(&p);
            let objects: Vec<Value> = s.objects.iter().map(|(l, cs)| json!({ "pair": l, "characters": cs })).collect();
            let restrictions: Vec<Value> = s
                .restrictions
                .iter()
                .map(|(a, b, r)| {
                    let (sa, sb) = (&s.objects[*a], &s.objects[*b]);
                    let map: Vec<[&str; 2]> = r.iter().enumerate().map(|(i, &j)| [sb.1[i].as_str(), sa.1[j].as_str()]).collect();
                    json!({ "from": sb.0, "to": sa.0, "map": map })
                })
                .collect();
            let table = lines(s.objects.iter().map(|(l, cs)| format!("{l}: {}", cs.join(" "))));
            Report::new(json!({ "objects": objects, "restrictions": restrictions }), table)
        }
    })
}

pub fn checks(checks: &[Check]) -> Report {
    let passed = checks.iter().filter(|c| c.passed).count();
    let items: Vec<Value> =
        checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect();
    let json = json!({ "passed": passed, "total": checks.len(), "checks": items });
    Report { ok: passed == checks.len(), ..Report::new(json, render(checks)) }
}

pub fn export(d: &Arc<ContextDiagram>, graph: Graph) -> Result<Report> {
    let (name, (nodes, edges)) = match graph {
        Graph::Points => ("points", points_graph(d, &external_points(d)?)),
        Graph::Contexts => ("contexts", context_graph(d)),
    };
    let json = json!({ "nodes": nodes, "edges": edges.iter().map(|&(a, b)| [&nodes[a], &nodes[b]]).collect::<Vec<_>>() });
    let table = lines(edges.iter().map(|&(a, b)| format!("{} < {}", nodes[a], nodes[b])));
    Ok(Report { dot: Some(dot(name, &nodes, &edges)), ..Report::new(json, table) })
}

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bohrspec::aqft::check_triples_vs_generic;
use bohrspec::bundle::{external_opens, external_points, sier_points, DEFAULT_MAX_OPENS};
use bohrspec::{fixtures, par, verify};

fn both<R>(c: &mut Criterion, group: &str, f: impl Fn() -> R) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("mode", "parallel"), |b| b.iter(&f));
    g.bench_function(BenchmarkId::new("mode", "sequential"), |b| b.iter(|| par::sequential(&f)));
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let d4 = fixtures::bohr(4);
    both(c, "external_points/bohr4", || external_points(&d4).unwrap().len());
    both(c, "sier_points/bohr4", || sier_points(&d4).unwrap().len());
    let d3 = fixtures::bohr(3);
    both(c, "external_opens/bohr3", || external_opens(&d3, DEFAULT_MAX_OPENS).unwrap().len());
    let nets = fixtures::nets();
    both(c, "aqft/shipped_nets", || nets.iter().map(|(_, n)| check_triples_vs_generic(n).unwrap().triples).sum::<usize>());
    both(c, "verify/geometricity", || verify::geometricity().passed);
}

criterion_group!(benches, enumeration);
criterion_main!(benches);

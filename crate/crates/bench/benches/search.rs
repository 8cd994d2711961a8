use clusterfree::*;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn families(c: &mut Criterion) {
    let config = SearchConfig::default();
    let l2 = construct_l2(&ConstructionParams::new(24, 4, 3), &config).unwrap();
    let l4 = construct_l4(&ConstructionParams::new(20, 4, 3)).unwrap();
    c.bench_function("cluster search L2(24,4,3) d=3", |b| b.iter(|| find_d_cluster(black_box(&l2), 3).unwrap()));
    c.bench_function("cluster search L4(20,4,3) d=4", |b| b.iter(|| find_d_cluster(black_box(&l4), 4).unwrap()));
    c.bench_function("matching L2(24,4,3)", |b| b.iter(|| matching_number(black_box(&l2)).unwrap()));
}

fn searches(c: &mut Criterion) {
    let config = SearchConfig::default().threads(1);
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    g.bench_function("ex(9, P_2^3)", |b| b.iter(|| turan_tight_path(black_box(9), 3, 2, &config).unwrap()));
    g.bench_function("f(9,3,3,1)", |b| b.iter(|| compute_f_exact(black_box(9), 3, 3, 1, &config).unwrap()));
    g.bench_function("EX(6; v=3, e=3, r=2)", |b| {
        let p = ForbiddenPattern::multigraph(3, 3, 2).unwrap();
        b.iter(|| turan_multigraph(black_box(6), &p, &config).unwrap())
    });
    g.finish();
}

criterion_group!(benches, families, searches);
criterion_main!(benches);

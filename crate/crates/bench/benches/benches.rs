use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use tightcycle::expander::extract_expander;
use tightcycle::linegraph::from_hypergraph;
use tightcycle::oracle::{brute_force_tight_cycle_with_cap, gen_full_grid, gen_random_rpartite};
use tightcycle::rational::{from_int, ratio};
use tightcycle::search::{density_increment_search, SearchParams};
use tightcycle::sigma::{reach, Permutation, ReachMode};

fn bench_linegraph_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("linegraph_build");
    for m in [6usize, 10] {
        let h = gen_full_grid(m, 3);
        group.bench_with_input(BenchmarkId::from_parameter(m), &h, |b, h| {
            b.iter(|| from_hypergraph(black_box(h)).unwrap());
        });
    }
    group.finish();
}

fn bench_reach_saturation(c: &mut Criterion) {
    let mut group = c.benchmark_group("reach_saturation");
    for m in [6usize, 8] {
        let g = from_hypergraph(&gen_full_grid(m, 3)).unwrap();
        let sigma = Permutation::identity(3);
        group.bench_with_input(BenchmarkId::from_parameter(m), &g, |b, g| {
            b.iter(|| reach(black_box(g), 0, &sigma, None, ReachMode::AtMost));
        });
    }
    group.finish();
}

fn bench_extract_expander(c: &mut Criterion) {
    let g = from_hypergraph(&gen_random_rpartite(8, 3, 0.5, 7)).unwrap();
    let d = from_int(g.density().floor().to_integer().max(1));
    c.bench_function("extract_expander_random_m8", |b| {
        b.iter(|| extract_expander(black_box(&g), ratio(1, 20), d, 20).unwrap());
    });
}

fn bench_oracle(c: &mut Criterion) {
    let h = gen_random_rpartite(4, 3, 0.4, 11);
    c.bench_function("oracle_random_m4", |b| {
        b.iter(|| brute_force_tight_cycle_with_cap(black_box(&h), 12, 12).unwrap());
    });
}

fn bench_increment_search(c: &mut Criterion) {
    let g = from_hypergraph(&gen_full_grid(4, 3)).unwrap();
    let params = SearchParams::new(3);
    c.bench_function("density_increment_grid_m4", |b| {
        b.iter(|| density_increment_search(black_box(&g), &params));
    });
}

criterion_group!(
    benches,
    bench_linegraph_build,
    bench_reach_saturation,
    bench_extract_expander,
    bench_oracle,
    bench_increment_search
);
criterion_main!(benches);

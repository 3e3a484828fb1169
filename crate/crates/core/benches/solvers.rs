//! Sequential (one-thread pool) against the default rayon pool.

use std::hint::black_box;

use compat_core::gen::{random_instance, random_path_like_instance, Rng};
use compat_core::model::undirected_union;
use compat_core::reductions::{
    random_constraint_graph, random_formula, reduce_ncl, reduce_sat_acyclic, sat_oracle, CnfFormula,
};
use compat_core::treewidth::{heuristic_td, make_nice, solve_treewidth};
use compat_core::{solve_bfs, solve_bounded, solve_exact};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPool;

fn pools() -> Vec<(&'static str, ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("sequential", one), ("parallel", all)]
}

fn hard_formula() -> CnfFormula {
    // all eight sign patterns on x1..x3: unsatisfiable, so every assignment is scanned
    let mut clauses = Vec::new();
    for m in 0..8 {
        let lit = |j: i32| if m >> j & 1 == 1 { -(j + 1) } else { j + 1 };
        clauses.push([lit(0), lit(1), lit(2)]);
    }
    let mut rng = Rng::seeded(5);
    let filler = random_formula(&mut rng, 18, 30);
    clauses.extend(filler.clauses);
    CnfFormula::new(18, clauses).unwrap()
}

fn bench(c: &mut Criterion) {
    let formula = hard_formula();
    let sat_inst = {
        let mut rng = Rng::seeded(9);
        reduce_sat_acyclic(&random_formula(&mut rng, 4, 6))
            .unwrap()
            .0
    };
    let dense = random_instance(&mut Rng::seeded(3), 9, 2, 0.18);
    let path = random_path_like_instance(&mut Rng::seeded(4), 200, 2, 2, 0.2);
    let path_td = make_nice(&heuristic_td(&undirected_union(&path))).unwrap();
    let arrangement = reduce_ncl(&random_constraint_graph(&mut Rng::seeded(8), 4))
        .unwrap()
        .0;

    let mut group = c.benchmark_group("solvers");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new("sat_oracle", name), |b| {
            b.iter(|| pool.install(|| black_box(sat_oracle(&formula).unwrap())))
        });
        group.bench_function(BenchmarkId::new("exact_sat_acyclic", name), |b| {
            b.iter(|| pool.install(|| black_box(solve_exact(&sat_inst))))
        });
        group.bench_function(BenchmarkId::new("exact_dense", name), |b| {
            b.iter(|| pool.install(|| black_box(solve_exact(&dense))))
        });
        group.bench_function(BenchmarkId::new("bounded_dense", name), |b| {
            b.iter(|| pool.install(|| black_box(solve_bounded(&dense, 6))))
        });
        group.bench_function(BenchmarkId::new("treewidth_path", name), |b| {
            b.iter(|| pool.install(|| black_box(solve_treewidth(&path, &path_td).unwrap())))
        });
        group.bench_function(BenchmarkId::new("arrangement_bfs", name), |b| {
            b.iter(|| pool.install(|| black_box(solve_bfs(&arrangement).unwrap())))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);

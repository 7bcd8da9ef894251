use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gds_bench::{builtin, voronoi};
use gds_core::complex::{torus_voronoi, validate_generic, PointSet};
use gds_core::homology::{betti, homology_sector_reps};
use gds_core::model::{ground_degeneracy, sweep_sign, Model};
use std::hint::black_box;

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    for (name, cx) in
        [("torus:3", builtin("torus:3")), ("voronoi2:25", voronoi(2, 25, 7)), ("sphere:4", builtin("sphere:4"))]
    {
        let rep = homology_sector_reps(&cx, cx.dim() - 1).unwrap().reps[0].clone();
        g.bench_function(BenchmarkId::new("sign", name), |b| b.iter(|| sweep_sign(&cx, black_box(&rep)).unwrap()));
        g.bench_function(BenchmarkId::new("gsd", name), |b| b.iter(|| ground_degeneracy(&cx, Model::Gds).unwrap()));
    }
    g.finish();
}

fn homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("homology");
    for (name, cx) in
        [("torus:3", builtin("torus:3")), ("torus:3:5", builtin("torus:3:5")), ("voronoi3:20", voronoi(3, 20, 0))]
    {
        g.bench_function(BenchmarkId::new("betti", name), |b| b.iter(|| betti(black_box(&cx)).unwrap()));
    }
    g.finish();
}

fn voronoi_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("voronoi");
    g.sample_size(10);
    for (d, n) in [(2, 25), (2, 100), (3, 20)] {
        let pts = PointSet::random(d, n, 0).unwrap();
        g.bench_function(BenchmarkId::new("build", format!("d{d}n{n}")), |b| {
            b.iter(|| torus_voronoi(black_box(&pts)).unwrap())
        });
        let cx = torus_voronoi(&pts).unwrap();
        g.bench_function(BenchmarkId::new("validate", format!("d{d}n{n}")), |b| {
            b.iter(|| validate_generic(black_box(&cx)))
        });
    }
    g.finish();
}

criterion_group!(benches, sweep, homology, voronoi_build);
criterion_main!(benches);

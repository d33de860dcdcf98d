//! Compares the rayon-backed and sequential element loops on the two hot
//! paths: geometry reconstruction and a full implicit step.
//!
//! The `seq` series forces the sequential path by raising the
//! parallelization threshold above every problem size; `par` forces rayon by
//! dropping it to zero. Build with `--no-default-features` to check the
//! rayon-free build (the `par` series then disappears).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curveflow::{
    compute_geometry, make_circle, set_min_parallel_len, step, Curve, FlowSpec, RedistParams,
    StepParams,
};
use std::hint::black_box;

const SIZES: [usize; 3] = [1 << 10, 1 << 14, 1 << 17];

fn bench_geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometry");
    group.sample_size(40);
    for n in SIZES {
        let curve = make_circle(1.0, n).unwrap();
        set_min_parallel_len(usize::MAX);
        group.bench_with_input(BenchmarkId::new("seq", n), &curve, |b, curve| {
            b.iter(|| compute_geometry(black_box(curve)).unwrap())
        });
        #[cfg(feature = "parallel")]
        {
            set_min_parallel_len(0);
            group.bench_with_input(BenchmarkId::new("par", n), &curve, |b, curve| {
                b.iter(|| compute_geometry(black_box(curve)).unwrap())
            });
        }
    }
    set_min_parallel_len(curveflow::DEFAULT_MIN_PARALLEL_LEN);
    group.finish();
}

fn bench_step(c: &mut Criterion) {
    // surface diffusion with a time step far below the stability scale of
    // the coarsest grid: the matrix is strongly dominant, so SOR converges
    // in a few sweeps and the element-wise stages dominate the cost
    let flow = FlowSpec::surface_diffusion();
    let redist = RedistParams::autr(10.0, 0.0).unwrap();
    let params = StepParams::new(1e-12);

    let run = |curve: &Curve| step(curve, &flow, &redist, &params).unwrap();

    let mut group = c.benchmark_group("step");
    group.sample_size(20);
    for n in SIZES {
        let curve = make_circle(1.0, n).unwrap();
        set_min_parallel_len(usize::MAX);
        group.bench_with_input(BenchmarkId::new("seq", n), &curve, |b, curve| {
            b.iter(|| run(black_box(curve)))
        });
        #[cfg(feature = "parallel")]
        {
            set_min_parallel_len(0);
            group.bench_with_input(BenchmarkId::new("par", n), &curve, |b, curve| {
                b.iter(|| run(black_box(curve)))
            });
        }
    }
    set_min_parallel_len(curveflow::DEFAULT_MIN_PARALLEL_LEN);
    group.finish();
}

criterion_group!(benches, bench_geometry, bench_step);
criterion_main!(benches);

//! Benchmark bodies shared by the `samplers` and `kernels` bench targets.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use dsos_core::edge::{airy_ai, tracy_widom_cdf};
use dsos_core::kernel::{gap_probability_e0, GapRequest, KernelContext};
use dsos_core::model::{rejection_sample, HeightDistribution};
use dsos_core::rng::stream_rng;
use dsos_core::sampler::{sample_line_max, sample_uniform_config};
use dsos_core::shape::shape_height;
use dsos_core::QuadratureRule;

pub fn samplers(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampler");
    for n in [10usize, 50, 100] {
        group.bench_with_input(BenchmarkId::new("full", n), &n, |b, &n| {
            let mut rng = stream_rng(1, 0);
            b.iter(|| sample_uniform_config(n, &mut rng).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("central_line_max", n), &n, |b, &n| {
            let mut rng = stream_rng(2, 0);
            b.iter(|| sample_line_max(n, n / 2, &mut rng).unwrap())
        });
    }
    group.bench_function("rejection_n3", |b| {
        let mut rng = stream_rng(3, 0);
        b.iter(|| rejection_sample(3, &HeightDistribution::Uniform, &mut rng).unwrap())
    });
    group.finish();
}

pub fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernel");
    let quad = QuadratureRule::default();
    for n in [3usize, 10] {
        let ctx = KernelContext::new(n).unwrap();
        group.bench_with_input(BenchmarkId::new("e0_central", n), &n, |b, &n| {
            b.iter(|| gap_probability_e0(&ctx, &[GapRequest { line: n, u: 0.7 }], &quad).unwrap())
        });
    }
    let ctx = KernelContext::new(3).unwrap();
    group.bench_function("e0_two_lines_n3", |b| {
        let reqs = [GapRequest { line: 2, u: 0.6 }, GapRequest { line: 3, u: 0.7 }];
        b.iter(|| gap_probability_e0(&ctx, &reqs, &quad).unwrap())
    });
    group.bench_function("tracy_widom_cdf", |b| b.iter(|| tracy_widom_cdf(black_box(-1.5)).unwrap()));
    group.bench_function("airy_ai", |b| b.iter(|| airy_ai(black_box(-7.3)).unwrap()));
    group.bench_function("shape_height", |b| b.iter(|| shape_height(black_box(0.3), black_box(0.6)).unwrap()));
    group.finish();
}

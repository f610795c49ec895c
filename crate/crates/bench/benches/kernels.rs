use criterion::{criterion_group, criterion_main};

criterion_group!(benches, dsos_bench::kernels);
criterion_main!(benches);

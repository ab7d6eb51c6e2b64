use criterion::{criterion_group, criterion_main, Criterion};
use gaugedeform::deform_coeffs::family_su2;
use gaugedeform::dynamics::{check_gauge_invariance, SuiteParams, TheoryVariant};
use gaugedeform::par;

fn sweep(c: &mut Criterion) {
    let v = TheoryVariant::general(family_su2(2.0, 0.5).unwrap()).unwrap();
    let seeds: Vec<u64> = (0..16).collect();
    let one = |&s: &u64| check_gauge_invariance(&v, &SuiteParams::default().with_seeds([s])).unwrap().max_residual();
    let mut g = c.benchmark_group("gauge_seed_sweep");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| par::map_ordered(&seeds, one)));
    g.bench_function("sequential", |b| b.iter(|| par::map_sequential(&seeds, one)));
    g.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);

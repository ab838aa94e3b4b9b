use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use framecheck_core::laurent::poly_mul;
use framecheck_core::numeric::{collision_trial, roundtrip_trial, MapKind};
use framecheck_core::su::builders::r_full;
use framecheck_core::su::{check_identity, mat_op, IdentityTag, MatOp};
use framecheck_core::RelationConfig;

fn bench_algebra(c: &mut Criterion) {
    let rel = RelationConfig::FULL;
    let r = r_full(4, rel).unwrap();
    let (a, b) = (r.get(0, 0).clone(), r.get(3, 3).clone());
    c.bench_function("poly_mul/r4_corner", |bn| bn.iter(|| poly_mul(black_box(&a), black_box(&b)).unwrap()));
    let mut g = c.benchmark_group("det");
    for m in [2usize, 3, 4] {
        let r = r_full(m, rel).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(m), &r, |bn, r| {
            bn.iter(|| mat_op(MatOp::Det, std::slice::from_ref(r)).unwrap())
        });
    }
    g.finish();
}

fn bench_identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("identity");
    g.sample_size(10);
    for m in [3usize, 4] {
        g.bench_with_input(BenchmarkId::new("EQ4", m), &m, |bn, &m| {
            bn.iter(|| check_identity(IdentityTag::Eq4, m, RelationConfig::FULL).unwrap())
        });
    }
    g.finish();
}

fn bench_numeric(c: &mut Criterion) {
    let mut g = c.benchmark_group("numeric");
    g.sample_size(10);
    g.bench_function("roundtrip/m5x100", |bn| bn.iter(|| roundtrip_trial(5, 100, 7, 1e-9)));
    g.bench_function("collision/m4_psi_x1000", |bn| bn.iter(|| collision_trial(4, 1000, 7, MapKind::Psi).unwrap()));
    g.finish();
}

criterion_group!(benches, bench_algebra, bench_identities, bench_numeric);
criterion_main!(benches);

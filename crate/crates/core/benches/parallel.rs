//! Sequential against data-parallel execution of the block-wise kernels.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qflag::calculus::{h0, Chirality, TangentSpace};
use qflag::cartan::FlagSpec;
use qflag::par::Exec;
use qflag::peterweyl::{CoordAlgebra, StructureCache};
use qflag::repr::{Guard, Registry};
use qflag::scalars::{QParams, Scalar};
use qflag::verify::spherical_decomposition_check;

fn registry(flag: &FlagSpec) -> Arc<Registry<Scalar>> {
    let ty = flag.ty;
    Arc::new(Registry::new(ty, QParams::symbolic(ty.l_denominator()), Guard::default()))
}

fn bench_h0(c: &mut Criterion) {
    let flag: FlagSpec = "A2/1".parse().unwrap();
    let reg = registry(&flag);
    // Build the modules once so both strategies time only the kernels.
    for l in flag.ty.dominant_weights(4) {
        reg.module(&l).unwrap();
    }
    let ts = TangentSpace::new(flag, Chirality::Antiholomorphic, None).unwrap();
    let mut group = c.benchmark_group("h0_A2_1_depth4");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let o = CoordAlgebra::new(reg.clone(), StructureCache::in_memory()).with_exec(exec);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &o, |b, o| {
            b.iter(|| {
                let dims: Vec<usize> = (0..=3).map(|k| h0(o, &ts, k, 4).unwrap().dim()).collect();
                black_box(dims)
            })
        });
    }
    group.finish();
}

fn bench_spherical(c: &mut Criterion) {
    let flag: FlagSpec = "B2/1".parse().unwrap();
    let reg = registry(&flag);
    for l in flag.ty.dominant_weights(3) {
        reg.module(&l).unwrap();
    }
    let mut group = c.benchmark_group("spherical_B2_1_depth3");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let o = CoordAlgebra::new(reg.clone(), StructureCache::in_memory()).with_exec(exec);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &o, |b, o| {
            b.iter(|| black_box(spherical_decomposition_check(o, &flag, 3).unwrap().pass))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_h0, bench_spherical);
criterion_main!(benches);

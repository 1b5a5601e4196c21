use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use qea_bench::{busy_state, dense_gate, qft, sparse_gate};
use qea_core::prelude::*;

const N: usize = 16;

fn single_qubit(c: &mut Criterion) {
    let float = busy_state(N);
    let fixed = float.to_fixed();
    let mut group = c.benchmark_group("apply_1q");
    group.throughput(Throughput::Elements(1 << N));
    for target in [0, N / 2, N - 1] {
        group.bench_with_input(BenchmarkId::new("fixed_dense", target), &target, |b, &t| {
            let g = dense_gate::<FixedComplex>(t);
            let mut s = fixed.clone();
            b.iter(|| apply_1q(&mut s, &g).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("fixed_sparse", target), &target, |b, &t| {
            let g = sparse_gate::<FixedComplex>(t);
            let mut s = fixed.clone();
            b.iter(|| apply_1q(&mut s, &g).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("float_dense", target), &target, |b, &t| {
            let g = dense_gate(t);
            let mut s = float.clone();
            b.iter(|| apply_1q(&mut s, &g).unwrap());
        });
    }
    group.finish();
}

fn controlled_not(c: &mut Criterion) {
    let fixed = busy_state(N).to_fixed();
    let mut group = c.benchmark_group("apply_cx");
    group.throughput(Throughput::Elements(1 << N));
    for (control, target) in [(0, N - 1), (N - 1, 0), (3, 4)] {
        let id = format!("{control}->{target}");
        group.bench_function(id, |b| {
            let mut s = fixed.clone();
            b.iter(|| apply_cx(&mut s, control, target).unwrap());
        });
    }
    group.finish();
}

fn qft_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("qft");
    group.sample_size(10);
    for n in [10, 14] {
        let tc = qft(n);
        group.bench_with_input(BenchmarkId::new("fixed", n), &tc, |b, tc| {
            b.iter(|| run_circuit(tc, FixedState::zero_state(tc.n).unwrap()).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("float", n), &tc, |b, tc| {
            b.iter(|| run_circuit(tc, FloatState::zero_state(tc.n).unwrap()).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, single_qubit, controlled_not, qft_run);
criterion_main!(benches);

//! Compares the rayon-parallel paths against their sequential fallbacks on
//! the two batch workloads: the Monte-Carlo perturbation probe and the
//! verification corpus.
//!
//! Run with `cargo bench -p consop`. The parallel functions require the
//! default `parallel` feature; without it they alias the sequential paths
//! and the two series coincide.

use criterion::{criterion_group, criterion_main, Criterion};

use consop::conservation::conserved_family;
use consop::exactnum::ConstPoly;
use consop::fourier::FourierPoly;
use consop::numlab::{probe_ensemble, probe_ensemble_seq, Binding, GridSpec};
use consop::verify::{run_corpus, run_corpus_seq};

fn bench_probe(c: &mut Criterion) {
    let p = conserved_family(ConstPoly::symbol("A"), FourierPoly::harmonic(2));
    let b = Binding::new().bind_int("A", 2);
    let g = GridSpec::new(64).unwrap();
    let trials = 256;

    let mut group = c.benchmark_group("probe_ensemble");
    group.sample_size(10);
    group.bench_function("parallel", |bench| {
        bench.iter(|| probe_ensemble(&p, false, trials, 17, &b, &g).unwrap())
    });
    group.bench_function("sequential", |bench| {
        bench.iter(|| probe_ensemble_seq(&p, false, trials, 17, &b, &g).unwrap())
    });
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_corpus");
    group.sample_size(10);
    group.bench_function("parallel", |bench| bench.iter(run_corpus));
    group.bench_function("sequential", |bench| bench.iter(run_corpus_seq));
    group.finish();
}

criterion_group!(benches, bench_probe, bench_verify);
criterion_main!(benches);

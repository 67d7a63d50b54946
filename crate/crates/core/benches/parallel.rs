//! Sequential versus rayon execution of the data-parallel paths.
//!
//! Run with `cargo bench -p sparsenav`. Building with
//! `--no-default-features` turns the parallel variants into sequential ones,
//! which gives the baseline for the feature flag itself.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sparsenav::encoders::{Encoder, EncoderConfig, N_PN};
use sparsenav::exec::Execution;
use sparsenav::harness::{run_sweep, RouteScript, TrialConfig};
use sparsenav::simworld::Arena;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn inputs(n: usize) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..n).map(|_| (0..N_PN).map(|_| rng.random()).collect()).collect()
}

fn encode_batch(c: &mut Criterion) {
    let xs = inputs(256);
    let mut group = c.benchmark_group("encode_batch");
    group.throughput(Throughput::Elements(xs.len() as u64));
    for cfg in [EncoderConfig::fly_hash(8000, 0.1), EncoderConfig::conv_lsh(1000)] {
        let enc = Encoder::new(cfg).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(cfg.model.name(), name), &exec, |b, &exec| {
                b.iter(|| enc.encode_batch(black_box(&xs), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let arena = Arena::reference();
    let script = RouteScript::reference();
    let base = TrialConfig {
        max_test_time: Some(3.0),
        ..TrialConfig::default()
    };
    let grid = [EncoderConfig::fly_hash(2000, 0.1), EncoderConfig::perfect_memory()];
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| run_sweep(&arena, &script, black_box(&grid), &base, 2, 0, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, encode_batch, sweep);
criterion_main!(benches);

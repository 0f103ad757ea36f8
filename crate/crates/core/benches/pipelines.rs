//! Fast against direct spectrum evaluation on the sech signal.
//!
//! Group names carry the execution mode; run once with default features and
//! once with `--no-default-features` to compare rayon against sequential.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use zsnft::reference::{sech_signal, SechSpec};
use zsnft::scattering::principal_spectrum;
use zsnft::{build_grid, Method, Pipeline, PARALLEL};

fn mode() -> &'static str {
    if PARALLEL {
        "parallel"
    } else {
        "sequential"
    }
}

fn pipelines(c: &mut Criterion) {
    for m in [Method::Erk34, Method::Scf24] {
        let mut g = c.benchmark_group(format!("{m}/{}", mode()));
        g.sample_size(10);
        for k in [8, 10, 12] {
            let n = 1usize << k;
            let grid = build_grid(-30.0, 30.0, n / 2).unwrap();
            let pot = sech_signal(&SechSpec::new(4.4), &grid);
            for p in [Pipeline::Fast, Pipeline::Direct] {
                g.bench_with_input(BenchmarkId::new(format!("{p:?}"), n), &n, |b, _| {
                    b.iter(|| black_box(principal_spectrum(m, &pot, &grid, p).unwrap()))
                });
            }
        }
        g.finish();
    }
}

fn magnus(c: &mut Criterion) {
    let mut g = c.benchmark_group(format!("magnus/{}", mode()));
    g.sample_size(10);
    let grid = build_grid(-30.0, 30.0, 512).unwrap();
    let pot = sech_signal(&SechSpec::new(4.4), &grid);
    for m in [Method::M12, Method::M34, Method::Cf24] {
        g.bench_function(BenchmarkId::new(m.to_string(), 1024), |b| {
            b.iter(|| black_box(principal_spectrum(m, &pot, &grid, Pipeline::Direct).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, pipelines, magnus);
criterion_main!(benches);

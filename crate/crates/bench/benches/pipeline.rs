use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use magheal_bench::{array_matrix, tone};
use magheal_core::identify::identify_kind;
use magheal_core::sim::Segment;
use magheal_core::{
    drift_scenario, extract_phasor, monitor, synthesize, FitOptions, H0Form, IdentifyOptions, PcaModel,
    SignalKind, Source, VarianceRule,
};

fn extraction(c: &mut Criterion) {
    let mut group = c.benchmark_group("extract_phasor");
    for seconds in [0.1, 1.0] {
        let w = tone(seconds, 20_000.0, 1);
        group.bench_with_input(BenchmarkId::from_parameter(seconds), &w, |b, w| {
            b.iter(|| extract_phasor(w, 60.0).unwrap())
        });
    }
    group.finish();
}

fn pca(c: &mut Criterion) {
    let opts = FitOptions::new(0.85, VarianceRule::Squared);
    let train = array_matrix(SignalKind::Amplitude, 200, 8, 1, 0.0);
    let test = array_matrix(SignalKind::Amplitude, 300, 8, 2, 0.03);
    c.bench_function("pca_fit_200x8", |b| {
        b.iter(|| PcaModel::fit(&train, &opts).unwrap())
    });
    let model = PcaModel::fit(&train, &opts).unwrap();
    c.bench_function("monitor_300x8", |b| {
        b.iter(|| monitor(&model, &test, 0.99, H0Form::Corrected).unwrap())
    });
    c.bench_function("identify_kind_8_units", |b| {
        b.iter(|| identify_kind(&train, &test, &IdentifyOptions::default()).unwrap())
    });
}

fn synthesis(c: &mut Criterion) {
    let sc = drift_scenario();
    let segs = [Segment::span(Source::Train, 0.0, 2.0, 0.1)];
    let mut group = c.benchmark_group("synthesize");
    group.sample_size(10);
    group.bench_function("8_units_2s", |b| b.iter(|| synthesize(&sc, &segs).unwrap()));
    group.finish();
}

criterion_group!(benches, extraction, pca, synthesis);
criterion_main!(benches);

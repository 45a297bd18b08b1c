//! Deterministic inputs shared by the benchmarks.

use std::f64::consts::TAU;

use magheal_core::{DataMatrix, SampledWindow, SignalKind};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 60 Hz tone with uniform noise, `seconds` long at `fs`.
pub fn tone(seconds: f64, fs: f64, seed: u64) -> SampledWindow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (seconds * fs).round() as usize;
    let samples = (0..n)
        .map(|i| 0.5 * (TAU * 60.0 * i as f64 / fs + 0.3).cos() + rng.random_range(-1e-3..1e-3))
        .collect();
    SampledWindow::new(samples, fs, 0.0)
}

/// `n` unit columns following one triangle with small independent noise;
/// `drift` adds a ramp to the first column.
pub fn array_matrix(kind: SignalKind, rows: usize, n: usize, seed: u64, drift: f64) -> DataMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = Array2::from_shape_fn((rows, n), |(i, k)| {
        let phase = (i % 40) as f64 / 40.0;
        let tri = 2.0 + 8.5 * (1.0 - (2.0 * phase - 1.0).abs());
        let ramp = if k == 0 {
            drift * i as f64 / rows as f64
        } else {
            0.0
        };
        tri * (1.0 + 0.02 * k as f64) * (1.0 + ramp) + rng.random_range(-1e-3..1e-3)
    });
    let ids = (1..=n).map(|k| format!("S{k}")).collect();
    DataMatrix::new(kind, ids, values).expect("fixture matrix is valid")
}

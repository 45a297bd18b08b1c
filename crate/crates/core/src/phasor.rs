//! Phasors and single-frequency phasor extraction.
//!
//! Phase convention: a waveform `A·cos(2πf·t + φ)` has phasor `(A, φ)`.
//! Everything downstream (calibration offsets, reference phasors, current
//! estimates) uses this cosine convention, so a pure `sin` tone reads as
//! phase `-π/2`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitude/phase pair at one frequency. Phase is kept in `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phasor {
    amplitude: f64,
    phase: f64,
}

impl Phasor {
    pub const ZERO: Phasor = Phasor {
        amplitude: 0.0,
        phase: 0.0,
    };

    /// A negative amplitude is folded into the phase (`-A∠φ == A∠(φ+π)`).
    pub fn new(amplitude: f64, phase: f64) -> Self {
        if amplitude < 0.0 {
            Phasor {
                amplitude: -amplitude,
                phase: wrap_angle(phase + PI),
            }
        } else {
            Phasor {
                amplitude,
                phase: wrap_angle(phase),
            }
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        let amplitude = z.norm();
        if amplitude == 0.0 {
            return Phasor::ZERO;
        }
        Phasor::new(amplitude, z.arg())
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }

    pub fn scale(self, factor: f64) -> Self {
        Phasor::new(self.amplitude * factor, self.phase)
    }

    pub fn rotate(self, radians: f64) -> Self {
        Phasor::new(self.amplitude, self.phase + radians)
    }
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let mut r = x.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    // rem_euclid can land exactly on -π after the shift
    if r <= -PI {
        r += TAU;
    }
    r
}

/// A contiguous block of samples from one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWindow {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
    pub start_time: f64,
}

impl SampledWindow {
    pub fn new(samples: Vec<f64>, sample_rate: f64, start_time: f64) -> Self {
        SampledWindow {
            samples,
            sample_rate,
            start_time,
        }
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }
}

const PERIOD_TOLERANCE: f64 = 1e-9;

/// Number of whole periods of `frequency` covered by `len` samples, if the
/// window is on-grid.
pub fn whole_periods(len: usize, sample_rate: f64, frequency: f64) -> Option<u64> {
    let periods = len as f64 * frequency / sample_rate;
    let rounded = periods.round();
    if rounded >= 1.0 && (periods - rounded).abs() <= PERIOD_TOLERANCE * periods.max(1.0) {
        Some(rounded as u64)
    } else {
        None
    }
}

/// Single-bin DFT (quadrature lock-in) at `frequency` over an integer number
/// of periods.
///
/// Time is absolute: sample `n` sits at `start_time + n / sample_rate`, so
/// shifting the window in time rotates the returned phase by `-2πfΔt`.
pub fn extract_phasor(window: &SampledWindow, frequency: f64) -> Result<Phasor> {
    let n = window.samples.len();
    if !(window.sample_rate > 0.0) || !(frequency > 0.0) {
        return Err(Error::invalid("sample rate and frequency must be positive"));
    }
    // Exactly two samples per period aliases the 2f image onto the bin.
    if window.sample_rate <= 2.0 * frequency {
        return Err(Error::invalid(format!(
            "{} Hz sampling gives at most 2 samples per period of {} Hz",
            window.sample_rate, frequency
        )));
    }
    if whole_periods(n, window.sample_rate, frequency).is_none() {
        return Err(Error::invalid(format!(
            "{} samples at {} Hz do not span a whole number of {} Hz periods",
            n, window.sample_rate, frequency
        )));
    }

    let omega = TAU * frequency;
    let dt = 1.0 / window.sample_rate;
    let (mut re, mut im) = (0.0, 0.0);
    for (i, &x) in window.samples.iter().enumerate() {
        let (s, c) = (omega * (i as f64 * dt)).sin_cos();
        re += x * c;
        im -= x * s;
    }
    let scale = 2.0 / n as f64;
    let local = Complex64::new(re * scale, im * scale);
    let shift = Complex64::from_polar(1.0, -omega * window.start_time);
    Ok(Phasor::from_complex(local * shift))
}

/// Remove 2π jumps so that successive differences lie in `(-π, π]`.
///
/// Each output element differs from its input by an exact multiple of 2π.
pub fn unwrap_phase(series: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(series.len());
    let mut turns = 0.0_f64;
    for (i, &x) in series.iter().enumerate() {
        if i > 0 {
            let prev_out = *out.last().unwrap();
            let d = x + TAU * turns - prev_out;
            // smallest k with d + 2πk > -π
            let k = ((-PI - d) / TAU).floor() + 1.0;
            turns += k;
        }
        out.push(x + TAU * turns);
    }
    out
}

/// Shift an unwrapped series by the multiple of 2π that brings its mean
/// closest to `anchor`. Used to put test-window phases on the same branch
/// as the training data they are compared against.
pub fn align_branch(series: &mut [f64], anchor: f64) {
    if series.is_empty() {
        return;
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let k = ((anchor - mean) / TAU).round();
    if k != 0.0 {
        for x in series.iter_mut() {
            *x += k * TAU;
        }
    }
}

/// Circular mean of a set of angles, in `(-π, π]`.
pub fn circular_mean(angles: &[f64]) -> f64 {
    let (s, c) = angles
        .iter()
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    wrap_angle(s.atan2(c))
}

/// Circular standard deviation `sqrt(-2 ln R)`, with `R` the mean resultant
/// length.
pub fn circular_std(angles: &[f64]) -> f64 {
    if angles.is_empty() {
        return 0.0;
    }
    let n = angles.len() as f64;
    let (s, c) = angles
        .iter()
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    let r = ((s / n).powi(2) + (c / n).powi(2)).sqrt().min(1.0);
    (-2.0 * r.ln()).max(0.0).sqrt()
}

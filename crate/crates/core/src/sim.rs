//! Synthetic magnetic-array sensor.
//!
//! A straight conductor carries `I(t)·cos(2πf·t + θ(t))`. Each unit sits at
//! radius `r_k` with its sensing axis tilted from the local tangent; the field
//! it should see follows the infinite-line Biot–Savart law. Its actual reading
//! carries a constant error `(ε_k, δ_k)` plus a slow drift `(Δε_k(t), Δδ_k(t))`,
//! then passes through electronics with gain `g_k` (V/T) and phase lag, and
//! finally picks up white Gaussian voltage noise.
//!
//! Noise for unit `k` comes from a ChaCha stream keyed by `(seed, k)`, so
//! every unit is reproducible on its own and independent of the others.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phasor::{extract_phasor, whole_periods, Phasor, SampledWindow};
use crate::series::{PhasorBlock, Source};

/// Vacuum permeability, T·m/A.
pub const MU0: f64 = 4.0e-7 * PI;

/// A scalar function of time built from straight segments.
///
/// `Knots` holds `(t, value)` pairs sorted by time and is flat outside its
/// span. Two knots at the same time make a step. `Triangle` is periodic,
/// starting at `min` at `t = offset_s` and peaking half a period later.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Profile {
    Constant {
        value: f64,
    },
    Knots {
        points: Vec<[f64; 2]>,
    },
    Triangle {
        min: f64,
        max: f64,
        period_s: f64,
        #[serde(default)]
        offset_s: f64,
    },
}

impl Default for Profile {
    fn default() -> Self {
        Profile::Constant { value: 0.0 }
    }
}

impl Profile {
    pub fn zero() -> Self {
        Profile::default()
    }

    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    /// Zero until `start`, linear to `target` at `end`, then held.
    pub fn ramp(start: f64, end: f64, target: f64) -> Self {
        Profile::Knots {
            points: vec![[start, 0.0], [end, target]],
        }
    }

    pub fn step(at: f64, value: f64) -> Self {
        Profile::Knots {
            points: vec![[at, 0.0], [at, value]],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::Knots { points } => {
                if points.is_empty() {
                    return 0.0;
                }
                let i = points.partition_point(|p| p[0] <= t);
                if i == 0 {
                    points[0][1]
                } else if i == points.len() {
                    points[i - 1][1]
                } else {
                    let [t0, v0] = points[i - 1];
                    let [t1, v1] = points[i];
                    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
                }
            }
            Profile::Triangle {
                min,
                max,
                period_s,
                offset_s,
            } => {
                let phase = ((t - offset_s) / period_s).rem_euclid(1.0);
                let up = if phase < 0.5 {
                    2.0 * phase
                } else {
                    2.0 - 2.0 * phase
                };
                min + (max - min) * up
            }
        }
    }

    /// Bounds over all time; exact because the extremes sit on knots.
    pub fn extremes(&self) -> (f64, f64) {
        match self {
            Profile::Constant { value } => (*value, *value),
            Profile::Knots { points } => points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[1]), hi.max(p[1]))
                }),
            Profile::Triangle { min, max, .. } => (min.min(*max), min.max(*max)),
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        match self {
            Profile::Constant { value } if !value.is_finite() => {
                Err(Error::invalid(format!("{what}: non-finite value")))
            }
            Profile::Knots { points } => {
                if points.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::invalid(format!("{what}: non-finite knot")));
                }
                if points.windows(2).any(|w| w[1][0] < w[0][0]) {
                    return Err(Error::invalid(format!("{what}: knots out of time order")));
                }
                Ok(())
            }
            Profile::Triangle { period_s, .. } if !(*period_s > 0.0) => Err(Error::invalid(format!(
                "{what}: triangle period must be positive"
            ))),
            _ => Ok(()),
        }
    }
}

/// Conductor current: amplitude envelope (A) and phase (rad) over time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excitation {
    pub frequency_hz: f64,
    pub amplitude: Profile,
    #[serde(default)]
    pub phase: Profile,
}

impl Excitation {
    pub fn current(&self, t: f64) -> Phasor {
        Phasor::new(self.amplitude.eval(t), self.phase.eval(t))
    }
}

/// One measurement unit: placement, electronics, and error history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitSpec {
    pub id: String,
    pub radius_m: f64,
    #[serde(default)]
    pub angle_rad: f64,
    /// Cosine between the sensing axis and the local tangent.
    #[serde(default = "one")]
    pub alignment: f64,
    /// Volts out per tesla in.
    pub gain_v_per_t: f64,
    /// Phase the electronics add to the field phase.
    #[serde(default)]
    pub electronics_phase_rad: f64,
    /// Initial relative amplitude error ε.
    #[serde(default)]
    pub eps: f64,
    /// Initial phase error δ (rad).
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub amp_drift: Profile,
    #[serde(default)]
    pub phase_drift: Profile,
    /// Overrides the scenario-wide noise level (V RMS).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_v: Option<f64>,
}

fn one() -> f64 {
    1.0
}

/// Placement of the units around the conductor.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryModel {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    pub alignments: Vec<f64>,
}

impl GeometryModel {
    pub fn new(radii: Vec<f64>, angles: Vec<f64>, alignments: Vec<f64>) -> Result<Self> {
        let n = radii.len();
        if n < 3 {
            return Err(Error::invalid("an array needs at least 3 units"));
        }
        if angles.len() != n || alignments.len() != n {
            return Err(Error::invalid("geometry vectors differ in length"));
        }
        if radii.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::invalid("unit radii must be positive"));
        }
        if alignments.iter().any(|a| !(*a > 0.0 && *a <= 1.0)) {
            return Err(Error::invalid("alignment factors must lie in (0, 1]"));
        }
        Ok(GeometryModel {
            radii,
            angles,
            alignments,
        })
    }

    /// `N` equal units evenly spaced on a circle, sensing axes on the tangent.
    pub fn ring(n: usize, radius: f64) -> Result<Self> {
        let angles = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
        GeometryModel::new(vec![radius; n], angles, vec![1.0; n])
    }

    pub fn unit_count(&self) -> usize {
        self.radii.len()
    }

    /// Amperes per tesla: `I = c_k·B_k` for the field unit `k` should see.
    pub fn field_scale(&self, k: usize) -> f64 {
        TAU * self.radii[k] / (MU0 * self.alignments[k])
    }
}

/// Field unit `k` (0-based) should see for conductor current `current`.
pub fn theoretical_field(geometry: &GeometryModel, k: usize, current: Phasor) -> Phasor {
    let amp = MU0 * current.amplitude() * geometry.alignments[k] / (TAU * geometry.radii[k]);
    Phasor::new(amp, current.phase())
}

/// Per-unit measurement error: constant part plus drift.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitDrift {
    pub eps: f64,
    pub delta: f64,
    pub amp_drift: Profile,
    pub phase_drift: Profile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSchedule {
    pub units: Vec<UnitDrift>,
}

impl DriftSchedule {
    pub fn none(n: usize) -> Self {
        DriftSchedule {
            units: vec![
                UnitDrift {
                    eps: 0.0,
                    delta: 0.0,
                    amp_drift: Profile::zero(),
                    phase_drift: Profile::zero(),
                };
                n
            ],
        }
    }

    /// Amplitude factor `1 + ε + Δε(t)` and phase shift `δ + Δδ(t)`.
    pub fn factors(&self, k: usize, t: f64) -> (f64, f64) {
        let u = &self.units[k];
        (1.0 + u.eps + u.amp_drift.eval(t), u.delta + u.phase_drift.eval(t))
    }

    pub fn validate(&self) -> Result<()> {
        for (k, u) in self.units.iter().enumerate() {
            u.amp_drift.validate("amplitude drift")?;
            u.phase_drift.validate("phase drift")?;
            let (lo, _) = u.amp_drift.extremes();
            if !(1.0 + u.eps + lo.min(0.0) > 0.0) {
                return Err(Error::invalid(format!(
                    "unit #{k}: amplitude factor 1 + ε + Δε reaches {}",
                    1.0 + u.eps + lo
                )));
            }
        }
        Ok(())
    }
}

/// Measured field of unit `k` at time `t`, given its theoretical field.
pub fn apply_drift(field: Phasor, k: usize, t: f64, drift: &DriftSchedule) -> Result<Phasor> {
    let (gain, shift) = drift.factors(k, t);
    if !(gain > 0.0) {
        return Err(Error::invalid(format!(
            "unit #{k}: amplitude factor {gain} at t = {t} s is not positive"
        )));
    }
    Ok(Phasor::new(field.amplitude() * gain, field.phase() + shift))
}

/// Everything needed to synthesize one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayScenario {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    pub seed: u64,
    /// Additive white noise on every unit output, V RMS.
    pub noise_v: f64,
    /// Give the reference channel a fixed 1e-4 amplitude and 1e-4 rad bias,
    /// the accuracy class of a zero-flux current sensor.
    #[serde(default)]
    pub reference_bias: bool,
    pub excitation: Excitation,
    #[serde(rename = "unit")]
    pub units: Vec<UnitSpec>,
}

const REFERENCE_BIAS: f64 = 1e-4;

impl ArrayScenario {
    pub fn unit_ids(&self) -> Vec<String> {
        self.units.iter().map(|u| u.id.clone()).collect()
    }

    pub fn geometry(&self) -> Result<GeometryModel> {
        GeometryModel::new(
            self.units.iter().map(|u| u.radius_m).collect(),
            self.units.iter().map(|u| u.angle_rad).collect(),
            self.units.iter().map(|u| u.alignment).collect(),
        )
    }

    pub fn drift(&self) -> DriftSchedule {
        DriftSchedule {
            units: self
                .units
                .iter()
                .map(|u| UnitDrift {
                    eps: u.eps,
                    delta: u.delta,
                    amp_drift: u.amp_drift.clone(),
                    phase_drift: u.phase_drift.clone(),
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration_s > 0.0) {
            return Err(Error::invalid("duration must be positive"));
        }
        if !(self.excitation.frequency_hz > 0.0) {
            return Err(Error::invalid("frequency must be positive"));
        }
        if !(self.sample_rate_hz > 2.0 * self.excitation.frequency_hz) {
            return Err(Error::invalid(
                "sample rate must exceed twice the excitation frequency",
            ));
        }
        if !(self.noise_v >= 0.0) {
            return Err(Error::invalid("noise level must be non-negative"));
        }
        self.excitation.amplitude.validate("excitation amplitude")?;
        self.excitation.phase.validate("excitation phase")?;
        let mut seen = std::collections::HashSet::new();
        for u in &self.units {
            if u.id.is_empty() || u.id == crate::io::REFERENCE_ID || u.id.contains(',') {
                return Err(Error::invalid(format!("bad unit id `{}`", u.id)));
            }
            if !seen.insert(u.id.as_str()) {
                return Err(Error::invalid(format!("duplicate unit id `{}`", u.id)));
            }
            if !(u.gain_v_per_t > 0.0) {
                return Err(Error::invalid(format!("unit {}: gain must be positive", u.id)));
            }
            if let Some(n) = u.noise_v {
                if !(n >= 0.0) {
                    return Err(Error::invalid(format!("unit {}: bad noise level", u.id)));
                }
            }
        }
        self.geometry()?;
        self.drift().validate()
    }

    /// Voltage phasor unit `k` should emit for current `current` at time `t`,
    /// before noise.
    pub fn unit_output(&self, geometry: &GeometryModel, k: usize, t: f64, current: Phasor) -> Result<Phasor> {
        let field = theoretical_field(geometry, k, current);
        let measured = apply_drift(field, k, t, &self.drift())?;
        let u = &self.units[k];
        Ok(Phasor::new(
            measured.amplitude() * u.gain_v_per_t,
            measured.phase() + u.electronics_phase_rad,
        ))
    }
}

/// How the conductor current is driven within a segment.
#[derive(Debug, Clone, PartialEq)]
pub enum SegmentDrive {
    /// Follow the scenario's excitation profiles.
    Scenario,
    /// Hold each listed amplitude for one window, at the excitation phase.
    Levels(Vec<f64>),
}

/// A stretch of time cut into equal analysis windows.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub source: Source,
    pub start_s: f64,
    pub window_s: f64,
    pub windows: usize,
    pub drive: SegmentDrive,
}

impl Segment {
    pub fn span(source: Source, start_s: f64, end_s: f64, window_s: f64) -> Self {
        let windows = ((end_s - start_s) / window_s + 1e-9).floor().max(0.0) as usize;
        Segment {
            source,
            start_s,
            window_s,
            windows,
            drive: SegmentDrive::Scenario,
        }
    }

    /// Stepped sweep ending at `end_s`, one window per level.
    pub fn sweep(levels: Vec<f64>, dwell_s: f64, end_s: f64) -> Self {
        let windows = levels.len();
        Segment {
            source: Source::Calibration,
            start_s: end_s - dwell_s * windows as f64,
            window_s: dwell_s,
            windows,
            drive: SegmentDrive::Levels(levels),
        }
    }

    pub fn end_s(&self) -> f64 {
        self.start_s + self.window_s * self.windows as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Unit(usize),
    Reference,
}

/// Sample generator bound to one scenario.
pub struct Simulator<'a> {
    scenario: &'a ArrayScenario,
    geometry: GeometryModel,
    drift: DriftSchedule,
}

impl<'a> Simulator<'a> {
    pub fn new(scenario: &'a ArrayScenario) -> Result<Self> {
        scenario.validate()?;
        Ok(Simulator {
            scenario,
            geometry: scenario.geometry()?,
            drift: scenario.drift(),
        })
    }

    pub fn geometry(&self) -> &GeometryModel {
        &self.geometry
    }

    fn sample_index(&self, t: f64) -> i64 {
        (t * self.scenario.sample_rate_hz).round() as i64
    }

    /// Samples of `channel` for every window of `segment`, in order.
    ///
    /// The noise stream for the channel is consumed from sample index
    /// `origin` onward; samples between segments are drawn and dropped so
    /// the noise at a given instant does not depend on how windows are cut.
    fn render(
        &self,
        channel: Channel,
        segments: &[Segment],
        mut sink: impl FnMut(usize, SampledWindow) -> Result<()>,
    ) -> Result<()> {
        let sc = self.scenario;
        let fs = sc.sample_rate_hz;
        let omega = TAU * sc.excitation.frequency_hz;
        let (noise, mut rng) = match channel {
            Channel::Unit(k) => {
                let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
                rng.set_stream(k as u64 + 1);
                (sc.units[k].noise_v.unwrap_or(sc.noise_v), Some(rng))
            }
            Channel::Reference => (0.0, None),
        };
        let (ref_gain, ref_phase) = if sc.reference_bias {
            (1.0 + REFERENCE_BIAS, REFERENCE_BIAS)
        } else {
            (1.0, 0.0)
        };

        let mut cursor: Option<i64> = None;
        for (si, seg) in segments.iter().enumerate() {
            let win_len = (seg.window_s * fs).round() as usize;
            for w in 0..seg.windows {
                let start = self.sample_index(seg.start_s + w as f64 * seg.window_s);
                if let (Some(c), Some(rng)) = (cursor, rng.as_mut()) {
                    if start < c {
                        return Err(Error::invalid("segments overlap or run backwards"));
                    }
                    for _ in c..start {
                        let _: f64 = rng.sample(StandardNormal);
                    }
                }
                let level = match &seg.drive {
                    SegmentDrive::Scenario => None,
                    SegmentDrive::Levels(levels) => Some(levels[w]),
                };
                let mut samples = Vec::with_capacity(win_len);
                for i in 0..win_len {
                    let idx = start + i as i64;
                    let t = idx as f64 / fs;
                    let amp = level.unwrap_or_else(|| sc.excitation.amplitude.eval(t));
                    let theta = sc.excitation.phase.eval(t);
                    let (a, phi) = match channel {
                        Channel::Reference => (amp * ref_gain, theta + ref_phase),
                        Channel::Unit(k) => {
                            let u = &sc.units[k];
                            let b = MU0 * amp * self.geometry.alignments[k] / (TAU * self.geometry.radii[k]);
                            let (g, d) = self.drift.factors(k, t);
                            (b * g * u.gain_v_per_t, theta + d + u.electronics_phase_rad)
                        }
                    };
                    let mut x = a * (omega * t + phi).cos();
                    if let Some(rng) = rng.as_mut() {
                        let z: f64 = rng.sample(StandardNormal);
                        x += noise * z;
                    }
                    samples.push(x);
                }
                cursor = Some(start + win_len as i64);
                sink(si, SampledWindow::new(samples, fs, start as f64 / fs))?;
            }
        }
        Ok(())
    }

    /// Raw sampled windows of one channel.
    pub fn windows(&self, channel: Channel, segments: &[Segment]) -> Result<Vec<SampledWindow>> {
        let mut out = Vec::new();
        self.render(channel, segments, |_, w| {
            out.push(w);
            Ok(())
        })?;
        Ok(out)
    }

    /// Lock-in phasors of one channel, grouped per segment.
    pub fn channel_phasors(&self, channel: Channel, segments: &[Segment]) -> Result<Vec<Vec<Phasor>>> {
        let f = self.scenario.excitation.frequency_hz;
        let mut out: Vec<Vec<Phasor>> = segments.iter().map(|s| Vec::with_capacity(s.windows)).collect();
        self.render(channel, segments, |si, w| {
            out[si].push(extract_phasor(&w, f)?);
            Ok(())
        })?;
        Ok(out)
    }
}

fn check_segments(scenario: &ArrayScenario, segments: &[Segment]) -> Result<()> {
    let f = scenario.excitation.frequency_hz;
    let fs = scenario.sample_rate_hz;
    for seg in segments {
        let len = (seg.window_s * fs).round();
        if (seg.window_s * fs - len).abs() > 1e-6 || whole_periods(len as usize, fs, f).is_none() {
            return Err(Error::invalid(format!(
                "{} window of {} s is not a whole number of samples and periods",
                seg.source, seg.window_s
            )));
        }
        if let SegmentDrive::Levels(levels) = &seg.drive {
            if levels.len() != seg.windows {
                return Err(Error::invalid("sweep level count differs from window count"));
            }
        }
    }
    Ok(())
}

/// Synthesize every channel over `segments` and reduce each window to a
/// phasor. Units render in parallel; the result does not depend on thread
/// count.
pub fn synthesize(scenario: &ArrayScenario, segments: &[Segment]) -> Result<Vec<PhasorBlock>> {
    let sim = Simulator::new(scenario)?;
    check_segments(scenario, segments)?;
    let mut channels: Vec<Channel> = (0..scenario.units.len()).map(Channel::Unit).collect();
    channels.push(Channel::Reference);
    let rendered: Vec<Vec<Vec<Phasor>>> = channels
        .par_iter()
        .map(|&c| sim.channel_phasors(c, segments))
        .collect::<Result<_>>()?;

    let (reference, units) = rendered.split_last().unwrap();
    let ids = scenario.unit_ids();
    Ok(segments
        .iter()
        .enumerate()
        .map(|(si, seg)| {
            let fs = scenario.sample_rate_hz;
            let times = (0..seg.windows)
                .map(|w| (((seg.start_s + w as f64 * seg.window_s) * fs).round()) / fs)
                .collect();
            PhasorBlock {
                source: seg.source,
                unit_ids: ids.clone(),
                times,
                units: units.iter().map(|u| u[si].clone()).collect(),
                reference: reference[si].clone(),
            }
        })
        .collect())
}

/// Built-in eight-unit scenario mirroring the laboratory drift experiment:
/// S1 and S2 sag in amplitude and phase one after the other, then S3 climbs
/// in amplitude only, while the current ramps as a triangle wave.
///
/// Timeline (seconds): calibration sweep before 0, training 0–20,
/// test 20–320. Drift ramps are S1 40–100, S2 110–170, S3 190–270.
pub fn drift_scenario() -> ArrayScenario {
    let ids = ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8"];
    // spread of placement, electronics and initial error across units
    let alignment = [0.9990, 0.9996, 0.9982, 1.0, 0.9993, 0.9987, 0.9998, 0.9979];
    let radius = [0.0500, 0.0502, 0.0498, 0.0501, 0.0499, 0.0503, 0.0497, 0.0500];
    let gain = [
        24_500.0, 23_800.0, 25_100.0, 24_200.0, 24_900.0, 23_600.0, 24_700.0, 25_300.0,
    ];
    let elec = [0.012, -0.008, 0.015, 0.004, -0.011, 0.009, -0.003, 0.006];
    let eps = [6e-4, -4e-4, 3e-4, -7e-4, 2e-4, 5e-4, -1e-4, -3e-4];
    let delta = [3e-4, -2e-4, 5e-4, -4e-4, 1e-4, -6e-4, 2e-4, 4e-4];

    let mut units: Vec<UnitSpec> = ids
        .iter()
        .enumerate()
        .map(|(k, id)| UnitSpec {
            id: id.to_string(),
            radius_m: radius[k],
            angle_rad: TAU * k as f64 / ids.len() as f64,
            alignment: alignment[k],
            gain_v_per_t: gain[k],
            electronics_phase_rad: elec[k],
            eps: eps[k],
            delta: delta[k],
            amp_drift: Profile::zero(),
            phase_drift: Profile::zero(),
            noise_v: None,
        })
        .collect();

    // conventional mean: -(0.03 + 0.03)/8 = -0.75 %, then +0.3 % once S3
    // reaches +8.4 %; phase -(0.144 + 0.144)/8 = -0.036 rad
    units[0].amp_drift = Profile::ramp(40.0, 100.0, -0.03);
    units[0].phase_drift = Profile::ramp(40.0, 100.0, -0.144);
    units[1].amp_drift = Profile::ramp(110.0, 170.0, -0.03);
    units[1].phase_drift = Profile::ramp(110.0, 170.0, -0.144);
    units[2].amp_drift = Profile::ramp(190.0, 270.0, 0.084);

    ArrayScenario {
        sample_rate_hz: 20_000.0,
        duration_s: 320.0,
        seed: 20240,
        noise_v: 3e-5,
        reference_bias: false,
        excitation: Excitation {
            frequency_hz: 60.0,
            // phase noise grows as 1/amplitude; a 2 A floor keeps the
            // low-current rows from dominating the residual
            amplitude: Profile::Triangle {
                min: 2.0,
                max: 10.5,
                period_s: 20.0,
                offset_s: 0.0,
            },
            phase: Profile::Triangle {
                min: 0.1,
                max: 0.5,
                period_s: 13.0,
                offset_s: 0.0,
            },
        },
        units,
    }
}

/// The same array with every drift removed.
pub fn zero_drift(mut scenario: ArrayScenario) -> ArrayScenario {
    for u in &mut scenario.units {
        u.amp_drift = Profile::zero();
        u.phase_drift = Profile::zero();
    }
    scenario
}

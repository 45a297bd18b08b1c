//! Self-healing current measurement with an array of magnetic sensing units.
//!
//! Unit outputs are reduced to phasors, calibrated against a reference
//! current, and monitored with PCA residual (Q) statistics. Units whose Q
//! drifts above the control limit are dropped from the current estimate.

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod config;
pub mod eigen;
pub mod error;
pub mod heal;
pub mod identify;
pub mod io;
pub mod pca;
pub mod phasor;
pub mod pipeline;
pub mod series;
pub mod sim;
pub mod spe;

pub use calibration::{calibrate, CalibrationRow, CalibrationTable};
pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use heal::{heal, HealedEstimate};
pub use identify::{identify, IdentificationReport, IdentifyOptions, Verdict};
pub use pca::{DataMatrix, FitOptions, PcaModel, SignalKind, VarianceRule};
pub use phasor::{extract_phasor, Phasor, SampledWindow};
pub use pipeline::{run_pipeline, run_stage, Stage};
pub use series::{PhasorBlock, Source};
pub use sim::{drift_scenario, synthesize, zero_drift, ArrayScenario};
pub use spe::{monitor, q_alpha, H0Form, QSeries};

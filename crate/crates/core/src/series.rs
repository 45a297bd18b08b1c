//! Time-aligned phasor blocks shared by the simulator, CSV layer and pipeline.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pca::{DataMatrix, SignalKind};
use crate::phasor::{unwrap_phase, Phasor};

/// Which part of a run a window belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Calibration,
    Train,
    Test,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Calibration => "calibration",
            Source::Train => "train",
            Source::Test => "test",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "calibration" => Ok(Source::Calibration),
            "train" => Ok(Source::Train),
            "test" => Ok(Source::Test),
            other => Err(Error::invalid(format!("unknown source `{other}`"))),
        }
    }
}

/// Phasors of every unit plus the reference channel over a run of windows.
///
/// `units[k][i]` is unit `k` in window `i`; `times[i]` is the window start.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasorBlock {
    pub source: Source,
    pub unit_ids: Vec<String>,
    pub times: Vec<f64>,
    pub units: Vec<Vec<Phasor>>,
    pub reference: Vec<Phasor>,
}

impl PhasorBlock {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn unit_index(&self, id: &str) -> Option<usize> {
        self.unit_ids.iter().position(|u| u == id)
    }

    /// Amplitude columns, one per unit.
    pub fn amplitude_matrix(&self) -> Result<DataMatrix> {
        let cols: Vec<Vec<f64>> = self
            .units
            .iter()
            .map(|u| u.iter().map(|p| p.amplitude()).collect())
            .collect();
        DataMatrix::from_columns(SignalKind::Amplitude, self.unit_ids.clone(), &cols)
    }

    /// Phase columns, one per unit, each unwrapped independently.
    pub fn phase_matrix(&self) -> Result<DataMatrix> {
        let cols: Vec<Vec<f64>> = self
            .units
            .iter()
            .map(|u| unwrap_phase(&u.iter().map(|p| p.phase()).collect::<Vec<_>>()))
            .collect();
        DataMatrix::from_columns(SignalKind::Phase, self.unit_ids.clone(), &cols)
    }

    pub fn matrix(&self, kind: SignalKind) -> Result<DataMatrix> {
        match kind {
            SignalKind::Amplitude => self.amplitude_matrix(),
            SignalKind::Phase => self.phase_matrix(),
        }
    }

    /// Phasors of one window, in unit order.
    pub fn row(&self, i: usize) -> Vec<Phasor> {
        self.units.iter().map(|u| u[i]).collect()
    }
}

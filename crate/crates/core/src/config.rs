//! Pipeline configuration, read from TOML.
//!
//! ```toml
//! seed = 7                      # optional; overrides the scenario seed
//! kappa = 0.85
//! alpha = 0.99
//! exceedance = 0.05             # share of test rows above Q_alpha that marks a unit
//! variance_rule = "squared"     # or "cumulative"
//! h0_form = "corrected"         # or "as_printed"
//! max_nonlinearity = 0.01
//! out_dir = "out"
//! scenario_path = "array.toml"  # optional, relative to this file
//!
//! [windows]
//! train_s = 0.1
//! test_s = 1.0
//! train_start_s = 0.0
//! train_end_s = 20.0
//! test_start_s = 20.0
//! test_end_s = 320.0
//!
//! [calibration]
//! levels_a = [2.0, 3.5, 5.0, 6.5, 8.0, 9.5, 10.5]
//! dwell_s = 1.0
//!
//! [scenario]                    # optional inline scenario, same keys as a scenario file
//! ```
//!
//! Without `scenario` or `scenario_path` the built-in eight-unit drift
//! scenario is used.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::calibration::DEFAULT_MAX_NONLINEARITY;
use crate::error::{Error, Result};
use crate::identify::IdentifyOptions;
use crate::pca::VarianceRule;
use crate::series::Source;
use crate::sim::{drift_scenario, ArrayScenario, Segment};
use crate::spe::H0Form;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Windows {
    pub train_s: f64,
    pub test_s: f64,
    pub train_start_s: f64,
    pub train_end_s: f64,
    pub test_start_s: f64,
    pub test_end_s: f64,
}

impl Default for Windows {
    fn default() -> Self {
        Windows {
            train_s: 0.1,
            test_s: 1.0,
            train_start_s: 0.0,
            train_end_s: 20.0,
            test_start_s: 20.0,
            test_end_s: 320.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationSweep {
    pub levels_a: Vec<f64>,
    pub dwell_s: f64,
}

impl Default for CalibrationSweep {
    fn default() -> Self {
        CalibrationSweep {
            levels_a: vec![2.0, 3.5, 5.0, 6.5, 8.0, 9.5, 10.5],
            dwell_s: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: Option<u64>,
    pub kappa: f64,
    pub alpha: f64,
    pub exceedance: f64,
    pub variance_rule: VarianceRule,
    pub h0_form: H0Form,
    pub max_nonlinearity: f64,
    pub out_dir: PathBuf,
    pub scenario_path: Option<PathBuf>,
    pub windows: Windows,
    pub calibration: CalibrationSweep,
    pub scenario: Option<ArrayScenario>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: None,
            kappa: 0.85,
            alpha: 0.99,
            exceedance: 0.05,
            variance_rule: VarianceRule::Squared,
            h0_form: H0Form::Corrected,
            max_nonlinearity: DEFAULT_MAX_NONLINEARITY,
            out_dir: PathBuf::from("out"),
            scenario_path: None,
            windows: Windows::default(),
            calibration: CalibrationSweep::default(),
            scenario: None,
        }
    }
}

fn read_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub fn read_scenario(path: &Path) -> Result<ArrayScenario> {
    let sc: ArrayScenario = read_toml(path)?;
    sc.validate()?;
    Ok(sc)
}

pub fn write_scenario(path: &Path, scenario: &ArrayScenario) -> Result<()> {
    let text = toml::to_string(scenario).map_err(|e| Error::Config(e.to_string()))?;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

impl PipelineConfig {
    /// Parse a config file, resolving `scenario_path` and `out_dir`
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: PipelineConfig = read_toml(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(p) = cfg.scenario_path.take() {
            let p = if p.is_relative() { base.join(p) } else { p };
            if !p.is_file() {
                return Err(Error::Config(format!("scenario file {} not found", p.display())));
            }
            cfg.scenario_path = Some(p);
        }
        if cfg.out_dir.is_relative() {
            cfg.out_dir = base.join(&cfg.out_dir);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return bad("kappa must lie in (0, 1)");
        }
        if !(self.alpha > 0.5 && self.alpha < 1.0) {
            return bad("alpha must lie in (0.5, 1)");
        }
        if !(self.exceedance >= 0.0 && self.exceedance < 1.0) {
            return bad("exceedance must lie in [0, 1)");
        }
        if !(self.max_nonlinearity > 0.0) {
            return bad("max_nonlinearity must be positive");
        }
        if self.scenario.is_some() && self.scenario_path.is_some() {
            return bad("give either scenario or scenario_path, not both");
        }
        let w = &self.windows;
        if !(w.train_s > 0.0 && w.test_s > 0.0) {
            return bad("window lengths must be positive");
        }
        if !(w.train_end_s - w.train_start_s >= 2.0 * w.train_s
            && w.test_end_s - w.test_start_s >= 2.0 * w.test_s)
        {
            return bad("train and test spans must hold at least two windows");
        }
        if w.test_start_s < w.train_end_s {
            return bad("test span must start after the training span");
        }
        let c = &self.calibration;
        if c.levels_a.len() < 2 || c.levels_a.iter().any(|l| !(*l > 0.0)) || !(c.dwell_s > 0.0) {
            return bad("calibration needs at least two positive levels and a positive dwell");
        }
        Ok(())
    }

    /// Scenario to simulate, with the seed override applied.
    pub fn resolve_scenario(&self) -> Result<ArrayScenario> {
        let mut sc = match (&self.scenario, &self.scenario_path) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => read_scenario(p)?,
            (None, None) => drift_scenario(),
        };
        if let Some(seed) = self.seed {
            sc.seed = seed;
        }
        sc.validate()?;
        if self.windows.test_end_s > sc.duration_s + 1e-9 {
            return Err(Error::Config(format!(
                "test span ends at {} s but the scenario lasts {} s",
                self.windows.test_end_s, sc.duration_s
            )));
        }
        Ok(sc)
    }

    /// Calibration sweep (ending where training starts), training and test
    /// spans, in time order.
    pub fn segments(&self) -> Vec<Segment> {
        let w = &self.windows;
        vec![
            Segment::sweep(
                self.calibration.levels_a.clone(),
                self.calibration.dwell_s,
                w.train_start_s,
            ),
            Segment::span(Source::Train, w.train_start_s, w.train_end_s, w.train_s),
            Segment::span(Source::Test, w.test_start_s, w.test_end_s, w.test_s),
        ]
    }

    pub fn identify_options(&self) -> IdentifyOptions {
        IdentifyOptions {
            kappa: self.kappa,
            rule: self.variance_rule,
            alpha: self.alpha,
            h0: self.h0_form,
            exceedance: self.exceedance,
        }
    }

    /// Squared-eigenvalue component rule and the as-printed `h0`.
    pub fn paper_mode(&mut self) {
        self.variance_rule = VarianceRule::Squared;
        self.h0_form = H0Form::AsPrinted;
    }
}

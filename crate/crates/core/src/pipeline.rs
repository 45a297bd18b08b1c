//! Stage orchestration. Each stage reads only files written by earlier
//! stages under the output directory, so a run can restart at any stage.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::calibration::{calibrate, unit_errors, CalibrationTable};
use crate::config::{read_scenario, write_scenario, PipelineConfig};
use crate::error::{Error, Result};
use crate::heal::{heal, HealedEstimate};
use crate::identify::{identify, IdentificationReport};
use crate::io;
use crate::pca::{FitOptions, PcaModel, SignalKind};
use crate::phasor::Phasor;
use crate::series::{PhasorBlock, Source};
use crate::sim::{synthesize, Channel, Simulator};
use crate::spe::monitor;

pub const SCENARIO_FILE: &str = "scenario.toml";
pub const PREVIEW_FILE: &str = "waveform_preview.csv";
pub const PHASOR_FILE: &str = "phasors.csv";
pub const CALIBRATION_FILE: &str = "calibration.csv";
pub const IDENTIFICATION_FILE: &str = "identification.csv";
pub const IDENTIFICATION_TEXT: &str = "identification.txt";
pub const PAIR_SCORES_FILE: &str = "pair_scores.csv";
pub const TRIPLE_Q_FILE: &str = "triple_q.csv";
pub const CURRENT_FILE: &str = "current.csv";
pub const REPORT_DIR: &str = "report";

pub fn model_file(kind: SignalKind) -> String {
    format!("model_{kind}.txt")
}

pub fn q_file(kind: SignalKind) -> String {
    format!("q_{kind}.csv")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Simulate,
    Extract,
    Calibrate,
    Train,
    Monitor,
    Identify,
    Heal,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Simulate,
        Stage::Extract,
        Stage::Calibrate,
        Stage::Train,
        Stage::Monitor,
        Stage::Identify,
        Stage::Heal,
        Stage::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Simulate => "simulate",
            Stage::Extract => "extract",
            Stage::Calibrate => "calibrate",
            Stage::Train => "train",
            Stage::Monitor => "monitor",
            Stage::Identify => "identify",
            Stage::Heal => "heal",
            Stage::Report => "report",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown stage `{s}`")))
    }
}

/// Run one stage against `cfg.out_dir`.
pub fn run_stage(stage: Stage, cfg: &PipelineConfig) -> Result<()> {
    let out = cfg.out_dir.as_path();
    log::info!("stage {stage}");
    let result = match stage {
        Stage::Simulate => simulate(cfg, out),
        Stage::Extract => extract(cfg, out),
        Stage::Calibrate => calibrate_stage(cfg, out),
        Stage::Train => train(cfg, out),
        Stage::Monitor => monitor_stage(cfg, out),
        Stage::Identify => identify_stage(cfg, out),
        Stage::Heal => heal_stage(out),
        Stage::Report => report(out),
    };
    result.map_err(|e| Error::Stage {
        stage: stage.as_str(),
        source: Box::new(e),
    })
}

/// Every stage in order.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<()> {
    cfg.validate()?;
    for stage in Stage::ALL {
        run_stage(stage, cfg)?;
    }
    Ok(())
}

fn phasor_blocks(out: &Path) -> Result<Vec<PhasorBlock>> {
    io::read_phasors(&out.join(PHASOR_FILE))
}

/// Persist the resolved scenario and a preview of the first training
/// window's raw samples. Full waveforms are regenerated on demand from the
/// scenario and seed.
fn simulate(cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let scenario = cfg.resolve_scenario()?;
    write_scenario(&out.join(SCENARIO_FILE), &scenario)?;

    let segments = cfg.segments();
    let sim = Simulator::new(&scenario)?;
    let first_train = segments[0].windows;
    let mut channels: Vec<(String, Channel)> = scenario
        .unit_ids()
        .into_iter()
        .enumerate()
        .map(|(k, id)| (id, Channel::Unit(k)))
        .collect();
    channels.push((io::REFERENCE_ID.to_string(), Channel::Reference));
    let mut columns = Vec::with_capacity(channels.len());
    for (_, ch) in &channels {
        let mut windows = sim.windows(*ch, &segments[..2])?;
        if windows.len() <= first_train {
            return Err(Error::invalid("no training window to preview"));
        }
        columns.push(windows.swap_remove(first_train));
    }
    let mut w = io::csv_writer(&out.join(PREVIEW_FILE))?;
    let mut header = vec!["t_s".to_string()];
    header.extend(channels.iter().map(|(id, _)| id.clone()));
    w.write_record(&header)?;
    let first = &columns[0];
    for i in 0..first.samples.len() {
        let t = first.start_time + i as f64 / first.sample_rate;
        let mut rec = vec![io::num(t)];
        rec.extend(columns.iter().map(|c| io::num(c.samples[i])));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io(out.join(PREVIEW_FILE), e))
}

fn extract(cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let scenario = read_scenario(&out.join(SCENARIO_FILE))?;
    let blocks = synthesize(&scenario, &cfg.segments())?;
    io::write_phasors(&out.join(PHASOR_FILE), &blocks)
}

fn calibrate_stage(cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let blocks = phasor_blocks(out)?;
    let sweep = io::block_for(&blocks, Source::Calibration)?;
    let rows = sweep
        .unit_ids
        .iter()
        .zip(&sweep.units)
        .map(|(id, u)| calibrate(id, u, &sweep.reference, cfg.max_nonlinearity))
        .collect::<Result<Vec<_>>>()?;
    io::write_calibration(&out.join(CALIBRATION_FILE), &CalibrationTable { rows })
}

fn train(cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let blocks = phasor_blocks(out)?;
    let block = io::block_for(&blocks, Source::Train)?;
    let fit = FitOptions::new(cfg.kappa, cfg.variance_rule);
    for kind in SignalKind::ALL {
        let model = PcaModel::fit(&block.matrix(kind)?, &fit)?;
        io::write_model(&out.join(model_file(kind)), &model)?;
    }
    Ok(())
}

fn monitor_stage(cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let blocks = phasor_blocks(out)?;
    let block = io::block_for(&blocks, Source::Test)?;
    for kind in SignalKind::ALL {
        let model = io::read_model(&out.join(model_file(kind)))?;
        let q = monitor(&model, &block.matrix(kind)?, cfg.alpha, cfg.h0_form)?;
        log::info!(
            "{kind}: {:.1} % of test rows above the limit",
            100.0 * q.exceedance_fraction()
        );
        io::write_qseries(&out.join(q_file(kind)), &q)?;
    }
    Ok(())
}

fn identify_stage(cfg: &PipelineConfig, out: &Path) -> Result<()> {
    let blocks = phasor_blocks(out)?;
    let train = io::block_for(&blocks, Source::Train)?;
    let test = io::block_for(&blocks, Source::Test)?;
    let data = SignalKind::ALL
        .iter()
        .map(|&k| Ok((train.matrix(k)?, test.matrix(k)?)))
        .collect::<Result<Vec<_>>>()?;
    let report: IdentificationReport = identify(&data, &cfg.identify_options())?;
    io::write_identification(&out.join(IDENTIFICATION_FILE), &report)?;
    io::write_pair_scores(&out.join(PAIR_SCORES_FILE), &report)?;
    io::write_triple_q(&out.join(TRIPLE_Q_FILE), &report, &test.times)?;
    let text = io::identification_summary(&report);
    std::fs::write(out.join(IDENTIFICATION_TEXT), text)
        .map_err(|e| Error::io(out.join(IDENTIFICATION_TEXT), e))
}

fn excluded_units(out: &Path) -> Result<BTreeSet<String>> {
    Ok(io::read_abnormal(&out.join(IDENTIFICATION_FILE))?
        .into_values()
        .flatten()
        .collect())
}

fn heal_stage(out: &Path) -> Result<()> {
    let blocks = phasor_blocks(out)?;
    let test = io::block_for(&blocks, Source::Test)?;
    let table = io::read_calibration(&out.join(CALIBRATION_FILE))?;
    let est = heal(test, &table, &excluded_units(out)?)?;
    io::write_current(&out.join(CURRENT_FILE), &est)
}

/// Current reading of each unit alone against the reference, per window.
fn write_unit_errors(path: &Path, block: &PhasorBlock, table: &CalibrationTable) -> Result<()> {
    let mut w = io::csv_writer(path)?;
    w.write_record(["t_s", "unit_id", "eps_a", "eps_p_rad"])?;
    let rows: Vec<_> = block
        .unit_ids
        .iter()
        .map(|id| {
            table
                .get(id)
                .ok_or_else(|| Error::invalid(format!("unit {id} is not calibrated")))
        })
        .collect::<Result<_>>()?;
    for i in 0..block.len() {
        let t = io::num(block.times[i]);
        for (k, row) in rows.iter().enumerate() {
            let est =
                Phasor::from_complex(block.units[k][i].to_complex() * Complex64::from_polar(row.xi, row.phi));
            let (ea, ep) = unit_errors(est, block.reference[i])?;
            w.write_record([t.clone(), row.unit.clone(), io::num(ea), io::num(ep)])?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn summary(
    table: &CalibrationTable,
    ident: &str,
    est: &HealedEstimate,
    excluded: &BTreeSet<String>,
) -> String {
    let mut s = String::new();
    s.push_str("calibration\n");
    s.push_str("  unit   xi [A/V]        phi [rad]     nonlinearity  phase_std [rad]\n");
    for r in &table.rows {
        s.push_str(&format!(
            "  {:<6} {:<15.6} {:<13.6} {:<13.3e} {:.3e}\n",
            r.unit, r.xi, r.phi, r.nonlinearity, r.phase_std
        ));
    }
    s.push_str("\nidentification\n");
    for line in ident.lines() {
        s.push_str("  ");
        s.push_str(line);
        s.push('\n');
    }
    let (ca, cp) = HealedEstimate::worst(&est.conventional_errors);
    let (ha, hp) = HealedEstimate::worst(&est.healed_errors);
    let ex: Vec<&str> = excluded.iter().map(String::as_str).collect();
    s.push_str("\ncurrent estimate over the test span\n");
    s.push_str(&format!("  excluded units: {{{}}}\n", ex.join(", ")));
    s.push_str(&format!(
        "  conventional worst error: {:+.4} %  {:+.3e} rad\n",
        100.0 * ca,
        cp
    ));
    s.push_str(&format!(
        "  healed worst error:       {:+.4} %  {:+.3e} rad\n",
        100.0 * ha,
        hp
    ));
    s
}

/// Plot-ready series and a text summary under `report/`.
fn report(out: &Path) -> Result<()> {
    let dir = out.join(REPORT_DIR);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let blocks = phasor_blocks(out)?;
    let table = io::read_calibration(&out.join(CALIBRATION_FILE))?;
    write_unit_errors(
        &dir.join("train_errors.csv"),
        io::block_for(&blocks, Source::Train)?,
        &table,
    )?;
    write_unit_errors(
        &dir.join("test_errors.csv"),
        io::block_for(&blocks, Source::Test)?,
        &table,
    )?;

    for name in [PAIR_SCORES_FILE, TRIPLE_Q_FILE] {
        std::fs::copy(out.join(name), dir.join(name)).map_err(|e| Error::io(out.join(name), e))?;
    }

    let est = io::read_current(&out.join(CURRENT_FILE))?;
    let path = dir.join("current_errors.csv");
    let mut w = io::csv_writer(&path)?;
    w.write_record([
        "t_s",
        "conv_eps_a",
        "conv_eps_p_rad",
        "healed_eps_a",
        "healed_eps_p_rad",
    ])?;
    for i in 0..est.times.len() {
        let (ca, cp) = est.conventional_errors[i];
        let (ha, hp) = est.healed_errors[i];
        w.write_record([est.times[i], ca, cp, ha, hp].map(io::num))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let ident_path = out.join(IDENTIFICATION_TEXT);
    let ident = std::fs::read_to_string(&ident_path).map_err(|e| Error::io(&ident_path, e))?;
    let text = summary(&table, &ident, &est, &excluded_units(out)?);
    let path = dir.join("summary.txt");
    let mut f = io::create(&path)?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(&path, e))?;
    f.flush().map_err(|e| Error::io(&path, e))
}

/// All files under `dir`, relative and sorted.
pub fn output_tree(dir: &Path) -> Result<Vec<PathBuf>> {
    fn walk(base: &Path, dir: &Path, acc: &mut Vec<PathBuf>) -> Result<()> {
        for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.is_dir() {
                walk(base, &path, acc)?;
            } else {
                acc.push(path.strip_prefix(base).unwrap_or(&path).to_path_buf());
            }
        }
        Ok(())
    }
    let mut acc = Vec::new();
    walk(dir, dir, &mut acc)?;
    acc.sort();
    Ok(acc)
}

//! File formats: phasor CSV, calibration CSV, PCA model text, Q series and
//! identification CSVs, current comparison CSV.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! reading a file back yields the exact values that were written and
//! repeated runs produce byte-identical files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::Deserialize;

use crate::calibration::{CalibrationRow, CalibrationTable};
use crate::error::{Error, Result};
use crate::heal::HealedEstimate;
use crate::identify::{IdentificationReport, Verdict};
use crate::pca::{DataMatrix, PcaModel, SignalKind};
use crate::phasor::Phasor;
use crate::series::{PhasorBlock, Source};
use crate::spe::QSeries;

/// Pseudo unit id carrying the reference current in phasor files.
pub const REFERENCE_ID: &str = "REF";

pub const PHASOR_HEADER: [&str; 5] = ["t_s", "unit_id", "amplitude", "phase_rad", "kind_source"];
pub const CALIBRATION_HEADER: [&str; 5] = ["unit", "xi_a_per_v", "phi_rad", "nonlinearity", "phase_std_rad"];
pub const QSERIES_HEADER: [&str; 4] = ["row", "q", "threshold", "exceeded"];
pub const IDENTIFICATION_HEADER: [&str; 5] =
    ["kind", "unit", "verdict", "exceedance_fraction", "reference_pair"];
pub const CURRENT_HEADER: [&str; 11] = [
    "t_s",
    "conv_amp",
    "conv_phase_rad",
    "healed_amp",
    "healed_phase_rad",
    "ref_amp",
    "ref_phase_rad",
    "conv_eps_a",
    "conv_eps_p_rad",
    "healed_eps_a",
    "healed_eps_p_rad",
];

/// Shortest round-trip text for `v`, in exponent form when very small or
/// very large.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::WriterBuilder::new().from_writer(create(path)?))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn parse_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: err.to_string(),
    }
}

fn require_headers(path: &Path, reader: &mut csv::Reader<File>, expected: &[&str]) -> Result<()> {
    let headers = reader.headers().map_err(|e| parse_error(path, e))?.clone();
    for h in expected {
        if !headers.iter().any(|x| x == *h) {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: format!("missing column `{h}`"),
            });
        }
    }
    Ok(())
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::io("<csv>", e))
}

// ---------------------------------------------------------------------------
// Phasors
// ---------------------------------------------------------------------------

/// Long format: one row per (window, channel), reference rows last within
/// each window.
pub fn write_phasors(path: &Path, blocks: &[PhasorBlock]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(PHASOR_HEADER)?;
    for b in blocks {
        for i in 0..b.len() {
            let t = num(b.times[i]);
            for (k, id) in b.unit_ids.iter().enumerate() {
                let p = b.units[k][i];
                w.write_record([
                    t.as_str(),
                    id,
                    &num(p.amplitude()),
                    &num(p.phase()),
                    b.source.as_str(),
                ])?;
            }
            let r = b.reference[i];
            w.write_record([
                t.as_str(),
                REFERENCE_ID,
                &num(r.amplitude()),
                &num(r.phase()),
                b.source.as_str(),
            ])?;
        }
    }
    finish(w)
}

#[derive(Debug, Deserialize)]
struct PhasorRecord {
    t_s: f64,
    unit_id: String,
    amplitude: f64,
    phase_rad: f64,
    kind_source: String,
}

/// Read a phasor file back into one block per source. Columns are matched
/// by header name, so their order in the file does not matter.
/// Time and per-unit phasors of one CSV row group.
type Row = (f64, BTreeMap<String, Phasor>);

pub fn read_phasors(path: &Path) -> Result<Vec<PhasorBlock>> {
    let mut reader = csv_reader(path)?;
    require_headers(path, &mut reader, &PHASOR_HEADER)?;

    // source -> unit order, time -> unit -> phasor
    let mut units: BTreeMap<Source, Vec<String>> = BTreeMap::new();
    let mut cells: BTreeMap<Source, BTreeMap<u64, Row>> = BTreeMap::new();
    let headers = reader.headers().map_err(|e| parse_error(path, e))?.clone();
    for result in reader.records() {
        let record = result.map_err(|e| parse_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let rec: PhasorRecord = record.deserialize(Some(&headers)).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
        let bad = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        for (name, v) in [
            ("t_s", rec.t_s),
            ("amplitude", rec.amplitude),
            ("phase_rad", rec.phase_rad),
        ] {
            if !v.is_finite() {
                return Err(bad(format!(
                    "non-finite value in column `{name}` (unit {})",
                    rec.unit_id
                )));
            }
        }
        if rec.amplitude < 0.0 {
            return Err(bad(format!("negative amplitude for unit {}", rec.unit_id)));
        }
        let source: Source = rec.kind_source.parse().map_err(|e: Error| bad(e.to_string()))?;
        if rec.unit_id != REFERENCE_ID {
            let order = units.entry(source).or_default();
            if !order.contains(&rec.unit_id) {
                order.push(rec.unit_id.clone());
            }
        }
        let slot = cells
            .entry(source)
            .or_default()
            .entry(rec.t_s.to_bits())
            .or_insert_with(|| (rec.t_s, BTreeMap::new()));
        if slot
            .1
            .insert(rec.unit_id.clone(), Phasor::new(rec.amplitude, rec.phase_rad))
            .is_some()
        {
            return Err(bad(format!(
                "duplicate row for unit {} at t = {}",
                rec.unit_id, rec.t_s
            )));
        }
    }

    let mut blocks = Vec::new();
    for (source, by_time) in cells {
        let ids = units.remove(&source).unwrap_or_default();
        let mut rows: Vec<(f64, BTreeMap<String, Phasor>)> = by_time.into_values().collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut block = PhasorBlock {
            source,
            unit_ids: ids.clone(),
            times: Vec::with_capacity(rows.len()),
            units: vec![Vec::with_capacity(rows.len()); ids.len()],
            reference: Vec::with_capacity(rows.len()),
        };
        for (t, mut row) in rows {
            let missing = |id: &str| Error::Parse {
                path: path.to_path_buf(),
                line: 0,
                message: format!("{source} window at t = {t} has no row for {id}"),
            };
            block.times.push(t);
            for (k, id) in ids.iter().enumerate() {
                block.units[k].push(row.remove(id).ok_or_else(|| missing(id))?);
            }
            block
                .reference
                .push(row.remove(REFERENCE_ID).ok_or_else(|| missing(REFERENCE_ID))?);
        }
        blocks.push(block);
    }
    Ok(blocks)
}

pub fn block_for(blocks: &[PhasorBlock], source: Source) -> Result<&PhasorBlock> {
    blocks
        .iter()
        .find(|b| b.source == source)
        .ok_or_else(|| Error::invalid(format!("phasor file has no {source} windows")))
}

/// Amplitude and (unwrapped) phase matrices for one source.
pub fn ingest_phasors(path: &Path, source: Source) -> Result<(DataMatrix, DataMatrix)> {
    let blocks = read_phasors(path)?;
    let b = block_for(&blocks, source)?;
    Ok((b.amplitude_matrix()?, b.phase_matrix()?))
}

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

pub fn write_calibration(path: &Path, table: &CalibrationTable) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(CALIBRATION_HEADER)?;
    for r in &table.rows {
        w.write_record([
            r.unit.clone(),
            num(r.xi),
            num(r.phi),
            num(r.nonlinearity),
            num(r.phase_std),
        ])?;
    }
    finish(w)
}

#[derive(Debug, Deserialize)]
struct CalibrationRecord {
    unit: String,
    xi_a_per_v: f64,
    phi_rad: f64,
    nonlinearity: f64,
    phase_std_rad: f64,
}

pub fn read_calibration(path: &Path) -> Result<CalibrationTable> {
    let mut reader = csv_reader(path)?;
    require_headers(path, &mut reader, &CALIBRATION_HEADER)?;
    let mut rows = Vec::new();
    for result in reader.deserialize::<CalibrationRecord>() {
        let r = result.map_err(|e| parse_error(path, e))?;
        if !(r.xi_a_per_v > 0.0) || !r.phi_rad.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: rows.len() as u64 + 2,
                message: format!("bad calibration for unit {}", r.unit),
            });
        }
        rows.push(CalibrationRow {
            unit: r.unit,
            xi: r.xi_a_per_v,
            phi: r.phi_rad,
            nonlinearity: r.nonlinearity,
            phase_std: r.phase_std_rad,
            intercept: 0.0,
        });
    }
    Ok(CalibrationTable { rows })
}

// ---------------------------------------------------------------------------
// PCA model text
// ---------------------------------------------------------------------------

const MODEL_MAGIC: &str = "# magheal pca model v1";

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(num).collect::<Vec<_>>().join(" ")
}

/// Line-oriented `key values...` text; eigenvectors follow as `n` rows.
pub fn write_model(path: &Path, model: &PcaModel) -> Result<()> {
    let mut out = create(path)?;
    let n = model.dim();
    let mut text = String::new();
    text.push_str(MODEL_MAGIC);
    text.push('\n');
    text.push_str(&format!("kind {}\n", model.kind));
    text.push_str(&format!("units {}\n", model.unit_ids.join(" ")));
    text.push_str(&format!("kappa {}\n", model.kappa));
    text.push_str(&format!("components {}\n", model.components));
    text.push_str(&format!("mean {}\n", join(model.mean.iter().copied())));
    text.push_str(&format!("std {}\n", join(model.std.iter().copied())));
    text.push_str(&format!(
        "eigenvalues {}\n",
        join(model.eigenvalues.iter().copied())
    ));
    text.push_str(&format!("eigenvectors {n}\n"));
    for row in model.eigenvectors.rows() {
        text.push_str(&join(row.iter().copied()));
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_model(path: &Path) -> Result<PcaModel> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::io(path, e))?;
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line: line as u64 + 1,
        message,
    };
    let floats = |line: usize, s: &str| -> Result<Vec<f64>> {
        s.split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(line, format!("bad number `{t}`")))
            })
            .collect()
    };
    if lines.first().map(String::as_str) != Some(MODEL_MAGIC) {
        return Err(err(0, "not a model file".into()));
    }
    let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut eig_start = None;
    for (i, line) in lines.iter().enumerate().skip(1) {
        let (key, rest) = line.split_once(' ').unwrap_or((line.as_str(), ""));
        fields.insert(key, (i, rest.trim()));
        if key == "eigenvectors" {
            eig_start = Some(i + 1);
            break;
        }
    }
    let get = |key: &str| {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| err(0, format!("missing `{key}`")))
    };

    let (li, kind) = get("kind")?;
    let kind: SignalKind = kind.parse().map_err(|e: Error| err(li, e.to_string()))?;
    let unit_ids: Vec<String> = get("units")?.1.split_whitespace().map(String::from).collect();
    let n = unit_ids.len();
    let (li, kappa) = get("kappa")?;
    let kappa: f64 = kappa.parse().map_err(|_| err(li, "bad kappa".into()))?;
    let (li, comps) = get("components")?;
    let components: usize = comps.parse().map_err(|_| err(li, "bad component count".into()))?;
    let vec_field = |key: &str| -> Result<Array1<f64>> {
        let (li, s) = get(key)?;
        let v = floats(li, s)?;
        if v.len() != n {
            return Err(err(li, format!("`{key}` has {} values for {n} units", v.len())));
        }
        Ok(Array1::from(v))
    };
    let mean = vec_field("mean")?;
    let std = vec_field("std")?;
    let eigenvalues = vec_field("eigenvalues")?;
    let start = eig_start.ok_or_else(|| err(0, "missing `eigenvectors`".into()))?;
    let mut eigenvectors = Array2::<f64>::zeros((n, n));
    for r in 0..n {
        let li = start + r;
        let line = lines
            .get(li)
            .ok_or_else(|| err(li, "truncated eigenvector rows".into()))?;
        let row = floats(li, line)?;
        if row.len() != n {
            return Err(err(li, format!("eigenvector row has {} values", row.len())));
        }
        for (c, v) in row.into_iter().enumerate() {
            eigenvectors[[r, c]] = v;
        }
    }
    if components == 0 || components >= n {
        return Err(Error::NoResidualSpace { n });
    }
    Ok(PcaModel {
        kind,
        unit_ids,
        mean,
        std,
        eigenvalues,
        eigenvectors,
        components,
        kappa,
    })
}

// ---------------------------------------------------------------------------
// Monitoring and identification outputs
// ---------------------------------------------------------------------------

pub fn write_qseries(path: &Path, q: &QSeries) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(QSERIES_HEADER)?;
    let threshold = num(q.threshold);
    for (i, (v, e)) in q.values.iter().zip(q.exceeded()).enumerate() {
        w.write_record([i.to_string(), num(*v), threshold.clone(), u8::from(e).to_string()])?;
    }
    finish(w)
}

pub fn write_identification(path: &Path, report: &IdentificationReport) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(IDENTIFICATION_HEADER)?;
    for k in &report.kinds {
        for v in &k.verdicts {
            w.write_record([
                k.kind.to_string(),
                v.unit.clone(),
                v.verdict.to_string(),
                num(v.exceedance_fraction),
                u8::from(v.in_reference_pair).to_string(),
            ])?;
        }
    }
    finish(w)
}

#[derive(Debug, Deserialize)]
struct IdentificationRecord {
    kind: String,
    unit: String,
    verdict: String,
}

/// Units marked abnormal under any kind, and per-kind abnormal sets.
pub fn read_abnormal(path: &Path) -> Result<BTreeMap<SignalKind, BTreeSet<String>>> {
    let mut reader = csv_reader(path)?;
    require_headers(path, &mut reader, &IDENTIFICATION_HEADER)?;
    let mut out: BTreeMap<SignalKind, BTreeSet<String>> = BTreeMap::new();
    for result in reader.deserialize::<IdentificationRecord>() {
        let r = result.map_err(|e| parse_error(path, e))?;
        let kind: SignalKind = r.kind.parse()?;
        let set = out.entry(kind).or_default();
        match r.verdict.as_str() {
            "abnormal" => {
                set.insert(r.unit);
            }
            "normal" => {}
            other => return Err(Error::invalid(format!("unknown verdict `{other}`"))),
        }
    }
    Ok(out)
}

pub fn write_pair_scores(path: &Path, report: &IdentificationReport) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["kind", "rank", "pair", "q_sum", "threshold"])?;
    for k in &report.kinds {
        for (rank, s) in k.pair_scores.iter().enumerate() {
            w.write_record([
                k.kind.to_string(),
                (rank + 1).to_string(),
                s.label(),
                num(s.q_sum),
                num(s.threshold),
            ])?;
        }
    }
    finish(w)
}

/// Q traces of the three-unit models, one row per (kind, unit, test row).
pub fn write_triple_q(path: &Path, report: &IdentificationReport, times: &[f64]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["kind", "unit", "subset", "t_s", "q", "threshold", "exceeded"])?;
    for k in &report.kinds {
        let pair = [&k.reference_pair.0, &k.reference_pair.1];
        for s in &k.triple_scores {
            let unit = s
                .subset
                .iter()
                .find(|u| !pair.contains(u))
                .cloned()
                .unwrap_or_default();
            let label = s.label();
            for (i, (q, e)) in s.q_series.values.iter().zip(s.q_series.exceeded()).enumerate() {
                w.write_record([
                    k.kind.to_string(),
                    unit.clone(),
                    label.clone(),
                    num(times.get(i).copied().unwrap_or(i as f64)),
                    num(*q),
                    num(s.threshold),
                    u8::from(e).to_string(),
                ])?;
            }
        }
    }
    finish(w)
}

pub fn identification_summary(report: &IdentificationReport) -> String {
    let mut s = String::new();
    for k in &report.kinds {
        s.push_str(&format!(
            "[{}] reference pair: {} + {}\n",
            k.kind, k.reference_pair.0, k.reference_pair.1
        ));
        for v in &k.verdicts {
            let tag = if v.in_reference_pair { " (reference)" } else { "" };
            s.push_str(&format!(
                "  {:<6} {:<8} exceedance {:6.2} %{}\n",
                v.unit,
                v.verdict.to_string(),
                100.0 * v.exceedance_fraction,
                tag
            ));
        }
        let abnormal: Vec<String> = k.abnormal().into_iter().collect();
        s.push_str(&format!("  abnormal: {{{}}}\n", abnormal.join(", ")));
    }
    let excluded: Vec<String> = report.excluded().into_iter().collect();
    s.push_str(&format!(
        "excluded from current estimate: {{{}}}\n",
        excluded.join(", ")
    ));
    let _ = Verdict::Normal;
    s
}

// ---------------------------------------------------------------------------
// Current comparison
// ---------------------------------------------------------------------------

pub fn write_current(path: &Path, est: &HealedEstimate) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(CURRENT_HEADER)?;
    for i in 0..est.times.len() {
        let (c, h, r) = (est.conventional[i], est.healed[i], est.reference[i]);
        let (cea, cep) = est.conventional_errors[i];
        let (hea, hep) = est.healed_errors[i];
        w.write_record(
            [
                est.times[i],
                c.amplitude(),
                c.phase(),
                h.amplitude(),
                h.phase(),
                r.amplitude(),
                r.phase(),
                cea,
                cep,
                hea,
                hep,
            ]
            .map(num),
        )?;
    }
    finish(w)
}

#[derive(Debug, Deserialize)]
struct CurrentRecord {
    t_s: f64,
    conv_amp: f64,
    conv_phase_rad: f64,
    healed_amp: f64,
    healed_phase_rad: f64,
    ref_amp: f64,
    ref_phase_rad: f64,
    conv_eps_a: f64,
    conv_eps_p_rad: f64,
    healed_eps_a: f64,
    healed_eps_p_rad: f64,
}

/// Read a current comparison back; `excluded` is not stored in the file.
pub fn read_current(path: &Path) -> Result<HealedEstimate> {
    let mut reader = csv_reader(path)?;
    require_headers(path, &mut reader, &CURRENT_HEADER)?;
    let mut est = HealedEstimate {
        times: vec![],
        excluded: BTreeSet::new(),
        reference: vec![],
        conventional: vec![],
        healed: vec![],
        conventional_errors: vec![],
        healed_errors: vec![],
    };
    for result in reader.deserialize::<CurrentRecord>() {
        let r = result.map_err(|e| parse_error(path, e))?;
        est.times.push(r.t_s);
        est.conventional.push(Phasor::new(r.conv_amp, r.conv_phase_rad));
        est.healed.push(Phasor::new(r.healed_amp, r.healed_phase_rad));
        est.reference.push(Phasor::new(r.ref_amp, r.ref_phase_rad));
        est.conventional_errors.push((r.conv_eps_a, r.conv_eps_p_rad));
        est.healed_errors.push((r.healed_eps_a, r.healed_eps_p_rad));
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pca::{FitOptions, VarianceRule};

    fn block(source: Source, t0: f64) -> PhasorBlock {
        let ids: Vec<String> = ["S1", "S2", "S3"].iter().map(|s| s.to_string()).collect();
        PhasorBlock {
            source,
            unit_ids: ids,
            times: vec![t0, t0 + 0.1, t0 + 0.2],
            units: (0..3)
                .map(|k| {
                    (0..3)
                        .map(|i| {
                            Phasor::new(0.1 + 0.01 * (k * 3 + i) as f64, 0.3 - 0.1 * i as f64 + k as f64)
                        })
                        .collect()
                })
                .collect(),
            reference: (0..3).map(|i| Phasor::new(5.0 + i as f64, 0.3)).collect(),
        }
    }

    #[test]
    fn phasor_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let blocks = vec![block(Source::Train, 0.0), block(Source::Test, 20.0)];
        write_phasors(&path, &blocks).unwrap();
        let back = read_phasors(&path).unwrap();
        assert_eq!(back, blocks);
    }

    #[test]
    fn shuffled_columns_map_by_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let mut f = File::create(&path).unwrap();
        writeln!(f, "kind_source,phase_rad,unit_id,t_s,amplitude").unwrap();
        for (t, base) in [(0.0, 1.0), (0.1, 2.0)] {
            writeln!(f, "train,0.1,S1,{t},{base}").unwrap();
            writeln!(f, "train,0.2,S2,{t},{}", base * 2.0).unwrap();
            writeln!(f, "train,0.3,REF,{t},{}", base * 10.0).unwrap();
        }
        drop(f);
        let (amp, phase) = ingest_phasors(&path, Source::Train).unwrap();
        assert_eq!(amp.unit_ids(), ["S1", "S2"]);
        assert_eq!(amp.values()[[1, 1]], 4.0);
        assert_eq!(phase.values()[[0, 1]], 0.2);
    }

    #[test]
    fn non_finite_cell_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        std::fs::write(
            &path,
            "t_s,unit_id,amplitude,phase_rad,kind_source\n0,S1,1.0,0.1,train\n0,S2,NaN,0.1,train\n",
        )
        .unwrap();
        let err = read_phasors(&path).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let msg = err.to_string();
        assert!(msg.contains("amplitude") && msg.contains("S2"), "{msg}");

        std::fs::write(
            &path,
            "t_s,unit_id,amplitude,phase_rad,kind_source\n0,S1,1.0,0.1,train\n0,S2,abc,0.1,train\n",
        )
        .unwrap();
        match read_phasors(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_reference_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        std::fs::write(
            &path,
            "t_s,unit_id,amplitude,phase_rad,kind_source\n0,S1,1.0,0.1,test\n",
        )
        .unwrap();
        assert!(read_phasors(&path).is_err());
    }

    #[test]
    fn model_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|j| {
                (0..25)
                    .map(|i| (i as f64 * 0.3).sin() * (j + 1) as f64 + 0.01 * ((i * j) as f64).cos())
                    .collect()
            })
            .collect();
        let d = DataMatrix::from_columns(
            SignalKind::Phase,
            vec!["S1".into(), "S2".into(), "S3".into()],
            &cols,
        )
        .unwrap();
        let m = PcaModel::fit(&d, &FitOptions::new(0.85, VarianceRule::Squared)).unwrap();
        write_model(&path, &m).unwrap();
        assert_eq!(read_model(&path).unwrap(), m);
        std::fs::write(&path, "garbage\n").unwrap();
        assert!(read_model(&path).is_err());
    }

    #[test]
    fn calibration_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let t = CalibrationTable {
            rows: vec![CalibrationRow {
                unit: "S1".into(),
                xi: 12.345678901234,
                phi: -0.0123,
                nonlinearity: 1e-6,
                phase_std: 2e-7,
                intercept: 0.0,
            }],
        };
        write_calibration(&path, &t).unwrap();
        assert_eq!(read_calibration(&path).unwrap(), t);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("unit,xi_a_per_v,phi_rad,nonlinearity,phase_std_rad\n"));
    }
}

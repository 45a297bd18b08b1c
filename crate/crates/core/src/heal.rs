//! Current estimation from calibrated unit phasors, with and without the
//! units flagged as abnormal.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::calibration::{unit_errors, CalibrationTable};
use crate::error::{Error, Result};
use crate::phasor::Phasor;
use crate::series::PhasorBlock;

/// Complex mean of `ξ_k·U_k·e^{iφ_k}` over the included units.
pub fn estimate_current(
    unit_ids: &[String],
    phasors: &[Phasor],
    table: &CalibrationTable,
    included: &BTreeSet<String>,
) -> Result<Phasor> {
    if included.is_empty() {
        return Err(Error::EmptyInclusion);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut used = 0usize;
    for (id, p) in unit_ids.iter().zip(phasors) {
        if !included.contains(id) {
            continue;
        }
        let row = table
            .get(id)
            .ok_or_else(|| Error::invalid(format!("unit {id} is not calibrated")))?;
        sum += p.to_complex() * Complex64::from_polar(row.xi, row.phi);
        used += 1;
    }
    if used != included.len() {
        return Err(Error::invalid("included units missing from the phasor row"));
    }
    Ok(Phasor::from_complex(sum / used as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HealedEstimate {
    pub times: Vec<f64>,
    pub excluded: BTreeSet<String>,
    pub reference: Vec<Phasor>,
    pub conventional: Vec<Phasor>,
    pub healed: Vec<Phasor>,
    /// `(ε_A, ε_P)` per window.
    pub conventional_errors: Vec<(f64, f64)>,
    pub healed_errors: Vec<(f64, f64)>,
}

impl HealedEstimate {
    pub fn worst(errors: &[(f64, f64)]) -> (f64, f64) {
        errors.iter().fold((0.0_f64, 0.0_f64), |(a, p), &(ea, ep)| {
            (
                if ea.abs() > a.abs() { ea } else { a },
                if ep.abs() > p.abs() { ep } else { p },
            )
        })
    }
}

/// Errors of both estimates against the reference channel.
pub fn compare(
    times: Vec<f64>,
    excluded: BTreeSet<String>,
    conventional: Vec<Phasor>,
    healed: Vec<Phasor>,
    reference: Vec<Phasor>,
) -> Result<HealedEstimate> {
    if conventional.len() != reference.len()
        || healed.len() != reference.len()
        || times.len() != reference.len()
    {
        return Err(Error::invalid("estimate and reference series differ in length"));
    }
    let errs = |est: &[Phasor]| -> Result<Vec<(f64, f64)>> {
        est.iter()
            .zip(&reference)
            .map(|(e, r)| unit_errors(*e, *r))
            .collect()
    };
    Ok(HealedEstimate {
        conventional_errors: errs(&conventional)?,
        healed_errors: errs(&healed)?,
        times,
        excluded,
        reference,
        conventional,
        healed,
    })
}

/// Conventional (all units) and healed (flagged units dropped) estimates
/// over a block of windows.
pub fn heal(
    block: &PhasorBlock,
    table: &CalibrationTable,
    excluded: &BTreeSet<String>,
) -> Result<HealedEstimate> {
    let all: BTreeSet<String> = block.unit_ids.iter().cloned().collect();
    if let Some(u) = excluded.iter().find(|u| !all.contains(*u)) {
        return Err(Error::invalid(format!("excluded unit {u} is not in the array")));
    }
    let kept: BTreeSet<String> = all.difference(excluded).cloned().collect();
    if kept.is_empty() {
        return Err(Error::EmptyInclusion);
    }
    let mut conventional = Vec::with_capacity(block.len());
    let mut healed = Vec::with_capacity(block.len());
    for i in 0..block.len() {
        let row = block.row(i);
        conventional.push(estimate_current(&block.unit_ids, &row, table, &all)?);
        healed.push(estimate_current(&block.unit_ids, &row, table, &kept)?);
    }
    compare(
        block.times.clone(),
        excluded.clone(),
        conventional,
        healed,
        block.reference.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::CalibrationRow;

    fn table(n: usize) -> CalibrationTable {
        CalibrationTable {
            rows: (0..n)
                .map(|k| CalibrationRow {
                    unit: format!("S{}", k + 1),
                    xi: 10.0 + k as f64,
                    phi: 0.01 * k as f64,
                    nonlinearity: 0.0,
                    phase_std: 0.0,
                    intercept: 0.0,
                })
                .collect(),
        }
    }

    /// Unit readings for current `i` with per-unit complex error factors.
    fn readings(t: &CalibrationTable, i: Phasor, err: &[(f64, f64)]) -> Vec<Phasor> {
        t.rows
            .iter()
            .zip(err)
            .map(|(r, &(ea, ep))| Phasor::new(i.amplitude() / r.xi * (1.0 + ea), i.phase() - r.phi + ep))
            .collect()
    }

    fn set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn noiseless_estimates_are_exact() {
        let t = table(8);
        let ids = t.unit_ids();
        let i = Phasor::new(7.5, 0.4);
        let u = readings(&t, i, &[(0.0, 0.0); 8]);
        let one = estimate_current(&ids, &u, &t, &set(&["S3"])).unwrap();
        assert!((one.amplitude() - 7.5).abs() < 1e-12);
        assert!((one.phase() - 0.4).abs() < 1e-12);
        let all = estimate_current(&ids, &u, &t, &ids.iter().cloned().collect()).unwrap();
        assert!((all.amplitude() - 7.5).abs() < 1e-12);
        assert!(matches!(
            estimate_current(&ids, &u, &t, &BTreeSet::new()),
            Err(Error::EmptyInclusion)
        ));
    }

    #[test]
    fn estimate_is_linear() {
        let t = table(4);
        let ids = t.unit_ids();
        let inc: BTreeSet<String> = ids.iter().cloned().collect();
        let a = readings(
            &t,
            Phasor::new(3.0, 0.2),
            &[(0.01, 0.0), (0.0, 0.02), (0.0, 0.0), (-0.01, 0.0)],
        );
        let b = readings(&t, Phasor::new(1.0, -1.0), &[(0.0, 0.0); 4]);
        let mix: Vec<Phasor> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| Phasor::from_complex(x.to_complex() * 2.0 + y.to_complex() * 0.5))
            .collect();
        let ea = estimate_current(&ids, &a, &t, &inc).unwrap().to_complex();
        let eb = estimate_current(&ids, &b, &t, &inc).unwrap().to_complex();
        let em = estimate_current(&ids, &mix, &t, &inc).unwrap().to_complex();
        assert!((em - (ea * 2.0 + eb * 0.5)).norm() < 1e-12);
    }

    #[test]
    fn opposing_drifts_partially_cancel() {
        let t = table(8);
        let ids = t.unit_ids();
        let i = Phasor::new(10.0, 0.0);
        let mut err = [(0.0, 0.0); 8];
        err[0].0 = -0.03;
        err[1].0 = -0.03;
        let both_low = readings(&t, i, &err);
        err[2].0 = 0.084;
        let with_s3 = readings(&t, i, &err);
        let all: BTreeSet<String> = ids.iter().cloned().collect();
        let low = estimate_current(&ids, &both_low, &t, &all).unwrap();
        let mixed = estimate_current(&ids, &with_s3, &t, &all).unwrap();
        // per-unit contributions: -0.03 - 0.03 (+ 0.084) over 8 units
        assert!((low.amplitude() / 10.0 - 1.0 + 0.0075).abs() < 1e-12);
        assert!((mixed.amplitude() / 10.0 - 1.0 - 0.003).abs() < 1e-12);
        let healed = estimate_current(&ids, &with_s3, &t, &set(&["S4", "S5", "S6", "S7", "S8"])).unwrap();
        assert!((healed.amplitude() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn healed_error_bounded_by_worst_included_unit() {
        let t = table(5);
        let ids = t.unit_ids();
        let i = Phasor::new(4.0, 1.0);
        let err = [
            (0.002, 0.001),
            (-0.001, 0.0),
            (0.0005, -0.002),
            (0.0, 0.0),
            (0.3, 0.2),
        ];
        let u = readings(&t, i, &err);
        let inc = set(&["S1", "S2", "S3", "S4"]);
        let est = estimate_current(&ids, &u, &t, &inc).unwrap();
        let dev = (est.to_complex() - i.to_complex()).norm() / i.amplitude();
        let worst = err[..4]
            .iter()
            .map(|&(a, p)| (Complex64::from_polar(1.0 + a, p) - 1.0).norm())
            .fold(0.0, f64::max);
        assert!(dev <= worst + 1e-15);
    }

    #[test]
    fn excluding_a_clean_unit_changes_nothing() {
        let t = table(6);
        let ids = t.unit_ids();
        let i = Phasor::new(2.0, -0.5);
        let u = readings(&t, i, &[(0.0, 0.0); 6]);
        let all: BTreeSet<String> = ids.iter().cloned().collect();
        let mut less = all.clone();
        less.remove("S4");
        let a = estimate_current(&ids, &u, &t, &all).unwrap();
        let b = estimate_current(&ids, &u, &t, &less).unwrap();
        assert!((a.to_complex() - b.to_complex()).norm() < 1e-14);
    }

    #[test]
    fn compare_without_exclusion_matches() {
        let t = table(3);
        let i = Phasor::new(5.0, 0.0);
        let row = readings(&t, i, &[(0.01, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let block = PhasorBlock {
            source: crate::series::Source::Test,
            unit_ids: t.unit_ids(),
            times: vec![0.0],
            units: row.iter().map(|p| vec![*p]).collect(),
            reference: vec![i],
        };
        let h = heal(&block, &t, &BTreeSet::new()).unwrap();
        assert_eq!(h.conventional, h.healed);
        assert_eq!(h.conventional_errors, h.healed_errors);
        assert!(heal(&block, &t, &set(&["S1", "S2", "S3"])).is_err());
        assert!(heal(&block, &t, &set(&["S9"])).is_err());
    }
}

//! Per-unit scale factor and phase offset from a stepped current sweep.

use crate::error::{Error, Result};
use crate::phasor::{circular_mean, circular_std, wrap_angle, Phasor};

/// Default ceiling on the relative fit residual before a unit is rejected.
pub const DEFAULT_MAX_NONLINEARITY: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRow {
    pub unit: String,
    /// Amperes per volt.
    pub xi: f64,
    /// Reference phase minus unit phase, radians.
    pub phi: f64,
    /// Largest |fit residual| over full-scale current.
    pub nonlinearity: f64,
    /// Circular standard deviation of the per-point phase offsets.
    pub phase_std: f64,
    /// Fitted intercept in amperes; reported, never applied.
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationTable {
    pub rows: Vec<CalibrationRow>,
}

impl CalibrationTable {
    pub fn get(&self, unit: &str) -> Option<&CalibrationRow> {
        self.rows.iter().find(|r| r.unit == unit)
    }

    pub fn unit_ids(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.unit.clone()).collect()
    }
}

/// Ordinary least squares `y = slope·x + intercept`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len() as f64;
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Fit one unit against the reference current over a sweep.
///
/// The scale factor is the slope of reference amplitude against unit
/// voltage amplitude; the phase offset is the circular mean of
/// `reference phase − unit phase`.
pub fn calibrate(
    unit: &str,
    unit_phasors: &[Phasor],
    reference: &[Phasor],
    max_nonlinearity: f64,
) -> Result<CalibrationRow> {
    let fail = |reason: String| Error::CalibrationFailed {
        unit: unit.to_string(),
        reason,
    };
    if unit_phasors.len() != reference.len() {
        return Err(fail(format!(
            "{} unit points but {} reference points",
            unit_phasors.len(),
            reference.len()
        )));
    }
    let x: Vec<f64> = unit_phasors.iter().map(|p| p.amplitude()).collect();
    let y: Vec<f64> = reference.iter().map(|p| p.amplitude()).collect();

    let mut levels = y.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    if levels.len() < 2 {
        return Err(fail("sweep needs at least 2 distinct current levels".into()));
    }
    let (slope, intercept) = fit_line(&x, &y).ok_or_else(|| fail("unit amplitude does not vary".into()))?;
    if !(slope > 0.0) {
        return Err(fail(format!("non-positive scale factor {slope}")));
    }
    let full_scale = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let nonlinearity = x
        .iter()
        .zip(&y)
        .map(|(a, b)| (b - (slope * a + intercept)).abs())
        .fold(0.0, f64::max)
        / full_scale;
    if !(nonlinearity <= max_nonlinearity) {
        return Err(fail(format!(
            "nonlinearity {nonlinearity:.3e} exceeds {max_nonlinearity:.3e}"
        )));
    }
    let offsets: Vec<f64> = unit_phasors
        .iter()
        .zip(reference)
        .map(|(u, r)| wrap_angle(r.phase() - u.phase()))
        .collect();
    Ok(CalibrationRow {
        unit: unit.to_string(),
        xi: slope,
        phi: circular_mean(&offsets),
        nonlinearity,
        phase_std: circular_std(&offsets),
        intercept,
    })
}

/// Voltage phasor a healthy unit should read for the reference current.
pub fn reference_phasor(row: &CalibrationRow, current: Phasor) -> Phasor {
    Phasor::new(current.amplitude() / row.xi, current.phase() - row.phi)
}

/// Relative amplitude error and wrapped phase error of `measured`.
pub fn unit_errors(measured: Phasor, reference: Phasor) -> Result<(f64, f64)> {
    if reference.amplitude() == 0.0 {
        return Err(Error::UndefinedError);
    }
    Ok((
        measured.amplitude() / reference.amplitude() - 1.0,
        wrap_angle(measured.phase() - reference.phase()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sweep(xi: f64, phi: f64, levels: &[f64]) -> (Vec<Phasor>, Vec<Phasor>) {
        let reference: Vec<Phasor> = levels.iter().map(|&i| Phasor::new(i, 0.3)).collect();
        let unit = levels.iter().map(|&i| Phasor::new(i / xi, 0.3 - phi)).collect();
        (unit, reference)
    }

    #[test]
    fn noiseless_sweep_is_exact() {
        let (u, r) = sweep(42.0, 0.027, &[2.0, 4.0, 6.0, 8.0, 10.5]);
        let row = calibrate("S1", &u, &r, 1e-3).unwrap();
        assert!((row.xi - 42.0).abs() < 1e-10);
        assert!((row.phi - 0.027).abs() < 1e-14);
        assert!(row.nonlinearity < 1e-14);
        assert!(row.phase_std < 1e-7);
        assert!(row.intercept.abs() < 1e-12);
    }

    #[test]
    fn two_point_slope_matches_closed_form() {
        let u = [Phasor::new(0.11, 0.0), Phasor::new(0.37, 0.0)];
        let r = [Phasor::new(2.0, 0.0), Phasor::new(9.0, 0.0)];
        let row = calibrate("S2", &u, &r, 1.0).unwrap();
        let closed = (9.0 - 2.0) / (0.37 - 0.11);
        assert!((row.xi - closed).abs() < 1e-12);
        assert!((row.intercept - (2.0 - closed * 0.11)).abs() < 1e-12);
    }

    #[test]
    fn rejects_single_level_and_nonlinear_units() {
        let (u, r) = sweep(10.0, 0.0, &[5.0, 5.0, 5.0]);
        assert!(matches!(
            calibrate("S3", &u, &r, 1e-3),
            Err(Error::CalibrationFailed { .. })
        ));
        let r: Vec<Phasor> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&i| Phasor::new(i, 0.0))
            .collect();
        let u: Vec<Phasor> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&i: &f64| Phasor::new(i.powi(2) * 0.1, 0.0))
            .collect();
        assert!(calibrate("S4", &u, &r, 1e-3).is_err());
    }

    #[test]
    fn reference_phasor_arithmetic() {
        let row = CalibrationRow {
            unit: "S1".into(),
            xi: 2.0,
            phi: 0.1,
            nonlinearity: 0.0,
            phase_std: 0.0,
            intercept: 0.0,
        };
        let p = reference_phasor(&row, Phasor::new(10.0, 0.5));
        assert_eq!(p.amplitude(), 5.0);
        assert!((p.phase() - 0.4).abs() < 1e-15);
        assert_eq!(reference_phasor(&row, Phasor::ZERO).amplitude(), 0.0);
        // invert through I = ξ·U·e^{iφ}
        let back = Phasor::new(p.amplitude() * row.xi, p.phase() + row.phi);
        assert!((back.amplitude() - 10.0).abs() < 1e-15);
        assert!((back.phase() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn error_metrics() {
        let r = Phasor::new(2.0, 0.3);
        assert_eq!(unit_errors(r, r).unwrap(), (0.0, 0.0));
        let (ea, ep) = unit_errors(Phasor::new(2.002, 0.3), r).unwrap();
        assert!((ea - 0.001).abs() < 1e-12);
        assert_eq!(ep, 0.0);
        let (_, ep) = unit_errors(Phasor::new(1.0, 3.1), Phasor::new(1.0, -3.1)).unwrap();
        assert!((ep - (6.2 - std::f64::consts::TAU)).abs() < 1e-12);
        assert!(matches!(unit_errors(r, Phasor::ZERO), Err(Error::UndefinedError)));
    }

    proptest! {
        #[test]
        fn voltage_scaling_and_reordering(
            scale in 0.01f64..100.0,
            noise in prop::collection::vec(-1e-4f64..1e-4, 6),
            rot in 0usize..6,
        ) {
            let levels = [1.0, 2.5, 4.0, 6.0, 8.0, 10.0];
            let r: Vec<Phasor> = levels.iter().map(|&i| Phasor::new(i, 0.2)).collect();
            let u: Vec<Phasor> = levels
                .iter()
                .zip(&noise)
                .map(|(&i, e)| Phasor::new(i / 30.0 * (1.0 + e), 0.2 - 0.05 + e))
                .collect();
            let base = calibrate("S1", &u, &r, 1.0).unwrap();
            let us: Vec<Phasor> = u.iter().map(|p| p.scale(scale)).collect();
            let scaled = calibrate("S1", &us, &r, 1.0).unwrap();
            prop_assert!((scaled.xi * scale / base.xi - 1.0).abs() < 1e-9);
            prop_assert!((scaled.phi - base.phi).abs() < 1e-12);
            prop_assert!((scaled.nonlinearity - base.nonlinearity).abs() < 1e-12);

            let mut ur = u.clone();
            let mut rr = r.clone();
            ur.rotate_left(rot);
            rr.rotate_left(rot);
            let shuffled = calibrate("S1", &ur, &rr, 1.0).unwrap();
            prop_assert!((shuffled.xi - base.xi).abs() < 1e-9 * base.xi);
            prop_assert!((shuffled.phi - base.phi).abs() < 1e-12);
            prop_assert!((shuffled.phase_std - base.phase_std).abs() < 1e-9);
        }
    }
}

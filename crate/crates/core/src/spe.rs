//! Squared prediction error (Q statistic) and its control limit.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::pca::{DataMatrix, PcaModel};

/// Which `h0` denominator the control limit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H0Form {
    /// `h0 = 1 − 2θ1θ3 / (3θ2²)`, the Jackson–Mudholkar form.
    #[default]
    Corrected,
    /// `h0 = 1 − 2θ1θ3 / (3θ3²)`.
    AsPrinted,
}

impl FromStr for H0Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(H0Form::Corrected),
            "as_printed" => Ok(H0Form::AsPrinted),
            other => Err(Error::invalid(format!("unknown h0 form `{other}`"))),
        }
    }
}

impl fmt::Display for H0Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            H0Form::Corrected => "corrected",
            H0Form::AsPrinted => "as_printed",
        })
    }
}

/// Q per test row with the model's control limit.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    pub model_id: String,
    pub values: Vec<f64>,
    pub threshold: f64,
    pub alpha: f64,
}

impl QSeries {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn exceeded(&self) -> impl Iterator<Item = bool> + '_ {
        self.values.iter().map(move |&q| q > self.threshold)
    }

    /// Share of rows above the threshold.
    pub fn exceedance_fraction(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.exceeded().filter(|&e| e).count() as f64 / self.values.len() as f64
    }

    /// Index of the first row above the threshold.
    pub fn first_exceedance(&self) -> Option<usize> {
        self.exceeded().position(|e| e)
    }
}

/// Row-wise squared norm of a residual matrix.
pub fn q_statistic(residual: &Array2<f64>) -> Vec<f64> {
    residual
        .rows()
        .into_iter()
        .map(|r| r.iter().map(|e| e * e).sum())
        .collect()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// One-sided standard normal quantile: `Φ(C) = p`.
///
/// Acklam's rational approximation, polished with two Halley steps against
/// the erfc-based CDF.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("quantile level {p} outside (0, 1)")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383_577_518_672_69e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let mut x = if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    };
    if p == 0.5 {
        return Ok(0.0);
    }
    for _ in 0..2 {
        let e = normal_cdf(x) - p;
        let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
        x -= u / (1.0 + x * u / 2.0);
    }
    Ok(x)
}

/// Power sums `θ_i = Σ σ_j^i`, `i = 1, 2, 3`, over residual eigenvalues.
pub fn thetas(residual_eigenvalues: &[f64]) -> [f64; 3] {
    let mut t = [0.0; 3];
    for &s in residual_eigenvalues {
        t[0] += s;
        t[1] += s * s;
        t[2] += s * s * s;
    }
    t
}

/// Control limit for Q from the residual eigenvalue spectrum.
///
/// Falls back to the scaled chi-square `g·χ²_h(α)` with `g = θ2/θ1` and
/// `h = θ1²/θ2` when `h0 ≤ 0`.
pub fn q_alpha_from_spectrum(residual_eigenvalues: &[f64], alpha: f64, form: H0Form) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha {alpha} outside (0.5, 1)")));
    }
    let [t1, t2, t3] = thetas(residual_eigenvalues);
    if !(t1 > 0.0) || !(t2 > 0.0) {
        return Err(Error::DegenerateThreshold);
    }
    let h0 = match form {
        H0Form::Corrected => 1.0 - 2.0 * t1 * t3 / (3.0 * t2 * t2),
        H0Form::AsPrinted => 1.0 - 2.0 * t1 * t3 / (3.0 * t3 * t3),
    };
    let c = normal_quantile(alpha)?;
    if h0 > 0.0 {
        let base = c * (2.0 * t2 * h0 * h0).sqrt() / t1 + 1.0 + t2 * h0 * (h0 - 1.0) / (t1 * t1);
        if base > 0.0 {
            let q = t1 * base.powf(1.0 / h0);
            if q.is_finite() {
                return Ok(q);
            }
        }
    }
    log::warn!("h0 = {h0:.4} gives no usable limit; using the chi-square approximation");
    chi_square_limit(t1, t2, alpha)
}

/// `g·χ²_h(α)` with moments matched to the residual spectrum.
pub fn chi_square_limit(theta1: f64, theta2: f64, alpha: f64) -> Result<f64> {
    let g = theta2 / theta1;
    let h = theta1 * theta1 / theta2;
    let chi = ChiSquared::new(h).map_err(|e| Error::invalid(e.to_string()))?;
    Ok(g * chi.inverse_cdf(alpha))
}

pub fn q_alpha(model: &PcaModel, alpha: f64, form: H0Form) -> Result<f64> {
    q_alpha_from_spectrum(model.residual_eigenvalues(), alpha, form)
}

/// Normalize, decompose and score new data against a trained model.
pub fn monitor(model: &PcaModel, data: &DataMatrix, alpha: f64, form: H0Form) -> Result<QSeries> {
    let mut data = data.clone();
    data.align_phase_branches(&model.mean);
    let z = model.normalize(&data)?;
    let dec = model.decompose(&z)?;
    Ok(QSeries {
        model_id: model_id(model),
        values: q_statistic(&dec.residual),
        threshold: q_alpha(model, alpha, form)?,
        alpha,
    })
}

pub fn model_id(model: &PcaModel) -> String {
    format!("{}:{}", model.kind, model.unit_ids.join("+"))
}

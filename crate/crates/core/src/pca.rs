//! PCA models over unit columns: training, normalization of new data and
//! the split into main and residual parts.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignalKind {
    Amplitude,
    Phase,
}

impl SignalKind {
    pub const ALL: [SignalKind; 2] = [SignalKind::Amplitude, SignalKind::Phase];

    pub fn as_str(self) -> &'static str {
        match self {
            SignalKind::Amplitude => "amplitude",
            SignalKind::Phase => "phase",
        }
    }
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SignalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(SignalKind::Amplitude),
            "phase" => Ok(SignalKind::Phase),
            other => Err(Error::invalid(format!("unknown signal kind `{other}`"))),
        }
    }
}

/// Rows are time points, columns are units.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Array2<f64>,
    kind: SignalKind,
    unit_ids: Vec<String>,
}

impl DataMatrix {
    pub fn new(kind: SignalKind, unit_ids: Vec<String>, values: Array2<f64>) -> Result<Self> {
        if values.ncols() != unit_ids.len() {
            return Err(Error::invalid(format!(
                "{} columns but {} unit ids",
                values.ncols(),
                unit_ids.len()
            )));
        }
        if values.nrows() < 2 || values.ncols() < 2 {
            return Err(Error::invalid(format!(
                "data matrix must be at least 2x2, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if let Some(((i, j), _)) = values.indexed_iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value at row {i}, unit {}",
                unit_ids[j]
            )));
        }
        Ok(DataMatrix {
            values,
            kind,
            unit_ids,
        })
    }

    pub fn from_columns(kind: SignalKind, unit_ids: Vec<String>, columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::invalid("columns differ in length"));
        }
        let values = Array2::from_shape_fn((rows, columns.len()), |(i, j)| columns[j][i]);
        DataMatrix::new(kind, unit_ids, values)
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn unit_ids(&self) -> &[String] {
        &self.unit_ids
    }

    pub fn rows(&self) -> usize {
        self.values.nrows()
    }

    /// Columns for the named units, in the order given.
    pub fn select(&self, units: &[&str]) -> Result<DataMatrix> {
        let idx: Vec<usize> = units
            .iter()
            .map(|u| {
                self.unit_ids
                    .iter()
                    .position(|x| x == u)
                    .ok_or_else(|| Error::ModelMismatch(format!("no unit `{u}` in data")))
            })
            .collect::<Result<_>>()?;
        let values = self.values.select(Axis(1), &idx);
        DataMatrix::new(self.kind, units.iter().map(|s| s.to_string()).collect(), values)
    }

    /// Shift each phase column by whole turns so its mean sits nearest the
    /// matching training mean. No-op for amplitude data.
    pub fn align_phase_branches(&mut self, anchors: &Array1<f64>) {
        if self.kind != SignalKind::Phase {
            return;
        }
        for (mut col, &anchor) in self.values.columns_mut().into_iter().zip(anchors.iter()) {
            let mut v = col.to_vec();
            crate::phasor::align_branch(&mut v, anchor);
            col.assign(&Array1::from(v));
        }
    }
}

/// How the variance-ratio criterion weighs eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceRule {
    /// `Σ_{i≤m} σ_i² / Σ σ_i²`, with squared eigenvalues.
    #[default]
    Squared,
    /// Cumulative explained variance `Σ_{i≤m} σ_i / Σ σ_i`.
    Cumulative,
}

impl FromStr for VarianceRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared" => Ok(VarianceRule::Squared),
            "cumulative" => Ok(VarianceRule::Cumulative),
            other => Err(Error::invalid(format!("unknown variance rule `{other}`"))),
        }
    }
}

impl fmt::Display for VarianceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarianceRule::Squared => "squared",
            VarianceRule::Cumulative => "cumulative",
        })
    }
}

/// Principal component count selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub kappa: f64,
    pub rule: VarianceRule,
    /// Upper bound applied after the ratio rule.
    pub max_components: Option<usize>,
    /// Bypass the ratio rule entirely.
    pub fixed_components: Option<usize>,
}

impl FitOptions {
    pub fn new(kappa: f64, rule: VarianceRule) -> Self {
        FitOptions {
            kappa,
            rule,
            max_components: None,
            fixed_components: None,
        }
    }
}

/// Smallest `m` whose leading eigenvalues pass the ratio `> kappa`.
pub fn component_count(eigenvalues: &[f64], kappa: f64, rule: VarianceRule) -> usize {
    let weight = |s: f64| match rule {
        VarianceRule::Squared => s * s,
        VarianceRule::Cumulative => s,
    };
    let total: f64 = eigenvalues.iter().map(|&s| weight(s)).sum();
    if total <= 0.0 {
        return eigenvalues.len();
    }
    let mut acc = 0.0;
    for (i, &s) in eigenvalues.iter().enumerate() {
        acc += weight(s);
        if acc / total > kappa {
            return i + 1;
        }
    }
    eigenvalues.len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub kind: SignalKind,
    pub unit_ids: Vec<String>,
    pub mean: Array1<f64>,
    pub std: Array1<f64>,
    /// Descending, floored at zero.
    pub eigenvalues: Array1<f64>,
    /// Columns are eigenvectors.
    pub eigenvectors: Array2<f64>,
    pub components: usize,
    pub kappa: f64,
}

impl PcaModel {
    /// Train on normal-operation data.
    pub fn fit(data: &DataMatrix, options: &FitOptions) -> Result<PcaModel> {
        if !(options.kappa > 0.0 && options.kappa < 1.0) {
            return Err(Error::invalid(format!(
                "kappa must lie in (0, 1), got {}",
                options.kappa
            )));
        }
        let x = data.values();
        let (l, n) = x.dim();
        let mean = x.mean_axis(Axis(0)).unwrap();
        let std = x.std_axis(Axis(0), 1.0);
        for (j, (&s, &m)) in std.iter().zip(mean.iter()).enumerate() {
            if !(s > 1e-13 * m.abs()) {
                return Err(Error::DegenerateColumn {
                    unit: data.unit_ids()[j].clone(),
                });
            }
        }
        let z = (x - &mean) / &std;
        let corr = z.t().dot(&z) / (l as f64 - 1.0);
        let corr = (&corr + &corr.t()) * 0.5;
        let eig = symmetric_eigen(&corr)?;
        let eigenvalues = eig.values.mapv(|s| s.max(0.0));

        let m = match options.fixed_components {
            Some(m) => m,
            None => {
                let m = component_count(eigenvalues.as_slice().unwrap(), options.kappa, options.rule);
                options.max_components.map_or(m, |cap| m.min(cap))
            }
        };
        if m == 0 {
            return Err(Error::invalid("at least one principal component is required"));
        }
        if m >= n {
            return Err(Error::NoResidualSpace { n });
        }
        Ok(PcaModel {
            kind: data.kind(),
            unit_ids: data.unit_ids().to_vec(),
            mean,
            std,
            eigenvalues,
            eigenvectors: eig.vectors,
            components: m,
            kappa: options.kappa,
        })
    }

    pub fn dim(&self) -> usize {
        self.unit_ids.len()
    }

    /// Principal subspace basis, `n × m`.
    pub fn principal(&self) -> Array2<f64> {
        self.eigenvectors
            .slice(ndarray::s![.., ..self.components])
            .to_owned()
    }

    /// Residual subspace basis, `n × (n − m)`.
    pub fn residual(&self) -> Array2<f64> {
        self.eigenvectors
            .slice(ndarray::s![.., self.components..])
            .to_owned()
    }

    pub fn residual_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues.as_slice().unwrap()[self.components..]
    }

    /// Scale new data with the training mean and standard deviation.
    pub fn normalize(&self, data: &DataMatrix) -> Result<Array2<f64>> {
        if data.kind() != self.kind {
            return Err(Error::ModelMismatch(format!(
                "{} data against a {} model",
                data.kind(),
                self.kind
            )));
        }
        if data.unit_ids() != self.unit_ids.as_slice() {
            return Err(Error::ModelMismatch(format!(
                "data units {:?} differ from model units {:?}",
                data.unit_ids(),
                self.unit_ids
            )));
        }
        Ok((data.values() - &self.mean) / &self.std)
    }

    /// Split normalized rows into main and residual parts.
    pub fn decompose(&self, normalized: &Array2<f64>) -> Result<Decomposition> {
        if normalized.ncols() != self.dim() {
            return Err(Error::ModelMismatch(format!(
                "{} columns against a {}-unit model",
                normalized.ncols(),
                self.dim()
            )));
        }
        let p = self.principal();
        let r = self.residual();
        let main = normalized.dot(&p).dot(&p.t());
        let residual = normalized.dot(&r).dot(&r.t());
        Ok(Decomposition { main, residual })
    }
}

/// Main and residual parts of normalized data; they sum to the input.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub main: Array2<f64>,
    pub residual: Array2<f64>,
}

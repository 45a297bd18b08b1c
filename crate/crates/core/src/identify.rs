//! Locating drifted units.
//!
//! Step one scores every pair of units by the total Q of a two-unit model
//! over the test data; the pair with the smallest total is taken as the
//! trusted reference. Step two fits a three-unit model for each remaining
//! unit together with that pair and flags the unit when its Q stays above
//! the control limit for more than a set share of the test rows.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pca::{DataMatrix, FitOptions, PcaModel, SignalKind, VarianceRule};
use crate::spe::{monitor, H0Form, QSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentifyOptions {
    pub kappa: f64,
    pub rule: VarianceRule,
    pub alpha: f64,
    pub h0: H0Form,
    /// A unit is abnormal when more than this share of test rows exceed
    /// the limit.
    pub exceedance: f64,
}

impl Default for IdentifyOptions {
    fn default() -> Self {
        IdentifyOptions {
            kappa: 0.85,
            rule: VarianceRule::Squared,
            alpha: 0.99,
            h0: H0Form::Corrected,
            exceedance: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinationScore {
    pub subset: Vec<String>,
    pub kind: SignalKind,
    pub q_sum: f64,
    pub q_series: QSeries,
    pub threshold: f64,
}

impl CombinationScore {
    pub fn label(&self) -> String {
        self.subset.join("+")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Normal,
    Abnormal,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Normal => "normal",
            Verdict::Abnormal => "abnormal",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitVerdict {
    pub unit: String,
    pub verdict: Verdict,
    pub exceedance_fraction: f64,
    pub in_reference_pair: bool,
}

/// Outcome of both steps for one signal kind.
#[derive(Debug, Clone, PartialEq)]
pub struct KindReport {
    pub kind: SignalKind,
    pub reference_pair: (String, String),
    pub verdicts: Vec<UnitVerdict>,
    /// Ascending by `q_sum`.
    pub pair_scores: Vec<CombinationScore>,
    /// One per unit outside the reference pair, in unit order.
    pub triple_scores: Vec<CombinationScore>,
}

impl KindReport {
    pub fn abnormal(&self) -> BTreeSet<String> {
        self.verdicts
            .iter()
            .filter(|v| v.verdict == Verdict::Abnormal)
            .map(|v| v.unit.clone())
            .collect()
    }

    pub fn verdict(&self, unit: &str) -> Option<&UnitVerdict> {
        self.verdicts.iter().find(|v| v.unit == unit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentificationReport {
    pub kinds: Vec<KindReport>,
}

impl IdentificationReport {
    pub fn kind(&self, kind: SignalKind) -> Option<&KindReport> {
        self.kinds.iter().find(|k| k.kind == kind)
    }

    /// Units flagged under any signal kind.
    pub fn excluded(&self) -> BTreeSet<String> {
        self.kinds.iter().flat_map(|k| k.abnormal()).collect()
    }
}

fn check_pair(train: &DataMatrix, test: &DataMatrix) -> Result<()> {
    if train.kind() != test.kind() || train.unit_ids() != test.unit_ids() {
        return Err(Error::ModelMismatch(
            "training and test data must share kind and units".into(),
        ));
    }
    if train.unit_ids().len() < 3 {
        return Err(Error::invalid("identification needs at least 3 units"));
    }
    Ok(())
}

fn score_subset(
    train: &DataMatrix,
    test: &DataMatrix,
    subset: &[&str],
    fit: &FitOptions,
    opts: &IdentifyOptions,
) -> Result<CombinationScore> {
    let model = PcaModel::fit(&train.select(subset)?, fit)?;
    let q = monitor(&model, &test.select(subset)?, opts.alpha, opts.h0)?;
    Ok(CombinationScore {
        subset: subset.iter().map(|s| s.to_string()).collect(),
        kind: train.kind(),
        q_sum: q.sum(),
        threshold: q.threshold,
        q_series: q,
    })
}

/// Total test-data Q for every pair of units, smallest first.
pub fn score_pairs(
    train: &DataMatrix,
    test: &DataMatrix,
    opts: &IdentifyOptions,
) -> Result<Vec<CombinationScore>> {
    check_pair(train, test)?;
    let ids = train.unit_ids();
    let pairs: Vec<[&str; 2]> = (0..ids.len())
        .flat_map(|i| ((i + 1)..ids.len()).map(move |j| [ids[i].as_str(), ids[j].as_str()]))
        .collect();
    // two columns leave room for exactly one principal direction
    let fit = FitOptions {
        fixed_components: Some(1),
        ..FitOptions::new(opts.kappa, opts.rule)
    };
    let mut scores: Vec<CombinationScore> = pairs
        .par_iter()
        .map(|p| score_subset(train, test, p, &fit, opts))
        .collect::<Result<_>>()?;
    scores.sort_by(|a, b| a.q_sum.total_cmp(&b.q_sum).then_with(|| a.subset.cmp(&b.subset)));
    Ok(scores)
}

/// Pair with the smallest total Q; exact ties go to the lexicographically
/// smaller pair.
pub fn select_reference_pair(scores: &[CombinationScore]) -> Result<(String, String)> {
    let best = scores
        .iter()
        .filter(|s| s.subset.len() == 2)
        .min_by(|a, b| a.q_sum.total_cmp(&b.q_sum).then_with(|| a.subset.cmp(&b.subset)))
        .ok_or_else(|| Error::invalid("no pair scores to choose from"))?;
    Ok((best.subset[0].clone(), best.subset[1].clone()))
}

/// Verdicts for every unit given a trusted pair.
pub fn classify_units(
    pair: (&str, &str),
    train: &DataMatrix,
    test: &DataMatrix,
    opts: &IdentifyOptions,
) -> Result<(Vec<UnitVerdict>, Vec<CombinationScore>)> {
    check_pair(train, test)?;
    let ids = train.unit_ids();
    let pos = |u: &str| {
        ids.iter()
            .position(|x| x == u)
            .ok_or_else(|| Error::ModelMismatch(format!("reference unit `{u}` not in data")))
    };
    let (pa, pb) = (pos(pair.0)?, pos(pair.1)?);
    if pa == pb {
        return Err(Error::invalid("reference pair must name two different units"));
    }
    let fit = FitOptions {
        max_components: Some(2),
        ..FitOptions::new(opts.kappa, opts.rule)
    };
    let others: Vec<usize> = (0..ids.len()).filter(|&k| k != pa && k != pb).collect();
    let triples: Vec<CombinationScore> = others
        .par_iter()
        .map(|&k| {
            let mut idx = [k, pa, pb];
            idx.sort_unstable();
            let subset: Vec<&str> = idx.iter().map(|&i| ids[i].as_str()).collect();
            score_subset(train, test, &subset, &fit, opts)
        })
        .collect::<Result<_>>()?;

    let pair_series = {
        let mut idx = [pa, pb];
        idx.sort_unstable();
        let subset: Vec<&str> = idx.iter().map(|&i| ids[i].as_str()).collect();
        let pair_fit = FitOptions {
            fixed_components: Some(1),
            ..FitOptions::new(opts.kappa, opts.rule)
        };
        score_subset(train, test, &subset, &pair_fit, opts)?
    };

    let mut verdicts = Vec::with_capacity(ids.len());
    let mut triple_iter = triples.iter();
    for (k, id) in ids.iter().enumerate() {
        if k == pa || k == pb {
            verdicts.push(UnitVerdict {
                unit: id.clone(),
                verdict: Verdict::Normal,
                exceedance_fraction: pair_series.q_series.exceedance_fraction(),
                in_reference_pair: true,
            });
        } else {
            let score = triple_iter.next().unwrap();
            let frac = score.q_series.exceedance_fraction();
            verdicts.push(UnitVerdict {
                unit: id.clone(),
                verdict: if frac > opts.exceedance {
                    Verdict::Abnormal
                } else {
                    Verdict::Normal
                },
                exceedance_fraction: frac,
                in_reference_pair: false,
            });
        }
    }
    Ok((verdicts, triples))
}

/// Both identification steps for one signal kind.
pub fn identify_kind(train: &DataMatrix, test: &DataMatrix, opts: &IdentifyOptions) -> Result<KindReport> {
    let pair_scores = score_pairs(train, test, opts)?;
    let pair = select_reference_pair(&pair_scores)?;
    let (verdicts, triple_scores) = classify_units((&pair.0, &pair.1), train, test, opts)?;
    Ok(KindReport {
        kind: train.kind(),
        reference_pair: pair,
        verdicts,
        pair_scores,
        triple_scores,
    })
}

/// Run identification independently for each `(train, test)` kind.
pub fn identify(data: &[(DataMatrix, DataMatrix)], opts: &IdentifyOptions) -> Result<IdentificationReport> {
    let kinds = data
        .iter()
        .map(|(train, test)| identify_kind(train, test, opts))
        .collect::<Result<_>>()?;
    Ok(IdentificationReport { kinds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn ids(n: usize) -> Vec<String> {
        (1..=n).map(|k| format!("S{k}")).collect()
    }

    /// Common triangle signal plus independent noise; `drift` adds a
    /// per-unit relative ramp over the test rows.
    fn synthetic(
        n: usize,
        rows: usize,
        seed: u64,
        drift: &[(usize, f64, usize)],
    ) -> (DataMatrix, DataMatrix) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gains: Vec<f64> = (0..n).map(|k| 1.0 + 0.03 * k as f64).collect();
        let mut make = |len: usize, test: bool| {
            let cols: Vec<Vec<f64>> = (0..n)
                .map(|k| {
                    (0..len)
                        .map(|i| {
                            let s = 1.0 + 9.0 * (((i % 40) as f64 - 20.0).abs() / 20.0);
                            let mut d = 0.0;
                            if test {
                                for &(u, mag, onset) in drift {
                                    if u == k && i >= onset {
                                        d += mag;
                                    }
                                }
                            }
                            let z: f64 = rng.sample(StandardNormal);
                            gains[k] * s * (1.0 + d) + 1e-3 * z
                        })
                        .collect()
                })
                .collect();
            DataMatrix::from_columns(SignalKind::Amplitude, ids(n), &cols).unwrap()
        };
        let train = make(rows, false);
        let test = make(rows, true);
        (train, test)
    }

    #[test]
    fn pairs_with_drifted_unit_rank_last() {
        let n = 6;
        let (train, test) = synthetic(n, 200, 3, &[(2, 0.02, 50)]);
        let scores = score_pairs(&train, &test, &IdentifyOptions::default()).unwrap();
        assert_eq!(scores.len(), n * (n - 1) / 2);
        for w in scores.windows(2) {
            assert!(w[0].q_sum <= w[1].q_sum);
        }
        // S3 appears in exactly n-1 pairs, all at the top of the ranking
        let top = &scores[scores.len() - (n - 1)..];
        assert!(top.iter().all(|s| s.subset.contains(&"S3".to_string())));
        let pair = select_reference_pair(&scores).unwrap();
        assert!(pair.0 != "S3" && pair.1 != "S3");
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let (train, test) = synthetic(4, 60, 1, &[]);
        let mut scores = score_pairs(&train, &test, &IdentifyOptions::default()).unwrap();
        for s in scores.iter_mut() {
            s.q_sum = 1.0;
        }
        scores.reverse();
        assert_eq!(
            select_reference_pair(&scores).unwrap(),
            ("S1".to_string(), "S2".to_string())
        );
        scores[2].q_sum = 0.5;
        let expect = (scores[2].subset[0].clone(), scores[2].subset[1].clone());
        assert_eq!(select_reference_pair(&scores).unwrap(), expect);
        assert!(select_reference_pair(&[]).is_err());
    }

    #[test]
    fn flags_drifted_units_only() {
        let (train, test) = synthetic(8, 200, 9, &[(0, -0.02, 30), (4, 0.03, 120)]);
        let r = identify_kind(&train, &test, &IdentifyOptions::default()).unwrap();
        let abnormal: Vec<String> = r.abnormal().into_iter().collect();
        assert_eq!(abnormal, vec!["S1".to_string(), "S5".to_string()]);
        let (a, b) = &r.reference_pair;
        assert!(r.verdict(a).unwrap().in_reference_pair);
        assert_eq!(r.verdict(b).unwrap().verdict, Verdict::Normal);
        assert_eq!(r.verdicts.len(), 8);
        assert_eq!(r.triple_scores.len(), 6);
    }

    #[test]
    fn step_drift_onset_is_located() {
        let onset = 90;
        let (train, test) = synthetic(5, 200, 4, &[(3, 0.01, onset)]);
        let opts = IdentifyOptions::default();
        let scores = score_pairs(&train, &test, &opts).unwrap();
        let pair = select_reference_pair(&scores).unwrap();
        let (_, triples) = classify_units((&pair.0, &pair.1), &train, &test, &opts).unwrap();
        let t = triples
            .iter()
            .find(|t| t.subset.contains(&"S4".to_string()))
            .unwrap();
        let first = t.q_series.first_exceedance().unwrap();
        assert!((first as i64 - onset as i64).abs() <= 1, "onset at {first}");
        assert!(t.q_series.values[onset..].iter().all(|&q| q > t.threshold));
    }

    #[test]
    fn rejects_bad_inputs() {
        let (train, test) = synthetic(4, 40, 2, &[]);
        let small = train.select(&["S1", "S2"]).unwrap();
        let small_t = test.select(&["S1", "S2"]).unwrap();
        assert!(score_pairs(&small, &small_t, &IdentifyOptions::default()).is_err());
        let opts = IdentifyOptions::default();
        assert!(classify_units(("S1", "S1"), &train, &test, &opts).is_err());
        assert!(classify_units(("S1", "S9"), &train, &test, &opts).is_err());
    }
}

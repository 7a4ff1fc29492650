//! Evaluation harness: stratified k-fold cross-validation, accuracy, equal
//! error rate, statistic ablations, and per-group feature ranking.
//!
//! EER is computed on scores pooled across held-out folds, with Machine as
//! the positive class: FPR counts humans flagged as machine, FNR machines
//! missed. Aligned human/machine paragraph pairs are co-assigned to one fold
//! when pair keys are available, so shared source content never straddles a
//! train/test split.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{self, Dataset, Hyperparams, Optimizer};
use crate::corpus::Label;
use crate::error::Error;
use crate::features::{CoherenceVector, FeatureSet};
use crate::Result;

/// Which half of the coherence vector feeds the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    MeanOnly,
    VarianceOnly,
    Combination,
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(Statistic::MeanOnly),
            "variance" => Ok(Statistic::VarianceOnly),
            "combination" => Ok(Statistic::Combination),
            other => Err(Error::Usage(format!(
                "unknown statistic {other:?}; expected mean, variance, or combination"
            ))),
        }
    }
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::MeanOnly => "mean",
            Statistic::VarianceOnly => "variance",
            Statistic::Combination => "combination",
        }
    }

    /// Column subset of a `2G`-slot vector; `None` means all columns.
    pub fn columns(self, group_count: usize) -> Option<Vec<usize>> {
        match self {
            Statistic::MeanOnly => Some((0..group_count).collect()),
            Statistic::VarianceOnly => Some((group_count..2 * group_count).collect()),
            Statistic::Combination => None,
        }
    }
}

/// Seeded, stratified assignment of row ids to folds.
#[derive(Debug, Clone)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: HashMap<String, usize>,
    pub seed: u64,
    pub stratified: bool,
}

/// One row entering fold assignment. `pair_key` groups rows that must share
/// a fold (aligned human/machine pairs).
#[derive(Debug, Clone)]
pub struct FoldRow {
    pub id: String,
    pub label: Label,
    pub pair_key: Option<String>,
}

/// Derive a pair key from an id of the form `<pair>#<side>`. Ids without a
/// `#` get no pair key.
pub fn pair_key_from_id(id: &str) -> Option<String> {
    id.rsplit_once('#').map(|(prefix, _)| prefix.to_string())
}

/// Stratified fold assignment. Pair groups are placed as units on the fold
/// with the lightest relevant class load, so per-fold class counts deviate
/// from a perfect split by at most one row per class.
pub fn make_folds(rows: &[FoldRow], k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::FoldCountTooSmall(k));
    }
    for (label, name) in [(Label::Human, "human"), (Label::Machine, "machine")] {
        let count = rows.iter().filter(|r| r.label == label).count();
        if count < k {
            return Err(Error::ClassSmallerThanFolds {
                class: name.into(),
                rows: count,
                k,
            });
        }
    }

    // Group rows that must stay together; singletons are their own group.
    let mut groups: HashMap<String, Vec<&FoldRow>> = HashMap::new();
    for row in rows {
        let key = row
            .pair_key
            .clone()
            .unwrap_or_else(|| format!("\u{0}solo\u{0}{}", row.id));
        groups.entry(key).or_default().push(row);
    }
    let mut groups: Vec<(String, Vec<&FoldRow>)> = groups.into_iter().collect();
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    groups.shuffle(&mut rng);
    // Mixed pairs first: they add one row to each class at once.
    groups.sort_by_key(|(_, members)| {
        let humans = members.iter().filter(|r| r.label == Label::Human).count();
        usize::from(humans == 0 || humans == members.len())
    });

    let mut human_load = vec![0usize; k];
    let mut machine_load = vec![0usize; k];
    let mut assignments = HashMap::new();
    for (_, members) in groups {
        let humans = members.iter().filter(|r| r.label == Label::Human).count();
        let machines = members.len() - humans;
        let fold = (0..k)
            .min_by_key(|&f| {
                let load = if humans >= machines {
                    human_load[f]
                } else {
                    machine_load[f]
                };
                (load, human_load[f] + machine_load[f], f)
            })
            .unwrap();
        human_load[fold] += humans;
        machine_load[fold] += machines;
        for row in members {
            assignments.insert(row.id.clone(), fold);
        }
    }
    Ok(FoldPlan {
        k,
        assignments,
        seed,
        stratified: true,
    })
}

/// Equal error rate over signed scores, Machine positive.
///
/// Thresholds sweep the sorted unique scores (score >= t reads Machine);
/// when FPR - FNR changes sign between adjacent thresholds the crossing is
/// linearly interpolated.
pub fn compute_eer(scores: &[(f64, Label)]) -> Result<f64> {
    let humans: Vec<f64> = scores
        .iter()
        .filter(|(_, l)| *l == Label::Human)
        .map(|(s, _)| *s)
        .collect();
    let machines: Vec<f64> = scores
        .iter()
        .filter(|(_, l)| *l == Label::Machine)
        .map(|(s, _)| *s)
        .collect();
    if humans.is_empty() || machines.is_empty() {
        return Err(Error::EerSingleClass);
    }
    let points = roc_points(&humans, &machines);
    // diff = FPR - FNR is non-increasing in the threshold.
    let mut prev = &points[0];
    for point in &points {
        let diff = point.fpr - point.fnr;
        if diff == 0.0 {
            return Ok(point.fpr);
        }
        if diff < 0.0 {
            let prev_diff = prev.fpr - prev.fnr;
            if prev_diff <= 0.0 {
                return Ok(point.fpr.max(point.fnr).min(prev.fpr.max(prev.fnr)));
            }
            let alpha = prev_diff / (prev_diff - diff);
            return Ok(prev.fpr + alpha * (point.fpr - prev.fpr));
        }
        prev = point;
    }
    // FPR stayed above FNR for every finite threshold; the crossing sits at
    // the top end where FPR falls to 0 and FNR reaches 1.
    let last = points.last().unwrap();
    let prev_diff = last.fpr - last.fnr;
    let alpha = prev_diff / (prev_diff + 1.0);
    Ok(last.fpr + alpha * (0.0 - last.fpr))
}

/// One point of the threshold sweep.
#[derive(Debug, Clone, Serialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub fnr: f64,
}

/// FPR/FNR at every unique score threshold, ascending.
pub fn roc_points(humans: &[f64], machines: &[f64]) -> Vec<RocPoint> {
    let mut thresholds: Vec<f64> = humans.iter().chain(machines).copied().collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    thresholds
        .iter()
        .map(|&t| RocPoint {
            threshold: t,
            fpr: humans.iter().filter(|&&s| s >= t).count() as f64 / humans.len() as f64,
            fnr: machines.iter().filter(|&&s| s < t).count() as f64 / machines.len() as f64,
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Confusion {
    pub true_machine: usize,
    pub true_human: usize,
    pub false_machine: usize,
    pub false_human: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FoldMetrics {
    pub fold: usize,
    pub rows: usize,
    pub accuracy: f64,
    pub eer: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalConfig {
    pub optimizer: String,
    pub metric: String,
    pub statistic: String,
    pub folds: usize,
    pub seed: u64,
    pub eer_pooling: &'static str,
}

/// Cross-validation report: pooled accuracy and EER plus per-fold metrics.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub eer: f64,
    pub per_fold: Vec<FoldMetrics>,
    pub confusion: Confusion,
    pub config: EvalConfig,
}

/// Out-of-fold scores for every row, reusable for ROC dumps.
pub struct PooledScores {
    pub scores: Vec<(f64, Label)>,
}

fn fold_rows_from(features: &FeatureSet, group_pairs: bool) -> Result<Vec<FoldRow>> {
    features
        .rows
        .iter()
        .map(|row| {
            let label = row
                .label
                .ok_or_else(|| Error::Usage(format!("row {} is unlabeled", row.paragraph_id)))?;
            Ok(FoldRow {
                id: row.paragraph_id.clone(),
                label,
                pair_key: group_pairs
                    .then(|| pair_key_from_id(&row.paragraph_id))
                    .flatten(),
            })
        })
        .collect()
}

/// Build a fold plan straight from a labeled feature set.
pub fn plan_folds(
    features: &FeatureSet,
    k: usize,
    seed: u64,
    group_pairs: bool,
) -> Result<FoldPlan> {
    make_folds(&fold_rows_from(features, group_pairs)?, k, seed)
}

/// Cross-validate on a column subset of the feature vectors.
pub fn cross_validate_columns(
    features: &FeatureSet,
    columns: Option<&[usize]>,
    optimizer: Optimizer,
    hp: &Hyperparams,
    plan: &FoldPlan,
    config: EvalConfig,
) -> Result<(EvalReport, PooledScores)> {
    let fold_results: Vec<Result<Vec<(f64, Label)>>> = (0..plan.k)
        .into_par_iter()
        .map(|fold| {
            let train_rows: Vec<&CoherenceVector> = features
                .rows
                .iter()
                .filter(|r| plan.assignments.get(&r.paragraph_id) != Some(&fold))
                .collect();
            let test_rows: Vec<&CoherenceVector> = features
                .rows
                .iter()
                .filter(|r| plan.assignments.get(&r.paragraph_id) == Some(&fold))
                .collect();
            let train = Dataset::from_rows(&train_rows, columns)?;
            let (standardization, fit) = classifier::train_dataset(&train, optimizer, hp)?;
            let mut scored = Vec::with_capacity(test_rows.len());
            for row in test_rows {
                let values: Vec<f64> = match columns {
                    Some(cols) => cols.iter().map(|&c| row.values[c]).collect(),
                    None => row.values.clone(),
                };
                let mut z = vec![0.0; values.len()];
                standardization.transform(&values, &mut z);
                let score: f64 =
                    fit.weights.iter().zip(&z).map(|(w, x)| w * x).sum::<f64>() + fit.bias;
                let label = row.label.expect("labeled; checked at fold planning");
                scored.push((score, label));
            }
            Ok(scored)
        })
        .collect();

    let mut per_fold = Vec::with_capacity(plan.k);
    let mut pooled: Vec<(f64, Label)> = Vec::new();
    let mut confusion = Confusion {
        true_machine: 0,
        true_human: 0,
        false_machine: 0,
        false_human: 0,
    };
    for (fold, result) in fold_results.into_iter().enumerate() {
        let scored = result?;
        let mut correct = 0usize;
        for &(score, label) in &scored {
            let predicted = if score > 0.0 {
                Label::Machine
            } else {
                Label::Human
            };
            match (predicted, label) {
                (Label::Machine, Label::Machine) => confusion.true_machine += 1,
                (Label::Human, Label::Human) => confusion.true_human += 1,
                (Label::Machine, Label::Human) => confusion.false_machine += 1,
                (Label::Human, Label::Machine) => confusion.false_human += 1,
            }
            if predicted == label {
                correct += 1;
            }
        }
        per_fold.push(FoldMetrics {
            fold,
            rows: scored.len(),
            accuracy: if scored.is_empty() {
                0.0
            } else {
                correct as f64 / scored.len() as f64
            },
            eer: compute_eer(&scored).ok(),
        });
        pooled.extend(scored);
    }

    let total = pooled.len();
    let accuracy = (confusion.true_machine + confusion.true_human) as f64 / total as f64;
    let eer = compute_eer(&pooled)?;
    Ok((
        EvalReport {
            accuracy,
            eer,
            per_fold,
            confusion,
            config,
        },
        PooledScores { scores: pooled },
    ))
}

/// Full-vector cross-validation: both statistics for every group.
pub fn cross_validate(
    features: &FeatureSet,
    optimizer: Optimizer,
    hp: &Hyperparams,
    plan: &FoldPlan,
) -> Result<(EvalReport, PooledScores)> {
    ablate(features, Statistic::Combination, optimizer, hp, plan)
}

/// Cross-validate on one statistic half (or both).
pub fn ablate(
    features: &FeatureSet,
    statistic: Statistic,
    optimizer: Optimizer,
    hp: &Hyperparams,
    plan: &FoldPlan,
) -> Result<(EvalReport, PooledScores)> {
    let columns = statistic.columns(features.group_count());
    let config = EvalConfig {
        optimizer: optimizer.name().into(),
        metric: features.header.metric.clone(),
        statistic: statistic.name().into(),
        folds: plan.k,
        seed: plan.seed,
        eer_pooling: "pooled-out-of-fold",
    };
    cross_validate_columns(features, columns.as_deref(), optimizer, hp, plan, config)
}

/// One row of the single-feature ranking table.
#[derive(Debug, Clone, Serialize)]
pub struct FeatureRank {
    pub group: String,
    pub group_index: usize,
    pub mean_accuracy: f64,
    pub variance_accuracy: f64,
    pub combination_accuracy: f64,
}

fn column_is_constant(features: &FeatureSet, col: usize) -> bool {
    let mut rows = features.rows.iter();
    match rows.next() {
        Some(first) => {
            let v = first.values[col];
            rows.all(|r| r.values[col] == v)
        }
        None => true,
    }
}

fn majority_rate(features: &FeatureSet) -> f64 {
    let machine = features
        .rows
        .iter()
        .filter(|r| r.label == Some(Label::Machine))
        .count();
    let human = features.rows.len() - machine;
    machine.max(human) as f64 / features.rows.len() as f64
}

/// Cross-validate every POS-pair group on its own (mean, variance, and the
/// two combined) and rank groups by combination accuracy, descending.
/// Groups whose columns never vary score the majority-class rate outright.
pub fn rank_single_features(
    features: &FeatureSet,
    group_names: &[String],
    optimizer: Optimizer,
    hp: &Hyperparams,
    plan: &FoldPlan,
) -> Result<Vec<FeatureRank>> {
    let g = features.group_count();
    assert_eq!(group_names.len(), g, "one name per group");
    let baseline = majority_rate(features);

    let mut ranks: Vec<FeatureRank> = (0..g)
        .into_par_iter()
        .map(|group| {
            let mean_col = group;
            let var_col = g + group;
            let cv_accuracy = |columns: &[usize]| -> Result<f64> {
                if columns.iter().all(|&c| column_is_constant(features, c)) {
                    return Ok(baseline);
                }
                let config = EvalConfig {
                    optimizer: optimizer.name().into(),
                    metric: features.header.metric.clone(),
                    statistic: "single-group".into(),
                    folds: plan.k,
                    seed: plan.seed,
                    eer_pooling: "pooled-out-of-fold",
                };
                let (report, _) =
                    cross_validate_columns(features, Some(columns), optimizer, hp, plan, config)?;
                Ok(report.accuracy)
            };
            Ok(FeatureRank {
                group: group_names[group].clone(),
                group_index: group,
                mean_accuracy: cv_accuracy(&[mean_col])?,
                variance_accuracy: cv_accuracy(&[var_col])?,
                combination_accuracy: cv_accuracy(&[mean_col, var_col])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    ranks.sort_by(|a, b| {
        b.combination_accuracy
            .total_cmp(&a.combination_accuracy)
            .then(a.group_index.cmp(&b.group_index))
    });
    Ok(ranks)
}

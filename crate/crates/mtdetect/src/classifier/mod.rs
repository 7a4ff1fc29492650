//! Step 3: binary linear classification over coherence vectors.
//!
//! Three optimizer variants share the same linear model shape: a logistic
//! baseline (`Linear`), a Pegasos-style primal SVM (`SgdSvm`), and a dual SMO
//! SVM (`SmoSvm`). Features are z-scored with parameters fitted on training
//! data only; class coding is Human = -1, Machine = +1, so a positive score
//! reads "machine-translated".

mod logistic;
mod sgd;
pub mod smo;

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::Error;
use crate::features::{CoherenceVector, FeatureSet};
use crate::Result;

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    /// Logistic-loss gradient descent; the plain linear baseline.
    Linear,
    /// Primal hinge-loss subgradient descent with seeded shuffling.
    SgdSvm,
    /// Dual solver with pairwise working-set selection.
    SmoSvm,
}

impl std::str::FromStr for Optimizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Optimizer::Linear),
            "sgd" | "sgd_svm" | "svm-sgd" => Ok(Optimizer::SgdSvm),
            "smo" | "smo_svm" | "svm-smo" => Ok(Optimizer::SmoSvm),
            other => Err(Error::Usage(format!(
                "unknown optimizer {other:?}; expected linear, sgd, or smo"
            ))),
        }
    }
}

impl Optimizer {
    pub fn name(self) -> &'static str {
        match self {
            Optimizer::Linear => "linear",
            Optimizer::SgdSvm => "sgd_svm",
            Optimizer::SmoSvm => "smo_svm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub c: f64,
    pub epochs: usize,
    pub max_iter: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            c: 1.0,
            epochs: 20,
            max_iter: 1_000_000,
            tolerance: 1e-3,
            seed: 42,
        }
    }
}

/// Per-feature z-scoring parameters fitted on training rows. Constant
/// features keep a sentinel std of 1 so the transform is always defined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    pub constant: Vec<bool>,
}

impl Standardization {
    /// Fit means and population stds over the given rows.
    pub fn fit(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyTrainingSet);
        }
        let dim = rows[0].len();
        let mut means = vec![0.0f64; dim];
        for row in rows {
            for (m, x) in means.iter_mut().zip(*row) {
                *m += x;
            }
        }
        for m in &mut means {
            *m /= n as f64;
        }
        let mut vars = vec![0.0f64; dim];
        for row in rows {
            for ((v, m), x) in vars.iter_mut().zip(&means).zip(*row) {
                let d = x - m;
                *v += d * d;
            }
        }
        let mut stds = Vec::with_capacity(dim);
        let mut constant = Vec::with_capacity(dim);
        for v in vars {
            let std = (v / n as f64).sqrt();
            if std == 0.0 {
                stds.push(1.0);
                constant.push(true);
            } else {
                stds.push(std);
                constant.push(false);
            }
        }
        Ok(Standardization {
            means,
            stds,
            constant,
        })
    }

    pub fn transform(&self, row: &[f64], out: &mut [f64]) {
        for i in 0..row.len() {
            out[i] = (row[i] - self.means[i]) / self.stds[i];
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainedOn {
    pub rows: usize,
    pub human: usize,
    pub machine: usize,
}

/// A trained linear model plus everything needed to apply it safely:
/// standardization parameters and the layout binding of its training data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SvmModel {
    pub schema_version: u32,
    pub optimizer: Optimizer,
    pub hyperparams: Hyperparams,
    pub standardization: Standardization,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub tagset_hash: String,
    pub metric: String,
    pub embedding_id: String,
    pub trained_on: TrainedOn,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prediction {
    pub id: String,
    pub score: f64,
    pub label: Label,
    /// Set when the score is exactly 0 and the Human label is a fiat call.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub tie: bool,
}

/// Training rows in dense row-major form with +/-1 labels.
pub struct Dataset {
    pub ids: Vec<String>,
    pub x: Vec<f64>,
    pub dim: usize,
    pub y: Vec<f64>,
}

impl Dataset {
    /// Extract labeled rows from a feature set, optionally restricted to a
    /// column subset (ablation masks, single-group ranking).
    pub fn from_rows(rows: &[&CoherenceVector], columns: Option<&[usize]>) -> Result<Self> {
        let mut ids = Vec::with_capacity(rows.len());
        let mut x = Vec::new();
        let mut y = Vec::with_capacity(rows.len());
        let mut dim = 0usize;
        for row in rows {
            let label = row
                .label
                .ok_or_else(|| Error::Usage(format!("row {} is unlabeled", row.paragraph_id)))?;
            let values: Vec<f64> = match columns {
                Some(cols) => cols.iter().map(|&c| row.values[c]).collect(),
                None => row.values.clone(),
            };
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteFeature(row.paragraph_id.clone()));
            }
            dim = values.len();
            ids.push(row.paragraph_id.clone());
            x.extend_from_slice(&values);
            y.push(match label {
                Label::Human => -1.0,
                Label::Machine => 1.0,
            });
        }
        Ok(Dataset { ids, x, dim, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.dim..(i + 1) * self.dim]
    }
}

/// Weights and bias on standardized features, before model packaging.
pub struct LinearFit {
    pub weights: Vec<f64>,
    pub bias: f64,
}

/// Fit a linear decision function on an already-standardized dataset.
pub fn fit_standardized(
    data: &Dataset,
    optimizer: Optimizer,
    hp: &Hyperparams,
) -> Result<LinearFit> {
    match optimizer {
        Optimizer::Linear => logistic::fit(data, hp),
        Optimizer::SgdSvm => sgd::fit(data, hp),
        Optimizer::SmoSvm => {
            let outcome = smo::optimize(data, hp)?;
            Ok(LinearFit {
                weights: outcome.weights,
                bias: outcome.bias,
            })
        }
    }
}

/// Standardize, then fit. Returns the model pieces without layout binding.
pub fn train_dataset(
    data: &Dataset,
    optimizer: Optimizer,
    hp: &Hyperparams,
) -> Result<(Standardization, LinearFit)> {
    if data.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let pos = data.y.iter().filter(|&&y| y > 0.0).count();
    if pos == 0 || pos == data.len() {
        let only = if pos == 0 { "human" } else { "machine" };
        return Err(Error::SingleClass(only.to_string()));
    }
    let rows: Vec<&[f64]> = (0..data.len()).map(|i| data.row(i)).collect();
    let standardization = Standardization::fit(&rows)?;
    let mut z = Dataset {
        ids: data.ids.clone(),
        x: vec![0.0; data.x.len()],
        dim: data.dim,
        y: data.y.clone(),
    };
    for i in 0..data.len() {
        let (start, end) = (i * data.dim, (i + 1) * data.dim);
        let mut out = vec![0.0; data.dim];
        standardization.transform(data.row(i), &mut out);
        z.x[start..end].copy_from_slice(&out);
    }
    let fit = fit_standardized(&z, optimizer, hp)?;
    Ok((standardization, fit))
}

/// Train a full model from a labeled feature set.
pub fn train(features: &FeatureSet, optimizer: Optimizer, hp: &Hyperparams) -> Result<SvmModel> {
    let rows: Vec<&CoherenceVector> = features.rows.iter().collect();
    let data = Dataset::from_rows(&rows, None)?;
    let (standardization, fit) = train_dataset(&data, optimizer, hp)?;
    let machine = data.y.iter().filter(|&&y| y > 0.0).count();
    Ok(SvmModel {
        schema_version: MODEL_SCHEMA_VERSION,
        optimizer,
        hyperparams: *hp,
        standardization,
        weights: fit.weights,
        bias: fit.bias,
        tagset_hash: features.header.tagset_hash.clone(),
        metric: features.header.metric.clone(),
        embedding_id: features.header.embedding_id.clone(),
        trained_on: TrainedOn {
            rows: data.len(),
            human: data.len() - machine,
            machine,
        },
    })
}

impl SvmModel {
    pub fn binding(&self) -> String {
        format!(
            "tagset={} metric={} embedding={}",
            self.tagset_hash, self.metric, self.embedding_id
        )
    }

    pub fn score_row(&self, values: &[f64]) -> f64 {
        let mut z = vec![0.0; values.len()];
        self.standardization.transform(values, &mut z);
        self.weights.iter().zip(&z).map(|(w, x)| w * x).sum::<f64>() + self.bias
    }

    /// Score rows from a feature set whose binding must match the model's.
    pub fn predict(&self, features: &FeatureSet) -> Result<Vec<Prediction>> {
        let model_binding = self.binding();
        let data_binding = features.binding();
        if model_binding != data_binding {
            return Err(Error::LayoutMismatch {
                model: model_binding,
                data: data_binding,
            });
        }
        if features.total_len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                actual: features.total_len(),
            });
        }
        Ok(features
            .rows
            .iter()
            .map(|row| {
                let score = self.score_row(&row.values);
                Prediction {
                    id: row.paragraph_id.clone(),
                    score,
                    label: if score > 0.0 {
                        Label::Machine
                    } else {
                        Label::Human
                    },
                    tie: score == 0.0,
                }
            })
            .collect())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let display = path.as_ref().display().to_string();
        let file = std::fs::File::create(&path).map_err(|e| Error::io(&display, e))?;
        let mut writer = std::io::BufWriter::new(file);
        serde_json::to_writer(&mut writer, self)
            .map_err(|e| Error::parse(&display, 0, e.to_string()))?;
        writeln!(writer).map_err(|e| Error::io(&display, e))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let display = path.as_ref().display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&display, e))?;
        let model: SvmModel =
            serde_json::from_str(&text).map_err(|e| Error::parse(&display, 1, e.to_string()))?;
        if model.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::SchemaVersion(model.schema_version));
        }
        Ok(model)
    }
}

/// Training accuracy of a fit on its own (standardized) dataset.
pub fn training_accuracy(data: &Dataset, fit: &LinearFit) -> f64 {
    let mut correct = 0usize;
    for i in 0..data.len() {
        let score: f64 = fit
            .weights
            .iter()
            .zip(data.row(i))
            .map(|(w, x)| w * x)
            .sum::<f64>()
            + fit.bias;
        let predicted = if score > 0.0 { 1.0 } else { -1.0 };
        if predicted == data.y[i] {
            correct += 1;
        }
    }
    correct as f64 / data.len() as f64
}

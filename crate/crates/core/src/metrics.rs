//! Confusion-matrix metrics, the majority baseline and normal-approximation
//! confidence intervals.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::CoherenceClass;
use crate::error::{Error, Result};

const K: usize = 3;

/// Counts indexed `[true class][predicted class]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix(pub [[u64; K]; K]);

impl ConfusionMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, truth: CoherenceClass, predicted: CoherenceClass) {
        self.0[truth.index()][predicted.index()] += 1;
    }

    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (CoherenceClass, CoherenceClass)>,
    {
        let mut cm = Self::new();
        for (t, p) in pairs {
            cm.add(t, p);
        }
        cm
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }

    pub fn support(&self, class: usize) -> u64 {
        self.0[class].iter().sum()
    }

    fn predicted(&self, class: usize) -> u64 {
        self.0.iter().map(|row| row[class]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: CoherenceClass,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Unweighted mean of the class F1 scores.
    pub macro_f1: f64,
    /// Support-weighted mean of the class F1 scores.
    pub weighted_f1: f64,
    pub confusion: ConfusionMatrix,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn report(cm: &ConfusionMatrix) -> Result<EvaluationReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyEvaluation);
    }
    let per_class: Vec<ClassMetrics> = (0..K)
        .map(|k| {
            let tp = cm.0[k][k];
            let precision = ratio(tp, cm.predicted(k));
            let recall = ratio(tp, cm.support(k));
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            ClassMetrics {
                class: CoherenceClass::from_index(k),
                precision,
                recall,
                f1,
                support: cm.support(k),
            }
        })
        .collect();
    let trace: u64 = (0..K).map(|k| cm.0[k][k]).sum();
    let macro_f1 = per_class.iter().map(|c| c.f1).sum::<f64>() / K as f64;
    let weighted_f1 = per_class
        .iter()
        .map(|c| c.f1 * c.support as f64)
        .sum::<f64>()
        / total as f64;
    Ok(EvaluationReport {
        accuracy: trace as f64 / total as f64,
        per_class,
        macro_f1,
        weighted_f1,
        confusion: *cm,
    })
}

impl EvaluationReport {
    pub const CSV_HEADER: &'static str = "accuracy,macro_f1,weighted_f1,\
precision_1,recall_1,f1_1,support_1,precision_2,recall_2,f1_2,support_2,\
precision_3,recall_3,f1_3,support_3";

    pub fn csv_row(&self) -> String {
        let mut fields = vec![
            self.accuracy.to_string(),
            self.macro_f1.to_string(),
            self.weighted_f1.to_string(),
        ];
        for c in &self.per_class {
            fields.extend([
                c.precision.to_string(),
                c.recall.to_string(),
                c.f1.to_string(),
                c.support.to_string(),
            ]);
        }
        fields.join(",")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MajorityPolicy {
    /// Always predict the given class.
    Fixed(CoherenceClass),
    /// Predict the most frequent training class, ties to the lowest class.
    TrainArgmax,
}

impl Default for MajorityPolicy {
    fn default() -> Self {
        MajorityPolicy::Fixed(CoherenceClass::Coherent)
    }
}

impl FromStr for MajorityPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "train-argmax" {
            return Ok(MajorityPolicy::TrainArgmax);
        }
        s.strip_prefix("fixed:")
            .and_then(|c| c.parse::<i64>().ok())
            .and_then(CoherenceClass::from_label)
            .map(MajorityPolicy::Fixed)
            .ok_or_else(|| Error::Config(format!("unknown majority policy `{s}`")))
    }
}

impl fmt::Display for MajorityPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MajorityPolicy::Fixed(c) => write!(f, "fixed:{c}"),
            MajorityPolicy::TrainArgmax => f.write_str("train-argmax"),
        }
    }
}

impl TryFrom<String> for MajorityPolicy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MajorityPolicy> for String {
    fn from(p: MajorityPolicy) -> String {
        p.to_string()
    }
}

impl MajorityPolicy {
    pub fn predicted_class(&self, train: &[CoherenceClass]) -> CoherenceClass {
        match self {
            MajorityPolicy::Fixed(c) => *c,
            MajorityPolicy::TrainArgmax => {
                let mut counts = [0usize; K];
                for c in train {
                    counts[c.index()] += 1;
                }
                let mut best = 0;
                for k in 1..K {
                    if counts[k] > counts[best] {
                        best = k;
                    }
                }
                CoherenceClass::from_index(best)
            }
        }
    }
}

pub fn majority_baseline(
    policy: MajorityPolicy,
    train: &[CoherenceClass],
    test: &[CoherenceClass],
) -> Result<EvaluationReport> {
    if test.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let predicted = policy.predicted_class(train);
    report(&ConfusionMatrix::from_pairs(test.iter().map(|&t| (t, predicted))))
}

/// Mean and 95% half-width `1.96 · s / √n` (sample standard deviation; zero
/// for a single value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub mean: f64,
    pub halfwidth: f64,
    pub n: usize,
}

pub const Z_95: f64 = 1.96;

pub fn confidence_interval(values: &[f64]) -> Result<ConfidenceInterval> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyEvaluation);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let halfwidth = if n == 1 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Z_95 * var.sqrt() / (n as f64).sqrt()
    };
    Ok(ConfidenceInterval { mean, halfwidth, n })
}

/// Normal-approximation 95% interval of a rate observed on `n` items,
/// `p ± 1.96 · √(p(1−p)/n)`.
pub fn proportion_interval(rate: f64, n: usize) -> Result<ConfidenceInterval> {
    if n == 0 {
        return Err(Error::EmptyEvaluation);
    }
    Ok(ConfidenceInterval {
        mean: rate,
        halfwidth: Z_95 * (rate * (1.0 - rate) / n as f64).sqrt(),
        n,
    })
}

impl ConfidenceInterval {
    pub fn contains(&self, value: f64) -> bool {
        (value - self.mean).abs() <= self.halfwidth
    }
}

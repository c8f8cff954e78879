use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{train, RunRecord, TrainConfig};
use crate::corpus::{CorpusSplit, WordVectors};
use crate::error::{Error, Result};
use crate::metrics::{confidence_interval, ConfidenceInterval};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergedRun {
    pub seed: u64,
    pub doc_id: String,
}

/// Mean and 95% interval of each headline metric over the completed runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub runs: usize,
    pub accuracy: ConfidenceInterval,
    pub weighted_f1: ConfidenceInterval,
    pub macro_f1: ConfidenceInterval,
}

impl Aggregate {
    pub fn from_runs(runs: &[RunRecord]) -> Result<Self> {
        let metric = |f: fn(&RunRecord) -> f64| {
            confidence_interval(&runs.iter().map(f).collect::<Vec<_>>())
        };
        Ok(Self {
            runs: runs.len(),
            accuracy: metric(|r| r.report.accuracy)?,
            weighted_f1: metric(|r| r.report.weighted_f1)?,
            macro_f1: metric(|r| r.report.macro_f1)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSeedResult {
    /// Completed runs in seed order.
    pub runs: Vec<RunRecord>,
    pub diverged: Vec<DivergedRun>,
    /// `None` when every run diverged.
    pub aggregate: Option<Aggregate>,
}

impl MultiSeedResult {
    /// JSON Lines, one completed run per line in seed order.
    pub fn run_log(&self) -> String {
        self.runs
            .iter()
            .map(|r| serde_json::to_string(r).expect("run records serialize") + "\n")
            .collect()
    }

    pub fn best_run(&self) -> Option<&RunRecord> {
        self.runs.iter().fold(None, |best: Option<&RunRecord>, r| match best {
            Some(b) if b.report.accuracy >= r.report.accuracy => Some(b),
            _ => Some(r),
        })
    }
}

/// Runs `n_runs` independent trainings with seeds `cfg.seed + i`.
///
/// Diverged runs are recorded and left out of the aggregate; any other
/// error aborts the harness. Results do not depend on `parallel`.
pub fn run_multi_seed(
    cfg: &TrainConfig,
    split: &CorpusSplit,
    wv: &WordVectors,
    n_runs: usize,
    parallel: bool,
) -> Result<MultiSeedResult> {
    if n_runs == 0 {
        return Err(Error::Config("n_runs must be at least 1".into()));
    }
    cfg.validate()?;
    let one = |i: usize| {
        let run_cfg = TrainConfig {
            seed: cfg.seed + i as u64,
            ..cfg.clone()
        };
        train(&run_cfg, split, wv).map(|(_, record)| record)
    };
    let outcomes: Vec<Result<RunRecord>> = if parallel {
        (0..n_runs).into_par_iter().map(one).collect()
    } else {
        (0..n_runs).map(one).collect()
    };
    let mut runs = Vec::new();
    let mut diverged = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(r) => runs.push(r),
            Err(Error::TrainingDiverged { doc_id }) => diverged.push(DivergedRun {
                seed: cfg.seed + i as u64,
                doc_id,
            }),
            Err(e) => return Err(e),
        }
    }
    let aggregate = if runs.is_empty() {
        None
    } else {
        Some(Aggregate::from_runs(&runs)?)
    };
    Ok(MultiSeedResult {
        runs,
        diverged,
        aggregate,
    })
}

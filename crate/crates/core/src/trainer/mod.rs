//! Cross-entropy loss, the per-document Adam training loop and the
//! multi-seed experiment harness.

mod harness;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use harness::{run_multi_seed, Aggregate, DivergedRun, MultiSeedResult};

use crate::corpus::{CoherenceClass, CorpusSplit, Document, WordVectors};
use crate::error::{Error, Result};
use crate::metrics::EvaluationReport;
use crate::model::{CoherenceModel, ModelKind, ModelSpec, PROB_FLOOR};
use crate::numcore::{adam_step, AdamState, Tape};
use crate::rst::build_relation_vocab;
use crate::tree_model::{AblationConfig, CoherenceDistribution};

/// `-ln p(label)`, with the probability floored at `1e-12`.
pub fn cross_entropy(dist: &CoherenceDistribution, label: CoherenceClass) -> f64 {
    -dist.prob(label).max(PROB_FLOOR).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub hidden: usize,
    pub relation_dim: usize,
    pub seed: u64,
    pub model: ModelKind,
    pub features: AblationConfig,
    /// Reshuffle the training documents every epoch.
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-4,
            epochs: 2,
            hidden: 100,
            relation_dim: 50,
            seed: 0,
            model: ModelKind::Rst,
            features: AblationConfig::FULL,
            shuffle: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config("learning_rate must be positive".into()));
        }
        if self.hidden == 0 || self.relation_dim == 0 || self.epochs == 0 {
            return Err(Error::Config("epochs, hidden and relation_dim must be positive".into()));
        }
        if self.model == ModelKind::Ensemble && self.features.e {
            return Err(Error::Config(
                "the ensemble initializes tree leaves with zeros; feature `e` is not allowed".into(),
            ));
        }
        Ok(())
    }

    pub fn model_spec(&self, word_dim: usize) -> ModelSpec {
        ModelSpec {
            kind: self.model,
            features: self.features,
            word_dim,
            hidden: self.hidden,
            relation_dim: self.relation_dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub report: EvaluationReport,
    /// Mean training loss of each epoch.
    pub epoch_losses: Vec<f64>,
}

/// Stateful training loop over one model.
pub struct Trainer<'a> {
    cfg: TrainConfig,
    model: CoherenceModel,
    adam: AdamState,
    step: u64,
    order: Vec<usize>,
    rng: ChaCha8Rng,
    docs: &'a [Document],
    wv: &'a WordVectors,
}

impl<'a> Trainer<'a> {
    /// Builds the relation vocabulary from `docs` and draws fresh parameters
    /// from `cfg.seed`.
    pub fn new(cfg: &TrainConfig, docs: &'a [Document], wv: &'a WordVectors) -> Result<Self> {
        cfg.validate()?;
        if docs.is_empty() {
            return Err(Error::Config("training split is empty".into()));
        }
        let vocab = build_relation_vocab(docs.iter().map(|d| &d.tree))?;
        let model = CoherenceModel::new(cfg.model_spec(wv.dim()), vocab, cfg.seed)?;
        let adam = AdamState::new(model.params());
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(1);
        Ok(Self {
            cfg: cfg.clone(),
            model,
            adam,
            step: 0,
            order: (0..docs.len()).collect(),
            rng,
            docs,
            wv,
        })
    }

    pub fn model(&self) -> &CoherenceModel {
        &self.model
    }

    pub fn into_model(self) -> CoherenceModel {
        self.model
    }

    /// One pass over the training documents, one Adam step per document.
    /// Returns the epoch's mean loss.
    pub fn run_epoch(&mut self) -> Result<f64> {
        if self.cfg.shuffle {
            self.order.shuffle(&mut self.rng);
        }
        let mut total = 0.0;
        for k in 0..self.order.len() {
            let doc = &self.docs[self.order[k]];
            let mut tape = Tape::new();
            let loss = self.model.loss(&mut tape, doc, self.wv)?;
            let value = tape.value(loss)[0];
            if !value.is_finite() {
                return Err(Error::TrainingDiverged {
                    doc_id: doc.id.clone(),
                });
            }
            tape.backward(loss, self.model.params_mut())?;
            self.step += 1;
            adam_step(self.model.params_mut(), &mut self.adam, self.step, self.cfg.learning_rate)?;
            total += value;
        }
        Ok(total / self.order.len() as f64)
    }
}

/// Trains for `cfg.epochs` epochs and evaluates on the test split.
pub fn train(
    cfg: &TrainConfig,
    split: &CorpusSplit,
    wv: &WordVectors,
) -> Result<(CoherenceModel, RunRecord)> {
    let mut trainer = Trainer::new(cfg, &split.train, wv)?;
    let epoch_losses = (0..cfg.epochs)
        .map(|_| trainer.run_epoch())
        .collect::<Result<Vec<_>>>()?;
    let model = trainer.into_model();
    let report = model.evaluate(&split.test, wv)?;
    Ok((
        model,
        RunRecord {
            seed: cfg.seed,
            report,
            epoch_losses,
        },
    ))
}

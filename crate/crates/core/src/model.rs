//! One type over the three model kinds, with loss, prediction, evaluation
//! and checkpoints.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Document, WordVectors};
use crate::error::{Error, Result};
use crate::metrics::{report, ConfusionMatrix, EvaluationReport};
use crate::numcore::{BundleRecord, ParameterBundle, Tape, Var};
use crate::parseq::{ensemble_logits, parseq_logits, EnsembleParams, ParseqParams};
use crate::rst::RelationVocabulary;
use crate::tree_model::{document_logits, AblationConfig, CoherenceDistribution, TreeModelParams};

/// Probability floor applied before the log in the cross-entropy.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[default]
    Rst,
    Parseq,
    Ensemble,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Rst => "rst",
            ModelKind::Parseq => "parseq",
            ModelKind::Ensemble => "ensemble",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rst" => Ok(ModelKind::Rst),
            "parseq" => Ok(ModelKind::Parseq),
            "ensemble" => Ok(ModelKind::Ensemble),
            other => Err(Error::Config(format!("unknown model kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// Ignored by ParSeq.
    pub features: AblationConfig,
    pub word_dim: usize,
    pub hidden: usize,
    pub relation_dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Layout {
    Rst(TreeModelParams),
    Parseq(ParseqParams),
    Ensemble(EnsembleParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceModel {
    spec: ModelSpec,
    vocab: RelationVocabulary,
    params: ParameterBundle,
    layout: Layout,
}

impl CoherenceModel {
    /// Fresh parameters drawn from `seed`.
    pub fn new(spec: ModelSpec, vocab: RelationVocabulary, seed: u64) -> Result<Self> {
        if spec.hidden == 0 || spec.relation_dim == 0 || spec.word_dim == 0 {
            return Err(Error::Config("model dimensions must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = ParameterBundle::new();
        let layout = match spec.kind {
            ModelKind::Rst => Layout::Rst(TreeModelParams::init(
                &mut params,
                spec.word_dim,
                spec.hidden,
                spec.relation_dim,
                vocab.clone(),
                spec.features,
                &mut rng,
            )?),
            ModelKind::Parseq => Layout::Parseq(ParseqParams::init(
                &mut params,
                spec.word_dim,
                spec.hidden,
                &mut rng,
            )?),
            ModelKind::Ensemble => Layout::Ensemble(EnsembleParams::init(
                &mut params,
                spec.word_dim,
                spec.hidden,
                spec.relation_dim,
                vocab.clone(),
                spec.features,
                &mut rng,
            )?),
        };
        Ok(Self {
            spec,
            vocab,
            params,
            layout,
        })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn vocabulary(&self) -> &RelationVocabulary {
        &self.vocab
    }

    pub fn params(&self) -> &ParameterBundle {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut ParameterBundle {
        &mut self.params
    }

    pub fn logits(&self, tape: &mut Tape, doc: &Document, wv: &WordVectors) -> Result<Var> {
        match &self.layout {
            Layout::Rst(m) => document_logits(tape, &self.params, m, &doc.tree, wv),
            Layout::Parseq(m) => parseq_logits(tape, &self.params, m, &doc.paragraphs, wv),
            Layout::Ensemble(m) => ensemble_logits(tape, &self.params, m, doc, wv),
        }
    }

    /// Scalar cross-entropy node `-ln max(p(label), 1e-12)`.
    pub fn loss(&self, tape: &mut Tape, doc: &Document, wv: &WordVectors) -> Result<Var> {
        let logits = self.logits(tape, doc, wv)?;
        let probs = tape.softmax(logits);
        tape.neg_log_at(probs, doc.label.index(), PROB_FLOOR)
    }

    pub fn predict(&self, doc: &Document, wv: &WordVectors) -> Result<CoherenceDistribution> {
        let mut tape = Tape::new();
        let logits = self.logits(&mut tape, doc, wv)?;
        Ok(CoherenceDistribution::from_logits(tape.value(logits)))
    }

    pub fn evaluate(&self, docs: &[Document], wv: &WordVectors) -> Result<EvaluationReport> {
        let mut cm = ConfusionMatrix::new();
        for d in docs {
            cm.add(d.label, self.predict(d, wv)?.argmax());
        }
        report(&cm)
    }

    pub fn to_checkpoint(&self) -> Checkpoint {
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            spec: self.spec.clone(),
            vocabulary: self.vocab.labels().to_vec(),
            parameters: BundleRecord::capture(&self.params),
        }
    }

    pub fn from_checkpoint(ckpt: &Checkpoint) -> Result<Self> {
        if ckpt.format != CHECKPOINT_FORMAT || ckpt.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint {} v{}",
                ckpt.format, ckpt.version
            )));
        }
        let vocab = RelationVocabulary::from_labels(ckpt.vocabulary.iter().cloned());
        if vocab.labels() != ckpt.vocabulary.as_slice() {
            return Err(Error::Checkpoint("vocabulary is not in canonical order".into()));
        }
        let mut model = Self::new(ckpt.spec.clone(), vocab, 0)?;
        ckpt.parameters.restore_into(&mut model.params)?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(&self.to_checkpoint())
            .map_err(|e| Error::Checkpoint(e.to_string()))?;
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let ckpt: Checkpoint =
            serde_json::from_str(&text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        Self::from_checkpoint(&ckpt)
    }
}

pub const CHECKPOINT_FORMAT: &str = "coherence-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

/// JSON checkpoint: model spec, vocabulary and every tensor by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub spec: ModelSpec,
    pub vocabulary: Vec<String>,
    pub parameters: BundleRecord,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{synthesize_corpus, synthesize_word_vectors, SynthConfig};
    use crate::rst::build_relation_vocab;

    #[test]
    fn checkpoint_round_trip_for_each_kind() {
        let cfg = SynthConfig {
            n_train: 4,
            n_test: 2,
            word_dim: 5,
            ..SynthConfig::default()
        };
        let split = synthesize_corpus(&cfg, 1).unwrap();
        let wv = synthesize_word_vectors(&cfg, 1).unwrap();
        let vocab = build_relation_vocab(split.train.iter().map(|d| &d.tree)).unwrap();
        for (kind, features) in [
            (ModelKind::Rst, AblationConfig::FULL),
            (ModelKind::Parseq, AblationConfig::T),
            (ModelKind::Ensemble, AblationConfig::T_NS_R),
        ] {
            let spec = ModelSpec {
                kind,
                features,
                word_dim: 5,
                hidden: 4,
                relation_dim: 3,
            };
            let model = CoherenceModel::new(spec, vocab.clone(), 11).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("m.json");
            model.save(&path).unwrap();
            let back = CoherenceModel::load(&path).unwrap();
            assert_eq!(back, model);
            let first = std::fs::read(&path).unwrap();
            back.save(&path).unwrap();
            assert_eq!(std::fs::read(&path).unwrap(), first);
            assert_eq!(
                back.predict(&split.test[0], &wv).unwrap(),
                model.predict(&split.test[0], &wv).unwrap()
            );
        }
    }

    #[test]
    fn ensemble_with_e_is_config_error() {
        let spec = ModelSpec {
            kind: ModelKind::Ensemble,
            features: AblationConfig::FULL,
            word_dim: 5,
            hidden: 4,
            relation_dim: 3,
        };
        let vocab = RelationVocabulary::from_labels(["A_N"]);
        assert!(matches!(CoherenceModel::new(spec, vocab, 0), Err(Error::Config(_))));
    }
}

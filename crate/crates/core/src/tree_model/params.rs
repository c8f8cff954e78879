use rand::Rng;
use serde::Serialize;

use super::ablation::AblationConfig;
use super::NUM_CLASSES;
use crate::edu_encoder::EduEncoderParams;
use crate::error::Result;
use crate::numcore::{AffineParams, ParamId, ParameterBundle};
use crate::rst::RelationVocabulary;

const EMBEDDING_INIT: f64 = 0.1;

/// Fused weights of the five TreeLSTM gates (input, left forget, right
/// forget, output, candidate) over `[h_l; h_r; r_l; r_r]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeCellParams {
    pub hidden_size: usize,
    pub label_dim: usize,
    pub weight: ParamId,
    pub bias: ParamId,
}

impl TreeCellParams {
    pub fn input_size(&self) -> usize {
        2 * self.hidden_size + 2 * self.label_dim
    }

    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        hidden: usize,
        label_dim: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let input = 2 * hidden + 2 * label_dim;
        let weight = params.insert_glorot("tree.cell.weight", 5 * hidden, input, input, hidden, rng)?;
        let bias = params.insert_zeros("tree.cell.bias", vec![5 * hidden])?;
        Ok(Self {
            hidden_size: hidden,
            label_dim,
            weight,
            bias,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelTables {
    pub dim: usize,
    pub vocab: RelationVocabulary,
    /// One row per vocabulary entry; present when relations are enabled.
    pub relation: Option<ParamId>,
    /// Rows for N and S; present when only nuclearity is enabled.
    pub nuclearity: Option<ParamId>,
}

impl LabelTables {
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        vocab: RelationVocabulary,
        dim: usize,
        abl: AblationConfig,
        rng: &mut R,
    ) -> Result<Self> {
        let relation = if abl.r {
            Some(params.insert_uniform("tree.labels.relation", vec![vocab.len(), dim], EMBEDDING_INIT, rng)?)
        } else {
            None
        };
        let nuclearity = if abl.ns && !abl.r {
            Some(params.insert_uniform("tree.labels.nuclearity", vec![2, dim], EMBEDDING_INIT, rng)?)
        } else {
            None
        };
        Ok(Self {
            dim,
            vocab,
            relation,
            nuclearity,
        })
    }
}

/// The tree half of the model: TreeLSTM cell and label tables.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeSide {
    pub cell: TreeCellParams,
    pub labels: LabelTables,
}

impl TreeSide {
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        hidden: usize,
        label_dim: usize,
        vocab: RelationVocabulary,
        abl: AblationConfig,
        rng: &mut R,
    ) -> Result<Self> {
        let cell = TreeCellParams::init(params, hidden, label_dim, rng)?;
        let labels = LabelTables::init(params, vocab, label_dim, abl, rng)?;
        Ok(Self { cell, labels })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeModelParams {
    pub ablation: AblationConfig,
    pub edu: Option<EduEncoderParams>,
    pub side: TreeSide,
    /// `[h_l; h_r]` → class logits.
    pub classifier: AffineParams,
}

impl TreeModelParams {
    /// Registers only the tensors the ablation row uses.
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        word_dim: usize,
        hidden: usize,
        label_dim: usize,
        vocab: RelationVocabulary,
        ablation: AblationConfig,
        rng: &mut R,
    ) -> Result<Self> {
        let edu = if ablation.e {
            Some(EduEncoderParams::init(params, word_dim, hidden, rng)?)
        } else {
            None
        };
        let side = TreeSide::init(params, hidden, label_dim, vocab, ablation, rng)?;
        let classifier = AffineParams::init(params, "classifier", 2 * hidden, NUM_CLASSES, rng)?;
        Ok(Self {
            ablation,
            edu,
            side,
            classifier,
        })
    }
}

/// Trainable scalar counts grouped by component (tensor name up to its
/// last `.`). Word vectors are frozen and never part of a bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterCount {
    pub components: Vec<(String, usize)>,
    pub total: usize,
}

impl ParameterCount {
    pub fn component(&self, name: &str) -> Option<usize> {
        self.components.iter().find(|(n, _)| n == name).map(|(_, c)| *c)
    }
}

pub fn count_parameters(params: &ParameterBundle) -> ParameterCount {
    let mut components: Vec<(String, usize)> = Vec::new();
    for (name, t) in params.iter() {
        let component = name.rsplit_once('.').map_or(name, |(head, _)| head);
        match components.iter_mut().find(|(n, _)| n == component) {
            Some((_, c)) => *c += t.len(),
            None => components.push((component.to_string(), t.len())),
        }
    }
    let total = components.iter().map(|(_, c)| c).sum();
    ParameterCount { components, total }
}

//! RST-Recursive: a binary TreeLSTM run bottom-up over the discourse tree,
//! with learned label embeddings entering each node and a softmax head over
//! the root's two child states.

mod ablation;
mod params;

use serde::{Deserialize, Serialize};

pub use ablation::AblationConfig;
pub use params::{count_parameters, LabelTables, ParameterCount, TreeCellParams, TreeModelParams, TreeSide};

use crate::corpus::{tokenize, CoherenceClass, WordVectors};
use crate::edu_encoder::{encode_edu, EduEncoderParams};
use crate::error::{Error, Result};
use crate::numcore::{softmax, ParameterBundle, Tape, Var};
use crate::rst::{validate_tree, Label, RstTree};

pub const NUM_CLASSES: usize = 3;

/// Softmax probabilities over coherence classes 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceDistribution(pub [f64; NUM_CLASSES]);

impl CoherenceDistribution {
    pub fn from_logits(logits: &[f64]) -> Self {
        let p = softmax(logits);
        Self([p[0], p[1], p[2]])
    }

    pub fn prob(&self, class: CoherenceClass) -> f64 {
        self.0[class.index()]
    }

    /// Most probable class; ties go to the lowest class.
    pub fn argmax(&self) -> CoherenceClass {
        let mut best = 0;
        for k in 1..NUM_CLASSES {
            if self.0[k] > self.0[best] {
                best = k;
            }
        }
        CoherenceClass::from_index(best)
    }
}

/// Embedding of a child's (relation, nuclearity) label under `abl`.
pub fn label_embedding(
    tape: &mut Tape,
    params: &ParameterBundle,
    tables: &LabelTables,
    label: &Label,
    abl: AblationConfig,
) -> Result<Var> {
    match (abl.ns, abl.r, tables.relation, tables.nuclearity) {
        (true, true, Some(table), _) => tape.row(params, table, tables.vocab.lookup(label)),
        (true, false, _, Some(table)) => tape.row(params, table, label.nuclearity.index()),
        (false, false, _, _) => Ok(tape.zeros(tables.dim)),
        _ => Err(Error::Config(format!(
            "label tables were not built for features {abl}"
        ))),
    }
}

/// Hidden and cell state of an encoded subtree, plus the number of nodes
/// visited to produce it.
#[derive(Debug, Clone, Copy)]
pub struct EncodedSubtree {
    pub h: Var,
    pub c: Var,
    pub visits: usize,
}

/// Everything a bottom-up pass needs besides the tree.
#[derive(Clone, Copy)]
pub struct TreeEncoder<'a> {
    pub params: &'a ParameterBundle,
    pub side: &'a TreeSide,
    /// `None` initializes leaves with zero vectors.
    pub edu: Option<&'a EduEncoderParams>,
    pub wv: &'a WordVectors,
    pub abl: AblationConfig,
}

impl TreeEncoder<'_> {
    fn leaf(&self, tape: &mut Tape, text: &str) -> Result<(Var, Var)> {
        let hidden = self.side.cell.hidden_size;
        match (self.abl.e, self.edu) {
            (true, Some(edu)) => encode_edu(tape, self.params, edu, &tokenize(text), self.wv),
            (true, None) => Err(Error::Config("EDU embeddings requested without an EDU encoder".into())),
            (false, _) => Ok((tape.zeros(hidden), tape.zeros(hidden))),
        }
    }

    /// Binary TreeLSTM node:
    /// `i, f_l, f_r, o = σ(W[h_l; h_r; r_l; r_r] + b)`, `u = tanh(…)`,
    /// `c = i⊙u + f_l⊙c_l + f_r⊙c_r`, `h = o⊙tanh(c)`.
    pub fn node(
        &self,
        tape: &mut Tape,
        (h_l, c_l, r_l): (Var, Var, Var),
        (h_r, c_r, r_r): (Var, Var, Var),
    ) -> Result<(Var, Var)> {
        let cell = &self.side.cell;
        let n = cell.hidden_size;
        let z = tape.affine(self.params, cell.weight, Some(cell.bias), &[h_l, h_r, r_l, r_r])?;
        let gate = |k: usize, tape: &mut Tape| tape.slice(z, k * n, n);
        let zi = gate(0, tape)?;
        let zfl = gate(1, tape)?;
        let zfr = gate(2, tape)?;
        let zo = gate(3, tape)?;
        let zu = gate(4, tape)?;
        let i = tape.sigmoid(zi);
        let f_l = tape.sigmoid(zfl);
        let f_r = tape.sigmoid(zfr);
        let o = tape.sigmoid(zo);
        let u = tape.tanh(zu);
        let iu = tape.mul(i, u)?;
        let fl = tape.mul(f_l, c_l)?;
        let fr = tape.mul(f_r, c_r)?;
        let c = tape.add(iu, fl)?;
        let c = tape.add(c, fr)?;
        let tc = tape.tanh(c);
        let h = tape.mul(o, tc)?;
        Ok((h, c))
    }

    fn encode(&self, tape: &mut Tape, t: &RstTree, visits: &mut usize) -> Result<(Var, Var)> {
        *visits += 1;
        match t {
            RstTree::Leaf(text) => self.leaf(tape, text),
            RstTree::Internal(n) => {
                let (h_l, c_l) = self.encode(tape, &n.left, visits)?;
                let (h_r, c_r) = self.encode(tape, &n.right, visits)?;
                let r_l = label_embedding(tape, self.params, &self.side.labels, &n.left_label, self.abl)?;
                let r_r = label_embedding(tape, self.params, &self.side.labels, &n.right_label, self.abl)?;
                self.node(tape, (h_l, c_l, r_l), (h_r, c_r, r_r))
            }
        }
    }

    /// Encodes `t` bottom-up, visiting each node exactly once.
    pub fn encode_subtree(&self, tape: &mut Tape, t: &RstTree) -> Result<EncodedSubtree> {
        let violations = validate_tree(t)
            .into_iter()
            .filter(|v| !matches!(v, crate::rst::Violation::DegenerateTree))
            .collect::<Vec<_>>();
        if let Some(v) = violations.first() {
            return Err(Error::Validation(v.to_string()));
        }
        let mut visits = 0;
        let (h, c) = self.encode(tape, t, &mut visits)?;
        Ok(EncodedSubtree { h, c, visits })
    }

    /// `[h_left, h_right]` of the root's two children.
    pub fn root_children(&self, tape: &mut Tape, t: &RstTree) -> Result<(Var, Var)> {
        let RstTree::Internal(root) = t else {
            return Err(Error::DegenerateTree);
        };
        let left = self.encode_subtree(tape, &root.left)?;
        let right = self.encode_subtree(tape, &root.right)?;
        Ok((left.h, right.h))
    }
}

/// Class logits of the RST-Recursive model.
pub fn document_logits(
    tape: &mut Tape,
    params: &ParameterBundle,
    model: &TreeModelParams,
    t: &RstTree,
    wv: &WordVectors,
) -> Result<Var> {
    let encoder = TreeEncoder {
        params,
        side: &model.side,
        edu: model.edu.as_ref(),
        wv,
        abl: model.ablation,
    };
    let (h_l, h_r) = encoder.root_children(tape, t)?;
    model.classifier.apply(tape, params, &[h_l, h_r])
}

pub fn classify_document(
    params: &ParameterBundle,
    model: &TreeModelParams,
    t: &RstTree,
    wv: &WordVectors,
) -> Result<CoherenceDistribution> {
    let mut tape = Tape::new();
    let logits = document_logits(&mut tape, params, model, t, wv)?;
    Ok(CoherenceDistribution::from_logits(tape.value(logits)))
}

//! EDU encoder: a unidirectional LSTM over an EDU's word vectors whose final
//! state initializes the corresponding tree leaf.

use rand::Rng;

use crate::corpus::WordVectors;
use crate::error::{Error, Result};
use crate::numcore::{lstm_sequence, LstmCellParams, ParameterBundle, Tape, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EduEncoderParams {
    pub cell: LstmCellParams,
}

impl EduEncoderParams {
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        word_dim: usize,
        hidden: usize,
        rng: &mut R,
    ) -> Result<Self> {
        Ok(Self {
            cell: LstmCellParams::init(params, "edu.lstm", word_dim, hidden, rng)?,
        })
    }
}

/// Pushes one constant node per token (zeros for tokens without a vector).
pub(crate) fn word_inputs<S: AsRef<str>>(
    tape: &mut Tape,
    tokens: &[S],
    wv: &WordVectors,
) -> Vec<Var> {
    tokens
        .iter()
        .map(|t| tape.constant(wv.lookup(t.as_ref()).to_vec()))
        .collect()
}

/// Returns the final hidden state (the EDU embedding) and the final cell
/// state, which becomes the leaf's cell state.
pub fn encode_edu<S: AsRef<str>>(
    tape: &mut Tape,
    params: &ParameterBundle,
    encoder: &EduEncoderParams,
    tokens: &[S],
    wv: &WordVectors,
) -> Result<(Var, Var)> {
    if wv.dim() != encoder.cell.input_size {
        return Err(Error::Dimension {
            context: "word vectors vs EDU encoder input",
            expected: encoder.cell.input_size,
            actual: wv.dim(),
        });
    }
    let inputs = word_inputs(tape, tokens, wv);
    lstm_sequence(tape, params, &encoder.cell, &inputs)
}

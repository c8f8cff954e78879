//! ParSeq: three stacked LSTMs (words → sentence, sentences → paragraph,
//! paragraphs → document), each pooled by its final hidden state.

mod ensemble;

use rand::Rng;

pub use ensemble::{classify_ensemble, ensemble_logits, EnsembleParams};

use crate::corpus::{Paragraphs, WordVectors};
use crate::edu_encoder::word_inputs;
use crate::error::{Error, Result};
use crate::numcore::{lstm_sequence, AffineParams, LstmCellParams, ParameterBundle, Tape, Var};
use crate::tree_model::{CoherenceDistribution, NUM_CLASSES};

/// The three stacked cells, without a classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseqEncoder {
    pub lstm1: LstmCellParams,
    pub lstm2: LstmCellParams,
    pub lstm3: LstmCellParams,
}

impl ParseqEncoder {
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        word_dim: usize,
        hidden: usize,
        rng: &mut R,
    ) -> Result<Self> {
        Ok(Self {
            lstm1: LstmCellParams::init(params, "parseq.lstm1", word_dim, hidden, rng)?,
            lstm2: LstmCellParams::init(params, "parseq.lstm2", hidden, hidden, rng)?,
            lstm3: LstmCellParams::init(params, "parseq.lstm3", hidden, hidden, rng)?,
        })
    }

    pub fn hidden_size(&self) -> usize {
        self.lstm3.hidden_size
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseqParams {
    pub encoder: ParseqEncoder,
    pub classifier: AffineParams,
}

impl ParseqParams {
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        word_dim: usize,
        hidden: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let encoder = ParseqEncoder::init(params, word_dim, hidden, rng)?;
        let classifier = AffineParams::init(params, "classifier", hidden, NUM_CLASSES, rng)?;
        Ok(Self {
            encoder,
            classifier,
        })
    }
}

/// Document vector: final hidden state of the paragraph-level LSTM.
pub fn encode_parseq(
    tape: &mut Tape,
    params: &ParameterBundle,
    encoder: &ParseqEncoder,
    paragraphs: &Paragraphs,
    wv: &WordVectors,
) -> Result<Var> {
    if paragraphs.iter().all(|p| p.is_empty()) {
        return Err(Error::EmptyDocument);
    }
    if wv.dim() != encoder.lstm1.input_size {
        return Err(Error::Dimension {
            context: "word vectors vs ParSeq input",
            expected: encoder.lstm1.input_size,
            actual: wv.dim(),
        });
    }
    let mut paragraph_vectors = Vec::with_capacity(paragraphs.len());
    for paragraph in paragraphs.iter().filter(|p| !p.is_empty()) {
        let mut sentence_vectors = Vec::with_capacity(paragraph.len());
        for sentence in paragraph {
            let words = word_inputs(tape, sentence, wv);
            let (h, _) = lstm_sequence(tape, params, &encoder.lstm1, &words)?;
            sentence_vectors.push(h);
        }
        let (h, _) = lstm_sequence(tape, params, &encoder.lstm2, &sentence_vectors)?;
        paragraph_vectors.push(h);
    }
    let (d, _) = lstm_sequence(tape, params, &encoder.lstm3, &paragraph_vectors)?;
    Ok(d)
}

pub fn parseq_logits(
    tape: &mut Tape,
    params: &ParameterBundle,
    model: &ParseqParams,
    paragraphs: &Paragraphs,
    wv: &WordVectors,
) -> Result<Var> {
    let d = encode_parseq(tape, params, &model.encoder, paragraphs, wv)?;
    model.classifier.apply(tape, params, &[d])
}

pub fn classify_parseq(
    params: &ParameterBundle,
    model: &ParseqParams,
    paragraphs: &Paragraphs,
    wv: &WordVectors,
) -> Result<CoherenceDistribution> {
    let mut tape = Tape::new();
    let logits = parseq_logits(&mut tape, params, model, paragraphs, wv)?;
    Ok(CoherenceDistribution::from_logits(tape.value(logits)))
}

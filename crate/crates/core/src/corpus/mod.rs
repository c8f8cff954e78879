//! Documents, word vectors, segmentation, ingestion and the synthetic
//! corpus generator.

mod document;
mod ingest;
mod segment;
mod synth;
mod vectors;

pub use document::{CoherenceClass, Document, Paragraphs};
pub use ingest::{load_corpus, write_corpus, CorpusSplit, Exclusion, SplitName};
pub use segment::{join_segments, segment, tokenize};
pub use synth::{
    default_labels, synthesize_corpus, synthesize_word_vectors, token_pool, SynthConfig,
};
pub use vectors::{load_word_vectors, WordVectors, DEFAULT_WORD_DIM};

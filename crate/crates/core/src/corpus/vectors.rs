use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_WORD_DIM: usize = 300;

/// Frozen pretrained word vectors. Tokens without a vector read as zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct WordVectors {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
    zero: Vec<f64>,
}

impl WordVectors {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: HashMap::new(),
            zero: vec![0.0; dim],
        }
    }

    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::Format(format!(
                "vector of length {} in a {}-dimensional table",
                vector.len(),
                self.dim
            )));
        }
        self.vectors.insert(token.into(), vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vectors.contains_key(token)
    }

    pub fn lookup(&self, token: &str) -> &[f64] {
        self.vectors.get(token).unwrap_or(&self.zero)
    }

    /// Writes the standard `token v1 … vD` text format, tokens sorted.
    pub fn to_text(&self) -> String {
        let mut tokens: Vec<&String> = self.vectors.keys().collect();
        tokens.sort();
        let mut out = String::new();
        for t in tokens {
            out.push_str(t);
            for v in &self.vectors[t] {
                out.push(' ');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Reads `token v1 … vD` lines, keeping only tokens in `vocab` (all tokens
/// when `vocab` is `None`).
///
/// With `dim` unset the dimension is taken from the first vector line; every
/// line must agree with it either way.
pub fn load_word_vectors(
    path: &Path,
    vocab: Option<&HashSet<String>>,
    dim: Option<usize>,
) -> Result<WordVectors> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut expected = dim;
    let mut table: Option<WordVectors> = dim.map(WordVectors::new);
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let mut fields = line.split_whitespace();
        let Some(token) = fields.next() else { continue };
        let values: Vec<&str> = fields.collect();
        // word2vec-style "count dim" header
        if i == 0 && values.len() == 1 && token.parse::<usize>().is_ok() && values[0].parse::<usize>().is_ok() {
            continue;
        }
        let d = *expected.get_or_insert(values.len());
        if values.len() != d {
            return Err(Error::Format(format!(
                "{}:{}: expected {d} values, found {}",
                path.display(),
                i + 1,
                values.len()
            )));
        }
        if vocab.is_some_and(|v| !v.contains(token)) {
            continue;
        }
        let vector = values
            .iter()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Format(format!("{}:{}: {e}", path.display(), i + 1)))?;
        table
            .get_or_insert_with(|| WordVectors::new(d))
            .insert(token, vector)?;
    }
    Ok(table.unwrap_or_else(|| WordVectors::new(expected.unwrap_or(DEFAULT_WORD_DIM))))
}

use std::fmt;

use serde::{Deserialize, Serialize};

use super::segment::tokenize;
use crate::rst::RstTree;

/// Paragraph → sentence → tokens.
pub type Paragraphs = Vec<Vec<Vec<String>>>;

/// Coherence class, serialized as its GCDC integer label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum CoherenceClass {
    Incoherent = 1,
    Neutral = 2,
    Coherent = 3,
}

impl CoherenceClass {
    pub const ALL: [CoherenceClass; 3] = [
        CoherenceClass::Incoherent,
        CoherenceClass::Neutral,
        CoherenceClass::Coherent,
    ];

    pub fn from_label(label: i64) -> Option<Self> {
        match label {
            1 => Some(CoherenceClass::Incoherent),
            2 => Some(CoherenceClass::Neutral),
            3 => Some(CoherenceClass::Coherent),
            _ => None,
        }
    }

    /// Zero-based index (class 1 → 0).
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    pub fn label(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for CoherenceClass {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        Self::from_label(v as i64).ok_or_else(|| format!("coherence label must be 1, 2 or 3, got {v}"))
    }
}

impl From<CoherenceClass> for u8 {
    fn from(c: CoherenceClass) -> u8 {
        c.label()
    }
}

impl fmt::Display for CoherenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub label: CoherenceClass,
    pub text: String,
    pub paragraphs: Paragraphs,
    pub tree: RstTree,
}

impl Document {
    /// Token lists of the tree's EDUs, left to right.
    pub fn edu_tokens(&self) -> Vec<Vec<String>> {
        self.tree.edus().into_iter().map(tokenize).collect()
    }

    pub fn sentence_count(&self) -> usize {
        self.paragraphs.iter().map(Vec::len).sum()
    }
}

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::document::{CoherenceClass, Document, Paragraphs};
use super::segment::segment;
use crate::error::{Error, Result};
use crate::rst::{parse_tree_file, serialize_tree, validate_tree, RstTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitName {
    #[default]
    Train,
    Test,
}

/// Why a document was left out of the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub id: String,
    pub split: SplitName,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusSplit {
    pub train: Vec<Document>,
    pub test: Vec<Document>,
    pub exclusions: Vec<Exclusion>,
}

impl CorpusSplit {
    pub fn retained(&self) -> usize {
        self.train.len() + self.test.len()
    }

    /// Documents seen at ingestion: retained plus excluded.
    pub fn input_count(&self) -> usize {
        self.retained() + self.exclusions.len()
    }

    pub fn excluded_in(&self, split: SplitName) -> usize {
        self.exclusions.iter().filter(|e| e.split == split).count()
    }

    /// Fraction of `split`'s input documents that were retained.
    pub fn retention_rate(&self, split: SplitName) -> f64 {
        let kept = match split {
            SplitName::Train => self.train.len(),
            SplitName::Test => self.test.len(),
        };
        let total = kept + self.excluded_in(split);
        if total == 0 {
            0.0
        } else {
            kept as f64 / total as f64
        }
    }

    pub fn all_documents(&self) -> impl Iterator<Item = &Document> {
        self.train.iter().chain(self.test.iter())
    }
}

#[derive(Debug, Deserialize)]
struct RawDocument {
    id: String,
    label: i64,
    text: String,
    #[serde(default)]
    paragraphs: Option<Paragraphs>,
    #[serde(default)]
    split: SplitName,
}

enum TreeEntry {
    Parsed(RstTree),
    Unparsed(String),
}

/// Joins a JSON Lines documents file with a tree file by document id.
///
/// Documents whose tree is missing, unparseable or fails validation are
/// dropped and logged in [`CorpusSplit::exclusions`].
pub fn load_corpus(docs_path: &Path, trees_path: &Path) -> Result<CorpusSplit> {
    let trees_text = std::fs::read_to_string(trees_path).map_err(|e| Error::io(trees_path, e))?;
    let mut trees: HashMap<String, TreeEntry> = HashMap::new();
    for line in parse_tree_file(&trees_text) {
        let Some(id) = line.id else {
            return Err(Error::Ingest {
                path: trees_path.to_path_buf(),
                line: line.line,
                message: "tree line has no `id<TAB>` prefix".into(),
            });
        };
        let entry = match line.tree {
            Ok(t) => TreeEntry::Parsed(t),
            Err(e) => TreeEntry::Unparsed(e.to_string()),
        };
        if trees.insert(id.clone(), entry).is_some() {
            return Err(Error::DuplicateId(id));
        }
    }

    let docs_text = std::fs::read_to_string(docs_path).map_err(|e| Error::io(docs_path, e))?;
    let mut split = CorpusSplit::default();
    let mut seen = HashSet::new();
    for (i, line) in docs_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let ingest_err = |message: String| Error::Ingest {
            path: docs_path.to_path_buf(),
            line: i + 1,
            message,
        };
        let raw: RawDocument = serde_json::from_str(line).map_err(|e| ingest_err(e.to_string()))?;
        let label = CoherenceClass::from_label(raw.label)
            .ok_or_else(|| ingest_err(format!("label must be 1, 2 or 3, got {}", raw.label)))?;
        if !seen.insert(raw.id.clone()) {
            return Err(Error::DuplicateId(raw.id));
        }
        let exclude = |reason: String| Exclusion {
            id: raw.id.clone(),
            split: raw.split,
            reason,
        };
        let tree = match trees.remove(&raw.id) {
            None => {
                split.exclusions.push(exclude("no tree".into()));
                continue;
            }
            Some(TreeEntry::Unparsed(msg)) => {
                split.exclusions.push(exclude(format!("tree did not parse: {msg}")));
                continue;
            }
            Some(TreeEntry::Parsed(t)) => t,
        };
        let violations = validate_tree(&tree);
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            split.exclusions.push(exclude(format!("invalid tree: {}", list.join("; "))));
            continue;
        }
        let paragraphs = match raw.paragraphs {
            Some(p) if p.iter().flatten().flatten().next().is_some() => p,
            Some(_) => {
                split.exclusions.push(exclude("empty paragraphs override".into()));
                continue;
            }
            None => match segment(&raw.text) {
                Ok(p) => p,
                Err(e) => {
                    split.exclusions.push(exclude(e.to_string()));
                    continue;
                }
            },
        };
        let doc = Document {
            id: raw.id,
            label,
            text: raw.text,
            paragraphs,
            tree,
        };
        match raw.split {
            SplitName::Train => split.train.push(doc),
            SplitName::Test => split.test.push(doc),
        }
    }
    Ok(split)
}

#[derive(Serialize)]
struct DocumentRecord<'a> {
    id: &'a str,
    label: CoherenceClass,
    text: &'a str,
    split: SplitName,
    #[serde(skip_serializing_if = "Option::is_none")]
    paragraphs: Option<&'a Paragraphs>,
}

/// Writes the documents file and the `id<TAB>tree` file read by
/// [`load_corpus`]. Exclusions are not written.
pub fn write_corpus(split: &CorpusSplit, docs_path: &Path, trees_path: &Path) -> Result<()> {
    let mut docs = String::new();
    let mut trees = String::new();
    let tagged = split
        .train
        .iter()
        .map(|d| (d, SplitName::Train))
        .chain(split.test.iter().map(|d| (d, SplitName::Test)));
    for (doc, name) in tagged {
        let resegmented = segment(&doc.text).ok();
        let record = DocumentRecord {
            id: &doc.id,
            label: doc.label,
            text: &doc.text,
            split: name,
            paragraphs: (resegmented.as_ref() != Some(&doc.paragraphs)).then_some(&doc.paragraphs),
        };
        docs.push_str(&serde_json::to_string(&record).map_err(|e| Error::Format(e.to_string()))?);
        docs.push('\n');
        trees.push_str(&doc.id);
        trees.push('\t');
        trees.push_str(&serialize_tree(&doc.tree));
        trees.push('\n');
    }
    std::fs::write(docs_path, docs).map_err(|e| Error::io(docs_path, e))?;
    std::fs::write(trees_path, trees).map_err(|e| Error::io(trees_path, e))?;
    Ok(())
}

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use super::tree::{Label, RstTree};
use crate::error::{Error, Result};

pub const UNK: &str = "UNK";

/// Frozen map from combined `Relation_N|S` labels to embedding rows.
/// Row 0 is always the reserved unknown label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationVocabulary {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl RelationVocabulary {
    /// `UNK` followed by the given labels, sorted and deduplicated.
    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = labels
            .into_iter()
            .map(Into::into)
            .filter(|l| l != UNK)
            .collect();
        let labels: Vec<String> = std::iter::once(UNK.to_string()).chain(set).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Self { labels, index }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Never true: `UNK` is always present.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Row for a combined label; unseen labels map to `UNK` (row 0).
    pub fn index_of(&self, combined: &str) -> usize {
        self.index.get(combined).copied().unwrap_or(0)
    }

    pub fn lookup(&self, label: &Label) -> usize {
        self.index_of(&label.combined())
    }

    pub fn to_file_string(&self) -> String {
        let mut s = self.labels.join("\n");
        s.push('\n');
        s
    }

    pub fn parse_file_string(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(UNK) {
            return Err(Error::Format("vocabulary file must start with UNK".into()));
        }
        let rest: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
        let vocab = Self::from_labels(rest.iter().copied());
        if vocab.len() != rest.len() + 1 {
            return Err(Error::Format("vocabulary file has duplicate labels".into()));
        }
        Ok(vocab)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_file_string(&text)
    }
}

pub fn build_relation_vocab<'a, I>(trees: I) -> Result<RelationVocabulary>
where
    I: IntoIterator<Item = &'a RstTree>,
{
    let mut labels = BTreeSet::new();
    let mut any = false;
    for t in trees {
        any = true;
        labels.extend(t.labels().into_iter().map(Label::combined));
    }
    if !any {
        return Err(Error::EmptyVocab);
    }
    Ok(RelationVocabulary::from_labels(labels))
}

//! Synthetic corpus with a planted relation-label signal.
//!
//! Tree shapes and EDU texts are drawn independently of the class, so only
//! the relation labels carry information. Class 1 draws every label
//! uniformly; classes 2 and 3 each own a disjoint "pattern" subset and draw
//! from it with probability `signal`, uniformly otherwise.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::document::{CoherenceClass, Document};
use super::ingest::CorpusSplit;
use super::segment::segment;
use super::vectors::WordVectors;
use crate::error::{Error, Result};
use crate::rst::{Label, Nuclearity, RstTree};

const TOKEN_POOL: [&str; 48] = [
    "the", "a", "we", "they", "it", "this", "that", "there", "report", "meeting", "email", "team",
    "office", "plan", "order", "price", "food", "service", "staff", "question", "answer", "time",
    "day", "week", "was", "is", "will", "could", "should", "said", "sent", "asked", "found",
    "made", "good", "late", "new", "small", "great", "quick", "again", "today", "soon", "also",
    "then", "because", "but", "and",
];

/// Mononuclear relations appear with both nuclearities; multinuclear ones
/// only as nuclei. 13 × 2 + 5 = 31 combined labels.
const MONONUCLEAR: [&str; 13] = [
    "Attribution", "Background", "Cause", "Comparison", "Condition", "Contrast", "Elaboration",
    "Enablement", "Evaluation", "Explanation", "Manner-Means", "Summary", "Topic-Comment",
];
const MULTINUCLEAR: [&str; 5] = ["Joint", "Same-Unit", "Temporal", "Textual-Organization", "Topic-Change"];

pub fn default_labels() -> Vec<String> {
    let mut out = Vec::new();
    for r in MONONUCLEAR {
        out.push(format!("{r}_N"));
        out.push(format!("{r}_S"));
    }
    out.extend(MULTINUCLEAR.iter().map(|r| format!("{r}_N")));
    out
}

pub fn token_pool() -> &'static [&'static str] {
    &TOKEN_POOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub n_train: usize,
    pub n_test: usize,
    /// Combined `Relation_N` / `Relation_S` labels.
    pub labels: Vec<String>,
    /// Size of each class's pattern subset.
    pub pattern_size: usize,
    /// Probability that a class-2/3 label comes from the class's pattern subset.
    pub signal: f64,
    /// Prior probabilities of classes 1, 2, 3.
    pub class_priors: [f64; 3],
    pub min_edus: usize,
    pub max_edus: usize,
    pub min_edu_tokens: usize,
    pub max_edu_tokens: usize,
    /// Dimension of the generated word vectors.
    pub word_dim: usize,
    /// Probability of a paragraph break after each EDU.
    pub paragraph_break: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_train: 300,
            n_test: 150,
            labels: default_labels(),
            pattern_size: 5,
            signal: 0.9,
            class_priors: [1.0 / 3.0; 3],
            min_edus: 4,
            max_edus: 16,
            min_edu_tokens: 2,
            max_edu_tokens: 6,
            word_dim: 300,
            paragraph_break: 0.25,
        }
    }
}

fn parse_combined(label: &str) -> Result<Label> {
    let (rel, nuc) = label
        .rsplit_once('_')
        .ok_or_else(|| Error::Config(format!("label `{label}` is not of the form Relation_N|S")))?;
    let nuclearity = match nuc {
        "N" => Nuclearity::N,
        "S" => Nuclearity::S,
        _ => return Err(Error::Config(format!("label `{label}` has bad nuclearity"))),
    };
    if !crate::rst::is_relation_name(rel) {
        return Err(Error::Config(format!("label `{label}` has a malformed relation")));
    }
    Ok(Label::new(rel, nuclearity))
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.signal) {
            return Err(Error::Config(format!("signal strength {} outside [0, 1]", self.signal)));
        }
        if !(0.0..=1.0).contains(&self.paragraph_break) {
            return Err(Error::Config("paragraph_break outside [0, 1]".into()));
        }
        if self.pattern_size == 0 || 2 * self.pattern_size > self.labels.len() {
            return Err(Error::Config(format!(
                "need two disjoint pattern subsets of size {} from {} labels",
                self.pattern_size,
                self.labels.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &self.labels {
            parse_combined(l)?;
            if !seen.insert(l) {
                return Err(Error::Config(format!("duplicate label `{l}`")));
            }
        }
        if self.class_priors.iter().any(|p| !(p.is_finite() && *p >= 0.0))
            || self.class_priors.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::Config("class priors must be non-negative with positive sum".into()));
        }
        if self.min_edus < 2 || self.max_edus < self.min_edus {
            return Err(Error::Config("need 2 <= min_edus <= max_edus".into()));
        }
        if self.min_edu_tokens < 1 || self.max_edu_tokens < self.min_edu_tokens {
            return Err(Error::Config("need 1 <= min_edu_tokens <= max_edu_tokens".into()));
        }
        if self.word_dim == 0 {
            return Err(Error::Config("word_dim must be positive".into()));
        }
        Ok(())
    }

    /// Indices into `labels` of the pattern subset owned by `class`
    /// (empty for class 1).
    pub fn pattern(&self, class: CoherenceClass) -> std::ops::Range<usize> {
        let k = self.pattern_size;
        match class {
            CoherenceClass::Incoherent => 0..0,
            CoherenceClass::Coherent => 0..k,
            CoherenceClass::Neutral => k..2 * k,
        }
    }

    /// Probability of each label (in `labels` order) for a child of a
    /// `class` document.
    pub fn label_distribution(&self, class: CoherenceClass) -> Vec<f64> {
        let n = self.labels.len() as f64;
        let pattern = self.pattern(class);
        let mix = if pattern.is_empty() { 0.0 } else { self.signal };
        (0..self.labels.len())
            .map(|i| {
                let planted = if pattern.contains(&i) {
                    mix / pattern.len() as f64
                } else {
                    0.0
                };
                planted + (1.0 - mix) / n
            })
            .collect()
    }
}

struct Generator<'a> {
    cfg: &'a SynthConfig,
    labels: Vec<Label>,
    rng: ChaCha8Rng,
}

impl Generator<'_> {
    fn draw_label(&mut self, class: CoherenceClass) -> Label {
        let pattern = self.cfg.pattern(class);
        let idx = if !pattern.is_empty() && self.rng.gen_bool(self.cfg.signal) {
            self.rng.gen_range(pattern)
        } else {
            self.rng.gen_range(0..self.labels.len())
        };
        self.labels[idx].clone()
    }

    fn edu_text(&mut self) -> String {
        let n = self.rng.gen_range(self.cfg.min_edu_tokens..=self.cfg.max_edu_tokens);
        let words: Vec<&str> = (0..n)
            .map(|_| TOKEN_POOL[self.rng.gen_range(0..TOKEN_POOL.len())])
            .collect();
        let mut s = words.join(" ");
        s[..1].make_ascii_uppercase();
        s.push('.');
        s
    }

    fn tree(&mut self, edus: &[String], class: CoherenceClass) -> RstTree {
        if edus.len() == 1 {
            return RstTree::leaf(edus[0].clone());
        }
        let split = self.rng.gen_range(1..edus.len());
        let left_label = self.draw_label(class);
        let right_label = self.draw_label(class);
        let left = self.tree(&edus[..split], class);
        let right = self.tree(&edus[split..], class);
        RstTree::internal(left_label, right_label, left, right)
    }

    fn document(&mut self, id: String, classes: &WeightedIndex<f64>) -> Result<Document> {
        let label = CoherenceClass::from_index(classes.sample(&mut self.rng));
        let n = self.rng.gen_range(self.cfg.min_edus..=self.cfg.max_edus);
        let edus: Vec<String> = (0..n).map(|_| self.edu_text()).collect();
        let mut text = String::new();
        for (i, e) in edus.iter().enumerate() {
            if i > 0 {
                text.push_str(if self.rng.gen_bool(self.cfg.paragraph_break) {
                    "\n\n"
                } else {
                    " "
                });
            }
            text.push_str(e);
        }
        let tree = self.tree(&edus, label);
        let paragraphs = segment(&text)?;
        Ok(Document {
            id,
            label,
            text,
            paragraphs,
            tree,
        })
    }
}

pub fn synthesize_corpus(cfg: &SynthConfig, seed: u64) -> Result<CorpusSplit> {
    cfg.validate()?;
    let labels = cfg
        .labels
        .iter()
        .map(|l| parse_combined(l))
        .collect::<Result<Vec<_>>>()?;
    let classes = WeightedIndex::new(cfg.class_priors).map_err(|e| Error::Config(e.to_string()))?;
    let mut g = Generator {
        cfg,
        labels,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut split = CorpusSplit::default();
    for i in 0..cfg.n_train {
        split.train.push(g.document(format!("synth-train-{i:05}"), &classes)?);
    }
    for i in 0..cfg.n_test {
        split.test.push(g.document(format!("synth-test-{i:05}"), &classes)?);
    }
    Ok(split)
}

/// Random vectors in `±0.5` for every pool token.
pub fn synthesize_word_vectors(cfg: &SynthConfig, seed: u64) -> Result<WordVectors> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005E_ED0F_70C3);
    let mut wv = WordVectors::new(cfg.word_dim);
    for t in TOKEN_POOL {
        let v = (0..cfg.word_dim).map(|_| rng.gen_range(-0.5..0.5)).collect();
        wv.insert(t, v)?;
    }
    Ok(wv)
}

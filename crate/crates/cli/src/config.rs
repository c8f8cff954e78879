use std::collections::HashSet;
use std::path::{Path, PathBuf};

use coherence::corpus::{
    load_corpus, load_word_vectors, synthesize_corpus, synthesize_word_vectors, CorpusSplit,
    SynthConfig, WordVectors,
};
use coherence::metrics::MajorityPolicy;
use coherence::trainer::TrainConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::Overrides;

/// Everything a command needs, read from one JSON file. Without a
/// `documents` path the synthetic generator supplies the corpus and the
/// word vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalConfig {
    pub documents: Option<PathBuf>,
    pub trees: Option<PathBuf>,
    pub word_vectors: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub train: TrainConfig,
    pub generator: SynthConfig,
    pub generator_seed: u64,
    pub n_runs: usize,
    pub majority: MajorityPolicy,
    /// Run seeds concurrently; results do not depend on it.
    pub parallel: bool,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        Self {
            documents: None,
            trees: None,
            word_vectors: None,
            out_dir: PathBuf::from("out"),
            train: TrainConfig::default(),
            generator: SynthConfig::default(),
            generator_seed: 0,
            n_runs: 1,
            majority: MajorityPolicy::default(),
            parallel: true,
        }
    }
}

impl GlobalConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> CliResult<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => GlobalConfig::default(),
        };
        if let Some(m) = overrides.model {
            cfg.train.model = m;
        }
        if let Some(f) = overrides.features {
            cfg.train.features = f;
        }
        if let Some(n) = overrides.runs {
            cfg.n_runs = n;
        }
        if let Some(s) = overrides.seed {
            cfg.train.seed = s;
        }
        if let Some(o) = &overrides.out {
            cfg.out_dir = o.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.train.validate()?;
        self.generator.validate()?;
        if self.n_runs == 0 {
            return Err(CliError::Config("n_runs must be at least 1".into()));
        }
        match (&self.documents, &self.trees, &self.word_vectors) {
            (Some(_), Some(_), Some(_)) | (None, None, None) => {}
            (Some(_), _, _) => {
                return Err(CliError::Config(
                    "`documents` needs `trees` and `word_vectors` as well".into(),
                ))
            }
            _ => {
                return Err(CliError::Config(
                    "`trees` and `word_vectors` are only used together with `documents`".into(),
                ))
            }
        }
        for p in [&self.documents, &self.trees, &self.word_vectors].into_iter().flatten() {
            if !p.exists() {
                return Err(CliError::Data(format!("{}: no such file", p.display())));
            }
        }
        Ok(())
    }

    /// Corpus and word vectors, ingested or generated.
    pub fn data(&self) -> CliResult<(CorpusSplit, WordVectors)> {
        match (&self.documents, &self.trees, &self.word_vectors) {
            (Some(docs), Some(trees), Some(vectors)) => {
                let split = load_corpus(docs, trees)?;
                if split.train.is_empty() || split.test.is_empty() {
                    return Err(CliError::Data(
                        "both the train and the test split need at least one document".into(),
                    ));
                }
                let tokens: HashSet<String> = split
                    .all_documents()
                    .flat_map(|d| {
                        let mut t: Vec<String> = d.paragraphs.iter().flatten().flatten().cloned().collect();
                        t.extend(d.edu_tokens().into_iter().flatten());
                        t
                    })
                    .collect();
                let wv = load_word_vectors(vectors, Some(&tokens), None)?;
                Ok((split, wv))
            }
            _ => Ok((
                synthesize_corpus(&self.generator, self.generator_seed)?,
                synthesize_word_vectors(&self.generator, self.generator_seed)?,
            )),
        }
    }
}

use std::fmt::Write as _;
use std::path::Path;

use coherence::corpus::{write_corpus, CorpusSplit, WordVectors};
use coherence::metrics::{majority_baseline, ConfidenceInterval, EvaluationReport};
use coherence::model::{CoherenceModel, ModelKind};
use coherence::rst::{read_tree_file, validate_tree};
use coherence::trainer::{run_multi_seed, train, Aggregate, MultiSeedResult, TrainConfig};
use coherence::tree_model::AblationConfig;
use serde::Serialize;
use serde_json::json;

use crate::config::GlobalConfig;
use crate::error::{CliError, CliResult};

fn write(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> CliResult<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn create_out_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes") + "\n"
}

fn pct(ci: &ConfidenceInterval) -> String {
    format!("{:.2} ± {:.2}", 100.0 * ci.mean, 100.0 * ci.halfwidth)
}

/// Runs the multi-seed harness for the configured model and writes
/// `runs.jsonl`, `summary.json`, `checkpoint.json` and `config.json`.
pub fn train_eval(cfg: &GlobalConfig) -> CliResult<String> {
    let (split, wv) = cfg.data()?;
    let result = run_multi_seed(&cfg.train, &split, &wv, cfg.n_runs, cfg.parallel)?;
    let Some(aggregate) = &result.aggregate else {
        return Err(CliError::Diverged(format!("all {} runs diverged", cfg.n_runs)));
    };
    let best = result.best_run().expect("an aggregate implies a completed run");
    // Training is deterministic per seed, so retraining reproduces the
    // best run's parameters exactly.
    let (model, record) = train(&TrainConfig { seed: best.seed, ..cfg.train.clone() }, &split, &wv)?;
    debug_assert_eq!(&record, best);

    create_out_dir(&cfg.out_dir)?;
    write(&cfg.out_dir, "runs.jsonl", result.run_log())?;
    write(
        &cfg.out_dir,
        "summary.json",
        to_json(&json!({
            "config": cfg,
            "aggregate": aggregate,
            "diverged": result.diverged,
            "best_seed": best.seed,
            "best_report": best.report,
        })),
    )?;
    model.save(&cfg.out_dir.join("checkpoint.json"))?;
    write(&cfg.out_dir, "config.json", to_json(cfg))?;

    let mut out = format!(
        "model {}  features {}  runs {} ({} diverged)\n",
        cfg.train.model,
        cfg.train.features,
        aggregate.runs,
        result.diverged.len()
    );
    for (name, ci) in [
        ("accuracy", &aggregate.accuracy),
        ("weighted F1", &aggregate.weighted_f1),
        ("macro F1", &aggregate.macro_f1),
    ] {
        writeln!(out, "{name:<12} {}", pct(ci)).unwrap();
    }
    Ok(out)
}

/// Scores a saved checkpoint on the configured test split and writes
/// `evaluation.json`.
pub fn evaluate(cfg: &GlobalConfig, checkpoint: &Path) -> CliResult<String> {
    let model = CoherenceModel::load(checkpoint)?;
    let (split, wv) = cfg.data()?;
    let report = model.evaluate(&split.test, &wv)?;
    create_out_dir(&cfg.out_dir)?;
    write(
        &cfg.out_dir,
        "evaluation.json",
        to_json(&json!({
            "config": cfg,
            "checkpoint": checkpoint,
            "model": model.spec(),
            "report": report,
        })),
    )?;
    Ok(format!("{}\n{}\n", EvaluationReport::CSV_HEADER, report.csv_row()))
}

struct Row {
    system: &'static str,
    features: String,
    runs: usize,
    aggregate: Option<Aggregate>,
}

impl Row {
    fn csv(&self) -> String {
        let cells = match &self.aggregate {
            Some(a) => [&a.accuracy, &a.weighted_f1, &a.macro_f1]
                .iter()
                .map(|ci| format!("{:.2},{:.2}", 100.0 * ci.mean, 100.0 * ci.halfwidth))
                .collect::<Vec<_>>()
                .join(","),
            None => ",,,,,".to_string(),
        };
        format!("{},{},{},{}", self.system, self.features, self.runs, cells)
    }
}

/// The table's result rows: the majority baseline, then every legal
/// feature combination of each model.
pub const ABLATION_GRID: [(&str, ModelKind, AblationConfig); 8] = [
    ("RST-Rec", ModelKind::Rst, AblationConfig::T),
    ("RST-Rec", ModelKind::Rst, AblationConfig::T_NS),
    ("RST-Rec", ModelKind::Rst, AblationConfig::T_NS_R),
    ("RST-Rec", ModelKind::Rst, AblationConfig::FULL),
    ("ParSeq", ModelKind::Parseq, AblationConfig::T),
    ("Ensemble", ModelKind::Ensemble, AblationConfig::T),
    ("Ensemble", ModelKind::Ensemble, AblationConfig::T_NS),
    ("Ensemble", ModelKind::Ensemble, AblationConfig::T_NS_R),
];

const ABLATION_HEADER: &str = "system,features,runs,accuracy,accuracy_ci,weighted_f1,weighted_f1_ci,macro_f1,macro_f1_ci";

fn majority_row(cfg: &GlobalConfig, split: &CorpusSplit) -> CliResult<Row> {
    let train: Vec<_> = split.train.iter().map(|d| d.label).collect();
    let test: Vec<_> = split.test.iter().map(|d| d.label).collect();
    let r = majority_baseline(cfg.majority, &train, &test)?;
    let point = |v: f64| ConfidenceInterval {
        mean: v,
        halfwidth: 0.0,
        n: 1,
    };
    Ok(Row {
        system: "Majority",
        features: cfg.majority.to_string(),
        runs: 1,
        aggregate: Some(Aggregate {
            runs: 1,
            accuracy: point(r.accuracy),
            weighted_f1: point(r.weighted_f1),
            macro_f1: point(r.macro_f1),
        }),
    })
}

fn grid_row(
    cfg: &GlobalConfig,
    split: &CorpusSplit,
    wv: &WordVectors,
    (system, model, features): (&'static str, ModelKind, AblationConfig),
) -> CliResult<(Row, MultiSeedResult)> {
    let train_cfg = TrainConfig {
        model,
        features,
        ..cfg.train.clone()
    };
    let result = run_multi_seed(&train_cfg, split, wv, cfg.n_runs, cfg.parallel)?;
    // `T+NS+R` rather than `t,ns,r`, which would clash with the separator
    let features = if model == ModelKind::Parseq {
        String::new()
    } else {
        features.to_string().replace(',', "+").to_uppercase()
    };
    Ok((
        Row {
            system,
            features,
            runs: result.runs.len(),
            aggregate: result.aggregate.clone(),
        },
        result,
    ))
}

/// Runs the whole ablation grid and writes `ablation.csv` (percentages)
/// and `ablation.json`.
pub fn ablate(cfg: &GlobalConfig) -> CliResult<String> {
    let (split, wv) = cfg.data()?;
    let mut rows = vec![majority_row(cfg, &split)?];
    let mut details = Vec::new();
    for entry in ABLATION_GRID {
        let (row, result) = grid_row(cfg, &split, &wv, entry)?;
        details.push(json!({
            "system": row.system,
            "model": entry.1,
            "features": entry.2,
            "aggregate": result.aggregate,
            "diverged": result.diverged,
            "runs": result.runs,
        }));
        rows.push(row);
    }
    if rows[1..].iter().all(|r| r.aggregate.is_none()) {
        return Err(CliError::Diverged("every run of every configuration diverged".into()));
    }
    let mut csv = format!("{ABLATION_HEADER}\n");
    for r in &rows {
        csv.push_str(&r.csv());
        csv.push('\n');
    }
    create_out_dir(&cfg.out_dir)?;
    write(&cfg.out_dir, "ablation.csv", &csv)?;
    write(
        &cfg.out_dir,
        "ablation.json",
        to_json(&json!({ "config": cfg, "rows": details })),
    )?;
    write(&cfg.out_dir, "config.json", to_json(cfg))?;
    Ok(csv)
}

/// Writes the generated corpus as `documents.jsonl`, `trees.txt` and
/// `vectors.txt`, plus a config that trains on them.
pub fn synth(cfg: &GlobalConfig) -> CliResult<String> {
    let split = coherence::corpus::synthesize_corpus(&cfg.generator, cfg.generator_seed)?;
    let wv = coherence::corpus::synthesize_word_vectors(&cfg.generator, cfg.generator_seed)?;
    create_out_dir(&cfg.out_dir)?;
    let docs = cfg.out_dir.join("documents.jsonl");
    let trees = cfg.out_dir.join("trees.txt");
    let vectors = cfg.out_dir.join("vectors.txt");
    write_corpus(&split, &docs, &trees)?;
    write(&cfg.out_dir, "vectors.txt", wv.to_text())?;
    let ingest = GlobalConfig {
        documents: Some(docs),
        trees: Some(trees),
        word_vectors: Some(vectors),
        ..cfg.clone()
    };
    write(&cfg.out_dir, "config.json", to_json(&ingest))?;
    Ok(format!(
        "{} train / {} test documents written to {}\n",
        split.train.len(),
        split.test.len(),
        cfg.out_dir.display()
    ))
}

/// Parses and validates every line of a tree file. Returns the JSON
/// report and whether every tree was usable.
pub fn validate_trees(path: &Path) -> CliResult<(String, bool)> {
    let lines = read_tree_file(path)?;
    let mut problems = Vec::new();
    for l in &lines {
        let issues: Vec<String> = match &l.tree {
            Ok(t) => validate_tree(t).iter().map(|v| v.to_string()).collect(),
            Err(e) => vec![e.to_string()],
        };
        if !issues.is_empty() {
            problems.push(json!({ "line": l.line, "id": l.id, "problems": issues }));
        }
    }
    let ok = problems.is_empty();
    let report = json!({
        "trees": lines.len(),
        "valid": lines.len() - problems.len(),
        "invalid": problems,
    });
    Ok((to_json(&report), ok))
}

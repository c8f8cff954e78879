mod common;

use coherence::model::{CoherenceModel, ModelKind};
use coherence::trainer::{run_multi_seed, train, RunRecord, TrainConfig};
use coherence::tree_model::AblationConfig;
use coherence::Error;

fn cfg() -> TrainConfig {
    TrainConfig {
        hidden: 6,
        relation_dim: 3,
        seed: 3,
        ..TrainConfig::default()
    }
}

#[test]
fn trained_model_survives_checkpoint() {
    let (split, wv) = common::small_corpus(16, 8, 5, 1);
    for model in [ModelKind::Rst, ModelKind::Parseq, ModelKind::Ensemble] {
        let features = if model == ModelKind::Ensemble { AblationConfig::T_NS_R } else { AblationConfig::FULL };
        let (m, record) = train(&TrainConfig { model, features, ..cfg() }, &split, &wv).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("best.json");
        m.save(&path).unwrap();
        let back = CoherenceModel::load(&path).unwrap();
        assert_eq!(back.evaluate(&split.test, &wv).unwrap(), record.report);
    }
}

#[test]
fn corrupted_checkpoint_is_rejected() {
    let (split, wv) = common::small_corpus(4, 2, 5, 1);
    let (m, _) = train(&cfg(), &split, &wv).unwrap();
    let mut ckpt = m.to_checkpoint();
    ckpt.parameters.tensors[0].data.pop();
    assert!(matches!(CoherenceModel::from_checkpoint(&ckpt), Err(Error::Checkpoint(_))));
    let mut ckpt = m.to_checkpoint();
    ckpt.version = 9;
    assert!(CoherenceModel::from_checkpoint(&ckpt).is_err());
}

#[test]
fn run_log_has_one_line_per_run() {
    let (split, wv) = common::small_corpus(10, 5, 5, 2);
    let res = run_multi_seed(&cfg(), &split, &wv, 3, true).unwrap();
    let log = res.run_log();
    let lines: Vec<RunRecord> = log.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines, res.runs);
    assert!(res.diverged.is_empty());
    let best = res.best_run().unwrap();
    assert!(res.runs.iter().all(|r| r.report.accuracy <= best.report.accuracy));
}

#[test]
fn different_seeds_differ() {
    let (split, wv) = common::small_corpus(20, 10, 5, 2);
    let (_, a) = train(&cfg(), &split, &wv).unwrap();
    let (_, b) = train(&TrainConfig { seed: 4, ..cfg() }, &split, &wv).unwrap();
    assert_ne!(a.epoch_losses, b.epoch_losses);
}

#[test]
fn invalid_configs() {
    let (split, wv) = common::small_corpus(4, 2, 5, 2);
    for bad in [
        TrainConfig { learning_rate: 0.0, ..cfg() },
        TrainConfig { hidden: 0, ..cfg() },
        TrainConfig { epochs: 0, ..cfg() },
        TrainConfig { model: ModelKind::Ensemble, features: AblationConfig::FULL, ..cfg() },
    ] {
        assert!(matches!(train(&bad, &split, &wv), Err(Error::Config(_))), "{bad:?}");
    }
    let parsed: TrainConfig = serde_json::from_str(r#"{"features": "t,ns", "model": "parseq"}"#).unwrap();
    assert_eq!(parsed.features, AblationConfig::T_NS);
    assert_eq!(parsed.learning_rate, 1e-4);
    assert!(serde_json::from_str::<TrainConfig>(r#"{"features": "t,r"}"#).is_err());
    assert!(serde_json::from_str::<TrainConfig>(r#"{"batch": 4}"#).is_err());
}

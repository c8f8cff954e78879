//! Harness calibration on the planted-signal corpus.

use coherence::corpus::{synthesize_corpus, synthesize_word_vectors, SynthConfig};
use coherence::trainer::{run_multi_seed, TrainConfig};
use coherence::tree_model::AblationConfig;

#[test]
fn twenty_runs_recover_the_planted_signal() {
    let cfg = SynthConfig {
        word_dim: 10,
        ..SynthConfig::default()
    };
    let split = synthesize_corpus(&cfg, 2).unwrap();
    let wv = synthesize_word_vectors(&cfg, 2).unwrap();
    let tc = TrainConfig {
        learning_rate: 3e-4,
        epochs: 10,
        hidden: 16,
        relation_dim: 8,
        features: AblationConfig::T_NS_R,
        seed: 500,
        ..TrainConfig::default()
    };
    let res = run_multi_seed(&tc, &split, &wv, 20, true).unwrap();
    let acc = res.aggregate.unwrap().accuracy;
    assert!(acc.mean >= 0.85, "{acc:?}");
    assert!(acc.halfwidth < 0.05, "{acc:?}");
}

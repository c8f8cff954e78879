use std::collections::HashSet;
use std::io::Write;

use coherence::corpus::{
    join_segments, load_corpus, load_word_vectors, segment, synthesize_corpus, write_corpus,
    CoherenceClass, SplitName, SynthConfig,
};
use coherence::rst::build_relation_vocab;
use coherence::Error;
use proptest::prelude::*;

proptest! {
    #[test]
    fn segmentation_is_stable_under_rejoin(text in "[A-Za-z .?!\n]{1,80}") {
        if let Ok(p) = segment(&text) {
            prop_assert_eq!(segment(&join_segments(&p)).unwrap(), p);
        }
    }
}

#[test]
fn segmentation_examples() {
    assert_eq!(segment("One. Two.").unwrap().len(), 1);
    assert_eq!(segment("One. Two.").unwrap()[0].len(), 2);
    assert_eq!(segment("A.\n\nB.").unwrap().len(), 2);
    assert_eq!(segment("Dr. who?").unwrap()[0].len(), 1);
    assert!(matches!(segment(" ?! "), Err(Error::EmptyDocument)));
}

#[test]
fn synthetic_corpus_is_reproducible_on_disk() {
    let cfg = SynthConfig {
        n_train: 20,
        n_test: 10,
        word_dim: 4,
        ..SynthConfig::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let write = |seed: u64, tag: &str| {
        let split = synthesize_corpus(&cfg, seed).unwrap();
        let (d, t) = (dir.path().join(format!("{tag}.jsonl")), dir.path().join(format!("{tag}.trees")));
        write_corpus(&split, &d, &t).unwrap();
        (std::fs::read(&d).unwrap(), std::fs::read(&t).unwrap(), split, d, t)
    };
    let (d1, t1, split, dp, tp) = write(4, "a");
    let (d2, t2, ..) = write(4, "b");
    assert_eq!((d1, t1), (d2, t2));

    let back = load_corpus(&dp, &tp).unwrap();
    assert_eq!(back.train, split.train);
    assert_eq!(back.test, split.test);
    assert!(back.exclusions.is_empty());
}

#[test]
fn synthetic_vocabulary_has_thirty_two_entries() {
    let split = synthesize_corpus(&SynthConfig::default(), 0).unwrap();
    let vocab = build_relation_vocab(split.train.iter().map(|d| &d.tree)).unwrap();
    assert_eq!(vocab.len(), 32);
}

#[test]
fn ingestion_accounts_for_every_record() {
    let dir = tempfile::tempdir().unwrap();
    let docs = dir.path().join("docs.jsonl");
    let trees = dir.path().join("trees.txt");
    let mut d = std::fs::File::create(&docs).unwrap();
    let mut t = std::fs::File::create(&trees).unwrap();
    for i in 0..200 {
        writeln!(d, r#"{{"id":"c{i}","label":{},"text":"Some text here.","split":"test"}}"#, 1 + i % 3).unwrap();
        if i != 17 {
            writeln!(t, "c{i}\t(rel A/N B/S (edu \"x\") (edu \"y\"))").unwrap();
        }
    }
    drop((d, t));
    let split = load_corpus(&docs, &trees).unwrap();
    assert_eq!(split.test.len(), 199);
    assert_eq!(split.exclusions.len(), 1);
    assert_eq!(split.exclusions[0].id, "c17");
    assert_eq!(split.retained() + split.exclusions.len(), split.input_count());
    assert!((split.retention_rate(SplitName::Test) - 0.995).abs() < 1e-12);
}

#[test]
fn word_vectors_filtered_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vec.txt");
    std::fs::write(&path, "the 0.1 0.2\ncat 0.3 0.4\n").unwrap();
    let keep: HashSet<String> = ["the".to_string()].into();
    let wv = load_word_vectors(&path, Some(&keep), None).unwrap();
    assert_eq!(wv.lookup("the"), &[0.1, 0.2]);
    assert_eq!(wv.lookup("cat"), &[0.0, 0.0]);

    std::fs::write(&path, format!("a {}\n", vec!["0.5"; 299].join(" "))).unwrap();
    assert!(matches!(load_word_vectors(&path, None, Some(300)), Err(Error::Format(_))));
}

/// Pearson χ² of the observed counts against the configured distribution.
fn chi_square(counts: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

#[test]
fn generator_matches_its_label_distributions() {
    // 99.9% quantile of χ² with 30 degrees of freedom.
    const CRITICAL: f64 = 59.703;
    for (class, priors) in [
        (CoherenceClass::Incoherent, [1.0, 0.0, 0.0]),
        (CoherenceClass::Neutral, [0.0, 1.0, 0.0]),
        (CoherenceClass::Coherent, [0.0, 0.0, 1.0]),
    ] {
        let cfg = SynthConfig {
            n_train: 1000,
            n_test: 1,
            class_priors: priors,
            word_dim: 2,
            ..SynthConfig::default()
        };
        let split = synthesize_corpus(&cfg, 12).unwrap();
        let mut counts = vec![0u64; cfg.labels.len()];
        for doc in &split.train {
            assert_eq!(doc.label, class);
            for l in doc.tree.labels() {
                counts[cfg.labels.iter().position(|x| *x == l.combined()).unwrap()] += 1;
            }
        }
        let n: u64 = counts.iter().sum();
        assert!(n >= 10_000, "{n}");
        let stat = chi_square(&counts, &cfg.label_distribution(class));
        assert!(stat < CRITICAL, "{class:?}: χ² = {stat}");
    }
}

#[test]
fn nearest_centroid_oracle_calibrates_generator() {
    let cfg = SynthConfig::default();
    let split = synthesize_corpus(&cfg, 0).unwrap();
    let histogram = |doc: &coherence::corpus::Document| {
        let mut h = vec![0.0; cfg.labels.len()];
        let labels = doc.tree.labels();
        for l in &labels {
            h[cfg.labels.iter().position(|x| *x == l.combined()).unwrap()] += 1.0 / labels.len() as f64;
        }
        h
    };
    let mut centroids = vec![vec![0.0; cfg.labels.len()]; 3];
    let mut sizes = [0.0; 3];
    for doc in &split.train {
        let k = doc.label.index();
        sizes[k] += 1.0;
        for (c, v) in centroids[k].iter_mut().zip(histogram(doc)) {
            *c += v;
        }
    }
    for (c, n) in centroids.iter_mut().zip(sizes) {
        c.iter_mut().for_each(|v| *v /= n);
    }
    let correct = split
        .test
        .iter()
        .filter(|doc| {
            let h = histogram(doc);
            let dist = |c: &Vec<f64>| c.iter().zip(&h).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            let best = (0..3).min_by(|&a, &b| dist(&centroids[a]).total_cmp(&dist(&centroids[b]))).unwrap();
            best == doc.label.index()
        })
        .count();
    let acc = correct as f64 / split.test.len() as f64;
    assert!(acc >= 0.85, "{acc}");
}

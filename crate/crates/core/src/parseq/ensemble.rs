use rand::Rng;

use super::{encode_parseq, ParseqEncoder};
use crate::corpus::{Document, WordVectors};
use crate::error::{Error, Result};
use crate::numcore::{AffineParams, ParameterBundle, Tape, Var};
use crate::rst::RelationVocabulary;
use crate::tree_model::{AblationConfig, CoherenceDistribution, TreeEncoder, TreeSide, NUM_CLASSES};

/// ParSeq encoder and RST tree side joined by one classifier over
/// `[h_l; h_r; d_parseq]`. Tree leaves are always zero vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleParams {
    pub ablation: AblationConfig,
    pub side: TreeSide,
    pub parseq: ParseqEncoder,
    pub classifier: AffineParams,
}

impl EnsembleParams {
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        word_dim: usize,
        hidden: usize,
        label_dim: usize,
        vocab: RelationVocabulary,
        ablation: AblationConfig,
        rng: &mut R,
    ) -> Result<Self> {
        check_ablation(ablation)?;
        let side = TreeSide::init(params, hidden, label_dim, vocab, ablation, rng)?;
        let parseq = ParseqEncoder::init(params, word_dim, hidden, rng)?;
        let classifier = AffineParams::init(params, "classifier", 3 * hidden, NUM_CLASSES, rng)?;
        Ok(Self {
            ablation,
            side,
            parseq,
            classifier,
        })
    }
}

fn check_ablation(abl: AblationConfig) -> Result<()> {
    if abl.e {
        return Err(Error::Config(
            "the ensemble initializes tree leaves with zeros; feature `e` is not allowed".into(),
        ));
    }
    Ok(())
}

pub fn ensemble_logits(
    tape: &mut Tape,
    params: &ParameterBundle,
    model: &EnsembleParams,
    doc: &Document,
    wv: &WordVectors,
) -> Result<Var> {
    check_ablation(model.ablation)?;
    let tree = TreeEncoder {
        params,
        side: &model.side,
        edu: None,
        wv,
        abl: model.ablation,
    };
    let (h_l, h_r) = tree.root_children(tape, &doc.tree)?;
    let d = encode_parseq(tape, params, &model.parseq, &doc.paragraphs, wv)?;
    model.classifier.apply(tape, params, &[h_l, h_r, d])
}

pub fn classify_ensemble(
    params: &ParameterBundle,
    model: &EnsembleParams,
    doc: &Document,
    wv: &WordVectors,
) -> Result<CoherenceDistribution> {
    let mut tape = Tape::new();
    let logits = ensemble_logits(&mut tape, params, model, doc, wv)?;
    Ok(CoherenceDistribution::from_logits(tape.value(logits)))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::corpus::{segment, CoherenceClass};
    use crate::rst::{build_relation_vocab, parse_tree, Label, Nuclearity};

    fn doc(tree: &str, text: &str) -> Document {
        Document {
            id: "d".into(),
            label: CoherenceClass::Neutral,
            text: text.into(),
            paragraphs: segment(text).unwrap(),
            tree: parse_tree(tree).unwrap(),
        }
    }

    const TREE: &str = r#"(rel Elaboration/N Evidence/S (edu "a b") (rel Contrast/N Joint/S (edu "c") (edu "d")))"#;

    fn setup(abl: AblationConfig, dim: usize, seed: u64) -> (ParameterBundle, EnsembleParams, WordVectors) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vocab = build_relation_vocab([&parse_tree(TREE).unwrap()]).unwrap();
        let mut p = ParameterBundle::new();
        let m = EnsembleParams::init(&mut p, dim, dim, dim, vocab, abl, &mut rng).unwrap();
        for id in p.ids().collect::<Vec<_>>() {
            p.value_mut(id)
                .data_mut()
                .iter_mut()
                .for_each(|v| *v = rng.gen_range(-1.0..1.0));
        }
        let mut wv = WordVectors::new(dim);
        for t in ["a", "b", "c", "d"] {
            wv.insert(t, (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        }
        (p, m, wv)
    }

    #[test]
    fn e_is_rejected() {
        let mut p = ParameterBundle::new();
        let err = EnsembleParams::init(
            &mut p,
            2,
            2,
            2,
            RelationVocabulary::from_labels(Vec::<String>::new()),
            AblationConfig::FULL,
            &mut ChaCha8Rng::seed_from_u64(0),
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn zero_params_uniform() {
        let (mut p, m, wv) = setup(AblationConfig::T_NS_R, 3, 0);
        p.fill(0.0);
        let dist = classify_ensemble(&p, &m, &doc(TREE, "A b. C d."), &wv).unwrap();
        assert!(dist.0.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn t_only_ignores_labels() {
        let (p, m, wv) = setup(AblationConfig::T, 3, 1);
        let a = doc(TREE, "A b. C d.");
        let mut b = a.clone();
        b.tree = b.tree.map_labels(&mut |_| Label::new("Summary", Nuclearity::S));
        assert_eq!(classify_ensemble(&p, &m, &a, &wv).unwrap(), classify_ensemble(&p, &m, &b, &wv).unwrap());
    }

    #[test]
    fn zero_tree_side_reduces_to_parseq_affine() {
        let (mut p, m, wv) = setup(AblationConfig::T_NS_R, 3, 2);
        for name in ["tree.cell.weight", "tree.cell.bias", "tree.labels.relation"] {
            p.value_mut(p.id(name).unwrap()).fill(0.0);
        }
        let d = doc(TREE, "A b. C d.\n\nA.");
        let mut tape = Tape::new();
        let logits = ensemble_logits(&mut tape, &p, &m, &d, &wv).unwrap();
        let dp = encode_parseq(&mut tape, &p, &m.parseq, &d.paragraphs, &wv).unwrap();
        let w = p.value(m.classifier.weight);
        let b = p.value(m.classifier.bias).data();
        for (k, bk) in b.iter().enumerate() {
            let row = &w.row(k)[6..9];
            let expected: f64 = bk + row.iter().zip(tape.value(dp)).map(|(x, y)| x * y).sum::<f64>();
            assert!((tape.value(logits)[k] - expected).abs() < 1e-14);
        }
    }

    fn sigmoid(x: f64) -> f64 {
        1.0 / (1.0 + (-x).exp())
    }

    #[test]
    fn scalar_oracle() {
        let (p, m, wv) = setup(AblationConfig::T_NS_R, 1, 3);
        let d = doc(TREE, "A b. C.\n\nD.");
        let mut tape = Tape::new();
        let logits = ensemble_logits(&mut tape, &p, &m, &d, &wv).unwrap();

        let get = |name: &str| p.value(p.id(name).unwrap()).data().to_vec();
        let lstm = |prefix: &str, xs: &[f64]| {
            let (w, b) = (get(&format!("{prefix}.weight")), get(&format!("{prefix}.bias")));
            let (mut h, mut c) = (0.0, 0.0);
            for &x in xs {
                let g = |k: usize| w[2 * k] * x + w[2 * k + 1] * h + b[k];
                c = sigmoid(g(0)) * g(3).tanh() + sigmoid(g(1)) * c;
                h = sigmoid(g(2)) * c.tanh();
            }
            h
        };
        let x = |t: &str| wv.lookup(t)[0];
        let s1 = lstm("parseq.lstm1", &[x("a"), x("b")]);
        let s2 = lstm("parseq.lstm1", &[x("c")]);
        let s3 = lstm("parseq.lstm1", &[x("d")]);
        let p1 = lstm("parseq.lstm2", &[s1, s2]);
        let p2 = lstm("parseq.lstm2", &[s3]);
        let dp = lstm("parseq.lstm3", &[p1, p2]);

        let (tw, tb, rel) = (get("tree.cell.weight"), get("tree.cell.bias"), get("tree.labels.relation"));
        let r = |l: &str| rel[m.side.labels.vocab.index_of(l)];
        let node = |l: (f64, f64, f64), rr: (f64, f64, f64)| {
            let g = |k: usize| tw[4 * k] * l.0 + tw[4 * k + 1] * rr.0 + tw[4 * k + 2] * l.2 + tw[4 * k + 3] * rr.2 + tb[k];
            let c = sigmoid(g(0)) * g(4).tanh() + sigmoid(g(1)) * l.1 + sigmoid(g(2)) * rr.1;
            (sigmoid(g(3)) * c.tanh(), c)
        };
        // root children: leaf "a b" (zero state) and the Contrast/Joint subtree
        let (h_r, _) = node((0.0, 0.0, r("Contrast_N")), (0.0, 0.0, r("Joint_S")));
        let h_l = 0.0;
        let (cw, cb) = (get("classifier.weight"), get("classifier.bias"));
        for k in 0..3 {
            let expected = cw[3 * k] * h_l + cw[3 * k + 1] * h_r + cw[3 * k + 2] * dp + cb[k];
            assert!((tape.value(logits)[k] - expected).abs() < 1e-12);
        }
    }
}

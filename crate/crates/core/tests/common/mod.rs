#![allow(dead_code)]

use coherence::corpus::{synthesize_corpus, synthesize_word_vectors, CorpusSplit, Document, SynthConfig, WordVectors};
use coherence::model::CoherenceModel;
use coherence::numcore::Tape;
use coherence::rst::{Label, Nuclearity, RstTree};
use rand::Rng;

/// Plain scalar transcriptions of the gate equations, written without the
/// tape so they can serve as an independent reference.
pub mod scalar {
    pub fn sigmoid(x: f64) -> f64 {
        1.0 / (1.0 + (-x).exp())
    }

    /// `w` holds rows i, f, o, u over `[x, h]`.
    pub fn lstm(w: &[f64], b: &[f64], x: f64, h: f64, c: f64) -> (f64, f64) {
        let g = |k: usize| w[2 * k] * x + w[2 * k + 1] * h + b[k];
        let i = sigmoid(g(0));
        let f = sigmoid(g(1));
        let o = sigmoid(g(2));
        let u = g(3).tanh();
        let c2 = i * u + f * c;
        (o * c2.tanh(), c2)
    }

    pub fn lstm_run(w: &[f64], b: &[f64], xs: &[f64]) -> (f64, f64) {
        xs.iter().fold((0.0, 0.0), |(h, c), &x| lstm(w, b, x, h, c))
    }

    /// `w` holds rows i, f_l, f_r, o, u over `[h_l, h_r, r_l, r_r]`.
    /// Children are `(h, c, r)`.
    pub fn tree(w: &[f64], b: &[f64], l: (f64, f64, f64), r: (f64, f64, f64)) -> (f64, f64) {
        let g = |k: usize| {
            w[4 * k] * l.0 + w[4 * k + 1] * r.0 + w[4 * k + 2] * l.2 + w[4 * k + 3] * r.2 + b[k]
        };
        let i = sigmoid(g(0));
        let fl = sigmoid(g(1));
        let fr = sigmoid(g(2));
        let o = sigmoid(g(3));
        let u = g(4).tanh();
        let c = i * u + fl * l.1 + fr * r.1;
        (o * c.tanh(), c)
    }
}

pub const RELATIONS: &[&str] = &["Elaboration", "Attribution", "Joint", "Same-Unit", "Contrast", "Background", "Cause"];

pub fn random_label<R: Rng>(rng: &mut R) -> Label {
    let nuc = if rng.gen_bool(0.5) { Nuclearity::N } else { Nuclearity::S };
    Label::new(RELATIONS[rng.gen_range(0..RELATIONS.len())], nuc)
}

/// Random EDU text, including characters that need escaping.
pub fn random_text<R: Rng>(rng: &mut R) -> String {
    const POOL: &[&str] = &["alpha", "beta", "Gamma.", "\"quoted\"", "back\\slash", "(paren)", "naïve", "x", "7"];
    let n = rng.gen_range(1..5);
    (0..n).map(|_| POOL[rng.gen_range(0..POOL.len())]).collect::<Vec<_>>().join(" ")
}

/// A random binary tree of depth at most `max_depth` with at least two
/// leaves when `max_depth >= 1`.
pub fn random_tree<R: Rng>(rng: &mut R, max_depth: usize) -> RstTree {
    fn go<R: Rng>(rng: &mut R, depth: usize, force: bool) -> RstTree {
        if depth == 0 || (!force && rng.gen_bool(0.35)) {
            return RstTree::leaf(random_text(rng));
        }
        RstTree::internal(
            random_label(rng),
            random_label(rng),
            go(rng, depth - 1, false),
            go(rng, depth - 1, false),
        )
    }
    go(rng, max_depth, max_depth >= 1)
}

pub fn small_corpus(n_train: usize, n_test: usize, word_dim: usize, seed: u64) -> (CorpusSplit, WordVectors) {
    let cfg = SynthConfig {
        n_train,
        n_test,
        word_dim,
        max_edus: 6,
        ..SynthConfig::default()
    };
    (
        synthesize_corpus(&cfg, seed).unwrap(),
        synthesize_word_vectors(&cfg, seed).unwrap(),
    )
}

pub fn loss_value(model: &CoherenceModel, doc: &Document, wv: &WordVectors) -> f64 {
    let mut tape = Tape::new();
    let loss = model.loss(&mut tape, doc, wv).unwrap();
    tape.value(loss)[0]
}

/// `|a - n| / max(|a|, |n|, 1e-6)`. The floor keeps gradients that are
/// nearly zero from turning finite-difference rounding noise (about
/// `1e-11` at `h = 1e-5`) into a large ratio; below it the check is an
/// absolute one at `1e-10`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6)
}

/// Largest relative error over every parameter scalar, using central
/// differences with step `h`. Returns the error and the offending name.
pub fn gradient_check(model: &mut CoherenceModel, doc: &Document, wv: &WordVectors, h: f64) -> (f64, String) {
    let mut tape = Tape::new();
    let loss = model.loss(&mut tape, doc, wv).unwrap();
    tape.backward(loss, model.params_mut()).unwrap();
    let ids: Vec<_> = model.params().ids().collect();
    let mut worst = (0.0, String::new());
    for id in ids {
        let analytic = model.params().grad(id).data().to_vec();
        for (k, &a) in analytic.iter().enumerate() {
            let orig = model.params().value(id).data()[k];
            model.params_mut().value_mut(id).data_mut()[k] = orig + h;
            let up = loss_value(model, doc, wv);
            model.params_mut().value_mut(id).data_mut()[k] = orig - h;
            let down = loss_value(model, doc, wv);
            model.params_mut().value_mut(id).data_mut()[k] = orig;
            let err = relative_error(a, (up - down) / (2.0 * h));
            if err > worst.0 {
                worst = (err, format!("{}[{k}] analytic {a:e}", model.params().name(id)));
            }
        }
    }
    worst
}

/// Inputs that violate the tree grammar, with the byte offset the error
/// must point at.
pub const PARSE_FAILURES: &[(&str, usize)] = &[
    (r#"(rel Foo/X Bar/S (edu "a") (edu "b"))"#, 9),
    (r#"(rel Foo/N Bar/N (edu "a") (edu "b")"#, 36),
    (r#"(rel Foo/N Bar/N (edu "a") (edu "b")))"#, 37),
    (r#"(node "a")"#, 1),
    (r#"(edu "")"#, 5),
    (r#"(edu "a)"#, 5),
    (r#"(edu "a\n")"#, 8),
    (r#"(rel 1st/N Bar/S (edu "a") (edu "b"))"#, 5),
    (r#"(rel Foo Bar/S (edu "a") (edu "b"))"#, 5),
    (r#"(rel Foo/N Bar/S (edu "a"))"#, 26),
    ("", 0),
];

//! Reverse-mode differentiation over vector-valued nodes.
//!
//! A [`Tape`] records every operation of one forward pass. Parameters are
//! never copied into the tape unless asked for explicitly: affine maps and
//! embedding lookups reference a [`ParamId`] and read the bundle passed in,
//! so [`Tape::backward`] can accumulate straight into the bundle's gradient
//! slots.

use super::params::{ParamId, ParameterBundle};
use crate::error::{Error, Result};

/// Handle to a node recorded on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Debug)]
enum Op {
    Constant,
    Param(ParamId),
    Row { table: ParamId, row: usize },
    Affine {
        weight: ParamId,
        bias: Option<ParamId>,
        inputs: Vec<Var>,
    },
    Add(Var, Var),
    Mul(Var, Var),
    Sigmoid(Var),
    Tanh(Var),
    Slice { src: Var, start: usize },
    Concat(Vec<Var>),
    Dot(Var, Var),
    Sum(Var),
    Softmax(Var),
    NegLogAt { src: Var, index: usize, floor: f64 },
}

#[derive(Debug)]
struct Node {
    value: Vec<f64>,
    op: Op,
    /// Whether any parameter lies upstream of this node.
    grad: bool,
}

#[derive(Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Inner product with four running sums, which lets the compiler keep the
/// loop in vector registers.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, value: Vec<f64>, op: Op) -> Var {
        let g = |v: &Var| self.nodes[v.0].grad;
        let grad = match &op {
            Op::Constant => false,
            Op::Param(_) | Op::Row { .. } | Op::Affine { .. } => true,
            Op::Add(a, b) | Op::Mul(a, b) | Op::Dot(a, b) => g(a) || g(b),
            Op::Concat(parts) => parts.iter().any(g),
            Op::Sigmoid(a)
            | Op::Tanh(a)
            | Op::Sum(a)
            | Op::Softmax(a)
            | Op::Slice { src: a, .. }
            | Op::NegLogAt { src: a, .. } => g(a),
        };
        self.nodes.push(Node { value, op, grad });
        Var(self.nodes.len() - 1)
    }

    pub fn value(&self, v: Var) -> &[f64] {
        &self.nodes[v.0].value
    }

    pub fn dim(&self, v: Var) -> usize {
        self.nodes[v.0].value.len()
    }

    pub fn constant(&mut self, value: Vec<f64>) -> Var {
        self.push(value, Op::Constant)
    }

    pub fn zeros(&mut self, n: usize) -> Var {
        self.constant(vec![0.0; n])
    }

    /// Whole parameter flattened into a vector node.
    pub fn param(&mut self, params: &ParameterBundle, id: ParamId) -> Var {
        self.push(params.value(id).data().to_vec(), Op::Param(id))
    }

    /// Row `row` of a 2-d parameter table.
    pub fn row(&mut self, params: &ParameterBundle, table: ParamId, row: usize) -> Result<Var> {
        let t = params.value(table);
        if row >= t.rows() {
            return Err(Error::Dimension {
                context: "embedding row",
                expected: t.rows(),
                actual: row,
            });
        }
        let v = t.row(row).to_vec();
        Ok(self.push(v, Op::Row { table, row }))
    }

    /// `W · [x_1; x_2; …] + b` with `W` of shape `[out, Σ len(x_k)]`.
    pub fn affine(
        &mut self,
        params: &ParameterBundle,
        weight: ParamId,
        bias: Option<ParamId>,
        inputs: &[Var],
    ) -> Result<Var> {
        let w = params.value(weight);
        let (out, cols) = (w.rows(), w.cols());
        let total: usize = inputs.iter().map(|&v| self.dim(v)).sum();
        if total != cols {
            return Err(Error::Dimension {
                context: "affine input",
                expected: cols,
                actual: total,
            });
        }
        let mut y = match bias {
            Some(b) => {
                let b = params.value(b);
                if b.len() != out {
                    return Err(Error::Dimension {
                        context: "affine bias",
                        expected: out,
                        actual: b.len(),
                    });
                }
                b.data().to_vec()
            }
            None => vec![0.0; out],
        };
        let wd = w.data();
        let mut offset = 0;
        for &input in inputs {
            let x = &self.nodes[input.0].value;
            for (r, yr) in y.iter_mut().enumerate() {
                let row = &wd[r * cols + offset..r * cols + offset + x.len()];
                *yr += dot(row, x);
            }
            offset += x.len();
        }
        Ok(self.push(
            y,
            Op::Affine {
                weight,
                bias,
                inputs: inputs.to_vec(),
            },
        ))
    }

    fn same_len(&self, a: Var, b: Var, context: &'static str) -> Result<()> {
        if self.dim(a) != self.dim(b) {
            return Err(Error::Dimension {
                context,
                expected: self.dim(a),
                actual: self.dim(b),
            });
        }
        Ok(())
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_len(a, b, "add")?;
        let v = self
            .value(a)
            .iter()
            .zip(self.value(b))
            .map(|(x, y)| x + y)
            .collect();
        Ok(self.push(v, Op::Add(a, b)))
    }

    /// Elementwise product.
    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_len(a, b, "mul")?;
        let v = self
            .value(a)
            .iter()
            .zip(self.value(b))
            .map(|(x, y)| x * y)
            .collect();
        Ok(self.push(v, Op::Mul(a, b)))
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        let v = self.value(a).iter().map(|&x| sigmoid(x)).collect();
        self.push(v, Op::Sigmoid(a))
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        let v = self.value(a).iter().map(|x| x.tanh()).collect();
        self.push(v, Op::Tanh(a))
    }

    pub fn slice(&mut self, src: Var, start: usize, len: usize) -> Result<Var> {
        if start + len > self.dim(src) {
            return Err(Error::Dimension {
                context: "slice",
                expected: self.dim(src),
                actual: start + len,
            });
        }
        let v = self.value(src)[start..start + len].to_vec();
        Ok(self.push(v, Op::Slice { src, start }))
    }

    pub fn concat(&mut self, parts: &[Var]) -> Var {
        let v = parts
            .iter()
            .flat_map(|&p| self.value(p).iter().copied())
            .collect();
        self.push(v, Op::Concat(parts.to_vec()))
    }

    pub fn dot(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_len(a, b, "dot")?;
        let v = self
            .value(a)
            .iter()
            .zip(self.value(b))
            .map(|(x, y)| x * y)
            .sum();
        Ok(self.push(vec![v], Op::Dot(a, b)))
    }

    pub fn sum(&mut self, a: Var) -> Var {
        let v = self.value(a).iter().sum();
        self.push(vec![v], Op::Sum(a))
    }

    pub fn softmax(&mut self, a: Var) -> Var {
        let v = softmax(self.value(a));
        self.push(v, Op::Softmax(a))
    }

    /// `-ln(max(src[index], floor))` as a scalar node.
    pub fn neg_log_at(&mut self, src: Var, index: usize, floor: f64) -> Result<Var> {
        if index >= self.dim(src) {
            return Err(Error::Dimension {
                context: "neg_log_at",
                expected: self.dim(src),
                actual: index,
            });
        }
        let p = self.value(src)[index].max(floor);
        Ok(self.push(vec![-p.ln()], Op::NegLogAt { src, index, floor }))
    }

    /// Writes `∂loss/∂θ` into the gradient slot of every parameter.
    ///
    /// Gradient slots are zeroed first, so parameters the loss does not
    /// touch end up with a zero gradient.
    pub fn backward(&self, loss: Var, params: &mut ParameterBundle) -> Result<()> {
        if self.dim(loss) != 1 {
            return Err(Error::Shape(format!(
                "backward needs a scalar loss, got length {}",
                self.dim(loss)
            )));
        }
        params.zero_grads();
        let mut grads: Vec<Vec<f64>> = vec![Vec::new(); loss.0 + 1];
        grads[loss.0] = vec![1.0];

        fn acc(grads: &mut [Vec<f64>], v: Var, len: usize) -> &mut Vec<f64> {
            let g = &mut grads[v.0];
            if g.is_empty() {
                g.resize(len, 0.0);
            }
            g
        }

        for i in (0..=loss.0).rev() {
            let g = std::mem::take(&mut grads[i]);
            if g.is_empty() {
                continue;
            }
            let node = &self.nodes[i];
            match &node.op {
                Op::Constant => {}
                Op::Param(id) => {
                    let pg = params.grad_mut(*id).data_mut();
                    pg.iter_mut().zip(&g).for_each(|(a, b)| *a += b);
                }
                Op::Row { table, row } => {
                    let cols = params.value(*table).cols();
                    let pg = &mut params.grad_mut(*table).data_mut()[row * cols..(row + 1) * cols];
                    pg.iter_mut().zip(&g).for_each(|(a, b)| *a += b);
                }
                Op::Affine {
                    weight,
                    bias,
                    inputs,
                } => {
                    if let Some(b) = bias {
                        let bg = params.grad_mut(*b).data_mut();
                        bg.iter_mut().zip(&g).for_each(|(a, b)| *a += b);
                    }
                    let (w, wg) = params.value_and_grad_mut(*weight);
                    let cols = w.cols();
                    let wd = w.data();
                    let wgd = wg.data_mut();
                    let mut offset = 0;
                    for &input in inputs {
                        let x = &self.nodes[input.0].value;
                        let n = x.len();
                        if !self.nodes[input.0].grad {
                            for (r, &gr) in g.iter().enumerate() {
                                let base = r * cols + offset;
                                let grow = &mut wgd[base..base + n];
                                grow.iter_mut().zip(x).for_each(|(a, &b)| *a += gr * b);
                            }
                            offset += n;
                            continue;
                        }
                        let gx = acc(&mut grads, input, n);
                        for (r, &gr) in g.iter().enumerate() {
                            if gr == 0.0 {
                                continue;
                            }
                            let base = r * cols + offset;
                            let wrow = &wd[base..base + n];
                            let grow = &mut wgd[base..base + n];
                            for k in 0..n {
                                grow[k] += gr * x[k];
                                gx[k] += gr * wrow[k];
                            }
                        }
                        offset += n;
                    }
                }
                Op::Add(a, b) => {
                    for v in [*a, *b] {
                        let gv = acc(&mut grads, v, g.len());
                        gv.iter_mut().zip(&g).for_each(|(x, y)| *x += y);
                    }
                }
                Op::Mul(a, b) => {
                    let (a, b) = (*a, *b);
                    let av = &self.nodes[a.0].value;
                    let bv = &self.nodes[b.0].value;
                    let ga = acc(&mut grads, a, g.len());
                    for k in 0..g.len() {
                        ga[k] += g[k] * bv[k];
                    }
                    let gb = acc(&mut grads, b, g.len());
                    for k in 0..g.len() {
                        gb[k] += g[k] * av[k];
                    }
                }
                Op::Sigmoid(a) => {
                    let y = &node.value;
                    let ga = acc(&mut grads, *a, g.len());
                    for k in 0..g.len() {
                        ga[k] += g[k] * y[k] * (1.0 - y[k]);
                    }
                }
                Op::Tanh(a) => {
                    let y = &node.value;
                    let ga = acc(&mut grads, *a, g.len());
                    for k in 0..g.len() {
                        ga[k] += g[k] * (1.0 - y[k] * y[k]);
                    }
                }
                Op::Slice { src, start } => {
                    let n = self.dim(*src);
                    let gs = acc(&mut grads, *src, n);
                    for (k, gk) in g.iter().enumerate() {
                        gs[start + k] += gk;
                    }
                }
                Op::Concat(parts) => {
                    let mut offset = 0;
                    for &p in parts {
                        let n = self.dim(p);
                        let gp = acc(&mut grads, p, n);
                        gp.iter_mut()
                            .zip(&g[offset..offset + n])
                            .for_each(|(x, y)| *x += y);
                        offset += n;
                    }
                }
                Op::Dot(a, b) => {
                    let (a, b) = (*a, *b);
                    let av = &self.nodes[a.0].value;
                    let bv = &self.nodes[b.0].value;
                    let ga = acc(&mut grads, a, av.len());
                    ga.iter_mut().zip(bv).for_each(|(x, y)| *x += g[0] * y);
                    let gb = acc(&mut grads, b, bv.len());
                    gb.iter_mut().zip(av).for_each(|(x, y)| *x += g[0] * y);
                }
                Op::Sum(a) => {
                    let n = self.dim(*a);
                    let ga = acc(&mut grads, *a, n);
                    ga.iter_mut().for_each(|x| *x += g[0]);
                }
                Op::Softmax(a) => {
                    let p = &node.value;
                    let inner: f64 = g.iter().zip(p).map(|(x, y)| x * y).sum();
                    let ga = acc(&mut grads, *a, p.len());
                    for k in 0..p.len() {
                        ga[k] += p[k] * (g[k] - inner);
                    }
                }
                Op::NegLogAt { src, index, floor } => {
                    let p = self.nodes[src.0].value[*index];
                    let n = self.dim(*src);
                    let gs = acc(&mut grads, *src, n);
                    if p > *floor {
                        gs[*index] -= g[0] / p;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Numerically stable softmax.
pub fn softmax(x: &[f64]) -> Vec<f64> {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = x.iter().map(|v| (v - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::tensor::Tensor;

    fn bundle_with(name: &str, t: Tensor) -> (ParameterBundle, ParamId) {
        let mut p = ParameterBundle::new();
        let id = p.insert(name, t).unwrap();
        (p, id)
    }

    #[test]
    fn constant_loss_gives_zero_gradients() {
        let (mut p, id) = bundle_with("w", Tensor::vector(vec![1.0, 2.0]));
        p.grad_mut(id).fill(7.0);
        let mut tape = Tape::new();
        let _w = tape.param(&p, id);
        let c = tape.constant(vec![3.0]);
        tape.backward(c, &mut p).unwrap();
        assert!(p.grad(id).data().iter().all(|&g| g == 0.0));
    }

    #[test]
    fn linear_loss_gradient_is_input() {
        let (mut p, id) = bundle_with("w", Tensor::vector(vec![0.3, -1.2, 4.0]));
        let x = vec![1.5, -2.0, 0.25];
        let mut tape = Tape::new();
        let w = tape.param(&p, id);
        let xv = tape.constant(x.clone());
        let loss = tape.dot(w, xv).unwrap();
        tape.backward(loss, &mut p).unwrap();
        assert_eq!(p.grad(id).data(), x.as_slice());
    }

    #[test]
    fn non_scalar_loss_is_shape_error() {
        let (mut p, id) = bundle_with("w", Tensor::vector(vec![0.3, -1.2]));
        let mut tape = Tape::new();
        let w = tape.param(&p, id);
        assert!(matches!(tape.backward(w, &mut p), Err(Error::Shape(_))));
    }

    #[test]
    fn affine_dimension_mismatch() {
        let (p, id) = bundle_with("w", Tensor::zeros(vec![2, 3]));
        let mut tape = Tape::new();
        let x = tape.zeros(2);
        assert!(matches!(
            tape.affine(&p, id, None, &[x]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn reused_node_accumulates() {
        // loss = sum(w * w) → grad = 2w
        let (mut p, id) = bundle_with("w", Tensor::vector(vec![1.0, -3.0]));
        let mut tape = Tape::new();
        let w = tape.param(&p, id);
        let sq = tape.mul(w, w).unwrap();
        let loss = tape.sum(sq);
        tape.backward(loss, &mut p).unwrap();
        assert_eq!(p.grad(id).data(), &[2.0, -6.0]);
    }

    #[test]
    fn softmax_is_normalized_and_stable() {
        let p = softmax(&[1000.0, 1000.0, -1000.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((p[0] - 0.5).abs() < 1e-15);
    }
}

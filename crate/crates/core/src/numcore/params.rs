use rand::Rng;

use super::tensor::Tensor;
use crate::error::{Error, Result};

/// Handle to one entry of a [`ParameterBundle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParamId(pub(crate) usize);

impl ParamId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Ordered, uniquely named trainable tensors with a gradient slot each.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterBundle {
    names: Vec<String>,
    values: Vec<Tensor>,
    grads: Vec<Tensor>,
}

impl ParameterBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Tensor) -> Result<ParamId> {
        let name = name.into();
        if self.names.contains(&name) {
            return Err(Error::DuplicateId(name));
        }
        let grad = Tensor::zeros(value.shape().to_vec());
        self.names.push(name);
        self.values.push(value);
        self.grads.push(grad);
        Ok(ParamId(self.values.len() - 1))
    }

    /// Matrix of shape `[rows, cols]` drawn uniformly in `±sqrt(6 / (fan_in + fan_out))`.
    pub fn insert_glorot<R: Rng>(
        &mut self,
        name: impl Into<String>,
        rows: usize,
        cols: usize,
        fan_in: usize,
        fan_out: usize,
        rng: &mut R,
    ) -> Result<ParamId> {
        let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
        let data = (0..rows * cols)
            .map(|_| rng.gen_range(-bound..=bound))
            .collect();
        self.insert(name, Tensor::new(vec![rows, cols], data)?)
    }

    pub fn insert_uniform<R: Rng>(
        &mut self,
        name: impl Into<String>,
        shape: Vec<usize>,
        bound: f64,
        rng: &mut R,
    ) -> Result<ParamId> {
        let n = shape.iter().product();
        let data = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        self.insert(name, Tensor::new(shape, data)?)
    }

    pub fn insert_zeros(&mut self, name: impl Into<String>, shape: Vec<usize>) -> Result<ParamId> {
        self.insert(name, Tensor::zeros(shape))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<ParamId> {
        self.names.iter().position(|n| n == name).map(ParamId)
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.values.len()).map(ParamId)
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id.0]
    }

    pub fn value(&self, id: ParamId) -> &Tensor {
        &self.values[id.0]
    }

    pub fn value_mut(&mut self, id: ParamId) -> &mut Tensor {
        &mut self.values[id.0]
    }

    pub fn grad(&self, id: ParamId) -> &Tensor {
        &self.grads[id.0]
    }

    pub fn grad_mut(&mut self, id: ParamId) -> &mut Tensor {
        &mut self.grads[id.0]
    }

    pub(crate) fn value_and_grad_mut(&mut self, id: ParamId) -> (&Tensor, &mut Tensor) {
        (&self.values[id.0], &mut self.grads[id.0])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Tensor)> {
        self.names.iter().map(String::as_str).zip(self.values.iter())
    }

    pub fn zero_grads(&mut self) {
        self.grads.iter_mut().for_each(|g| g.fill(0.0));
    }

    /// Total number of scalar parameters.
    pub fn scalar_count(&self) -> usize {
        self.values.iter().map(Tensor::len).sum()
    }

    /// Sets every parameter value to `value`.
    pub fn fill(&mut self, value: f64) {
        self.values.iter_mut().for_each(|t| t.fill(value));
    }
}

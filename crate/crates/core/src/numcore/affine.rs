use rand::Rng;

use super::params::{ParamId, ParameterBundle};
use super::tape::{Tape, Var};
use crate::error::Result;

/// Fully connected map `y = W x + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineParams {
    pub input_size: usize,
    pub output_size: usize,
    pub weight: ParamId,
    pub bias: ParamId,
}

impl AffineParams {
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        prefix: &str,
        input_size: usize,
        output_size: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let weight = params.insert_glorot(
            format!("{prefix}.weight"),
            output_size,
            input_size,
            input_size,
            output_size,
            rng,
        )?;
        let bias = params.insert_zeros(format!("{prefix}.bias"), vec![output_size])?;
        Ok(Self {
            input_size,
            output_size,
            weight,
            bias,
        })
    }

    pub fn apply(&self, tape: &mut Tape, params: &ParameterBundle, inputs: &[Var]) -> Result<Var> {
        tape.affine(params, self.weight, Some(self.bias), inputs)
    }
}

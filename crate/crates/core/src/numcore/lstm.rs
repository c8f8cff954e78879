use rand::Rng;

use super::params::{ParamId, ParameterBundle};
use super::tape::{Tape, Var};
use crate::error::{Error, Result};

/// A sequence LSTM cell with a single forget gate.
///
/// The four gates share one fused weight of shape
/// `[4·hidden, input + hidden]`, stacked in the order input, forget,
/// output, candidate; the bias is laid out the same way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LstmCellParams {
    pub input_size: usize,
    pub hidden_size: usize,
    pub weight: ParamId,
    pub bias: ParamId,
}

impl LstmCellParams {
    /// Registers `{prefix}.weight` and `{prefix}.bias` in the bundle.
    pub fn init<R: Rng>(
        params: &mut ParameterBundle,
        prefix: &str,
        input_size: usize,
        hidden_size: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let weight = params.insert_glorot(
            format!("{prefix}.weight"),
            4 * hidden_size,
            input_size + hidden_size,
            input_size + hidden_size,
            hidden_size,
            rng,
        )?;
        let bias = params.insert_zeros(format!("{prefix}.bias"), vec![4 * hidden_size])?;
        Ok(Self {
            input_size,
            hidden_size,
            weight,
            bias,
        })
    }

    pub fn scalar_count(&self) -> usize {
        4 * ((self.input_size + self.hidden_size) * self.hidden_size + self.hidden_size)
    }
}

fn check(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::Dimension {
            context,
            expected,
            actual,
        });
    }
    Ok(())
}

/// One LSTM step: returns the new `(h, c)`.
pub fn lstm_cell_step(
    tape: &mut Tape,
    params: &ParameterBundle,
    cell: &LstmCellParams,
    x: Var,
    h: Var,
    c: Var,
) -> Result<(Var, Var)> {
    let n = cell.hidden_size;
    check("lstm input", cell.input_size, tape.dim(x))?;
    check("lstm hidden", n, tape.dim(h))?;
    check("lstm cell", n, tape.dim(c))?;

    let z = tape.affine(params, cell.weight, Some(cell.bias), &[x, h])?;
    let zi = tape.slice(z, 0, n)?;
    let zf = tape.slice(z, n, n)?;
    let zo = tape.slice(z, 2 * n, n)?;
    let zu = tape.slice(z, 3 * n, n)?;
    let i = tape.sigmoid(zi);
    let f = tape.sigmoid(zf);
    let o = tape.sigmoid(zo);
    let u = tape.tanh(zu);

    let iu = tape.mul(i, u)?;
    let fc = tape.mul(f, c)?;
    let c_next = tape.add(iu, fc)?;
    let tc = tape.tanh(c_next);
    let h_next = tape.mul(o, tc)?;
    Ok((h_next, c_next))
}

/// Runs the cell left to right from a zero state; returns the final `(h, c)`.
pub fn lstm_sequence(
    tape: &mut Tape,
    params: &ParameterBundle,
    cell: &LstmCellParams,
    inputs: &[Var],
) -> Result<(Var, Var)> {
    let mut h = tape.zeros(cell.hidden_size);
    let mut c = tape.zeros(cell.hidden_size);
    for &x in inputs {
        (h, c) = lstm_cell_step(tape, params, cell, x, h, c)?;
    }
    Ok((h, c))
}

//! Dense `f64` numerics: tensors, parameter bundles, a recording tape for
//! reverse-mode gradients, the sequence LSTM cell and Adam.

mod adam;
mod affine;
mod checkpoint;
mod lstm;
mod params;
mod tape;
mod tensor;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use affine::AffineParams;
pub use checkpoint::{BundleRecord, TensorRecord, BUNDLE_FORMAT_VERSION};
pub use lstm::{lstm_cell_step, lstm_sequence, LstmCellParams};
pub use params::{ParamId, ParameterBundle};
pub use tape::{softmax, Tape, Var};
pub use tensor::Tensor;

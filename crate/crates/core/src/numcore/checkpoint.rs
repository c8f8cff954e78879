use serde::{Deserialize, Serialize};

use super::params::ParameterBundle;
use super::tensor::Tensor;
use crate::error::{Error, Result};

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorRecord {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

/// Serializable snapshot of a bundle's values, in bundle order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleRecord {
    pub version: u32,
    pub tensors: Vec<TensorRecord>,
}

impl BundleRecord {
    pub fn capture(params: &ParameterBundle) -> Self {
        Self {
            version: BUNDLE_FORMAT_VERSION,
            tensors: params
                .iter()
                .map(|(name, t)| TensorRecord {
                    name: name.to_string(),
                    shape: t.shape().to_vec(),
                    data: t.data().to_vec(),
                })
                .collect(),
        }
    }

    /// Copies the stored values into `params`, which must have the same
    /// names and shapes in the same order.
    pub fn restore_into(&self, params: &mut ParameterBundle) -> Result<()> {
        if self.version != BUNDLE_FORMAT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported version {}",
                self.version
            )));
        }
        if self.tensors.len() != params.len() {
            return Err(Error::Checkpoint(format!(
                "checkpoint has {} tensors, model expects {}",
                self.tensors.len(),
                params.len()
            )));
        }
        for (record, id) in self.tensors.iter().zip(params.ids().collect::<Vec<_>>()) {
            if record.name != params.name(id) || record.shape != params.value(id).shape() {
                return Err(Error::Checkpoint(format!(
                    "tensor `{}` {:?} does not match `{}` {:?}",
                    record.name,
                    record.shape,
                    params.name(id),
                    params.value(id).shape()
                )));
            }
            *params.value_mut(id) = Tensor::new(record.shape.clone(), record.data.clone())
                .map_err(|e| Error::Checkpoint(format!("tensor `{}`: {e}", record.name)))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn json_is_byte_stable_and_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut p = ParameterBundle::new();
        p.insert_glorot("a", 3, 5, 5, 3, &mut rng).unwrap();
        p.insert_uniform("b", vec![7], 0.1, &mut rng).unwrap();
        let json = serde_json::to_string(&BundleRecord::capture(&p)).unwrap();
        let back: BundleRecord = serde_json::from_str(&json).unwrap();
        let mut q = p.clone();
        q.fill(0.0);
        back.restore_into(&mut q).unwrap();
        assert_eq!(p, q);
        assert_eq!(json, serde_json::to_string(&BundleRecord::capture(&q)).unwrap());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let mut p = ParameterBundle::new();
        p.insert_zeros("a", vec![2]).unwrap();
        let rec = BundleRecord::capture(&p);
        let mut q = ParameterBundle::new();
        q.insert_zeros("a", vec![3]).unwrap();
        assert!(rec.restore_into(&mut q).is_err());
    }
}

use super::params::ParameterBundle;
use super::tensor::Tensor;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment estimates, one pair per parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    m: Vec<Tensor>,
    v: Vec<Tensor>,
}

impl AdamState {
    pub fn new(params: &ParameterBundle) -> Self {
        Self::with_config(params, AdamConfig::default())
    }

    pub fn with_config(params: &ParameterBundle, config: AdamConfig) -> Self {
        let zeros = || {
            params
                .ids()
                .map(|id| Tensor::zeros(params.value(id).shape().to_vec()))
                .collect::<Vec<_>>()
        };
        Self {
            config,
            m: zeros(),
            v: zeros(),
        }
    }
}

/// Bias-corrected Adam update using the gradients currently held in `params`.
pub fn adam_step(params: &mut ParameterBundle, state: &mut AdamState, t: u64, lr: f64) -> Result<()> {
    if t < 1 {
        return Err(Error::State("adam step index must be >= 1".into()));
    }
    if state.m.len() != params.len() {
        return Err(Error::State(format!(
            "optimizer tracks {} tensors, bundle has {}",
            state.m.len(),
            params.len()
        )));
    }
    let AdamConfig { beta1, beta2, eps } = state.config;
    let bc1 = 1.0 - beta1.powf(t as f64);
    let bc2 = 1.0 - beta2.powf(t as f64);
    for id in params.ids().collect::<Vec<_>>() {
        let k = id.index();
        if state.m[k].shape() != params.value(id).shape() {
            return Err(Error::State(format!(
                "moment shape mismatch for `{}`",
                params.name(id)
            )));
        }
        let g = params.grad(id).data().to_vec();
        let m = state.m[k].data_mut();
        let v = state.v[k].data_mut();
        let w = params.value_mut(id).data_mut();
        for j in 0..w.len() {
            m[j] = beta1 * m[j] + (1.0 - beta1) * g[j];
            v[j] = beta2 * v[j] + (1.0 - beta2) * g[j] * g[j];
            let m_hat = m[j] / bc1;
            let v_hat = v[j] / bc2;
            w[j] -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(value: f64) -> ParameterBundle {
        let mut p = ParameterBundle::new();
        p.insert("w", Tensor::vector(vec![value])).unwrap();
        p
    }

    #[test]
    fn zero_gradient_leaves_params() {
        let mut p = ParameterBundle::new();
        p.insert("w", Tensor::vector(vec![0.5, -1.0])).unwrap();
        let before = p.clone();
        let mut s = AdamState::new(&p);
        adam_step(&mut p, &mut s, 1, 1e-3).unwrap();
        adam_step(&mut p, &mut s, 2, 1e-3).unwrap();
        assert_eq!(p.value(p.id("w").unwrap()), before.value(before.id("w").unwrap()));
    }

    #[test]
    fn first_step_moves_by_lr() {
        let mut p = scalar(1.0);
        let id = p.id("w").unwrap();
        p.grad_mut(id).data_mut()[0] = 0.1;
        let mut s = AdamState::new(&p);
        adam_step(&mut p, &mut s, 1, 1e-4).unwrap();
        let delta = 1.0 - p.value(id).data()[0];
        assert!((delta - 1e-4).abs() < 1e-10, "delta {delta}");
    }

    #[test]
    fn step_zero_is_rejected() {
        let mut p = scalar(1.0);
        let mut s = AdamState::new(&p);
        assert!(matches!(adam_step(&mut p, &mut s, 0, 1e-3), Err(Error::State(_))));
    }

    #[test]
    fn two_steps_match_hand_unroll() {
        let (g, lr, w0) = (0.3, 0.01, 2.0);
        let mut p = scalar(w0);
        let id = p.id("w").unwrap();
        let mut s = AdamState::new(&p);
        for t in 1..=2 {
            p.grad_mut(id).data_mut()[0] = g;
            adam_step(&mut p, &mut s, t, lr).unwrap();
        }
        // m1 = 0.1g, v1 = 0.001g², m2 = 0.19g, v2 = 0.001999g²
        let m1 = 0.1 * g;
        let v1 = 0.001 * g * g;
        let w1 = w0 - lr * (m1 / 0.1) / ((v1 / 0.001).sqrt() + 1e-8);
        let m2 = 0.9 * m1 + 0.1 * g;
        let v2 = 0.999 * v1 + 0.001 * g * g;
        let w2 = w1 - lr * (m2 / (1.0 - 0.81)) / ((v2 / (1.0 - 0.998001)).sqrt() + 1e-8);
        assert!((p.value(id).data()[0] - w2).abs() < 1e-12);
    }
}

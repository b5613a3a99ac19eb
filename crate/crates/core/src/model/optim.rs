use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mlp::ModelParams;
use crate::error::{Error, Result};

/// AdamW constants. The learning rate comes from the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdamWConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub weight_decay: f64,
}

impl Default for AdamWConfig {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            weight_decay: 0.01,
        }
    }
}

/// Single-cycle cosine annealing from `lr_max` at step 0 to `lr_min` at
/// `total_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosineSchedule {
    pub lr_max: f64,
    pub lr_min: f64,
    pub total_steps: u64,
}

impl CosineSchedule {
    pub fn new(lr_max: f64, lr_min: f64, total_steps: u64) -> Result<Self> {
        if !(lr_min >= 0.0 && lr_min <= lr_max && lr_max.is_finite()) {
            return Err(Error::Config(format!(
                "need 0 <= lr_min <= lr_max, got lr_min={lr_min} lr_max={lr_max}"
            )));
        }
        Ok(Self {
            lr_max,
            lr_min,
            total_steps,
        })
    }

    /// Learning rate at `step`; steps past the end stay at `lr_min`.
    pub fn learning_rate(&self, step: u64) -> f64 {
        if step >= self.total_steps {
            return self.lr_min;
        }
        let progress = step as f64 / self.total_steps as f64;
        self.lr_min + 0.5 * (self.lr_max - self.lr_min) * (1.0 + (PI * progress).cos())
    }
}

/// Moment estimates and step counter of an AdamW run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimState {
    pub config: AdamWConfig,
    pub schedule: CosineSchedule,
    pub step: u64,
    first_moment: ModelParams,
    second_moment: ModelParams,
}

impl OptimState {
    pub fn new(params: &ModelParams, config: AdamWConfig, schedule: CosineSchedule) -> Self {
        Self {
            config,
            schedule,
            step: 0,
            first_moment: params.zeros_like(),
            second_moment: params.zeros_like(),
        }
    }

    pub fn learning_rate(&self) -> f64 {
        self.schedule.learning_rate(self.step)
    }

    /// Apply one decoupled-weight-decay Adam update.
    ///
    /// Nothing is modified when a gradient entry is not finite.
    pub fn step(&mut self, params: &mut ModelParams, grads: &ModelParams) -> Result<()> {
        if grads.parameter_count() != params.parameter_count() {
            return Err(Error::ShapeMismatch {
                what: "gradient",
                expected: params.parameter_count(),
                actual: grads.parameter_count(),
            });
        }
        if !grads.is_finite() {
            return Err(Error::NonFinite(format!("gradient at step {}", self.step)));
        }
        let lr = self.learning_rate();
        self.step += 1;
        let AdamWConfig {
            beta1,
            beta2,
            epsilon,
            weight_decay,
        } = self.config;
        let bias1 = 1.0 - beta1.powi(self.step as i32);
        let bias2 = 1.0 - beta2.powi(self.step as i32);

        let tensors = params
            .tensors_mut()
            .zip(grads.tensors())
            .zip(self.first_moment.tensors_mut())
            .zip(self.second_moment.tensors_mut());
        for (((theta, g), m), v) in tensors {
            for i in 0..theta.len() {
                m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
                v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
                let m_hat = m[i] / bias1;
                let v_hat = v[i] / bias2;
                theta[i] -= lr * (m_hat / (v_hat.sqrt() + epsilon)) + lr * weight_decay * theta[i];
            }
        }
        Ok(())
    }
}

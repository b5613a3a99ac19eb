//! The trainable part of the framework: a feedforward network mapping
//! features to a vector of target length times finding count, trained with
//! MSE, AdamW and cosine annealing.

mod checkpoint;
mod mlp;
mod optim;
mod train;

pub use checkpoint::Checkpoint;
pub use mlp::{mse_loss, Layer, MlpConfig, ModelParams};
pub use optim::{AdamWConfig, CosineSchedule, OptimState};
pub use train::{fit, sample_target, train, TrainConfig, TrainedModel};

use crate::error::Result;

/// Learning rate of the cosine schedule at `step`.
pub fn cosine_lr(state: &OptimState, step: u64) -> f64 {
    state.schedule.learning_rate(step)
}

/// One AdamW update of `params` in place.
pub fn adamw_step(
    state: &mut OptimState,
    params: &mut ModelParams,
    grads: &ModelParams,
) -> Result<()> {
    state.step(params, grads)
}

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mlp::{MlpConfig, ModelParams};
use super::optim::{AdamWConfig, CosineSchedule, OptimState};
use crate::data::Sample;
use crate::encoding::{Encoding, OrdinalScale};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub epochs: usize,
    pub lr_max: f64,
    pub lr_min: f64,
    /// Seeds the per-epoch shuffling.
    pub seed: u64,
    pub adamw: AdamWConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            batch_size: 32,
            epochs: 30,
            lr_max: 5e-4,
            lr_min: 0.0,
            seed: 0,
            adamw: AdamWConfig::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be at least 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        CosineSchedule::new(self.lr_max, self.lr_min, 1)?;
        Ok(())
    }

    pub fn steps_per_epoch(&self, samples: usize) -> usize {
        samples.div_ceil(self.batch_size)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub params: ModelParams,
    /// Mean training loss of every epoch, sample-weighted across batches.
    pub loss_history: Vec<f64>,
}

/// Fit a freshly initialized network to `(input, target)` pairs with MSE,
/// AdamW and a cosine learning-rate schedule over the whole run.
pub fn fit(
    mlp: &MlpConfig,
    config: &TrainConfig,
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
) -> Result<TrainedModel> {
    config.validate()?;
    if inputs.is_empty() {
        return Err(Error::Empty("training set"));
    }
    if inputs.len() != targets.len() {
        return Err(Error::ShapeMismatch {
            what: "training targets",
            expected: inputs.len(),
            actual: targets.len(),
        });
    }
    for (x, t) in inputs.iter().zip(targets) {
        if x.len() != mlp.input_dim {
            return Err(Error::ShapeMismatch {
                what: "training input",
                expected: mlp.input_dim,
                actual: x.len(),
            });
        }
        if t.len() != mlp.output_dim {
            return Err(Error::ShapeMismatch {
                what: "training target",
                expected: mlp.output_dim,
                actual: t.len(),
            });
        }
    }

    let mut params = ModelParams::init(mlp)?;
    let n = inputs.len();
    let total_steps = (config.epochs * config.steps_per_epoch(n)) as u64;
    let schedule = CosineSchedule::new(config.lr_max, config.lr_min, total_steps)?;
    let mut optim = OptimState::new(&params, config.adamw, schedule);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut loss_history = Vec::with_capacity(config.epochs);
    let mut x_batch = Vec::with_capacity(config.batch_size * mlp.input_dim);
    let mut t_batch = Vec::with_capacity(config.batch_size * mlp.output_dim);

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(config.batch_size) {
            x_batch.clear();
            t_batch.clear();
            for &i in chunk {
                x_batch.extend_from_slice(&inputs[i]);
                t_batch.extend_from_slice(&targets[i]);
            }
            let (loss, grads) = params.backward(&x_batch, &t_batch, chunk.len())?;
            if !loss.is_finite() {
                return Err(Error::NonFinite(format!("training loss in epoch {epoch}")));
            }
            optim.step(&mut params, &grads)?;
            epoch_loss += loss * chunk.len() as f64;
        }
        loss_history.push(epoch_loss / n as f64);
    }

    Ok(TrainedModel {
        params,
        loss_history,
    })
}

/// Concatenated targets of every finding, in `findings` order.
pub fn sample_target(
    sample: &Sample,
    findings: &[String],
    encoding: &Encoding,
    scale: &OrdinalScale,
) -> Result<Vec<f64>> {
    let mut target = Vec::new();
    for finding in findings {
        let class = sample.label(finding)?;
        target.extend(encoding.encode(scale, class)?);
    }
    Ok(target)
}

/// Train on labelled samples; `mlp.output_dim` must equal the encoding's
/// vector length times the number of findings.
pub fn train(
    mlp: &MlpConfig,
    config: &TrainConfig,
    samples: &[Sample],
    findings: &[String],
    encoding: &Encoding,
    scale: &OrdinalScale,
) -> Result<TrainedModel> {
    if samples.is_empty() {
        return Err(Error::Empty("training set"));
    }
    let expected = encoding.vector_length(scale.class_count())? * findings.len();
    if mlp.output_dim != expected {
        return Err(Error::ShapeMismatch {
            what: "network output",
            expected,
            actual: mlp.output_dim,
        });
    }
    let inputs: Vec<Vec<f64>> = samples.iter().map(|s| s.features.clone()).collect();
    let targets = samples
        .iter()
        .map(|s| sample_target(s, findings, encoding, scale))
        .collect::<Result<Vec<_>>>()?;
    fit(mlp, config, &inputs, &targets)
}

//! Train the MLP on one encoding and watch the loss and learning rate.
//!
//! ```bash
//! cargo run --release -p ordkit --example train_mlp
//! ```

use ordkit::data::{self, SynthConfig};
use ordkit::encoding::{Encoding, EncodingKind, OrdinalScale};
use ordkit::model::{train, CosineSchedule, MlpConfig, TrainConfig};

fn main() -> ordkit::Result<()> {
    let dataset = data::generate(&SynthConfig {
        n_patients: 60,
        ..Default::default()
    })?;
    let findings = dataset.findings();
    let scale = OrdinalScale::severity();
    let encoding = Encoding::new(EncodingKind::SoftProgressBar);

    let mlp = MlpConfig {
        input_dim: dataset.feature_dim(),
        hidden_dims: vec![64],
        output_dim: encoding.vector_length(scale.class_count())? * findings.len(),
        init_seed: 0,
    };
    let config = TrainConfig {
        epochs: 20,
        lr_max: 3e-3,
        ..Default::default()
    };
    let run = train(
        &mlp,
        &config,
        &dataset.samples,
        &findings,
        &encoding,
        &scale,
    )?;

    let steps = (config.steps_per_epoch(dataset.len()) * config.epochs) as u64;
    let schedule = CosineSchedule::new(config.lr_max, config.lr_min, steps)?;
    for (epoch, loss) in run.loss_history.iter().enumerate() {
        let lr = schedule.learning_rate(epoch as u64 * steps / config.epochs as u64);
        println!("epoch {:>2}  lr {lr:.2e}  mse {loss:.5}", epoch + 1);
    }
    println!("{} parameters", run.params.parameter_count());
    Ok(())
}

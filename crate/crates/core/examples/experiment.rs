//! Run a small encoding x classifier comparison and print the ranked table.
//!
//! ```bash
//! cargo run --release -p ordkit --example experiment
//! ```

use ordkit::data::SynthConfig;
use ordkit::harness::{rank_change_report, run_experiment, DataSource, ExperimentConfig};
use ordkit::model::TrainConfig;

fn main() -> ordkit::Result<()> {
    let config = ExperimentConfig {
        data: DataSource::Synth(SynthConfig {
            n_patients: 80,
            ..Default::default()
        }),
        train: TrainConfig {
            epochs: 15,
            lr_max: 2e-3,
            ..Default::default()
        },
        n_folds: 3,
        ..Default::default()
    };
    let table = run_experiment(&config)?;
    println!("{}", table.to_markdown());
    print!("{}", rank_change_report(&table).to_text());
    Ok(())
}

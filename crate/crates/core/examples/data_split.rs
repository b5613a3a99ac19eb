//! Generate a synthetic dataset, save it as JSON-Lines and split it by patient.
//!
//! ```bash
//! cargo run -p ordkit --example data_split
//! ```

use ordkit::data::{self, SynthConfig};

fn main() -> ordkit::Result<()> {
    let config = SynthConfig {
        n_patients: 23,
        samples_per_patient: 4,
        n_findings: 3,
        ..Default::default()
    };
    let dataset = data::generate(&config)?;
    println!(
        "{} samples, {} features, findings {:?}",
        dataset.len(),
        dataset.feature_dim(),
        dataset.findings()
    );

    let dir = std::env::temp_dir().join("ordkit-data-split");
    let path = dir.join("dataset.jsonl");
    std::fs::create_dir_all(&dir).map_err(|e| ordkit::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    data::save(&dataset, &path)?;
    let loaded = data::load(&path)?;
    assert_eq!(loaded, dataset);
    println!("round-tripped through {}", path.display());

    let plan = data::split(&loaded, 0.2, 5, 7)?;
    println!("test patients: {:?}", plan.test_patient_ids);
    for (i, fold) in plan.folds.iter().enumerate() {
        println!(
            "fold {i}: {} patients held out, {} left for training",
            fold.len(),
            plan.train_patients(i).len()
        );
    }
    plan.check(&loaded)?;
    Ok(())
}

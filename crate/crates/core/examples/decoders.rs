//! Decode noisy network outputs with each compatible classifier.
//!
//! ```bash
//! cargo run -p ordkit --example decoders
//! ```

use ordkit::classify::{classify, is_compatible, ClassifierKind};
use ordkit::encoding::{Encoding, EncodingKind, OrdinalScale};

fn main() -> ordkit::Result<()> {
    let scale = OrdinalScale::severity();

    // the same "somewhere between ++ and +++" output, phrased per encoding
    let outputs = [
        (EncodingKind::OneHot, vec![0.0, 0.05, 0.1, 0.6, 0.45]),
        (EncodingKind::Gaussian, vec![0.01, 0.05, 0.2, 0.38, 0.3]),
        (EncodingKind::ProgressBar, vec![0.95, 0.9, 0.8, 0.45]),
        (
            EncodingKind::SoftProgressBar,
            vec![0.97, 0.9, 0.85, 0.6, 0.2],
        ),
        (EncodingKind::Continuous, vec![0.81]),
        (EncodingKind::BinaryNumber, vec![0.9, 0.1, 0.2]),
    ];
    for (kind, y) in outputs {
        let targets = Encoding::new(kind).target_matrix(&scale)?;
        print!("{:<14}", kind.short_name());
        for classifier in ClassifierKind::ALL {
            if is_compatible(kind, classifier) {
                let k = classify(classifier, &y, &targets)?;
                print!("  {}={}", classifier.short_name(), scale.label(k)?);
            }
        }
        println!();
    }

    // invalid pairs are rejected rather than silently decoded
    let bar = Encoding::new(EncodingKind::ProgressBar).target_matrix(&scale)?;
    let err = classify(ClassifierKind::Argmax, &[1.0, 1.0, 0.0, 0.0], &bar).unwrap_err();
    println!("Prog-Bar with Argmax: {err}");
    Ok(())
}

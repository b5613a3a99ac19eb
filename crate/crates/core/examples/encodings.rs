//! Print the target vector of every encoding on the five-level severity scale.
//!
//! ```bash
//! cargo run -p ordkit --example encodings
//! ```

use ordkit::encoding::{Encoding, EncodingKind, OrdinalScale};

fn main() -> ordkit::Result<()> {
    let scale = OrdinalScale::severity();
    for kind in EncodingKind::ALL {
        let targets = Encoding::new(kind).target_matrix(&scale)?;
        println!("{} (d = {})", kind.short_name(), targets.dim());
        for (k, row) in targets.iter() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:6.3}")).collect();
            println!("  {:>4}  [{}]", scale.label(k)?, cells.join(", "));
        }
    }

    // a wider Gaussian smears more mass onto neighbouring classes
    let wide = Encoding::gaussian(2.0)?.encode(&scale, 3)?;
    println!("Gauss sigma^2=2, class 3: {wide:.3?}");
    Ok(())
}

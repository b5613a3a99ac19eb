//! Cohen's kappa under the three weightings, per finding and macro-averaged.
//!
//! ```bash
//! cargo run -p ordkit --example kappa
//! ```

use ordkit::metrics::{kappa, macro_average, ConfusionMatrix, Weighting};

fn main() -> ordkit::Result<()> {
    // rows are the reference grade, columns the prediction
    let near_misses = ConfusionMatrix::from_rows(&[
        vec![30, 6, 0, 0, 0],
        vec![5, 18, 5, 0, 0],
        vec![0, 4, 12, 4, 0],
        vec![0, 0, 3, 7, 2],
        vec![0, 0, 0, 1, 3],
    ])?;
    let far_misses = ConfusionMatrix::from_rows(&[
        vec![30, 0, 0, 0, 6],
        vec![0, 18, 0, 10, 0],
        vec![4, 0, 12, 0, 4],
        vec![0, 3, 0, 7, 2],
        vec![1, 0, 0, 0, 3],
    ])?;

    let mut per_weighting = Vec::new();
    for w in Weighting::ALL {
        let a = kappa(&near_misses, w)?;
        let b = kappa(&far_misses, w)?;
        println!(
            "{:<10} near {:.3} (p_o {:.3}, p_c {:.3})   far {:.3}",
            w.title(),
            a.value,
            a.observed,
            a.chance,
            b.value
        );
        per_weighting.push(macro_average(&[a.value, b.value])?);
    }
    // weighting rewards errors that land on a neighbouring grade
    println!("macro averages: {per_weighting:.3?}");
    Ok(())
}

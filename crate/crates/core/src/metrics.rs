//! Confusion matrices and Cohen's kappa with agreement weights.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts of (true class, predicted class) pairs. Rows are the truth,
/// columns the prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    class_count: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(class_count: usize) -> Self {
        Self {
            class_count,
            counts: vec![0; class_count * class_count],
        }
    }

    /// Build from a row-major `K x K` table of counts.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::Empty("confusion matrix"));
        }
        let mut m = Self::new(k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::ShapeMismatch {
                    what: "confusion matrix row",
                    expected: k,
                    actual: row.len(),
                });
            }
            m.counts[i * k..(i + 1) * k].copy_from_slice(row);
        }
        Ok(m)
    }

    /// Tally `(true, predicted)` class pairs, both 1-based.
    pub fn from_pairs(
        class_count: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut m = Self::new(class_count);
        for (truth, predicted) in pairs {
            m.record(truth, predicted)?;
        }
        Ok(m)
    }

    pub fn record(&mut self, truth: usize, predicted: usize) -> Result<()> {
        for class in [truth, predicted] {
            if class == 0 || class > self.class_count {
                return Err(Error::InvalidClass {
                    class,
                    class_count: self.class_count,
                });
            }
        }
        self.counts[(truth - 1) * self.class_count + (predicted - 1)] += 1;
        Ok(())
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Count at 1-based `(truth, predicted)`.
    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[(truth - 1) * self.class_count + (predicted - 1)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Proportions `p_ij`, row-major.
    pub fn proportions(&self) -> Vec<f64> {
        let total = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    Unweighted,
    Linear,
    Quadratic,
}

impl Weighting {
    pub const ALL: [Weighting; 3] = [
        Weighting::Unweighted,
        Weighting::Linear,
        Weighting::Quadratic,
    ];

    /// Agreement weight for the 1-based class pair `(i, j)`: 1 on the
    /// diagonal, 0 at maximal disagreement.
    pub fn weight(self, i: usize, j: usize, class_count: usize) -> f64 {
        let span = (class_count - 1) as f64;
        let diff = i.abs_diff(j) as f64;
        match self {
            Weighting::Unweighted => {
                if i == j {
                    1.0
                } else {
                    0.0
                }
            }
            Weighting::Linear => 1.0 - diff / span,
            Weighting::Quadratic => 1.0 - (diff * diff) / (span * span),
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Weighting::Unweighted => "unweighted",
            Weighting::Linear => "linear",
            Weighting::Quadratic => "quadratic",
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaResult {
    pub value: f64,
    /// Weighted observed agreement.
    pub observed: f64,
    /// Weighted chance agreement.
    pub chance: f64,
}

/// Weighted Cohen's kappa `(p_o - p_c) / (1 - p_c)`.
#[allow(clippy::needless_range_loop)]
pub fn kappa(confusion: &ConfusionMatrix, weighting: Weighting) -> Result<KappaResult> {
    if confusion.total() == 0 {
        return Err(Error::Empty("confusion matrix has no samples"));
    }
    let k = confusion.class_count();
    let n = confusion.total() as f64;
    let mut row_marginal = vec![0.0; k];
    let mut col_marginal = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            let c = confusion.get(i + 1, j + 1) as f64;
            row_marginal[i] += c;
            col_marginal[j] += c;
        }
    }
    // Sum weighted counts and normalize once, so a purely diagonal matrix
    // yields observed == 1 exactly.
    let mut observed = 0.0;
    let mut chance = 0.0;
    for i in 0..k {
        for j in 0..k {
            let w = weighting.weight(i + 1, j + 1, k);
            observed += w * confusion.get(i + 1, j + 1) as f64;
            chance += w * row_marginal[i] * col_marginal[j];
        }
    }
    let observed = observed / n;
    let chance = chance / (n * n);
    if chance >= 1.0 {
        return Err(Error::UndefinedKappa);
    }
    Ok(KappaResult {
        value: (observed - chance) / (1.0 - chance),
        observed,
        chance,
    })
}

/// Arithmetic mean of per-finding kappas.
pub fn macro_average(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("no per-finding values to average"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("per-finding kappa {v}")));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Mean and sample standard deviation (n - 1 denominator).
pub fn fold_spread(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::Empty("need at least two fold values for a spread"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, var.sqrt()))
}

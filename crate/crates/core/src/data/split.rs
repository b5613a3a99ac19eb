use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

/// A held-out test set of patients plus cross-validation folds over the
/// remaining patients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitPlan {
    pub test_patient_ids: BTreeSet<u64>,
    pub folds: Vec<BTreeSet<u64>>,
}

impl SplitPlan {
    /// Patients used for training when `fold` is held out.
    pub fn train_patients(&self, fold: usize) -> BTreeSet<u64> {
        self.folds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != fold)
            .flat_map(|(_, f)| f.iter().copied())
            .collect()
    }

    /// Check that the partitions are disjoint and cover exactly the
    /// patients of `dataset`.
    pub fn check(&self, dataset: &Dataset) -> Result<()> {
        let mut seen = self.test_patient_ids.clone();
        let mut total = seen.len();
        for fold in &self.folds {
            total += fold.len();
            seen.extend(fold.iter().copied());
        }
        if seen.len() != total {
            return Err(Error::Config("split partitions overlap".into()));
        }
        if seen != dataset.patient_ids() {
            return Err(Error::Config(
                "split does not cover exactly the dataset's patients".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("split plan serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// Patient-wise split: shuffle the distinct patients, take the first
/// `floor(n * test_fraction)` (at least one) as the test set and deal the
/// rest round-robin into `n_folds` folds.
pub fn split(
    dataset: &Dataset,
    test_fraction: f64,
    n_folds: usize,
    seed: u64,
) -> Result<SplitPlan> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(Error::Config(format!(
            "test_fraction must lie in [0, 1), got {test_fraction}"
        )));
    }
    if n_folds < 2 {
        return Err(Error::Config(format!(
            "need at least 2 folds, got {n_folds}"
        )));
    }
    let mut patients: Vec<u64> = dataset.patient_ids().into_iter().collect();
    let n = patients.len();
    // tolerate products like 0.29 * 100 = 28.999999999999996
    let n_test = ((n as f64 * test_fraction + 1e-9).floor() as usize).max(1);
    if n < n_test + n_folds {
        return Err(Error::TooFewPatients {
            needed: n_test + n_folds,
            found: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    patients.shuffle(&mut rng);

    let test_patient_ids = patients[..n_test].iter().copied().collect();
    let mut folds = vec![BTreeSet::new(); n_folds];
    for (i, &p) in patients[n_test..].iter().enumerate() {
        folds[i % n_folds].insert(p);
    }
    Ok(SplitPlan {
        test_patient_ids,
        folds,
    })
}

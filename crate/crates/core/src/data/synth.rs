use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{Dataset, Sample};
use crate::error::{Error, Result};

const CHEST_FINDINGS: [&str; 7] = [
    "congestion",
    "effusion_left",
    "effusion_right",
    "infiltrates_left",
    "infiltrates_right",
    "atelectasis_left",
    "atelectasis_right",
];

/// Finding names for `count` findings: seven chest findings first, then
/// numbered ones.
pub fn default_findings(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| match CHEST_FINDINGS.get(i) {
            Some(name) => name.to_string(),
            None => format!("finding_{}", i + 1),
        })
        .collect()
}

/// Parameters of the synthetic severity generator.
///
/// Every sample draws one uniform latent severity per finding. The true
/// class bins the latent into `class_count` equal intervals, the features
/// are a fixed random linear map of all latents plus Gaussian noise, and
/// with probability `label_noise_prob` the stored label moves one class
/// away from the true one (inwards at the ends of the scale).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub n_patients: usize,
    pub samples_per_patient: usize,
    pub n_findings: usize,
    pub class_count: usize,
    pub feature_dim: usize,
    pub feature_noise_sd: f64,
    pub label_noise_prob: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_patients: 200,
            samples_per_patient: 10,
            n_findings: 7,
            class_count: 5,
            feature_dim: 16,
            feature_noise_sd: 0.05,
            label_noise_prob: 0.05,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_patients", self.n_patients),
            ("samples_per_patient", self.samples_per_patient),
            ("n_findings", self.n_findings),
            ("feature_dim", self.feature_dim),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be at least 1")));
        }
        if self.class_count < 2 {
            return Err(Error::InvalidScale(format!(
                "need at least 2 classes, got {}",
                self.class_count
            )));
        }
        if !(self.feature_noise_sd >= 0.0 && self.feature_noise_sd.is_finite()) {
            return Err(Error::Config(
                "feature_noise_sd must be finite and >= 0".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.label_noise_prob) {
            return Err(Error::Config("label_noise_prob must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Class of a latent severity in `[0, 1)`.
pub(crate) fn latent_class(z: f64, class_count: usize) -> usize {
    ((z * class_count as f64).floor() as usize + 1).min(class_count)
}

/// Generate a dataset. Patients are numbered from 0; findings use
/// [`default_findings`].
pub fn generate(config: &SynthConfig) -> Result<Dataset> {
    let (dataset, _) = generate_with_latents(config)?;
    Ok(dataset)
}

/// Like [`generate`], also returning each sample's latent severities.
pub fn generate_with_latents(config: &SynthConfig) -> Result<(Dataset, Vec<Vec<f64>>)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let findings = default_findings(config.n_findings);
    let k = config.class_count;
    let mixing: Vec<f64> = (0..config.feature_dim * config.n_findings)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let noise = Normal::new(0.0, config.feature_noise_sd).expect("validated noise sd");

    let total = config.n_patients * config.samples_per_patient;
    let mut samples = Vec::with_capacity(total);
    let mut latents = Vec::with_capacity(total);
    for patient in 0..config.n_patients {
        for _ in 0..config.samples_per_patient {
            let z: Vec<f64> = (0..config.n_findings)
                .map(|_| rng.random::<f64>())
                .collect();
            let features = mixing
                .chunks_exact(config.n_findings)
                .map(|row| {
                    let clean: f64 = row.iter().zip(&z).map(|(m, z)| m * z).sum();
                    clean + noise.sample(&mut rng)
                })
                .collect();
            let mut labels = BTreeMap::new();
            for (name, &latent) in findings.iter().zip(&z) {
                let truth = latent_class(latent, k);
                let flip = rng.random::<f64>() < config.label_noise_prob;
                let upward = rng.random::<bool>();
                let stored = if !flip {
                    truth
                } else if truth == 1 {
                    2
                } else if truth == k || !upward {
                    truth - 1
                } else {
                    truth + 1
                };
                labels.insert(name.clone(), stored);
            }
            samples.push(Sample {
                patient_id: patient as u64,
                features,
                labels,
            });
            latents.push(z);
        }
    }
    Ok((Dataset { samples }, latents))
}

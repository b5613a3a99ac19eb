use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use super::config::{DataSource, ExperimentConfig};
use super::table::{ClassifierLabel, MethodResult, ResultTable, Score, TableMetadata};
use crate::classify::{classify, ClassifierKind};
use crate::data::{self, Dataset, Sample, SplitPlan};
use crate::encoding::{Encoding, EncodingKind, TargetMatrix};
use crate::error::{Error, Result};
use crate::metrics::{fold_spread, kappa, macro_average, ConfusionMatrix, Weighting};
use crate::model::{train, MlpConfig, ModelParams, TrainConfig, TrainedModel};

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Shuffling seed of one (encoding, fold) training job.
pub fn job_seed(run_seed: u64, encoding: EncodingKind, fold: usize) -> u64 {
    mix(mix(mix(run_seed) ^ encoding.id()) ^ fold as u64)
}

/// Outcome of one (encoding, fold) training job.
#[derive(Debug, Clone)]
pub struct GridCell {
    pub encoding: Encoding,
    pub fold: usize,
    /// `Err` holds the divergence message of a failed run.
    pub outcome: std::result::Result<TrainedModel, String>,
}

#[derive(Debug, Clone)]
pub struct TrainedGrid {
    pub cells: Vec<GridCell>,
    started_unix: u64,
}

impl TrainedGrid {
    /// Trained models of `encoding`, indexed by fold; failed folds are `None`.
    pub fn models(&self, encoding: EncodingKind) -> Vec<Option<&ModelParams>> {
        self.cells
            .iter()
            .filter(|c| c.encoding.kind == encoding)
            .map(|c| c.outcome.as_ref().ok().map(|m| &m.params))
            .collect()
    }
}

/// A prepared experiment: data loaded, patients split, test set fixed.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub dataset: Dataset,
    pub plan: SplitPlan,
    pub test_set: Vec<Sample>,
}

impl Experiment {
    pub fn prepare(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let dataset = match &config.data {
            DataSource::Synth(synth) => {
                let mut ds = data::generate(synth)?;
                ds.rename_findings(&config.findings)?;
                ds
            }
            DataSource::Path(path) => data::load(path)?,
        };
        if dataset.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        dataset.validate(&config.findings, &config.scale)?;
        let plan = data::split(
            &dataset,
            config.test_fraction,
            config.n_folds,
            config.split_seed,
        )?;
        let test_set = dataset.select(&plan.test_patient_ids);
        Ok(Self {
            config,
            dataset,
            plan,
            test_set,
        })
    }

    pub fn mlp_config(&self, encoding: &Encoding) -> Result<MlpConfig> {
        let d = encoding.vector_length(self.config.scale.class_count())?;
        Ok(MlpConfig {
            input_dim: self.dataset.feature_dim(),
            hidden_dims: self.config.model.hidden_dims.clone(),
            output_dim: d * self.config.findings.len(),
            init_seed: self.config.model.init_seed,
        })
    }

    pub fn train_config(&self, encoding: &Encoding, fold: usize) -> TrainConfig {
        TrainConfig {
            seed: job_seed(self.config.run_seed, encoding.kind, fold),
            ..self.config.train.clone()
        }
    }

    pub fn fold_train_set(&self, fold: usize) -> Vec<Sample> {
        self.dataset.select(&self.plan.train_patients(fold))
    }

    fn train_job(&self, encoding: Encoding, fold: usize) -> Result<GridCell> {
        let samples = self.fold_train_set(fold);
        let outcome = match train(
            &self.mlp_config(&encoding)?,
            &self.train_config(&encoding, fold),
            &samples,
            &self.config.findings,
            &encoding,
            &self.config.scale,
        ) {
            Ok(model) => Ok(model),
            Err(Error::NonFinite(message)) => Err(message),
            Err(other) => return Err(other),
        };
        Ok(GridCell {
            encoding,
            fold,
            outcome,
        })
    }

    /// Train one model per (encoding, fold) on `jobs` worker threads
    /// (`0` picks the number of CPUs). The result does not depend on `jobs`.
    pub fn train_grid(&self, jobs: usize) -> Result<TrainedGrid> {
        let started_unix = unix_now();
        let work: Vec<(Encoding, usize)> = self
            .config
            .encodings
            .iter()
            .flat_map(|e| (0..self.config.n_folds).map(move |f| (*e, f)))
            .collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        let cells = pool.install(|| {
            work.par_iter()
                .map(|&(encoding, fold)| self.train_job(encoding, fold))
                .collect::<Result<Vec<_>>>()
        })?;
        for encoding in &self.config.encodings {
            if cells
                .iter()
                .filter(|c| c.encoding.kind == encoding.kind)
                .all(|c| c.outcome.is_err())
            {
                return Err(Error::AllFoldsFailed(encoding.kind));
            }
        }
        Ok(TrainedGrid {
            cells,
            started_unix,
        })
    }

    /// Model outputs for the test set, one vector per sample.
    pub fn test_outputs(&self, params: &ModelParams) -> Result<Vec<Vec<f64>>> {
        let x: Vec<f64> = self
            .test_set
            .iter()
            .flat_map(|s| s.features.iter().copied())
            .collect();
        let flat = params.forward_batch(&x, self.test_set.len())?;
        Ok(flat
            .chunks_exact(params.output_dim())
            .map(<[f64]>::to_vec)
            .collect())
    }

    /// Per-finding confusion matrices of a model on the test set.
    pub fn confusion_matrices(
        &self,
        params: &ModelParams,
        encoding: &Encoding,
        classifier: ClassifierKind,
    ) -> Result<Vec<ConfusionMatrix>> {
        let targets = encoding.target_matrix(&self.config.scale)?;
        let outputs = self.test_outputs(params)?;
        confusion_matrices(
            &outputs,
            &self.test_set,
            &self.config.findings,
            &targets,
            classifier,
        )
    }

    /// Decode every fold model under every requested classifier and
    /// aggregate into a ranked table.
    pub fn evaluate(&self, grid: &TrainedGrid) -> Result<ResultTable> {
        let mut rows = Vec::new();
        for encoding in &self.config.encodings {
            let targets = encoding.target_matrix(&self.config.scale)?;
            let models = grid.models(encoding.kind);
            let outputs = models
                .iter()
                .map(|m| m.map(|p| self.test_outputs(p)).transpose())
                .collect::<Result<Vec<_>>>()?;
            for label in self.row_labels(encoding.kind) {
                let mut row = MethodResult::new(encoding.kind, label);
                for fold_outputs in &outputs {
                    let kappas = match fold_outputs {
                        Some(out) => self.fold_kappas(out, &targets, label.decoder())?,
                        None => [None; 3],
                    };
                    row.fold_kappas.push(kappas);
                }
                for w in 0..3 {
                    let values: Vec<f64> = row.fold_kappas.iter().filter_map(|k| k[w]).collect();
                    row.scores[w] = fold_spread(&values)
                        .ok()
                        .map(|(mean, sd)| Score { mean, sd });
                }
                rows.push(row);
            }
        }
        let mut table = ResultTable {
            rows,
            metadata: Some(TableMetadata {
                config_hash: self.config.hash(),
                split_seed: self.config.split_seed,
                run_seed: self.config.run_seed,
                started_unix: grid.started_unix,
                finished_unix: unix_now(),
            }),
        };
        table.assign_ranks();
        Ok(table)
    }

    /// Table rows for one encoding; one-hot merges into `All` when every
    /// classifier is requested.
    fn row_labels(&self, encoding: EncodingKind) -> Vec<ClassifierLabel> {
        let pairs: Vec<ClassifierKind> = self
            .config
            .method_pairs()
            .filter(|(e, _)| e.kind == encoding)
            .map(|(_, c)| c)
            .collect();
        if encoding == EncodingKind::OneHot && pairs.len() == ClassifierKind::ALL.len() {
            vec![ClassifierLabel::All]
        } else {
            pairs.into_iter().map(ClassifierLabel::Single).collect()
        }
    }

    /// Macro-averaged kappa per weighting; `None` where a finding's kappa is
    /// undefined or the decoder hit a zero output.
    fn fold_kappas(
        &self,
        outputs: &[Vec<f64>],
        targets: &TargetMatrix,
        classifier: ClassifierKind,
    ) -> Result<[Option<f64>; 3]> {
        let matrices = match confusion_matrices(
            outputs,
            &self.test_set,
            &self.config.findings,
            targets,
            classifier,
        ) {
            Ok(m) => m,
            Err(Error::DegenerateOutput) => return Ok([None; 3]),
            Err(e) => return Err(e),
        };
        let mut result = [None; 3];
        for (slot, weighting) in result.iter_mut().zip(Weighting::ALL) {
            let per_finding: Option<Vec<f64>> = matrices
                .iter()
                .map(|m| kappa(m, weighting).ok().map(|k| k.value))
                .collect();
            *slot = per_finding.and_then(|v| macro_average(&v).ok());
        }
        Ok(result)
    }
}

/// Decode `outputs` finding by finding and tally against the labels of
/// `samples`.
pub fn confusion_matrices(
    outputs: &[Vec<f64>],
    samples: &[Sample],
    findings: &[String],
    targets: &TargetMatrix,
    classifier: ClassifierKind,
) -> Result<Vec<ConfusionMatrix>> {
    let d = targets.dim();
    let k = targets.class_count();
    let mut matrices = vec![ConfusionMatrix::new(k); findings.len()];
    for (output, sample) in outputs.iter().zip(samples) {
        if output.len() != d * findings.len() {
            return Err(Error::ShapeMismatch {
                what: "model output",
                expected: d * findings.len(),
                actual: output.len(),
            });
        }
        for ((finding, chunk), matrix) in findings
            .iter()
            .zip(output.chunks_exact(d))
            .zip(matrices.iter_mut())
        {
            let predicted = classify(classifier, chunk, targets)?;
            matrix.record(sample.label(finding)?, predicted)?;
        }
    }
    Ok(matrices)
}

/// Prepare, train on `jobs` threads and evaluate.
pub fn run_experiment_with_jobs(config: &ExperimentConfig, jobs: usize) -> Result<ResultTable> {
    let experiment = Experiment::prepare(config.clone())?;
    let grid = experiment.train_grid(jobs)?;
    experiment.evaluate(&grid)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultTable> {
    run_experiment_with_jobs(config, 0)
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

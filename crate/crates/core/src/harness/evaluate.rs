use std::fmt::Write as _;

use super::experiment::confusion_matrices;
use super::table::Format;
use crate::classify::{is_compatible, ClassifierKind};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::metrics::{kappa, macro_average, Weighting};
use crate::model::Checkpoint;

/// Kappas of one checkpoint under one classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierEvaluation {
    pub classifier: ClassifierKind,
    /// `(finding, [unweighted, linear, quadratic])`; `None` marks an
    /// undefined kappa.
    pub per_finding: Vec<(String, [Option<f64>; 3])>,
    pub macro_average: [Option<f64>; 3],
}

/// Decode `dataset` with a stored model under every requested classifier
/// that fits the checkpoint's encoding.
pub fn evaluate_checkpoint(
    checkpoint: &Checkpoint,
    dataset: &Dataset,
    classifiers: &[ClassifierKind],
) -> Result<Vec<ClassifierEvaluation>> {
    checkpoint.validate()?;
    if dataset.is_empty() {
        return Err(Error::Empty("evaluation dataset"));
    }
    dataset.validate(&checkpoint.findings, &checkpoint.scale)?;
    if dataset.feature_dim() != checkpoint.mlp.input_dim {
        return Err(Error::ShapeMismatch {
            what: "dataset features",
            expected: checkpoint.mlp.input_dim,
            actual: dataset.feature_dim(),
        });
    }
    let targets = checkpoint.encoding.target_matrix(&checkpoint.scale)?;
    let x: Vec<f64> = dataset
        .samples
        .iter()
        .flat_map(|s| s.features.iter().copied())
        .collect();
    let flat = checkpoint.params.forward_batch(&x, dataset.len())?;
    let outputs: Vec<Vec<f64>> = flat
        .chunks_exact(checkpoint.params.output_dim())
        .map(<[f64]>::to_vec)
        .collect();

    let mut results = Vec::new();
    for &classifier in classifiers {
        if !is_compatible(checkpoint.encoding.kind, classifier) {
            continue;
        }
        let matrices = confusion_matrices(
            &outputs,
            &dataset.samples,
            &checkpoint.findings,
            &targets,
            classifier,
        )?;
        let per_finding: Vec<(String, [Option<f64>; 3])> = checkpoint
            .findings
            .iter()
            .zip(&matrices)
            .map(|(f, m)| {
                let values = Weighting::ALL.map(|w| kappa(m, w).ok().map(|k| k.value));
                (f.clone(), values)
            })
            .collect();
        let macro_avg = [0, 1, 2].map(|w| {
            let values: Option<Vec<f64>> = per_finding.iter().map(|(_, v)| v[w]).collect();
            values.and_then(|v| macro_average(&v).ok())
        });
        results.push(ClassifierEvaluation {
            classifier,
            per_finding,
            macro_average: macro_avg,
        });
    }
    if results.is_empty() {
        return Err(Error::Config(format!(
            "no requested classifier can decode {} targets",
            checkpoint.encoding.kind
        )));
    }
    Ok(results)
}

fn value(v: Option<f64>) -> String {
    v.map_or("undefined".to_string(), |x| format!("{x:.6}"))
}

pub fn render_evaluation(results: &[ClassifierEvaluation], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => out.push_str("class_fn,finding,unweighted,linear,quadratic\n"),
        Format::Markdown => {
            out.push_str("| Class.-fn | Finding | Unweight. κ | Lin. κ | Quad. κ |\n");
            out.push_str("|---|---|---:|---:|---:|\n");
        }
    }
    for r in results {
        let rows = r
            .per_finding
            .iter()
            .map(|(f, v)| (f.as_str(), *v))
            .chain(std::iter::once(("macro", r.macro_average)));
        for (finding, v) in rows {
            let cells = [
                r.classifier.short_name().to_string(),
                finding.to_string(),
                value(v[0]),
                value(v[1]),
                value(v[2]),
            ];
            let _ = match format {
                Format::Csv => writeln!(out, "{}", cells.join(",")),
                Format::Markdown => writeln!(out, "| {} |", cells.join(" | ")),
            };
        }
    }
    out
}

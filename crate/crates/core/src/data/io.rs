use std::fs;
use std::path::Path;

use super::{Dataset, Sample};
use crate::error::{Error, Result};

/// One JSON object per line: `patient_id`, `features`, `labels`.
pub fn to_jsonl(dataset: &Dataset) -> String {
    let mut out = String::new();
    for sample in &dataset.samples {
        out.push_str(&serde_json::to_string(sample).expect("sample serializes"));
        out.push('\n');
    }
    out
}

pub fn save(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_jsonl(dataset)).map_err(|e| Error::io(path, e))
}

pub fn load(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(&text)
}

/// Parse JSON-Lines; every sample must carry the same findings and feature
/// length as the first one. Blank lines are skipped.
pub fn parse_jsonl(text: &str) -> Result<Dataset> {
    let mut samples: Vec<Sample> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let sample: Sample = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if let Some(first) = samples.first() {
            if let Some(missing) = first
                .labels
                .keys()
                .find(|k| !sample.labels.contains_key(*k))
            {
                return Err(Error::Schema {
                    line: line_no,
                    message: format!("missing finding `{missing}`"),
                });
            }
            if let Some(extra) = sample
                .labels
                .keys()
                .find(|k| !first.labels.contains_key(*k))
            {
                return Err(Error::Schema {
                    line: line_no,
                    message: format!("unexpected finding `{extra}`"),
                });
            }
            if sample.features.len() != first.features.len() {
                return Err(Error::Schema {
                    line: line_no,
                    message: format!(
                        "{} features, expected {}",
                        sample.features.len(),
                        first.features.len()
                    ),
                });
            }
        }
        if let Some((finding, _)) = sample.labels.iter().find(|(_, &c)| c == 0) {
            return Err(Error::Schema {
                line: line_no,
                message: format!("class 0 for `{finding}`; classes start at 1"),
            });
        }
        samples.push(sample);
    }
    Ok(Dataset { samples })
}

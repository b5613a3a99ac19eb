use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::ClassifierKind;
use crate::encoding::EncodingKind;
use crate::error::{Error, Result};
use crate::metrics::Weighting;

/// Decoder column of a result row. One-hot models decode identically under
/// every classifier, so their rows merge into `All`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierLabel {
    Single(ClassifierKind),
    All,
}

impl ClassifierLabel {
    pub fn short_name(self) -> &'static str {
        match self {
            ClassifierLabel::Single(kind) => kind.short_name(),
            ClassifierLabel::All => "All",
        }
    }

    pub fn from_short_name(name: &str) -> Option<Self> {
        if name == "All" {
            return Some(ClassifierLabel::All);
        }
        ClassifierKind::from_short_name(name).map(ClassifierLabel::Single)
    }

    /// Classifier actually used to decode this row.
    pub fn decoder(self) -> ClassifierKind {
        match self {
            ClassifierLabel::Single(kind) => kind,
            ClassifierLabel::All => ClassifierKind::Argmax,
        }
    }
}

/// Mean kappa and sample SD across fold models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub mean: f64,
    pub sd: f64,
}

impl Score {
    /// `0.420±1.09e-3`
    pub fn cell(&self) -> String {
        format!("{:.3}±{:.2e}", self.mean, self.sd)
    }

    fn parse_cell(text: &str) -> Option<Self> {
        let (mean, sd) = text.split_once('±')?;
        Some(Score {
            mean: mean.trim().parse().ok()?,
            sd: sd.trim().parse().ok()?,
        })
    }
}

const FAILED_CELL: &str = "—";

fn weighting_index(weighting: Weighting) -> usize {
    match weighting {
        Weighting::Unweighted => 0,
        Weighting::Linear => 1,
        Weighting::Quadratic => 2,
    }
}

/// One (encoding, classifier) row of a result table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub encoding: EncodingKind,
    pub classifier: ClassifierLabel,
    /// Unweighted, linear and quadratic scores; `None` when too few fold
    /// models produced a kappa.
    pub scores: [Option<Score>; 3],
    pub ranks: [usize; 3],
    /// Macro-averaged kappa of every fold model, same weighting order.
    #[serde(default)]
    pub fold_kappas: Vec<[Option<f64>; 3]>,
}

impl MethodResult {
    pub fn new(encoding: EncodingKind, classifier: ClassifierLabel) -> Self {
        Self {
            encoding,
            classifier,
            scores: [None; 3],
            ranks: [0; 3],
            fold_kappas: Vec::new(),
        }
    }

    /// Display name such as `Gauss-L1`.
    pub fn name(&self) -> String {
        format!(
            "{}-{}",
            self.encoding.short_name(),
            self.classifier.short_name()
        )
    }

    pub fn score(&self, weighting: Weighting) -> Option<Score> {
        self.scores[weighting_index(weighting)]
    }

    pub fn rank(&self, weighting: Weighting) -> usize {
        self.ranks[weighting_index(weighting)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub config_hash: String,
    pub split_seed: u64,
    pub run_seed: u64,
    pub started_unix: u64,
    pub finished_unix: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<MethodResult>,
    pub metadata: Option<TableMetadata>,
}

/// Competition ranking, best (largest) first. Missing values share the rank
/// after every present value.
pub fn competition_ranks(values: &[Option<f64>]) -> Vec<usize> {
    let present = values.iter().filter(|v| v.is_some()).count();
    values
        .iter()
        .map(|v| match v {
            Some(x) => 1 + values.iter().flatten().filter(|y| *y > x).count(),
            None => present + 1,
        })
        .collect()
}

/// Ranks of every row of `table` under `weighting`.
pub fn rank(table: &ResultTable, weighting: Weighting) -> Vec<usize> {
    let means: Vec<Option<f64>> = table
        .rows
        .iter()
        .map(|r| r.score(weighting).map(|s| s.mean))
        .collect();
    competition_ranks(&means)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

const CSV_HEADER: [&str; 8] = [
    "target_fn",
    "class_fn",
    "unweighted_kappa",
    "unweighted_rank",
    "linear_kappa",
    "linear_rank",
    "quadratic_kappa",
    "quadratic_rank",
];

impl ResultTable {
    /// Recompute every row's ranks.
    pub fn assign_ranks(&mut self) {
        for weighting in Weighting::ALL {
            let ranks = rank(self, weighting);
            let w = weighting_index(weighting);
            for (row, r) in self.rows.iter_mut().zip(ranks) {
                row.ranks[w] = r;
            }
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Markdown => self.to_markdown(),
        }
    }

    fn cells(row: &MethodResult) -> [String; 8] {
        let cell = |w: usize| row.scores[w].map_or(FAILED_CELL.to_string(), |s| s.cell());
        [
            row.encoding.short_name().to_string(),
            row.classifier.short_name().to_string(),
            cell(0),
            row.ranks[0].to_string(),
            cell(1),
            row.ranks[1].to_string(),
            cell(2),
            row.ranks[2].to_string(),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(CSV_HEADER).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(Self::cells(row))
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    /// Parse a table written by [`ResultTable::to_csv`]. Fold kappas and
    /// metadata are not part of the CSV and come back empty.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| csv_error(1, e))?;
        if header.iter().ne(CSV_HEADER) {
            return Err(Error::Parse {
                line: 1,
                message: format!("unexpected header, expected {}", CSV_HEADER.join(",")),
            });
        }
        let mut rows = Vec::new();
        for (index, record) in reader.records().enumerate() {
            let line = index + 2;
            let record = record.map_err(|e| csv_error(line, e))?;
            let field = |i: usize| record.get(i).unwrap_or_default();
            let bad = |what: &str| Error::Parse {
                line,
                message: format!("bad {what}"),
            };
            let encoding =
                EncodingKind::from_short_name(field(0)).ok_or_else(|| bad("target_fn"))?;
            let classifier =
                ClassifierLabel::from_short_name(field(1)).ok_or_else(|| bad("class_fn"))?;
            let mut row = MethodResult::new(encoding, classifier);
            for w in 0..3 {
                let cell = field(2 + 2 * w);
                row.scores[w] = if cell == FAILED_CELL {
                    None
                } else {
                    Some(Score::parse_cell(cell).ok_or_else(|| bad("kappa cell"))?)
                };
                row.ranks[w] = field(3 + 2 * w).parse().map_err(|_| bad("rank"))?;
            }
            rows.push(row);
        }
        Ok(ResultTable {
            rows,
            metadata: None,
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| Targ.-fn | Class.-fn | Unweight. κ | # | Lin. κ | # | Quad. κ | # |\n");
        out.push_str("|:---|---:|:---:|---:|:---:|---:|:---:|---:|\n");
        for row in &self.rows {
            let mut cells = Self::cells(row);
            for w in 0..3 {
                if row.ranks[w] == 1 && row.scores[w].is_some() {
                    cells[2 + 2 * w] = format!("**{}**", cells[2 + 2 * w]);
                }
            }
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        out
    }
}

fn csv_error(line: usize, e: csv::Error) -> Error {
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

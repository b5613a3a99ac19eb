use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ordkit::classify::ClassifierKind;
use ordkit::data::{self, SynthConfig};
use ordkit::harness::{
    evaluate_checkpoint, rank_change_report, render_evaluation, Experiment, ExperimentConfig,
    Format, ResultTable,
};
use ordkit::model::Checkpoint;
use ordkit::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ordkit",
    version,
    about = "Ordinal encoding/classifier comparison"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Output directory; results go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset as JSON-Lines.
    Generate {
        /// SynthConfig JSON; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a dataset patient-wise into a test set and folds.
    Split {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        test_fraction: f64,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full comparison grid.
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config's run seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; 0 uses every CPU.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also write every fold model as a checkpoint.
        #[arg(long)]
        save_checkpoints: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compute kappas of a stored model on a dataset.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Re-render a result CSV and its rank-change report.
    Report {
        #[arg(long)]
        results: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Markdown => "md",
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Io { path, source: e })
}

fn emit(out: Option<&Path>, name: &str, contents: &str) -> Result<()> {
    match out {
        Some(dir) => write(dir, name, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { config, seed, out } => {
            let mut synth: SynthConfig = match config {
                Some(path) => read_json(&path)?,
                None => SynthConfig::default(),
            };
            if let Some(seed) = seed {
                synth.seed = seed;
            }
            let dataset = data::generate(&synth)?;
            emit(out.as_deref(), "dataset.jsonl", &data::to_jsonl(&dataset))
        }
        Command::Split {
            dataset,
            test_fraction,
            folds,
            seed,
            out,
        } => {
            let dataset = data::load(&dataset)?;
            let plan = data::split(&dataset, test_fraction, folds, seed)?;
            emit(out.as_deref(), "split.json", &plan.to_json())
        }
        Command::Experiment {
            config,
            seed,
            jobs,
            save_checkpoints,
            common,
        } => {
            let mut config = match config {
                Some(path) => ExperimentConfig::load(path)?,
                None => ExperimentConfig::default(),
            };
            if let Some(seed) = seed {
                config.run_seed = seed;
            }
            let experiment = Experiment::prepare(config)?;
            let grid = experiment.train_grid(jobs)?;
            let table = experiment.evaluate(&grid)?;
            let report = rank_change_report(&table);
            match common.out.as_deref() {
                Some(dir) => {
                    let ext = extension(common.format);
                    write(dir, &format!("results.{ext}"), &table.render(common.format))?;
                    write(dir, "rank_change.txt", &report.to_text())?;
                    write(dir, "rank_change.csv", &report.to_csv())?;
                    let metadata =
                        serde_json::to_string_pretty(&table.metadata).expect("metadata serializes");
                    write(dir, "metadata.json", &metadata)?;
                    write(dir, "config.json", &experiment.config.to_json())?;
                    if save_checkpoints {
                        save_fold_models(&experiment, &grid, &dir.join("checkpoints"))?;
                    }
                }
                None => {
                    print!("{}", table.render(common.format));
                    println!();
                    print!("{}", report.to_text());
                }
            }
            Ok(())
        }
        Command::Evaluate {
            checkpoint,
            dataset,
            common,
        } => {
            let checkpoint = Checkpoint::load(&checkpoint)?;
            let dataset = data::load(&dataset)?;
            let results = evaluate_checkpoint(&checkpoint, &dataset, &ClassifierKind::ALL)?;
            let name = format!("evaluation.{}", extension(common.format));
            emit(
                common.out.as_deref(),
                &name,
                &render_evaluation(&results, common.format),
            )
        }
        Command::Report { results, common } => {
            let text = fs::read_to_string(&results).map_err(|e| Error::Io {
                path: results.clone(),
                source: e,
            })?;
            let table = ResultTable::from_csv(&text)?;
            let report = rank_change_report(&table);
            match common.out.as_deref() {
                Some(dir) => {
                    let ext = extension(common.format);
                    write(dir, &format!("report.{ext}"), &table.render(common.format))?;
                    write(dir, "rank_change.txt", &report.to_text())?;
                    write(dir, "rank_change.csv", &report.to_csv())
                }
                None => {
                    print!("{}", table.render(common.format));
                    println!();
                    print!("{}", report.to_text());
                    Ok(())
                }
            }
        }
    }
}

fn save_fold_models(
    experiment: &Experiment,
    grid: &ordkit::harness::TrainedGrid,
    dir: &Path,
) -> Result<()> {
    for cell in &grid.cells {
        let Ok(model) = &cell.outcome else { continue };
        let checkpoint = Checkpoint {
            mlp: experiment.mlp_config(&cell.encoding)?,
            train: experiment.train_config(&cell.encoding, cell.fold),
            encoding: cell.encoding,
            scale: experiment.config.scale.clone(),
            findings: experiment.config.findings.clone(),
            params: model.params.clone(),
        };
        let name = format!(
            "{}_fold{}.json",
            cell.encoding.kind.short_name().to_lowercase(),
            cell.fold
        );
        write(dir, &name, &checkpoint.to_json())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

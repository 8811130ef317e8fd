use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use evoensemble::dataio::{describe, load_csv, write_stats_csv, SchemaMode};
use evoensemble::ensemble::TrainedModel;
use evoensemble::experiment::{
    file_checksum, prepare, run_prepared, run_tuning_prepared, train_prepared, write_predictions,
    BenchmarkReport, ExperimentConfig,
};
use evoensemble::outlier::filter_outliers;
use evoensemble::{Error, Result};

/// Ensemble regression benchmarks for appliance energy data.
#[derive(Parser, Debug)]
#[command(name = "evoensemble", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Built-in preset used when no config file is given
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Dataset CSV; overrides the config
    #[arg(long, global = true, env = "EVOENSEMBLE_DATA")]
    data: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (0 = all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Column statistics of the raw dataset
    Describe {
        #[arg(long, value_delimiter = ',')]
        columns: Option<Vec<String>>,
    },
    /// LOF-filter the dataset and write the kept rows plus scores
    Clean,
    /// Fit one roster model on all cleaned rows and serialize it
    Train {
        #[arg(long)]
        model: String,
    },
    /// Run one tuning block
    Tune {
        #[arg(long)]
        block: String,
    },
    /// Cross-validated benchmark of the whole roster
    Benchmark,
    /// Render a saved report, or re-predict with a saved model
    Report {
        /// Saved report (default: <out>/report.json)
        #[arg(long)]
        input: Option<PathBuf>,
        /// Print CSV instead of the text table
        #[arg(long)]
        csv: bool,
        /// Saved model JSON; writes predictions on the cleaned dataset
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

fn config(cli: &Cli, required: bool) -> Result<ExperimentConfig> {
    let mut c = match (&cli.config, &cli.preset) {
        (Some(p), _) => ExperimentConfig::load(p)?,
        (None, Some(name)) => ExperimentConfig::from_preset(name)?,
        (None, None) if required => {
            return Err(Error::InvalidArgument("missing config: pass --config or --preset".into()))
        }
        (None, None) => ExperimentConfig::default(),
    };
    if cli.data.is_some() {
        c.dataset = cli.data.clone();
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if let Some(j) = cli.jobs {
        c.jobs = j;
    }
    if let Some(o) = &cli.out {
        c.output_dir = o.clone();
    }
    Ok(c)
}

fn create(dir: &Path, name: &str) -> Result<File> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })?;
    let p = dir.join(name);
    File::create(&p).map_err(|e| Error::Io { path: p.to_path_buf(), source: e })
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(create(dir, name)?, value)?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Describe { columns } => {
            let c = config(cli, false).map_err(|e| e.in_stage("config"))?;
            let path = c.dataset_path().map_err(|e| e.in_stage("load"))?;
            let frame = load_csv(&path, SchemaMode::Infer).map_err(|e| e.in_stage("load"))?;
            let names = columns.clone().unwrap_or_else(|| {
                let mut v = vec![frame.target_name().to_string()];
                v.extend(frame.feature_names(true));
                v
            });
            let mut rows = Vec::new();
            for n in names {
                let s = describe(&frame, &n).map_err(|e| e.in_stage("describe"))?;
                rows.push((n, s));
            }
            println!("{:<12} {:>12} {:>12} {:>12} {:>12} {:>12}", "column", "min", "max", "mean", "median", "std");
            for (n, s) in &rows {
                println!(
                    "{n:<12} {:>12.3} {:>12.3} {:>12.3} {:>12.3} {:>12.3}",
                    s.min, s.max, s.mean, s.median, s.std
                );
            }
            write_stats_csv(create(&c.output_dir, "describe.csv")?, &rows)
        }
        Command::Clean => {
            let c = config(cli, false).map_err(|e| e.in_stage("config"))?;
            let path = c.dataset_path().map_err(|e| e.in_stage("load"))?;
            let frame = load_csv(&path, SchemaMode::Infer).map_err(|e| e.in_stage("load"))?;
            let mut cols = frame.feature_names(c.include_random);
            cols.push(frame.target_name().to_string());
            let (kept, report) =
                filter_outliers(&frame, &cols, c.lof.k, c.lof.threshold).map_err(|e| e.in_stage("lof"))?;
            kept.write_csv(create(&c.output_dir, "cleaned.csv")?)?;
            report.write_csv(create(&c.output_dir, "lof.csv")?)?;
            println!(
                "kept {} of {} rows ({} outliers, k = {}, threshold = {})",
                kept.n_active(),
                frame.n_active(),
                report.outliers.len(),
                c.lof.k,
                c.lof.threshold
            );
            Ok(())
        }
        Command::Train { model } => {
            let c = config(cli, true).map_err(|e| e.in_stage("config"))?;
            let data = prepare(&c)?;
            let m = train_prepared(&c, model, &data)?;
            let pred = m.predict(&data.design.x).map_err(|e| e.in_stage("predict"))?;
            std::fs::create_dir_all(&c.output_dir)
                .map_err(|e| Error::Io { path: c.output_dir.to_path_buf(), source: e })?;
            let model_path = c.output_dir.join(format!("{model}.model.json"));
            std::fs::write(&model_path, m.to_json()?)
                .map_err(|e| Error::Io { path: model_path.to_path_buf(), source: e })?;
            write_predictions(
                &c.output_dir.join(format!("{model}.predictions.csv")),
                &data.design.row_ids,
                &pred,
            )?;
            println!("wrote {}", model_path.display());
            Ok(())
        }
        Command::Tune { block } => {
            let c = config(cli, true).map_err(|e| e.in_stage("config"))?;
            let b = c
                .tuning
                .iter()
                .find(|t| &t.name == block)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown tuning block {block:?}")))
                .map_err(|e| e.in_stage("config"))?;
            let data = prepare(&c)?;
            let r = run_tuning_prepared(&c, b, &data)?;
            let dir = c.output_dir.join(block);
            r.result.write_trace_csv(create(&dir, "trace.csv")?)?;
            write_json(&dir, "best_spec.json", &r.best_spec)?;
            write_json(&dir, "best_params.json", &r.best_params)?;
            println!(
                "{block}: best validation R {:.4} after {} evaluations ({} distinct)",
                r.result.best_fitness, r.result.evaluations, r.unique_evaluations
            );
            for (k, v) in &r.best_params {
                println!("  {k} = {v}");
            }
            Ok(())
        }
        Command::Benchmark => {
            let c = config(cli, true).map_err(|e| e.in_stage("config"))?;
            let data = prepare(&c)?;
            let report = run_prepared(&c, &data)?;
            report.write_outputs(&c.output_dir).map_err(|e| e.in_stage("write"))?;
            print!("{}", report.render());
            Ok(())
        }
        Command::Report { input, csv, model } => {
            let c = config(cli, false).map_err(|e| e.in_stage("config"))?;
            if let Some(mp) = model {
                let text = std::fs::read_to_string(mp)
                    .map_err(|e| Error::Io { path: mp.to_path_buf(), source: e })?;
                let m = TrainedModel::from_json(&text).map_err(|e| e.in_stage("load-model"))?;
                let data = prepare(&c)?;
                let pred = m.predict(&data.design.x).map_err(|e| e.in_stage("predict"))?;
                std::fs::create_dir_all(&c.output_dir)
                    .map_err(|e| Error::Io { path: c.output_dir.to_path_buf(), source: e })?;
                let out = c.output_dir.join("report.predictions.csv");
                write_predictions(&out, &data.design.row_ids, &pred)?;
                println!("wrote {}", out.display());
                return Ok(());
            }
            let path = input.clone().unwrap_or_else(|| c.output_dir.join("report.json"));
            let report = BenchmarkReport::load(&path).map_err(|e| e.in_stage("report"))?;
            if cli.config.is_some() || cli.preset.is_some() {
                let checksum = match c.dataset_path() {
                    Ok(p) if p.exists() => Some(file_checksum(&p)?),
                    _ => None,
                };
                report
                    .check_provenance(&c, checksum.as_deref())
                    .map_err(|e| e.in_stage("report"))?;
            }
            if *csv {
                report.write_summary_csv(std::io::stdout().lock())?;
            } else {
                print!("{}", report.render());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("evoensemble: {e}");
            ExitCode::from(2)
        }
    }
}

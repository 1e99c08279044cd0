use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use wnsmt::harness::synth::{write_benchmark, SynthConfig};
use wnsmt::harness::{load_results, render_csv, render_table, run_experiment, ExperimentSpec};
use wnsmt::metrics::Metric;
use wnsmt::Execution;

/// Run the WOW/WWN grid and report it.
#[derive(Parser)]
#[command(name = "experiment", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train and evaluate both systems for every ordered language pair.
    Run {
        spec: PathBuf,
        #[arg(long)]
        sequential: bool,
    },
    /// Print a finished run's grid.
    Report {
        out_dir: PathBuf,
        #[arg(long, default_value = "bleu")]
        metric: Metric,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Write a small synthetic benchmark (corpora, wordnet, spec.cfg).
    Synth {
        dir: PathBuf,
        #[arg(long, default_value_t = 2000)]
        train: usize,
        #[arg(long, default_value_t = 200)]
        test: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    wnsmt_cli::init_logging();
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Run { spec, sequential } => {
            let spec = ExperimentSpec::read(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let out = run_experiment(&spec, exec)?;
            print!("{}", render_table(&out.grid, Metric::Bleu));
            for f in &out.failures {
                eprintln!("failed: {f}");
            }
            Ok(exit_for(out.failures.is_empty()))
        }
        Cmd::Report { out_dir, metric, format } => {
            let (grid, failures) = load_results(&out_dir).with_context(|| format!("reading results in {}", out_dir.display()))?;
            match format {
                Format::Table => print!("{}", render_table(&grid, metric)),
                Format::Csv => print!("{}", render_csv(&grid, Some(metric))),
            }
            for f in &failures {
                eprintln!("failed: {f}");
            }
            Ok(exit_for(failures.is_empty()))
        }
        Cmd::Synth { dir, train, test, seed } => {
            fs::create_dir_all(&dir)?;
            let cfg = SynthConfig {
                train_pairs: train,
                test_pairs: test,
                seed,
                ..SynthConfig::default()
            };
            let spec = write_benchmark(&cfg, &dir)?;
            println!("{}", spec.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_for(clean: bool) -> ExitCode {
    if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

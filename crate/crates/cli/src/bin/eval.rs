use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;
use wnsmt::corpus::read_sentences;
use wnsmt::metrics::{evaluate, EvalOptions, Metric, Synonyms};
use wnsmt::wordnet::{detect_pivot, load_wordnet};
use wnsmt::Execution;
use wnsmt_cli::lang_for;

/// Corpus-level MT evaluation.
#[derive(Parser)]
#[command(name = "eval", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Score a hypothesis file against a reference file, one sentence per
    /// line. Prints JSON.
    Score {
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        metric: Metric,
        /// Wordnet for METEOR synonym matching.
        #[arg(long)]
        wordnet: Option<PathBuf>,
        /// Language of both files (defaults to the --ref extension).
        #[arg(long)]
        lang: Option<String>,
        #[arg(long)]
        pivot: Option<String>,
        /// Add-one smoothing for BLEU n>1 precisions.
        #[arg(long)]
        smooth: bool,
    },
}

fn main() -> ExitCode {
    wnsmt_cli::init_logging();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<()> {
    let Cmd::Score {
        hyp,
        reference,
        metric,
        wordnet,
        lang,
        pivot,
        smooth,
    } = Cli::parse().cmd;
    let lang = lang_for(lang.as_deref(), &reference)?;
    let hyps = read_sentences(&hyp, &lang).with_context(|| format!("reading {}", hyp.display()))?;
    let refs = read_sentences(&reference, &lang).with_context(|| format!("reading {}", reference.display()))?;
    let db = match &wordnet {
        Some(path) => {
            let pivot = match pivot {
                Some(p) => p,
                None => detect_pivot(path)?,
            };
            Some(load_wordnet(path, &pivot).with_context(|| format!("loading {}", path.display()))?)
        }
        None => None,
    };
    let opts = EvalOptions {
        smooth,
        synonyms: db.as_ref().map(|db| Synonyms { db, lang: &lang }),
        exec: Execution::default(),
    };
    let report = evaluate(&hyps, &refs, &opts)?;
    let stats = match metric {
        Metric::Bleu => serde_json::to_value(&report.bleu)?,
        Metric::Ter => serde_json::to_value(&report.ter)?,
        Metric::Meteor => serde_json::to_value(&report.meteor)?,
    };
    let out = json!({
        "metric": metric,
        "score": report.value(metric),
        "sentences": hyps.len(),
        "stats": stats,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

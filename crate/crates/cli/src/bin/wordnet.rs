use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use wnsmt::lexicon::{extract_with_stats, write_lexicon};
use wnsmt::wordnet::{detect_pivot, load_wordnet, validate};

/// Inspect a JSONL wordnet and extract bilingual lexicons from it.
#[derive(Parser)]
#[command(name = "wordnet", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Load and lint a database; exit 1 on any finding or load error.
    Validate {
        db: PathBuf,
        #[arg(long)]
        pivot: String,
    },
    /// Write the src-tgt lexicon induced by shared concepts as TSV.
    Extract {
        db: PathBuf,
        #[arg(long)]
        src: String,
        #[arg(long)]
        tgt: String,
        #[arg(short, long)]
        out: PathBuf,
        /// Pivot language; detected from the file when omitted.
        #[arg(long)]
        pivot: Option<String>,
    },
}

fn main() -> ExitCode {
    wnsmt_cli::init_logging();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Validate { db, pivot } => {
            let db = load_wordnet(&db, &pivot).with_context(|| format!("loading {}", db.display()))?;
            let findings = validate(&db);
            for f in &findings {
                println!("{f}");
            }
            if findings.is_empty() {
                log::info!("{} synsets, no findings", db.synsets().count());
                Ok(ExitCode::SUCCESS)
            } else {
                log::warn!("{} findings", findings.len());
                Ok(ExitCode::FAILURE)
            }
        }
        Cmd::Extract {
            db,
            src,
            tgt,
            out,
            pivot,
        } => {
            let pivot = match pivot {
                Some(p) => p,
                None => detect_pivot(&db)?,
            };
            let db = load_wordnet(&db, &pivot).with_context(|| format!("loading {}", db.display()))?;
            let ex = extract_with_stats(&db, &src, &tgt)?;
            write_lexicon(&ex.lexicon, &out)?;
            log::info!(
                "{} entries ({} before dedup) written to {}",
                ex.lexicon.entries.len(),
                ex.raw_count,
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

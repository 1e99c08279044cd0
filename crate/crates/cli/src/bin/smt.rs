use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use wnsmt::align::TrainConfig;
use wnsmt::corpus::{load_bitext, read_sentences};
use wnsmt::decoder::translate_batch;
use wnsmt::{DecoderConfig, Execution, Symmetrization, TranslationModel};
use wnsmt_cli::lang_for;

/// Train a phrase-based model and decode with it.
#[derive(Parser)]
#[command(name = "smt", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Align, extract phrases and train the LM; writes `model_dir`.
    Train {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        tgt: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
        #[arg(long, default_value_t = 7)]
        max_phrase: usize,
        /// intersection, union or gdfa.
        #[arg(long, default_value = "gdfa")]
        sym: Symmetrization,
        #[arg(long, default_value_t = 3)]
        lm_order: usize,
        #[arg(long)]
        src_lang: Option<String>,
        #[arg(long)]
        tgt_lang: Option<String>,
    },
    /// Decode one sentence per line.
    Translate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        beam: Option<usize>,
        #[arg(long)]
        dl: Option<usize>,
        /// `key = value` decoder config.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Input language (defaults to the --in extension).
        #[arg(long)]
        lang: Option<String>,
        /// Decode on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

fn main() -> Result<()> {
    wnsmt_cli::init_logging();
    match Cli::parse().cmd {
        Cmd::Train {
            src,
            tgt,
            out,
            iterations,
            max_phrase,
            sym,
            lm_order,
            src_lang,
            tgt_lang,
        } => {
            let sl = lang_for(src_lang.as_deref(), &src)?;
            let tl = lang_for(tgt_lang.as_deref(), &tgt)?;
            let (bitext, report) = load_bitext(&src, &tgt, &sl, &tl)?;
            log::info!("{report}");
            let cfg = TrainConfig {
                iterations,
                max_phrase_len: max_phrase,
                heuristic: sym,
                lm_order,
                ..TrainConfig::default()
            };
            let model = TranslationModel::train(&bitext, &cfg)?;
            model.save(&out).with_context(|| format!("writing {}", out.display()))?;
            log::info!("{} phrase-table entries in {}", model.phrase_table.len(), out.display());
        }
        Cmd::Translate {
            model,
            input,
            out,
            beam,
            dl,
            weights,
            lang,
            sequential,
        } => {
            let model = TranslationModel::load(&model).with_context(|| format!("loading {}", model.display()))?;
            let mut cfg = match &weights {
                Some(p) => DecoderConfig::read(p)?,
                None => DecoderConfig::default(),
            };
            if let Some(b) = beam {
                cfg.beam_size = b;
            }
            if let Some(d) = dl {
                cfg.distortion_limit = d;
            }
            let lang = lang_for(lang.as_deref(), &input)?;
            let sources = read_sentences(&input, &lang)?;
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let hyps = translate_batch(&sources, &model, &cfg, exec);
            let mut text = String::new();
            for h in &hyps {
                text.push_str(&h.output.join(" "));
                text.push('\n');
            }
            fs::write(&out, text)?;
            log::info!("{} sentences translated", hyps.len());
        }
    }
    Ok(())
}

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use wnsmt::corpus::{augment, load_bitext};
use wnsmt::lexicon::read_lexicon;
use wnsmt_cli::lang_for;

/// Bitext utilities.
#[derive(Parser)]
#[command(name = "corpus", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Append lexicon entries to a training bitext; writes `<out>.<src>`
    /// and `<out>.<tgt>`.
    Augment {
        #[arg(long)]
        base_src: PathBuf,
        #[arg(long)]
        base_tgt: PathBuf,
        #[arg(long)]
        lex: PathBuf,
        #[arg(long, default_value_t = 1)]
        repeat: u32,
        #[arg(short, long)]
        out: PathBuf,
        /// Source language (defaults to the --base-src extension).
        #[arg(long)]
        src_lang: Option<String>,
        /// Target language (defaults to the --base-tgt extension).
        #[arg(long)]
        tgt_lang: Option<String>,
    },
}

fn main() -> Result<()> {
    wnsmt_cli::init_logging();
    match Cli::parse().cmd {
        Cmd::Augment {
            base_src,
            base_tgt,
            lex,
            repeat,
            out,
            src_lang,
            tgt_lang,
        } => {
            let src = lang_for(src_lang.as_deref(), &base_src)?;
            let tgt = lang_for(tgt_lang.as_deref(), &base_tgt)?;
            let (base, report) = load_bitext(&base_src, &base_tgt, &src, &tgt)?;
            log::info!("base: {report}");
            let lex = read_lexicon(&lex, &src, &tgt).with_context(|| format!("reading {}", lex.display()))?;
            let aug = augment(&base, &lex, repeat)?;
            let path = |lang: &str| {
                let mut p = out.as_os_str().to_owned();
                p.push(format!(".{lang}"));
                PathBuf::from(p)
            };
            aug.write(path(&src), path(&tgt))?;
            log::info!(
                "{} pairs ({} base + {} x {} lexicon) written to {}",
                aug.len(),
                base.len(),
                repeat,
                lex.entries.len(),
                path(&src).display()
            );
            Ok(())
        }
    }
}

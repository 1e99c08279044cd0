//! End-to-end WOW/WWN experiments over every ordered language pair.
//!
//! For each pair the harness trains a baseline system on the base bitext
//! (WOW), a second system on the bitext augmented with the wordnet lexicon
//! (WWN), decodes the same test source with both and scores them.

mod report;
pub mod synth;

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::align::{Symmetrization, TrainConfig};
use crate::corpus::{augment, load_bitext, read_sentences, Bitext, Sentence};
use crate::decoder::{translate_batch, DecoderConfig, TranslationModel};
use crate::kv::{KvError, KvFile};
use crate::lexicon::{extract_bilingual_lexicon, write_lexicon, BilingualLexicon, LexiconError};
use crate::metrics::{compare, evaluate, EvalOptions, MetricReport, PairedDelta, Synonyms};
use crate::par::Execution;
use crate::wordnet::{load_wordnet, WordnetDb, WordnetError};

pub use report::{parse_csv, render_csv, render_table, GridReport, GridRow, ROW_LABEL};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("experiment spec: {0}")]
    Spec(#[from] KvError),
    #[error("experiment needs at least 2 languages, got {0}")]
    TooFewLanguages(usize),
    #[error("wordnet: {0}")]
    Wordnet(#[from] WordnetError),
    #[error("{0}")]
    Grid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub languages: Vec<String>,
    /// `<train>.<src>-<tgt>.<lang>` if present, else `<train>.<lang>`.
    pub train: PathBuf,
    /// Same lookup as `train`.
    pub test: PathBuf,
    pub wordnet: PathBuf,
    /// Defaults to the first language.
    pub pivot: Option<String>,
    /// Sample this many test pairs (seeded) instead of using all of them.
    pub test_size: Option<usize>,
    pub decoder: DecoderConfig,
    pub output: PathBuf,
    pub seed: u64,
    pub repeat: u32,
    pub training: TrainConfig,
}

const SPEC_KEYS: &[&str] = &[
    "languages",
    "train",
    "test",
    "wordnet",
    "pivot",
    "test_size",
    "decoder",
    "output",
    "seed",
    "repeat",
    "iterations",
    "max_phrase",
    "lm_order",
    "sym",
];

impl ExperimentSpec {
    /// Relative paths are resolved against `base_dir`.
    pub fn from_kv(kv: &KvFile, base_dir: &Path) -> Result<Self, HarnessError> {
        kv.check_keys(SPEC_KEYS)?;
        let path = |key: &str| -> Result<PathBuf, KvError> { Ok(base_dir.join(kv.require(key)?)) };
        let languages: Vec<String> = kv
            .require("languages")?
            .split(',')
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect();
        if languages.len() < 2 {
            return Err(HarnessError::TooFewLanguages(languages.len()));
        }
        let decoder = match kv.get("decoder") {
            Some(p) => DecoderConfig::read(base_dir.join(p))?,
            None => DecoderConfig::default(),
        };
        let mut training = TrainConfig::default();
        if let Some(v) = kv.parse_opt("iterations")? {
            training.iterations = v;
        }
        if let Some(v) = kv.parse_opt("max_phrase")? {
            training.max_phrase_len = v;
        }
        if let Some(v) = kv.parse_opt("lm_order")? {
            training.lm_order = v;
        }
        if let Some(v) = kv.parse_opt::<Symmetrization>("sym")? {
            training.heuristic = v;
        }
        let repeat = kv.parse_opt("repeat")?.unwrap_or(1);
        if repeat == 0 {
            return Err(KvError::Value {
                key: "repeat".into(),
                value: "0".into(),
                reason: "must be at least 1".into(),
            }
            .into());
        }
        Ok(ExperimentSpec {
            languages,
            train: path("train")?,
            test: path("test")?,
            wordnet: path("wordnet")?,
            pivot: kv.get("pivot").map(str::to_string),
            test_size: kv.parse_opt("test_size")?,
            decoder,
            output: path("output")?,
            seed: kv.parse_opt("seed")?.unwrap_or(0),
            repeat,
            training,
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_kv(&KvFile::read(path)?, base)
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for s in &self.languages {
            for t in &self.languages {
                if s != t {
                    out.push((s.clone(), t.clone()));
                }
            }
        }
        out.sort();
        out
    }
}

/// Picks `<prefix>.<src>-<tgt>.<lang>` when it exists, else `<prefix>.<lang>`.
pub fn corpus_file(prefix: &Path, src: &str, tgt: &str, lang: &str) -> PathBuf {
    let with = |suffix: String| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    let specific = with(format!(".{src}-{tgt}.{lang}"));
    if specific.exists() {
        specific
    } else {
        with(format!(".{lang}"))
    }
}

/// Scores and sizes for one ordered pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairResult {
    pub src: String,
    pub tgt: String,
    pub train_pairs: usize,
    pub augmented_pairs: usize,
    pub lexicon_entries: usize,
    pub test_pairs: usize,
    pub wow: MetricReport,
    pub wwn: MetricReport,
    pub delta: PairedDelta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFailure {
    pub src: String,
    pub tgt: String,
    pub message: String,
}

impl fmt::Display for PairFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}: {}", self.src, self.tgt, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub grid: GridReport,
    pub pairs: Vec<PairResult>,
    pub failures: Vec<PairFailure>,
}

pub const GRID_CSV: &str = "grid.csv";
pub const FAILURES: &str = "failures.tsv";

/// A wordnet file with no records stands for an empty database.
fn load_optional_wordnet(path: &Path, pivot: &str) -> Result<Option<WordnetDb>, HarnessError> {
    let text = fs::read_to_string(path)?;
    if text.trim().is_empty() {
        warn!("{} is empty; running without a wordnet", path.display());
        return Ok(None);
    }
    Ok(Some(load_wordnet(path, pivot)?))
}

/// Test pairs, sampled down to `size` with the experiment seed if asked.
fn select_test(src: Vec<Sentence>, refs: Vec<Sentence>, size: Option<usize>, seed: u64) -> (Vec<Sentence>, Vec<Sentence>) {
    match size {
        Some(n) if n < src.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = rand::seq::index::sample(&mut rng, src.len(), n).into_vec();
            idx.sort_unstable();
            (
                idx.iter().map(|&i| src[i].clone()).collect(),
                idx.iter().map(|&i| refs[i].clone()).collect(),
            )
        }
        _ => (src, refs),
    }
}

/// Fails if any test source or reference also occurs in training.
pub fn check_disjoint(train: &Bitext, test_src: &[Sentence], test_ref: &[Sentence]) -> Result<(), String> {
    let sources: HashSet<&Sentence> = train.sources().collect();
    let targets: HashSet<&Sentence> = train.targets().collect();
    for (i, (s, r)) in test_src.iter().zip(test_ref).enumerate() {
        if sources.contains(s) {
            return Err(format!("test source line {} also occurs in training: {s}", i + 1));
        }
        if targets.contains(r) {
            return Err(format!("test reference line {} also occurs in training: {r}", i + 1));
        }
    }
    Ok(())
}

fn lexicon_for(db: Option<&WordnetDb>, src: &str, tgt: &str) -> Result<BilingualLexicon, LexiconError> {
    let empty = || BilingualLexicon {
        src_lang: src.to_string(),
        tgt_lang: tgt.to_string(),
        entries: Vec::new(),
    };
    let Some(db) = db else { return Ok(empty()) };
    match extract_bilingual_lexicon(db, src, tgt) {
        Err(LexiconError::MissingLanguage(lang)) => {
            warn!("{src}-{tgt}: wordnet has no {lang} synsets; lexicon is empty");
            Ok(empty())
        }
        other => other,
    }
}

fn write_lines(path: &Path, sentences: &[Sentence]) -> std::io::Result<()> {
    let mut text = String::new();
    for s in sentences {
        text.push_str(&s.to_string());
        text.push('\n');
    }
    fs::write(path, text)
}

fn run_pair(
    spec: &ExperimentSpec,
    db: Option<&WordnetDb>,
    src: &str,
    tgt: &str,
    exec: Execution,
) -> Result<PairResult, String> {
    let err = |e: &dyn fmt::Display| e.to_string();
    let (base, report) = load_bitext(
        corpus_file(&spec.train, src, tgt, src),
        corpus_file(&spec.train, src, tgt, tgt),
        src,
        tgt,
    )
    .map_err(|e| err(&e))?;
    info!("{src}-{tgt} training: {report}");
    let test_src = read_sentences(corpus_file(&spec.test, src, tgt, src), src).map_err(|e| err(&e))?;
    let test_ref = read_sentences(corpus_file(&spec.test, src, tgt, tgt), tgt).map_err(|e| err(&e))?;
    if test_src.len() != test_ref.len() {
        return Err(format!(
            "test source has {} lines, reference has {}",
            test_src.len(),
            test_ref.len()
        ));
    }
    let (test_src, test_ref) = select_test(test_src, test_ref, spec.test_size, spec.seed);
    if test_src.is_empty() {
        return Err("empty test set".into());
    }
    check_disjoint(&base, &test_src, &test_ref)?;

    let cfg = TrainConfig { exec, ..spec.training };
    let lexicon = lexicon_for(db, src, tgt).map_err(|e| err(&e))?;
    let augmented = augment(&base, &lexicon, spec.repeat).map_err(|e| err(&e))?;
    let wow = TranslationModel::train(&base, &cfg).map_err(|e| err(&e))?;
    let wwn = TranslationModel::train(&augmented, &cfg).map_err(|e| err(&e))?;

    let hyp_wow: Vec<Sentence> = translate_batch(&test_src, &wow, &spec.decoder, exec)
        .into_iter()
        .map(|t| t.output)
        .collect();
    let hyp_wwn: Vec<Sentence> = translate_batch(&test_src, &wwn, &spec.decoder, exec)
        .into_iter()
        .map(|t| t.output)
        .collect();

    let opts = EvalOptions {
        smooth: false,
        synonyms: db.map(|db| Synonyms { db, lang: tgt }),
        exec,
    };
    let wow_report = evaluate(&hyp_wow, &test_ref, &opts).map_err(|e| err(&e))?;
    let wwn_report = evaluate(&hyp_wwn, &test_ref, &opts).map_err(|e| err(&e))?;

    let dir = spec.output.join(format!("{src}-{tgt}"));
    let io = |e: std::io::Error| e.to_string();
    fs::create_dir_all(&dir).map_err(io)?;
    write_lexicon(&lexicon, dir.join("lexicon.tsv")).map_err(|e| err(&e))?;
    write_lines(&dir.join("wow.hyp"), &hyp_wow).map_err(io)?;
    write_lines(&dir.join("wwn.hyp"), &hyp_wwn).map_err(io)?;
    write_lines(&dir.join("test.src"), &test_src).map_err(io)?;
    write_lines(&dir.join("test.ref"), &test_ref).map_err(io)?;
    wow.save(dir.join("wow")).map_err(|e| err(&e))?;
    wwn.save(dir.join("wwn")).map_err(|e| err(&e))?;

    let result = PairResult {
        src: src.to_string(),
        tgt: tgt.to_string(),
        train_pairs: base.len(),
        augmented_pairs: augmented.len(),
        lexicon_entries: lexicon.entries.len(),
        test_pairs: test_src.len(),
        delta: compare(&wow_report, &wwn_report),
        wow: wow_report,
        wwn: wwn_report,
    };
    let json = serde_json::to_string_pretty(&result).map_err(|e| err(&e))?;
    fs::write(dir.join("report.json"), json + "\n").map_err(io)?;
    Ok(result)
}

/// Runs every ordered pair. Pair-level failures are collected rather than
/// aborting the run; the grid holds the pairs that succeeded.
pub fn run_experiment(spec: &ExperimentSpec, exec: Execution) -> Result<ExperimentOutcome, HarnessError> {
    if spec.languages.len() < 2 {
        return Err(HarnessError::TooFewLanguages(spec.languages.len()));
    }
    let pivot = spec.pivot.clone().unwrap_or_else(|| spec.languages[0].clone());
    let db = load_optional_wordnet(&spec.wordnet, &pivot)?;
    fs::create_dir_all(&spec.output)?;

    let pairs = spec.pairs();
    let results = exec.map(&pairs, |(s, t)| {
        run_pair(spec, db.as_ref(), s, t, exec).map_err(|message| PairFailure {
            src: s.clone(),
            tgt: t.clone(),
            message,
        })
    });
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(p) => ok.push(p),
            Err(f) => {
                warn!("pair failed: {f}");
                failures.push(f);
            }
        }
    }
    let grid = GridReport::from_pairs(&ok);
    fs::write(spec.output.join(GRID_CSV), render_csv(&grid, None))?;
    let mut fail_text = String::new();
    for f in &failures {
        fail_text.push_str(&format!("{}\t{}\t{}\n", f.src, f.tgt, f.message.replace(['\t', '\n'], " ")));
    }
    fs::write(spec.output.join(FAILURES), fail_text)?;
    Ok(ExperimentOutcome {
        grid,
        pairs: ok,
        failures,
    })
}

/// Reads `grid.csv` and `failures.tsv` back from an output directory.
pub fn load_results(out_dir: impl AsRef<Path>) -> Result<(GridReport, Vec<PairFailure>), HarnessError> {
    let dir = out_dir.as_ref();
    let grid = parse_csv(&fs::read_to_string(dir.join(GRID_CSV))?).map_err(HarnessError::Grid)?;
    let failures = match fs::read_to_string(dir.join(FAILURES)) {
        Ok(text) => text
            .lines()
            .filter(|l| !l.is_empty())
            .map(|l| {
                let mut cols = l.splitn(3, '\t');
                PairFailure {
                    src: cols.next().unwrap_or_default().to_string(),
                    tgt: cols.next().unwrap_or_default().to_string(),
                    message: cols.next().unwrap_or_default().to_string(),
                }
            })
            .collect(),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    Ok((grid, failures))
}

//! Tokenization, bitext loading, and lexicon augmentation.

use std::fmt;
use std::fs;
use std::io::Write;
use std::ops::Deref;
use std::path::Path;

use thiserror::Error;
use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::UnicodeNormalization;

use crate::lexicon::BilingualLexicon;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line count mismatch: {src_path} has {src_lines} lines, {tgt_path} has {tgt_lines}")]
    LineCount {
        src_path: String,
        src_lines: usize,
        tgt_path: String,
        tgt_lines: usize,
    },
    #[error("language mismatch: bitext is {base}, lexicon is {lexicon}")]
    Language { base: String, lexicon: String },
    #[error("repeat must be at least 1")]
    ZeroRepeat,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Canonical composed (NFC) form used for all stored and compared text.
pub fn normalize(text: &str) -> String {
    text.nfc().collect()
}

/// A token sequence. Tokens are non-empty and contain no whitespace.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sentence(Vec<String>);

impl Sentence {
    pub fn new(tokens: Vec<String>) -> Self {
        debug_assert!(tokens
            .iter()
            .all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
        Sentence(tokens)
    }

    /// Splits on whitespace without any other processing.
    pub fn from_spaced(text: &str) -> Self {
        Sentence(text.split_whitespace().map(str::to_string).collect())
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.0
    }
}

impl Deref for Sentence {
    type Target = [String];
    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl From<Vec<String>> for Sentence {
    fn from(tokens: Vec<String>) -> Self {
        Sentence::new(tokens)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

fn is_punct(c: char) -> bool {
    use GeneralCategory::*;
    matches!(
        get_general_category(c),
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
    )
}

const LATIN_LANGS: &[&str] = &[
    "en", "eng", "fr", "fra", "de", "deu", "es", "spa", "it", "ita", "pt", "por", "nl", "nld",
];

/// Whether `lang` is written in Latin script and so gets lowercased.
pub fn is_latin_lang(lang: &str) -> bool {
    let base = lang.split(['-', '_']).next().unwrap_or(lang);
    LATIN_LANGS.contains(&base.to_ascii_lowercase().as_str()) || lang.ends_with("-Latn")
}

/// Whitespace split with leading/trailing punctuation detached, one token
/// per punctuation character. Latin-script languages are lowercased.
pub fn tokenize(text: &str, lang: &str) -> Sentence {
    let text = normalize(text);
    let text = if is_latin_lang(lang) {
        text.to_lowercase()
    } else {
        text
    };
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        while start < chars.len() && is_punct(chars[start]) {
            out.push(chars[start].to_string());
            start += 1;
        }
        let mut end = chars.len();
        while end > start && is_punct(chars[end - 1]) {
            end -= 1;
        }
        if end > start {
            out.push(chars[start..end].iter().collect());
        }
        out.extend(chars[end..].iter().map(char::to_string));
    }
    Sentence(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitext {
    pub src_lang: String,
    pub tgt_lang: String,
    pub pairs: Vec<(Sentence, Sentence)>,
}

impl Bitext {
    pub fn new(src_lang: &str, tgt_lang: &str) -> Self {
        Bitext {
            src_lang: src_lang.into(),
            tgt_lang: tgt_lang.into(),
            pairs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The same pairs with source and target swapped.
    pub fn reversed(&self) -> Bitext {
        Bitext {
            src_lang: self.tgt_lang.clone(),
            tgt_lang: self.src_lang.clone(),
            pairs: self
                .pairs
                .iter()
                .map(|(s, t)| (t.clone(), s.clone()))
                .collect(),
        }
    }

    pub fn sources(&self) -> impl Iterator<Item = &Sentence> {
        self.pairs.iter().map(|(s, _)| s)
    }

    pub fn targets(&self) -> impl Iterator<Item = &Sentence> {
        self.pairs.iter().map(|(_, t)| t)
    }

    /// Writes both sides as space-joined token lines.
    pub fn write(&self, src_path: impl AsRef<Path>, tgt_path: impl AsRef<Path>) -> std::io::Result<()> {
        write_sentences(src_path, self.sources())?;
        write_sentences(tgt_path, self.targets())
    }
}

pub fn write_sentences<'a>(
    path: impl AsRef<Path>,
    sentences: impl IntoIterator<Item = &'a Sentence>,
) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    for s in sentences {
        writeln!(w, "{s}")?;
    }
    w.flush()
}

/// Tokenizes every line of a file, keeping empty lines as empty sentences.
pub fn read_sentences(path: impl AsRef<Path>, lang: &str) -> std::io::Result<Vec<Sentence>> {
    Ok(fs::read_to_string(path)?
        .lines()
        .map(|l| tokenize(l, lang))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub kept: usize,
    pub dropped: usize,
}

impl fmt::Display for LoadReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} pairs kept, {} pair", self.kept, self.dropped)?;
        if self.dropped != 1 {
            f.write_str("s")?;
        }
        f.write_str(" dropped")
    }
}

/// Loads two line-parallel files. Pairs where either side tokenizes to
/// nothing are dropped and counted.
pub fn load_bitext(
    src_path: impl AsRef<Path>,
    tgt_path: impl AsRef<Path>,
    src_lang: &str,
    tgt_lang: &str,
) -> Result<(Bitext, LoadReport), CorpusError> {
    let src = read_sentences(&src_path, src_lang)?;
    let tgt = read_sentences(&tgt_path, tgt_lang)?;
    if src.len() != tgt.len() {
        return Err(CorpusError::LineCount {
            src_path: src_path.as_ref().display().to_string(),
            src_lines: src.len(),
            tgt_path: tgt_path.as_ref().display().to_string(),
            tgt_lines: tgt.len(),
        });
    }
    let mut bitext = Bitext::new(src_lang, tgt_lang);
    let mut report = LoadReport::default();
    for (s, t) in src.into_iter().zip(tgt) {
        if s.is_empty() || t.is_empty() {
            report.dropped += 1;
        } else {
            bitext.pairs.push((s, t));
        }
    }
    report.kept = bitext.len();
    Ok((bitext, report))
}

/// Appends every lexicon entry as a sentence pair after the base pairs,
/// the whole lexicon `repeat` times.
pub fn augment(base: &Bitext, lex: &BilingualLexicon, repeat: u32) -> Result<Bitext, CorpusError> {
    if repeat == 0 {
        return Err(CorpusError::ZeroRepeat);
    }
    if base.src_lang != lex.src_lang || base.tgt_lang != lex.tgt_lang {
        return Err(CorpusError::Language {
            base: format!("{}-{}", base.src_lang, base.tgt_lang),
            lexicon: format!("{}-{}", lex.src_lang, lex.tgt_lang),
        });
    }
    let mut out = base.clone();
    out.pairs.reserve(lex.entries.len() * repeat as usize);
    for _ in 0..repeat {
        for e in &lex.entries {
            out.pairs
                .push((Sentence::new(e.src.clone()), Sentence::new(e.tgt.clone())));
        }
    }
    Ok(out)
}

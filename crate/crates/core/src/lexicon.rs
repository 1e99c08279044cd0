//! Bilingual lexicon extraction from concept-linked synsets.
//!
//! For every concept present in both languages, each source member is
//! paired with each target member. Multiword lemmas become token
//! sequences. Exact duplicate pairs (from several shared concepts) keep
//! their first occurrence.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::wordnet::{ConceptId, WordnetDb};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("language {0:?} has no synsets in the wordnet")]
    MissingLanguage(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexiconEntry {
    pub src: Vec<String>,
    pub tgt: Vec<String>,
    pub concept: ConceptId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilingualLexicon {
    pub src_lang: String,
    pub tgt_lang: String,
    pub entries: Vec<LexiconEntry>,
}

/// An extracted lexicon together with its size before deduplication.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub lexicon: BilingualLexicon,
    pub raw_count: usize,
}

pub fn extract_bilingual_lexicon(
    db: &WordnetDb,
    src_lang: &str,
    tgt_lang: &str,
) -> Result<BilingualLexicon, LexiconError> {
    extract_with_stats(db, src_lang, tgt_lang).map(|e| e.lexicon)
}

pub fn extract_with_stats(
    db: &WordnetDb,
    src_lang: &str,
    tgt_lang: &str,
) -> Result<Extraction, LexiconError> {
    for lang in [src_lang, tgt_lang] {
        if db.synsets_in(lang).next().is_none() {
            return Err(LexiconError::MissingLanguage(lang.to_string()));
        }
    }
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    let mut raw_count = 0;
    // synsets_in yields concepts in ascending order
    for src in db.synsets_in(src_lang) {
        let tgt_members = db.members(src.concept, tgt_lang);
        for s in &src.members {
            let s_tokens = s.tokens();
            for t in tgt_members {
                raw_count += 1;
                let t_tokens = t.tokens();
                if seen.insert((s_tokens.clone(), t_tokens.clone())) {
                    entries.push(LexiconEntry {
                        src: s_tokens.clone(),
                        tgt: t_tokens,
                        concept: src.concept,
                    });
                }
            }
        }
    }
    Ok(Extraction {
        lexicon: BilingualLexicon {
            src_lang: src_lang.to_string(),
            tgt_lang: tgt_lang.to_string(),
            entries,
        },
        raw_count,
    })
}

/// TSV: `src<TAB>tgt<TAB>concept`, tokens joined by single spaces.
pub fn write_lexicon(lex: &BilingualLexicon, path: impl AsRef<Path>) -> Result<(), LexiconError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    write_lexicon_to(lex, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_lexicon_to(lex: &BilingualLexicon, w: &mut impl Write) -> std::io::Result<()> {
    for e in &lex.entries {
        writeln!(w, "{}\t{}\t{}", e.src.join(" "), e.tgt.join(" "), e.concept)?;
    }
    Ok(())
}

pub fn read_lexicon(
    path: impl AsRef<Path>,
    src_lang: &str,
    tgt_lang: &str,
) -> Result<BilingualLexicon, LexiconError> {
    parse_lexicon(&fs::read_to_string(path)?, src_lang, tgt_lang)
}

pub fn parse_lexicon(text: &str, src_lang: &str, tgt_lang: &str) -> Result<BilingualLexicon, LexiconError> {
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let fail = |message: &str| LexiconError::Parse {
            line: idx + 1,
            message: message.to_string(),
        };
        let cols: Vec<&str> = line.split('\t').collect();
        let [src, tgt, concept] = cols[..] else {
            return Err(fail("expected 3 tab-separated columns"));
        };
        let src: Vec<String> = src.split_whitespace().map(str::to_string).collect();
        let tgt: Vec<String> = tgt.split_whitespace().map(str::to_string).collect();
        if src.is_empty() || tgt.is_empty() {
            return Err(fail("empty side"));
        }
        let concept = concept.trim().parse().map_err(|_| fail("bad concept id"))?;
        entries.push(LexiconEntry {
            src,
            tgt,
            concept: ConceptId(concept),
        });
    }
    Ok(BilingualLexicon {
        src_lang: src_lang.to_string(),
        tgt_lang: tgt_lang.to_string(),
        entries,
    })
}

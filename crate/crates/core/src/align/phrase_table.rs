//! Phrase-table construction and the ` ||| ` text format.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::model1::{viterbi_align, TTable};
use super::phrases::{extract_phrases, PhraseSpan};
use super::symmetrize::symmetrize;
use super::{fmt_sig6, AlignError, Alignment, Symmetrization};
use crate::corpus::Bitext;
use crate::par::Execution;

// keeps lexical weights strictly positive when a t-table entry underflows
const LEX_FLOOR: f64 = 1e-10;

/// Training options for the alignment and phrase pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub iterations: usize,
    pub epsilon: f64,
    pub max_phrase_len: usize,
    pub heuristic: Symmetrization,
    pub lm_order: usize,
    pub exec: Execution,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: 10,
            epsilon: 1e-4,
            max_phrase_len: 7,
            heuristic: Symmetrization::GrowDiagFinalAnd,
            lm_order: 3,
            exec: Execution::default(),
        }
    }
}

/// One translation of a source phrase with its four feature scores.
#[derive(Debug, Clone, PartialEq)]
pub struct PhraseOption {
    pub tgt: Vec<String>,
    /// φ(t|s), φ(s|t), lex(t|s), lex(s|t); each in (0, 1].
    pub scores: [f64; 4],
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhraseTable {
    entries: BTreeMap<Vec<String>, Vec<PhraseOption>>,
    max_src_len: usize,
}

impl PhraseTable {
    pub fn from_entries(entries: BTreeMap<Vec<String>, Vec<PhraseOption>>) -> Self {
        let max_src_len = entries.keys().map(Vec::len).max().unwrap_or(0);
        PhraseTable {
            entries,
            max_src_len,
        }
    }

    pub fn get(&self, src: &[String]) -> Option<&[PhraseOption]> {
        self.entries.get(src).map(Vec::as_slice)
    }

    pub fn entries(&self) -> &BTreeMap<Vec<String>, Vec<PhraseOption>> {
        &self.entries
    }

    pub fn max_src_len(&self) -> usize {
        self.max_src_len
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (src, options) in &self.entries {
            let src = src.join(" ");
            for o in options {
                let scores: Vec<String> = o.scores.iter().map(|&x| fmt_sig6(x)).collect();
                writeln!(w, "{src} ||| {} ||| {}", o.tgt.join(" "), scores.join(" "))?;
            }
        }
        Ok(())
    }

    pub fn write(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, AlignError> {
        let path = path.as_ref();
        let mut entries: BTreeMap<Vec<String>, Vec<PhraseOption>> = BTreeMap::new();
        for (idx, line) in fs::read_to_string(path)?.lines().enumerate() {
            let fail = |message: &str| AlignError::Format {
                file: path.display().to_string(),
                line: idx + 1,
                message: message.to_string(),
            };
            let cols: Vec<&str> = line.split(" ||| ").collect();
            let [src, tgt, scores] = cols[..] else {
                return Err(fail("expected `src ||| tgt ||| scores`"));
            };
            let scores: Vec<f64> = scores
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| fail("bad score"))?;
            let scores: [f64; 4] = scores.try_into().map_err(|_| fail("expected 4 scores"))?;
            let split = |s: &str| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();
            entries.entry(split(src)).or_default().push(PhraseOption {
                tgt: split(tgt),
                scores,
            });
        }
        Ok(PhraseTable::from_entries(entries))
    }
}

/// Lexical weight of `tgt[span.tgt]` given `src[span.src]`: per target word,
/// the mean t-probability over its links, or t(w|NULL) when unaligned.
fn lexical_weight(
    tt: &TTable,
    src: &[String],
    tgt: &[String],
    links: &[(usize, usize)],
    span: &PhraseSpan,
) -> f64 {
    let mut w = 1.0;
    for j in span.tgt.clone() {
        let linked: Vec<usize> = links
            .iter()
            .filter(|&&(i, jj)| jj == j && span.src.contains(&i))
            .map(|&(i, _)| i)
            .collect();
        let p = if linked.is_empty() {
            tt.null_prob(&tgt[j])
        } else {
            linked.iter().map(|&i| tt.prob(&src[i], &tgt[j])).sum::<f64>() / linked.len() as f64
        };
        w *= p;
    }
    w.max(LEX_FLOOR)
}

type PhraseKey = (Vec<String>, Vec<String>);

fn sentence_phrases(
    src: &[String],
    tgt: &[String],
    tt_fwd: &TTable,
    tt_rev: &TTable,
    heuristic: Symmetrization,
    max_len: usize,
) -> Vec<(PhraseKey, f64, f64)> {
    let a = align_pair(src, tgt, tt_fwd, tt_rev, heuristic);
    let links: Vec<(usize, usize)> = a.links.iter().copied().collect();
    let flipped: Vec<(usize, usize)> = links.iter().map(|&(i, j)| (j, i)).collect();
    extract_phrases(src.len(), tgt.len(), &a, max_len)
        .into_iter()
        .map(|span| {
            let lex_ts = lexical_weight(tt_fwd, src, tgt, &links, &span);
            let flipped_span = PhraseSpan::new(span.tgt.clone(), span.src.clone());
            let lex_st = lexical_weight(tt_rev, tgt, src, &flipped, &flipped_span);
            (
                (src[span.src].to_vec(), tgt[span.tgt].to_vec()),
                lex_ts,
                lex_st,
            )
        })
        .collect()
}

/// Word alignment of one pair under the configured heuristic.
pub fn align_pair(
    src: &[String],
    tgt: &[String],
    tt_fwd: &TTable,
    tt_rev: &TTable,
    heuristic: Symmetrization,
) -> Alignment {
    let fwd = viterbi_align(tt_fwd, src, tgt);
    let rev = viterbi_align(tt_rev, tgt, src).transpose();
    symmetrize(&fwd, &rev, heuristic)
}

/// Extracts phrase pairs from every sentence pair and scores them.
///
/// `tt_fwd` holds t(tgt|src), `tt_rev` holds t(src|tgt). Phrase
/// probabilities are relative frequencies of extraction counts; lexical
/// weights keep the maximum over occurrences.
pub fn build_phrase_table(
    bitext: &Bitext,
    tt_fwd: &TTable,
    tt_rev: &TTable,
    heuristic: Symmetrization,
    max_len: usize,
    exec: Execution,
) -> PhraseTable {
    let per_chunk = exec.map_chunks(&bitext.pairs, 64, |chunk| {
        chunk
            .iter()
            .flat_map(|(s, t)| sentence_phrases(s, t, tt_fwd, tt_rev, heuristic, max_len))
            .collect::<Vec<_>>()
    });

    let mut joint: HashMap<PhraseKey, (u64, f64, f64)> = HashMap::new();
    let mut src_count: HashMap<Vec<String>, u64> = HashMap::new();
    let mut tgt_count: HashMap<Vec<String>, u64> = HashMap::new();
    for ((s, t), lex_ts, lex_st) in per_chunk.into_iter().flatten() {
        *src_count.entry(s.clone()).or_default() += 1;
        *tgt_count.entry(t.clone()).or_default() += 1;
        let e = joint.entry((s, t)).or_insert((0, 0.0, 0.0));
        e.0 += 1;
        e.1 = e.1.max(lex_ts);
        e.2 = e.2.max(lex_st);
    }

    let mut entries: BTreeMap<Vec<String>, Vec<PhraseOption>> = BTreeMap::new();
    for ((s, t), (c, lex_ts, lex_st)) in joint {
        let phi_ts = c as f64 / src_count[&s] as f64;
        let phi_st = c as f64 / tgt_count[&t] as f64;
        entries.entry(s).or_default().push(PhraseOption {
            tgt: t,
            scores: [phi_ts, phi_st, lex_ts, lex_st],
        });
    }
    for options in entries.values_mut() {
        options.sort_by(|a, b| a.tgt.cmp(&b.tgt));
    }
    PhraseTable::from_entries(entries)
}

//! METEOR with exact and wordnet-synonym matching stages.
//!
//! The alignment maximizes exact matches, then synonym matches, then
//! minimizes the number of chunks. It is found by a left-to-right search
//! over the longer sentence with a bitmask over the shorter one: exhaustive
//! when the shorter side has at most `EXACT_SEARCH_MAX_LEN` tokens, a beam
//! otherwise.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use super::{check_lengths, MetricError, Synonyms};
use crate::corpus::Sentence;
use crate::par::Execution;
use crate::wordnet::WordnetDb;

pub const EXACT_SEARCH_MAX_LEN: usize = 12;
const BEAM_WIDTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeteorReport {
    pub matches: u32,
    pub exact_matches: u32,
    pub synonym_matches: u32,
    pub chunks: u32,
    pub hyp_len: u32,
    pub ref_len: u32,
    pub precision: f64,
    pub recall: f64,
    pub f_mean: f64,
    pub penalty: f64,
    pub score: f64,
}

/// Corpus METEOR: the mean of sentence scores, with summed counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeteorCorpus {
    pub score: f64,
    pub sentences: usize,
    pub matches: u64,
    pub exact_matches: u64,
    pub synonym_matches: u64,
    pub chunks: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    None,
    Synonym,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Obj {
    exact: u32,
    synonym: u32,
    chunks: u32,
}

impl Obj {
    const ZERO: Obj = Obj {
        exact: 0,
        synonym: 0,
        chunks: 0,
    };

    /// `Greater` means better.
    fn cmp_quality(&self, o: &Obj) -> Ordering {
        self.exact
            .cmp(&o.exact)
            .then(self.synonym.cmp(&o.synonym))
            .then(o.chunks.cmp(&self.chunks))
    }

    fn step(self, kind: Kind, continues: bool) -> Obj {
        Obj {
            exact: self.exact + u32::from(kind == Kind::Exact),
            synonym: self.synonym + u32::from(kind == Kind::Synonym),
            chunks: self.chunks + u32::from(!continues),
        }
    }
}

/// For each outer position, the inner positions it may match and how.
type Edges = Vec<Vec<(usize, Kind)>>;

fn exact_search(edges: &Edges, inner: usize) -> Obj {
    let width = inner + 1;
    let size = (1usize << inner) * width;
    let mut cur: Vec<Option<Obj>> = vec![None; size];
    cur[0] = Some(Obj::ZERO);
    let mut next = vec![None; size];
    let relax = |slot: &mut Option<Obj>, v: Obj| {
        if slot.is_none_or(|o| v.cmp_quality(&o) == Ordering::Greater) {
            *slot = Some(v);
        }
    };
    for row in edges {
        next.iter_mut().for_each(|s| *s = None);
        for (idx, v) in cur.iter().enumerate() {
            let Some(v) = *v else { continue };
            let (mask, last) = (idx / width, idx % width);
            relax(&mut next[mask * width], v);
            for &(j, kind) in row {
                if mask >> j & 1 == 0 {
                    let continues = last != 0 && j == last;
                    relax(&mut next[(mask | 1 << j) * width + j + 1], v.step(kind, continues));
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur.into_iter()
        .flatten()
        .max_by(|a, b| a.cmp_quality(b))
        .unwrap_or(Obj::ZERO)
}

fn beam_search(edges: &Edges, inner: usize) -> Obj {
    type Key = (Vec<u64>, usize);
    let mut beam: Vec<(Key, Obj)> = vec![((vec![0; inner.div_ceil(64)], 0), Obj::ZERO)];
    for row in edges {
        let mut next: HashMap<Key, Obj> = HashMap::new();
        let mut push = |k: Key, v: Obj| {
            let slot = next.entry(k).or_insert(v);
            if v.cmp_quality(slot) == Ordering::Greater {
                *slot = v;
            }
        };
        for ((mask, last), v) in &beam {
            push((mask.clone(), 0), *v);
            for &(j, kind) in row {
                if mask[j / 64] >> (j % 64) & 1 == 0 {
                    let mut m = mask.clone();
                    m[j / 64] |= 1 << (j % 64);
                    push((m, j + 1), v.step(kind, *last != 0 && j == *last));
                }
            }
        }
        beam = next.into_iter().collect();
        beam.sort_by(|(ka, a), (kb, b)| b.cmp_quality(a).then_with(|| ka.cmp(kb)));
        beam.truncate(BEAM_WIDTH);
    }
    beam.into_iter()
        .map(|(_, v)| v)
        .max_by(|a, b| a.cmp_quality(b))
        .unwrap_or(Obj::ZERO)
}

fn align(hyp: &[String], reference: &[String], synonyms: Option<Synonyms>) -> Obj {
    let kind = |h: &String, r: &String| {
        if h == r {
            Kind::Exact
        } else if synonyms.is_some_and(|s| s.db.are_synonyms(h, r, s.lang)) {
            Kind::Synonym
        } else {
            Kind::None
        }
    };
    // outer = longer side, inner = bitmask side
    let (outer, inner, swapped) = if hyp.len() >= reference.len() {
        (hyp, reference, false)
    } else {
        (reference, hyp, true)
    };
    let edges: Edges = outer
        .iter()
        .map(|o| {
            inner
                .iter()
                .enumerate()
                .filter_map(|(j, i)| {
                    let k = if swapped { kind(i, o) } else { kind(o, i) };
                    (k != Kind::None).then_some((j, k))
                })
                .collect()
        })
        .collect();
    if inner.len() <= EXACT_SEARCH_MAX_LEN {
        exact_search(&edges, inner.len())
    } else {
        beam_search(&edges, inner.len())
    }
}

impl MeteorReport {
    /// Score from alignment statistics.
    pub fn from_counts(exact: u32, synonym: u32, chunks: u32, hyp_len: u32, ref_len: u32) -> Self {
        let m = exact + synonym;
        let mut r = MeteorReport {
            matches: m,
            exact_matches: exact,
            synonym_matches: synonym,
            chunks,
            hyp_len,
            ref_len,
            precision: 0.0,
            recall: 0.0,
            f_mean: 0.0,
            penalty: 0.0,
            score: 0.0,
        };
        if m == 0 {
            return r;
        }
        let (p, rc) = (m as f64 / hyp_len as f64, m as f64 / ref_len as f64);
        r.precision = p;
        r.recall = rc;
        r.f_mean = 10.0 * p * rc / (rc + 9.0 * p);
        r.penalty = 0.5 * (chunks as f64 / m as f64).powi(3);
        r.score = r.f_mean * (1.0 - r.penalty);
        r
    }
}

pub fn meteor(hyp: &[String], reference: &[String], db: Option<&WordnetDb>, lang: &str) -> MeteorReport {
    sentence_meteor(hyp, reference, db.map(|db| Synonyms { db, lang }))
}

fn sentence_meteor(hyp: &[String], reference: &[String], synonyms: Option<Synonyms>) -> MeteorReport {
    let o = align(hyp, reference, synonyms);
    MeteorReport::from_counts(o.exact, o.synonym, o.chunks, hyp.len() as u32, reference.len() as u32)
}

pub(crate) fn corpus_meteor(
    hyps: &[Sentence],
    refs: &[Sentence],
    synonyms: Option<Synonyms>,
    exec: Execution,
) -> Result<MeteorCorpus, MetricError> {
    check_lengths(hyps, refs)?;
    let pairs: Vec<(&Sentence, &Sentence)> = hyps.iter().zip(refs).collect();
    let per = exec.map(&pairs, |(h, r)| sentence_meteor(h, r, synonyms));
    let mut c = MeteorCorpus {
        score: per.iter().map(|r| r.score).sum::<f64>() / per.len() as f64,
        sentences: per.len(),
        matches: 0,
        exact_matches: 0,
        synonym_matches: 0,
        chunks: 0,
    };
    for r in &per {
        c.matches += u64::from(r.matches);
        c.exact_matches += u64::from(r.exact_matches);
        c.synonym_matches += u64::from(r.synonym_matches);
        c.chunks += u64::from(r.chunks);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordnet::fixtures::synset;
    use crate::wordnet::{Pos, WordnetDb};
    use approx::assert_abs_diff_eq;

    fn w(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn identical_three_tokens() {
        let r = meteor(&w("a b c"), &w("a b c"), None, "en");
        assert_eq!((r.matches, r.chunks), (3, 1));
        assert_eq!((r.precision, r.recall), (1.0, 1.0));
        assert_abs_diff_eq!(r.penalty, 0.018519, epsilon = 1e-6);
        assert_abs_diff_eq!(r.score, 0.981481, epsilon = 1e-6);
    }

    #[test]
    fn no_matches() {
        let r = meteor(&w("a b"), &w("c d"), None, "en");
        assert_eq!(r.score, 0.0);
        assert_eq!(meteor(&[], &w("c d"), None, "en").score, 0.0);
    }

    #[test]
    fn prefers_fewer_chunks() {
        // "a" could match either ref position; the second keeps one chunk
        let r = meteor(&w("a b"), &w("a x a b"), None, "en");
        assert_eq!((r.matches, r.chunks), (2, 1));
    }

    #[test]
    fn synonym_stage_uses_db() {
        let db = WordnetDb::new(
            "en",
            vec![synset(1, "en", Pos::Adjective, &["endless", "eternal"])],
            vec![],
        )
        .unwrap();
        let (h, r) = (w("an eternal story"), w("an endless story"));
        let without = meteor(&h, &r, None, "en");
        let with = meteor(&h, &r, Some(&db), "en");
        assert_eq!((without.matches, with.matches), (2, 3));
        assert_eq!(with.synonym_matches, 1);
        assert_eq!(with.chunks, 1);
        assert_eq!(meteor(&h, &r, Some(&db), "hi").matches, 2);
    }

    #[test]
    fn exact_beats_synonym() {
        let db = WordnetDb::new("en", vec![synset(1, "en", Pos::Noun, &["p", "q"])], vec![]).unwrap();
        // hyp "q" may take ref "p" (synonym) or ref "q" (exact); exact count is maximized first
        let r = meteor(&w("q"), &w("p q"), Some(&db), "en");
        assert_eq!((r.exact_matches, r.synonym_matches), (1, 0));
    }

    #[test]
    fn beam_agrees_with_exact_on_long_monotone_input() {
        let toks: Vec<String> = (0..20).map(|i| format!("t{}", i % 5)).collect();
        let r = meteor(&toks, &toks, None, "en");
        assert_eq!((r.matches, r.chunks), (20, 1));
    }

    #[test]
    fn orientation_does_not_matter_for_counts() {
        let (a, b) = (w("a b c a d"), w("c a b"));
        let x = meteor(&a, &b, None, "en");
        let y = meteor(&b, &a, None, "en");
        assert_eq!((x.matches, x.chunks), (y.matches, y.chunks));
    }
}

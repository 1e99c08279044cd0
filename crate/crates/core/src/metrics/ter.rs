use serde::Serialize;

use super::{check_lengths, MetricError};
use crate::corpus::Sentence;
use crate::par::Execution;

/// Longest hypothesis span considered for a shift.
pub const MAX_SHIFT_LEN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TerReport {
    /// Insertions, deletions and substitutions after shifting, plus shifts.
    pub edits: u64,
    pub shifts: u64,
    pub ref_len: u64,
    pub ter: f64,
}

impl TerReport {
    fn new(edits: u64, shifts: u64, ref_len: u64) -> Self {
        TerReport {
            edits,
            shifts,
            ref_len,
            ter: edits as f64 / ref_len as f64,
        }
    }
}

/// Word-level Levenshtein distance with unit costs.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut rows = (Vec::new(), Vec::new());
    edit_distance_with(a, b, &mut rows)
}

fn edit_distance_with<T: PartialEq>(a: &[T], b: &[T], rows: &mut (Vec<usize>, Vec<usize>)) -> usize {
    let (prev, cur) = rows;
    prev.clear();
    prev.extend(0..=b.len());
    cur.clear();
    cur.resize(b.len() + 1, 0);
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(prev, cur);
    }
    prev[b.len()]
}

/// `cur` with `cur[start..start + len]` moved so it begins at `dest` of
/// the remaining sequence.
fn shifted(cur: &[u32], start: usize, len: usize, dest: usize, out: &mut Vec<u32>) {
    out.clear();
    let rest = cur[..start].iter().chain(&cur[start + len..]);
    let span = &cur[start..start + len];
    for (k, &t) in rest.enumerate() {
        if k == dest {
            out.extend_from_slice(span);
        }
        out.push(t);
    }
    if dest == cur.len() - len {
        out.extend_from_slice(span);
    }
}

fn intern<'a>(ids: &mut Vec<&'a str>, words: &'a [String]) -> Vec<u32> {
    words
        .iter()
        .map(|t| match ids.iter().position(|w| *w == t.as_str()) {
            Some(i) => i as u32,
            None => {
                ids.push(t);
                ids.len() as u32 - 1
            }
        })
        .collect()
}

/// Sentence TER. Shifts are chosen greedily: each round applies the shift
/// with the largest drop in total edits, preferring longer spans, then
/// leftmost spans, then leftmost destinations. Only spans that occur
/// verbatim in the reference may move.
pub fn ter(hyp: &[String], reference: &[String]) -> Result<TerReport, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::EmptyReference { index: 0 });
    }
    let mut ids: Vec<&str> = Vec::new();
    let reference = intern(&mut ids, reference);
    let mut cur = intern(&mut ids, hyp);

    let mut rows = (Vec::new(), Vec::new());
    let mut cand = Vec::with_capacity(cur.len());
    let mut ed = edit_distance_with(&cur, &reference, &mut rows);
    let mut shifts = 0u64;
    // a shift costs 1, so it can only pay off when ed >= 2
    while ed > 1 {
        // (gain, len, start, dest)
        let mut best: Option<(usize, usize, usize, usize)> = None;
        let n = cur.len();
        for len in (1..=MAX_SHIFT_LEN.min(n)).rev() {
            for start in 0..=n - len {
                let span = &cur[start..start + len];
                if !reference.windows(len).any(|w| w == span) {
                    continue;
                }
                for dest in 0..=n - len {
                    if dest == start {
                        continue;
                    }
                    shifted(&cur, start, len, dest, &mut cand);
                    let after = edit_distance_with(&cand, &reference, &mut rows) + 1;
                    if after < ed {
                        let gain = ed - after;
                        if best.is_none_or(|b| gain > b.0) {
                            best = Some((gain, len, start, dest));
                        }
                    }
                }
            }
        }
        match best {
            Some((gain, len, start, dest)) => {
                shifted(&cur, start, len, dest, &mut cand);
                std::mem::swap(&mut cur, &mut cand);
                ed -= gain + 1;
                shifts += 1;
            }
            None => break,
        }
    }
    Ok(TerReport::new(ed as u64 + shifts, shifts, reference.len() as u64))
}

/// Σ edits / Σ reference length.
pub(crate) fn corpus_ter(hyps: &[Sentence], refs: &[Sentence], exec: Execution) -> Result<TerReport, MetricError> {
    check_lengths(hyps, refs)?;
    if let Some(index) = refs.iter().position(|r| r.is_empty()) {
        return Err(MetricError::EmptyReference { index });
    }
    let pairs: Vec<(&Sentence, &Sentence)> = hyps.iter().zip(refs).collect();
    let per = exec.map(&pairs, |(h, r)| ter(h, r).expect("reference checked non-empty"));
    let (edits, shifts, ref_len) = per
        .iter()
        .fold((0, 0, 0), |(e, s, r), t| (e + t.edits, s + t.shifts, r + t.ref_len));
    Ok(TerReport::new(edits, shifts, ref_len))
}

use std::collections::HashMap;

use serde::Serialize;

use super::{check_lengths, MetricError};
use crate::corpus::Sentence;
use crate::par::Execution;

pub const MAX_N: usize = 4;

/// Clipped n-gram counts for one or more sentence pairs. Adding two
/// `BleuStats` gives the stats of the concatenated corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BleuStats {
    pub matches: [u64; MAX_N],
    pub totals: [u64; MAX_N],
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl std::ops::Add for BleuStats {
    type Output = BleuStats;

    fn add(mut self, o: BleuStats) -> BleuStats {
        for n in 0..MAX_N {
            self.matches[n] += o.matches[n];
            self.totals[n] += o.totals[n];
        }
        self.hyp_len += o.hyp_len;
        self.ref_len += o.ref_len;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BleuReport {
    pub bleu: f64,
    /// Modified precisions p_1..p_4 (smoothed for n ≥ 2 when `smoothed`).
    pub precisions: [f64; MAX_N],
    pub bp: f64,
    pub hyp_len: u64,
    pub ref_len: u64,
    pub matches: [u64; MAX_N],
    pub totals: [u64; MAX_N],
    pub smoothed: bool,
}

fn ngram_counts(s: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut m = HashMap::new();
    for g in s.windows(n) {
        *m.entry(g).or_default() += 1;
    }
    m
}

pub fn bleu_stats(hyp: &[String], reference: &[String]) -> BleuStats {
    let mut st = BleuStats {
        hyp_len: hyp.len() as u64,
        ref_len: reference.len() as u64,
        ..BleuStats::default()
    };
    for n in 1..=MAX_N {
        let h = ngram_counts(hyp, n);
        let r = ngram_counts(reference, n);
        st.totals[n - 1] = hyp.len().saturating_sub(n - 1) as u64;
        st.matches[n - 1] = h
            .iter()
            .map(|(g, &c)| c.min(r.get(g).copied().unwrap_or(0)))
            .sum();
    }
    st
}

impl BleuReport {
    pub fn from_stats(st: BleuStats, smooth: bool) -> Self {
        let mut precisions = [0.0; MAX_N];
        for n in 0..MAX_N {
            let (m, t) = (st.matches[n] as f64, st.totals[n] as f64);
            precisions[n] = if smooth && n > 0 {
                (m + 1.0) / (t + 1.0)
            } else if t > 0.0 {
                m / t
            } else {
                0.0
            };
        }
        let bp = if st.hyp_len == 0 {
            0.0
        } else {
            (1.0 - st.ref_len as f64 / st.hyp_len as f64).exp().min(1.0)
        };
        let bleu = if st.hyp_len == 0 || precisions.iter().any(|&p| p == 0.0) {
            0.0
        } else {
            bp * precisions.iter().map(|p| 0.25 * p.ln()).sum::<f64>().exp()
        };
        BleuReport {
            bleu,
            precisions,
            bp,
            hyp_len: st.hyp_len,
            ref_len: st.ref_len,
            matches: st.matches,
            totals: st.totals,
            smoothed: smooth,
        }
    }
}

/// Corpus BLEU: counts are summed over all pairs before dividing.
pub fn bleu(hyps: &[Sentence], refs: &[Sentence], smooth: bool) -> Result<BleuReport, MetricError> {
    corpus_bleu(hyps, refs, smooth, Execution::Sequential)
}

pub(crate) fn corpus_bleu(
    hyps: &[Sentence],
    refs: &[Sentence],
    smooth: bool,
    exec: Execution,
) -> Result<BleuReport, MetricError> {
    check_lengths(hyps, refs)?;
    let pairs: Vec<(&Sentence, &Sentence)> = hyps.iter().zip(refs).collect();
    let total = exec
        .map(&pairs, |(h, r)| bleu_stats(h, r))
        .into_iter()
        .fold(BleuStats::default(), |a, b| a + b);
    Ok(BleuReport::from_stats(total, smooth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn s(text: &str) -> Vec<Sentence> {
        vec![Sentence::from_spaced(text)]
    }

    #[test]
    fn identity_is_one() {
        let h = s("the cat sat on the mat");
        assert_abs_diff_eq!(bleu(&h, &h, false).unwrap().bleu, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn clipped_unigrams() {
        let r = bleu(&s("the the the the the the the"), &s("the cat is on the mat"), false).unwrap();
        assert_abs_diff_eq!(r.precisions[0], 2.0 / 7.0, epsilon = 1e-12);
        assert_eq!(r.bleu, 0.0);
    }

    #[test]
    fn brevity_penalty() {
        let r = bleu(&s("a b c d e"), &s("a b c d e f g h i j"), false).unwrap();
        assert_eq!(r.precisions, [1.0; 4]);
        assert_abs_diff_eq!(r.bp, (-1.0f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.bp, 0.367879, epsilon = 1e-6);
        assert_abs_diff_eq!(r.bleu, r.bp, epsilon = 1e-12);
    }

    #[test]
    fn empty_hypothesis_scores_zero() {
        let r = bleu(&[Sentence::default()], &s("a b"), false).unwrap();
        assert_eq!(r.bleu, 0.0);
    }

    #[test]
    fn smoothing_rescues_short_output() {
        let (h, r) = (s("a b c"), s("a b c d"));
        assert_eq!(bleu(&h, &r, false).unwrap().bleu, 0.0);
        let sm = bleu(&h, &r, true).unwrap();
        assert!(sm.bleu > 0.0);
        assert_abs_diff_eq!(sm.precisions[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn corpus_level_sums_before_dividing() {
        // per-sentence BLEU of the second pair is 0, corpus BLEU is not
        let h = vec![Sentence::from_spaced("a b c d e"), Sentence::from_spaced("x y")];
        let r = vec![Sentence::from_spaced("a b c d e"), Sentence::from_spaced("x z")];
        let rep = bleu(&h, &r, false).unwrap();
        assert_eq!(rep.matches, [6, 4, 3, 2]);
        assert_eq!(rep.totals, [7, 5, 3, 2]);
        assert!(rep.bleu > 0.0);
    }

    #[test]
    fn sequential_equals_parallel() {
        let h: Vec<Sentence> = (0..50).map(|i| Sentence::from_spaced(&format!("a b {} c", i % 7))).collect();
        let r: Vec<Sentence> = (0..50).map(|i| Sentence::from_spaced(&format!("a {} b c", i % 5))).collect();
        assert_eq!(
            corpus_bleu(&h, &r, false, Execution::Sequential).unwrap(),
            corpus_bleu(&h, &r, false, Execution::Parallel).unwrap()
        );
    }
}

use std::collections::BTreeSet;
use std::ops::Range;

use super::Alignment;

/// Half-open source and target spans of a phrase pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhraseSpan {
    pub src: Range<usize>,
    pub tgt: Range<usize>,
}

impl PhraseSpan {
    pub fn new(src: Range<usize>, tgt: Range<usize>) -> Self {
        PhraseSpan { src, tgt }
    }
}

/// All phrase pairs consistent with `a`, at most `max_len` tokens per side.
///
/// A pair is consistent when at least one link lies inside it and no link
/// connects a word inside the pair to a word outside it. Unaligned target
/// words at the edges are attached in every possible extension.
pub fn extract_phrases(
    src_len: usize,
    tgt_len: usize,
    a: &Alignment,
    max_len: usize,
) -> Vec<PhraseSpan> {
    let mut tgt_aligned = vec![false; tgt_len];
    for &(_, j) in &a.links {
        tgt_aligned[j] = true;
    }
    let mut out = BTreeSet::new();
    for s_start in 0..src_len {
        for s_end in s_start..src_len.min(s_start + max_len) {
            let mut t_min = usize::MAX;
            let mut t_max = 0;
            for &(i, j) in &a.links {
                if (s_start..=s_end).contains(&i) {
                    t_min = t_min.min(j);
                    t_max = t_max.max(j);
                }
            }
            if t_min == usize::MAX || t_max - t_min + 1 > max_len {
                continue;
            }
            let consistent = a
                .links
                .iter()
                .all(|&(i, j)| !(t_min..=t_max).contains(&j) || (s_start..=s_end).contains(&i));
            if !consistent {
                continue;
            }
            let mut t_start = t_min;
            loop {
                let mut t_end = t_max;
                while t_end - t_start < max_len {
                    out.insert((s_start, s_end + 1, t_start, t_end + 1));
                    t_end += 1;
                    if t_end >= tgt_len || tgt_aligned[t_end] {
                        break;
                    }
                }
                if t_start == 0 || tgt_aligned[t_start - 1] {
                    break;
                }
                t_start -= 1;
                if t_max - t_start >= max_len {
                    break;
                }
            }
        }
    }
    out.into_iter()
        .map(|(a, b, c, d)| PhraseSpan::new(a..b, c..d))
        .collect()
}

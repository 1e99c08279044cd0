//! Beam-stack search.
//!
//! Stack k holds hypotheses covering k source words. Hypotheses agreeing
//! on coverage, end of the last source phrase and LM history have the same
//! future, so only the best of them is kept. Each stack is cut to
//! `beam_size` before it is expanded. No future-cost estimate is used.
//!
//! A step may jump at most `distortion_limit` positions, and after every
//! step the first uncovered position must still be reachable from the end
//! of the phrase just placed.
//!
//! A source word is copied through verbatim when no phrase-table entry
//! matching the sentence covers its position. If those options leave no
//! complete derivation, the search is rerun with a copy option for every
//! word that lacks a single-word entry, which always succeeds.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::Range;

use super::{DecodeError, DecoderConfig, Features, TranslationModel, NUM_FEATURES};
use crate::align::{PhraseTable, WordId};
use crate::corpus::Sentence;
use crate::par::Execution;

/// One decoding step: a source span and the target words produced for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub src: Range<usize>,
    pub tgt: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Translation {
    pub output: Sentence,
    pub score: f64,
    pub features: Features,
    pub derivation: Vec<DerivationStep>,
}

#[derive(Debug, Clone)]
struct TransOption {
    src: Range<usize>,
    tgt: Vec<String>,
    tgt_ids: Vec<WordId>,
    phrase: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Coverage(Vec<u64>);

impl Coverage {
    fn new(n: usize) -> Self {
        Coverage(vec![0; n.div_ceil(64).max(1)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn overlaps(&self, r: &Range<usize>) -> bool {
        r.clone().any(|i| self.get(i))
    }

    fn with(&self, r: &Range<usize>) -> Self {
        let mut c = self.clone();
        for i in r.clone() {
            c.0[i / 64] |= 1 << (i % 64);
        }
        c
    }

    fn first_gap(&self, n: usize) -> usize {
        (0..n).find(|&i| !self.get(i)).unwrap_or(n)
    }
}

#[derive(Debug, Clone)]
struct Hyp {
    coverage: Coverage,
    covered: usize,
    // one past the last source position of the previous phrase
    next_pos: usize,
    lm_state: Vec<WordId>,
    score: f64,
    features: Features,
    tgt: Vec<String>,
    back: Option<(usize, usize)>, // (arena index, option index)
}

/// Higher score first; equal scores prefer the lexicographically smaller output.
fn better(a: &Hyp, b: &Hyp) -> bool {
    match a.score.total_cmp(&b.score) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.tgt < b.tgt,
    }
}

/// Total order used for pruning; the trailing keys only make it deterministic.
fn rank(a: &Hyp, b: &Hyp) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.tgt.cmp(&b.tgt))
        .then_with(|| a.coverage.0.cmp(&b.coverage.0))
        .then_with(|| a.next_pos.cmp(&b.next_pos))
}

fn phrase_log_scores(scores: &[f64; 4]) -> [f64; 4] {
    scores.map(f64::log10)
}

/// Positions that no phrase-table entry matching `src` can cover.
fn uncovered_positions(src: &[String], pt: &PhraseTable) -> Vec<bool> {
    let n = src.len();
    let mut free = vec![true; n];
    for start in 0..n {
        for end in start + 1..=n.min(start + pt.max_src_len()) {
            if pt.get(&src[start..end]).is_some() {
                free[start..end].iter_mut().for_each(|f| *f = false);
            }
        }
    }
    free
}

/// Options for every source span, plus copy-through for the words where
/// `copy` is set and there is no single-word entry.
fn collect_options(src: &[String], model: &TranslationModel, cfg: &DecoderConfig, copy: &[bool]) -> Vec<TransOption> {
    let pt: &PhraseTable = &model.phrase_table;
    let w = cfg.weights;
    let n = src.len();
    let mut out = Vec::new();
    for start in 0..n {
        for end in start + 1..=n.min(start + pt.max_src_len().max(1)) {
            let mut span: Vec<TransOption> = pt
                .get(&src[start..end])
                .unwrap_or(&[])
                .iter()
                .map(|o| TransOption {
                    src: start..end,
                    tgt: o.tgt.clone(),
                    tgt_ids: o.tgt.iter().map(|t| model.lm.id(t)).collect(),
                    phrase: phrase_log_scores(&o.scores),
                })
                .collect();
            if span.is_empty() && end == start + 1 && copy[start] {
                span.push(TransOption {
                    src: start..end,
                    tgt: vec![src[start].clone()],
                    tgt_ids: vec![model.lm.id(&src[start])],
                    phrase: [0.0; 4],
                });
            }
            if span.len() > cfg.max_options_per_span {
                let est = |o: &TransOption| {
                    w.phi_ts * o.phrase[0]
                        + w.phi_st * o.phrase[1]
                        + w.lex_ts * o.phrase[2]
                        + w.lex_st * o.phrase[3]
                        - w.word_penalty * o.tgt.len() as f64
                };
                span.sort_by(|a, b| est(b).total_cmp(&est(a)).then_with(|| a.tgt.cmp(&b.tgt)));
                span.truncate(cfg.max_options_per_span);
            }
            out.extend(span);
        }
    }
    out
}

pub fn translate(src: &Sentence, model: &TranslationModel, cfg: &DecoderConfig) -> Translation {
    let n = src.len();
    if n == 0 {
        return Translation {
            output: Sentence::default(),
            score: 0.0,
            features: [0.0; NUM_FEATURES],
            derivation: Vec::new(),
        };
    }
    let strict = uncovered_positions(src, &model.phrase_table);
    let options = collect_options(src, model, cfg, &strict);
    if let Some(t) = search(n, model, cfg, &options) {
        return t;
    }
    let options = collect_options(src, model, cfg, &vec![true; n]);
    search(n, model, cfg, &options).expect("single-word options make every admissible hypothesis completable")
}

fn search(n: usize, model: &TranslationModel, cfg: &DecoderConfig, options: &[TransOption]) -> Option<Translation> {
    let lm = &model.lm;
    let history = lm.order() - 1;
    let weights = cfg.weights;
    let dl = cfg.distortion_limit;

    let mut arena: Vec<Hyp> = Vec::new();
    let mut stacks: Vec<HashMap<(Coverage, usize, Vec<WordId>), Hyp>> = vec![HashMap::new(); n + 1];
    let root = Hyp {
        coverage: Coverage::new(n),
        covered: 0,
        next_pos: 0,
        lm_state: vec![lm.bos()],
        score: 0.0,
        features: [0.0; NUM_FEATURES],
        tgt: Vec::new(),
        back: None,
    };
    stacks[0].insert((root.coverage.clone(), 0, root.lm_state.clone()), root);

    for k in 0..n {
        let mut hyps: Vec<Hyp> = std::mem::take(&mut stacks[k]).into_values().collect();
        hyps.sort_by(rank);
        hyps.truncate(cfg.beam_size);
        for hyp in hyps {
            let idx = arena.len();
            arena.push(hyp);
            let hyp = &arena[idx];
            for (oi, opt) in options.iter().enumerate() {
                if hyp.coverage.overlaps(&opt.src) {
                    continue;
                }
                let jump = opt.src.start.abs_diff(hyp.next_pos);
                if jump > dl {
                    continue;
                }
                let coverage = hyp.coverage.with(&opt.src);
                let covered = hyp.covered + opt.src.len();
                let gap = coverage.first_gap(n);
                if gap < n && opt.src.end.saturating_sub(gap) > dl {
                    continue;
                }
                let mut state = hyp.lm_state.clone();
                let mut lm_delta = 0.0;
                for &w in &opt.tgt_ids {
                    lm_delta += lm.log10_prob_ids(&state, w);
                    state.push(w);
                    if state.len() > history {
                        state.remove(0);
                    }
                }
                if covered == n {
                    lm_delta += lm.log10_prob_ids(&state, lm.eos());
                }
                let mut delta = [0.0; NUM_FEATURES];
                delta[..4].copy_from_slice(&opt.phrase);
                delta[4] = lm_delta;
                delta[5] = -(opt.tgt.len() as f64);
                delta[6] = -(jump as f64);
                let mut features = hyp.features;
                for (f, d) in features.iter_mut().zip(delta) {
                    *f += d;
                }
                let mut tgt = hyp.tgt.clone();
                tgt.extend(opt.tgt.iter().cloned());
                let new = Hyp {
                    coverage,
                    covered,
                    next_pos: opt.src.end,
                    lm_state: state,
                    score: hyp.score + weights.dot(&delta),
                    features,
                    tgt,
                    back: Some((idx, oi)),
                };
                let key = (new.coverage.clone(), new.next_pos, new.lm_state.clone());
                let slot = &mut stacks[covered];
                match slot.get(&key) {
                    Some(old) if !better(&new, old) => {}
                    _ => {
                        slot.insert(key, new);
                    }
                }
            }
        }
    }

    let best = std::mem::take(&mut stacks[n]).into_values().min_by(rank)?;
    let mut derivation = Vec::new();
    let mut cursor = best.back;
    while let Some((idx, oi)) = cursor {
        let opt = &options[oi];
        derivation.push(DerivationStep {
            src: opt.src.clone(),
            tgt: opt.tgt.clone(),
        });
        cursor = arena[idx].back;
    }
    derivation.reverse();
    Some(Translation {
        output: Sentence::new(best.tgt),
        score: best.score,
        features: best.features,
        derivation,
    })
}

/// Decodes every sentence; output order follows input order.
pub fn translate_batch(
    sources: &[Sentence],
    model: &TranslationModel,
    cfg: &DecoderConfig,
    exec: Execution,
) -> Vec<Translation> {
    exec.map(sources, |s| translate(s, model, cfg))
}

/// Recomputes the feature vector of a derivation from the model.
pub fn derivation_features(
    src: &[String],
    derivation: &[DerivationStep],
    model: &TranslationModel,
) -> Result<Features, DecodeError> {
    let n = src.len();
    let mut seen = vec![false; n];
    for step in derivation {
        if step.src.is_empty() || step.src.end > n {
            return Err(DecodeError::Coverage(format!("bad span {:?}", step.src)));
        }
        for i in step.src.clone() {
            if std::mem::replace(&mut seen[i], true) {
                return Err(DecodeError::Coverage(format!("position {i} covered twice")));
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(DecodeError::Coverage(format!("position {i} not covered")));
    }

    let mut f = [0.0; NUM_FEATURES];
    let mut output = Vec::new();
    let mut prev_end = 0usize;
    for step in derivation {
        let words = &src[step.src.clone()];
        let entry = model.phrase_table.get(words);
        match entry.and_then(|opts| opts.iter().find(|o| o.tgt == step.tgt)) {
            Some(o) => {
                for (acc, s) in f.iter_mut().zip(o.scores) {
                    *acc += s.log10();
                }
            }
            None => {
                let copy = words.len() == 1 && entry.is_none() && step.tgt == words;
                if !copy {
                    return Err(DecodeError::UnknownPhrase {
                        src: words.join(" "),
                        tgt: step.tgt.join(" "),
                    });
                }
            }
        }
        f[5] -= step.tgt.len() as f64;
        f[6] -= step.src.start.abs_diff(prev_end) as f64;
        prev_end = step.src.end;
        output.extend(step.tgt.iter().cloned());
    }
    f[4] = model.lm.score(&output);
    Ok(f)
}

/// Weighted model score of a derivation covering `src` exactly once.
pub fn score_derivation(
    src: &[String],
    derivation: &[DerivationStep],
    model: &TranslationModel,
    cfg: &DecoderConfig,
) -> Result<f64, DecodeError> {
    if src.is_empty() && derivation.is_empty() {
        return Ok(0.0);
    }
    Ok(cfg.weights.dot(&derivation_features(src, derivation, model)?))
}

//! Backoff n-gram language model with Witten-Bell discounting.
//!
//! For a context h seen N times with T distinct continuations, a seen word
//! gets c(h,w)/(N+T). The reserved mass T/(N+T) goes to unseen words in
//! proportion to the next-shorter context's distribution. At the unigram
//! level the reserved mass belongs to the single unknown-word type.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::vocab::{Vocab, WordId};
use super::AlignError;
use crate::corpus::Sentence;

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

#[derive(Debug, Clone, Default, PartialEq)]
struct ContextStats {
    total: u64,
    followers: HashMap<WordId, u64>,
    // alpha(h): reserved mass over the lower-order mass of unseen words
    backoff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanguageModel {
    order: usize,
    vocab: Vocab,
    unk: WordId,
    bos: WordId,
    eos: WordId,
    // contexts[k] holds contexts of length k
    contexts: Vec<HashMap<Vec<WordId>, ContextStats>>,
}

impl LanguageModel {
    fn empty(order: usize) -> Self {
        let mut vocab = Vocab::new();
        let unk = vocab.intern(UNK);
        let bos = vocab.intern(BOS);
        let eos = vocab.intern(EOS);
        LanguageModel {
            order: order.max(1),
            vocab,
            unk,
            bos,
            eos,
            contexts: vec![HashMap::new(); order.max(1)],
        }
    }

    pub fn train<'a>(sentences: impl IntoIterator<Item = &'a Sentence>, order: usize) -> Result<Self, AlignError> {
        let mut lm = Self::empty(order);
        let mut any = false;
        for s in sentences {
            any = true;
            let mut seq = Vec::with_capacity(s.len() + 2);
            seq.push(lm.bos);
            seq.extend(s.iter().map(|w| lm.vocab.intern(w)));
            seq.push(lm.eos);
            for p in 1..seq.len() {
                for k in 0..=(lm.order - 1).min(p) {
                    lm.add_event(&seq[p - k..p], seq[p], 1);
                }
            }
        }
        if !any {
            return Err(AlignError::EmptyCorpus);
        }
        lm.finish();
        Ok(lm)
    }

    fn add_event(&mut self, ctx: &[WordId], w: WordId, count: u64) {
        let st = self.contexts[ctx.len()].entry(ctx.to_vec()).or_default();
        st.total += count;
        *st.followers.entry(w).or_default() += count;
    }

    fn finish(&mut self) {
        for k in 1..self.order {
            let keys: Vec<Vec<WordId>> = self.contexts[k].keys().cloned().collect();
            for ctx in keys {
                let st = &self.contexts[k][&ctx];
                // fixed summation order keeps alpha bit-identical across runs
                let mut seen: Vec<WordId> = st.followers.keys().copied().collect();
                seen.sort_unstable();
                let seen_lower: f64 = seen.iter().map(|&w| self.prob_ids(&ctx[1..], w)).sum();
                let reserved = st.followers.len() as f64 / (st.total + st.followers.len() as u64) as f64;
                let backoff = reserved / (1.0 - seen_lower);
                self.contexts[k].get_mut(&ctx).unwrap().backoff = backoff;
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id(&self, word: &str) -> WordId {
        self.vocab.get(word).unwrap_or(self.unk)
    }

    pub fn bos(&self) -> WordId {
        self.bos
    }

    pub fn eos(&self) -> WordId {
        self.eos
    }

    pub fn unk(&self) -> WordId {
        self.unk
    }

    /// Words the model can predict: every seen word, `</s>`, and `<unk>`.
    pub fn predictable(&self) -> Vec<WordId> {
        let mut out: Vec<WordId> = self.contexts[0][&Vec::new()].followers.keys().copied().collect();
        out.push(self.unk);
        out.sort_unstable();
        out
    }

    /// Observed contexts of every length, including the empty one.
    pub fn observed_contexts(&self) -> Vec<Vec<WordId>> {
        let mut out: Vec<Vec<WordId>> = self.contexts.iter().flat_map(|m| m.keys().cloned()).collect();
        out.sort();
        out
    }

    /// p(w | ctx); `ctx` is truncated to its last `order - 1` ids.
    pub fn prob_ids(&self, ctx: &[WordId], w: WordId) -> f64 {
        let ctx = &ctx[ctx.len().saturating_sub(self.order - 1)..];
        match self.contexts[ctx.len()].get(ctx) {
            Some(st) => {
                if let Some(&c) = st.followers.get(&w) {
                    return c as f64 / (st.total + st.followers.len() as u64) as f64;
                }
                if ctx.is_empty() {
                    return if w == self.unk {
                        st.followers.len() as f64 / (st.total + st.followers.len() as u64) as f64
                    } else {
                        0.0
                    };
                }
                st.backoff * self.prob_ids(&ctx[1..], w)
            }
            None => self.prob_ids(&ctx[1..], w),
        }
    }

    pub fn log10_prob_ids(&self, ctx: &[WordId], w: WordId) -> f64 {
        self.prob_ids(ctx, w).log10()
    }

    /// Sum of log10 probabilities of every word and the closing `</s>`.
    pub fn score(&self, sentence: &[String]) -> f64 {
        let mut hist = vec![self.bos];
        let mut total = 0.0;
        for w in sentence.iter().map(|w| self.id(w)).chain(std::iter::once(self.eos)) {
            total += self.log10_prob_ids(&hist, w);
            hist.push(w);
        }
        total
    }

    pub fn word(&self, id: WordId) -> &str {
        self.vocab.word(id)
    }

    /// TSV: an `order` header, then `n<TAB>context… word<TAB>count` events.
    pub fn write(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        writeln!(w, "order\t{}", self.order)?;
        for (k, level) in self.contexts.iter().enumerate() {
            let mut lines = BTreeMap::new();
            for (ctx, st) in level {
                for (&word, &c) in &st.followers {
                    let gram: Vec<&str> = ctx
                        .iter()
                        .chain(std::iter::once(&word))
                        .map(|&id| self.vocab.word(id))
                        .collect();
                    lines.insert(gram.join(" "), c);
                }
            }
            for (gram, c) in lines {
                writeln!(w, "{}\t{gram}\t{c}", k + 1)?;
            }
        }
        w.flush()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, AlignError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let fail = |line: usize, message: &str| AlignError::Format {
            file: path.display().to_string(),
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let order = match lines.next().map(|(_, l)| l.split_once('\t')) {
            Some(Some(("order", n))) => n.parse().map_err(|_| fail(1, "bad order"))?,
            _ => return Err(fail(1, "missing order header")),
        };
        let mut lm = Self::empty(order);
        for (idx, line) in lines {
            let cols: Vec<&str> = line.split('\t').collect();
            let [n, gram, c] = cols[..] else {
                return Err(fail(idx + 1, "expected 3 columns"));
            };
            let n: usize = n.parse().map_err(|_| fail(idx + 1, "bad n"))?;
            let c: u64 = c.parse().map_err(|_| fail(idx + 1, "bad count"))?;
            let ids: Vec<WordId> = gram.split(' ').map(|w| lm.vocab.intern(w)).collect();
            if n == 0 || n > lm.order || ids.len() != n {
                return Err(fail(idx + 1, "n-gram length mismatch"));
            }
            lm.add_event(&ids[..n - 1], ids[n - 1], c);
        }
        if lm.contexts[0].is_empty() {
            return Err(fail(1, "no unigram events"));
        }
        lm.finish();
        Ok(lm)
    }
}

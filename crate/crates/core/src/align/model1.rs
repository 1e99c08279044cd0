//! IBM Model 1 trained with EM.
//!
//! Parameters live in a dense vector indexed by co-occurring
//! (source, target) word slots. The E-step runs over fixed-size sentence
//! shards whose partial counts are reduced in shard order, so the result
//! does not depend on the execution mode.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::vocab::{Vocab, WordId};
use super::{AlignError, Alignment};
use crate::corpus::Bitext;
use crate::par::Execution;

/// Source-side empty word.
pub const NULL_TOKEN: &str = "<NULL>";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    SrcToTgt,
    TgtToSrc,
}

/// Lexical translation table t(tgt | src).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TTable {
    rows: HashMap<String, HashMap<String, f64>>,
}

impl TTable {
    pub fn prob(&self, src: &str, tgt: &str) -> f64 {
        self.rows
            .get(src)
            .and_then(|r| r.get(tgt))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn null_prob(&self, tgt: &str) -> f64 {
        self.prob(NULL_TOKEN, tgt)
    }

    pub fn row(&self, src: &str) -> Option<&HashMap<String, f64>> {
        self.rows.get(src)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&String, &HashMap<String, f64>)> {
        self.rows.iter()
    }

    pub fn len(&self) -> usize {
        self.rows.values().map(HashMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn insert(&mut self, src: &str, tgt: &str, p: f64) {
        self.rows
            .entry(src.to_string())
            .or_default()
            .insert(tgt.to_string(), p);
    }

    /// TSV `src<TAB>tgt<TAB>prob`, sorted.
    pub fn write(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        let sorted: BTreeMap<&String, BTreeMap<&String, &f64>> = self
            .rows
            .iter()
            .map(|(s, r)| (s, r.iter().collect()))
            .collect();
        for (s, row) in sorted {
            for (t, p) in row {
                writeln!(w, "{s}\t{t}\t{p}")?;
            }
        }
        w.flush()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, AlignError> {
        let path = path.as_ref();
        let mut tt = TTable::default();
        for (idx, line) in fs::read_to_string(path)?.lines().enumerate() {
            let fail = |message: &str| AlignError::Format {
                file: path.display().to_string(),
                line: idx + 1,
                message: message.to_string(),
            };
            let cols: Vec<&str> = line.split('\t').collect();
            let [s, t, p] = cols[..] else {
                return Err(fail("expected 3 columns"));
            };
            tt.insert(s, t, p.parse().map_err(|_| fail("bad probability"))?);
        }
        Ok(tt)
    }
}

struct IndexedPair {
    // NULL first, then source words
    src_len: usize,
    tgt_len: usize,
    // slot of (i, j) at j * src_len + i
    slots: Vec<u32>,
}

/// Incremental EM trainer. Call [`Model1::em_step`] to run one iteration.
pub struct Model1 {
    src_vocab: Vocab,
    tgt_vocab: Vocab,
    pairs: Vec<IndexedPair>,
    slot_src: Vec<WordId>,
    slot_tgt: Vec<WordId>,
    probs: Vec<f64>,
    tgt_tokens: usize,
    exec: Execution,
    history: Vec<f64>,
}

const MIN_SHARD: usize = 256;
const MAX_SHARDS: usize = 64;

impl Model1 {
    /// Uniform initialization over co-occurring word pairs (NULL co-occurs
    /// with every target word).
    pub fn new(bitext: &Bitext, direction: Direction, exec: Execution) -> Result<Self, AlignError> {
        if bitext.is_empty() {
            return Err(AlignError::EmptyCorpus);
        }
        let mut src_vocab = Vocab::new();
        let mut tgt_vocab = Vocab::new();
        src_vocab.intern(NULL_TOKEN);
        let mut slot_of: HashMap<(WordId, WordId), u32> = HashMap::new();
        let mut slot_src = Vec::new();
        let mut slot_tgt = Vec::new();
        let mut pairs = Vec::with_capacity(bitext.len());
        let mut tgt_tokens = 0;
        for (s, t) in &bitext.pairs {
            let (s, t) = match direction {
                Direction::SrcToTgt => (s, t),
                Direction::TgtToSrc => (t, s),
            };
            let src_ids: Vec<WordId> = std::iter::once(0)
                .chain(s.iter().map(|w| src_vocab.intern(w)))
                .collect();
            let tgt_ids: Vec<WordId> = t.iter().map(|w| tgt_vocab.intern(w)).collect();
            let mut slots = Vec::with_capacity(src_ids.len() * tgt_ids.len());
            for &tj in &tgt_ids {
                for &si in &src_ids {
                    let next = slot_src.len() as u32;
                    let slot = *slot_of.entry((si, tj)).or_insert_with(|| {
                        slot_src.push(si);
                        slot_tgt.push(tj);
                        next
                    });
                    slots.push(slot);
                }
            }
            tgt_tokens += tgt_ids.len();
            pairs.push(IndexedPair {
                src_len: src_ids.len(),
                tgt_len: tgt_ids.len(),
                slots,
            });
        }
        let mut row_size = vec![0usize; src_vocab.len()];
        for &s in &slot_src {
            row_size[s as usize] += 1;
        }
        let probs = slot_src
            .iter()
            .map(|&s| 1.0 / row_size[s as usize] as f64)
            .collect();
        Ok(Model1 {
            src_vocab,
            tgt_vocab,
            pairs,
            slot_src,
            slot_tgt,
            probs,
            tgt_tokens: tgt_tokens.max(1),
            exec,
            history: Vec::new(),
        })
    }

    fn shard_size(&self) -> usize {
        MIN_SHARD.max(self.pairs.len().div_ceil(MAX_SHARDS))
    }

    fn expectation(&self) -> (Vec<f64>, f64) {
        let n_slots = self.probs.len();
        let probs = &self.probs;
        let partials = self.exec.map_chunks(&self.pairs, self.shard_size(), |shard| {
            let mut counts = vec![0.0; n_slots];
            let mut ll = 0.0;
            for p in shard {
                let norm = (p.src_len as f64).ln();
                for j in 0..p.tgt_len {
                    let row = &p.slots[j * p.src_len..(j + 1) * p.src_len];
                    let denom: f64 = row.iter().map(|&s| probs[s as usize]).sum();
                    ll += denom.ln() - norm;
                    for &s in row {
                        counts[s as usize] += probs[s as usize] / denom;
                    }
                }
            }
            (counts, ll)
        });
        let mut counts = vec![0.0; n_slots];
        let mut ll = 0.0;
        for (c, l) in partials {
            for (acc, x) in counts.iter_mut().zip(c) {
                *acc += x;
            }
            ll += l;
        }
        (counts, ll)
    }

    /// Per-token log-likelihood of the training data under the current parameters.
    pub fn log_likelihood(&self) -> f64 {
        self.expectation().1 / self.tgt_tokens as f64
    }

    /// One EM iteration. Returns the per-token log-likelihood of the
    /// parameters that entered the iteration.
    pub fn em_step(&mut self) -> f64 {
        let (counts, ll) = self.expectation();
        let mut totals = vec![0.0; self.src_vocab.len()];
        for (slot, c) in counts.iter().enumerate() {
            totals[self.slot_src[slot] as usize] += c;
        }
        for (slot, c) in counts.into_iter().enumerate() {
            self.probs[slot] = c / totals[self.slot_src[slot] as usize];
        }
        let ll = ll / self.tgt_tokens as f64;
        self.history.push(ll);
        ll
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn table(&self) -> TTable {
        let mut tt = TTable::default();
        for (slot, &p) in self.probs.iter().enumerate() {
            tt.insert(
                self.src_vocab.word(self.slot_src[slot]),
                self.tgt_vocab.word(self.slot_tgt[slot]),
                p,
            );
        }
        tt
    }

    /// Runs up to `iterations` EM steps, stopping early once the per-token
    /// log-likelihood improves by less than `epsilon`.
    pub fn train(&mut self, iterations: usize, epsilon: f64) {
        for it in 0..iterations {
            let ll = self.em_step();
            if it > 0 {
                let prev = self.history[self.history.len() - 2];
                if ll - prev < epsilon {
                    break;
                }
            }
        }
    }
}

pub fn train_model1(
    bitext: &Bitext,
    direction: Direction,
    iterations: usize,
    epsilon: f64,
    exec: Execution,
) -> Result<TTable, AlignError> {
    let mut m = Model1::new(bitext, direction, exec)?;
    m.train(iterations, epsilon);
    Ok(m.table())
}

/// Links each target word to its most probable source word. NULL wins only
/// when strictly more probable than every source word; ties between source
/// words go to the smallest index; zero-probability words stay unlinked.
pub fn viterbi_align(tt: &TTable, src: &[String], tgt: &[String]) -> Alignment {
    let mut links = Vec::new();
    for (j, t) in tgt.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in src.iter().enumerate() {
            let p = tt.prob(s, t);
            if p > 0.0 && best.is_none_or(|(_, b)| p > b) {
                best = Some((i, p));
            }
        }
        if let Some((i, p)) = best {
            if p >= tt.null_prob(t) {
                links.push((i, j));
            }
        }
    }
    Alignment::new(links)
}

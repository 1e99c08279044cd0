//! Slow reference implementations used only by tests. Each one follows
//! the textbook definition as literally as possible and shares no code
//! with the library. The last section builds random decoder instances.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rand::Rng;
use wnsmt::align::{LanguageModel, PhraseOption, PhraseTable};
use wnsmt::{Sentence, TranslationModel};

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

// ---------------------------------------------------------------- BLEU

fn ngrams<T: Clone>(s: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    if s.len() >= n {
        for i in 0..=s.len() - n {
            out.push(s[i..i + n].to_vec());
        }
    }
    out
}

fn occurrences<T: PartialEq>(list: &[Vec<T>], g: &[T]) -> usize {
    list.iter().filter(|x| x.as_slice() == g).count()
}

/// Clipped n-gram matches, n-gram totals, hypothesis and reference length.
pub fn bleu_counts<T: Clone + PartialEq>(pairs: &[(Vec<T>, Vec<T>)]) -> ([usize; 4], [usize; 4], usize, usize) {
    let mut num = [0usize; 4];
    let mut den = [0usize; 4];
    let (mut c, mut r) = (0usize, 0usize);
    for (h, rf) in pairs {
        c += h.len();
        r += rf.len();
        for n in 1..=4 {
            let hg = ngrams(h, n);
            let rg = ngrams(rf, n);
            den[n - 1] += hg.len();
            let mut distinct: Vec<Vec<T>> = Vec::new();
            for g in &hg {
                if !distinct.contains(g) {
                    distinct.push(g.clone());
                }
            }
            for g in &distinct {
                num[n - 1] += occurrences(&hg, g).min(occurrences(&rg, g));
            }
        }
    }
    (num, den, c, r)
}

/// (bleu, precisions, bp) from [`bleu_counts`].
pub fn bleu_from_counts(counts: ([usize; 4], [usize; 4], usize, usize), smooth: bool) -> (f64, [f64; 4], f64) {
    let (num, den, c, r) = counts;
    let mut p = [0.0; 4];
    for n in 0..4 {
        p[n] = if smooth && n >= 1 {
            (num[n] as f64 + 1.0) / (den[n] as f64 + 1.0)
        } else if den[n] == 0 {
            0.0
        } else {
            num[n] as f64 / den[n] as f64
        };
    }
    if c == 0 {
        return (0.0, p, 0.0);
    }
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    if p.iter().any(|&x| x == 0.0) {
        return (0.0, p, bp);
    }
    let geo = (p[0] * p[1] * p[2] * p[3]).powf(0.25);
    (bp * geo, p, bp)
}

/// Corpus BLEU from raw definitions: (bleu, precisions, bp).
pub fn bleu<T: Clone + PartialEq>(pairs: &[(Vec<T>, Vec<T>)], smooth: bool) -> (f64, [f64; 4], f64) {
    bleu_from_counts(bleu_counts(pairs), smooth)
}

// ---------------------------------------------------------------- TER

/// Levenshtein distance, full (len a + 1) x (len b + 1) table.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    levenshtein_in(a, b, &mut Vec::new())
}

fn levenshtein_in<T: PartialEq>(a: &[T], b: &[T], d: &mut Vec<usize>) -> usize {
    let w = b.len() + 1;
    d.clear();
    d.resize((a.len() + 1) * w, 0);
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            d[i * w + j] = if i == 0 {
                j
            } else if j == 0 {
                i
            } else {
                let sub = d[(i - 1) * w + j - 1] + usize::from(a[i - 1] != b[j - 1]);
                sub.min(d[(i - 1) * w + j] + 1).min(d[i * w + j - 1] + 1)
            };
        }
    }
    d[a.len() * w + b.len()]
}

fn occurs_in<T: PartialEq>(span: &[T], reference: &[T]) -> bool {
    reference.windows(span.len()).any(|w| w == span)
}

/// Calls `f(len, start, dest, shifted)` for every sequence reachable by one shift.
fn for_each_shift<T: Clone + PartialEq>(h: &[T], reference: &[T], max_len: usize, mut f: impl FnMut(usize, usize, usize, &[T])) {
    let mut v = Vec::with_capacity(h.len());
    for len in 1..=h.len().min(max_len) {
        for start in 0..=h.len() - len {
            let span = &h[start..start + len];
            if !occurs_in(span, reference) {
                continue;
            }
            let rest: Vec<T> = h[..start].iter().chain(&h[start + len..]).cloned().collect();
            for dest in 0..=rest.len() {
                if dest == start {
                    continue;
                }
                v.clear();
                v.extend_from_slice(&rest[..dest]);
                v.extend_from_slice(span);
                v.extend_from_slice(&rest[dest..]);
                f(len, start, dest, &v);
            }
        }
    }
}

/// Greedy TER edits: repeatedly apply the shift with the largest total-edit
/// reduction; ties prefer longer spans, then earlier starts, then earlier
/// destinations.
pub fn ter_greedy<T: Clone + PartialEq>(hyp: &[T], reference: &[T], max_len: usize) -> usize {
    let mut h = hyp.to_vec();
    let mut shifts = 0;
    loop {
        let ed = levenshtein(&h, reference);
        let mut best: Option<((i64, i64, usize, usize), Vec<T>)> = None;
        let mut table = Vec::new();
        for_each_shift(&h, reference, max_len, |len, start, dest, v| {
            let gain = ed as i64 - (levenshtein_in(v, reference, &mut table) as i64 + 1);
            let key = (-gain, -(len as i64), start, dest);
            if gain > 0 && best.as_ref().is_none_or(|b| key < b.0) {
                best = Some((key, v.to_vec()));
            }
        });
        match best {
            Some((_, v)) => {
                h = v;
                shifts += 1;
            }
            None => return ed + shifts,
        }
    }
}

/// Minimum over all shift sequences of (#shifts + Levenshtein), by BFS.
pub fn ter_optimal<T: Clone + Eq + std::hash::Hash>(hyp: &[T], reference: &[T]) -> usize {
    let mut best = levenshtein(hyp, reference);
    let mut seen: HashSet<Vec<T>> = HashSet::new();
    let mut queue = VecDeque::from([(hyp.to_vec(), 0usize)]);
    seen.insert(hyp.to_vec());
    while let Some((h, k)) = queue.pop_front() {
        best = best.min(k + levenshtein(&h, reference));
        if k + 1 >= best {
            continue;
        }
        for_each_shift(&h, reference, usize::MAX, |_, _, _, v| {
            if seen.insert(v.to_vec()) {
                queue.push_back((v.to_vec(), k + 1));
            }
        });
    }
    best
}

// ---------------------------------------------------------------- METEOR

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeteorOracle {
    pub exact: usize,
    pub synonym: usize,
    pub chunks: usize,
    pub score: f64,
}

fn count_chunks(mut links: Vec<(usize, usize)>) -> usize {
    links.sort();
    let mut chunks = 0;
    for k in 0..links.len() {
        let continues = k > 0 && links[k].0 == links[k - 1].0 + 1 && links[k].1 == links[k - 1].1 + 1;
        if !continues {
            chunks += 1;
        }
    }
    chunks
}

/// Enumerates every one-to-one matching and keeps the best under
/// (max exact, max synonym, min chunks).
pub fn meteor<T: PartialEq>(hyp: &[T], reference: &[T], synonym: &dyn Fn(&T, &T) -> bool) -> MeteorOracle {
    fn rec<T: PartialEq>(
        i: usize,
        hyp: &[T],
        reference: &[T],
        synonym: &dyn Fn(&T, &T) -> bool,
        used: &mut Vec<bool>,
        links: &mut Vec<(usize, usize, bool)>,
        best: &mut Option<(usize, usize, usize)>,
    ) {
        if i == hyp.len() {
            let exact = links.iter().filter(|l| l.2).count();
            let syn = links.len() - exact;
            let ch = count_chunks(links.iter().map(|l| (l.0, l.1)).collect());
            let key = (exact, syn, usize::MAX - ch);
            if best.is_none_or(|b| (b.0, b.1, usize::MAX - b.2) < key) {
                *best = Some((exact, syn, ch));
            }
            return;
        }
        rec(i + 1, hyp, reference, synonym, used, links, best);
        for j in 0..reference.len() {
            if used[j] {
                continue;
            }
            let exact = hyp[i] == reference[j];
            if exact || synonym(&hyp[i], &reference[j]) {
                used[j] = true;
                links.push((i, j, exact));
                rec(i + 1, hyp, reference, synonym, used, links, best);
                links.pop();
                used[j] = false;
            }
        }
    }
    let mut best = None;
    rec(0, hyp, reference, synonym, &mut vec![false; reference.len()], &mut Vec::new(), &mut best);
    let (exact, synonym, chunks) = best.unwrap_or((0, 0, 0));
    let m = (exact + synonym) as f64;
    let score = if m == 0.0 {
        0.0
    } else {
        let p = m / hyp.len() as f64;
        let r = m / reference.len() as f64;
        let f = 10.0 * p * r / (r + 9.0 * p);
        f * (1.0 - 0.5 * (chunks as f64 / m).powi(3))
    };
    MeteorOracle {
        exact,
        synonym,
        chunks,
        score,
    }
}

// ---------------------------------------------------------------- Model 1

pub const NULL: &str = "<NULL>";

/// t(f|e) after `iters` EM iterations, with a NULL word on the e side and
/// uniform initialization over co-occurring pairs.
pub fn model1(pairs: &[(Vec<String>, Vec<String>)], iters: usize) -> HashMap<(String, String), f64> {
    let with_null = |e: &[String]| -> Vec<String> {
        std::iter::once(NULL.to_string()).chain(e.iter().cloned()).collect()
    };
    let mut cooc: HashMap<String, BTreeSet<String>> = HashMap::new();
    for (e, f) in pairs {
        for ew in with_null(e) {
            for fw in f {
                cooc.entry(ew.clone()).or_default().insert(fw.clone());
            }
        }
    }
    let mut t: HashMap<(String, String), f64> = HashMap::new();
    for (e, fs) in &cooc {
        for f in fs {
            t.insert((e.clone(), f.clone()), 1.0 / fs.len() as f64);
        }
    }
    for _ in 0..iters {
        let mut count: HashMap<(String, String), f64> = HashMap::new();
        let mut total: HashMap<String, f64> = HashMap::new();
        for (e, f) in pairs {
            let es = with_null(e);
            for fw in f {
                let z: f64 = es.iter().map(|ew| t[&(ew.clone(), fw.clone())]).sum();
                for ew in &es {
                    let c = t[&(ew.clone(), fw.clone())] / z;
                    *count.entry((ew.clone(), fw.clone())).or_default() += c;
                    *total.entry(ew.clone()).or_default() += c;
                }
            }
        }
        for ((e, f), c) in count {
            let z = total[&e];
            t.insert((e, f), c / z);
        }
    }
    t
}

// ---------------------------------------------------------------- phrases

/// Every (src span, tgt span) pair, each at most `max_len` long, with a link
/// inside and no link leaving it. Spans are half-open: (s0, s1, t0, t1).
pub fn consistent_phrases(
    src_len: usize,
    tgt_len: usize,
    links: &BTreeSet<(usize, usize)>,
    max_len: usize,
) -> BTreeSet<(usize, usize, usize, usize)> {
    let mut out = BTreeSet::new();
    for s0 in 0..src_len {
        for s1 in s0 + 1..=src_len {
            for t0 in 0..tgt_len {
                for t1 in t0 + 1..=tgt_len {
                    if s1 - s0 > max_len || t1 - t0 > max_len {
                        continue;
                    }
                    let in_s = |i: usize| s0 <= i && i < s1;
                    let in_t = |j: usize| t0 <= j && j < t1;
                    let inside = links.iter().any(|&(i, j)| in_s(i) && in_t(j));
                    let crossing = links.iter().any(|&(i, j)| in_s(i) != in_t(j));
                    if inside && !crossing {
                        out.insert((s0, s1, t0, t1));
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------- decoding

/// A phrase option for exhaustive decoding: source span, output words, and
/// the four phrase log10 scores.
#[derive(Debug, Clone)]
pub struct PhraseChoice {
    pub start: usize,
    pub end: usize,
    pub tgt: Vec<String>,
    pub log_scores: [f64; 4],
}

/// Best model score over every derivation that covers each source word
/// once, never jumps more than `dl`, and never leaves the first uncovered
/// word more than `dl` positions behind the end of the last phrase.
/// `lm` scores a whole output sentence in log10.
pub fn exhaustive_decode(
    n: usize,
    options: &[PhraseChoice],
    weights: &[f64; 7],
    dl: usize,
    lm: &dyn Fn(&[String]) -> f64,
) -> Option<(f64, Vec<String>)> {
    struct Search<'a> {
        n: usize,
        options: &'a [PhraseChoice],
        weights: &'a [f64; 7],
        dl: usize,
        lm: &'a dyn Fn(&[String]) -> f64,
        best: Option<(f64, Vec<String>)>,
    }
    impl Search<'_> {
        fn go(&mut self, covered: &mut Vec<bool>, prev_end: usize, partial: [f64; 4], wp: f64, dist: f64, out: &mut Vec<String>) {
            if covered.iter().all(|&c| c) {
                let w = self.weights;
                let score = w[0] * partial[0]
                    + w[1] * partial[1]
                    + w[2] * partial[2]
                    + w[3] * partial[3]
                    + w[4] * (self.lm)(out)
                    + w[5] * wp
                    + w[6] * dist;
                if self.best.as_ref().is_none_or(|(b, _)| score > *b) {
                    self.best = Some((score, out.clone()));
                }
                return;
            }
            for o in self.options {
                if (o.start..o.end).any(|i| covered[i]) {
                    continue;
                }
                let jump = (o.start as i64 - prev_end as i64).unsigned_abs() as usize;
                if jump > self.dl {
                    continue;
                }
                for i in o.start..o.end {
                    covered[i] = true;
                }
                let first_gap = (0..self.n).find(|&i| !covered[i]);
                let reachable = first_gap.is_none_or(|g| o.end <= g + self.dl);
                if reachable {
                    let mut p = partial;
                    for k in 0..4 {
                        p[k] += o.log_scores[k];
                    }
                    let len = out.len();
                    out.extend(o.tgt.iter().cloned());
                    self.go(covered, o.end, p, wp - o.tgt.len() as f64, dist - jump as f64, out);
                    out.truncate(len);
                }
                for i in o.start..o.end {
                    covered[i] = false;
                }
            }
        }
    }
    let mut s = Search {
        n,
        options,
        weights,
        dl,
        lm,
        best: None,
    };
    s.go(&mut vec![false; n], 0, [0.0; 4], 0.0, 0.0, &mut Vec::new());
    s.best
}

// ---------------------------------------------------------------- wordnet

/// Σ over concepts of |members(src)| · |members(tgt)|.
pub fn lexicon_product_count(synsets: &[(u64, String, Vec<String>)], src: &str, tgt: &str) -> usize {
    let mut total = 0;
    for (c, lang, members) in synsets {
        if lang != src {
            continue;
        }
        for (c2, lang2, members2) in synsets {
            if c2 == c && lang2 == tgt {
                total += members.len() * members2.len();
            }
        }
    }
    total
}

// ---------------------------------------------------------------- enumeration

/// Calls `f(hyp, ref)` once per pair of token sequences with lengths in
/// `1..=max_len` over `vocab` symbols, up to renaming of the symbols: the
/// concatenation hyp ++ ref is enumerated as a restricted growth string.
pub fn for_each_pair_up_to_relabeling(max_len: usize, vocab: usize, mut f: impl FnMut(&[usize], &[usize])) {
    fn rgs(buf: &mut Vec<usize>, total: usize, vocab: usize, used: usize, split: usize, f: &mut dyn FnMut(&[usize], &[usize])) {
        if buf.len() == total {
            f(&buf[..split], &buf[split..]);
            return;
        }
        for s in 0..(used + 1).min(vocab) {
            buf.push(s);
            rgs(buf, total, vocab, used.max(s + 1), split, f);
            buf.pop();
        }
    }
    for a in 1..=max_len {
        for b in 1..=max_len {
            rgs(&mut Vec::with_capacity(a + b), a + b, vocab, 0, a, &mut f);
        }
    }
}

// ---------------------------------------------------------------- decoder instances

/// Small random model over source words a..d and target words w..z; "d"
/// has no single-word entry.
pub fn random_model<R: Rng>(rng: &mut R) -> TranslationModel {
    let src_vocab = ["a", "b", "c", "d"];
    let tgt_vocab = ["w", "x", "y", "z"];
    let mut entries: BTreeMap<Vec<String>, Vec<PhraseOption>> = BTreeMap::new();
    let mut add = |src: Vec<String>, rng: &mut R| {
        let k = rng.gen_range(1..=2);
        let mut opts: Vec<PhraseOption> = Vec::new();
        while opts.len() < k {
            let len = rng.gen_range(1..=2);
            let tgt: Vec<String> = (0..len).map(|_| tgt_vocab[rng.gen_range(0..4)].to_string()).collect();
            if opts.iter().any(|o| o.tgt == tgt) {
                continue;
            }
            let scores = [0; 4].map(|_| rng.gen_range(0.05..=1.0));
            opts.push(PhraseOption { tgt, scores });
        }
        opts.sort_by(|a, b| a.tgt.cmp(&b.tgt));
        entries.insert(src, opts);
    };
    // "d" has no single-word entry and must be copied through
    for w in &src_vocab[..3] {
        add(vec![w.to_string()], rng);
    }
    for _ in 0..3 {
        let p = vec![
            src_vocab[rng.gen_range(0..4)].to_string(),
            src_vocab[rng.gen_range(0..4)].to_string(),
        ];
        add(p, rng);
    }
    let lm_text: Vec<Sentence> = (0..6)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let mut toks: Vec<String> = (0..n).map(|_| tgt_vocab[rng.gen_range(0..4)].to_string()).collect();
            if rng.gen_bool(0.2) {
                toks.push("d".into());
            }
            Sentence::new(toks)
        })
        .collect();
    TranslationModel {
        phrase_table: PhraseTable::from_entries(entries),
        lm: LanguageModel::train(&lm_text, 3).unwrap(),
        tt_fwd: None,
        tt_rev: None,
    }
}

/// Every (span, target) the decoder may use. With `strict`, a word is
/// copied only if no matching table entry covers its position; otherwise
/// any word without a single-word entry may be copied.
pub fn decoder_options(src: &[String], model: &TranslationModel, strict: bool) -> Vec<PhraseChoice> {
    let table = model.phrase_table.entries();
    let mut out = Vec::new();
    let mut covered = vec![false; src.len()];
    for start in 0..src.len() {
        for end in start + 1..=src.len() {
            if let Some(opts) = table.get(&src[start..end]) {
                for i in start..end {
                    covered[i] = true;
                }
                for o in opts {
                    out.push(PhraseChoice {
                        start,
                        end,
                        tgt: o.tgt.clone(),
                        log_scores: o.scores.map(f64::log10),
                    });
                }
            }
        }
    }
    for i in 0..src.len() {
        let copy = !table.contains_key(&src[i..=i]) && !(strict && covered[i]);
        if copy {
            out.push(PhraseChoice {
                start: i,
                end: i + 1,
                tgt: vec![src[i].clone()],
                log_scores: [0.0; 4],
            });
        }
    }
    out
}

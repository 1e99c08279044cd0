//! Synthetic two-language benchmark.
//!
//! Both languages realize the same concept inventory. Every concept has a
//! synset of one to three words per language; the first member is the
//! head. Training sentences use heads only, so the other members never
//! occur in the bitext. Test sources use at least one of those held-out
//! synonyms and references use heads, so only the wordnet lexicon can
//! translate them. The second language puts adjectives after nouns.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Bitext, Sentence};
use crate::wordnet::{write_wordnet, ConceptId, Lemma, Pos, Synset, WordnetDb};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub langs: [String; 2],
    pub train_pairs: usize,
    pub test_pairs: usize,
    pub seed: u64,
    pub nouns: usize,
    pub verbs: usize,
    pub adjectives: usize,
    pub adverbs: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            langs: ["xa".to_string(), "yb".to_string()],
            train_pairs: 2000,
            test_pairs: 200,
            seed: 1,
            nouns: 40,
            verbs: 20,
            adjectives: 15,
            adverbs: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthData {
    /// langs[0] → langs[1]; the reverse direction uses `reversed()`.
    pub train: Bitext,
    /// One test set per direction: [0→1, 1→0].
    pub tests: [Bitext; 2],
    pub wordnet: WordnetDb,
}

// Disjoint alphabets so that copied-through words never match by accident.
const CONSONANTS: [&str; 2] = ["ptkmnsl", "bdgrvzh"];
const VOWELS: [&str; 2] = ["aeiou", "aeiouy"];
const DETERMINERS: [&str; 2] = ["ta", "bo"];

#[derive(Debug, Clone, Copy)]
enum Slot {
    Det,
    Word(usize),
}

struct Lexicon {
    // words[lang][concept] = members, head first
    words: [Vec<Vec<String>>; 2],
    pos: Vec<Pos>,
    by_pos: Vec<(Pos, Vec<usize>)>,
}

fn make_word(rng: &mut ChaCha8Rng, lang: usize, taken: &mut HashSet<String>) -> String {
    let cons: Vec<char> = CONSONANTS[lang].chars().collect();
    let vows: Vec<char> = VOWELS[lang].chars().collect();
    loop {
        let syllables = rng.gen_range(2..=3);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push(*cons.choose(rng).expect("non-empty"));
            w.push(*vows.choose(rng).expect("non-empty"));
        }
        if taken.insert(w.clone()) {
            return w;
        }
    }
}

fn build_lexicon(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Lexicon {
    let counts = [
        (Pos::Noun, cfg.nouns),
        (Pos::Verb, cfg.verbs),
        (Pos::Adjective, cfg.adjectives),
        (Pos::Adverb, cfg.adverbs),
    ];
    let mut pos = Vec::new();
    let mut by_pos = Vec::new();
    for (p, n) in counts {
        let ids: Vec<usize> = (pos.len()..pos.len() + n).collect();
        pos.extend(std::iter::repeat_n(p, n));
        by_pos.push((p, ids));
    }
    let mut words: [Vec<Vec<String>>; 2] = [Vec::new(), Vec::new()];
    for (lang, table) in words.iter_mut().enumerate() {
        let mut taken: HashSet<String> = DETERMINERS.iter().map(|d| d.to_string()).collect();
        for _ in 0..pos.len() {
            let size = *[1, 2, 2, 3, 3].choose(rng).expect("non-empty");
            table.push((0..size).map(|_| make_word(rng, lang, &mut taken)).collect());
        }
    }
    Lexicon { words, pos, by_pos }
}

impl Lexicon {
    fn pick(&self, rng: &mut ChaCha8Rng, p: Pos) -> usize {
        let ids = &self.by_pos.iter().find(|(q, _)| *q == p).expect("all POS present").1;
        *ids.choose(rng).expect("non-empty POS class")
    }

    /// Concept sequence in language-0 order: det (adj) noun verb det (adj) noun (adv).
    fn abstract_sentence(&self, rng: &mut ChaCha8Rng) -> Vec<Slot> {
        let mut s = Vec::new();
        for role in 0..2 {
            s.push(Slot::Det);
            if rng.gen_bool(0.5) {
                s.push(Slot::Word(self.pick(rng, Pos::Adjective)));
            }
            s.push(Slot::Word(self.pick(rng, Pos::Noun)));
            if role == 0 {
                s.push(Slot::Word(self.pick(rng, Pos::Verb)));
            }
        }
        if rng.gen_bool(0.3) {
            s.push(Slot::Word(self.pick(rng, Pos::Adverb)));
        }
        s
    }

    /// Language 1 swaps every adjective with the noun that follows it.
    fn order(&self, slots: &[Slot], lang: usize) -> Vec<Slot> {
        let mut out = slots.to_vec();
        if lang == 1 {
            let mut i = 0;
            while i + 1 < out.len() {
                if let (Slot::Word(a), Slot::Word(n)) = (out[i], out[i + 1]) {
                    if self.pos[a] == Pos::Adjective && self.pos[n] == Pos::Noun {
                        out.swap(i, i + 1);
                        i += 1;
                    }
                }
                i += 1;
            }
        }
        out
    }

    fn realize(&self, slots: &[Slot], lang: usize, member: impl Fn(usize, usize) -> usize) -> Sentence {
        let toks = self
            .order(slots, lang)
            .iter()
            .enumerate()
            .map(|(i, s)| match *s {
                Slot::Det => DETERMINERS[lang].to_string(),
                Slot::Word(c) => self.words[lang][c][member(i, c)].clone(),
            })
            .collect();
        Sentence::new(toks)
    }

    fn wordnet(&self, langs: &[String; 2]) -> WordnetDb {
        let mut synsets = Vec::new();
        for (lang, table) in self.words.iter().enumerate() {
            for (c, members) in table.iter().enumerate() {
                synsets.push(Synset {
                    concept: ConceptId(c as u64 + 1),
                    lang: langs[lang].clone(),
                    pos: self.pos[c],
                    gloss: format!("synthetic concept {}", c + 1),
                    members: members
                        .iter()
                        .map(|m| Lemma::new(m).expect("generated words are valid lemmas"))
                        .collect(),
                    member_freq: None,
                });
            }
        }
        WordnetDb::new(&langs[0], synsets, Vec::new()).expect("generated wordnet is consistent")
    }
}

pub fn generate(cfg: &SynthConfig) -> SynthData {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lex = build_lexicon(cfg, &mut rng);
    let [l0, l1] = cfg.langs.clone();

    let mut train = Bitext::new(&l0, &l1);
    let mut seen: [HashSet<Sentence>; 2] = [HashSet::new(), HashSet::new()];
    let max_attempts = cfg.train_pairs * 50 + 1000;
    for _ in 0..max_attempts {
        if train.len() == cfg.train_pairs {
            break;
        }
        let slots = lex.abstract_sentence(&mut rng);
        let s = lex.realize(&slots, 0, |_, _| 0);
        let t = lex.realize(&slots, 1, |_, _| 0);
        if seen[0].contains(&s) || seen[1].contains(&t) {
            continue;
        }
        seen[0].insert(s.clone());
        seen[1].insert(t.clone());
        train.pairs.push((s, t));
    }

    let mut tests = [Bitext::new(&l0, &l1), Bitext::new(&l1, &l0)];
    for (src, test) in tests.iter_mut().enumerate() {
        let tgt = 1 - src;
        let mut used = HashSet::new();
        for _ in 0..max_attempts {
            if test.len() == cfg.test_pairs {
                break;
            }
            let slots = lex.abstract_sentence(&mut rng);
            let ordered = lex.order(&slots, src);
            let ambiguous: Vec<usize> = ordered
                .iter()
                .enumerate()
                .filter_map(|(i, s)| match s {
                    Slot::Word(c) if lex.words[src][*c].len() > 1 => Some(i),
                    _ => None,
                })
                .collect();
            if ambiguous.is_empty() {
                continue;
            }
            let forced = *ambiguous.choose(&mut rng).expect("non-empty");
            let mut choice = vec![0usize; ordered.len()];
            for &i in &ambiguous {
                if let Slot::Word(c) = ordered[i] {
                    if i == forced || rng.gen_bool(0.3) {
                        choice[i] = rng.gen_range(1..lex.words[src][c].len());
                    }
                }
            }
            let s = lex.realize(&slots, src, |i, _| choice[i]);
            let r = lex.realize(&slots, tgt, |_, _| 0);
            if seen[tgt].contains(&r) || !used.insert(s.clone()) {
                continue;
            }
            test.pairs.push((s, r));
        }
    }

    SynthData {
        train,
        tests,
        wordnet: lex.wordnet(&cfg.langs),
    }
}

/// Writes corpora, wordnet and an experiment spec into `dir`; returns the
/// spec path. Output files go to `dir/out`.
pub fn write_benchmark(cfg: &SynthConfig, dir: impl AsRef<Path>) -> std::io::Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let data = generate(cfg);
    let [l0, l1] = &cfg.langs;
    data.train
        .write(dir.join(format!("train.{l0}")), dir.join(format!("train.{l1}")))?;
    for test in &data.tests {
        let (s, t) = (&test.src_lang, &test.tgt_lang);
        test.write(
            dir.join(format!("test.{s}-{t}.{s}")),
            dir.join(format!("test.{s}-{t}.{t}")),
        )?;
    }
    write_wordnet(&data.wordnet, fs::File::create(dir.join("wordnet.jsonl"))?)?;
    let spec = dir.join("spec.cfg");
    fs::write(
        &spec,
        format!(
            "# synthetic benchmark, seed {seed}\n\
             languages = {l0}, {l1}\n\
             train = train\n\
             test = test\n\
             wordnet = wordnet.jsonl\n\
             pivot = {l0}\n\
             output = out\n\
             seed = {seed}\n",
            seed = cfg.seed
        ),
    )?;
    Ok(spec)
}

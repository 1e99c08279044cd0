//! Multilingual concept-linked wordnet.
//!
//! Synsets of every language hang off a shared [`ConceptId`]; a pivot
//! language must hold a synset for every concept used elsewhere. The
//! resulting lexical matrix is queried by (concept, language) for member
//! lists and by lemma for synonyms.

mod io;
mod lint;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{detect_pivot, load_wordnet, parse_wordnet, write_wordnet};
pub use lint::{validate, LintFinding, LintKind};

#[derive(Debug, Error)]
pub enum WordnetError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{record}: {message}")]
    Invariant { record: String, message: String },
    #[error("database must contain at least one synset in pivot language {0:?}")]
    NoPivot(String),
    #[error("no language has a synset for every concept; name the pivot explicitly")]
    NoCommonPivot,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ConceptId(pub u64);

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pos {
    #[serde(rename = "noun")]
    Noun,
    #[serde(rename = "verb")]
    Verb,
    #[serde(rename = "adj")]
    Adjective,
    #[serde(rename = "adv")]
    Adverb,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adj",
            Pos::Adverb => "adv",
        })
    }
}

/// A synset member. Multiword lemmas join their parts with `_`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Lemma(String);

impl Lemma {
    /// Validates and NFC-normalizes `text`.
    pub fn new(text: &str) -> Result<Self, String> {
        let text = crate::corpus::normalize(text);
        if text.is_empty() {
            return Err("empty lemma".into());
        }
        if text.chars().any(char::is_whitespace) {
            return Err(format!("lemma {text:?} contains whitespace"));
        }
        if text.starts_with('_') || text.ends_with('_') {
            return Err(format!("lemma {text:?} has a leading or trailing underscore"));
        }
        Ok(Lemma(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Token sequence with `_` expanded to word boundaries (`blow_up` → `blow up`).
    pub fn tokens(&self) -> Vec<String> {
        self.0
            .split('_')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Synset {
    pub concept: ConceptId,
    pub lang: String,
    pub pos: Pos,
    pub gloss: String,
    pub members: Vec<Lemma>,
    /// Corpus frequency per member; expected non-increasing when present.
    pub member_freq: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Hypernymy,
    Hyponymy,
    Holonymy,
    Meronymy,
    Troponymy,
    Entailment,
    Antonymy,
    Gradation,
    Compound,
    Conjunction,
    SimilarAttribute,
    FunctionVerb,
    AbilityVerb,
    CapabilityVerb,
    AdverbModifiesVerb,
    Causative,
    NearSynset,
    AdjectiveModifiesNoun,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub kind: RelationKind,
    pub from: ConceptId,
    pub to: ConceptId,
    pub subtype: Option<String>,
}

/// An immutable, validated wordnet.
#[derive(Debug, Clone, PartialEq)]
pub struct WordnetDb {
    pivot_lang: String,
    synsets: BTreeMap<(ConceptId, String), Synset>,
    relations: BTreeSet<Relation>,
    // (lang, lemma) -> concepts whose synset in `lang` contains the lemma
    lemma_index: HashMap<(String, Lemma), Vec<ConceptId>>,
}

impl WordnetDb {
    /// Builds a database, checking every structural invariant. Record
    /// order does not matter.
    pub fn new(
        pivot_lang: &str,
        synsets: Vec<Synset>,
        relations: Vec<Relation>,
    ) -> Result<Self, WordnetError> {
        let mut by_key = BTreeMap::new();
        for s in synsets {
            check_synset(&s)?;
            let key = (s.concept, s.lang.clone());
            if by_key.contains_key(&key) {
                return Err(WordnetError::Invariant {
                    record: describe(&s),
                    message: "duplicate (concept, lang) synset".into(),
                });
            }
            by_key.insert(key, s);
        }
        let pivot_concepts: BTreeSet<ConceptId> = by_key
            .keys()
            .filter(|(_, l)| l == pivot_lang)
            .map(|(c, _)| *c)
            .collect();
        if pivot_concepts.is_empty() {
            return Err(WordnetError::NoPivot(pivot_lang.to_string()));
        }
        for s in by_key.values() {
            if !pivot_concepts.contains(&s.concept) {
                return Err(WordnetError::Invariant {
                    record: describe(s),
                    message: format!("concept has no synset in pivot language {pivot_lang:?}"),
                });
            }
        }
        let mut rels = BTreeSet::new();
        for r in relations {
            for end in [r.from, r.to] {
                if !pivot_concepts.contains(&end) {
                    return Err(WordnetError::Invariant {
                        record: format!("relation {:?} {} -> {}", r.kind, r.from, r.to),
                        message: format!("dangling concept {end}"),
                    });
                }
            }
            rels.insert(r);
        }
        let mut lemma_index: HashMap<(String, Lemma), Vec<ConceptId>> = HashMap::new();
        for s in by_key.values() {
            for m in &s.members {
                lemma_index
                    .entry((s.lang.clone(), m.clone()))
                    .or_default()
                    .push(s.concept);
            }
        }
        Ok(WordnetDb {
            pivot_lang: pivot_lang.to_string(),
            synsets: by_key,
            relations: rels,
            lemma_index,
        })
    }

    pub fn pivot_lang(&self) -> &str {
        &self.pivot_lang
    }

    /// Synsets in (concept, lang) order.
    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    pub fn relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter()
    }

    pub fn synset(&self, concept: ConceptId, lang: &str) -> Option<&Synset> {
        self.synsets.get(&(concept, lang.to_string()))
    }

    pub fn synsets_in(&self, lang: &str) -> impl Iterator<Item = &Synset> + '_ {
        let lang = lang.to_string();
        self.synsets.values().filter(move |s| s.lang == lang)
    }

    pub fn languages(&self) -> BTreeSet<&str> {
        self.synsets.keys().map(|(_, l)| l.as_str()).collect()
    }

    /// Member list of the (concept, lang) synset in stored order; empty if absent.
    pub fn members(&self, concept: ConceptId, lang: &str) -> &[Lemma] {
        self.synset(concept, lang)
            .map(|s| s.members.as_slice())
            .unwrap_or(&[])
    }

    /// Every lemma sharing a synset with `lemma` in `lang`, excluding `lemma`.
    pub fn synonyms(&self, lemma: &str, lang: &str) -> BTreeSet<Lemma> {
        let Ok(lemma) = Lemma::new(lemma) else {
            return BTreeSet::new();
        };
        let mut out = BTreeSet::new();
        if let Some(concepts) = self.lemma_index.get(&(lang.to_string(), lemma.clone())) {
            for c in concepts {
                out.extend(self.members(*c, lang).iter().cloned());
            }
        }
        out.remove(&lemma);
        out
    }

    /// True if `a` and `b` share a synset in `lang`.
    pub fn are_synonyms(&self, a: &str, b: &str, lang: &str) -> bool {
        let (Ok(a), Ok(b)) = (Lemma::new(a), Lemma::new(b)) else {
            return false;
        };
        if a == b {
            return false;
        }
        let key = (lang.to_string(), a);
        self.lemma_index.get(&key).is_some_and(|cs| {
            cs.iter()
                .any(|c| self.members(*c, lang).iter().any(|m| *m == b))
        })
    }
}

fn describe(s: &Synset) -> String {
    format!("synset concept={} lang={}", s.concept, s.lang)
}

fn check_synset(s: &Synset) -> Result<(), WordnetError> {
    let fail = |message: String| WordnetError::Invariant {
        record: describe(s),
        message,
    };
    if s.lang.is_empty() {
        return Err(fail("empty language code".into()));
    }
    if s.members.is_empty() {
        return Err(fail("synset has no members".into()));
    }
    let mut seen = BTreeSet::new();
    for m in &s.members {
        if !seen.insert(m) {
            return Err(fail(format!("duplicate member {m}")));
        }
    }
    if let Some(freq) = &s.member_freq {
        if freq.len() != s.members.len() {
            return Err(fail(format!(
                "freq has {} values for {} members",
                freq.len(),
                s.members.len()
            )));
        }
    }
    Ok(())
}

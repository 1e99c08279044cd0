//! Non-fatal checks on a loaded wordnet.
//!
//! Only the frequency ordering of members is machine-checkable among the
//! synset construction principles; minimality and coverage are editorial.

use std::collections::BTreeMap;
use std::fmt;

use unicode_normalization::UnicodeNormalization;

use super::{ConceptId, Pos, RelationKind, WordnetDb};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LintKind {
    FrequencyOrder,
    EmptyGloss,
    NormalizationTwin,
    RelationPos,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LintFinding {
    pub kind: LintKind,
    pub concept: ConceptId,
    pub lang: Option<String>,
    pub message: String,
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lang {
            Some(l) => write!(f, "concept {} [{}]: {}", self.concept, l, self.message),
            None => write!(f, "concept {}: {}", self.concept, self.message),
        }
    }
}

/// Allowed (from, to) POS combinations per relation kind. `None` means any.
fn allowed_pos(kind: RelationKind) -> Option<&'static [(Pos, Pos)]> {
    use Pos::*;
    use RelationKind::*;
    Some(match kind {
        Hypernymy | Hyponymy => &[(Noun, Noun), (Verb, Verb)],
        Holonymy | Meronymy | Compound => &[(Noun, Noun)],
        Troponymy | Entailment | Causative | Conjunction => &[(Verb, Verb)],
        SimilarAttribute => &[(Noun, Adjective), (Adjective, Noun)],
        FunctionVerb | AbilityVerb | CapabilityVerb => &[(Noun, Verb), (Verb, Noun)],
        AdverbModifiesVerb => &[(Adverb, Verb), (Verb, Adverb)],
        AdjectiveModifiesNoun => &[(Adjective, Noun), (Noun, Adjective)],
        Antonymy | Gradation | NearSynset => return None,
    })
}

fn fold(s: &str) -> String {
    s.nfkc().collect::<String>().to_lowercase()
}

/// Never fails; an empty result means the database is clean.
pub fn validate(db: &WordnetDb) -> Vec<LintFinding> {
    let mut out = Vec::new();
    for s in db.synsets() {
        if let Some(freq) = &s.member_freq {
            if let Some(w) = freq.windows(2).position(|w| w[0] < w[1]) {
                out.push(LintFinding {
                    kind: LintKind::FrequencyOrder,
                    concept: s.concept,
                    lang: Some(s.lang.clone()),
                    message: format!(
                        "frequency order violated: {} ({}) before {} ({})",
                        s.members[w], freq[w], s.members[w + 1], freq[w + 1]
                    ),
                });
            }
        }
        if s.gloss.trim().is_empty() {
            out.push(LintFinding {
                kind: LintKind::EmptyGloss,
                concept: s.concept,
                lang: Some(s.lang.clone()),
                message: "empty gloss".into(),
            });
        }
    }

    // Same-language synsets whose member lists collide after compatibility folding.
    let mut folded: BTreeMap<(String, Vec<String>), Vec<(ConceptId, Vec<String>)>> =
        BTreeMap::new();
    for s in db.synsets() {
        let raw: Vec<String> = s.members.iter().map(|m| m.to_string()).collect();
        let key: Vec<String> = raw.iter().map(|m| fold(m)).collect();
        folded
            .entry((s.lang.clone(), key))
            .or_default()
            .push((s.concept, raw));
    }
    for ((lang, _), group) in folded {
        for (i, (c, raw)) in group.iter().enumerate() {
            if let Some((other, _)) = group[..i].iter().find(|(_, r)| r != raw) {
                out.push(LintFinding {
                    kind: LintKind::NormalizationTwin,
                    concept: *c,
                    lang: Some(lang.clone()),
                    message: format!(
                        "members differ from concept {other} only by script normalization"
                    ),
                });
            }
        }
    }

    let pivot = db.pivot_lang();
    for r in db.relations() {
        let Some(allowed) = allowed_pos(r.kind) else {
            continue;
        };
        let (Some(a), Some(b)) = (db.synset(r.from, pivot), db.synset(r.to, pivot)) else {
            continue;
        };
        if !allowed.contains(&(a.pos, b.pos)) {
            out.push(LintFinding {
                kind: LintKind::RelationPos,
                concept: r.from,
                lang: None,
                message: format!(
                    "{:?} not allowed between {} ({}) and {} ({})",
                    r.kind, r.from, a.pos, r.to, b.pos
                ),
            });
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordnet::fixtures::synset;
    use crate::wordnet::Relation;

    fn db_of(synsets: Vec<crate::wordnet::Synset>, relations: Vec<Relation>) -> WordnetDb {
        WordnetDb::new("hin", synsets, relations).unwrap()
    }

    #[test]
    fn clean_db_is_clean() {
        let db = db_of(
            vec![
                synset(1, "hin", Pos::Verb, &["a", "b"]),
                synset(2, "hin", Pos::Verb, &["c"]),
            ],
            vec![Relation {
                kind: RelationKind::Troponymy,
                from: ConceptId(1),
                to: ConceptId(2),
                subtype: None,
            }],
        );
        assert!(validate(&db).is_empty());
    }

    #[test]
    fn frequency_order() {
        let mut s = synset(1, "hin", Pos::Noun, &["a", "b"]);
        s.member_freq = Some(vec![5, 9]);
        let f = validate(&db_of(vec![s], vec![]));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, LintKind::FrequencyOrder);
        assert!(f[0].message.contains("frequency order violated"));
    }

    #[test]
    fn troponymy_on_nouns() {
        let db = db_of(
            vec![
                synset(1, "hin", Pos::Noun, &["a"]),
                synset(2, "hin", Pos::Noun, &["b"]),
            ],
            vec![Relation {
                kind: RelationKind::Troponymy,
                from: ConceptId(1),
                to: ConceptId(2),
                subtype: None,
            }],
        );
        let f = validate(&db);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, LintKind::RelationPos);
    }

    #[test]
    fn empty_gloss_and_twins() {
        let mut s = synset(1, "eng", Pos::Noun, &["Family"]);
        s.gloss = String::new();
        let db = db_of(
            vec![
                synset(1, "hin", Pos::Noun, &["x"]),
                synset(2, "hin", Pos::Noun, &["y"]),
                s,
                synset(2, "eng", Pos::Noun, &["family"]),
            ],
            vec![],
        );
        let kinds: Vec<LintKind> = validate(&db).iter().map(|f| f.kind).collect();
        assert_eq!(kinds, [LintKind::EmptyGloss, LintKind::NormalizationTwin]);
    }
}

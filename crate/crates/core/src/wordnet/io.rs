//! JSONL storage: one synset or relation object per line.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ConceptId, Lemma, Pos, Relation, RelationKind, Synset, WordnetDb, WordnetError};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum Record {
    Synset {
        concept: u64,
        lang: String,
        pos: Pos,
        #[serde(default)]
        gloss: String,
        members: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        freq: Option<Vec<u64>>,
    },
    Relation {
        kind: RelationKind,
        from: u64,
        to: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subtype: Option<String>,
    },
}

pub fn load_wordnet(path: impl AsRef<Path>, pivot: &str) -> Result<WordnetDb, WordnetError> {
    parse_wordnet(BufReader::new(File::open(path)?), pivot)
}

pub fn parse_wordnet(reader: impl BufRead, pivot: &str) -> Result<WordnetDb, WordnetError> {
    let mut synsets = Vec::new();
    let mut relations = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| WordnetError::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        match record {
            Record::Synset {
                concept,
                lang,
                pos,
                gloss,
                members,
                freq,
            } => {
                let members = members
                    .iter()
                    .map(|m| Lemma::new(m))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|message| WordnetError::Parse {
                        line: lineno,
                        message,
                    })?;
                synsets.push(Synset {
                    concept: ConceptId(concept),
                    lang: crate::corpus::normalize(&lang),
                    pos,
                    gloss: crate::corpus::normalize(&gloss),
                    members,
                    member_freq: freq,
                });
            }
            Record::Relation {
                kind,
                from,
                to,
                subtype,
            } => relations.push(Relation {
                kind,
                from: ConceptId(from),
                to: ConceptId(to),
                subtype,
            }),
        }
    }
    WordnetDb::new(pivot, synsets, relations)
}

/// The language with a synset for every concept in the file; the
/// alphabetically first one if several qualify.
pub fn detect_pivot(path: impl AsRef<Path>) -> Result<String, WordnetError> {
    let mut by_lang: BTreeMap<String, BTreeSet<u64>> = BTreeMap::new();
    let mut all = BTreeSet::new();
    for (idx, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line).map_err(|e| WordnetError::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if let Record::Synset { concept, lang, .. } = record {
            by_lang.entry(crate::corpus::normalize(&lang)).or_default().insert(concept);
            all.insert(concept);
        }
    }
    by_lang
        .into_iter()
        .find(|(_, concepts)| *concepts == all)
        .map(|(lang, _)| lang)
        .ok_or(WordnetError::NoCommonPivot)
}

/// Writes synsets then relations, each in sorted order.
pub fn write_wordnet(db: &WordnetDb, writer: impl Write) -> std::io::Result<()> {
    let mut w = BufWriter::new(writer);
    for s in db.synsets() {
        let rec = Record::Synset {
            concept: s.concept.0,
            lang: s.lang.clone(),
            pos: s.pos,
            gloss: s.gloss.clone(),
            members: s.members.iter().map(|m| m.to_string()).collect(),
            freq: s.member_freq.clone(),
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    for r in db.relations() {
        let rec = Record::Relation {
            kind: r.kind,
            from: r.from.0,
            to: r.to.0,
            subtype: r.subtype.clone(),
        };
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

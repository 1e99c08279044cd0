//! Model training: IBM Model 1 lexical tables, alignment symmetrization,
//! phrase extraction and scoring, and a Witten-Bell n-gram LM.

mod lm;
mod model1;
mod phrase_table;
mod phrases;
mod symmetrize;
mod vocab;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use lm::LanguageModel;
pub use model1::{train_model1, viterbi_align, Direction, Model1, TTable, NULL_TOKEN};
pub use phrase_table::{align_pair, build_phrase_table, PhraseOption, PhraseTable, TrainConfig};
pub use phrases::{extract_phrases, PhraseSpan};
pub use symmetrize::symmetrize;
pub use vocab::{Vocab, WordId};

#[derive(Debug, Error)]
pub enum AlignError {
    #[error("cannot train on an empty corpus")]
    EmptyCorpus,
    #[error("{file} line {line}: {message}")]
    Format {
        file: String,
        line: usize,
        message: String,
    },
    #[error("unknown symmetrization heuristic {0:?}")]
    Heuristic(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Word links `(src_index, tgt_index)`, kept in row-major order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Alignment {
    pub links: BTreeSet<(usize, usize)>,
}

impl Alignment {
    pub fn new(links: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Alignment {
            links: links.into_iter().collect(),
        }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.links.contains(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Swaps the roles of source and target.
    pub fn transpose(&self) -> Alignment {
        Alignment::new(self.links.iter().map(|&(i, j)| (j, i)))
    }

    pub fn intersection(&self, other: &Alignment) -> Alignment {
        Alignment {
            links: self.links.intersection(&other.links).copied().collect(),
        }
    }

    pub fn union(&self, other: &Alignment) -> Alignment {
        Alignment {
            links: self.links.union(&other.links).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Alignment) -> bool {
        self.links.is_subset(&other.links)
    }
}

impl fmt::Display for Alignment {
    /// Pharaoh format: `0-0 1-2 ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.links.iter().map(|(i, j)| format!("{i}-{j}")).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Symmetrization {
    Intersection,
    Union,
    #[default]
    GrowDiagFinalAnd,
}

impl FromStr for Symmetrization {
    type Err = AlignError;
    fn from_str(s: &str) -> Result<Self, AlignError> {
        match s {
            "intersection" | "intersect" => Ok(Symmetrization::Intersection),
            "union" => Ok(Symmetrization::Union),
            "gdfa" | "grow-diag-final-and" => Ok(Symmetrization::GrowDiagFinalAnd),
            other => Err(AlignError::Heuristic(other.to_string())),
        }
    }
}

impl fmt::Display for Symmetrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetrization::Intersection => "intersection",
            Symmetrization::Union => "union",
            Symmetrization::GrowDiagFinalAnd => "grow-diag-final-and",
        })
    }
}

/// Formats a probability with 6 significant digits, trailing zeros trimmed.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=5).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6() {
        assert_eq!(fmt_sig6(1.0), "1");
        assert_eq!(fmt_sig6(2.0 / 3.0), "0.666667");
        assert_eq!(fmt_sig6(0.5), "0.5");
        assert_eq!(fmt_sig6(0.000123456789), "0.000123457");
        assert_eq!(fmt_sig6(1e-9), "1.00000e-9");
        assert_eq!(fmt_sig6(123.4567), "123.457");
    }

    #[test]
    fn heuristic_names() {
        assert_eq!("gdfa".parse::<Symmetrization>().unwrap(), Symmetrization::GrowDiagFinalAnd);
        assert!("diag".parse::<Symmetrization>().is_err());
    }
}

//! Corpus evaluation: BLEU, TER with shifts, and METEOR with an optional
//! wordnet synonym stage.
//!
//! All scores are kept on the raw [0, 1] scale (TER may exceed 1);
//! `×100` happens only in presentation helpers.

mod bleu;
mod meteor;
mod ter;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Sentence;
use crate::par::Execution;
use crate::wordnet::WordnetDb;

pub use bleu::{bleu, bleu_stats, BleuReport, BleuStats};
pub use meteor::{meteor, MeteorCorpus, MeteorReport, EXACT_SEARCH_MAX_LEN};
pub use ter::{edit_distance, ter, TerReport, MAX_SHIFT_LEN};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("{hyps} hypotheses but {refs} references")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("no sentences to score")]
    Empty,
    #[error("reference {index} is empty")]
    EmptyReference { index: usize },
    #[error("unknown metric {0:?} (expected bleu, ter or meteor)")]
    UnknownMetric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Bleu,
    Ter,
    Meteor,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Bleu, Metric::Ter, Metric::Meteor];

    /// True when a larger value is better.
    pub fn higher_is_better(self) -> bool {
        self != Metric::Ter
    }
}

impl FromStr for Metric {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bleu" => Ok(Metric::Bleu),
            "ter" => Ok(Metric::Ter),
            "meteor" => Ok(Metric::Meteor),
            _ => Err(MetricError::UnknownMetric(s.to_string())),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Bleu => "bleu",
            Metric::Ter => "ter",
            Metric::Meteor => "meteor",
        })
    }
}

/// Synonym lookup for METEOR's second matching stage.
#[derive(Debug, Clone, Copy)]
pub struct Synonyms<'a> {
    pub db: &'a WordnetDb,
    pub lang: &'a str,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions<'a> {
    pub smooth: bool,
    pub synonyms: Option<Synonyms<'a>>,
    pub exec: Execution,
}

/// All three metrics for one system on one test set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub bleu: BleuReport,
    pub ter: TerReport,
    pub meteor: MeteorCorpus,
}

impl MetricReport {
    pub fn value(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Bleu => self.bleu.bleu,
            Metric::Ter => self.ter.ter,
            Metric::Meteor => self.meteor.score,
        }
    }
}

pub(crate) fn check_lengths(hyps: &[Sentence], refs: &[Sentence]) -> Result<(), MetricError> {
    if hyps.len() != refs.len() {
        return Err(MetricError::LengthMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    if hyps.is_empty() {
        return Err(MetricError::Empty);
    }
    Ok(())
}

pub fn evaluate(hyps: &[Sentence], refs: &[Sentence], opts: &EvalOptions) -> Result<MetricReport, MetricError> {
    Ok(MetricReport {
        bleu: bleu::corpus_bleu(hyps, refs, opts.smooth, opts.exec)?,
        ter: ter::corpus_ter(hyps, refs, opts.exec)?,
        meteor: meteor::corpus_meteor(hyps, refs, opts.synonyms, opts.exec)?,
    })
}

/// WWN minus WOW for each metric, raw scale. A negative TER delta is an
/// improvement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedDelta {
    pub bleu: f64,
    pub ter: f64,
    pub meteor: f64,
}

impl PairedDelta {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Bleu => self.bleu,
            Metric::Ter => self.ter,
            Metric::Meteor => self.meteor,
        }
    }

    pub fn scaled(&self) -> PairedDelta {
        PairedDelta {
            bleu: self.bleu * 100.0,
            ter: self.ter * 100.0,
            meteor: self.meteor * 100.0,
        }
    }

    /// Strictly better under the metric's direction.
    pub fn improved(&self, metric: Metric) -> bool {
        let d = self.get(metric);
        if metric.higher_is_better() {
            d > 0.0
        } else {
            d < 0.0
        }
    }
}

pub fn compare(wow: &MetricReport, wwn: &MetricReport) -> PairedDelta {
    PairedDelta {
        bleu: wwn.bleu.bleu - wow.bleu.bleu,
        ter: wwn.ter.ter - wow.ter.ter,
        meteor: wwn.meteor.score - wow.meteor.score,
    }
}

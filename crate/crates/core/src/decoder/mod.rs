//! Phrase-based stack decoder under a log-linear model.
//!
//! Features, all in log10 or count units:
//! `[φ(t|s), φ(s|t), lex(t|s), lex(s|t), LM, word penalty, distortion]`.
//! The word penalty feature is −1 per output word and the distortion
//! feature is −Σ|start − previous_end − 1|.

mod model;
mod search;

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::kv::{KvError, KvFile};

pub use model::TranslationModel;
pub use search::{
    derivation_features, score_derivation, translate, translate_batch, DerivationStep, Translation,
};

pub const NUM_FEATURES: usize = 7;

pub type Features = [f64; NUM_FEATURES];

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("derivation does not cover the source exactly once: {0}")]
    Coverage(String),
    #[error("phrase pair {src:?} -> {tgt:?} is not in the model")]
    UnknownPhrase { src: String, tgt: String },
    #[error(transparent)]
    Config(#[from] KvError),
    #[error(transparent)]
    Model(#[from] crate::align::AlignError),
}

/// Log-linear weights, in feature order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub phi_ts: f64,
    pub phi_st: f64,
    pub lex_ts: f64,
    pub lex_st: f64,
    pub lm: f64,
    pub word_penalty: f64,
    pub distortion: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            phi_ts: 0.2,
            phi_st: 0.2,
            lex_ts: 0.2,
            lex_st: 0.2,
            lm: 0.5,
            word_penalty: 0.1,
            distortion: 0.1,
        }
    }
}

impl Weights {
    pub fn as_array(&self) -> Features {
        [
            self.phi_ts,
            self.phi_st,
            self.lex_ts,
            self.lex_st,
            self.lm,
            self.word_penalty,
            self.distortion,
        ]
    }

    pub fn from_array(w: Features) -> Self {
        Weights {
            phi_ts: w[0],
            phi_st: w[1],
            lex_ts: w[2],
            lex_st: w[3],
            lm: w[4],
            word_penalty: w[5],
            distortion: w[6],
        }
    }

    pub fn dot(&self, f: &Features) -> f64 {
        self.as_array().iter().zip(f).map(|(w, x)| w * x).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub weights: Weights,
    pub beam_size: usize,
    pub distortion_limit: usize,
    /// Translation options kept per source span, best first.
    pub max_options_per_span: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            weights: Weights::default(),
            beam_size: 100,
            distortion_limit: 6,
            max_options_per_span: 20,
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "w_phi_ts",
    "w_phi_st",
    "w_lex_ts",
    "w_lex_st",
    "w_lm",
    "w_word_penalty",
    "w_distortion",
    "beam",
    "dl",
    "options",
];

impl DecoderConfig {
    /// Unbounded beam and option lists; used for exact search.
    pub fn exhaustive(self) -> Self {
        DecoderConfig {
            beam_size: usize::MAX,
            max_options_per_span: usize::MAX,
            ..self
        }
    }

    /// Overrides defaults with any keys present in a `key = value` file.
    pub fn from_kv(kv: &KvFile) -> Result<Self, KvError> {
        kv.check_keys(CONFIG_KEYS)?;
        let mut cfg = DecoderConfig::default();
        let mut w = cfg.weights.as_array();
        for (slot, key) in w.iter_mut().zip(&CONFIG_KEYS[..NUM_FEATURES]) {
            if let Some(v) = kv.parse_opt(key)? {
                *slot = v;
            }
        }
        cfg.weights = Weights::from_array(w);
        if let Some(b) = kv.parse_opt::<usize>("beam")? {
            if b == 0 {
                return Err(KvError::Value {
                    key: "beam".into(),
                    value: "0".into(),
                    reason: "beam size must be at least 1".into(),
                });
            }
            cfg.beam_size = b;
        }
        if let Some(d) = kv.parse_opt("dl")? {
            cfg.distortion_limit = d;
        }
        if let Some(o) = kv.parse_opt::<usize>("options")? {
            cfg.max_options_per_span = o.max(1);
        }
        Ok(cfg)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, KvError> {
        Self::from_kv(&KvFile::read(path)?)
    }
}

impl fmt::Display for DecoderConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (key, w) in CONFIG_KEYS.iter().zip(self.weights.as_array()) {
            writeln!(f, "{key} = {w}")?;
        }
        writeln!(f, "beam = {}", self.beam_size)?;
        writeln!(f, "dl = {}", self.distortion_limit)?;
        writeln!(f, "options = {}", self.max_options_per_span)
    }
}

//! Wordnet-augmented phrase-based statistical machine translation.
//!
//! The crate covers the whole pipeline: a concept-linked multilingual
//! wordnet store, bilingual lexicon extraction from shared concepts,
//! training-corpus augmentation, IBM Model 1 alignment with phrase-table
//! and n-gram LM training, a beam-stack phrase decoder, BLEU/TER/METEOR
//! scoring, and an experiment harness that compares systems trained with
//! and without the extracted lexicon.
//!
//! Data-parallel loops go through [`par::Execution`]. With the default
//! `parallel` feature they run on rayon; without it every mode runs
//! sequentially with identical results.

pub mod align;
pub mod corpus;
pub mod decoder;
pub mod harness;
pub mod kv;
pub mod lexicon;
pub mod metrics;
pub mod par;
pub mod wordnet;

pub use align::{Alignment, LanguageModel, PhraseTable, Symmetrization, TTable};
pub use corpus::{Bitext, Sentence};
pub use decoder::{DecoderConfig, TranslationModel};
pub use lexicon::{BilingualLexicon, LexiconEntry};
pub use par::Execution;
pub use wordnet::{ConceptId, Lemma, Synset, WordnetDb};

use std::fs;
use std::path::Path;

use log::info;

use crate::align::{
    build_phrase_table, train_model1, AlignError, Direction, LanguageModel, PhraseTable,
    TTable, TrainConfig,
};
use crate::corpus::Bitext;

const PHRASE_TABLE: &str = "phrase-table";
const LM: &str = "lm.tsv";
const TTABLE_FWD: &str = "ttable.fwd.tsv";
const TTABLE_REV: &str = "ttable.rev.tsv";

/// Everything the decoder needs, plus the lexical tables it was built from.
#[derive(Debug, Clone)]
pub struct TranslationModel {
    pub phrase_table: PhraseTable,
    pub lm: LanguageModel,
    pub tt_fwd: Option<TTable>,
    pub tt_rev: Option<TTable>,
}

impl TranslationModel {
    /// Model 1 in both directions, symmetrized phrase extraction, and an LM
    /// over the target side.
    pub fn train(bitext: &Bitext, cfg: &TrainConfig) -> Result<Self, AlignError> {
        let tt_fwd = train_model1(bitext, Direction::SrcToTgt, cfg.iterations, cfg.epsilon, cfg.exec)?;
        let tt_rev = train_model1(bitext, Direction::TgtToSrc, cfg.iterations, cfg.epsilon, cfg.exec)?;
        let phrase_table = build_phrase_table(
            bitext,
            &tt_fwd,
            &tt_rev,
            cfg.heuristic,
            cfg.max_phrase_len,
            cfg.exec,
        );
        let lm = LanguageModel::train(bitext.targets(), cfg.lm_order)?;
        info!(
            "trained {}-{}: {} pairs, {} phrase pairs",
            bitext.src_lang,
            bitext.tgt_lang,
            bitext.len(),
            phrase_table.len()
        );
        Ok(TranslationModel {
            phrase_table,
            lm,
            tt_fwd: Some(tt_fwd),
            tt_rev: Some(tt_rev),
        })
    }

    pub fn save(&self, dir: impl AsRef<Path>) -> Result<(), AlignError> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        self.phrase_table.write(dir.join(PHRASE_TABLE))?;
        self.lm.write(dir.join(LM))?;
        if let Some(tt) = &self.tt_fwd {
            tt.write(dir.join(TTABLE_FWD))?;
        }
        if let Some(tt) = &self.tt_rev {
            tt.write(dir.join(TTABLE_REV))?;
        }
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self, AlignError> {
        let dir = dir.as_ref();
        let optional = |name: &str| -> Result<Option<TTable>, AlignError> {
            let p = dir.join(name);
            p.exists().then(|| TTable::read(p)).transpose()
        };
        Ok(TranslationModel {
            phrase_table: PhraseTable::read(dir.join(PHRASE_TABLE))?,
            lm: LanguageModel::read(dir.join(LM))?,
            tt_fwd: optional(TTABLE_FWD)?,
            tt_rev: optional(TTABLE_REV)?,
        })
    }
}

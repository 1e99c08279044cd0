use std::fs;

use wnsmt::align::TrainConfig;
use wnsmt::corpus::{augment, load_bitext};
use wnsmt::decoder::{score_derivation, translate, translate_batch};
use wnsmt::lexicon::{extract_bilingual_lexicon, read_lexicon, write_lexicon};
use wnsmt::metrics::{evaluate, EvalOptions, Synonyms};
use wnsmt::wordnet::{load_wordnet, parse_wordnet, validate, write_wordnet, LintKind};
use wnsmt::{DecoderConfig, Execution, Sentence, TranslationModel};

const WORDNET: &str = r#"{"type":"synset","concept":1,"lang":"hin","pos":"noun","gloss":"a round toy","members":["गुब्बारा"]}
{"type":"synset","concept":1,"lang":"eng","pos":"noun","gloss":"a round toy","members":["balloon"]}
{"type":"synset","concept":1,"lang":"mal","pos":"noun","gloss":"a round toy","members":["ബലൂൺ"]}
{"type":"synset","concept":7,"lang":"hin","pos":"verb","gloss":"fill with air","members":["फुलाना"]}
{"type":"synset","concept":7,"lang":"eng","pos":"verb","gloss":"fill with air","members":["blow_up","inflate"]}
{"type":"synset","concept":7,"lang":"mal","pos":"verb","gloss":"fill with air","members":["വികസിപ്പിക്കുക","വലുതാക്കുക","വീർപ്പിക്കുക"]}
{"type":"relation","kind":"function_verb","from":1,"to":7}
"#;

const TRAIN_ENG: &str = "He saw the balloon.\nShe saw the balloon.\nHe ate rice.\nShe ate rice.\nHe will eat.\n\n";
const TRAIN_MAL: &str = "അവൻ ബലൂൺ കണ്ടു\nഅവൾ ബലൂൺ കണ്ടു\nഅവൻ ചോറ് കഴിച്ചു\nഅവൾ ചോറ് കഴിച്ചു\nഅവൻ കഴിക്കും\nextra\n";

#[test]
fn wordnet_to_translation_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let db_path = dir.path().join("wn.jsonl");
    fs::write(&db_path, WORDNET).unwrap();
    let db = load_wordnet(&db_path, "hin").unwrap();
    assert!(validate(&db).iter().all(|f| f.kind != LintKind::RelationPos));

    let mut again = Vec::new();
    write_wordnet(&db, &mut again).unwrap();
    assert_eq!(parse_wordnet(again.as_slice(), "hin").unwrap(), db);

    let lex = extract_bilingual_lexicon(&db, "eng", "mal").unwrap();
    // balloon x 1, {blow up, inflate} x 3
    assert_eq!(lex.entries.len(), 7);
    let lex_path = dir.path().join("lex.tsv");
    write_lexicon(&lex, &lex_path).unwrap();
    assert_eq!(read_lexicon(&lex_path, "eng", "mal").unwrap(), lex);

    fs::write(dir.path().join("train.eng"), TRAIN_ENG).unwrap();
    fs::write(dir.path().join("train.mal"), TRAIN_MAL).unwrap();
    let (base, report) = load_bitext(dir.path().join("train.eng"), dir.path().join("train.mal"), "eng", "mal").unwrap();
    assert_eq!((report.kept, report.dropped), (5, 1));
    let aug = augment(&base, &lex, 2).unwrap();
    assert_eq!(aug.len(), 5 + 2 * 7);

    let cfg = TrainConfig {
        exec: Execution::Sequential,
        ..TrainConfig::default()
    };
    let model = TranslationModel::train(&aug, &cfg).unwrap();
    let model_dir = dir.path().join("model");
    model.save(&model_dir).unwrap();
    let loaded = TranslationModel::load(&model_dir).unwrap();

    let dcfg = DecoderConfig::default();
    let tests: Vec<Sentence> = ["he will inflate the balloon", "she saw the balloon"]
        .iter()
        .map(|s| Sentence::from_spaced(s))
        .collect();
    let a = translate_batch(&tests, &model, &dcfg, Execution::Sequential);
    let b = translate_batch(&tests, &loaded, &dcfg, Execution::Sequential);
    // scores are stored to six significant digits
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((&x.output, &x.derivation), (&y.output, &y.derivation));
        assert!((x.score - y.score).abs() <= 1e-5);
    }
    let synset: Vec<&str> = db.members(wnsmt::ConceptId(7), "mal").iter().map(|l| l.as_str()).collect();
    assert!(a[0].output.iter().any(|w| synset.contains(&w.as_str())), "{}", a[0].output);
    for w in ["ബലൂൺ", "കണ്ടു"] {
        assert!(a[1].output.iter().any(|o| o == w), "{}", a[1].output);
    }
    for (t, s) in a.iter().zip(&tests) {
        let rescored = score_derivation(s, &t.derivation, &model, &dcfg).unwrap();
        assert!((rescored - t.score).abs() <= 1e-9);
    }

    // a synonym of the reference verb counts as a METEOR match
    let hyp = [Sentence::from_spaced("അവൻ ബലൂൺ വലുതാക്കുക")];
    let reference = [Sentence::from_spaced("അവൻ ബലൂൺ വീർപ്പിക്കുക")];
    let plain = evaluate(&hyp, &reference, &EvalOptions::default()).unwrap();
    let with_wn = evaluate(
        &hyp,
        &reference,
        &EvalOptions {
            synonyms: Some(Synonyms { db: &db, lang: "mal" }),
            ..EvalOptions::default()
        },
    )
    .unwrap();
    assert_eq!(plain.meteor.matches, 2);
    assert_eq!(with_wn.meteor.matches, 3);
    assert_eq!(plain.bleu, with_wn.bleu);
}

#[test]
fn baseline_copies_unknown_words() {
    let mut base = wnsmt::Bitext::new("eng", "mal");
    for (s, t) in TRAIN_ENG.lines().zip(TRAIN_MAL.lines()).filter(|(s, _)| !s.is_empty()) {
        base.pairs.push((
            wnsmt::corpus::tokenize(s, "eng"),
            wnsmt::corpus::tokenize(t, "mal"),
        ));
    }
    let model = TranslationModel::train(&base, &TrainConfig::default()).unwrap();
    let t = translate(&Sentence::from_spaced("he blow up the balloon"), &model, &DecoderConfig::default());
    assert!(t.output.iter().any(|w| w == "blow"));
    assert!(t.output.iter().any(|w| w == "up"));
}

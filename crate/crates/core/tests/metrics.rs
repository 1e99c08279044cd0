mod oracles;

use proptest::prelude::*;
use wnsmt::metrics::{bleu, evaluate, meteor, ter, EvalOptions, Metric, MetricError, Synonyms, MAX_SHIFT_LEN};
use wnsmt::wordnet::{ConceptId, Lemma, Pos, Synset};
use wnsmt::{Execution, Sentence, WordnetDb};

const TOL: f64 = 1e-9;

fn tokens(max: usize, min: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]), min..=max)
        .prop_map(|v| v.into_iter().map(String::from).collect())
}

fn synonyms_db() -> WordnetDb {
    let syn = |c: u64, words: &[&str]| Synset {
        concept: ConceptId(c),
        lang: "xx".into(),
        pos: Pos::Noun,
        gloss: String::new(),
        members: words.iter().map(|w| Lemma::new(w).unwrap()).collect(),
        member_freq: None,
    };
    WordnetDb::new("xx", vec![syn(1, &["a", "e"]), syn(2, &["b", "c", "d"])], vec![]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn corpus_bleu_matches_oracle(
        pairs in prop::collection::vec((tokens(9, 0), tokens(9, 1)), 1..5),
        smooth in any::<bool>(),
    ) {
        let hyps: Vec<Sentence> = pairs.iter().map(|p| Sentence::new(p.0.clone())).collect();
        let refs: Vec<Sentence> = pairs.iter().map(|p| Sentence::new(p.1.clone())).collect();
        let got = bleu(&hyps, &refs, smooth).unwrap();
        let (want, p, bp) = oracles::bleu(&pairs, smooth);
        prop_assert!((got.bleu - want).abs() <= TOL, "{} vs {}", got.bleu, want);
        for n in 0..4 {
            prop_assert!((got.precisions[n] - p[n]).abs() <= TOL);
        }
        if got.hyp_len > 0 {
            prop_assert!((got.bp - bp).abs() <= TOL);
        }
    }

    #[test]
    fn ter_matches_greedy_oracle(h in tokens(9, 0), r in tokens(9, 1)) {
        let got = ter(&h, &r).unwrap();
        let edits = oracles::ter_greedy(&h, &r, MAX_SHIFT_LEN);
        prop_assert_eq!(got.edits as usize, edits);
        prop_assert!(got.edits as usize <= oracles::levenshtein(&h, &r));
    }

    #[test]
    fn ter_never_beats_optimal_shifting(h in tokens(5, 0), r in tokens(5, 1)) {
        let got = ter(&h, &r).unwrap();
        prop_assert!(got.edits as usize >= oracles::ter_optimal(&h, &r));
    }

    #[test]
    fn meteor_matches_oracle(h in tokens(7, 0), r in tokens(7, 0)) {
        let db = synonyms_db();
        let syn = |x: &String, y: &String| db.are_synonyms(x, y, "xx");
        let got = meteor(&h, &r, Some(&db), "xx");
        let want = oracles::meteor(&h, &r, &syn);
        prop_assert_eq!(got.exact_matches as usize, want.exact);
        prop_assert_eq!(got.synonym_matches as usize, want.synonym);
        prop_assert_eq!(got.chunks as usize, want.chunks);
        prop_assert!((got.score - want.score).abs() <= TOL);
    }

    #[test]
    fn wordnet_never_lowers_meteor_matches(h in tokens(8, 1), r in tokens(8, 1)) {
        let db = synonyms_db();
        prop_assert!(meteor(&h, &r, Some(&db), "xx").matches >= meteor(&h, &r, None, "xx").matches);
    }
}

#[test]
fn long_sentences_use_beam_meteor_and_stay_sane() {
    let h: Vec<String> = "a b c d e a b c d e a b c d e a".split(' ').map(String::from).collect();
    let mut r = h.clone();
    r.reverse();
    let m = meteor(&h, &r, None, "xx");
    assert_eq!(m.matches, 16);
    assert!(m.chunks >= 1 && m.chunks <= 16);
    assert!(m.score > 0.0 && m.score < 1.0);
    let same = meteor(&h, &h, None, "xx");
    assert_eq!(same.chunks, 1);
}

#[test]
fn evaluate_is_the_same_sequential_and_parallel() {
    let hyps: Vec<Sentence> = ["a b c d", "e d c", "a a a b", "c"].iter().map(|s| Sentence::from_spaced(s)).collect();
    let refs: Vec<Sentence> = ["a b d c", "e d c b", "a b", "c e"].iter().map(|s| Sentence::from_spaced(s)).collect();
    let db = synonyms_db();
    let opts = |exec| EvalOptions {
        smooth: true,
        synonyms: Some(Synonyms { db: &db, lang: "xx" }),
        exec,
    };
    let a = evaluate(&hyps, &refs, &opts(Execution::Sequential)).unwrap();
    let b = evaluate(&hyps, &refs, &opts(Execution::Parallel)).unwrap();
    assert_eq!(a, b);
    for m in Metric::ALL {
        assert!(a.value(m).is_finite());
    }
}

#[test]
fn corpus_errors() {
    let one = [Sentence::from_spaced("a")];
    let empty = [Sentence::default()];
    assert_eq!(
        evaluate(&one, &empty, &EvalOptions::default()).unwrap_err(),
        MetricError::EmptyReference { index: 0 }
    );
    assert_eq!(evaluate(&[], &[], &EvalOptions::default()).unwrap_err(), MetricError::Empty);
}

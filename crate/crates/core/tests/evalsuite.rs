use std::collections::BTreeMap;

use lsa_core::evalsuite::stats::pearson;
use lsa_core::evalsuite::*;
use lsa_core::synth::{lexicon, tier_corpus, two_topic_corpus};
use lsa_core::vecspace::*;
use lsa_oracles::{pearson_r, XorShift};

fn space(c: &lsa_core::corpusio::Corpus, k: usize) -> SemanticSpace {
    build_space(c, &MatrixOptions::with_min_count(1), &BuildConfig { k, ..BuildConfig::default() }).unwrap()
}

fn two_topic_space() -> (SemanticSpace, Vec<String>, Vec<String>) {
    let t = two_topic_corpus(11, 20, 40);
    (space(&t.corpus, 10), t.topic_a, t.topic_b)
}

#[test]
fn tier_means_recompute_from_items() {
    let t = tier_corpus(5, 8, 40);
    let s = space(&t.corpus, 20);
    let r = assoc_test(&s, &t.norms, None).unwrap();
    assert_eq!(r.items.len(), 8);
    for tier in 0..4 {
        let m = r.items.iter().map(|i| i.tiers()[tier]).sum::<f64>() / r.items.len() as f64;
        assert!((m - r.tier_means[tier]).abs() < 1e-12);
    }
    assert!(r.tier_means.windows(2).all(|w| w[0] > w[1]), "{:?}", r.tier_means);
}

#[test]
fn filtered_and_excluded_partition_the_input() {
    let t = tier_corpus(6, 10, 30);
    let s = space(&t.corpus, 20);
    for filter in [AssocFilter::Weight(0.5), AssocFilter::Entropy(0.6)] {
        let r = assoc_test(&s, &t.norms, Some(filter)).unwrap();
        assert_eq!(r.items.len() + r.exclusions.len(), t.norms.len());
    }
    let r = assoc_test(&s, &t.norms, Some(AssocFilter::Weight(0.5))).unwrap();
    assert_eq!(r.items.len(), 5);
}

#[test]
fn all_out_of_vocabulary_norms_are_refused() {
    let t = tier_corpus(7, 6, 20);
    let s = space(&t.corpus, 10);
    let unknown = lexicon(12000, 60);
    let norms: Vec<AssocNormItem> = unknown
        .chunks(10)
        .map(|w| AssocNormItem::new(w[0].clone(), w[1..].iter().map(|x| (x.clone(), 0.1)).collect()))
        .collect();
    match assoc_test(&s, &norms, None) {
        Err(EvalError::TooFewItems { valid, exclusions, .. }) => {
            assert_eq!(valid, 0);
            assert_eq!(exclusions.len(), norms.len());
        }
        other => panic!("expected refusal, got {other:?}"),
    }
}

fn judgment_items(s: &SemanticSpace, words: &[String], rating: impl Fn(usize, f64) -> f64) -> Vec<JudgmentItem> {
    let mut items = Vec::new();
    let mut n = 0;
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            let cos = s.similarity(&words[i], &words[j]).unwrap();
            let r = rating(n, cos);
            items.push(JudgmentItem {
                story: format!("story{}", n % 3),
                word_a: words[i].clone(),
                word_b: words[j].clone(),
                mean_rating_by_grade: BTreeMap::from([("2".to_string(), r), ("4".to_string(), r)]),
            });
            n += 1;
        }
    }
    items
}

#[test]
fn affine_ratings_correlate_perfectly() {
    let (s, a, b) = two_topic_space();
    let words: Vec<String> = a[..6].iter().chain(&b[..6]).cloned().collect();
    let r = judgment_test(&s, &judgment_items(&s, &words, |_, c| 3.0 + 2.0 * c));
    for g in &r.pooled {
        assert!((g.result.as_ref().unwrap().r - 1.0).abs() < 1e-9);
    }
    for story in &r.stories {
        for g in &story.by_grade {
            assert!((g.result.as_ref().unwrap().r - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn permuted_ratings_are_not_significant() {
    let (s, a, b) = two_topic_space();
    let words: Vec<String> = a[..6].iter().chain(&b[..6]).cloned().collect();
    let affine = judgment_items(&s, &words, |_, c| 3.0 + 2.0 * c);
    assert_eq!(affine.len(), 66);
    // Shuffle the ratings across pairs to break any relation with the cosines.
    let mut rng = XorShift::new(3);
    let mut ratings: Vec<f64> = affine.iter().map(|i| i.mean_rating_by_grade["2"]).collect();
    for i in (1..ratings.len()).rev() {
        ratings.swap(i, rng.below(i + 1));
    }
    let permuted = judgment_items(&s, &words, |n, _| ratings[n]);
    let r = judgment_test(&s, &permuted);
    let pooled = r.pooled[0].result.as_ref().unwrap();
    assert_eq!(pooled.n, 66);
    assert!(pooled.p > 0.05, "{pooled:?}");
    assert!(pooled.r.abs() < 0.25);
}

fn toks(ws: &[String]) -> Vec<String> {
    ws.to_vec()
}

#[test]
fn self_definition_and_permutation_invariance() {
    let (s, a, b) = two_topic_space();
    let mut items = Vec::new();
    for i in 0..8 {
        let w = a[i].clone();
        items.push(
            VocabItem::new(
                w.clone(),
                vec![
                    (DefinitionLabel::Correct, vec![w.clone(), w.clone()]),
                    (DefinitionLabel::Close, toks(&a[10..13])),
                    (DefinitionLabel::Distant, toks(&[a[14].clone(), b[1].clone(), b[2].clone()])),
                    (DefinitionLabel::Unrelated, toks(&b[5..8])),
                ],
            )
            .unwrap(),
        );
    }
    let base = vocab_test(&s, &items, None);
    assert_eq!(base.items.len(), 8);
    assert_eq!(base.percent(DefinitionLabel::Correct), 100.0);

    let perms = permutations(4);
    assert_eq!(perms.len(), 24);
    for perm in perms {
        let shuffled: Vec<VocabItem> = items
            .iter()
            .map(|it| VocabItem::new(it.word.clone(), perm.iter().map(|&p| it.definitions[p].clone()).collect()).unwrap())
            .collect();
        let r = vocab_test(&s, &shuffled, None);
        for (x, y) in r.items.iter().zip(&base.items) {
            assert_eq!(x.chosen, y.chosen);
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn record(id: &str, source: &[String], protocol: &[String], props: u32) -> RecallRecord {
    RecallRecord {
        text_id: id.into(),
        task: RecallTask::ImmediateRecall,
        source_tokens: source.to_vec(),
        protocol_tokens: protocol.to_vec(),
        propositions_recalled: props,
    }
}

#[test]
fn identical_protocol_scores_one() {
    let (s, a, _) = two_topic_space();
    let r = recall_score(&s, &record("t", &a[..8], &a[..8], 0)).unwrap();
    assert!((r - 1.0).abs() < 1e-9);
}

#[test]
fn other_topic_protocol_scores_near_zero() {
    let (s, a, b) = two_topic_space();
    let r = recall_score(&s, &record("t", &a[..8], &b[..8], 0)).unwrap();
    assert!(r < 0.1, "{r}");
}

/// Protocols that keep `j` source words and replace the rest with other-topic words.
fn graded_protocols(a: &[String], b: &[String], n: usize) -> Vec<Vec<String>> {
    (0..n)
        .map(|i| {
            let j = 1 + i % 8;
            a[..j].iter().chain(&b[..8 - j + 1]).cloned().collect()
        })
        .collect()
}

#[test]
fn proportional_propositions_correlate_perfectly() {
    let (s, a, b) = two_topic_space();
    let records: Vec<RecallRecord> = graded_protocols(&a, &b, 16)
        .iter()
        .map(|p| {
            let sc = recall_score(&s, &record("t", &a[..8], p, 0)).unwrap();
            record("t", &a[..8], p, (100.0 * sc).round().max(0.0) as u32)
        })
        .collect();
    let rep = recall_correlation(&s, &records);
    assert_eq!(rep.groups.len(), 1);
    let r = rep.groups[0].correlation.as_ref().unwrap().r;
    assert!(r > 0.999, "{r}");
}

#[test]
fn constant_scores_flag_degenerate_group() {
    let (s, a, _) = two_topic_space();
    let records: Vec<RecallRecord> = (0..5).map(|i| record("t", &a[..8], &a[..8], i)).collect();
    let rep = recall_correlation(&s, &records);
    assert!(rep.groups[0].is_degenerate());
}

#[test]
fn noisy_linear_relation_matches_simulation() {
    let (s, a, b) = two_topic_space();
    let protocols = graded_protocols(&a, &b, 50);
    let scores: Vec<f64> = protocols
        .iter()
        .map(|p| recall_score(&s, &record("t", &a[..8], p, 0)).unwrap())
        .collect();
    let mut rng = XorShift::new(17);
    let noisy: Vec<f64> = scores.iter().map(|x| x + 0.1 * rng.gaussian()).collect();
    let records: Vec<RecallRecord> = protocols
        .iter()
        .zip(&noisy)
        .map(|(p, y)| record("t", &a[..8], p, (100.0 * y).round().max(0.0) as u32))
        .collect();
    let rep = recall_correlation(&s, &records);
    let r = rep.groups[0].correlation.as_ref().unwrap().r;
    let simulated = pearson_r(&scores, &noisy);
    assert!((r - simulated).abs() < 0.1, "{r} vs {simulated}");
}

#[test]
fn pearson_of_exact_line_is_one() {
    let x = [1.0, 2.0, 4.0, 7.0, 11.0];
    let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
    let c = pearson(&x, &y).unwrap();
    assert!((c.r - 1.0).abs() < 1e-12);
    assert!((c.r - pearson_r(&x, &y)).abs() < 1e-12);
}

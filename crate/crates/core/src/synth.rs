//! Deterministic synthetic corpora with known structure, used as fixtures.

use std::fs;
use std::io;
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cooctrace::WordPair;
use crate::corpusio::{AgeLevel, Corpus, Paragraph, ParagraphId, SourceCategory};
use crate::evalsuite::AssocNormItem;

const ONSETS: [&str; 16] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "ch", "br"];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

/// The `i`-th pseudo-word of a three-syllable alphabet; distinct for distinct `i`.
pub fn pseudo_word(i: usize) -> String {
    let base = ONSETS.len() * VOWELS.len();
    let mut n = i;
    let mut w = String::new();
    for _ in 0..3 {
        let s = n % base;
        w.push_str(ONSETS[s / VOWELS.len()]);
        w.push_str(VOWELS[s % VOWELS.len()]);
        n /= base;
    }
    w
}

/// `count` pseudo-words starting at `offset`.
pub fn lexicon(offset: usize, count: usize) -> Vec<String> {
    (offset..offset + count).map(pseudo_word).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Wraps token lists as one-sentence paragraphs of a single source.
pub fn corpus_from_tokens(docs: Vec<Vec<String>>) -> Corpus {
    Corpus {
        paragraphs: docs
            .into_iter()
            .enumerate()
            .map(|(i, tokens)| Paragraph {
                id: ParagraphId {
                    source: 0,
                    index: i as u32,
                },
                sentence_lengths: vec![tokens.len()],
                tokens,
                category: SourceCategory::Textbooks,
                level: AgeLevel::new(1).unwrap(),
                readability: None,
            })
            .collect(),
        manifest: Default::default(),
    }
}

fn sample(r: &mut ChaCha8Rng, pool: &[String], n: usize) -> Vec<String> {
    pool.choose_multiple(r, n.min(pool.len())).cloned().collect()
}

/// Stimuli with responses at controlled co-occurrence rates.
#[derive(Debug, Clone)]
pub struct TierCorpus {
    pub corpus: Corpus,
    pub norms: Vec<AssocNormItem>,
}

/// Rates at which the three top-ranked responses share a paragraph with their
/// stimulus; the three bottom-ranked responses never do.
pub const TIER_RATES: [f64; 3] = [0.20, 0.10, 0.05];

/// Each stimulus occurs in `per_stimulus` paragraphs together with its own
/// context words. Response `k` joins `TIER_RATES[k]` of them; every response
/// word also fills its own paragraphs so that all responses are equally
/// frequent.
pub fn tier_corpus(seed: u64, stimuli: usize, per_stimulus: usize) -> TierCorpus {
    let mut r = rng(seed);
    let filler = lexicon(0, 300);
    let mut next = 300;
    let mut docs: Vec<Vec<String>> = Vec::new();
    let mut norms = Vec::new();
    let response_total = ((TIER_RATES[0] * per_stimulus as f64).round() as usize).max(1) + 2;
    for _ in 0..stimuli {
        let stim = pseudo_word(next);
        let context = lexicon(next + 1, 8);
        let top = lexicon(next + 9, 3);
        let bottom = lexicon(next + 12, 3);
        next += 15;

        let mut own: Vec<Vec<String>> = (0..per_stimulus)
            .map(|_| {
                let mut d = vec![stim.clone()];
                d.extend(sample(&mut r, &context, 4));
                d.extend(sample(&mut r, &filler, 4));
                d
            })
            .collect();
        for (k, b) in top.iter().enumerate() {
            let with = ((TIER_RATES[k] * per_stimulus as f64).round() as usize).max(1);
            for d in own.iter_mut().take(with) {
                d.push(b.clone());
            }
            own.shuffle(&mut r);
            for _ in with..response_total {
                let mut d = vec![b.clone()];
                d.extend(sample(&mut r, &filler, 8));
                docs.push(d);
            }
        }
        for z in &bottom {
            for _ in 0..response_total {
                let mut d = vec![z.clone()];
                d.extend(sample(&mut r, &filler, 8));
                docs.push(d);
            }
        }
        docs.extend(own);
        let mut responses: Vec<(String, f64)> = top.iter().cloned().zip(TIER_RATES).collect();
        responses.extend(bottom.iter().cloned().zip([0.03, 0.02, 0.01]));
        norms.push(AssocNormItem::new(stim, responses));
    }
    docs.shuffle(&mut r);
    TierCorpus {
        corpus: corpus_from_tokens(docs),
        norms,
    }
}

/// Two vocabularies that never share a paragraph.
#[derive(Debug, Clone)]
pub struct TwoTopicCorpus {
    pub corpus: Corpus,
    pub topic_a: Vec<String>,
    pub topic_b: Vec<String>,
}

pub fn two_topic_corpus(seed: u64, words_per_topic: usize, paragraphs_per_topic: usize) -> TwoTopicCorpus {
    let mut r = rng(seed);
    let topic_a = lexicon(5000, words_per_topic);
    let topic_b = lexicon(6000, words_per_topic);
    let mut docs = Vec::new();
    for _ in 0..paragraphs_per_topic {
        for topic in [&topic_a, &topic_b] {
            let n = r.random_range(6..=10);
            docs.push(sample(&mut r, topic, n));
        }
    }
    TwoTopicCorpus {
        corpus: corpus_from_tokens(docs),
        topic_a,
        topic_b,
    }
}

/// Topic-structured corpus for trace runs, with pairs whose words all occur
/// within the first `topics` paragraphs.
pub fn trace_corpus(seed: u64, paragraphs: usize, topics: usize, pairs: usize) -> (Corpus, Vec<WordPair>) {
    let mut r = rng(seed);
    let vocab: Vec<Vec<String>> = (0..topics).map(|t| lexicon(7000 + 20 * t, 12)).collect();
    let common = lexicon(7900, 10);
    let mut docs: Vec<Vec<String>> = vocab.to_vec();
    while docs.len() < paragraphs {
        let t = r.random_range(0..topics);
        let n = r.random_range(4..=8);
        let mut d = sample(&mut r, &vocab[t], n);
        if r.random_bool(0.3) {
            let u = (t + 1) % topics;
            d.extend(sample(&mut r, &vocab[u], 2));
        }
        d.extend(sample(&mut r, &common, 2));
        d.shuffle(&mut r);
        docs.push(d);
    }
    let mut out = Vec::with_capacity(pairs);
    for i in 0..pairs {
        let t = i % topics;
        let x = vocab[t][i / topics].clone();
        let y = if i % 2 == 0 { vocab[t][11 - i / topics].clone() } else { vocab[(t + 1) % topics][i / topics].clone() };
        out.push(WordPair::new(&x, &y).unwrap());
    }
    (corpus_from_tokens(docs), out)
}

/// A pair that never shares a paragraph but acquires shared contexts after `start`.
#[derive(Debug, Clone)]
pub struct BridgedCorpus {
    pub corpus: Corpus,
    pub pair: WordPair,
    pub start: usize,
}

pub fn bridged_corpus(seed: u64) -> BridgedCorpus {
    let mut r = rng(seed);
    let x = pseudo_word(8000);
    let y = pseudo_word(8001);
    let cx = lexicon(8010, 6);
    let cy = lexicon(8020, 6);
    let bridges = lexicon(8030, 8);
    let filler = lexicon(8040, 24);
    let mut head = Vec::new();
    for _ in 0..10 {
        let mut d = vec![x.clone()];
        d.extend(sample(&mut r, &cx, 4));
        head.push(d);
        let mut d = vec![y.clone()];
        d.extend(sample(&mut r, &cy, 4));
        head.push(d);
        head.push(sample(&mut r, &filler, 6));
        head.push(sample(&mut r, &filler, 6));
    }
    head.shuffle(&mut r);
    let start = head.len();
    let mut docs = head;
    for _ in 0..20 {
        let mut d = vec![x.clone()];
        d.extend(sample(&mut r, &bridges, 4));
        docs.push(d);
        let mut d = vec![y.clone()];
        d.extend(sample(&mut r, &bridges, 4));
        docs.push(d);
        docs.push(sample(&mut r, &bridges, 4));
    }
    BridgedCorpus {
        corpus: corpus_from_tokens(docs),
        pair: WordPair::new(&x, &y).unwrap(),
        start,
    }
}

/// Dimensionality used with [`gardener_corpus`].
pub const GARDENER_K: usize = 8;

pub const GARDENER_PROPOSITIONS: &str = "grow(gardener,roses)\nmeow(cat)\nthrow(man,flower)\n";

pub const GARDEN_TERMS: [&str; 8] = ["gardener", "garden", "border", "kitchen", "vegetable", "vegetables", "radish", "soil"];
pub const FLOWER_TERMS: [&str; 8] = ["flower", "flowers", "roses", "bouquet", "violets", "petals", "pollen", "tulip"];
pub const CAT_TERMS: [&str; 5] = ["cat", "meow", "meows", "miaow", "purr"];
pub const THROW_TERMS: [&str; 4] = ["throw", "send", "command", "jack"];

/// Forty paragraphs: a gardening cluster with a central flower subcluster, a
/// cat cluster, `grow` shared by gardens and cats, and `man` in every paragraph.
pub fn gardener_corpus(seed: u64) -> Corpus {
    let mut r = rng(seed);
    let words = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
    let garden = words(&GARDEN_TERMS);
    let flower = words(&FLOWER_TERMS);
    let cat = words(&CAT_TERMS);
    let throw = words(&THROW_TERMS);
    let fill = lexicon(9000, 16);
    let scene = words(&["grow", "gardener", "roses"]);
    let mut docs: Vec<Vec<String>> = Vec::new();
    for i in 0..12 {
        let mut d = sample(&mut r, &garden, 4);
        d.push("grow".into());
        d.extend(sample(&mut r, &fill, 2));
        if i % 2 == 0 {
            d.extend(sample(&mut r, &flower[..4], 2));
        }
        docs.push(d);
    }
    for _ in 0..12 {
        let mut d = sample(&mut r, &flower, 5);
        d.extend(sample(&mut r, &garden[..3], 1));
        docs.push(d);
    }
    for i in 0..10 {
        let mut d = sample(&mut r, &cat, 4);
        d.push(scene[i % 3].clone());
        docs.push(d);
    }
    for _ in 0..6 {
        let mut d = sample(&mut r, &throw, 3);
        d.extend(sample(&mut r, &flower, 2));
        docs.push(d);
    }
    for d in docs.iter_mut() {
        d.push("man".into());
        d.shuffle(&mut r);
    }
    docs.shuffle(&mut r);
    corpus_from_tokens(docs)
}

/// Joins tokens into sentences of `sentence_len` words.
fn render(tokens: &[String], sentence_len: usize) -> String {
    tokens
        .chunks(sentence_len.max(1))
        .map(|s| {
            let mut s = s.join(" ");
            if let Some(first) = s.get(..1) {
                s.replace_range(..1, &first.to_uppercase());
            }
            s + "."
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_sources(dir: &Path, name: &str, groups: &[(AgeLevel, SourceCategory, Vec<String>)]) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut manifest = String::new();
    for (level, category, paragraphs) in groups {
        let file = format!("{name}_l{level}_{}.txt", category.as_str());
        fs::write(dir.join(&file), paragraphs.join("\n\n") + "\n")?;
        manifest.push_str(&format!("{file}\t{category}\t{level}\n"));
    }
    fs::write(dir.join("manifest.tsv"), manifest)
}

/// Words every reader knows; the tutorial corpus sprinkles them into easy levels.
pub fn common_words() -> Vec<String> {
    lexicon(9500, 30)
}

/// Writes a self-contained example bundle under `dir`:
///
/// - `corpus/`: a four-level corpus with `manifest.tsv`, plus `words.txt` and `lemmas.tsv`
/// - `norms.tsv`, `judgments.tsv`, `vocab.tsv`, `recall.tsv` and `recall/` texts
/// - `trace/manifest.tsv` and `pairs.tsv` for a 200-paragraph trace
/// - `gardener/manifest.tsv` and `propositions.txt` for a comprehension run
pub fn write_tutorial(dir: &Path, seed: u64) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut r = rng(seed);
    let tiers = tier_corpus(seed, 12, 40);
    let topics = two_topic_corpus(seed.wrapping_add(1), 20, 40);
    let common = common_words();

    let mut docs: Vec<Vec<String>> = tiers
        .corpus
        .paragraphs
        .iter()
        .chain(&topics.corpus.paragraphs)
        .map(|p| p.tokens.clone())
        .collect();
    docs.shuffle(&mut r);
    let per_level = docs.len().div_ceil(4);
    let mut groups: Vec<(AgeLevel, SourceCategory, Vec<String>)> = Vec::new();
    for (i, mut d) in docs.into_iter().enumerate() {
        let level = i / per_level + 1;
        // Easier levels use more common words and shorter sentences.
        d.extend(sample(&mut r, &common, 2 * (4 - level)));
        d.shuffle(&mut r);
        let level = AgeLevel::new(level as u8).unwrap();
        let category = SourceCategory::ALL[i % SourceCategory::ALL.len()];
        let text = render(&d, 3 + 2 * level.get() as usize);
        match groups.iter_mut().find(|g| g.0 == level && g.1 == category) {
            Some(g) => g.2.push(text),
            None => groups.push((level, category, vec![text])),
        }
    }
    groups.sort_by_key(|g| (g.0, g.1));
    write_sources(&dir.join("corpus"), "corpus", &groups)?;
    fs::write(dir.join("corpus/words.txt"), common.join("\n") + "\n")?;
    let (a, b) = (&topics.topic_a, &topics.topic_b);
    let mut lemmas = String::from("# token\tlemma\tpos\n");
    for w in a.iter().take(3) {
        lemmas.push_str(&format!("{w}s\t{w}\tnoun\n"));
    }
    fs::write(dir.join("corpus/lemmas.tsv"), lemmas)?;

    let mut norms = String::from("# stimulus\tresponse\tfrequency\n");
    for item in &tiers.norms {
        for (resp, f) in &item.responses {
            norms.push_str(&format!("{}\t{resp}\t{:.0}%\n", item.stimulus, f * 100.0));
        }
    }
    fs::write(dir.join("norms.tsv"), norms)?;

    let mut judgments = String::from("# story\tword_a\tword_b\tgrade\trating\n");
    for story in 0..3 {
        for i in 0..8 {
            let x = &a[story * 6 + i % 6];
            let (y, base) = if i % 2 == 0 { (&a[(story * 6 + i + 1) % 20], 4.0) } else { (&b[story + i], 1.5) };
            for grade in ["2", "4"] {
                let rating: f64 = base + r.random_range(-0.5..0.5);
                judgments.push_str(&format!("story{}\t{x}\t{y}\t{grade}\t{rating:.1}\n", story + 1));
            }
        }
    }
    fs::write(dir.join("judgments.tsv"), judgments)?;

    let mut vocab = String::from("# word\tlabel\tdefinition\n");
    let other = &tiers.norms;
    for i in 0..20 {
        let w = &a[i];
        let rows = [
            ("correct", format!("{} {} {}", a[(i + 1) % 20], a[(i + 2) % 20], a[(i + 3) % 20])),
            ("close", format!("{} {} {}", a[(i + 4) % 20], b[i], b[(i + 1) % 20])),
            ("distant", format!("{} {} {}", b[(i + 2) % 20], b[(i + 3) % 20], other[i % other.len()].stimulus)),
            ("unrelated", format!("{} {}", other[(i + 1) % other.len()].stimulus, other[(i + 2) % other.len()].stimulus)),
        ];
        for (label, def) in rows {
            vocab.push_str(&format!("{w}\t{label}\t{def}\n"));
        }
    }
    fs::write(dir.join("vocab.tsv"), vocab)?;

    let recall_dir = dir.join("recall");
    fs::create_dir_all(&recall_dir)?;
    let mut recall = String::from("# text_id\ttask\tpropositions_recalled\tsource\tprotocol\n");
    for (t, (src, off)) in [(a, b), (b, a)].into_iter().enumerate() {
        let source = &src[t * 5..t * 5 + 10];
        fs::write(recall_dir.join(format!("text{t}.txt")), render(source, 5) + "\n")?;
        for (task, tag) in [("immediate_recall", "i"), ("summary", "s")] {
            for j in 0..8 {
                let kept = 2 + j;
                let mut protocol: Vec<String> = source[..kept.min(10)].to_vec();
                protocol.extend(off[..10 - kept.min(10) + 1].iter().cloned());
                let file = format!("text{t}_{tag}{j}.txt");
                fs::write(recall_dir.join(&file), render(&protocol, 6) + "\n")?;
                let recalled = kept + r.random_range(0..2);
                recall.push_str(&format!("text{t}\t{task}\t{recalled}\trecall/text{t}.txt\trecall/{file}\n"));
            }
        }
    }
    fs::write(dir.join("recall.tsv"), recall)?;

    let (trace, pairs) = trace_corpus(seed, 200, 4, 5);
    let tokens: Vec<String> = trace.paragraphs.iter().map(|p| render(&p.tokens, p.tokens.len())).collect();
    write_sources(&dir.join("trace"), "trace", &[(AgeLevel::new(1).unwrap(), SourceCategory::Stories, tokens)])?;
    let pairs_tsv: String = pairs.iter().map(|p| format!("{}\t{}\n", p.x, p.y)).collect();
    fs::write(dir.join("pairs.tsv"), pairs_tsv)?;

    let garden = gardener_corpus(seed);
    let tokens: Vec<String> = garden.paragraphs.iter().map(|p| render(&p.tokens, p.tokens.len())).collect();
    write_sources(&dir.join("gardener"), "gardener", &[(AgeLevel::new(1).unwrap(), SourceCategory::Stories, tokens)])?;
    fs::write(dir.join("propositions.txt"), GARDENER_PROPOSITIONS)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn pseudo_words_are_distinct_and_alphabetic() {
        let words: BTreeSet<String> = (0..6000).map(pseudo_word).collect();
        assert_eq!(words.len(), 6000);
        assert!(words.iter().all(|w| w.chars().all(|c| c.is_ascii_lowercase())));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(tier_corpus(3, 4, 20).corpus, tier_corpus(3, 4, 20).corpus);
        assert_eq!(gardener_corpus(1), gardener_corpus(1));
        assert_ne!(gardener_corpus(1), gardener_corpus(2));
        assert_eq!(trace_corpus(5, 60, 4, 5).0, trace_corpus(5, 60, 4, 5).0);
    }

    #[test]
    fn tier_rates_hold() {
        let t = tier_corpus(9, 3, 40);
        for item in &t.norms {
            let with_stim: Vec<&Paragraph> = t.corpus.paragraphs.iter().filter(|p| p.tokens.contains(&item.stimulus)).collect();
            assert_eq!(with_stim.len(), 40);
            let shared = |w: &str| with_stim.iter().filter(|p| p.tokens.iter().any(|t| t == w)).count();
            assert_eq!(shared(&item.responses[0].0), 8);
            assert_eq!(shared(&item.responses[1].0), 4);
            assert_eq!(shared(&item.responses[2].0), 2);
            for (z, _) in &item.responses[3..] {
                assert_eq!(shared(z), 0);
            }
        }
    }

    #[test]
    fn bridged_pair_never_cooccurs() {
        let b = bridged_corpus(4);
        assert!(!b
            .corpus
            .paragraphs
            .iter()
            .any(|p| p.tokens.contains(&b.pair.x) && p.tokens.contains(&b.pair.y)));
        for w in [&b.pair.x, &b.pair.y] {
            assert!(b.corpus.paragraphs[..b.start].iter().any(|p| p.tokens.contains(w)));
        }
    }

    #[test]
    fn gardener_corpus_shape() {
        let c = gardener_corpus(0);
        assert_eq!(c.len(), 40);
        assert!(c.paragraphs.iter().all(|p| p.tokens.iter().filter(|t| *t == "man").count() == 1));
    }

    #[test]
    fn tutorial_bundle_round_trips() {
        use crate::corpusio::{corpus_stats, ingest, stratify, CommonWordList, Manifest, TokenizePolicy};
        use crate::evalsuite::datasets::*;
        let dir = tempfile::tempdir().unwrap();
        write_tutorial(dir.path(), 7).unwrap();
        let load = |m: &str| ingest(&Manifest::load(&dir.path().join(m)).unwrap(), TokenizePolicy::default()).unwrap();

        let garden = load("gardener/manifest.tsv");
        let tokens: Vec<&Vec<String>> = garden.paragraphs.iter().map(|p| &p.tokens).collect();
        let expected = gardener_corpus(7);
        assert_eq!(tokens, expected.paragraphs.iter().map(|p| &p.tokens).collect::<Vec<_>>());
        assert_eq!(load("trace/manifest.tsv").len(), 200);

        let words = CommonWordList::load(&dir.path().join("corpus/words.txt")).unwrap();
        let corpus = stratify(&load("corpus/manifest.tsv"), &words).unwrap();
        let stats = corpus_stats(&corpus);
        assert_eq!(stats.levels.len(), 4);
        assert!(stats.readability_monotone, "{}", stats.render_text());

        let tok = |t: &str| t.split_whitespace().map(|w| w.trim_end_matches('.').to_lowercase()).collect();
        assert_eq!(load_norms(&dir.path().join("norms.tsv")).unwrap().len(), 12);
        assert_eq!(load_judgments(&dir.path().join("judgments.tsv")).unwrap().len(), 24);
        assert_eq!(load_vocab(&dir.path().join("vocab.tsv"), &tok).unwrap().len(), 20);
        assert_eq!(load_recall(&dir.path().join("recall.tsv"), &tok).unwrap().len(), 32);
    }
}

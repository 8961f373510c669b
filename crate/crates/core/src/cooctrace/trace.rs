use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{classify, update_index, CoocIndex, ParagraphCategory, TraceError, WordPair};
use crate::corpusio::{Corpus, Paragraph};
use crate::vecspace::{
    log_entropy_weight, truncated_svd_space, BuildConfig, MatrixOptions, SemanticSpace, SpaceError, TermDocMatrix,
};

pub const CHECKPOINT_VERSION: u32 = 1;

/// Bound on `|Σ gains − (final − initial)|` with exact rebuilds.
pub const TELESCOPING_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "stride")]
pub enum TraceMode {
    /// Rebuild after every paragraph.
    Exact,
    /// Rebuild every `s` paragraphs; each stride delta goes to the mixed bucket.
    Stride(usize),
}

impl TraceMode {
    fn stride(self) -> usize {
        match self {
            Self::Exact => 1,
            Self::Stride(s) => s.max(1),
        }
    }

    pub fn is_approximate(self) -> bool {
        self.stride() > 1
    }
}

impl std::str::FromStr for TraceMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Self::Exact),
            _ => s
                .strip_prefix("stride:")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(|n| if n == 1 { Self::Exact } else { Self::Stride(n) })
                .ok_or_else(|| format!("unknown trace mode `{s}` (exact|stride:N)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpointing {
    pub path: PathBuf,
    /// Number of traced paragraphs between two checkpoint writes.
    pub every: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// SVD parameters; `min_count` is ignored and forced to 1.
    pub build: BuildConfig,
    pub mode: TraceMode,
    pub checkpoint: Option<Checkpointing>,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            build: BuildConfig {
                k: 100,
                min_count: 1,
                ..BuildConfig::default()
            },
            mode: TraceMode::Exact,
            checkpoint: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    /// Number of paragraphs in the space (1-based index of the last one).
    pub step: usize,
    pub similarity: f64,
    /// Bucket credited with the gain that led to this point; `None` for the start.
    pub category: Option<ParagraphCategory>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainLedger {
    pub pair: WordPair,
    pub start: usize,
    pub end: usize,
    pub initial_similarity: f64,
    pub final_similarity: f64,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Category of each traced paragraph, in corpus order.
    pub categories: Vec<ParagraphCategory>,
    pub gains_by_category: BTreeMap<ParagraphCategory, f64>,
    pub event_counts: BTreeMap<ParagraphCategory, usize>,
    /// Steps where a word vector was degenerate; the similarity was taken as 0.
    pub degenerate_steps: Vec<usize>,
    pub approximate: bool,
}

impl GainLedger {
    fn new(pair: WordPair, start: usize, end: usize, initial: f64, approximate: bool) -> Self {
        let mut gains_by_category: BTreeMap<ParagraphCategory, f64> =
            ParagraphCategory::EXACT.into_iter().map(|c| (c, 0.0)).collect();
        if approximate {
            gains_by_category.insert(ParagraphCategory::Mixed, 0.0);
        }
        Self {
            pair,
            start,
            end,
            initial_similarity: initial,
            final_similarity: initial,
            trajectory: vec![TrajectoryPoint {
                step: start,
                similarity: initial,
                category: None,
            }],
            categories: Vec::new(),
            gains_by_category,
            event_counts: ParagraphCategory::EXACT.into_iter().map(|c| (c, 0)).collect(),
            degenerate_steps: Vec::new(),
            approximate,
        }
    }

    pub fn gain(&self, c: ParagraphCategory) -> f64 {
        self.gains_by_category.get(&c).copied().unwrap_or(0.0)
    }

    pub fn events(&self, c: ParagraphCategory) -> usize {
        self.event_counts.get(&c).copied().unwrap_or(0)
    }

    pub fn total_gain(&self) -> f64 {
        self.gains_by_category.values().sum()
    }

    /// `|Σ gains − (final − initial)|`.
    pub fn telescoping_error(&self) -> f64 {
        (self.total_gain() - (self.final_similarity - self.initial_similarity)).abs()
    }

    pub fn event_total(&self) -> usize {
        self.event_counts.values().sum()
    }
}

/// Resumable trace state, written as versioned JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub corpus_len: usize,
    pub pairs: Vec<WordPair>,
    pub start: usize,
    pub end: usize,
    pub build: BuildConfig,
    pub mode: TraceMode,
    /// Last paragraph already traced.
    pub step: usize,
    pub ledgers: Vec<GainLedger>,
    pub index: CoocIndex,
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, TraceError> {
    let err = |message: String| TraceError::Checkpoint {
        path: path.display().to_string(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
    let version = value.get("version").and_then(|v| v.as_u64());
    if version != Some(CHECKPOINT_VERSION as u64) {
        return Err(err(format!("unsupported version {version:?}")));
    }
    serde_json::from_value(value).map_err(|e| err(e.to_string()))
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<(), TraceError> {
    let err = |message: String| TraceError::Checkpoint {
        path: path.display().to_string(),
        message,
    };
    let json = serde_json::to_string(cp).map_err(|e| err(e.to_string()))?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, json).map_err(|e| err(e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| err(e.to_string()))
}

fn space_of(paragraphs: &[Paragraph], build: &BuildConfig, step: usize) -> Result<SemanticSpace, TraceError> {
    let wrap = |source: SpaceError| TraceError::Space { step, source };
    let m = TermDocMatrix::from_documents(
        paragraphs.iter().map(|p| (p.id, p.tokens.as_slice())),
        &MatrixOptions::with_min_count(1),
    )
    .map_err(wrap)?;
    truncated_svd_space(&log_entropy_weight(&m), build).map_err(wrap)
}

/// Similarity of the pair, or `None` when a vector is degenerate.
fn pair_similarity(s: &SemanticSpace, pair: &WordPair, step: usize) -> Result<Option<f64>, TraceError> {
    match s.similarity(&pair.x, &pair.y) {
        Ok(v) => Ok(Some(v)),
        Err(SpaceError::DegenerateVector) => Ok(None),
        Err(source) => Err(TraceError::Space { step, source }),
    }
}

fn validate(c: &Corpus, pairs: &[WordPair], start: usize, end: usize) -> Result<(), TraceError> {
    if pairs.is_empty() {
        return Err(TraceError::NoPairs);
    }
    if start < 2 || end <= start || end > c.len() {
        return Err(TraceError::Window { start, end, len: c.len() });
    }
    let window = &c.paragraphs[..start];
    for p in pairs {
        if p.x == p.y {
            return Err(TraceError::SameWord(p.to_string()));
        }
        for w in [&p.x, &p.y] {
            if !window.iter().any(|q| q.tokens.contains(w)) {
                return Err(TraceError::MissingWord {
                    pair: p.to_string(),
                    word: w.clone(),
                    start,
                });
            }
        }
    }
    Ok(())
}

/// Replays paragraphs `start+1..=end` (1-based), rebuilding the space on the
/// growing prefix and crediting each similarity change to a category.
pub fn run_trace(
    c: &Corpus,
    pairs: &[WordPair],
    start: usize,
    end: usize,
    config: &TraceConfig,
) -> Result<Vec<GainLedger>, TraceError> {
    validate(c, pairs, start, end)?;
    let mut build = config.build.clone();
    build.min_count = 1;
    let stride = config.mode.stride();

    let resumed = match &config.checkpoint {
        Some(cp) if cp.path.exists() => {
            let saved = load_checkpoint(&cp.path)?;
            let same_run = saved.corpus_len == c.len()
                && saved.pairs == pairs
                && saved.start == start
                && saved.end == end
                && saved.build == build
                && saved.mode == config.mode;
            if !same_run {
                return Err(TraceError::Checkpoint {
                    path: cp.path.display().to_string(),
                    message: "checkpoint belongs to a different run".into(),
                });
            }
            Some(saved)
        }
        _ => None,
    };

    let (mut step, mut ledgers, mut index) = match resumed {
        Some(cp) => (cp.step, cp.ledgers, cp.index),
        None => {
            let s = space_of(&c.paragraphs[..start], &build, start)?;
            let mut ledgers = Vec::with_capacity(pairs.len());
            for pair in pairs {
                let sim = pair_similarity(&s, pair, start)?;
                let mut l = GainLedger::new(pair.clone(), start, end, sim.unwrap_or(0.0), config.mode.is_approximate());
                if sim.is_none() {
                    l.degenerate_steps.push(start);
                }
                ledgers.push(l);
            }
            let mut index = CoocIndex::new();
            for p in &c.paragraphs[..start] {
                update_index(&mut index, &p.tokens);
            }
            (start, ledgers, index)
        }
    };

    let mut since_checkpoint = 0;
    while step < end {
        let t = step + 1;
        let tokens = &c.paragraphs[t - 1].tokens;
        for l in ledgers.iter_mut() {
            let cat = classify(&l.pair, tokens, &index);
            l.categories.push(cat);
            *l.event_counts.entry(cat).or_insert(0) += 1;
        }
        update_index(&mut index, tokens);

        if (t - start).is_multiple_of(stride) || t == end {
            let s = space_of(&c.paragraphs[..t], &build, t)?;
            for l in ledgers.iter_mut() {
                let sim = pair_similarity(&s, &l.pair, t)?;
                if sim.is_none() {
                    l.degenerate_steps.push(t);
                }
                let sim = sim.unwrap_or(0.0);
                let bucket = if config.mode.is_approximate() {
                    ParagraphCategory::Mixed
                } else {
                    *l.categories.last().unwrap()
                };
                *l.gains_by_category.entry(bucket).or_insert(0.0) += sim - l.final_similarity;
                l.final_similarity = sim;
                l.trajectory.push(TrajectoryPoint {
                    step: t,
                    similarity: sim,
                    category: Some(bucket),
                });
            }
        }
        step = t;
        since_checkpoint += 1;

        if let Some(cp) = &config.checkpoint {
            let at_rebuild = (t - start).is_multiple_of(stride) || t == end;
            if at_rebuild && (since_checkpoint >= cp.every.max(1) || t == end) {
                since_checkpoint = 0;
                save_checkpoint(
                    &cp.path,
                    &Checkpoint {
                        version: CHECKPOINT_VERSION,
                        corpus_len: c.len(),
                        pairs: pairs.to_vec(),
                        start,
                        end,
                        build: build.clone(),
                        mode: config.mode,
                        step,
                        ledgers: ledgers.clone(),
                        index: index.clone(),
                    },
                )?;
            }
        }
    }
    Ok(ledgers)
}

//! Corpus-growth replay with similarity-gain attribution.
//!
//! Each new paragraph is classified, per word pair, by how it relates to the
//! pair: it contains one word, both words, neither word but at least three
//! bridge terms that have already co-occurred with both, or none of these.
//! The space is rebuilt after each paragraph and the change in the pair's
//! cosine is credited to that category.

mod report;
mod trace;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpusio::normalize_word;
use crate::vecspace::SpaceError;

pub use report::{trace_report, trajectory_tsv, PairSummary, TraceReport};
pub use trace::{
    load_checkpoint, run_trace, Checkpoint, Checkpointing, GainLedger, TraceConfig, TraceMode, TrajectoryPoint,
    CHECKPOINT_VERSION, TELESCOPING_TOLERANCE,
};

/// Minimum number of distinct bridge terms for a second-order paragraph.
pub const MIN_BRIDGES: usize = 3;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("window {start}..{end} is invalid for a corpus of {len} paragraphs (need 2 <= start < end <= len)")]
    Window { start: usize, end: usize, len: usize },
    #[error("pair {pair}: `{word}` does not occur in the first {start} paragraphs")]
    MissingWord { pair: String, word: String, start: usize },
    #[error("pair {0}: both words are the same")]
    SameWord(String),
    #[error("no pairs to trace")]
    NoPairs,
    #[error("step {step}: {source}")]
    Space {
        step: usize,
        #[source]
        source: SpaceError,
    },
    #[error("checkpoint {path}: {message}")]
    Checkpoint { path: String, message: String },
    #[error("pairs line {line}: {message}")]
    PairsFormat { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WordPair {
    pub x: String,
    pub y: String,
}

impl WordPair {
    pub fn new(x: &str, y: &str) -> Result<Self, TraceError> {
        let (x, y) = (normalize_word(x), normalize_word(y));
        if x == y {
            return Err(TraceError::SameWord(format!("{x}/{y}")));
        }
        Ok(Self { x, y })
    }
}

impl fmt::Display for WordPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.x, self.y)
    }
}

/// Reads `x<TAB>y` lines.
pub fn parse_pairs(text: &str) -> Result<Vec<WordPair>, TraceError> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [x, y] = cols.as_slice() else {
            return Err(TraceError::PairsFormat {
                line: i + 1,
                message: "expected x<TAB>y".into(),
            });
        };
        pairs.push(WordPair::new(x, y).map_err(|e| TraceError::PairsFormat {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParagraphCategory {
    XOnly,
    YOnly,
    DirectCooc,
    SecondOrder,
    ThirdOrMore,
    /// Stride mode only: the delta of a multi-paragraph stride.
    Mixed,
}

impl ParagraphCategory {
    /// The five categories a single paragraph can fall into.
    pub const EXACT: [ParagraphCategory; 5] = [
        Self::XOnly,
        Self::YOnly,
        Self::DirectCooc,
        Self::SecondOrder,
        Self::ThirdOrMore,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::XOnly => "x_only",
            Self::YOnly => "y_only",
            Self::DirectCooc => "direct_cooc",
            Self::SecondOrder => "second_order",
            Self::ThirdOrMore => "third_or_more",
            Self::Mixed => "mixed",
        }
    }
}

impl fmt::Display for ParagraphCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParagraphCategory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::EXACT
            .into_iter()
            .chain([Self::Mixed])
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category `{s}`"))
    }
}

/// Symmetric "has co-occurred with" relation over the corpus seen so far.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoocIndex {
    cooc: BTreeMap<String, BTreeSet<String>>,
}

impl CoocIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn partners(&self, term: &str) -> Option<&BTreeSet<String>> {
        self.cooc.get(term)
    }

    pub fn have_cooccurred(&self, a: &str, b: &str) -> bool {
        self.cooc.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn len(&self) -> usize {
        self.cooc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cooc.is_empty()
    }

    /// Adds every unordered pair of distinct token types in `tokens`.
    pub fn add_paragraph(&mut self, tokens: &[String]) {
        let types: BTreeSet<&String> = tokens.iter().collect();
        for a in &types {
            for b in &types {
                if a != b {
                    self.cooc.entry((*a).clone()).or_default().insert((*b).clone());
                }
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.cooc
            .iter()
            .all(|(a, set)| set.iter().all(|b| self.have_cooccurred(b, a)))
    }
}

pub fn update_index(idx: &mut CoocIndex, tokens: &[String]) {
    idx.add_paragraph(tokens);
}

/// Distinct terms of `tokens`, other than x and y, that have co-occurred with both.
pub fn bridge_terms<'a>(pair: &WordPair, tokens: &'a [String], idx: &CoocIndex) -> BTreeSet<&'a str> {
    tokens
        .iter()
        .map(String::as_str)
        .filter(|w| *w != pair.x && *w != pair.y)
        .filter(|w| idx.have_cooccurred(w, &pair.x) && idx.have_cooccurred(w, &pair.y))
        .collect()
}

/// `idx` must describe the corpus before `tokens` is appended.
pub fn classify(pair: &WordPair, tokens: &[String], idx: &CoocIndex) -> ParagraphCategory {
    let has_x = tokens.contains(&pair.x);
    let has_y = tokens.contains(&pair.y);
    match (has_x, has_y) {
        (true, true) => ParagraphCategory::DirectCooc,
        (true, false) => ParagraphCategory::XOnly,
        (false, true) => ParagraphCategory::YOnly,
        (false, false) if bridge_terms(pair, tokens, idx).len() >= MIN_BRIDGES => ParagraphCategory::SecondOrder,
        (false, false) => ParagraphCategory::ThirdOrMore,
    }
}

//! Validation protocols run against a semantic space: association norms,
//! similarity judgments, a four-choice vocabulary test and recall scoring.
//!
//! Every protocol reports the items it could not use, with a reason, so that
//! `included + excluded == input`.

mod assoc;
pub mod datasets;
mod judgment;
mod recall;
pub mod stats;
mod vocab;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use assoc::{answer_entropy, assoc_test, AssocFilter, AssocItemResult, AssocNormItem, AssocReport, TierTest};
pub use judgment::{judgment_test, GradeCorrelation, JudgmentItem, JudgmentReport, StoryResult};
pub use recall::{
    recall_correlation, recall_score, RecallGroup, RecallRecord, RecallReport, RecallTask,
};
pub use stats::{Correlation, StatsError, TTest};
pub use vocab::{vocab_test, DefinitionLabel, VocabItem, VocabItemResult, VocabReport};

/// Fewest usable items a protocol will aggregate over.
pub const MIN_VALID_ITEMS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExclusionReason {
    TooFewResponses { found: usize },
    OutOfVocabulary { word: String },
    DegenerateVector { word: String },
    EmptyDefinition { label: DefinitionLabel },
    EmptyProjection { side: String },
    FilteredOut { filter: String },
    StoryTooSmall { valid_pairs: usize },
    GroupTooSmall { records: usize },
}

impl std::fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::TooFewResponses { found } => write!(f, "too few responses ({found})"),
            Self::OutOfVocabulary { word } => write!(f, "out of vocabulary: {word}"),
            Self::DegenerateVector { word } => write!(f, "degenerate vector: {word}"),
            Self::EmptyDefinition { label } => write!(f, "{label} definition has no known word"),
            Self::EmptyProjection { side } => write!(f, "{side} does not project"),
            Self::FilteredOut { filter } => write!(f, "filtered out ({filter})"),
            Self::StoryTooSmall { valid_pairs } => write!(f, "story has {valid_pairs} valid pairs"),
            Self::GroupTooSmall { records } => write!(f, "group has {records} records"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub item: String,
    pub reason: ExclusionReason,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("only {valid} usable items (need {required}); {} excluded", exclusions.len())]
    TooFewItems {
        valid: usize,
        required: usize,
        exclusions: Vec<Exclusion>,
    },
    #[error("invalid item {item}: {message}")]
    InvalidItem { item: String, message: String },
    #[error(transparent)]
    Dataset(#[from] datasets::DatasetError),
}

/// Report of any protocol; JSON is tagged by protocol name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
pub enum EvalReport {
    Assoc(AssocReport),
    Judgment(JudgmentReport),
    Vocab(VocabReport),
    Recall(RecallReport),
}

impl EvalReport {
    pub fn render_text(&self) -> String {
        match self {
            Self::Assoc(r) => r.render_text(),
            Self::Judgment(r) => r.render_text(),
            Self::Vocab(r) => r.render_text(),
            Self::Recall(r) => r.render_text(),
        }
    }

    pub fn exclusions(&self) -> &[Exclusion] {
        match self {
            Self::Assoc(r) => &r.exclusions,
            Self::Judgment(r) => &r.exclusions,
            Self::Vocab(r) => &r.exclusions,
            Self::Recall(r) => &r.exclusions,
        }
    }
}

pub(crate) fn render_exclusions(out: &mut String, exclusions: &[Exclusion]) {
    if exclusions.is_empty() {
        return;
    }
    out.push_str(&format!("\nexcluded ({}):\n", exclusions.len()));
    for e in exclusions {
        out.push_str(&format!("  {:<24} {}\n", e.item, e.reason));
    }
}

pub(crate) fn fmt_p(p: f64) -> String {
    if p < 0.001 {
        "<.001".to_string()
    } else {
        format!("{p:.3}")
    }
}

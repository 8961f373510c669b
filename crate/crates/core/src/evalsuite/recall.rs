use serde::{Deserialize, Serialize};

use super::stats::{self, Correlation, StatsError};
use super::{render_exclusions, fmt_p, Exclusion, ExclusionReason};
use crate::vecspace::{cosine, SemanticSpace, SpaceError};

/// Groups with fewer records are not correlated.
pub const MIN_GROUP_RECORDS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecallTask {
    ImmediateRecall,
    DelayedRecall,
    Summary,
}

impl RecallTask {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ImmediateRecall => "immediate_recall",
            Self::DelayedRecall => "delayed_recall",
            Self::Summary => "summary",
        }
    }
}

impl std::str::FromStr for RecallTask {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Self::ImmediateRecall, Self::DelayedRecall, Self::Summary]
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown recall task `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecallRecord {
    pub text_id: String,
    pub task: RecallTask,
    pub source_tokens: Vec<String>,
    pub protocol_tokens: Vec<String>,
    /// Number of text propositions found in the protocol, scored externally.
    pub propositions_recalled: u32,
}

/// Cosine between the folded-in source text and the folded-in participant protocol.
pub fn recall_score(s: &SemanticSpace, r: &RecallRecord) -> Result<f64, SpaceError> {
    let source = s.fold_in(&r.source_tokens)?;
    let protocol = s.fold_in(&r.protocol_tokens)?;
    cosine(&source.vector, &protocol.vector)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecallGroup {
    pub text_id: String,
    pub task: RecallTask,
    pub scores: Vec<f64>,
    pub propositions: Vec<u32>,
    pub correlation: Result<Correlation, StatsError>,
}

impl RecallGroup {
    pub fn n(&self) -> usize {
        self.scores.len()
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.correlation, Err(StatsError::ZeroVariance))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecallReport {
    pub input_count: usize,
    pub groups: Vec<RecallGroup>,
    pub exclusions: Vec<Exclusion>,
}

/// Per (text, task) group: Pearson r between recall scores and propositions recalled.
pub fn recall_correlation(s: &SemanticSpace, records: &[RecallRecord]) -> RecallReport {
    let mut exclusions = Vec::new();
    let mut groups: Vec<RecallGroup> = Vec::new();
    for (i, r) in records.iter().enumerate() {
        let label = format!("{}/{}#{i}", r.text_id, r.task.as_str());
        let score = match recall_score(s, r) {
            Ok(v) => v,
            Err(e) => {
                let side = match e {
                    SpaceError::EmptyProjection if s.fold_in(&r.source_tokens).is_err() => "source",
                    SpaceError::EmptyProjection => "protocol",
                    _ => "source or protocol (zero vector)",
                };
                exclusions.push(Exclusion {
                    item: label,
                    reason: ExclusionReason::EmptyProjection { side: side.into() },
                });
                continue;
            }
        };
        let group = match groups.iter_mut().position(|g| g.text_id == r.text_id && g.task == r.task) {
            Some(i) => &mut groups[i],
            None => {
                groups.push(RecallGroup {
                    text_id: r.text_id.clone(),
                    task: r.task,
                    scores: Vec::new(),
                    propositions: Vec::new(),
                    correlation: Err(StatsError::Empty),
                });
                groups.last_mut().unwrap()
            }
        };
        group.scores.push(score);
        group.propositions.push(r.propositions_recalled);
    }

    let mut kept = Vec::new();
    for mut g in groups {
        if g.n() < MIN_GROUP_RECORDS {
            for _ in 0..g.n() {
                exclusions.push(Exclusion {
                    item: format!("{}/{}", g.text_id, g.task.as_str()),
                    reason: ExclusionReason::GroupTooSmall { records: g.n() },
                });
            }
            continue;
        }
        let props: Vec<f64> = g.propositions.iter().map(|&p| p as f64).collect();
        g.correlation = stats::pearson(&g.scores, &props);
        kept.push(g);
    }
    RecallReport {
        input_count: records.len(),
        groups: kept,
        exclusions,
    }
}

impl RecallReport {
    pub fn render_text(&self) -> String {
        let mut out = String::from("Recall: correlation between cosines and propositions recalled\n\n");
        out.push_str(&format!("{:<14} {:<18} {:>12} {:>12}\n", "text", "task", "participants", "correlation"));
        for g in &self.groups {
            let r = match &g.correlation {
                Ok(c) => format!("{:.2} (p {})", c.r, fmt_p(c.p)),
                Err(StatsError::ZeroVariance) => "degenerate variance".to_string(),
                Err(e) => e.to_string(),
            };
            out.push_str(&format!("{:<14} {:<18} {:>12} {:>12}\n", g.text_id, g.task.as_str(), g.n(), r));
        }
        render_exclusions(&mut out, &self.exclusions);
        out
    }
}

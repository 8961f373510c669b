use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::trace::{GainLedger, TELESCOPING_TOLERANCE};
use super::{ParagraphCategory, WordPair};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub pair: WordPair,
    pub initial_similarity: f64,
    pub final_similarity: f64,
    pub gains_by_category: BTreeMap<ParagraphCategory, f64>,
    pub event_counts: BTreeMap<ParagraphCategory, usize>,
    pub telescoping_error: f64,
    pub degenerate_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub pairs: Vec<PairSummary>,
    /// Mean gain per category across pairs.
    pub category_means: BTreeMap<ParagraphCategory, f64>,
    pub mean_initial: f64,
    pub mean_final: f64,
    /// Pairs whose words never co-occurred in a traced paragraph.
    pub zero_direct_pairs: usize,
    pub max_telescoping_error: f64,
    pub telescoping_ok: bool,
    pub approximate: bool,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

pub fn trace_report(ledgers: &[GainLedger]) -> TraceReport {
    let approximate = ledgers.iter().any(|l| l.approximate);
    let categories: Vec<ParagraphCategory> = ParagraphCategory::EXACT
        .into_iter()
        .chain(approximate.then_some(ParagraphCategory::Mixed))
        .collect();
    let pairs: Vec<PairSummary> = ledgers
        .iter()
        .map(|l| PairSummary {
            pair: l.pair.clone(),
            initial_similarity: l.initial_similarity,
            final_similarity: l.final_similarity,
            gains_by_category: l.gains_by_category.clone(),
            event_counts: l.event_counts.clone(),
            telescoping_error: l.telescoping_error(),
            degenerate_steps: l.degenerate_steps.len(),
        })
        .collect();
    let category_means = categories
        .iter()
        .map(|&c| (c, mean(ledgers.iter().map(|l| l.gain(c)))))
        .collect();
    let max_telescoping_error = pairs.iter().map(|p| p.telescoping_error).fold(0.0, f64::max);
    TraceReport {
        category_means,
        mean_initial: mean(ledgers.iter().map(|l| l.initial_similarity)),
        mean_final: mean(ledgers.iter().map(|l| l.final_similarity)),
        zero_direct_pairs: ledgers
            .iter()
            .filter(|l| l.events(ParagraphCategory::DirectCooc) == 0)
            .count(),
        telescoping_ok: max_telescoping_error <= TELESCOPING_TOLERANCE,
        max_telescoping_error,
        approximate,
        pairs,
    }
}

/// `step, pair, similarity, category` rows for plotting trajectories.
pub fn trajectory_tsv(ledgers: &[GainLedger]) -> String {
    let mut out = String::from("step\tpair\tsimilarity\tcategory\n");
    for l in ledgers {
        for p in &l.trajectory {
            let cat = p.category.map_or("start", |c| c.as_str());
            out.push_str(&format!("{}\t{}\t{:.9}\t{}\n", p.step, l.pair, p.similarity, cat));
        }
    }
    out
}

impl TraceReport {
    pub fn render_text(&self) -> String {
        let cats: Vec<ParagraphCategory> = self.category_means.keys().copied().collect();
        let mut out = String::from("Similarity gain decomposition by paragraph category\n");
        if self.approximate {
            out.push_str("(stride mode: approximate, stride deltas credited to `mixed`)\n");
        }
        out.push('\n');
        out.push_str(&format!("{:<24} {:>8} {:>8}", "pair", "initial", "final"));
        for c in &cats {
            out.push_str(&format!(" {:>14}", c.as_str()));
        }
        out.push('\n');
        for p in &self.pairs {
            out.push_str(&format!(
                "{:<24} {:>8.3} {:>8.3}",
                p.pair.to_string(),
                p.initial_similarity,
                p.final_similarity
            ));
            for c in &cats {
                let g = p.gains_by_category.get(c).copied().unwrap_or(0.0);
                let n = p.event_counts.get(c).copied().unwrap_or(0);
                out.push_str(&format!(" {:>14}", format!("{g:.3} ({n})")));
            }
            out.push('\n');
        }
        out.push_str(&format!("{:<24} {:>8.3} {:>8.3}", "mean", self.mean_initial, self.mean_final));
        for c in &cats {
            out.push_str(&format!(" {:>14}", format!("{:.3}", self.category_means[c])));
        }
        out.push('\n');
        out.push_str(&format!("\npairs with no direct co-occurrence: {}\n", self.zero_direct_pairs));
        out.push_str(&format!(
            "telescoping check: {} (max error {:.2e})\n",
            if self.telescoping_ok { "PASS" } else { "FAIL" },
            self.max_telescoping_error
        ));
        out
    }
}

use serde::{Deserialize, Serialize};

use super::stats::{self, Correlation, StatsError, TTest};
use super::{render_exclusions, fmt_p, EvalError, Exclusion, ExclusionReason, MIN_VALID_ITEMS};
use crate::vecspace::{SemanticSpace, SpaceError};

/// Responses needed for the top-3 / bottom-3 analysis.
pub const MIN_RESPONSES: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssocNormItem {
    pub stimulus: String,
    /// `(response, relative frequency)`, most frequent first.
    pub responses: Vec<(String, f64)>,
}

impl AssocNormItem {
    /// Sorts responses by descending frequency; equal frequencies keep input order.
    pub fn new(stimulus: impl Into<String>, mut responses: Vec<(String, f64)>) -> Self {
        responses.sort_by(|a, b| b.1.total_cmp(&a.1));
        Self {
            stimulus: stimulus.into(),
            responses,
        }
    }
}

/// Entropy in bits of the observed response distribution, renormalized over
/// the listed responses (unlisted mass is ignored).
pub fn answer_entropy(item: &AssocNormItem) -> Result<f64, EvalError> {
    let invalid = |message: String| EvalError::InvalidItem {
        item: item.stimulus.clone(),
        message,
    };
    if item.responses.is_empty() {
        return Err(invalid("empty response list".into()));
    }
    let freqs: Vec<f64> = item.responses.iter().map(|r| r.1).collect();
    let total: f64 = freqs.iter().sum();
    if total > 1.0 + 1e-9 {
        return Err(invalid(format!("frequencies sum to {total} > 1")));
    }
    stats::shannon_entropy(&freqs).map_err(|e| invalid(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "quantile", rename_all = "snake_case")]
pub enum AssocFilter {
    /// Keep the given share of items whose stimulus has the lowest global weight.
    Weight(f64),
    /// Keep the given share of items with the lowest response entropy.
    Entropy(f64),
}

impl AssocFilter {
    pub fn describe(&self) -> String {
        match self {
            Self::Weight(q) => format!("lowest {:.0}% stimulus weight", q * 100.0),
            Self::Entropy(q) => format!("lowest {:.0}% response entropy", q * 100.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssocResponse {
    pub word: String,
    pub frequency: f64,
    pub cosine: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssocItemResult {
    pub stimulus: String,
    pub stimulus_weight: f64,
    pub entropy: f64,
    /// Three highest-ranked responses.
    pub top: Vec<AssocResponse>,
    /// Three lowest-ranked responses.
    pub bottom: Vec<AssocResponse>,
    pub bottom_mean: f64,
}

impl AssocItemResult {
    /// Rank-1, rank-2, rank-3 and bottom-3 mean cosines.
    pub fn tiers(&self) -> [f64; 4] {
        [self.top[0].cosine, self.top[1].cosine, self.top[2].cosine, self.bottom_mean]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TierTest {
    pub from: String,
    pub to: String,
    pub result: Result<TTest, StatsError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssocReport {
    pub filter: Option<AssocFilter>,
    pub input_count: usize,
    pub items: Vec<AssocItemResult>,
    /// Mean cosine for rank 1, rank 2, rank 3 and the bottom-3 mean.
    pub tier_means: [f64; 4],
    pub tier_tests: Vec<TierTest>,
    /// Frequency vs cosine over every analyzed (stimulus, response) pair.
    pub correlation: Result<Correlation, StatsError>,
    pub exclusions: Vec<Exclusion>,
}

pub const TIER_NAMES: [&str; 4] = ["rank 1", "rank 2", "rank 3", "bottom 3"];

fn pair_cosine(s: &SemanticSpace, a: &str, b: &str) -> Result<f64, ExclusionReason> {
    let va = s.term_vector(a).map_err(|_| ExclusionReason::OutOfVocabulary { word: a.into() })?;
    let vb = s.term_vector(b).map_err(|_| ExclusionReason::OutOfVocabulary { word: b.into() })?;
    crate::vecspace::cosine(va, vb).map_err(|e| match e {
        SpaceError::DegenerateVector if va.iter().all(|x| *x == 0.0) => ExclusionReason::DegenerateVector { word: a.into() },
        _ => ExclusionReason::DegenerateVector { word: b.into() },
    })
}

fn analyze(s: &SemanticSpace, item: &AssocNormItem) -> Result<AssocItemResult, ExclusionReason> {
    let n = item.responses.len();
    if n < MIN_RESPONSES {
        return Err(ExclusionReason::TooFewResponses { found: n });
    }
    let stimulus_weight = s
        .global_weight(&item.stimulus)
        .ok_or_else(|| ExclusionReason::OutOfVocabulary { word: item.stimulus.clone() })?;
    let score = |(word, frequency): &(String, f64)| -> Result<AssocResponse, ExclusionReason> {
        Ok(AssocResponse {
            cosine: pair_cosine(s, &item.stimulus, word)?,
            word: word.clone(),
            frequency: *frequency,
        })
    };
    let top = item.responses[..3].iter().map(score).collect::<Result<Vec<_>, _>>()?;
    let bottom = item.responses[n - 3..].iter().map(score).collect::<Result<Vec<_>, _>>()?;
    let bottom_mean = bottom.iter().map(|r| r.cosine).sum::<f64>() / 3.0;
    let freqs: Vec<f64> = item.responses.iter().map(|r| r.1).collect();
    Ok(AssocItemResult {
        stimulus: item.stimulus.clone(),
        stimulus_weight,
        entropy: stats::shannon_entropy(&freqs).unwrap_or(0.0),
        top,
        bottom,
        bottom_mean,
    })
}

/// Keeps the `q` share (rounded up) of items with the smallest key; ties keep input order.
fn lowest_share(items: Vec<AssocItemResult>, q: f64, key: impl Fn(&AssocItemResult) -> f64, filter: &str, exclusions: &mut Vec<Exclusion>) -> Vec<AssocItemResult> {
    let keep = ((q.clamp(0.0, 1.0) * items.len() as f64).ceil() as usize).min(items.len());
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| key(&items[a]).total_cmp(&key(&items[b])));
    let mut kept = vec![false; items.len()];
    for &i in order.iter().take(keep) {
        kept[i] = true;
    }
    let mut out = Vec::with_capacity(keep);
    for (item, k) in items.into_iter().zip(kept) {
        if k {
            out.push(item);
        } else {
            exclusions.push(Exclusion {
                item: item.stimulus,
                reason: ExclusionReason::FilteredOut { filter: filter.to_string() },
            });
        }
    }
    out
}

/// Compares association norms with stimulus–response cosines.
pub fn assoc_test(s: &SemanticSpace, norms: &[AssocNormItem], filter: Option<AssocFilter>) -> Result<AssocReport, EvalError> {
    let mut exclusions = Vec::new();
    let mut items = Vec::new();
    for item in norms {
        match analyze(s, item) {
            Ok(r) => items.push(r),
            Err(reason) => exclusions.push(Exclusion {
                item: item.stimulus.clone(),
                reason,
            }),
        }
    }
    if let Some(f) = filter {
        let desc = f.describe();
        items = match f {
            AssocFilter::Weight(q) => lowest_share(items, q, |r| r.stimulus_weight, &desc, &mut exclusions),
            AssocFilter::Entropy(q) => lowest_share(items, q, |r| r.entropy, &desc, &mut exclusions),
        };
    }
    if items.len() < MIN_VALID_ITEMS {
        return Err(EvalError::TooFewItems {
            valid: items.len(),
            required: MIN_VALID_ITEMS,
            exclusions,
        });
    }

    let tiers: Vec<[f64; 4]> = items.iter().map(AssocItemResult::tiers).collect();
    let column = |t: usize| tiers.iter().map(|row| row[t]).collect::<Vec<f64>>();
    let tier_means = [0, 1, 2, 3].map(|t| stats::mean(&column(t)).unwrap());
    let tier_tests = (0..3)
        .map(|t| TierTest {
            from: TIER_NAMES[t].to_string(),
            to: TIER_NAMES[t + 1].to_string(),
            result: stats::paired_t_test(&column(t), &column(t + 1)),
        })
        .collect();
    let (freqs, cosines): (Vec<f64>, Vec<f64>) = items
        .iter()
        .flat_map(|r| r.top.iter().chain(&r.bottom))
        .map(|r| (r.frequency, r.cosine))
        .unzip();
    Ok(AssocReport {
        filter,
        input_count: norms.len(),
        correlation: stats::pearson(&freqs, &cosines),
        items,
        tier_means,
        tier_tests,
        exclusions,
    })
}

impl AssocReport {
    pub fn render_text(&self) -> String {
        let mut out = String::from("Association norms: mean cosine with stimulus word\n");
        if let Some(f) = &self.filter {
            out.push_str(&format!("filter: {}\n", f.describe()));
        }
        out.push_str(&format!("items: {} of {}\n\n", self.items.len(), self.input_count));
        out.push_str(&format!("{:<22} {:>12}\n", "responses", "mean cosine"));
        for (name, m) in ["highest-ranked", "2nd highest-ranked", "3rd highest-ranked", "3 lowest-ranked"]
            .iter()
            .zip(self.tier_means)
        {
            out.push_str(&format!("{name:<22} {m:>12.3}\n"));
        }
        out.push_str("\npaired t-tests\n");
        for t in &self.tier_tests {
            match &t.result {
                Ok(r) => out.push_str(&format!(
                    "  {} vs {}: t({}) = {:.3}, p = {}\n",
                    t.from, t.to, r.df, r.t, fmt_p(r.p)
                )),
                Err(e) => out.push_str(&format!("  {} vs {}: {e}\n", t.from, t.to)),
            }
        }
        match &self.correlation {
            Ok(c) => out.push_str(&format!(
                "\nfrequency vs cosine: r({}) = {:.3}, p = {}\n",
                c.n - 2,
                c.r,
                fmt_p(c.p)
            )),
            Err(e) => out.push_str(&format!("\nfrequency vs cosine: {e}\n")),
        }
        render_exclusions(&mut out, &self.exclusions);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        let single = AssocNormItem::new("a", vec![("b".into(), 1.0)]);
        assert_eq!(answer_entropy(&single).unwrap(), 0.0);
        let pair = AssocNormItem::new("a", vec![("b".into(), 0.5), ("c".into(), 0.5)]);
        assert!((answer_entropy(&pair).unwrap() - 1.0).abs() < 1e-12);
        let eau = AssocNormItem::new(
            "eau",
            vec![("boire".into(), 0.22), ("mer".into(), 0.08), ("piscine".into(), 0.07)],
        );
        let want = lsa_oracles::entropy_bits(&[0.22, 0.08, 0.07]);
        assert!((answer_entropy(&eau).unwrap() - want).abs() < 1e-12);
        // frozen value of -Σ p log2 p over (.22, .08, .07)/.37
        assert!((want - 1.378_129_58).abs() < 1e-8, "{want}");
        assert!(answer_entropy(&AssocNormItem::new("x", vec![])).is_err());
        assert!(answer_entropy(&AssocNormItem::new("x", vec![("y".into(), 0.8), ("z".into(), 0.7)])).is_err());
    }

    #[test]
    fn responses_are_sorted_descending() {
        let item = AssocNormItem::new("a", vec![("x".into(), 0.1), ("y".into(), 0.3), ("z".into(), 0.1)]);
        let words: Vec<&str> = item.responses.iter().map(|r| r.0.as_str()).collect();
        assert_eq!(words, ["y", "x", "z"]);
    }
}

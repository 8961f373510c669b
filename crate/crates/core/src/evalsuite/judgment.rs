use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::stats::{self, Correlation, StatsError};
use super::{render_exclusions, fmt_p, Exclusion, ExclusionReason};
use crate::vecspace::SemanticSpace;

/// Five-point rating scale bounds.
pub const RATING_MIN: f64 = 1.0;
pub const RATING_MAX: f64 = 5.0;

/// Stories with fewer usable pairs are left out of the correlations.
pub const MIN_STORY_PAIRS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgmentItem {
    pub story: String,
    pub word_a: String,
    pub word_b: String,
    pub mean_rating_by_grade: BTreeMap<String, f64>,
}

impl JudgmentItem {
    pub fn label(&self) -> String {
        format!("{}:{}-{}", self.story, self.word_a, self.word_b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeCorrelation {
    pub grade: String,
    pub result: Result<Correlation, StatsError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryResult {
    pub story: String,
    pub pairs: usize,
    pub by_grade: Vec<GradeCorrelation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgmentPair {
    pub story: String,
    pub word_a: String,
    pub word_b: String,
    pub cosine: f64,
    pub ratings: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgmentReport {
    pub input_count: usize,
    pub grades: Vec<String>,
    pub pairs: Vec<JudgmentPair>,
    pub stories: Vec<StoryResult>,
    /// Correlation over all included pairs, per grade.
    pub pooled: Vec<GradeCorrelation>,
    /// Mean of the defined per-story r, per grade.
    pub mean_story_r: BTreeMap<String, f64>,
    pub exclusions: Vec<Exclusion>,
    pub notes: Vec<String>,
}

fn correlate(pairs: &[&JudgmentPair], grade: &str) -> Result<Correlation, StatsError> {
    let (x, y): (Vec<f64>, Vec<f64>) = pairs
        .iter()
        .filter_map(|p| p.ratings.get(grade).map(|r| (*r, p.cosine)))
        .unzip();
    stats::pearson(&x, &y)
}

/// Correlates mean similarity ratings with cosines, per story and per grade.
pub fn judgment_test(s: &SemanticSpace, items: &[JudgmentItem]) -> JudgmentReport {
    let mut exclusions = Vec::new();
    let mut notes = Vec::new();
    let mut by_story: Vec<(String, Vec<JudgmentPair>)> = Vec::new();
    let mut grades: Vec<String> = Vec::new();

    for item in items {
        for g in item.mean_rating_by_grade.keys() {
            if !grades.contains(g) {
                grades.push(g.clone());
            }
        }
        let missing = [&item.word_a, &item.word_b].into_iter().find(|w| !s.contains(w));
        if let Some(w) = missing {
            exclusions.push(Exclusion {
                item: item.label(),
                reason: ExclusionReason::OutOfVocabulary { word: w.clone() },
            });
            continue;
        }
        let cosine = match s.similarity(&item.word_a, &item.word_b) {
            Ok(c) => c,
            Err(_) => {
                exclusions.push(Exclusion {
                    item: item.label(),
                    reason: ExclusionReason::DegenerateVector { word: format!("{}/{}", item.word_a, item.word_b) },
                });
                continue;
            }
        };
        let pair = JudgmentPair {
            story: item.story.clone(),
            word_a: item.word_a.clone(),
            word_b: item.word_b.clone(),
            cosine,
            ratings: item.mean_rating_by_grade.clone(),
        };
        match by_story.iter_mut().find(|(st, _)| *st == item.story) {
            Some((_, v)) => v.push(pair),
            None => by_story.push((item.story.clone(), vec![pair])),
        }
    }
    grades.sort();

    let mut pairs = Vec::new();
    let mut stories = Vec::new();
    for (story, story_pairs) in by_story {
        if story_pairs.len() < MIN_STORY_PAIRS {
            notes.push(format!("story {story} excluded: {} valid pairs", story_pairs.len()));
            for p in &story_pairs {
                exclusions.push(Exclusion {
                    item: format!("{}:{}-{}", p.story, p.word_a, p.word_b),
                    reason: ExclusionReason::StoryTooSmall { valid_pairs: story_pairs.len() },
                });
            }
            continue;
        }
        let refs: Vec<&JudgmentPair> = story_pairs.iter().collect();
        let by_grade = grades
            .iter()
            .map(|g| GradeCorrelation { grade: g.clone(), result: correlate(&refs, g) })
            .collect();
        stories.push(StoryResult { story, pairs: story_pairs.len(), by_grade });
        pairs.extend(story_pairs);
    }

    let refs: Vec<&JudgmentPair> = pairs.iter().collect();
    let pooled = grades
        .iter()
        .map(|g| GradeCorrelation { grade: g.clone(), result: correlate(&refs, g) })
        .collect();
    let mean_story_r = grades
        .iter()
        .filter_map(|g| {
            let rs: Vec<f64> = stories
                .iter()
                .filter_map(|st| st.by_grade.iter().find(|x| &x.grade == g))
                .filter_map(|x| x.result.as_ref().ok().map(|c| c.r))
                .collect();
            stats::mean(&rs).map(|m| (g.clone(), m))
        })
        .collect();
    JudgmentReport {
        input_count: items.len(),
        grades,
        pairs,
        stories,
        pooled,
        mean_story_r,
        exclusions,
        notes,
    }
}

fn cell(r: &Result<Correlation, StatsError>) -> String {
    match r {
        Ok(c) => format!("{:.2} (p {})", c.r, fmt_p(c.p)),
        Err(_) => "-".to_string(),
    }
}

impl JudgmentReport {
    pub fn render_text(&self) -> String {
        let mut out = String::from("Similarity judgments: correlation between cosines and mean ratings\n\n");
        out.push_str(&format!("{:<16}", "story"));
        for g in &self.grades {
            out.push_str(&format!("{:>18}", format!("grade {g}")));
        }
        out.push_str(&format!("{:>8}\n", "pairs"));
        for st in &self.stories {
            out.push_str(&format!("{:<16}", st.story));
            for gc in &st.by_grade {
                out.push_str(&format!("{:>18}", cell(&gc.result)));
            }
            out.push_str(&format!("{:>8}\n", st.pairs));
        }
        out.push_str(&format!("{:<16}", "mean"));
        for g in &self.grades {
            let m = self.mean_story_r.get(g).map_or("-".to_string(), |m| format!("{m:.2}"));
            out.push_str(&format!("{m:>18}"));
        }
        out.push('\n');
        out.push_str(&format!("{:<16}", "pooled"));
        for gc in &self.pooled {
            out.push_str(&format!("{:>18}", cell(&gc.result)));
        }
        out.push_str(&format!("{:>8}\n", self.pairs.len()));
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        render_exclusions(&mut out, &self.exclusions);
        out
    }
}

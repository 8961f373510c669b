use serde::{Deserialize, Serialize};

use super::{render_exclusions, EvalError, Exclusion, ExclusionReason};
use crate::vecspace::{cosine, SemanticSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefinitionLabel {
    Correct,
    Close,
    Distant,
    Unrelated,
}

impl DefinitionLabel {
    pub const ALL: [DefinitionLabel; 4] = [Self::Correct, Self::Close, Self::Distant, Self::Unrelated];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Correct => "correct",
            Self::Close => "close",
            Self::Distant => "distant",
            Self::Unrelated => "unrelated",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for DefinitionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DefinitionLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown definition label `{s}`"))
    }
}

/// A test word and its four candidate definitions, in presentation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabItem {
    pub word: String,
    pub definitions: Vec<(DefinitionLabel, Vec<String>)>,
}

impl VocabItem {
    pub fn new(word: impl Into<String>, definitions: Vec<(DefinitionLabel, Vec<String>)>) -> Result<Self, EvalError> {
        let word = word.into();
        for label in DefinitionLabel::ALL {
            let n = definitions.iter().filter(|d| d.0 == label).count();
            if n != 1 {
                return Err(EvalError::InvalidItem {
                    item: word,
                    message: format!("{n} `{label}` definitions (need exactly one)"),
                });
            }
        }
        Ok(Self { word, definitions })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabItemResult {
    pub word: String,
    pub word_weight: f64,
    /// Cosine per label in `DefinitionLabel::ALL` order.
    pub cosines: [f64; 4],
    pub chosen: DefinitionLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabReport {
    pub weight_cap: Option<f64>,
    pub input_count: usize,
    pub items: Vec<VocabItemResult>,
    /// Percentage of items answered with each label, in `DefinitionLabel::ALL` order.
    pub percent_chosen: [f64; 4],
    pub exclusions: Vec<Exclusion>,
}

impl VocabReport {
    pub fn percent(&self, label: DefinitionLabel) -> f64 {
        self.percent_chosen[label.slot()]
    }
}

fn answer(s: &SemanticSpace, item: &VocabItem) -> Result<VocabItemResult, ExclusionReason> {
    let oov = || ExclusionReason::OutOfVocabulary { word: item.word.clone() };
    let wv = s.term_vector(&item.word).map_err(|_| oov())?;
    let word_weight = s.global_weight(&item.word).ok_or_else(oov)?;
    let mut cosines = [0.0; 4];
    for (label, tokens) in &item.definitions {
        let f = s
            .fold_in(tokens)
            .map_err(|_| ExclusionReason::EmptyDefinition { label: *label })?;
        cosines[label.slot()] = cosine(wv, &f.vector).map_err(|_| ExclusionReason::DegenerateVector {
            word: format!("{} / {label} definition", item.word),
        })?;
    }
    // Ties resolve by label order, never by presentation order.
    let mut chosen = DefinitionLabel::Correct;
    for label in DefinitionLabel::ALL {
        if cosines[label.slot()] > cosines[chosen.slot()] {
            chosen = label;
        }
    }
    Ok(VocabItemResult {
        word: item.word.clone(),
        word_weight,
        cosines,
        chosen,
    })
}

/// Picks, for each word, the definition whose folded-in vector is closest.
/// With `weight_cap`, only words whose global weight is below the cap count.
pub fn vocab_test(s: &SemanticSpace, items: &[VocabItem], weight_cap: Option<f64>) -> VocabReport {
    let mut exclusions = Vec::new();
    let mut results = Vec::new();
    for item in items {
        match answer(s, item) {
            Ok(r) => match weight_cap {
                Some(cap) if r.word_weight >= cap => exclusions.push(Exclusion {
                    item: item.word.clone(),
                    reason: ExclusionReason::FilteredOut { filter: format!("weight < {cap}") },
                }),
                _ => results.push(r),
            },
            Err(reason) => exclusions.push(Exclusion {
                item: item.word.clone(),
                reason,
            }),
        }
    }
    let mut percent_chosen = [0.0; 4];
    if !results.is_empty() {
        for r in &results {
            percent_chosen[r.chosen.slot()] += 1.0;
        }
        let n = results.len() as f64;
        percent_chosen.iter_mut().for_each(|p| *p = 100.0 * *p / n);
    }
    VocabReport {
        weight_cap,
        input_count: items.len(),
        items: results,
        percent_chosen,
        exclusions,
    }
}

impl VocabReport {
    pub fn render_text(&self) -> String {
        let mut out = String::from("Vocabulary test: percentage of answers per definition class\n");
        if let Some(cap) = self.weight_cap {
            out.push_str(&format!("restricted to words with weight < {cap}\n"));
        }
        out.push_str(&format!("items: {} of {}\n\n", self.items.len(), self.input_count));
        for label in DefinitionLabel::ALL {
            out.push_str(&format!("{:<10} {:>6.1}%\n", label.as_str(), self.percent(label)));
        }
        render_exclusions(&mut out, &self.exclusions);
        out
    }
}

//! TSV loaders for the evaluation datasets.
//!
//! | dataset   | columns                                                      |
//! |-----------|--------------------------------------------------------------|
//! | norms     | stimulus, response, frequency                                |
//! | judgments | story, word_a, word_b, grade, mean_rating                    |
//! | vocab     | word, label, definition text                                 |
//! | recall    | text_id, task, propositions_recalled, source_path, protocol_path |
//!
//! Blank lines and lines starting with `#` are ignored. Frequencies may be
//! given as fractions (`0.22`) or percentages (`22%`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::assoc::AssocNormItem;
use super::judgment::{JudgmentItem, RATING_MAX, RATING_MIN};
use super::recall::{RecallRecord, RecallTask};
use super::vocab::{DefinitionLabel, VocabItem};
use crate::corpusio::normalize_word;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{what} line {line}: {message}")]
    Format {
        what: &'static str,
        line: usize,
        message: String,
    },
}

fn read(path: &Path) -> Result<String, DatasetError> {
    std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn rows<'a>(text: &'a str, what: &'static str, ncols: usize) -> impl Iterator<Item = Result<(usize, Vec<&'a str>), DatasetError>> + 'a {
    text.lines().enumerate().filter_map(move |(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            return None;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cols.len() != ncols {
            return Some(Err(DatasetError::Format {
                what,
                line: i + 1,
                message: format!("expected {ncols} tab-separated fields, found {}", cols.len()),
            }));
        }
        Some(Ok((i + 1, cols)))
    })
}

fn frequency(s: &str) -> Option<f64> {
    let v = match s.strip_suffix('%') {
        Some(p) => p.trim().parse::<f64>().ok()? / 100.0,
        None => s.parse::<f64>().ok()?,
    };
    (0.0..=1.0).contains(&v).then_some(v)
}

/// Groups response rows by stimulus, keeping first-appearance order of stimuli.
pub fn parse_norms(text: &str) -> Result<Vec<AssocNormItem>, DatasetError> {
    let mut order: Vec<String> = Vec::new();
    let mut grouped: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
    for row in rows(text, "norms", 3) {
        let (line, cols) = row?;
        let f = frequency(cols[2]).ok_or_else(|| DatasetError::Format {
            what: "norms",
            line,
            message: format!("frequency `{}` not in [0, 1]", cols[2]),
        })?;
        let stim = normalize_word(cols[0]);
        if !grouped.contains_key(&stim) {
            order.push(stim.clone());
        }
        grouped.entry(stim).or_default().push((normalize_word(cols[1]), f));
    }
    Ok(order
        .into_iter()
        .map(|s| {
            let responses = grouped.remove(&s).unwrap();
            AssocNormItem::new(s, responses)
        })
        .collect())
}

pub fn parse_judgments(text: &str) -> Result<Vec<JudgmentItem>, DatasetError> {
    let mut items: Vec<JudgmentItem> = Vec::new();
    for row in rows(text, "judgments", 5) {
        let (line, cols) = row?;
        let rating: f64 = cols[4]
            .replace(',', ".")
            .parse()
            .ok()
            .filter(|r| (RATING_MIN..=RATING_MAX).contains(r))
            .ok_or_else(|| DatasetError::Format {
                what: "judgments",
                line,
                message: format!("rating `{}` outside {RATING_MIN}..={RATING_MAX}", cols[4]),
            })?;
        let (story, a, b, grade) = (cols[0].to_string(), normalize_word(cols[1]), normalize_word(cols[2]), cols[3].to_string());
        match items.iter_mut().find(|it| it.story == story && it.word_a == a && it.word_b == b) {
            Some(it) => {
                it.mean_rating_by_grade.insert(grade, rating);
            }
            None => items.push(JudgmentItem {
                story,
                word_a: a,
                word_b: b,
                mean_rating_by_grade: [(grade, rating)].into_iter().collect(),
            }),
        }
    }
    Ok(items)
}

/// Definition texts go through `tokenize` so they match corpus preprocessing.
pub fn parse_vocab(text: &str, tokenize: &dyn Fn(&str) -> Vec<String>) -> Result<Vec<VocabItem>, DatasetError> {
    let mut order: Vec<String> = Vec::new();
    let mut defs: BTreeMap<String, Vec<(DefinitionLabel, Vec<String>)>> = BTreeMap::new();
    let mut first_line: BTreeMap<String, usize> = BTreeMap::new();
    for row in rows(text, "vocab", 3) {
        let (line, cols) = row?;
        let label: DefinitionLabel = cols[1].parse().map_err(|message| DatasetError::Format {
            what: "vocab",
            line,
            message,
        })?;
        let word = normalize_word(cols[0]);
        if !defs.contains_key(&word) {
            order.push(word.clone());
            first_line.insert(word.clone(), line);
        }
        defs.entry(word).or_default().push((label, tokenize(cols[2])));
    }
    order
        .into_iter()
        .map(|w| {
            let d = defs.remove(&w).unwrap();
            let line = first_line[&w];
            VocabItem::new(w, d).map_err(|e| DatasetError::Format {
                what: "vocab",
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Source and protocol paths are resolved against `base`.
pub fn parse_recall(text: &str, base: &Path, tokenize: &dyn Fn(&str) -> Vec<String>) -> Result<Vec<RecallRecord>, DatasetError> {
    let mut out = Vec::new();
    for row in rows(text, "recall", 5) {
        let (line, cols) = row?;
        let err = |message: String| DatasetError::Format { what: "recall", line, message };
        let task: RecallTask = cols[1].parse().map_err(err)?;
        let propositions_recalled: u32 = cols[2]
            .parse()
            .map_err(|_| err(format!("propositions_recalled `{}` is not a nonnegative integer", cols[2])))?;
        let resolve = |p: &str| {
            let p = Path::new(p);
            if p.is_absolute() { p.to_path_buf() } else { base.join(p) }
        };
        out.push(RecallRecord {
            text_id: cols[0].to_string(),
            task,
            source_tokens: tokenize(&read(&resolve(cols[3]))?),
            protocol_tokens: tokenize(&read(&resolve(cols[4]))?),
            propositions_recalled,
        });
    }
    Ok(out)
}

pub fn load_norms(path: &Path) -> Result<Vec<AssocNormItem>, DatasetError> {
    parse_norms(&read(path)?)
}

pub fn load_judgments(path: &Path) -> Result<Vec<JudgmentItem>, DatasetError> {
    parse_judgments(&read(path)?)
}

pub fn load_vocab(path: &Path, tokenize: &dyn Fn(&str) -> Vec<String>) -> Result<Vec<VocabItem>, DatasetError> {
    parse_vocab(&read(path)?, tokenize)
}

pub fn load_recall(path: &Path, tokenize: &dyn Fn(&str) -> Vec<String>) -> Result<Vec<RecallRecord>, DatasetError> {
    let base = path.parent().unwrap_or(Path::new("."));
    parse_recall(&read(path)?, base, tokenize)
}

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::corpusio::{Corpus, ParagraphId};

use super::SpaceError;

#[derive(Debug, Clone, Default)]
pub struct MatrixOptions {
    /// Terms with fewer total occurrences are dropped.
    pub min_count: u64,
    /// Optional stop list applied before counting.
    pub stop_words: Option<HashSet<String>>,
}

impl MatrixOptions {
    pub fn with_min_count(min_count: u64) -> Self {
        Self {
            min_count,
            stop_words: None,
        }
    }
}

/// Sparse term × paragraph occurrence counts, stored column-wise.
///
/// Vocabulary rows are in lexicographic order so that row indices do not
/// depend on hash iteration order.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDocMatrix {
    vocab: Vec<String>,
    index: HashMap<String, usize>,
    columns: Vec<Vec<(u32, u32)>>,
    paragraph_ids: Vec<ParagraphId>,
}

impl TermDocMatrix {
    pub fn from_corpus(c: &Corpus, options: &MatrixOptions) -> Result<Self, SpaceError> {
        Self::from_documents(
            c.paragraphs.iter().map(|p| (p.id, p.tokens.as_slice())),
            options,
        )
    }

    pub fn from_documents<'a, I>(docs: I, options: &MatrixOptions) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (ParagraphId, &'a [String])>,
    {
        let min_count = options.min_count.max(1);
        let mut totals: BTreeMap<&'a str, u64> = BTreeMap::new();
        let mut docs_kept: Vec<(ParagraphId, &'a [String])> = Vec::new();
        for (id, tokens) in docs {
            for t in tokens {
                if options.stop_words.as_ref().is_some_and(|s| s.contains(t)) {
                    continue;
                }
                *totals.entry(t.as_str()).or_insert(0) += 1;
            }
            docs_kept.push((id, tokens));
        }
        if docs_kept.is_empty() {
            return Err(SpaceError::EmptyCorpus);
        }
        let vocab: Vec<String> = totals
            .into_iter()
            .filter(|&(_, n)| n >= min_count)
            .map(|(t, _)| t.to_string())
            .collect();
        if vocab.is_empty() {
            return Err(SpaceError::EmptyVocabulary { min_count });
        }
        let index: HashMap<String, usize> =
            vocab.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();

        let mut columns = Vec::with_capacity(docs_kept.len());
        let mut paragraph_ids = Vec::with_capacity(docs_kept.len());
        for (id, tokens) in docs_kept {
            let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
            for t in tokens {
                if let Some(&row) = index.get(t) {
                    *counts.entry(row as u32).or_insert(0) += 1;
                }
            }
            columns.push(counts.into_iter().collect());
            paragraph_ids.push(id);
        }
        Ok(Self {
            vocab,
            index,
            columns,
            paragraph_ids,
        })
    }

    pub fn n_terms(&self) -> usize {
        self.vocab.len()
    }

    pub fn n_docs(&self) -> usize {
        self.columns.len()
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn row_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn paragraph_ids(&self) -> &[ParagraphId] {
        &self.paragraph_ids
    }

    /// Non-zero `(row, count)` entries of one paragraph, sorted by row.
    pub fn column(&self, doc: usize) -> &[(u32, u32)] {
        &self.columns[doc]
    }

    pub fn count(&self, term: &str, doc: usize) -> u32 {
        let Some(row) = self.row_of(term) else { return 0 };
        self.columns[doc]
            .binary_search_by_key(&(row as u32), |&(r, _)| r)
            .map_or(0, |i| self.columns[doc][i].1)
    }
}

/// Counts occurrences of every term in every paragraph.
pub fn build_matrix(c: &Corpus, min_count: u64) -> Result<TermDocMatrix, SpaceError> {
    TermDocMatrix::from_corpus(c, &MatrixOptions::with_min_count(min_count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpusio::{AgeLevel, Manifest, Paragraph, SourceCategory};

    pub(crate) fn corpus(docs: &[&str]) -> Corpus {
        Corpus {
            paragraphs: docs
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let tokens: Vec<String> = d.split_whitespace().map(String::from).collect();
                    Paragraph {
                        id: ParagraphId { source: 0, index: i as u32 },
                        sentence_lengths: vec![tokens.len()],
                        tokens,
                        category: SourceCategory::Stories,
                        level: AgeLevel::new(1).unwrap(),
                        readability: None,
                    }
                })
                .collect(),
            manifest: Manifest::default(),
        }
    }

    #[test]
    fn single_paragraph_counts() {
        let m = build_matrix(&corpus(&["a b a"]), 1).unwrap();
        assert_eq!(m.count("a", 0), 2);
        assert_eq!(m.count("b", 0), 1);
        let m = build_matrix(&corpus(&["a b a"]), 2).unwrap();
        assert_eq!(m.vocab(), ["a"]);
    }

    #[test]
    fn matches_hash_map_count() {
        let docs = ["le chat dort le", "le chien mange", "chat chien chat"];
        let m = build_matrix(&corpus(&docs), 1).unwrap();
        for (j, d) in docs.iter().enumerate() {
            let mut hand: HashMap<&str, u32> = HashMap::new();
            for t in d.split_whitespace() {
                *hand.entry(t).or_default() += 1;
            }
            for term in m.vocab() {
                assert_eq!(m.count(term, j), hand.get(term.as_str()).copied().unwrap_or(0));
            }
        }
        assert_eq!(m.n_docs(), 3);
        assert_eq!(m.n_terms(), 5);
    }

    #[test]
    fn empty_corpus_is_error() {
        assert!(matches!(build_matrix(&corpus(&[]), 1), Err(SpaceError::EmptyCorpus)));
    }

    #[test]
    fn stop_words_are_dropped() {
        let opts = MatrixOptions {
            min_count: 1,
            stop_words: Some(["le".to_string()].into_iter().collect()),
        };
        let m = TermDocMatrix::from_corpus(&corpus(&["le chat", "le chien"]), &opts).unwrap();
        assert_eq!(m.vocab(), ["chat", "chien"]);
    }
}

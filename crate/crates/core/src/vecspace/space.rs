use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::svd::{truncated_svd, Solver};
use super::weighting::{TermStats, WeightedMatrix, Weighting};
use super::SpaceError;

/// How term vectors are derived from the left singular vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// Rows of `U_k Σ_k`.
    #[default]
    Sigma,
    /// Rows of `U_k`.
    None,
}

impl std::str::FromStr for Scaling {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sigma" => Ok(Self::Sigma),
            "none" => Ok(Self::None),
            other => Err(format!("unknown scaling `{other}` (sigma|none)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub k: usize,
    pub min_count: u64,
    pub seed: u64,
    pub scaling: Scaling,
    pub weighting: Weighting,
    pub solver: Solver,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            k: 300,
            min_count: 2,
            seed: 0,
            scaling: Scaling::Sigma,
            weighting: Weighting::LogEntropy,
            solver: Solver::Auto,
        }
    }
}

/// Inclusive band on global weight used to filter eligible terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightBand {
    pub min: f64,
    pub max: f64,
}

impl WeightBand {
    pub const ALL: WeightBand = WeightBand { min: 0.0, max: 1.0 };

    pub fn contains(&self, g: f64) -> bool {
        self.min <= g && g <= self.max
    }
}

impl Default for WeightBand {
    fn default() -> Self {
        Self::ALL
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Probe<'a> {
    Term(&'a str),
    Vector(&'a [f64]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldIn {
    pub vector: Vec<f64>,
    /// Share of the text's tokens that were found in the vocabulary.
    pub coverage: f64,
}

/// An immutable LSA space: one k-dimensional vector per vocabulary term.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticSpace {
    pub(crate) vocab: Vec<String>,
    pub(crate) index: HashMap<String, usize>,
    pub(crate) vectors: Vec<f64>,
    pub(crate) singular_values: Vec<f64>,
    pub(crate) term_stats: Vec<TermStats>,
    pub(crate) config: BuildConfig,
    pub(crate) n_docs: u64,
}

pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64, SpaceError> {
    if a.len() != b.len() {
        return Err(SpaceError::DimensionMismatch(a.len(), b.len()));
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 || !(na.is_finite() && nb.is_finite()) {
        return Err(SpaceError::DegenerateVector);
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}

/// Decomposes a weighted matrix and assembles the space.
pub fn truncated_svd_space(w: &WeightedMatrix, config: &BuildConfig) -> Result<SemanticSpace, SpaceError> {
    let svd = truncated_svd(w, config.k, config.seed, config.solver)?;
    let k = config.k;
    let mut vectors = Vec::with_capacity(w.n_terms * k);
    for i in 0..w.n_terms {
        for j in 0..k {
            let u = svd.u[(i, j)];
            vectors.push(match config.scaling {
                Scaling::Sigma => u * svd.singular_values[j],
                Scaling::None => u,
            });
        }
    }
    let vocab: Vec<String> = w.stats.iter().map(|s| s.term.clone()).collect();
    Ok(SemanticSpace {
        index: vocab.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect(),
        vocab,
        vectors,
        singular_values: svd.singular_values,
        term_stats: w.stats.clone(),
        config: config.clone(),
        n_docs: w.n_docs() as u64,
    })
}

impl SemanticSpace {
    pub fn k(&self) -> usize {
        self.singular_values.len()
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn term_stats(&self) -> &[TermStats] {
        &self.term_stats
    }

    pub fn config(&self) -> &BuildConfig {
        &self.config
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn stats(&self, word: &str) -> Option<&TermStats> {
        self.index.get(word).map(|&i| &self.term_stats[i])
    }

    pub fn global_weight(&self, word: &str) -> Option<f64> {
        self.stats(word).map(|s| s.global_weight)
    }

    fn row(&self, i: usize) -> &[f64] {
        let k = self.k();
        &self.vectors[i * k..(i + 1) * k]
    }

    pub fn term_vector(&self, word: &str) -> Result<&[f64], SpaceError> {
        self.index
            .get(word)
            .map(|&i| self.row(i))
            .ok_or_else(|| SpaceError::UnknownWord(word.to_string()))
    }

    pub fn similarity(&self, a: &str, b: &str) -> Result<f64, SpaceError> {
        cosine(self.term_vector(a)?, self.term_vector(b)?)
    }

    /// Top-`n` terms by cosine to `probe` among terms whose global weight lies
    /// in `band`. The probe term itself and zero vectors are excluded; ties
    /// are broken by term order.
    pub fn neighbors(&self, probe: Probe<'_>, n: usize, band: WeightBand) -> Result<Vec<(String, f64)>, SpaceError> {
        let (vector, skip) = match probe {
            Probe::Term(t) => (self.term_vector(t)?, self.index.get(t).copied()),
            Probe::Vector(v) => (v, None),
        };
        let mut scored: Vec<(usize, f64)> = Vec::new();
        for i in 0..self.vocab.len() {
            if Some(i) == skip || !band.contains(self.term_stats[i].global_weight) {
                continue;
            }
            match cosine(vector, self.row(i)) {
                Ok(c) => scored.push((i, c)),
                Err(SpaceError::DegenerateVector) => continue,
                Err(e) => return Err(e),
            }
        }
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| self.vocab[a.0].cmp(&self.vocab[b.0])));
        Ok(scored
            .into_iter()
            .take(n)
            .map(|(i, c)| (self.vocab[i].clone(), c))
            .collect())
    }

    pub fn fold_in(&self, tokens: &[String]) -> Result<FoldIn, SpaceError> {
        fold_in(self, tokens)
    }
}

/// Projects a token list as `Σ log2(tf + 1) × G(t) × vector(t)` over its in-vocabulary terms.
pub fn fold_in(s: &SemanticSpace, tokens: &[String]) -> Result<FoldIn, SpaceError> {
    let mut tf: BTreeMap<usize, u32> = BTreeMap::new();
    let mut covered = 0usize;
    for t in tokens {
        if let Some(&i) = s.index.get(t) {
            *tf.entry(i).or_insert(0) += 1;
            covered += 1;
        }
    }
    if tf.is_empty() {
        return Err(SpaceError::EmptyProjection);
    }
    let mut vector = vec![0.0; s.k()];
    for (i, count) in tf {
        let w = (count as f64 + 1.0).log2() * s.term_stats[i].global_weight;
        for (acc, x) in vector.iter_mut().zip(s.row(i)) {
            *acc += w * x;
        }
    }
    Ok(FoldIn {
        vector,
        coverage: covered as f64 / tokens.len() as f64,
    })
}

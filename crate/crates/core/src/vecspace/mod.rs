//! Semantic space construction and queries.

mod format;
mod matrix;
mod space;
pub mod svd;
mod weighting;

use thiserror::Error;

pub use format::{load_space, save_space, FormatError, FORMAT_VERSION, MAGIC};
pub use matrix::{build_matrix, MatrixOptions, TermDocMatrix};
pub use space::{
    cosine, fold_in, truncated_svd_space, BuildConfig, FoldIn, Probe, Scaling, SemanticSpace,
    WeightBand,
};
pub use svd::Solver;
pub use weighting::{entropy_global_weight, log_entropy_weight, TermStats, WeightedMatrix, Weighting};

use crate::corpusio::Corpus;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("no term reaches min_count {min_count}")]
    EmptyVocabulary { min_count: u64 },
    #[error("k = {k} out of range 1..={max}")]
    RankOutOfRange { k: usize, max: usize },
    #[error("SVD did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("degenerate vector")]
    DegenerateVector,
    #[error("vector lengths differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("empty projection: no token of the text is in the vocabulary")]
    EmptyProjection,
}

/// Counts, weights and decomposes a corpus in one call.
pub fn build_space(c: &Corpus, options: &MatrixOptions, config: &BuildConfig) -> Result<SemanticSpace, SpaceError> {
    let m = TermDocMatrix::from_corpus(c, options)?;
    let w = log_entropy_weight(&m);
    let mut config = config.clone();
    config.min_count = options.min_count.max(1);
    truncated_svd_space(&w, &config)
}

use serde::{Deserialize, Serialize};

use super::matrix::TermDocMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    #[default]
    LogEntropy,
}

impl std::str::FromStr for Weighting {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log-entropy" | "log_entropy" => Ok(Self::LogEntropy),
            other => Err(format!("unsupported weighting `{other}` (log-entropy)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermStats {
    pub term: String,
    pub tf_total: u64,
    pub df: u64,
    /// Entropy global weight in [0, 1]: 1 for a term confined to one
    /// paragraph, 0 for a term spread evenly over all paragraphs.
    pub global_weight: f64,
}

/// Column-wise sparse matrix of `log2(count + 1) × G(term)` cells.
#[derive(Debug, Clone)]
pub struct WeightedMatrix {
    pub n_terms: usize,
    pub columns: Vec<Vec<(u32, f64)>>,
    pub stats: Vec<TermStats>,
}

impl WeightedMatrix {
    pub fn n_docs(&self) -> usize {
        self.columns.len()
    }

    /// Dense row-major copy, `n_terms × n_docs`.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n_terms, self.n_docs());
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m[(i as usize, j)] = v;
            }
        }
        m
    }
}

/// `G(t) = 1 + Σ_p p_tp log2(p_tp) / log2(n_docs)` with `p_tp = count_tp / tf_total`.
pub fn entropy_global_weight<I: IntoIterator<Item = u64>>(counts: I, n_docs: usize) -> f64 {
    let counts: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
    let total: u64 = counts.iter().sum();
    if total == 0 || n_docs <= 1 {
        return 1.0;
    }
    let total = total as f64;
    let plogp: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log2()
        })
        .sum();
    (1.0 + plogp / (n_docs as f64).log2()).clamp(0.0, 1.0)
}

pub fn log_entropy_weight(m: &TermDocMatrix) -> WeightedMatrix {
    let n_terms = m.n_terms();
    let n_docs = m.n_docs();
    let mut per_term: Vec<Vec<u64>> = vec![Vec::new(); n_terms];
    for j in 0..n_docs {
        for &(row, c) in m.column(j) {
            per_term[row as usize].push(c as u64);
        }
    }
    let stats: Vec<TermStats> = per_term
        .iter()
        .zip(m.vocab())
        .map(|(counts, term)| TermStats {
            term: term.clone(),
            tf_total: counts.iter().sum(),
            df: counts.len() as u64,
            global_weight: entropy_global_weight(counts.iter().copied(), n_docs),
        })
        .collect();
    let columns = (0..n_docs)
        .map(|j| {
            m.column(j)
                .iter()
                .map(|&(row, c)| (row, (c as f64 + 1.0).log2() * stats[row as usize].global_weight))
                .collect()
        })
        .collect();
    WeightedMatrix {
        n_terms,
        columns,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_document_term_has_full_weight() {
        assert_eq!(entropy_global_weight([5, 0, 0, 0], 4), 1.0);
    }

    #[test]
    fn uniform_term_has_zero_weight() {
        assert!(entropy_global_weight([3, 3, 3, 3], 4).abs() < 1e-12);
    }

    #[test]
    fn two_of_four_documents() {
        // 1 + (0.5 log2 0.5 + 0.5 log2 0.5) / log2 4 = 1 - 1/2
        assert!((entropy_global_weight([2, 2, 0, 0], 4) - 0.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn weight_bounds(counts in prop::collection::vec(0u64..20, 2..12)) {
            prop_assume!(counts.iter().any(|&c| c > 0));
            let g = entropy_global_weight(counts.iter().copied(), counts.len());
            prop_assert!((0.0..=1.0).contains(&g));
            let nz = counts.iter().filter(|&&c| c > 0).count();
            if nz == 1 {
                prop_assert_eq!(g, 1.0);
            }
            let first = counts[0];
            if counts.iter().all(|&c| c == first) {
                prop_assert!(g < 1e-12);
            } else {
                prop_assert!(g > 1e-12);
            }
        }
    }
}

//! Truncated SVD of the weighted term × paragraph matrix.
//!
//! Small and medium matrices go through a dense bidiagonal SVD. Large ones
//! use a seeded randomized range finder (Gaussian sketch, subspace power
//! iterations, re-orthonormalization by QR) followed by a dense SVD of the
//! projected matrix.

use nalgebra::{DMatrix, SVD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::weighting::WeightedMatrix;
use super::SpaceError;

/// Dense path is used when `terms × paragraphs` is at most this many cells.
pub const DENSE_CELL_LIMIT: usize = 4_000_000;

const DENSE_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
#[derive(Default)]
pub enum Solver {
    #[default]
    Auto,
    Dense,
    Randomized { oversample: usize, power_iterations: usize },
}


impl Solver {
    pub const DEFAULT_RANDOMIZED: Solver = Solver::Randomized {
        oversample: 20,
        power_iterations: 4,
    };
}

impl std::str::FromStr for Solver {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "dense" => Ok(Self::Dense),
            "randomized" => Ok(Self::DEFAULT_RANDOMIZED),
            other => Err(format!("unknown solver `{other}` (auto|dense|randomized)")),
        }
    }
}

/// Left singular vectors (`terms × k`) and singular values, descending.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
}

pub fn truncated_svd(
    a: &WeightedMatrix,
    k: usize,
    seed: u64,
    solver: Solver,
) -> Result<TruncatedSvd, SpaceError> {
    let (m, n) = (a.n_terms, a.n_docs());
    let max_k = m.min(n);
    if k == 0 || k > max_k {
        return Err(SpaceError::RankOutOfRange { k, max: max_k });
    }
    let solver = match solver {
        Solver::Auto if m.saturating_mul(n) <= DENSE_CELL_LIMIT => Solver::Dense,
        Solver::Auto => Solver::DEFAULT_RANDOMIZED,
        s => s,
    };
    let mut out = match solver {
        Solver::Dense | Solver::Auto => dense_svd(a.to_dense(), k)?,
        Solver::Randomized {
            oversample,
            power_iterations,
        } => randomized_svd(a, k, oversample, power_iterations, seed)?,
    };
    canonicalize_signs(&mut out.u);
    Ok(out)
}

fn dense_svd(a: DMatrix<f64>, k: usize) -> Result<TruncatedSvd, SpaceError> {
    let svd = SVD::try_new(a, true, false, f64::EPSILON, DENSE_MAX_ITERATIONS).ok_or(
        SpaceError::NoConvergence {
            iterations: DENSE_MAX_ITERATIONS,
        },
    )?;
    let u = svd.u.expect("left singular vectors requested");
    Ok(TruncatedSvd {
        u: u.columns(0, k).into_owned(),
        singular_values: svd.singular_values.iter().take(k).map(|s| s.max(0.0)).collect(),
    })
}

/// `A · X` for a dense `X` with `n_docs` rows.
fn mul(a: &WeightedMatrix, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(a.n_terms, x.ncols());
    for (j, col) in a.columns.iter().enumerate() {
        for &(i, v) in col {
            for c in 0..x.ncols() {
                y[(i as usize, c)] += v * x[(j, c)];
            }
        }
    }
    y
}

/// `Aᵀ · Y` for a dense `Y` with `n_terms` rows.
fn mul_t(a: &WeightedMatrix, y: &DMatrix<f64>) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(a.n_docs(), y.ncols());
    for (j, col) in a.columns.iter().enumerate() {
        for &(i, v) in col {
            for c in 0..y.ncols() {
                x[(j, c)] += v * y[(i as usize, c)];
            }
        }
    }
    x
}

fn orthonormal_basis(y: DMatrix<f64>) -> DMatrix<f64> {
    y.qr().q()
}

fn randomized_svd(
    a: &WeightedMatrix,
    k: usize,
    oversample: usize,
    power_iterations: usize,
    seed: u64,
) -> Result<TruncatedSvd, SpaceError> {
    let l = (k + oversample).min(a.n_terms.min(a.n_docs()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = DMatrix::from_fn(a.n_docs(), l, |_, _| StandardNormal.sample(&mut rng));
    let mut q = orthonormal_basis(mul(a, &omega));
    for _ in 0..power_iterations {
        let z = orthonormal_basis(mul_t(a, &q));
        q = orthonormal_basis(mul(a, &z));
    }
    // B = Qᵀ A is l × n_docs; its left singular vectors lift back through Q.
    let b = mul_t(a, &q).transpose();
    let small = dense_svd(b, k)?;
    Ok(TruncatedSvd {
        u: &q * small.u,
        singular_values: small.singular_values,
    })
}

/// Flips each singular vector so its largest-magnitude entry is positive.
fn canonicalize_signs(u: &mut DMatrix<f64>) {
    for mut col in u.column_iter_mut() {
        let mut best = 0usize;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > col[best].abs() {
                best = i;
            }
        }
        if col[best] < 0.0 {
            col.neg_mut();
        }
    }
}

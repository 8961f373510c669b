//! Pearson correlation, paired t-test and Shannon entropy.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatsError {
    #[error("samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {required} observations, got {n}")]
    TooFew { n: usize, required: usize },
    #[error("degenerate variance")]
    ZeroVariance,
    #[error("probabilities must be finite and nonnegative")]
    InvalidProbability,
    #[error("empty distribution")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    pub n: usize,
    /// Two-tailed p-value from the t distribution with n − 2 degrees of freedom.
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
    pub p: f64,
}

pub fn mean(x: &[f64]) -> Option<f64> {
    (!x.is_empty()).then(|| x.iter().sum::<f64>() / x.len() as f64)
}

fn two_tailed_p(t: f64, df: usize) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df > 0");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooFew { n, required: 3 });
    }
    let mx = mean(x).unwrap();
    let my = mean(y).unwrap();
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = n - 2;
    let p = if r.abs() >= 1.0 {
        0.0
    } else {
        two_tailed_p(r * (df as f64 / (1.0 - r * r)).sqrt(), df)
    };
    Ok(Correlation { r, n, p })
}

/// Paired t-test on `a − b`. Identical samples give `t = 0, p = 1`; a
/// constant non-zero difference has no variance and is reported as degenerate.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTest, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 2 {
        return Err(StatsError::TooFew { n, required: 2 });
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let md = mean(&d).unwrap();
    let var = d.iter().map(|x| (x - md).powi(2)).sum::<f64>() / (n - 1) as f64;
    let df = n - 1;
    if var <= 0.0 {
        return if md == 0.0 {
            Ok(TTest { t: 0.0, df, p: 1.0 })
        } else {
            Err(StatsError::ZeroVariance)
        };
    }
    let t = md / (var / n as f64).sqrt();
    Ok(TTest { t, df, p: two_tailed_p(t, df) })
}

/// Shannon entropy in bits of `weights` after normalizing them to sum to 1.
pub fn shannon_entropy(weights: &[f64]) -> Result<f64, StatsError> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(StatsError::InvalidProbability);
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(StatsError::Empty);
    }
    let h = -weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            p * p.log2()
        })
        .sum::<f64>();
    Ok(h.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_linear_relation() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let c = pearson(&x, &y).unwrap();
        assert!((c.r - 1.0).abs() < 1e-12);
        assert_eq!(c.p, 0.0);
        assert_eq!(c.n, 5);
    }

    #[test]
    fn textbook_dataset_matches_independent_formula() {
        // hours studied vs exam score, five students
        let x = [2.0, 4.0, 6.0, 8.0, 10.0];
        let y = [65.0, 70.0, 78.0, 85.0, 88.0];
        let want = lsa_oracles::pearson_r(&x, &y);
        let c = pearson(&x, &y).unwrap();
        assert!((c.r - want).abs() < 1e-9);
        // frozen from the deviation formula: sxy = 122, sxx = 40, syy = 378.8
        assert!((c.r - 122.0 / (40.0f64 * 378.8).sqrt()).abs() < 1e-12);
        assert!(c.p < 0.01);
    }

    #[test]
    fn p_value_for_known_case() {
        // r = 0.5 with n = 12: t = 0.5*sqrt(10/0.75) = 1.8257, two-tailed p ≈ 0.0979
        let t = 0.5 * (10.0f64 / 0.75).sqrt();
        assert!((two_tailed_p(t, 10) - 0.0979).abs() < 5e-4);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(StatsError::ZeroVariance));
        assert!(matches!(pearson(&[1.0, 2.0], &[1.0, 2.0]), Err(StatsError::TooFew { .. })));
        assert!(matches!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]), Err(StatsError::LengthMismatch(3, 2))));
        assert_eq!(paired_t_test(&[1.0, 2.0], &[0.0, 1.0]), Err(StatsError::ZeroVariance));
    }

    #[test]
    fn identical_samples_t_test() {
        let a = [0.3, 0.1, 0.7, 0.2];
        assert_eq!(paired_t_test(&a, &a).unwrap(), TTest { t: 0.0, df: 3, p: 1.0 });
    }

    #[test]
    fn paired_t_known_value() {
        // differences 1, 2, 3: mean 2, sd 1, t = 2 / (1/sqrt 3) = 3.4641
        let t = paired_t_test(&[2.0, 4.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((t.t - 12f64.sqrt()).abs() < 1e-12);
        assert_eq!(t.df, 2);
        assert!((t.p - 0.0742).abs() < 1e-3);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(shannon_entropy(&[1.0]).unwrap(), 0.0);
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-12);
        assert!(shannon_entropy(&[]).is_err());
        assert!(shannon_entropy(&[-0.1, 0.5]).is_err());
    }

    proptest! {
        #[test]
        fn entropy_maximal_for_uniform(w in prop::collection::vec(0.01f64..1.0, 1..10)) {
            let h = shannon_entropy(&w).unwrap();
            let uniform = shannon_entropy(&vec![1.0; w.len()]).unwrap();
            prop_assert!(h <= uniform + 1e-12);
            prop_assert!((uniform - (w.len() as f64).log2()).abs() < 1e-12);
            prop_assert!((h - lsa_oracles::entropy_bits(&w)).abs() < 1e-12);
        }
    }
}

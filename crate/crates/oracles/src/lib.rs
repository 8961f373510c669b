//! Slow, independent reference computations for tests.
//!
//! Nothing here shares code with `lsa-core`; every routine is written from
//! the textbook definition so it can be used to freeze expected values.

pub type Dense = Vec<Vec<f64>>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b) / (norm(a) * norm(b))
}

fn transpose(a: &Dense) -> Dense {
    let (m, n) = (a.len(), a[0].len());
    (0..n).map(|j| (0..m).map(|i| a[i][j]).collect()).collect()
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Returns `(singular_values, u)` with singular values in descending order and
/// `u` stored row-major as `m × min(m, n)`.
pub fn jacobi_svd(a: &Dense) -> (Vec<f64>, Dense) {
    let m = a.len();
    let n = a[0].len();
    if m < n {
        // Aᵀ J = W  =>  A = J Σ Wᵀ/Σ, so J holds the left singular vectors of A.
        let at = transpose(a);
        let (w, j) = orthogonalize_columns(&at);
        return finish(&w, |i, c| j[i][c], m, m);
    }
    let (w, _) = orthogonalize_columns(a);
    finish(&w, |_, _| 0.0, m, n)
}

/// Rotates column pairs until all columns are mutually orthogonal.
/// Returns the rotated matrix (row-major) and the accumulated rotation.
fn orthogonalize_columns(a: &Dense) -> (Dense, Dense) {
    let m = a.len();
    let n = a[0].len();
    let mut cols: Dense = transpose(a);
    let mut rot: Dense = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..200 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let rel = gamma.abs() / (alpha * beta).sqrt();
                off = off.max(rel);
                if rel < 1e-15 {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    cols[p][i] = c * x - s * y;
                    cols[q][i] = s * x + c * y;
                }
                for r in rot.iter_mut() {
                    let (x, y) = (r[p], r[q]);
                    r[p] = c * x - s * y;
                    r[q] = s * x + c * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    (transpose(&cols), rot)
}

fn finish<F: Fn(usize, usize) -> f64>(w: &Dense, left: F, m: usize, r: usize) -> (Vec<f64>, Dense) {
    let n = w[0].len();
    let mut order: Vec<(usize, f64)> = (0..n)
        .map(|j| (j, (0..w.len()).map(|i| w[i][j] * w[i][j]).sum::<f64>().sqrt()))
        .collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let sigma: Vec<f64> = order.iter().take(r.min(n)).map(|o| o.1).collect();
    let u: Dense = if w.len() == m && r == n {
        // columns of W are U Σ
        (0..m)
            .map(|i| order.iter().take(r).map(|&(j, s)| if s > 0.0 { w[i][j] / s } else { 0.0 }).collect())
            .collect()
    } else {
        (0..m).map(|i| order.iter().take(r).map(|&(j, _)| left(i, j)).collect()).collect()
    };
    (sigma, u)
}

/// Rows of `U_k Σ_k` from the Jacobi oracle.
pub fn scaled_term_vectors(a: &Dense, k: usize) -> Dense {
    let (s, u) = jacobi_svd(a);
    u.iter().map(|row| (0..k).map(|j| row[j] * s[j]).collect()).collect()
}

/// Textbook Pearson r via the two-pass deviation formula.
pub fn pearson_r(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

/// Shannon entropy in bits of an unnormalized nonnegative weight list.
pub fn entropy_bits(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    -weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Long-horizon power iteration with an optional clamped node. The free
/// nodes are rescaled so the largest of them is 1.
pub fn clamped_power_iteration(w: &Dense, clamp: Option<usize>, iterations: usize) -> Vec<f64> {
    let n = w.len();
    let mut a = vec![1.0; n];
    for _ in 0..iterations {
        let mut next: Vec<f64> = (0..n).map(|i| dot(&w[i], &a)).collect();
        if let Some(c) = clamp {
            next[c] = 0.0;
        }
        let max = next.iter().cloned().fold(0.0, f64::max);
        if max > 0.0 {
            next.iter_mut().for_each(|x| *x /= max);
        }
        if let Some(c) = clamp {
            next[c] = 1.0;
        }
        a = next;
    }
    a
}

/// Deterministic xorshift generator for building fixtures without extra deps.
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1)
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal via Box–Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.unit().max(f64::MIN_POSITIVE);
        let u2 = self.unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

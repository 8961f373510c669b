use std::fmt;

use serde::{Deserialize, Serialize};

use super::Proposition;
use crate::vecspace::cosine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Text,
    Associate,
    CarriedOver,
    EpisodicRecall,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Payload {
    Term(String),
    Proposition(Proposition),
}

/// Identity of a node across cycles: propositions and terms never collide.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeKey {
    pub label: String,
    pub is_proposition: bool,
}

impl Payload {
    pub fn label(&self) -> String {
        match self {
            Self::Term(t) => t.clone(),
            Self::Proposition(p) => p.to_string(),
        }
    }

    pub fn key(&self) -> NodeKey {
        NodeKey {
            label: self.label(),
            is_proposition: matches!(self, Self::Proposition(_)),
        }
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkNode {
    pub payload: Payload,
    pub vector: Vec<f64>,
    pub origin: Origin,
}

/// Dense symmetric link weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkMatrix {
    n: usize,
    weights: Vec<f64>,
}

impl LinkMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "link matrix must be square");
        Self {
            n,
            weights: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.weights.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Symmetric, nonnegative, zero diagonal.
    pub fn is_well_formed(&self) -> bool {
        (0..self.n).all(|i| {
            self.get(i, i) == 0.0 && (0..self.n).all(|j| self.get(i, j) >= 0.0 && self.get(i, j) == self.get(j, i))
        })
    }
}

/// Drops nodes with degenerate vectors and links the rest by `max(0, cosine)`.
pub fn build_network(nodes: Vec<NetworkNode>) -> (Vec<NetworkNode>, LinkMatrix, Vec<String>) {
    let mut notes = Vec::new();
    let kept: Vec<NetworkNode> = nodes
        .into_iter()
        .filter(|node| {
            let ok = node.vector.iter().any(|&v| v != 0.0) && node.vector.iter().all(|v| v.is_finite());
            if !ok {
                notes.push(format!("node `{}` dropped: degenerate vector", node.payload));
            }
            ok
        })
        .collect();
    let n = kept.len();
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = cosine(&kept[i].vector, &kept[j].vector).map_or(0.0, |c| c.max(0.0));
            weights[i * n + j] = w;
            weights[j * n + i] = w;
        }
    }
    (kept, LinkMatrix { n, weights }, notes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Integration {
    pub activations: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Spreading activation: `a ← W·a`, rescaled so the maximum is 1, with the
/// `clamp` node reset to 1 after every step. The clamped node's own sum is
/// discarded, so it takes no part in the rescaling. Stops once no activation
/// moves by `epsilon` or more.
pub fn integrate(w: &LinkMatrix, initial: &[f64], clamp: Option<usize>, epsilon: f64, max_iterations: usize) -> Integration {
    let n = w.len();
    assert_eq!(initial.len(), n, "one initial activation per node");
    let mut a: Vec<f64> = initial.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    if let Some(c) = clamp {
        a[c] = 1.0;
    }
    let mut next = vec![0.0; n];
    for iteration in 1..=max_iterations {
        for (i, slot) in next.iter_mut().enumerate() {
            *slot = (0..n).map(|j| w.get(i, j) * a[j]).sum();
        }
        let max = next
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != clamp)
            .fold(0.0, |m, (_, &v)| f64::max(m, v));
        if max > 0.0 {
            next.iter_mut().for_each(|v| *v /= max);
        }
        if let Some(c) = clamp {
            next[c] = 1.0;
        }
        let delta = a.iter().zip(&next).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut a, &mut next);
        if delta < epsilon {
            return Integration {
                activations: a,
                iterations: iteration,
                converged: true,
            };
        }
    }
    Integration {
        activations: a,
        iterations: max_iterations,
        converged: false,
    }
}

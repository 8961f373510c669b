use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::network::{NetworkNode, NodeKey, Origin, Payload};
use crate::vecspace::cosine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    /// Keep the longest descending-activation prefix whose sum fits the budget.
    #[default]
    Greedy,
    /// Keep every active node and rescale so the activations sum to the budget.
    Proportional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WmStrategy {
    FixedCount { n: usize },
    ActivationBudget { total: f64, mode: BudgetMode },
    Threshold { theta: f64 },
}

impl WmStrategy {
    pub fn validate(&self) -> Result<(), String> {
        match *self {
            Self::FixedCount { n: 0 } => Err("fixed_count needs n >= 1".into()),
            Self::ActivationBudget { total, .. } if !(total > 0.0 && total.is_finite()) => {
                Err("activation_budget needs a positive total".into())
            }
            Self::Threshold { theta } if !(0.0..=1.0).contains(&theta) => Err("threshold must lie in [0, 1]".into()),
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for WmStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::FixedCount { n } => write!(f, "fixed:{n}"),
            Self::ActivationBudget { total, mode: BudgetMode::Greedy } => write!(f, "budget:{total}"),
            Self::ActivationBudget { total, mode: BudgetMode::Proportional } => write!(f, "budget-proportional:{total}"),
            Self::Threshold { theta } => write!(f, "threshold:{theta}"),
        }
    }
}

impl std::str::FromStr for WmStrategy {
    type Err = String;
    /// `fixed:N`, `budget:T`, `budget-proportional:T` or `threshold:θ`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| format!("working-memory strategy `{s}` needs the form kind:value"))?;
        let real = || value.parse::<f64>().map_err(|_| format!("bad number `{value}`"));
        let strategy = match kind {
            "fixed" => Self::FixedCount {
                n: value.parse().map_err(|_| format!("bad count `{value}`"))?,
            },
            "budget" => Self::ActivationBudget {
                total: real()?,
                mode: BudgetMode::Greedy,
            },
            "budget-proportional" => Self::ActivationBudget {
                total: real()?,
                mode: BudgetMode::Proportional,
            },
            "threshold" => Self::Threshold { theta: real()? },
            _ => return Err(format!("unknown working-memory strategy `{kind}` (fixed|budget|budget-proportional|threshold)")),
        };
        strategy.validate()?;
        Ok(strategy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WmItem {
    pub payload: Payload,
    pub origin: Origin,
    pub vector: Vec<f64>,
    pub activation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkingMemory {
    pub strategy: WmStrategy,
    pub items: Vec<WmItem>,
}

impl WorkingMemory {
    pub fn empty(strategy: WmStrategy) -> Self {
        Self { strategy, items: Vec::new() }
    }

    pub fn contains(&self, key: &NodeKey) -> bool {
        self.items.iter().any(|i| i.payload.key() == *key)
    }

    pub fn total_activation(&self) -> f64 {
        self.items.iter().map(|i| i.activation).sum()
    }
}

/// Indices of `activations` in descending order, ties by label.
fn ranked(activations: &[f64], labels: &[NodeKey]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..activations.len()).collect();
    order.sort_by(|&a, &b| activations[b].total_cmp(&activations[a]).then_with(|| labels[a].cmp(&labels[b])));
    order
}

/// Chosen node indices with their working-memory activations.
pub fn select_indices(activations: &[f64], labels: &[NodeKey], strategy: WmStrategy) -> Vec<(usize, f64)> {
    let order = ranked(activations, labels);
    match strategy {
        WmStrategy::FixedCount { n } => order.into_iter().take(n).map(|i| (i, activations[i])).collect(),
        WmStrategy::Threshold { theta } => order
            .into_iter()
            .filter(|&i| activations[i] >= theta)
            .map(|i| (i, activations[i]))
            .collect(),
        WmStrategy::ActivationBudget { total, mode: BudgetMode::Greedy } => {
            let mut sum = 0.0;
            order
                .into_iter()
                .take_while(|&i| {
                    sum += activations[i];
                    sum <= total + 1e-12
                })
                .map(|i| (i, activations[i]))
                .collect()
        }
        WmStrategy::ActivationBudget { total, mode: BudgetMode::Proportional } => {
            let active: Vec<usize> = order.into_iter().filter(|&i| activations[i] > 0.0).collect();
            let sum: f64 = active.iter().map(|&i| activations[i]).sum();
            let scale = if sum > total { total / sum } else { 1.0 };
            active.into_iter().map(|i| (i, activations[i] * scale)).collect()
        }
    }
}

pub fn select_wm(nodes: &[NetworkNode], activations: &[f64], strategy: WmStrategy) -> WorkingMemory {
    let labels: Vec<NodeKey> = nodes.iter().map(|n| n.payload.key()).collect();
    let items = select_indices(activations, &labels, strategy)
        .into_iter()
        .map(|(i, a)| WmItem {
            payload: nodes[i].payload.clone(),
            origin: nodes[i].origin,
            vector: nodes[i].vector.clone(),
            activation: a,
        })
        .collect();
    WorkingMemory { strategy, items }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodicEntry {
    pub payload: Payload,
    pub vector: Vec<f64>,
    pub activation: f64,
    pub last_cycle: usize,
    pub occurrences: usize,
}

impl EpisodicEntry {
    /// Activation decayed from `last_cycle` to `cycle`.
    pub fn activation_at(&self, cycle: usize, decay_rate: f64) -> f64 {
        self.activation * decay_rate.powi(cycle.saturating_sub(self.last_cycle) as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodicParams {
    pub decay_rate: f64,
    pub reinforcement_gain: f64,
}

/// Everything encountered so far. Entries are never removed, only decayed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EpisodicStore {
    entries: BTreeMap<NodeKey, EpisodicEntry>,
}

impl EpisodicStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &NodeKey) -> Option<&EpisodicEntry> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeKey, &EpisodicEntry)> {
        self.entries.iter()
    }

    /// Adds an entry that was encountered but not kept in working memory.
    /// Known entries are left alone.
    pub fn note_encounter(&mut self, payload: &Payload, vector: &[f64], activation: f64, cycle: usize) {
        self.entries.entry(payload.key()).or_insert_with(|| EpisodicEntry {
            payload: payload.clone(),
            vector: vector.to_vec(),
            activation: activation.clamp(0.0, 1.0),
            last_cycle: cycle,
            occurrences: 1,
        });
    }
}

/// Decays every entry to `cycle`, then reinforces (or inserts) each
/// working-memory item: `min(1, decayed + gain × activation)`.
pub fn episodic_update(store: &mut EpisodicStore, wm: &WorkingMemory, cycle: usize, params: EpisodicParams) {
    for e in store.entries.values_mut() {
        e.activation = e.activation_at(cycle, params.decay_rate);
        e.last_cycle = cycle;
    }
    for item in &wm.items {
        let gain = params.reinforcement_gain * item.activation;
        store
            .entries
            .entry(item.payload.key())
            .and_modify(|e| {
                e.activation = (e.activation + gain).min(1.0);
                e.occurrences += 1;
            })
            .or_insert_with(|| EpisodicEntry {
                payload: item.payload.clone(),
                vector: item.vector.clone(),
                activation: gain.min(1.0),
                last_cycle: cycle,
                occurrences: 1,
            });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recalled {
    pub payload: Payload,
    pub vector: Vec<f64>,
    pub cosine: f64,
    pub activation: f64,
}

/// Entries similar enough to `probe` whose decayed activation at `cycle` is
/// still above `floor`, most similar first. Keys in `exclude` are skipped.
pub fn episodic_recall(
    store: &EpisodicStore,
    probe: &[f64],
    cycle: usize,
    recall_threshold: f64,
    floor: f64,
    decay_rate: f64,
    exclude: &BTreeSet<NodeKey>,
) -> Vec<Recalled> {
    let mut out: Vec<Recalled> = store
        .entries
        .iter()
        .filter(|(k, _)| !exclude.contains(k))
        .filter_map(|(_, e)| {
            let c = cosine(&e.vector, probe).ok()?;
            let a = e.activation_at(cycle, decay_rate);
            (c >= recall_threshold && a > floor).then(|| Recalled {
                payload: e.payload.clone(),
                vector: e.vector.clone(),
                cosine: c,
                activation: a,
            })
        })
        .collect();
    out.sort_by(|a, b| b.cosine.total_cmp(&a.cosine).then_with(|| a.payload.key().cmp(&b.payload.key())));
    out
}

//! Construction-integration comprehension simulator.
//!
//! Each input proposition runs one cycle: episodic recall, associate
//! retrieval, network construction, spreading activation, working-memory
//! selection and episodic update.

mod memory;
mod network;
mod proposition;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use memory::{
    episodic_recall, episodic_update, select_indices, select_wm, BudgetMode, EpisodicEntry, EpisodicParams,
    EpisodicStore, Recalled, WmItem, WmStrategy, WorkingMemory,
};
pub use network::{build_network, integrate, Integration, LinkMatrix, NetworkNode, NodeKey, Origin, Payload};
pub use proposition::{parse_propositions, Proposition, PropositionError};

use crate::vecspace::{cosine, Probe, SemanticSpace, SpaceError, WeightBand};

#[derive(Debug, Error, PartialEq)]
pub enum CiError {
    #[error("no propositions to process")]
    NoPropositions,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CIParams {
    /// Associates kept per slot.
    pub n_associates: usize,
    /// Minimum cosine between a predicate associate and some argument.
    pub predication_threshold: f64,
    /// Neighbors of the predicate examined before predication filtering.
    pub predication_pool: usize,
    /// Terms whose global weight is outside `[min_weight, max_weight]` neither
    /// receive nor provide associates.
    pub min_weight: f64,
    pub max_weight: f64,
    pub wm_strategy: WmStrategy,
    pub decay_rate: f64,
    pub reinforcement_gain: f64,
    pub recall_threshold: f64,
    /// Episodic entries at or below this decayed activation cannot be recalled.
    pub recall_floor: f64,
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for CIParams {
    fn default() -> Self {
        Self {
            n_associates: 3,
            predication_threshold: 0.2,
            predication_pool: 20,
            min_weight: 0.1,
            max_weight: 1.0,
            wm_strategy: WmStrategy::FixedCount { n: 7 },
            decay_rate: 0.8,
            reinforcement_gain: 1.0,
            recall_threshold: 0.3,
            recall_floor: 0.05,
            epsilon: 1e-4,
            max_iterations: 100,
        }
    }
}

impl CIParams {
    pub fn validate(&self) -> Result<(), CiError> {
        let bad = |m: &str| Err(CiError::InvalidParams(m.into()));
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be > 0");
        }
        if !(self.decay_rate > 0.0 && self.decay_rate < 1.0) {
            return bad("decay_rate must lie in (0, 1)");
        }
        if !(self.reinforcement_gain >= 0.0 && self.reinforcement_gain.is_finite()) {
            return bad("reinforcement_gain must be >= 0");
        }
        if !(0.0..=1.0).contains(&self.min_weight) || !(0.0..=1.0).contains(&self.max_weight) || self.min_weight > self.max_weight {
            return bad("weight band must satisfy 0 <= min_weight <= max_weight <= 1");
        }
        if !(-1.0..=1.0).contains(&self.predication_threshold) {
            return bad("predication_threshold must lie in [-1, 1]");
        }
        if !(self.recall_threshold >= -1.0 && self.recall_threshold.is_finite()) {
            return bad("recall_threshold must be a cosine bound");
        }
        if !(self.recall_floor >= 0.0) {
            return bad("recall_floor must be >= 0");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be >= 1");
        }
        self.wm_strategy.validate().map_err(CiError::InvalidParams)
    }

    pub fn band(&self) -> WeightBand {
        WeightBand {
            min: self.min_weight,
            max: self.max_weight,
        }
    }

    fn episodic(&self) -> EpisodicParams {
        EpisodicParams {
            decay_rate: self.decay_rate,
            reinforcement_gain: self.reinforcement_gain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotRole {
    Predicate,
    Argument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotAssociates {
    pub term: String,
    pub role: SlotRole,
    /// `(associate, cosine with the slot term)`, best first.
    pub associates: Vec<(String, f64)>,
    pub skipped: Option<String>,
}

fn slot_skip(s: &SemanticSpace, term: &str, band: WeightBand) -> Option<String> {
    match s.global_weight(term) {
        None => Some("not in vocabulary".into()),
        Some(g) if !band.contains(g) => Some(format!("weight {g:.3} outside [{}, {}]", band.min, band.max)),
        Some(_) if s.term_vector(term).map_or(true, |v| v.iter().all(|&x| x == 0.0)) => {
            Some("degenerate vector".into())
        }
        Some(_) => None,
    }
}

/// Neighbors for each argument, and for the predicate those neighbors that
/// are close enough to at least one argument (predication). Terms of the
/// proposition itself are never returned as associates.
pub fn retrieve_associates(s: &SemanticSpace, p: &Proposition, params: &CIParams) -> Vec<SlotAssociates> {
    let band = params.band();
    let own: BTreeSet<&str> = std::iter::once(p.predicate.as_str()).chain(p.args.iter().map(String::as_str)).collect();
    let neighbors = |term: &str, n: usize| -> Vec<(String, f64)> {
        s.neighbors(Probe::Term(term), n + own.len(), band)
            .unwrap_or_default()
            .into_iter()
            .filter(|(w, _)| !own.contains(w.as_str()))
            .take(n)
            .collect()
    };
    let arg_vectors: Vec<&[f64]> = p
        .args
        .iter()
        .filter_map(|a| s.term_vector(a).ok())
        .filter(|v| v.iter().any(|&x| x != 0.0))
        .collect();

    let mut out = Vec::with_capacity(1 + p.args.len());
    let predicate = match slot_skip(s, &p.predicate, band) {
        Some(reason) => SlotAssociates {
            term: p.predicate.clone(),
            role: SlotRole::Predicate,
            associates: Vec::new(),
            skipped: Some(reason),
        },
        None if p.args.is_empty() => SlotAssociates {
            term: p.predicate.clone(),
            role: SlotRole::Predicate,
            associates: neighbors(&p.predicate, params.n_associates),
            skipped: None,
        },
        None => {
            let associates = neighbors(&p.predicate, params.predication_pool.max(params.n_associates))
                .into_iter()
                .filter(|(w, _)| {
                    let v = s.term_vector(w).unwrap();
                    arg_vectors
                        .iter()
                        .any(|a| cosine(v, a).is_ok_and(|c| c >= params.predication_threshold))
                })
                .take(params.n_associates)
                .collect();
            SlotAssociates {
                term: p.predicate.clone(),
                role: SlotRole::Predicate,
                associates,
                skipped: None,
            }
        }
    };
    out.push(predicate);
    for a in &p.args {
        let skipped = slot_skip(s, a, band);
        out.push(SlotAssociates {
            term: a.clone(),
            role: SlotRole::Argument,
            associates: if skipped.is_none() { neighbors(a, params.n_associates) } else { Vec::new() },
            skipped,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeInfo {
    pub label: String,
    pub is_proposition: bool,
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecalledInfo {
    pub label: String,
    pub is_proposition: bool,
    pub cosine: f64,
    pub activation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WmSnapshot {
    pub label: String,
    pub is_proposition: bool,
    pub origin: Origin,
    pub activation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodicSnapshot {
    pub label: String,
    pub is_proposition: bool,
    pub activation: f64,
    pub last_cycle: usize,
    pub occurrences: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    /// 1-based cycle number.
    pub cycle: usize,
    pub proposition: String,
    pub skipped: Option<String>,
    pub notes: Vec<String>,
    pub recalled: Vec<RecalledInfo>,
    pub associates: Vec<SlotAssociates>,
    pub nodes: Vec<NodeInfo>,
    pub links: Vec<Vec<f64>>,
    pub activations: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub working_memory: Vec<WmSnapshot>,
    pub episodic: Vec<EpisodicSnapshot>,
}

impl CycleRecord {
    pub fn wm_contains(&self, label: &str) -> bool {
        self.working_memory.iter().any(|w| w.label == label)
    }

    pub fn nodes_with_origin(&self, origin: Origin) -> impl Iterator<Item = &NodeInfo> {
        self.nodes.iter().filter(move |n| n.origin == origin)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComprehensionTrace {
    pub params: CIParams,
    pub cycles: Vec<CycleRecord>,
}

impl ComprehensionTrace {
    pub fn all_converged(&self) -> bool {
        self.cycles.iter().all(|c| c.skipped.is_some() || c.converged)
    }
}

fn snapshot_store(store: &EpisodicStore) -> Vec<EpisodicSnapshot> {
    store
        .iter()
        .map(|(k, e)| EpisodicSnapshot {
            label: k.label.clone(),
            is_proposition: k.is_proposition,
            activation: e.activation,
            last_cycle: e.last_cycle,
            occurrences: e.occurrences,
        })
        .collect()
}

fn snapshot_wm(wm: &WorkingMemory) -> Vec<WmSnapshot> {
    wm.items
        .iter()
        .map(|i| WmSnapshot {
            label: i.payload.label(),
            is_proposition: matches!(i.payload, Payload::Proposition(_)),
            origin: i.origin,
            activation: i.activation,
        })
        .collect()
}

/// Appends `node` unless a node with the same payload is already present.
fn push_unique(nodes: &mut Vec<NetworkNode>, node: NetworkNode) {
    if !nodes.iter().any(|n| n.payload == node.payload) {
        nodes.push(node);
    }
}

/// Runs one cycle per proposition.
pub fn comprehend(propositions: &[Proposition], s: &SemanticSpace, params: &CIParams) -> Result<ComprehensionTrace, CiError> {
    if propositions.is_empty() {
        return Err(CiError::NoPropositions);
    }
    params.validate()?;
    let mut wm = WorkingMemory::empty(params.wm_strategy);
    let mut store = EpisodicStore::new();
    let mut cycles = Vec::with_capacity(propositions.len());

    for (i, p) in propositions.iter().enumerate() {
        let cycle = i + 1;
        let mut notes = Vec::new();
        let mut record = CycleRecord {
            cycle,
            proposition: p.to_string(),
            skipped: None,
            notes: Vec::new(),
            recalled: Vec::new(),
            associates: Vec::new(),
            nodes: Vec::new(),
            links: Vec::new(),
            activations: Vec::new(),
            iterations: 0,
            converged: false,
            working_memory: Vec::new(),
            episodic: Vec::new(),
        };

        let prop_vector = match s.fold_in(&p.tokens()) {
            Ok(f) if f.vector.iter().any(|&x| x != 0.0) => f.vector,
            Ok(_) => {
                record.skipped = Some("proposition vector is degenerate".into());
                Vec::new()
            }
            Err(SpaceError::EmptyProjection) => {
                record.skipped = Some("no term of the proposition is in the vocabulary".into());
                Vec::new()
            }
            Err(e) => {
                record.skipped = Some(e.to_string());
                Vec::new()
            }
        };
        if record.skipped.is_some() {
            record.working_memory = snapshot_wm(&wm);
            record.episodic = snapshot_store(&store);
            cycles.push(record);
            continue;
        }

        let prop_payload = Payload::Proposition(p.clone());
        let mut nodes = vec![NetworkNode {
            payload: prop_payload.clone(),
            vector: prop_vector.clone(),
            origin: Origin::Text,
        }];
        for t in p.tokens() {
            match s.term_vector(&t) {
                Ok(v) => push_unique(
                    &mut nodes,
                    NetworkNode {
                        payload: Payload::Term(t),
                        vector: v.to_vec(),
                        origin: Origin::Text,
                    },
                ),
                Err(_) => notes.push(format!("text term `{t}` is not in the vocabulary")),
            }
        }
        for item in &wm.items {
            push_unique(
                &mut nodes,
                NetworkNode {
                    payload: item.payload.clone(),
                    vector: item.vector.clone(),
                    origin: Origin::CarriedOver,
                },
            );
        }

        let exclude: BTreeSet<NodeKey> = nodes.iter().map(|n| n.payload.key()).collect();
        let recalled = episodic_recall(
            &store,
            &prop_vector,
            cycle,
            params.recall_threshold,
            params.recall_floor,
            params.decay_rate,
            &exclude,
        );
        for r in &recalled {
            push_unique(
                &mut nodes,
                NetworkNode {
                    payload: r.payload.clone(),
                    vector: r.vector.clone(),
                    origin: Origin::EpisodicRecall,
                },
            );
        }

        let associates = retrieve_associates(s, p, params);
        for slot in &associates {
            if let Some(reason) = &slot.skipped {
                notes.push(format!("slot `{}` skipped: {reason}", slot.term));
            }
            for (w, _) in &slot.associates {
                push_unique(
                    &mut nodes,
                    NetworkNode {
                        payload: Payload::Term(w.clone()),
                        vector: s.term_vector(w).unwrap().to_vec(),
                        origin: Origin::Associate,
                    },
                );
            }
        }

        let (nodes, links, dropped) = build_network(nodes);
        notes.extend(dropped);
        let integration = integrate(&links, &vec![1.0; nodes.len()], Some(0), params.epsilon, params.max_iterations);
        if !integration.converged {
            notes.push(format!("integration did not converge within {} iterations", params.max_iterations));
        }
        wm = select_wm(&nodes, &integration.activations, params.wm_strategy);
        if wm.items.is_empty() {
            notes.push("working memory is empty".into());
        }
        episodic_update(&mut store, &wm, cycle, params.episodic());
        for (n, &a) in nodes.iter().zip(&integration.activations) {
            store.note_encounter(&n.payload, &n.vector, a, cycle);
        }

        record.recalled = recalled
            .iter()
            .map(|r| RecalledInfo {
                label: r.payload.label(),
                is_proposition: matches!(r.payload, Payload::Proposition(_)),
                cosine: r.cosine,
                activation: r.activation,
            })
            .collect();
        record.associates = associates;
        record.nodes = nodes
            .iter()
            .map(|n| NodeInfo {
                label: n.payload.label(),
                is_proposition: matches!(n.payload, Payload::Proposition(_)),
                origin: n.origin,
            })
            .collect();
        record.links = links.rows();
        record.activations = integration.activations;
        record.iterations = integration.iterations;
        record.converged = integration.converged;
        record.working_memory = snapshot_wm(&wm);
        record.episodic = snapshot_store(&store);
        record.notes = notes;
        cycles.push(record);
    }
    Ok(ComprehensionTrace {
        params: params.clone(),
        cycles,
    })
}

impl ComprehensionTrace {
    /// Human-readable cycle log.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cycles {
            out.push_str(&format!("Cycle {}: {}\n", c.cycle, c.proposition));
            if let Some(reason) = &c.skipped {
                out.push_str(&format!("  skipped: {reason}\n\n"));
                continue;
            }
            if c.recalled.is_empty() {
                out.push_str("  recalled from episodic memory: none\n");
            } else {
                let list: Vec<String> = c.recalled.iter().map(|r| format!("{} ({:.3})", r.label, r.cosine)).collect();
                out.push_str(&format!("  recalled from episodic memory: {}\n", list.join(", ")));
            }
            for slot in &c.associates {
                let role = match slot.role {
                    SlotRole::Predicate => "predicate",
                    SlotRole::Argument => "argument",
                };
                match &slot.skipped {
                    Some(reason) => out.push_str(&format!("  {role} {}: skipped ({reason})\n", slot.term)),
                    None => {
                        let list: Vec<&str> = slot.associates.iter().map(|(w, _)| w.as_str()).collect();
                        out.push_str(&format!("  {role} {}: {}\n", slot.term, if list.is_empty() { "-".to_string() } else { list.join(", ") }));
                    }
                }
            }
            out.push_str(&format!(
                "  integration: {} nodes, {} iterations{}\n",
                c.nodes.len(),
                c.iterations,
                if c.converged { "" } else { " (not converged)" }
            ));
            out.push_str("  working memory:\n");
            for w in &c.working_memory {
                out.push_str(&format!("    {} ({:.3})\n", w.label, w.activation));
            }
            for n in &c.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
            out.push('\n');
        }
        out
    }
}

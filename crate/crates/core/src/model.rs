//! Stochastic graphs, probing constraints, edge strings, and known-i.d. inputs.
//!
//! A stochastic graph is bipartite: offline vertices `U` on one side, online
//! vertices `V` on the other. Each stored edge `(u, v)` is active
//! independently with probability `p`; absent pairs behave as `p = 0` edges
//! and never participate in probing. Every online vertex carries a
//! downward-closed probing constraint over its incident edges: any substring
//! or permutation of a feasible probe string is feasible, and the empty
//! string is always feasible.

use crate::rng::{self, Rng};
use rand::Rng as _;
use std::collections::BTreeSet;
use thiserror::Error;

/// Index into [`StochasticGraph::offline`].
pub type OfflineId = usize;
/// Index into [`StochasticGraph::online`].
pub type OnlineId = usize;
/// Index into [`StochasticGraph::edges`].
pub type EdgeId = usize;

/// Tolerance for per-row distribution sums in known-i.d. inputs.
pub const ROW_SUM_TOL: f64 = 1e-9;
/// Slack when comparing knapsack cost sums against the budget.
pub const BUDGET_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("edge references unknown vertex: {0}")]
    UnknownVertex(String),
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("negative weight {0}")]
    BadWeight(f64),
    #[error("duplicate edge for pair ({u}, {v})")]
    DuplicateEdge { u: String, v: String },
    #[error("string contains edge {edge} not incident to online vertex {vertex}")]
    ForeignEdge { edge: EdgeId, vertex: String },
    #[error("string repeats edge {0}")]
    RepeatedEdge(EdgeId),
    #[error("knapsack costs must list every incident edge of {0}")]
    BadCosts(String),
    #[error("explicit family supports at most 63 incident edges, got {0}")]
    FamilyTooWide(usize),
    #[error("distribution row {row} sums to {sum}, expected 1")]
    RowSum { row: usize, sum: f64 },
    #[error("distribution row {row} references unknown type {ty}")]
    UnknownType { row: usize, ty: usize },
    #[error("distribution row {row} is empty after dropping zero-mass types")]
    EmptyRow { row: usize },
}

#[derive(Debug, Clone)]
pub struct OfflineVertex {
    pub name: String,
    /// Vertex weight; consulted only by vertex-weighted algorithms.
    pub weight: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub u: OfflineId,
    pub v: OnlineId,
    pub p: f64,
    pub w: f64,
}

#[derive(Debug, Clone)]
pub struct OnlineVertex {
    pub name: String,
    pub constraint: ProbingConstraint,
    /// Incident edges, in insertion order. Entries are distinct pairs.
    pub incident: Vec<EdgeId>,
}

/// A downward-closed probing constraint over one vertex's incident edges.
///
/// Feasibility of a string depends only on its underlying edge set: patience
/// counts edges, knapsack sums costs, and explicit families are stored as
/// bitmask sets. This is exactly the permutation-invariance the model
/// guarantees.
#[derive(Debug, Clone)]
pub enum ProbingConstraint {
    /// At most this many probes.
    Patience(usize),
    /// Probed edges must have total cost within the budget. `costs` is
    /// parallel to the vertex's incident-edge list.
    Knapsack { budget: f64, costs: Vec<f64> },
    /// Explicit downward-closed set family over incident-edge positions.
    Family(SetFamily),
}

/// Downward-closed family of subsets of a vertex's incident edges, stored as
/// bitmasks over positions in the incident list. Construction takes the
/// downward closure of whatever sets are supplied, so the empty set is always
/// a member.
#[derive(Debug, Clone)]
pub struct SetFamily {
    masks: BTreeSet<u64>,
    width: usize,
}

impl SetFamily {
    /// Build the downward closure of `sets` over `width` incident positions.
    pub fn closure(width: usize, sets: &[Vec<usize>]) -> Result<Self, ModelError> {
        if width > 63 {
            return Err(ModelError::FamilyTooWide(width));
        }
        let mut masks = BTreeSet::new();
        masks.insert(0u64);
        let mut stack: Vec<u64> = Vec::new();
        for set in sets {
            let mut m = 0u64;
            for &i in set {
                debug_assert!(i < width);
                m |= 1 << i;
            }
            stack.push(m);
        }
        while let Some(m) = stack.pop() {
            if !masks.insert(m) {
                continue;
            }
            let mut bits = m;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                stack.push(m ^ b);
                bits ^= b;
            }
        }
        Ok(SetFamily { masks, width })
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.masks.contains(&mask)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Iterate over all member masks.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.masks.iter().copied()
    }
}

impl ProbingConstraint {
    /// Feasibility of an edge *set*, identified by positions in ∂(v).
    pub fn feasible_positions(&self, positions: &[usize]) -> bool {
        match self {
            ProbingConstraint::Patience(l) => positions.len() <= *l,
            ProbingConstraint::Knapsack { budget, costs } => {
                let total: f64 = positions.iter().map(|&i| costs[i]).sum();
                total <= budget + BUDGET_TOL
            }
            ProbingConstraint::Family(f) => {
                let mut mask = 0u64;
                for &i in positions {
                    if i >= 64 {
                        return false;
                    }
                    mask |= 1 << i;
                }
                f.contains(mask)
            }
        }
    }

    /// Upper bound on the length of any feasible string over `deg` incident
    /// edges (the paper's `c_v`).
    pub fn max_probes(&self, deg: usize) -> usize {
        match self {
            ProbingConstraint::Patience(l) => (*l).min(deg),
            ProbingConstraint::Knapsack { budget, costs } => {
                // Cheapest-first packing bounds the cardinality.
                let mut sorted: Vec<f64> = costs.clone();
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut total = 0.0;
                let mut k = 0;
                for c in sorted {
                    if total + c <= budget + BUDGET_TOL {
                        total += c;
                        k += 1;
                    } else {
                        break;
                    }
                }
                k
            }
            ProbingConstraint::Family(f) => {
                f.members().map(|m| m.count_ones() as usize).max().unwrap_or(0)
            }
        }
    }
}

/// An ordered tuple of distinct edges, all incident to one online vertex.
/// The empty string is written `λ` throughout the docs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeString {
    pub v: OnlineId,
    pub edges: Vec<EdgeId>,
}

impl EdgeString {
    pub fn empty(v: OnlineId) -> Self {
        EdgeString { v, edges: Vec::new() }
    }

    /// Validating constructor: edges must be distinct and incident to `v`.
    pub fn new(g: &StochasticGraph, v: OnlineId, edges: Vec<EdgeId>) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for &e in &edges {
            if g.edges[e].v != v {
                return Err(ModelError::ForeignEdge { edge: e, vertex: g.online[v].name.clone() });
            }
            if !seen.insert(e) {
                return Err(ModelError::RepeatedEdge(e));
            }
        }
        Ok(EdgeString { v, edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Realized edge states `st(e) ~ Ber(p_e)`, regenerable from the seed.
#[derive(Debug, Clone)]
pub struct EdgeStateSample {
    pub states: Vec<bool>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct StochasticGraph {
    pub offline: Vec<OfflineVertex>,
    pub online: Vec<OnlineVertex>,
    pub edges: Vec<Edge>,
    /// Position of each edge within its online vertex's incident list.
    pos_in_v: Vec<usize>,
}

impl StochasticGraph {
    /// Assemble a graph from parts, validating every invariant.
    ///
    /// `edges` lists `(offline, online, p, w)`; at most one edge per pair.
    /// Knapsack cost vectors must match the incident list that results.
    pub fn new(
        offline: Vec<OfflineVertex>,
        online_names: Vec<(String, ProbingConstraint)>,
        edge_list: Vec<(OfflineId, OnlineId, f64, f64)>,
    ) -> Result<Self, ModelError> {
        for v in &offline {
            if v.weight < 0.0 {
                return Err(ModelError::BadWeight(v.weight));
            }
        }
        let mut online: Vec<OnlineVertex> = online_names
            .into_iter()
            .map(|(name, constraint)| OnlineVertex { name, constraint, incident: Vec::new() })
            .collect();
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut pos_in_v = Vec::with_capacity(edge_list.len());
        let mut seen = BTreeSet::new();
        for (u, v, p, w) in edge_list {
            if u >= offline.len() {
                return Err(ModelError::UnknownVertex(format!("offline #{u}")));
            }
            if v >= online.len() {
                return Err(ModelError::UnknownVertex(format!("online #{v}")));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(ModelError::BadProbability(p));
            }
            if w < 0.0 {
                return Err(ModelError::BadWeight(w));
            }
            if !seen.insert((u, v)) {
                return Err(ModelError::DuplicateEdge {
                    u: offline[u].name.clone(),
                    v: online[v].name.clone(),
                });
            }
            let id = edges.len();
            edges.push(Edge { u, v, p, w });
            pos_in_v.push(online[v].incident.len());
            online[v].incident.push(id);
        }
        let g = StochasticGraph { offline, online, edges, pos_in_v };
        g.validate_constraints()?;
        Ok(g)
    }

    fn validate_constraints(&self) -> Result<(), ModelError> {
        for v in &self.online {
            match &v.constraint {
                ProbingConstraint::Knapsack { budget, costs } => {
                    if costs.len() != v.incident.len() {
                        return Err(ModelError::BadCosts(v.name.clone()));
                    }
                    if *budget < 0.0 {
                        return Err(ModelError::BadWeight(*budget));
                    }
                    if let Some(&c) = costs.iter().find(|&&c| c < 0.0) {
                        return Err(ModelError::BadWeight(c));
                    }
                }
                ProbingConstraint::Family(f) => {
                    if f.width() != v.incident.len() {
                        return Err(ModelError::BadCosts(v.name.clone()));
                    }
                }
                ProbingConstraint::Patience(_) => {}
            }
        }
        Ok(())
    }

    pub fn n_online(&self) -> usize {
        self.online.len()
    }

    pub fn n_offline(&self) -> usize {
        self.offline.len()
    }

    /// Incident edges of `v` that can ever be probed usefully (p > 0).
    pub fn probe_edges(&self, v: OnlineId) -> impl Iterator<Item = EdgeId> + '_ {
        self.online[v].incident.iter().copied().filter(move |&e| self.edges[e].p > 0.0)
    }

    pub fn position_in_vertex(&self, e: EdgeId) -> usize {
        self.pos_in_v[e]
    }

    /// Probability that every edge of `prefix` is inactive; `q(λ) = 1`.
    pub fn q(&self, prefix: &[EdgeId]) -> f64 {
        prefix.iter().map(|&e| 1.0 - self.edges[e].p).product()
    }

    /// Expected weight of the first active edge when `s` is probed in order;
    /// `val(λ) = 0`. Pure arithmetic: `s` need not be feasible.
    pub fn val(&self, s: &[EdgeId]) -> f64 {
        let mut survive = 1.0;
        let mut total = 0.0;
        for &e in s {
            let edge = &self.edges[e];
            total += edge.w * edge.p * survive;
            survive *= 1.0 - edge.p;
        }
        total
    }

    /// Membership query: is `s` a feasible probe string for its vertex?
    pub fn membership(&self, s: &EdgeString) -> Result<bool, ModelError> {
        let mut seen = BTreeSet::new();
        let mut positions = Vec::with_capacity(s.edges.len());
        for &e in &s.edges {
            if self.edges[e].v != s.v {
                return Err(ModelError::ForeignEdge {
                    edge: e,
                    vertex: self.online[s.v].name.clone(),
                });
            }
            if !seen.insert(e) {
                return Err(ModelError::RepeatedEdge(e));
            }
            positions.push(self.pos_in_v[e]);
        }
        Ok(self.online[s.v].constraint.feasible_positions(&positions))
    }

    /// Feasibility of a set of incident positions at `v` (the order-free view).
    pub fn feasible_positions(&self, v: OnlineId, positions: &[usize]) -> bool {
        self.online[v].constraint.feasible_positions(positions)
    }

    /// Draw all edge states independently: `st(e) ~ Ber(p_e)`.
    pub fn sample_states(&self, seed: u64) -> EdgeStateSample {
        let mut rng = rng::stream(seed, 0);
        let states = self
            .edges
            .iter()
            .map(|e| {
                if e.p >= 1.0 {
                    true
                } else if e.p <= 0.0 {
                    false
                } else {
                    rng.gen_bool(e.p)
                }
            })
            .collect();
        EdgeStateSample { states, seed }
    }

    /// Total weight of offline vertices referenced by edge weights matching
    /// `w_{u,v} = w_u`; vertex-weighted algorithms require this to hold.
    pub fn is_vertex_weighted(&self) -> bool {
        self.edges.iter().all(|e| (e.w - self.offline[e.u].weight).abs() <= 1e-9)
    }

    /// Restriction used by the secretary algorithm: keep only the online
    /// vertices in `keep` (offline side unchanged).
    pub fn induced_online(&self, keep: &[OnlineId]) -> StochasticGraph {
        let mut map = vec![usize::MAX; self.online.len()];
        let mut online = Vec::with_capacity(keep.len());
        for (new_v, &v) in keep.iter().enumerate() {
            map[v] = new_v;
            online.push(OnlineVertex {
                name: self.online[v].name.clone(),
                constraint: self.online[v].constraint.clone(),
                incident: Vec::new(),
            });
        }
        let mut edges = Vec::new();
        let mut pos_in_v = Vec::new();
        for &v in keep {
            for &e in &self.online[v].incident {
                let edge = self.edges[e];
                let new_v = map[edge.v];
                let id = edges.len();
                edges.push(Edge { u: edge.u, v: new_v, p: edge.p, w: edge.w });
                pos_in_v.push(online[new_v].incident.len());
                online[new_v].incident.push(id);
            }
        }
        StochasticGraph { offline: self.offline.clone(), online, edges, pos_in_v }
    }
}

/// A type graph together with independent per-arrival type distributions.
///
/// Row `i` gives `r_i(b) = P[arrival i has type b]`; rows sum to one and
/// zero-mass types are dropped at construction, so every stored entry has
/// `r_i(b) > 0`.
#[derive(Debug, Clone)]
pub struct KnownIdInput {
    pub type_graph: StochasticGraph,
    rows: Vec<Vec<(OnlineId, f64)>>,
}

impl KnownIdInput {
    pub fn new(
        type_graph: StochasticGraph,
        distributions: Vec<Vec<(OnlineId, f64)>>,
    ) -> Result<Self, ModelError> {
        let mut rows = Vec::with_capacity(distributions.len());
        for (i, row) in distributions.into_iter().enumerate() {
            let sum: f64 = row.iter().map(|&(_, r)| r).sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(ModelError::RowSum { row: i, sum });
            }
            let mut kept: Vec<(OnlineId, f64)> = Vec::new();
            for (b, r) in row {
                if b >= type_graph.online.len() {
                    return Err(ModelError::UnknownType { row: i, ty: b });
                }
                if r > 0.0 {
                    kept.push((b, r));
                }
            }
            if kept.is_empty() {
                return Err(ModelError::EmptyRow { row: i });
            }
            rows.push(kept);
        }
        Ok(KnownIdInput { type_graph, rows })
    }

    /// Wrap a known stochastic graph: one point-mass row per online vertex.
    pub fn point_mass(g: StochasticGraph) -> Self {
        let rows = (0..g.online.len()).map(|b| vec![(b, 1.0)]).collect();
        KnownIdInput { type_graph: g, rows }
    }

    pub fn n_arrivals(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(OnlineId, f64)] {
        &self.rows[i]
    }

    pub fn prob(&self, i: usize, b: OnlineId) -> f64 {
        self.rows[i].iter().find(|&&(t, _)| t == b).map_or(0.0, |&(_, r)| r)
    }

    /// Draw one type per arrival.
    pub fn draw_types(&self, rng: &mut Rng) -> Vec<OnlineId> {
        self.rows
            .iter()
            .map(|row| {
                let x: f64 = rng.gen();
                let mut acc = 0.0;
                for &(b, r) in row {
                    acc += r;
                    if x < acc {
                        return b;
                    }
                }
                row.last().unwrap().0
            })
            .collect()
    }

    /// Materialize the stochastic graph with online vertex `i` a copy of the
    /// type node `types[i]` (edges, weights, and constraint copied).
    pub fn instantiate(&self, types: &[OnlineId]) -> StochasticGraph {
        let tg = &self.type_graph;
        let mut online = Vec::with_capacity(types.len());
        let mut edges = Vec::new();
        let mut pos_in_v = Vec::new();
        for (i, &b) in types.iter().enumerate() {
            let src = &tg.online[b];
            let mut incident = Vec::with_capacity(src.incident.len());
            for &e in &src.incident {
                let edge = tg.edges[e];
                let id = edges.len();
                edges.push(Edge { u: edge.u, v: i, p: edge.p, w: edge.w });
                pos_in_v.push(incident.len());
                incident.push(id);
            }
            online.push(OnlineVertex {
                name: format!("v{i}:{}", src.name),
                constraint: src.constraint.clone(),
                incident,
            });
        }
        StochasticGraph { offline: tg.offline.clone(), online, edges, pos_in_v }
    }

    /// Draw a full instance `G ~ (H_typ, D)`.
    pub fn draw_instance(&self, rng: &mut Rng) -> StochasticGraph {
        let types = self.draw_types(rng);
        self.instantiate(&types)
    }
}

//! Online probing algorithms under pluggable arrival models.
//!
//! Every runner respects probe-commit: an arrival's probing stops at its
//! first active edge, and a matched edge must have been that first active
//! probe. The contention-resolution runners never reveal the arrival's
//! realized type to the schemes — they see marginals, arrival order, and
//! proposal indicators only.

use crate::lp::{
    solve_lp_config_subset, ColumnPool, ConfigIdLpSolution, ConfigLpSolution, LpError,
};
use crate::model::{EdgeId, KnownIdInput, OfflineId, StochasticGraph};
use crate::rng::{self, Rng};
use crate::rounding::{vertex_probe, RoundingError};
use crate::star::{dp_opt, StarInstance};
use crate::stats::Estimate;
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OnlineError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
    #[error("offline vertex {u} has proposal mass {mass} > 1")]
    MarginalOverflow { u: usize, mass: f64 },
    #[error("algorithm requires a vertex-weighted graph")]
    NotVertexWeighted,
    #[error("algorithm requires random-order arrivals")]
    NeedsRandomOrder,
    #[error("permutation must be a bijection on the arrivals")]
    BadPermutation,
}

/// How the online side is ordered.
#[derive(Debug, Clone)]
pub enum ArrivalModel {
    /// Fixed permutation: `order[t]` is the index arriving at step `t`.
    Adversarial(Vec<usize>),
    /// Uniformly random order.
    RandomOrder,
}

impl ArrivalModel {
    pub fn resolve(&self, n: usize, rng: &mut Rng) -> Result<Vec<usize>, OnlineError> {
        match self {
            ArrivalModel::Adversarial(p) => {
                let mut seen = vec![false; n];
                if p.len() != n || p.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                    return Err(OnlineError::BadPermutation);
                }
                Ok(p.clone())
            }
            ArrivalModel::RandomOrder => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(rng);
                Ok(order)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub edge: EdgeId,
    pub active: bool,
}

/// What one arrival did: which vertex (in the probed graph) it was, the
/// probes it made, and the match if one was kept.
#[derive(Debug, Clone)]
pub struct ArrivalOutcome {
    pub position: usize,
    pub vertex: usize,
    pub type_node: Option<usize>,
    pub probes: Vec<ProbeRecord>,
    pub matched: Option<(OfflineId, f64)>,
}

#[derive(Debug, Clone)]
pub struct MatchingResult {
    pub total_weight: f64,
    pub offline_matched: Vec<bool>,
    pub arrivals: Vec<ArrivalOutcome>,
}

impl MatchingResult {
    fn new(n_offline: usize) -> Self {
        MatchingResult {
            total_weight: 0.0,
            offline_matched: vec![false; n_offline],
            arrivals: Vec::new(),
        }
    }

    pub fn matched_count(&self) -> usize {
        self.arrivals.iter().filter(|a| a.matched.is_some()).count()
    }

    /// Structural invariants: M is a matching of probed active edges, each
    /// arrival's probes are distinct, feasible, and stop at the first active
    /// edge. `g` is the graph whose edge ids the probes reference.
    pub fn check_structure(&self, g: &StochasticGraph) -> Result<(), String> {
        let mut offline_used = vec![false; g.n_offline()];
        for a in &self.arrivals {
            let mut seen = std::collections::BTreeSet::new();
            for pr in &a.probes {
                if g.edges[pr.edge].v != a.vertex {
                    return Err(format!("arrival {} probed a foreign edge", a.position));
                }
                if !seen.insert(pr.edge) {
                    return Err(format!("arrival {} probed an edge twice", a.position));
                }
            }
            let positions: Vec<usize> =
                a.probes.iter().map(|pr| g.position_in_vertex(pr.edge)).collect();
            if !g.feasible_positions(a.vertex, &positions) {
                return Err(format!("arrival {} violated its probing constraint", a.position));
            }
            if a.probes.iter().rev().skip(1).any(|pr| pr.active) {
                return Err(format!("arrival {} kept probing past an active edge", a.position));
            }
            if let Some((u, w)) = a.matched {
                let last = a
                    .probes
                    .last()
                    .ok_or_else(|| format!("arrival {} matched without probing", a.position))?;
                if !last.active || g.edges[last.edge].u != u {
                    return Err(format!(
                        "arrival {} matched an edge it did not activate",
                        a.position
                    ));
                }
                if (g.edges[last.edge].w - w).abs() > 1e-12 {
                    return Err(format!("arrival {} recorded a wrong weight", a.position));
                }
                if std::mem::replace(&mut offline_used[u], true) {
                    return Err(format!("offline vertex {u} matched twice"));
                }
            }
        }
        if offline_used != self.offline_matched {
            return Err("offline match indicators disagree with the arrivals".into());
        }
        Ok(())
    }
}

fn live_probe(g: &StochasticGraph) -> impl Fn(EdgeId, &mut Rng) -> bool + '_ {
    |e, rng| {
        let p = g.edges[e].p;
        p >= 1.0 || (p > 0.0 && rng.gen_bool(p))
    }
}

/// Probe each arrival's LP distribution and keep the proposal when its
/// offline endpoint is still free.
pub fn run_known_graph(
    g: &StochasticGraph,
    sol: &ConfigLpSolution,
    order: &[usize],
    rng: &mut Rng,
) -> Result<MatchingResult, OnlineError> {
    let mut res = MatchingResult::new(g.n_offline());
    for (position, &v) in order.iter().enumerate() {
        let out = vertex_probe(g, v, &sol.per_vertex[v], rng, live_probe(g))?;
        let mut matched = None;
        if let Some(e) = out.proposal {
            let u = g.edges[e].u;
            if !res.offline_matched[u] {
                res.offline_matched[u] = true;
                res.total_weight += g.edges[e].w;
                matched = Some((u, g.edges[e].w));
            }
        }
        res.arrivals.push(ArrivalOutcome {
            position,
            vertex: v,
            type_node: None,
            probes: out.trace.into_iter().map(|(edge, active)| ProbeRecord { edge, active }).collect(),
            matched,
        });
    }
    debug_assert!(res.check_structure(g).is_ok());
    Ok(res)
}

fn draw_type(input: &KnownIdInput, i: usize, rng: &mut Rng) -> usize {
    let row = input.row(i);
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for &(b, r) in row {
        acc += r;
        if x < acc {
            return b;
        }
    }
    row.last().unwrap().0
}

/// Known-i.d. probing without contention resolution: first-free acceptance
/// of each proposal.
pub fn run_known_id(
    input: &KnownIdInput,
    sol: &ConfigIdLpSolution,
    order: &[usize],
    rng: &mut Rng,
) -> Result<MatchingResult, OnlineError> {
    let tg = &input.type_graph;
    let mut res = MatchingResult::new(tg.n_offline());
    for (position, &i) in order.iter().enumerate() {
        let b = draw_type(input, i, rng);
        let dist = sol.conditional(i, b);
        let out = vertex_probe(tg, b, &dist, rng, live_probe(tg))?;
        let mut matched = None;
        if let Some(e) = out.proposal {
            let u = tg.edges[e].u;
            if !res.offline_matched[u] {
                res.offline_matched[u] = true;
                res.total_weight += tg.edges[e].w;
                matched = Some((u, tg.edges[e].w));
            }
        }
        res.arrivals.push(ArrivalOutcome {
            position,
            vertex: b,
            type_node: Some(b),
            probes: out.trace.into_iter().map(|(edge, active)| ProbeRecord { edge, active }).collect(),
            matched,
        });
    }
    debug_assert!(res.check_structure(tg).is_ok());
    Ok(res)
}

fn checked_marginals(
    input: &KnownIdInput,
    sol: &ConfigIdLpSolution,
) -> Result<Vec<Vec<f64>>, OnlineError> {
    let mut z = sol.proposal_marginals(&input.type_graph);
    for (u, zu) in z.iter_mut().enumerate() {
        let total: f64 = zu.iter().sum();
        if total > 1.0 + crate::lp::LP_TOL {
            return Err(OnlineError::MarginalOverflow { u, mass: total });
        }
        if total > 1.0 {
            // LP noise within tolerance: renormalize into the polytope
            for zi in zu.iter_mut() {
                *zi /= total;
            }
        }
    }
    Ok(z)
}

/// Known-i.d. with a per-offline-vertex online CRS gating acceptances
/// (adversarial arrivals). The schemes consume only the marginals and the
/// proposal indicators, never the arrival's realized type.
pub fn run_known_id_ocrs(
    input: &KnownIdInput,
    sol: &ConfigIdLpSolution,
    order: &[usize],
    rng: &mut Rng,
) -> Result<MatchingResult, OnlineError> {
    let tg = &input.type_graph;
    let z = checked_marginals(input, sol)?;
    let mut schemes: Vec<crate::crs::OcrsHalf> = z
        .iter()
        .map(|zu| crate::crs::OcrsHalf::new(zu.clone()).expect("marginals were checked"))
        .collect();
    let mut res = MatchingResult::new(tg.n_offline());
    for (position, &i) in order.iter().enumerate() {
        let b = draw_type(input, i, rng);
        let dist = sol.conditional(i, b);
        let out = vertex_probe(tg, b, &dist, rng, live_probe(tg))?;
        let proposal_u = out.proposal.map(|e| tg.edges[e].u);
        let mut matched = None;
        for (u, scheme) in schemes.iter_mut().enumerate() {
            let accepted = scheme.arrive(i, proposal_u == Some(u), rng);
            if accepted {
                let e = out.proposal.expect("accepted arrivals proposed");
                res.offline_matched[u] = true;
                res.total_weight += tg.edges[e].w;
                matched = Some((u, tg.edges[e].w));
            }
        }
        res.arrivals.push(ArrivalOutcome {
            position,
            vertex: b,
            type_node: Some(b),
            probes: out.trace.into_iter().map(|(edge, active)| ProbeRecord { edge, active }).collect(),
            matched,
        });
    }
    debug_assert!(res.check_structure(tg).is_ok());
    Ok(res)
}

/// Known-i.d. with a per-offline-vertex random-order CRS: each arrival
/// carries a uniform time (drawn here, defining the random order), shared
/// between the arrival model and the schemes.
pub fn run_known_id_rcrs(
    input: &KnownIdInput,
    sol: &ConfigIdLpSolution,
    rng: &mut Rng,
) -> Result<MatchingResult, OnlineError> {
    let tg = &input.type_graph;
    let n = input.n_arrivals();
    let z = checked_marginals(input, sol)?;
    let mut schemes: Vec<crate::crs::RcrsExp> = z
        .iter()
        .map(|zu| crate::crs::RcrsExp::new(zu.clone()).expect("marginals were checked"))
        .collect();
    let times: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| times[a].partial_cmp(&times[b]).unwrap());
    let mut res = MatchingResult::new(tg.n_offline());
    for (position, &i) in order.iter().enumerate() {
        let b = draw_type(input, i, rng);
        let dist = sol.conditional(i, b);
        let out = vertex_probe(tg, b, &dist, rng, live_probe(tg))?;
        let mut matched = None;
        if let Some(e) = out.proposal {
            let u = tg.edges[e].u;
            if schemes[u].arrive(i, times[i], true, rng) {
                res.offline_matched[u] = true;
                res.total_weight += tg.edges[e].w;
                matched = Some((u, tg.edges[e].w));
            }
        }
        res.arrivals.push(ArrivalOutcome {
            position,
            vertex: b,
            type_node: Some(b),
            probes: out.trace.into_iter().map(|(edge, active)| ProbeRecord { edge, active }).collect(),
            matched,
        });
    }
    debug_assert!(res.check_structure(tg).is_ok());
    Ok(res)
}

/// Edge-weighted worst-case instance under random order: pass on the first
/// `floor(n/e) - 1` arrivals, then re-solve the configuration LP on the
/// revealed subgraph and probe the newcomer's distribution.
pub fn run_secretary(g: &StochasticGraph, rng: &mut Rng) -> Result<MatchingResult, OnlineError> {
    let n = g.n_online();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cutoff = (n as f64 / std::f64::consts::E).floor() as usize;
    let mut pool = ColumnPool::new(n);
    let mut active = vec![false; n];
    let mut res = MatchingResult::new(g.n_offline());
    for (position, &v) in order.iter().enumerate() {
        active[v] = true;
        let t = position + 1;
        if t < cutoff {
            res.arrivals.push(ArrivalOutcome {
                position,
                vertex: v,
                type_node: None,
                probes: Vec::new(),
                matched: None,
            });
            continue;
        }
        let sol = solve_lp_config_subset(g, &active, &mut pool)?;
        let out = vertex_probe(g, v, &sol.per_vertex[v], rng, live_probe(g))?;
        let mut matched = None;
        if let Some(e) = out.proposal {
            let u = g.edges[e].u;
            if !res.offline_matched[u] {
                res.offline_matched[u] = true;
                res.total_weight += g.edges[e].w;
                matched = Some((u, g.edges[e].w));
            }
        }
        res.arrivals.push(ArrivalOutcome {
            position,
            vertex: v,
            type_node: None,
            probes: out.trace.into_iter().map(|(edge, active)| ProbeRecord { edge, active }).collect(),
            matched,
        });
    }
    debug_assert!(res.check_structure(g).is_ok());
    Ok(res)
}

/// Greedy vertex-weighted probing: each arrival probes its optimal star
/// plan against the currently unmatched offline set, committing to the
/// first active edge.
pub fn run_greedy_dp(
    g: &StochasticGraph,
    order: &[usize],
    rng: &mut Rng,
) -> Result<MatchingResult, OnlineError> {
    if !g.is_vertex_weighted() {
        return Err(OnlineError::NotVertexWeighted);
    }
    let mut res = MatchingResult::new(g.n_offline());
    let mut avail = vec![true; g.n_offline()];
    for (position, &v) in order.iter().enumerate() {
        let plan = dp_opt(&StarInstance::value_mode(g, v, |u| avail[u]));
        let mut probes = Vec::with_capacity(plan.edges.len());
        let mut matched = None;
        for &e in &plan.edges {
            let st = live_probe(g)(e, rng);
            probes.push(ProbeRecord { edge: e, active: st });
            if st {
                let u = g.edges[e].u;
                avail[u] = false;
                res.offline_matched[u] = true;
                res.total_weight += g.edges[e].w;
                matched = Some((u, g.edges[e].w));
                break;
            }
        }
        res.arrivals.push(ArrivalOutcome { position, vertex: v, type_node: None, probes, matched });
    }
    debug_assert!(res.check_structure(g).is_ok());
    Ok(res)
}

/// Parallel Monte-Carlo harness: trial `t` runs on the `t`-th stream of the
/// master seed, so results do not depend on scheduling.
pub fn monte_carlo<F>(trials: u64, seed: u64, f: F) -> Estimate
where
    F: Fn(&mut Rng, u64) -> f64 + Sync,
{
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(seed, t);
            f(&mut rng, t)
        })
        .collect();
    Estimate::from_samples(&samples)
}

/// Mean performance under the worst of the given arrival permutations.
pub fn worst_permutation<F>(perms: &[Vec<usize>], trials: u64, seed: u64, f: F) -> (Vec<usize>, Estimate)
where
    F: Fn(&[usize], &mut Rng, u64) -> f64 + Sync,
{
    let mut worst: Option<(Vec<usize>, Estimate)> = None;
    for (k, perm) in perms.iter().enumerate() {
        let est = monte_carlo(trials, seed.wrapping_add(k as u64 * 0x9e37_79b9), |rng, t| {
            f(perm, rng, t)
        });
        if worst.as_ref().is_none_or(|(_, w)| est.mean < w.mean) {
            worst = Some((perm.clone(), est));
        }
    }
    worst.expect("at least one permutation")
}

/// All permutations of `0..k` (factorially many; keep `k` small).
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..k).collect(), &mut Vec::new(), &mut out);
    out
}

//! Ground-truth benchmarks at tiny scale.
//!
//! The adaptive benchmark may interleave probes across online vertices
//! arbitrarily; per the usual reductions it probes an edge only when the
//! match could be kept, and keeps every active probe. Probed-inactive edges
//! are tracked as sets, which permutation-closure of the constraints makes
//! lossless. The non-adaptive benchmark fixes all probes up front; the
//! oracle enumerates deterministic plans with each vertex's probes
//! contiguous and ordered by nonincreasing weight (within a contiguous
//! block the first active available edge is matched, so that order
//! dominates), which is exact for unit patience — the regime the adaptivity
//! gap experiment runs in.

use crate::model::{EdgeId, StochasticGraph};
use crate::star::{dp_opt, StarInstance};
use crate::stats::Estimate;
use rand::Rng as _;
use std::collections::HashMap;
use thiserror::Error;

/// State-space guard for the exact benchmarks.
pub const MAX_ORACLE_EDGES: usize = 9;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance too large for exact evaluation: {0}")]
    TooLarge(String),
    #[error("bad experiment parameters: {0}")]
    BadParams(String),
}

struct Compact {
    /// probe edges (p > 0)
    edges: Vec<EdgeId>,
    /// compact offline index per probe edge
    off_of: Vec<usize>,
    /// compact online index per probe edge
    on_of: Vec<usize>,
    n_off: usize,
    n_on: usize,
    /// probe edges of each compact online vertex
    per_online: Vec<Vec<usize>>,
}

fn compact(g: &StochasticGraph) -> Result<Compact, OracleError> {
    let edges: Vec<EdgeId> = (0..g.edges.len()).filter(|&e| g.edges[e].p > 0.0).collect();
    if edges.len() > MAX_ORACLE_EDGES {
        return Err(OracleError::TooLarge(format!(
            "{} probe edges, oracle supports {MAX_ORACLE_EDGES}",
            edges.len()
        )));
    }
    let mut off_map = HashMap::new();
    let mut on_map = HashMap::new();
    let mut off_of = Vec::new();
    let mut on_of = Vec::new();
    for &e in &edges {
        let nu = off_map.len();
        let u = *off_map.entry(g.edges[e].u).or_insert(nu);
        let nv = on_map.len();
        let v = *on_map.entry(g.edges[e].v).or_insert(nv);
        off_of.push(u);
        on_of.push(v);
    }
    let n_on = on_map.len();
    let mut per_online = vec![Vec::new(); n_on];
    for (k, _) in edges.iter().enumerate() {
        per_online[on_of[k]].push(k);
    }
    Ok(Compact { edges, off_of, on_of, n_off: off_map.len(), n_on, per_online })
}

/// Exact value of the offline adaptive benchmark: memoized maximization
/// over all next-probe choices, matching every active probe immediately.
pub fn brute_force_opt(g: &StochasticGraph) -> Result<f64, OracleError> {
    let c = compact(g)?;
    // state bits: [0..n_off) availability, [n_off..n_off+n_on) matched,
    // then one probed-inactive bit per edge
    let avail_all: u64 = (1u64 << c.n_off) - 1;
    let matched_shift = c.n_off;
    let probed_shift = c.n_off + c.n_on;
    let mut memo: HashMap<u64, f64> = HashMap::new();

    fn value(
        g: &StochasticGraph,
        c: &Compact,
        memo: &mut HashMap<u64, f64>,
        state: u64,
        matched_shift: usize,
        probed_shift: usize,
    ) -> f64 {
        if let Some(&v) = memo.get(&state) {
            return v;
        }
        let mut best = 0.0f64;
        for k in 0..c.edges.len() {
            let e = c.edges[k];
            let u = c.off_of[k];
            let v = c.on_of[k];
            if state & (1 << u) == 0 {
                continue; // offline endpoint taken
            }
            if state & (1 << (matched_shift + v)) != 0 {
                continue; // online vertex already matched
            }
            if state & (1 << (probed_shift + k)) != 0 {
                continue; // already probed (and inactive)
            }
            // feasibility of the probed-inactive set extended by this edge
            let mut positions: Vec<usize> = Vec::new();
            for &j in &c.per_online[v] {
                if state & (1 << (probed_shift + j)) != 0 {
                    positions.push(g.position_in_vertex(c.edges[j]));
                }
            }
            positions.push(g.position_in_vertex(e));
            if !g.feasible_positions(g.edges[e].v, &positions) {
                continue;
            }
            let p = g.edges[e].p;
            // active: match immediately; clear the vertex's probe bits
            let mut matched_state = state & !(1 << u);
            matched_state |= 1 << (matched_shift + v);
            for &j in &c.per_online[v] {
                matched_state &= !(1 << (probed_shift + j));
            }
            let win = g.edges[e].w
                + value(g, c, memo, matched_state, matched_shift, probed_shift);
            let lose = value(
                g,
                c,
                memo,
                state | (1 << (probed_shift + k)),
                matched_shift,
                probed_shift,
            );
            let total = p * win + (1.0 - p) * lose;
            if total > best {
                best = total;
            }
        }
        memo.insert(state, best);
        best
    }

    Ok(value(g, &c, &mut memo, avail_all, matched_shift, probed_shift))
}

/// Enumerate the feasible probe-edge subsets of a compact online vertex,
/// the empty set included.
fn feasible_sets(g: &StochasticGraph, c: &Compact, v: usize) -> Vec<Vec<usize>> {
    let ks = &c.per_online[v];
    let vertex = g.edges[c.edges[ks[0]]].v;
    let mut out = Vec::new();
    for mask in 0u32..(1 << ks.len()) {
        let chosen: Vec<usize> =
            (0..ks.len()).filter(|&i| mask & (1 << i) != 0).map(|i| ks[i]).collect();
        let positions: Vec<usize> =
            chosen.iter().map(|&k| g.position_in_vertex(c.edges[k])).collect();
        if chosen.is_empty() || g.feasible_positions(vertex, &positions) {
            out.push(chosen);
        }
    }
    out
}

/// Exact value of the best deterministic non-adaptive plan with contiguous
/// per-vertex probing and immediate acceptance.
pub fn brute_force_nonadaptive(g: &StochasticGraph) -> Result<f64, OracleError> {
    let c = compact(g)?;
    if c.n_on == 0 {
        return Ok(0.0);
    }
    // fast path: at most one probe everywhere and equal weights reduce the
    // plan to an assignment of at most one probe edge per online vertex
    let unit = (0..g.n_online())
        .all(|v| g.online[v].constraint.max_probes(g.online[v].incident.len()) <= 1);
    let w0 = g.edges[c.edges[0]].w;
    let unweighted = c.edges.iter().all(|&e| (g.edges[e].w - w0).abs() <= 1e-12);
    if unit && unweighted {
        return Ok(w0 * best_unit_assignment(g, &c));
    }

    // order each chosen set by nonincreasing weight
    let sort_block = |set: &[usize]| {
        let mut block = set.to_vec();
        block.sort_by(|&a, &b| {
            let (ea, eb) = (c.edges[a], c.edges[b]);
            g.edges[eb]
                .w
                .partial_cmp(&g.edges[ea].w)
                .unwrap()
                .then(g.edges[eb].p.partial_cmp(&g.edges[ea].p).unwrap())
                .then(ea.cmp(&eb))
        });
        block
    };
    let sets_per_v: Vec<Vec<Vec<usize>>> =
        (0..c.n_on).map(|v| feasible_sets(g, &c, v)).collect();
    let combos: usize = sets_per_v.iter().map(|s| s.len()).product::<usize>()
        * (1..=c.n_on).product::<usize>();
    if combos > 2_000_000 {
        return Err(OracleError::TooLarge(format!("{combos} non-adaptive plans")));
    }

    // expectation of a fixed plan (blocks in order), immediate acceptance
    fn eval(
        g: &StochasticGraph,
        c: &Compact,
        blocks: &[Vec<usize>],
        b: usize,
        j: usize,
        avail: u64,
    ) -> f64 {
        if b == blocks.len() {
            return 0.0;
        }
        if j == blocks[b].len() {
            return eval(g, c, blocks, b + 1, 0, avail);
        }
        let k = blocks[b][j];
        let e = c.edges[k];
        let p = g.edges[e].p;
        let u = c.off_of[k];
        let win = if avail & (1 << u) != 0 {
            // matched: the rest of this block is skipped
            g.edges[e].w + eval(g, c, blocks, b + 1, 0, avail & !(1 << u))
        } else {
            // active but the endpoint is taken: forced decline, keep probing
            eval(g, c, blocks, b, j + 1, avail)
        };
        let lose = eval(g, c, blocks, b, j + 1, avail);
        p * win + (1.0 - p) * lose
    }

    let perms = crate::online::all_permutations(c.n_on);
    let mut choice = vec![0usize; c.n_on];
    let mut best = 0.0f64;
    loop {
        let chosen: Vec<Vec<usize>> =
            (0..c.n_on).map(|v| sort_block(&sets_per_v[v][choice[v]])).collect();
        for perm in &perms {
            let blocks: Vec<Vec<usize>> = perm.iter().map(|&v| chosen[v].clone()).collect();
            let val = eval(g, &c, &blocks, 0, 0, (1u64 << c.n_off) - 1);
            if val > best {
                best = val;
            }
        }
        // advance the mixed-radix counter over set choices
        let mut i = 0;
        loop {
            if i == c.n_on {
                return Ok(best);
            }
            choice[i] += 1;
            if choice[i] < sets_per_v[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Unit-patience unweighted fast path: each online vertex probes at most one
/// edge, so the expected matching size is `sum_u 1 - prod (1 - p)` over the
/// chosen edges, independent of order.
fn best_unit_assignment(g: &StochasticGraph, c: &Compact) -> f64 {
    fn rec(g: &StochasticGraph, c: &Compact, v: usize, fail: &mut Vec<f64>) -> f64 {
        if v == c.n_on {
            return fail.iter().map(|&f| 1.0 - f).sum();
        }
        // choice: no probe
        let mut best = rec(g, c, v + 1, fail);
        for &k in &c.per_online[v] {
            let pos = [g.position_in_vertex(c.edges[k])];
            if !g.feasible_positions(g.edges[c.edges[k]].v, &pos) {
                continue;
            }
            let u = c.off_of[k];
            let old = fail[u];
            fail[u] *= 1.0 - g.edges[c.edges[k]].p;
            let val = rec(g, c, v + 1, fail);
            fail[u] = old;
            if val > best {
                best = val;
            }
        }
        best
    }
    let mut fail = vec![1.0f64; c.n_off];
    rec(g, c, 0, &mut fail)
}

/// Exact expected weight of the greedy vertex-weighted algorithm under a
/// fixed arrival order, by enumeration over edge outcomes.
pub fn exact_greedy_dp(g: &StochasticGraph, order: &[usize]) -> Result<f64, OracleError> {
    let c = compact(g)?;
    let mut off_index = HashMap::new();
    for (k, &e) in c.edges.iter().enumerate() {
        off_index.insert(g.edges[e].u, c.off_of[k]);
    }
    let mut memo: HashMap<(usize, u64), f64> = HashMap::new();
    fn value(
        g: &StochasticGraph,
        order: &[usize],
        off_index: &HashMap<usize, usize>,
        memo: &mut HashMap<(usize, u64), f64>,
        t: usize,
        avail: u64,
    ) -> f64 {
        if t == order.len() {
            return 0.0;
        }
        if let Some(&v) = memo.get(&(t, avail)) {
            return v;
        }
        let vt = order[t];
        let plan = dp_opt(&StarInstance::value_mode(g, vt, |u| {
            off_index.get(&u).is_some_and(|&i| avail & (1 << i) != 0)
        }));
        // walk the plan: stop at the first active edge
        let mut total = 0.0;
        let mut survive = 1.0;
        for &e in &plan.edges {
            let p = g.edges[e].p;
            let u = off_index[&g.edges[e].u];
            let after = value(g, order, off_index, memo, t + 1, avail & !(1 << u));
            total += survive * p * (g.edges[e].w + after);
            survive *= 1.0 - p;
        }
        total += survive * value(g, order, off_index, memo, t + 1, avail);
        memo.insert((t, avail), total);
        total
    }
    Ok(value(g, order, &off_index, &mut memo, 0, (1u64 << c.n_off) - 1))
}

/// Exact expected weight of the known-graph LP probing algorithm under a
/// fixed arrival order, by outcome-tree expansion over the string draws.
pub fn exact_known_graph(
    g: &StochasticGraph,
    sol: &crate::lp::ConfigLpSolution,
    order: &[usize],
) -> Result<f64, OracleError> {
    let c = compact(g)?;
    let support: usize = sol.per_vertex.iter().map(|s| s.len()).sum();
    if support > 50 {
        return Err(OracleError::TooLarge(format!("{support} support strings")));
    }
    let mut off_index = HashMap::new();
    for (k, &e) in c.edges.iter().enumerate() {
        off_index.insert(g.edges[e].u, c.off_of[k]);
    }
    let mut memo: HashMap<(usize, u64), f64> = HashMap::new();
    fn value(
        g: &StochasticGraph,
        sol: &crate::lp::ConfigLpSolution,
        order: &[usize],
        off_index: &HashMap<usize, usize>,
        memo: &mut HashMap<(usize, u64), f64>,
        t: usize,
        avail: u64,
    ) -> f64 {
        if t == order.len() {
            return 0.0;
        }
        if let Some(&v) = memo.get(&(t, avail)) {
            return v;
        }
        let vt = order[t];
        let mut total = 0.0;
        let mut mass = 0.0;
        for sm in &sol.per_vertex[vt] {
            mass += sm.x;
            // probe the string in order; the proposal is the first active
            let mut survive = 1.0;
            let mut acc = 0.0;
            for &e in &sm.edges {
                let p = g.edges[e].p;
                let u = off_index[&g.edges[e].u];
                let kept = if avail & (1 << u) != 0 {
                    g.edges[e].w
                        + value(g, sol, order, off_index, memo, t + 1, avail & !(1 << u))
                } else {
                    // proposal to a matched vertex is dropped
                    value(g, sol, order, off_index, memo, t + 1, avail)
                };
                acc += survive * p * kept;
                survive *= 1.0 - p;
            }
            acc += survive * value(g, sol, order, off_index, memo, t + 1, avail);
            total += sm.x * acc;
        }
        // residual mass (if any) behaves like the empty string
        if mass < 1.0 {
            total += (1.0 - mass) * value(g, sol, order, off_index, memo, t + 1, avail);
        }
        memo.insert((t, avail), total);
        total
    }
    Ok(value(g, sol, order, &off_index, &mut memo, 0, (1u64 << c.n_off) - 1))
}

/// Exact proposal probabilities of a probe distribution, by enumerating
/// (string draw x edge-state pattern). Independent of the prefix-product
/// route used to define edge variables.
pub fn exact_proposal_probabilities(
    g: &StochasticGraph,
    strings: &[crate::lp::StringMass],
) -> Vec<f64> {
    let mut out = vec![0.0; g.edges.len()];
    for sm in strings {
        let k = sm.edges.len();
        for pattern in 0u64..(1 << k) {
            let mut prob = sm.x;
            let mut first_active = None;
            for (i, &e) in sm.edges.iter().enumerate() {
                let active = pattern & (1 << i) != 0;
                prob *= if active { g.edges[e].p } else { 1.0 - g.edges[e].p };
                if active && first_active.is_none() {
                    first_active = Some(e);
                }
            }
            if let Some(e) = first_active {
                out[e] += prob;
            }
        }
    }
    out
}

/// Report of one adaptivity-gap run on the ER family.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub n: usize,
    pub s: usize,
    pub p: f64,
    /// Sequential greedy probing estimate, certifying the adaptive side.
    pub adaptive: Estimate,
    /// Exact value of the balanced non-adaptive assignment.
    pub nonadaptive_exact: f64,
    /// Monte-Carlo estimate of the same plan.
    pub nonadaptive: Estimate,
    /// Non-adaptive estimate over the certified adaptive value `s`.
    pub ratio: f64,
    /// Non-adaptive estimate over the adaptive Monte-Carlo estimate.
    pub ratio_vs_adaptive: f64,
}

/// Run the unit-patience adaptivity-gap experiment on the complete `s x n`
/// graph with uniform probability `p`: the adaptive side probes greedily
/// (its value approaches `s`), the non-adaptive side plays the best
/// balanced assignment.
pub fn adaptivity_gap_experiment(
    n: usize,
    p: f64,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<GapReport, OracleError> {
    if s == 0 || n == 0 || !(0.0..=1.0).contains(&p) || p <= 0.0 {
        return Err(OracleError::BadParams("need n, s >= 1 and p in (0, 1]".into()));
    }
    if s as f64 > p * n as f64 + 1e-9 {
        return Err(OracleError::BadParams(format!("s = {s} exceeds p*n = {}", p * n as f64)));
    }
    // adaptive: probe any available offline vertex at each arrival
    let adaptive = crate::online::monte_carlo(trials, seed, |rng, _| {
        let mut avail = s;
        let mut matched = 0u64;
        for _ in 0..n {
            if avail > 0 && rng.gen::<f64>() < p {
                avail -= 1;
                matched += 1;
            }
        }
        matched as f64
    });
    // balanced assignment: split the n probes as evenly as possible
    let q = n / s;
    let r = n % s;
    let counts: Vec<usize> = (0..s).map(|i| if i < r { q + 1 } else { q }).collect();
    let nonadaptive_exact: f64 =
        counts.iter().map(|&k| 1.0 - (1.0 - p).powi(k as i32)).sum();
    let counts_for_mc = counts.clone();
    let nonadaptive = crate::online::monte_carlo(trials, seed ^ 0xabcd, move |rng, _| {
        let mut matched = 0u64;
        for &k in &counts_for_mc {
            for _ in 0..k {
                if rng.gen::<f64>() < p {
                    matched += 1;
                    break;
                }
            }
        }
        matched as f64
    });
    Ok(GapReport {
        n,
        s,
        p,
        ratio: nonadaptive.mean / s as f64,
        ratio_vs_adaptive: nonadaptive.mean / adaptive.mean,
        adaptive,
        nonadaptive_exact,
        nonadaptive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::lp::solve_lp_config;
    use crate::model::{OfflineVertex, ProbingConstraint};

    #[test]
    fn unit_patience_two_offline_half() {
        // one online vertex, two offline, p = 1/2 each, unit patience
        let g = generate::star_graph(&[(0.5, 1.0), (0.5, 1.0)], ProbingConstraint::Patience(1));
        let opt = brute_force_opt(&g).unwrap();
        assert!((opt - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_star_collapses_to_dp() {
        let g = generate::star_graph(&[(0.6, 1.0), (0.5, 1.0)], ProbingConstraint::Patience(2));
        let opt = brute_force_opt(&g).unwrap();
        assert!((opt - 0.8).abs() < 1e-12);

        let g = generate::example_6_2(1.0 / 12.0);
        let opt = brute_force_opt(&g).unwrap();
        assert!((opt - 19.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn shared_offline_certain_edges() {
        let offline = vec![OfflineVertex { name: "u".into(), weight: 1.0 }];
        let online = vec![
            ("v0".into(), ProbingConstraint::Patience(1)),
            ("v1".into(), ProbingConstraint::Patience(1)),
        ];
        let g = StochasticGraph::new(offline, online, vec![(0, 0, 1.0, 1.0), (0, 1, 1.0, 1.0)])
            .unwrap();
        assert!((brute_force_opt(&g).unwrap() - 1.0).abs() < 1e-12);
        assert!((brute_force_nonadaptive(&g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_dominates_nonadaptive() {
        let mut rng = crate::rng::root(51);
        for _ in 0..25 {
            let g = generate::random_tiny(&mut rng, 6);
            let adaptive = brute_force_opt(&g).unwrap();
            let nonadaptive = brute_force_nonadaptive(&g).unwrap();
            assert!(
                nonadaptive <= adaptive + 1e-9,
                "nonadaptive {nonadaptive} > adaptive {adaptive}"
            );
        }
    }

    #[test]
    fn single_vertex_nonadaptive_equals_adaptive() {
        let mut rng = crate::rng::root(53);
        for _ in 0..25 {
            let g = generate::random_star(&mut rng, 5);
            let adaptive = brute_force_opt(&g).unwrap();
            let nonadaptive = brute_force_nonadaptive(&g).unwrap();
            assert!(
                (nonadaptive - adaptive).abs() <= 1e-9,
                "single star: {nonadaptive} vs {adaptive}"
            );
        }
    }

    #[test]
    fn two_by_two_certain_perfect_assignment() {
        let offline = vec![
            OfflineVertex { name: "u0".into(), weight: 1.0 },
            OfflineVertex { name: "u1".into(), weight: 1.0 },
        ];
        let online = vec![
            ("v0".into(), ProbingConstraint::Patience(1)),
            ("v1".into(), ProbingConstraint::Patience(1)),
        ];
        let mut edges = Vec::new();
        for v in 0..2 {
            for u in 0..2 {
                edges.push((u, v, 1.0, 1.0));
            }
        }
        let g = StochasticGraph::new(offline, online, edges).unwrap();
        assert!((brute_force_nonadaptive(&g).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lp_relaxes_brute_force() {
        let mut rng = crate::rng::root(57);
        for _ in 0..30 {
            let g = generate::random_tiny(&mut rng, 7);
            let opt = brute_force_opt(&g).unwrap();
            let lp = solve_lp_config(&g).unwrap().objective;
            assert!(opt <= lp + crate::lp::LP_TOL, "OPT {opt} > LP {lp}");
        }
    }

    #[test]
    fn greedy_exact_on_worked_example() {
        let g = generate::example_6_2(1.0 / 12.0);
        let v = exact_greedy_dp(&g, &[0]).unwrap();
        assert!((v - 19.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn known_graph_exact_single_edge() {
        let g = generate::star_graph(&[(0.5, 1.0)], ProbingConstraint::Patience(1));
        let sol = solve_lp_config(&g).unwrap();
        let xt = sol.edge_variables(&g);
        let v = exact_known_graph(&g, &sol, &[0]).unwrap();
        assert!((v - 0.5 * xt[0]).abs() < 1e-12);
    }

    #[test]
    fn all_zero_probability_graphs() {
        let g = generate::star_graph(&[(0.0, 1.0)], ProbingConstraint::Patience(1));
        assert_eq!(brute_force_opt(&g).unwrap(), 0.0);
        assert_eq!(brute_force_nonadaptive(&g).unwrap(), 0.0);
        assert_eq!(exact_greedy_dp(&g, &[0]).unwrap(), 0.0);
    }

    #[test]
    fn gap_experiment_stated_parameters() {
        let r = adaptivity_gap_experiment(2000, 0.02, 36, 10_000, 1234).unwrap();
        assert!(
            r.ratio >= 0.60 && r.ratio <= 0.68,
            "ratio {} outside the expected bracket",
            r.ratio
        );
        // the greedy certification comes out close to s
        assert!(r.adaptive.mean >= 0.9 * r.s as f64);
    }

    #[test]
    fn gap_experiment_degenerate_certain() {
        let r = adaptivity_gap_experiment(50, 1.0, 50, 2_000, 7).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert!((r.nonadaptive_exact - 50.0).abs() < 1e-12);
    }

    #[test]
    fn gap_experiment_rejects_bad_params() {
        assert!(adaptivity_gap_experiment(10, 0.1, 5, 10, 1).is_err());
    }

    #[test]
    fn exact_known_graph_matches_monte_carlo() {
        let mut rng = crate::rng::root(67);
        let g = generate::random_weighted(&mut rng, 3, 3, false);
        let sol = solve_lp_config(&g).unwrap();
        let order = [2usize, 0, 1];
        let exact = exact_known_graph(&g, &sol, &order).unwrap();
        let est = crate::online::monte_carlo(60_000, 8, |r, _| {
            crate::online::run_known_graph(&g, &sol, &order, r).unwrap().total_weight
        });
        assert!(
            (est.mean - exact).abs() <= 4.0 * est.sd / (est.n as f64).sqrt() + 1e-9,
            "exact {exact} vs MC {}",
            est.mean
        );
    }

    #[test]
    fn exact_greedy_matches_monte_carlo() {
        let mut rng = crate::rng::root(61);
        let g = generate::random_vertex_weighted(&mut rng, 3, 3, 2);
        let order = [0usize, 1, 2];
        let exact = exact_greedy_dp(&g, &order).unwrap();
        let est = crate::online::monte_carlo(60_000, 5, |r, _| {
            crate::online::run_greedy_dp(&g, &order, r).unwrap().total_weight
        });
        assert!(
            (est.mean - exact).abs() <= 4.0 * est.sd / (est.n as f64).sqrt() + 1e-9,
            "exact {exact} vs MC {}",
            est.mean
        );
    }
}

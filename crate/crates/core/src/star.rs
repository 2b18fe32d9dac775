//! Optimal probing of a single online vertex.
//!
//! Given the set `R` of still-available offline neighbours, the best probe
//! string maximizes `val` over the feasible strings of the vertex's
//! constraint. Since rearranging a string into nonincreasing weight order
//! never decreases `val`, the search runs over weight-sorted subsets: a DP
//! on (sorted index, probes left) for patience, a DP on (sorted index,
//! residual budget) memoized on reachable residuals for knapsack, and a
//! memoized DFS over prefix sets for explicit families.
//!
//! The same routine prices columns for the configuration LP: shift each
//! weight by the offline dual, drop the now-negative edges, and compare the
//! optimum against the online dual.

use crate::model::{EdgeId, OfflineId, OnlineId, ProbingConstraint, StochasticGraph, BUDGET_TOL};
use std::collections::HashMap;

/// One candidate edge of a star, carrying the effective weight used for the
/// current solve (true weight in value mode, dual-shifted weight in pricing
/// mode).
#[derive(Debug, Clone, Copy)]
pub struct StarEdge {
    pub edge: EdgeId,
    pub u: OfflineId,
    pub p: f64,
    pub weight: f64,
    /// Position within the vertex's incident list, for constraint queries.
    pub pos: usize,
}

/// A single-vertex probing problem: the vertex's constraint restricted to an
/// available offline set, with per-edge effective weights.
#[derive(Debug, Clone)]
pub struct StarInstance<'a> {
    pub v: OnlineId,
    constraint: &'a ProbingConstraint,
    /// Sorted nonincreasing by (weight, p, edge id descending on weight and
    /// p, ascending on id).
    edges: Vec<StarEdge>,
}

/// The optimal probe string of a star, in nonincreasing effective-weight
/// order, together with its value.
#[derive(Debug, Clone)]
pub struct StarPlan {
    pub edges: Vec<EdgeId>,
    pub value: f64,
}

impl StarPlan {
    pub fn empty() -> Self {
        StarPlan { edges: Vec::new(), value: 0.0 }
    }
}

impl<'a> StarInstance<'a> {
    /// Value mode: true edge weights, availability given by `avail`.
    pub fn value_mode(
        g: &'a StochasticGraph,
        v: OnlineId,
        avail: impl Fn(OfflineId) -> bool,
    ) -> Self {
        Self::with_weights(g, v, |e| if avail(g.edges[e].u) { Some(g.edges[e].w) } else { None })
    }

    /// Pricing mode: weights shifted by the offline duals; edges whose
    /// shifted weight is negative are dropped.
    pub fn pricing_mode(g: &'a StochasticGraph, v: OnlineId, alpha: &[f64]) -> Self {
        Self::with_weights(g, v, |e| {
            let shifted = g.edges[e].w - alpha[g.edges[e].u];
            if shifted >= 0.0 {
                Some(shifted)
            } else {
                None
            }
        })
    }

    /// General constructor: `weight_of` returns the effective weight of an
    /// edge, or `None` to exclude it. Zero-probability edges are always
    /// pruned.
    pub fn with_weights(
        g: &'a StochasticGraph,
        v: OnlineId,
        weight_of: impl Fn(EdgeId) -> Option<f64>,
    ) -> Self {
        let mut edges: Vec<StarEdge> = g
            .online[v]
            .incident
            .iter()
            .filter(|&&e| g.edges[e].p > 0.0)
            .filter_map(|&e| {
                weight_of(e).map(|w| StarEdge {
                    edge: e,
                    u: g.edges[e].u,
                    p: g.edges[e].p,
                    weight: w,
                    pos: g.position_in_vertex(e),
                })
            })
            .collect();
        edges.sort_by(|a, b| {
            b.weight
                .partial_cmp(&a.weight)
                .unwrap()
                .then(b.p.partial_cmp(&a.p).unwrap())
                .then(a.edge.cmp(&b.edge))
        });
        StarInstance { v, constraint: &g.online[v].constraint, edges }
    }

    pub fn edges(&self) -> &[StarEdge] {
        &self.edges
    }
}

/// Optimal probe string and value for a star. Returns the empty plan when no
/// edge is available.
pub fn dp_opt(inst: &StarInstance) -> StarPlan {
    let m = inst.edges.len();
    if m == 0 {
        return StarPlan::empty();
    }
    match inst.constraint {
        ProbingConstraint::Patience(l) => dp_patience(inst, (*l).min(m)),
        ProbingConstraint::Knapsack { budget, costs } => dp_knapsack(inst, *budget, costs),
        ProbingConstraint::Family(f) => dp_family(inst, f),
    }
}

fn dp_patience(inst: &StarInstance, l: usize) -> StarPlan {
    let m = inst.edges.len();
    // f[i][k] = best value from sorted index i on with k probes left.
    let mut f = vec![vec![0.0f64; l + 1]; m + 1];
    for i in (0..m).rev() {
        let e = &inst.edges[i];
        for k in 1..=l {
            let skip = f[i + 1][k];
            let probe = e.p * e.weight + (1.0 - e.p) * f[i + 1][k - 1];
            // ties go to the shorter string
            f[i][k] = if probe > skip { probe } else { skip };
        }
    }
    let mut edges = Vec::new();
    let mut k = l;
    for i in 0..m {
        if k == 0 {
            break;
        }
        let e = &inst.edges[i];
        let probe = e.p * e.weight + (1.0 - e.p) * f[i + 1][k - 1];
        if probe > f[i + 1][k] {
            edges.push(e.edge);
            k -= 1;
        }
    }
    StarPlan { value: f[0][l], edges }
}

fn dp_knapsack(inst: &StarInstance, budget: f64, costs: &[f64]) -> StarPlan {
    struct Ctx<'b> {
        edges: &'b [StarEdge],
        costs: &'b [f64],
        memo: HashMap<(usize, u64), f64>,
    }
    fn best(ctx: &mut Ctx, i: usize, residual: f64) -> f64 {
        if i == ctx.edges.len() {
            return 0.0;
        }
        let key = (i, residual.to_bits());
        if let Some(&v) = ctx.memo.get(&key) {
            return v;
        }
        let e = &ctx.edges[i];
        let skip = best(ctx, i + 1, residual);
        let cost = ctx.costs[e.pos];
        let value = if cost <= residual + BUDGET_TOL {
            let probe = e.p * e.weight + (1.0 - e.p) * best(ctx, i + 1, residual - cost);
            if probe > skip {
                probe
            } else {
                skip
            }
        } else {
            skip
        };
        ctx.memo.insert(key, value);
        value
    }
    let mut ctx = Ctx { edges: &inst.edges, costs, memo: HashMap::new() };
    let value = best(&mut ctx, 0, budget);
    // replay the decisions
    let mut edges = Vec::new();
    let mut residual = budget;
    for i in 0..inst.edges.len() {
        let e = &inst.edges[i];
        let cost = costs[e.pos];
        if cost <= residual + BUDGET_TOL {
            let probe = e.p * e.weight + (1.0 - e.p) * best(&mut ctx, i + 1, residual - cost);
            if probe > best(&mut ctx, i + 1, residual) {
                edges.push(e.edge);
                residual -= cost;
            }
        }
    }
    StarPlan { value, edges }
}

fn dp_family(inst: &StarInstance, fam: &crate::model::SetFamily) -> StarPlan {
    let m = inst.edges.len();
    // Suffix bound for pruning: expected reward from index i on is at most
    // (chance anything activates) * (largest remaining weight).
    let mut bound = vec![0.0f64; m + 1];
    let mut max_w: f64 = 0.0;
    let mut all_fail = 1.0;
    for i in (0..m).rev() {
        max_w = max_w.max(inst.edges[i].weight);
        all_fail *= 1.0 - inst.edges[i].p;
        bound[i] = (1.0 - all_fail) * max_w;
    }
    struct Ctx<'b> {
        edges: &'b [StarEdge],
        fam: &'b crate::model::SetFamily,
        bound: &'b [f64],
        memo: HashMap<(usize, u64), f64>,
    }
    fn best(ctx: &mut Ctx, i: usize, chosen: u64) -> f64 {
        if i == ctx.edges.len() || ctx.bound[i] <= 0.0 {
            return 0.0;
        }
        let key = (i, chosen);
        if let Some(&v) = ctx.memo.get(&key) {
            return v;
        }
        let e = ctx.edges[i];
        let skip = best(ctx, i + 1, chosen);
        let with = chosen | (1 << e.pos);
        let value = if ctx.fam.contains(with) {
            let probe = e.p * e.weight + (1.0 - e.p) * best(ctx, i + 1, with);
            if probe > skip {
                probe
            } else {
                skip
            }
        } else {
            skip
        };
        ctx.memo.insert(key, value);
        value
    }
    let mut ctx = Ctx { edges: &inst.edges, fam, bound: &bound, memo: HashMap::new() };
    let value = best(&mut ctx, 0, 0);
    let mut edges = Vec::new();
    let mut chosen = 0u64;
    for i in 0..m {
        let e = inst.edges[i];
        let with = chosen | (1 << e.pos);
        if ctx.fam.contains(with) {
            let probe = e.p * e.weight + (1.0 - e.p) * best(&mut ctx, i + 1, with);
            if probe > best(&mut ctx, i + 1, chosen) {
                edges.push(e.edge);
                chosen = with;
            }
        }
    }
    StarPlan { value, edges }
}

/// Price one column of the configuration LP: run the star DP with weights
/// shifted by the offline duals and report `val(s*) - beta_v`.
pub fn price_column(
    g: &StochasticGraph,
    v: OnlineId,
    alpha: &[f64],
    beta_v: f64,
) -> (StarPlan, f64) {
    let inst = StarInstance::pricing_mode(g, v, alpha);
    let plan = dp_opt(&inst);
    let reduced = plan.value - beta_v;
    (plan, reduced)
}

/// Greedy filtering of a fixed ranking by the set `R` of available offline
/// vertices: append each ranked edge whose endpoint is available and whose
/// addition keeps the probed set feasible.
pub fn ranking_string(
    g: &StochasticGraph,
    v: OnlineId,
    ranking: &[EdgeId],
    avail: impl Fn(OfflineId) -> bool,
) -> Vec<EdgeId> {
    let mut out = Vec::new();
    let mut positions = Vec::new();
    for &e in ranking {
        if !avail(g.edges[e].u) {
            continue;
        }
        positions.push(g.position_in_vertex(e));
        if g.feasible_positions(v, &positions) {
            out.push(e);
        } else {
            positions.pop();
        }
    }
    out
}

/// Structural rankability: the sufficient conditions that admit a fixed
/// ranking reproducing the optimal star plan for every available set.
///
/// * unit patience: rank by `p * w` nonincreasing;
/// * unlimited patience: rank by weight;
/// * patience with agreeing weights and probabilities: rank by weight;
/// * unweighted knapsack whose costs anti-agree with probabilities: rank by
///   probability.
pub fn rankable_by_structure(g: &StochasticGraph, v: OnlineId) -> Option<Vec<EdgeId>> {
    let probe: Vec<EdgeId> = g.probe_edges(v).collect();
    let by_pw = |edges: &mut Vec<EdgeId>| {
        edges.sort_by(|&a, &b| {
            let ka = g.edges[a].p * g.edges[a].w;
            let kb = g.edges[b].p * g.edges[b].w;
            kb.partial_cmp(&ka).unwrap().then(a.cmp(&b))
        });
    };
    let by_weight = |edges: &mut Vec<EdgeId>| {
        edges.sort_by(|&a, &b| {
            g.edges[b]
                .w
                .partial_cmp(&g.edges[a].w)
                .unwrap()
                .then(g.edges[b].p.partial_cmp(&g.edges[a].p).unwrap())
                .then(a.cmp(&b))
        });
    };
    match &g.online[v].constraint {
        ProbingConstraint::Patience(l) => {
            let mut ranking = probe.clone();
            if *l == 1 {
                by_pw(&mut ranking);
                return Some(ranking);
            }
            if *l >= probe.len() {
                by_weight(&mut ranking);
                return Some(ranking);
            }
            // agreement: p_a <= p_b implies w_a <= w_b for all pairs
            let agree = probe.iter().all(|&a| {
                probe.iter().all(|&b| g.edges[a].p > g.edges[b].p || g.edges[a].w <= g.edges[b].w)
            });
            if agree {
                by_weight(&mut ranking);
                return Some(ranking);
            }
            None
        }
        ProbingConstraint::Knapsack { costs, .. } => {
            let unweighted = probe
                .iter()
                .all(|&e| (g.edges[e].w - g.edges[probe[0]].w).abs() <= 1e-12);
            let anti_agree = probe.iter().all(|&a| {
                probe.iter().all(|&b| {
                    g.edges[a].p > g.edges[b].p
                        || costs[g.position_in_vertex(a)] >= costs[g.position_in_vertex(b)]
                })
            });
            if unweighted && anti_agree {
                let mut ranking = probe;
                ranking.sort_by(|&a, &b| {
                    g.edges[b]
                        .p
                        .partial_cmp(&g.edges[a].p)
                        .unwrap()
                        .then(
                            costs[g.position_in_vertex(a)]
                                .partial_cmp(&costs[g.position_in_vertex(b)])
                                .unwrap(),
                        )
                        .then(a.cmp(&b))
                });
                return Some(ranking);
            }
            None
        }
        ProbingConstraint::Family(_) => None,
    }
}

/// Exhaustive rankability check for stars with at most 12 probe edges:
/// construct the candidate ranking by repeatedly taking the first edge of
/// the optimal plan on a shrinking available set, then verify that the
/// candidate reproduces the optimal value on every subset.
pub fn rankable_exhaustive(g: &StochasticGraph, v: OnlineId) -> Option<Vec<EdgeId>> {
    let probe: Vec<EdgeId> = g.probe_edges(v).collect();
    let m = probe.len();
    assert!(m <= 12, "exhaustive rankability check supports at most 12 edges");
    // candidate by iterated first elements
    let mut remaining: Vec<EdgeId> = probe.clone();
    let mut ranking = Vec::new();
    while !remaining.is_empty() {
        let inst = StarInstance::value_mode(g, v, |u| {
            remaining.iter().any(|&e| g.edges[e].u == u)
        });
        let plan = dp_opt(&inst);
        match plan.edges.first() {
            Some(&first) => {
                ranking.push(first);
                remaining.retain(|&e| e != first);
            }
            None => {
                // nothing left worth probing; order the rest by weight
                remaining.sort_by(|&a, &b| {
                    g.edges[b].w.partial_cmp(&g.edges[a].w).unwrap().then(a.cmp(&b))
                });
                ranking.append(&mut remaining);
            }
        }
    }
    if verify_ranking(g, v, &ranking, &probe) {
        Some(ranking)
    } else {
        None
    }
}

/// Check `val(ranking filtered by R) == OPT(v, R)` over every subset `R` of
/// the probe edges' endpoints.
fn verify_ranking(g: &StochasticGraph, v: OnlineId, ranking: &[EdgeId], probe: &[EdgeId]) -> bool {
    let m = probe.len();
    for mask in 0..(1u64 << m) {
        let avail = |u: OfflineId| {
            probe
                .iter()
                .enumerate()
                .any(|(i, &e)| g.edges[e].u == u && mask & (1 << i) != 0)
        };
        let inst = StarInstance::value_mode(g, v, avail);
        let opt = dp_opt(&inst).value;
        let ranked = ranking_string(g, v, ranking, avail);
        if (g.val(&ranked) - opt).abs() > 1e-12 {
            return false;
        }
    }
    true
}

/// Is this vertex rankable? Returns the ranking when one is found, trying
/// the structural conditions first and falling back to the exhaustive
/// verifier on small stars.
pub fn is_rankable(g: &StochasticGraph, v: OnlineId) -> Option<Vec<EdgeId>> {
    if let Some(r) = rankable_by_structure(g, v) {
        return Some(r);
    }
    if g.probe_edges(v).count() <= 12 {
        return rankable_exhaustive(g, v);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::model::ProbingConstraint;
    use rand::Rng as _;

    /// Independent oracle: maximize `val` over every feasible ordered string.
    pub(crate) fn exhaustive_star_opt(g: &StochasticGraph, v: OnlineId) -> f64 {
        let edges: Vec<EdgeId> = g.online[v].incident.clone();
        let mut best = 0.0f64;
        let mut string = Vec::new();
        fn rec(
            g: &StochasticGraph,
            v: OnlineId,
            edges: &[EdgeId],
            string: &mut Vec<EdgeId>,
            best: &mut f64,
        ) {
            let positions: Vec<usize> =
                string.iter().map(|&e| g.position_in_vertex(e)).collect();
            if !g.feasible_positions(v, &positions) {
                return;
            }
            *best = best.max(g.val(string));
            for &e in edges {
                if string.contains(&e) {
                    continue;
                }
                string.push(e);
                rec(g, v, edges, string, best);
                string.pop();
            }
        }
        rec(g, v, &edges, &mut string, &mut best);
        best
    }

    #[test]
    fn worked_example_both_available_sets() {
        let g = generate::example_6_2(1.0 / 12.0);
        let probe_set = |plan: &StarPlan| {
            let mut names: Vec<&str> =
                plan.edges.iter().map(|&e| g.offline[g.edges[e].u].name.as_str()).collect();
            names.sort_unstable();
            names
        };
        // all four offline vertices available
        let plan = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
        assert_eq!(probe_set(&plan), vec!["u1", "u2"]);
        assert_eq!(
            plan.edges.iter().map(|&e| g.edges[e].u).collect::<Vec<_>>(),
            vec![0, 1],
            "heavier edge is probed first"
        );
        assert!((plan.value - 19.0 / 18.0).abs() < 1e-12);

        // u2 removed: the plan changes completely (u3 and u4 have equal
        // weight, so their order is a tie; the probe set is what matters)
        let plan = dp_opt(&StarInstance::value_mode(&g, 0, |u| g.offline[u].name != "u2"));
        assert_eq!(probe_set(&plan), vec!["u3", "u4"]);
        assert!((plan.value - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn unit_and_double_patience() {
        let g = generate::star_graph(&[(0.6, 1.0), (0.5, 1.0)], ProbingConstraint::Patience(1));
        let plan = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
        assert_eq!(plan.edges.len(), 1);
        assert!((plan.value - 0.6).abs() < 1e-15);

        let g = generate::star_graph(&[(0.6, 1.0), (0.5, 1.0)], ProbingConstraint::Patience(2));
        let plan = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
        assert!((plan.value - 0.8).abs() < 1e-15);
    }

    #[test]
    fn empty_available_set() {
        let g = generate::star_graph(&[(0.6, 1.0)], ProbingConstraint::Patience(1));
        let plan = dp_opt(&StarInstance::value_mode(&g, 0, |_| false));
        assert!(plan.edges.is_empty());
        assert_eq!(plan.value, 0.0);
    }

    #[test]
    fn matches_exhaustive_search_on_random_stars() {
        let mut rng = crate::rng::root(17);
        for case in 0..300 {
            let g = generate::random_star(&mut rng, 6);
            let dp = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
            let brute = exhaustive_star_opt(&g, 0);
            assert!(
                (dp.value - brute).abs() <= 1e-12,
                "case {case}: dp {} vs brute {brute}",
                dp.value
            );
        }
    }

    #[test]
    fn monotone_in_available_set() {
        let mut rng = crate::rng::root(23);
        for _ in 0..100 {
            let g = generate::random_star(&mut rng, 6);
            let full = dp_opt(&StarInstance::value_mode(&g, 0, |_| true)).value;
            let k = g.offline.len();
            let mask: u64 = rng.gen_range(0..(1 << k));
            let sub = dp_opt(&StarInstance::value_mode(&g, 0, |u| mask & (1 << u) != 0)).value;
            assert!(sub <= full + 1e-12);
        }
    }

    #[test]
    fn pricing_examples() {
        // all duals above the weights: empty plan, reduced cost -beta
        let g = generate::star_graph(&[(0.5, 1.0), (0.7, 2.0)], ProbingConstraint::Patience(2));
        let (plan, rc) = price_column(&g, 0, &[5.0, 5.0], 0.4);
        assert!(plan.edges.is_empty());
        assert!((rc + 0.4).abs() < 1e-15);

        // zero duals reduce to plain dp_opt
        let (plan, rc) = price_column(&g, 0, &[0.0, 0.0], 0.0);
        let direct = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
        assert_eq!(plan.edges, direct.edges);
        assert!((rc - direct.value).abs() < 1e-15);

        // single edge p = 0.5, w = 2, alpha = 1, beta = 0.3
        let g = generate::star_graph(&[(0.5, 2.0)], ProbingConstraint::Patience(1));
        let (plan, rc) = price_column(&g, 0, &[1.0], 0.3);
        assert_eq!(plan.edges.len(), 1);
        assert!((rc - 0.2).abs() < 1e-15);
    }

    #[test]
    fn dropping_negative_weights_preserves_optimum() {
        // exhaustive search over all strings with signed weights agrees with
        // the DP run on the nonnegative part
        let mut rng = crate::rng::root(31);
        for _ in 0..200 {
            let m = rng.gen_range(1..=5);
            let pairs: Vec<(f64, f64)> =
                (0..m).map(|_| (rng.gen_range(0.05..1.0), rng.gen_range(0.0..2.0))).collect();
            let alpha: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..2.0)).collect();
            let l = rng.gen_range(1..=m);
            let g = generate::star_graph(&pairs, ProbingConstraint::Patience(l));
            let shifted: Vec<(f64, f64)> =
                pairs.iter().zip(&alpha).map(|(&(p, w), &a)| (p, w - a)).collect();
            let brute = exhaustive_signed(&shifted, l);
            let (plan, rc) = price_column(&g, 0, &alpha, 0.0);
            assert!(
                (rc - brute).abs() <= 1e-12,
                "pricing {rc} vs signed exhaustive {brute} ({:?})",
                plan.edges
            );
        }
    }

    /// Exhaustive maximum of `val` over ordered index strings of length at
    /// most `l`, allowing negative weights.
    fn exhaustive_signed(pairs: &[(f64, f64)], l: usize) -> f64 {
        fn val(pairs: &[(f64, f64)], s: &[usize]) -> f64 {
            let mut survive = 1.0;
            let mut total = 0.0;
            for &i in s {
                total += pairs[i].1 * pairs[i].0 * survive;
                survive *= 1.0 - pairs[i].0;
            }
            total
        }
        fn rec(pairs: &[(f64, f64)], l: usize, s: &mut Vec<usize>, best: &mut f64) {
            *best = best.max(val(pairs, s));
            if s.len() == l {
                return;
            }
            for i in 0..pairs.len() {
                if s.contains(&i) {
                    continue;
                }
                s.push(i);
                rec(pairs, l, s, best);
                s.pop();
            }
        }
        let mut best = 0.0;
        rec(pairs, l, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn knapsack_dp_respects_budget() {
        let mut rng = crate::rng::root(41);
        for _ in 0..200 {
            let m = rng.gen_range(1..=6);
            let pairs: Vec<(f64, f64)> =
                (0..m).map(|_| (rng.gen_range(0.05..1.0), rng.gen_range(0.0..2.0))).collect();
            let costs: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
            let budget = rng.gen_range(0.2..2.0);
            let g = generate::star_graph(
                &pairs,
                ProbingConstraint::Knapsack { budget, costs: costs.clone() },
            );
            let dp = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
            let total: f64 = dp.edges.iter().map(|&e| costs[g.position_in_vertex(e)]).sum();
            assert!(total <= budget + 1e-9);
            let brute = exhaustive_star_opt(&g, 0);
            assert!((dp.value - brute).abs() <= 1e-12);
        }
    }

    #[test]
    fn family_dp_matches_exhaustive() {
        let mut rng = crate::rng::root(43);
        for _ in 0..100 {
            let g = generate::random_family_star(&mut rng, 5);
            let dp = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
            let brute = exhaustive_star_opt(&g, 0);
            assert!((dp.value - brute).abs() <= 1e-12);
        }
    }

    #[test]
    fn rankability_of_unit_and_unlimited_patience() {
        let g = generate::star_graph(&[(0.2, 3.0), (0.9, 1.0)], ProbingConstraint::Patience(1));
        let ranking = rankable_by_structure(&g, 0).expect("unit patience is rankable");
        // ranked by p*w: 0.9 beats 0.6
        assert_eq!(ranking[0], 1);

        let g = generate::star_graph(&[(0.2, 3.0), (0.9, 1.0)], ProbingConstraint::Patience(2));
        assert!(rankable_by_structure(&g, 0).is_some());
        assert!(rankable_exhaustive(&g, 0).is_some());
    }

    #[test]
    fn worked_example_is_not_rankable() {
        let g = generate::example_6_2(1.0 / 12.0);
        assert!(rankable_by_structure(&g, 0).is_none());
        assert!(rankable_exhaustive(&g, 0).is_none());
        assert!(is_rankable(&g, 0).is_none());
    }

    #[test]
    fn agreeing_weights_are_rankable() {
        // higher probability pairs with higher weight
        let g = generate::star_graph(
            &[(0.9, 2.0), (0.5, 1.5), (0.2, 1.0)],
            ProbingConstraint::Patience(2),
        );
        let ranking = rankable_by_structure(&g, 0).expect("agreeing weights");
        assert_eq!(ranking, vec![0, 1, 2]);
        assert!(rankable_exhaustive(&g, 0).is_some());
    }
}

//! Instance builders and generator families.
//!
//! Everything here is deterministic given the supplied RNG, so generated
//! suites are reproducible from a seed.

use crate::model::{
    KnownIdInput, OfflineVertex, ProbingConstraint, SetFamily, StochasticGraph,
};
use crate::rng::Rng;
use rand::seq::SliceRandom;
use rand::Rng as _;

/// One online vertex with one offline vertex per `(p, w)` pair; offline
/// weights mirror the edge weights so the graph is vertex-weighted.
pub fn star_graph(pairs: &[(f64, f64)], constraint: ProbingConstraint) -> StochasticGraph {
    let offline = pairs
        .iter()
        .enumerate()
        .map(|(i, &(_, w))| OfflineVertex { name: format!("u{i}"), weight: w })
        .collect();
    let edges = pairs.iter().enumerate().map(|(i, &(p, w))| (i, 0, p, w)).collect();
    StochasticGraph::new(offline, vec![("v".into(), constraint)], edges).unwrap()
}

/// The patience-2 star whose optimal probe set is not prefix-stable: four
/// offline vertices with probabilities (1/3, 1, 1/2, 2/3) and weights
/// (1+eps, 1+eps/2, 1, 1).
pub fn example_6_2(eps: f64) -> StochasticGraph {
    let offline = vec![
        OfflineVertex { name: "u1".into(), weight: 1.0 + eps },
        OfflineVertex { name: "u2".into(), weight: 1.0 + eps / 2.0 },
        OfflineVertex { name: "u3".into(), weight: 1.0 },
        OfflineVertex { name: "u4".into(), weight: 1.0 },
    ];
    let ps = [1.0 / 3.0, 1.0, 1.0 / 2.0, 2.0 / 3.0];
    let edges = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| (i, 0usize, p, offline[i].weight))
        .collect();
    StochasticGraph::new(offline, vec![("v".into(), ProbingConstraint::Patience(2))], edges)
        .unwrap()
}

/// Complete `s x n` unweighted bipartite graph with uniform edge probability
/// `p` and unit patience: the adaptivity-gap family.
pub fn er_gap(n: usize, p: f64, s: usize) -> StochasticGraph {
    let offline =
        (0..s).map(|i| OfflineVertex { name: format!("u{i}"), weight: 1.0 }).collect();
    let online = (0..n).map(|j| (format!("v{j}"), ProbingConstraint::Patience(1))).collect();
    let mut edges = Vec::with_capacity(s * n);
    for j in 0..n {
        for i in 0..s {
            edges.push((i, j, p, 1.0));
        }
    }
    StochasticGraph::new(offline, online, edges).unwrap()
}

/// Random star over up to `max_edges` edges with a random constraint
/// (patience, knapsack, or explicit family).
pub fn random_star(rng: &mut Rng, max_edges: usize) -> StochasticGraph {
    let m = rng.gen_range(1..=max_edges);
    let pairs: Vec<(f64, f64)> =
        (0..m).map(|_| (rng.gen_range(0.05..=1.0), rng.gen_range(0.0..2.0))).collect();
    let constraint = random_constraint(rng, m);
    star_graph(&pairs, constraint)
}

/// Random star whose constraint is an explicit downward-closed family.
pub fn random_family_star(rng: &mut Rng, max_edges: usize) -> StochasticGraph {
    let m = rng.gen_range(1..=max_edges);
    let pairs: Vec<(f64, f64)> =
        (0..m).map(|_| (rng.gen_range(0.05..=1.0), rng.gen_range(0.0..2.0))).collect();
    star_graph(&pairs, random_family(rng, m))
}

fn random_family(rng: &mut Rng, m: usize) -> ProbingConstraint {
    let n_sets = rng.gen_range(1..=3);
    let sets: Vec<Vec<usize>> = (0..n_sets)
        .map(|_| {
            let k = rng.gen_range(0..=m);
            let mut idx: Vec<usize> = (0..m).collect();
            idx.shuffle(rng);
            idx.truncate(k);
            idx
        })
        .collect();
    ProbingConstraint::Family(SetFamily::closure(m, &sets).unwrap())
}

fn random_constraint(rng: &mut Rng, m: usize) -> ProbingConstraint {
    match rng.gen_range(0..3) {
        0 => ProbingConstraint::Patience(rng.gen_range(1..=m)),
        1 => {
            let costs: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
            let budget = rng.gen_range(0.2..(0.4 + m as f64 * 0.4));
            ProbingConstraint::Knapsack { budget, costs }
        }
        _ => random_family(rng, m),
    }
}

/// Random tiny bipartite instance with at most `max_edges` edges; constraints
/// are patience <= 2 or two-set explicit families. Used for brute-force
/// comparisons.
pub fn random_tiny(rng: &mut Rng, max_edges: usize) -> StochasticGraph {
    loop {
        let n_u = rng.gen_range(1..=3);
        let n_v = rng.gen_range(1..=3);
        let offline = (0..n_u)
            .map(|i| OfflineVertex { name: format!("u{i}"), weight: 1.0 })
            .collect::<Vec<_>>();
        // pick a random edge subset of the complete bipartite graph
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for u in 0..n_u {
            for v in 0..n_v {
                pairs.push((u, v));
            }
        }
        pairs.shuffle(rng);
        let keep = rng.gen_range(1..=pairs.len().min(max_edges));
        pairs.truncate(keep);
        let mut deg = vec![0usize; n_v];
        let mut edges = Vec::new();
        let mut order: Vec<(usize, usize)> = pairs.clone();
        order.sort();
        for (u, v) in order {
            let p = rng.gen_range(0.05..=1.0);
            let w = rng.gen_range(0.1..2.0);
            edges.push((u, v, p, w));
            deg[v] += 1;
        }
        let online = (0..n_v)
            .map(|v| {
                let c = if deg[v] == 0 || rng.gen_bool(0.6) {
                    ProbingConstraint::Patience(rng.gen_range(1..=2))
                } else {
                    // family given by up to two maximal sets
                    let m = deg[v];
                    let sets: Vec<Vec<usize>> = (0..2)
                        .map(|_| {
                            let k = rng.gen_range(0..=m);
                            let mut idx: Vec<usize> = (0..m).collect();
                            idx.shuffle(rng);
                            idx.truncate(k);
                            idx
                        })
                        .collect();
                    ProbingConstraint::Family(SetFamily::closure(m, &sets).unwrap())
                };
                (format!("v{v}"), c)
            })
            .collect();
        let g = StochasticGraph::new(offline, online, edges).unwrap();
        if g.edges.iter().any(|e| e.p > 0.0) {
            return g;
        }
    }
}

/// Random weighted instance with the requested constraint flavour.
pub fn random_weighted(
    rng: &mut Rng,
    n_offline: usize,
    n_online: usize,
    knapsack: bool,
) -> StochasticGraph {
    let offline = (0..n_offline)
        .map(|i| OfflineVertex { name: format!("u{i}"), weight: rng.gen_range(0.1..2.0) })
        .collect::<Vec<_>>();
    let mut edges = Vec::new();
    let mut deg = vec![0usize; n_online];
    for v in 0..n_online {
        for u in 0..n_offline {
            if rng.gen_bool(0.7) {
                edges.push((u, v, rng.gen_range(0.05..=1.0), rng.gen_range(0.1..2.0)));
                deg[v] += 1;
            }
        }
    }
    let online = (0..n_online)
        .map(|v| {
            let c = if knapsack && deg[v] > 0 {
                let costs: Vec<f64> = (0..deg[v]).map(|_| rng.gen_range(0.1..1.0)).collect();
                ProbingConstraint::Knapsack { budget: rng.gen_range(0.3..1.5), costs }
            } else {
                ProbingConstraint::Patience(rng.gen_range(1..=deg[v].max(1)))
            };
            (format!("v{v}"), c)
        })
        .collect();
    StochasticGraph::new(offline, online, edges).unwrap()
}

/// Vertex-weighted random instance: every edge weight equals its offline
/// endpoint's weight, as the greedy vertex-weighted algorithms require.
pub fn random_vertex_weighted(
    rng: &mut Rng,
    n_offline: usize,
    n_online: usize,
    max_patience: usize,
) -> StochasticGraph {
    let weights: Vec<f64> = (0..n_offline).map(|_| rng.gen_range(0.1..2.0)).collect();
    let offline = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| OfflineVertex { name: format!("u{i}"), weight: w })
        .collect::<Vec<_>>();
    let mut edges = Vec::new();
    let mut deg = vec![0usize; n_online];
    for v in 0..n_online {
        for u in 0..n_offline {
            if rng.gen_bool(0.75) {
                edges.push((u, v, rng.gen_range(0.05..=1.0), weights[u]));
                deg[v] += 1;
            }
        }
    }
    let online = (0..n_online)
        .map(|v| {
            (
                format!("v{v}"),
                ProbingConstraint::Patience(rng.gen_range(1..=max_patience.min(deg[v].max(1)))),
            )
        })
        .collect();
    StochasticGraph::new(offline, online, edges).unwrap()
}

/// Unit-patience vertex-weighted instance (always rankable).
pub fn random_unit_patience(rng: &mut Rng, n_offline: usize, n_online: usize) -> StochasticGraph {
    random_vertex_weighted(rng, n_offline, n_online, 1)
}

/// Rankable multi-patience instance: for every online vertex the incident
/// probabilities and offline weights agree (higher weight, higher
/// probability).
pub fn random_rankable_agreeing(
    rng: &mut Rng,
    n_offline: usize,
    n_online: usize,
) -> StochasticGraph {
    let mut weights: Vec<f64> = (0..n_offline).map(|_| rng.gen_range(0.1..2.0)).collect();
    weights.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let offline = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| OfflineVertex { name: format!("u{i}"), weight: w })
        .collect::<Vec<_>>();
    let mut edges = Vec::new();
    let mut deg = vec![0usize; n_online];
    for v in 0..n_online {
        // probabilities sorted like the weights, so every pair agrees
        let mut ps: Vec<f64> = (0..n_offline).map(|_| rng.gen_range(0.05..=1.0)).collect();
        ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for u in 0..n_offline {
            edges.push((u, v, ps[u], weights[u]));
            deg[v] += 1;
        }
    }
    let online = (0..n_online)
        .map(|v| (format!("v{v}"), ProbingConstraint::Patience(rng.gen_range(1..=deg[v].max(1)))))
        .collect();
    StochasticGraph::new(offline, online, edges).unwrap()
}

/// Vanishing-probability vertex-weighted instance: every edge probability is
/// at most `p_cap` (the regime of the asymptotic greedy guarantee).
pub fn random_small_prob(
    rng: &mut Rng,
    n_offline: usize,
    n_online: usize,
    p_cap: f64,
    max_patience: usize,
) -> StochasticGraph {
    let weights: Vec<f64> = (0..n_offline).map(|_| rng.gen_range(0.5..1.5)).collect();
    let offline = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| OfflineVertex { name: format!("u{i}"), weight: w })
        .collect::<Vec<_>>();
    let mut edges = Vec::new();
    for v in 0..n_online {
        for u in 0..n_offline {
            edges.push((u, v, rng.gen_range(0.01..p_cap), weights[u]));
        }
    }
    let online = (0..n_online)
        .map(|v| (format!("v{v}"), ProbingConstraint::Patience(rng.gen_range(1..=max_patience))))
        .collect();
    StochasticGraph::new(offline, online, edges).unwrap()
}

/// Random known-i.d. input: a type graph with `n_types` type nodes over
/// `n_offline` offline vertices and `n_arrivals` independent rows.
pub fn random_id_input(
    rng: &mut Rng,
    n_offline: usize,
    n_types: usize,
    n_arrivals: usize,
    iid: bool,
) -> KnownIdInput {
    let offline = (0..n_offline)
        .map(|i| OfflineVertex { name: format!("u{i}"), weight: 1.0 })
        .collect::<Vec<_>>();
    let mut edges = Vec::new();
    let mut deg = vec![0usize; n_types];
    for b in 0..n_types {
        for u in 0..n_offline {
            if rng.gen_bool(0.8) {
                edges.push((u, b, rng.gen_range(0.1..=1.0), rng.gen_range(0.1..1.5)));
                deg[b] += 1;
            }
        }
    }
    let online = (0..n_types)
        .map(|b| (format!("b{b}"), ProbingConstraint::Patience(rng.gen_range(1..=deg[b].max(1)))))
        .collect();
    let type_graph = StochasticGraph::new(offline, online, edges).unwrap();
    let make_row = |rng: &mut Rng| {
        let raw: Vec<f64> = (0..n_types).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        (0..n_types).map(|b| (b, raw[b] / total)).collect::<Vec<_>>()
    };
    let rows = if iid {
        let row = make_row(rng);
        vec![row; n_arrivals]
    } else {
        (0..n_arrivals).map(|_| make_row(rng)).collect()
    };
    KnownIdInput::new(type_graph, rows).unwrap()
}

/// Secretary-style instance: complete bipartite, every probe certain
/// (p = 1), i.i.d. uniform edge weights, unbounded patience.
pub fn secretary_instance(rng: &mut Rng, n_offline: usize, n_online: usize) -> StochasticGraph {
    let offline = (0..n_offline)
        .map(|i| OfflineVertex { name: format!("u{i}"), weight: 1.0 })
        .collect::<Vec<_>>();
    let mut edges = Vec::new();
    for v in 0..n_online {
        for u in 0..n_offline {
            edges.push((u, v, 1.0, rng.gen_range(0.0..1.0)));
        }
    }
    let online = (0..n_online)
        .map(|v| (format!("v{v}"), ProbingConstraint::Patience(n_offline)))
        .collect();
    StochasticGraph::new(offline, online, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_6_2_matches_stated_parameters() {
        let g = example_6_2(1.0 / 12.0);
        assert_eq!(g.offline.len(), 4);
        assert_eq!(g.online.len(), 1);
        assert!((g.edges[0].p - 1.0 / 3.0).abs() < 1e-15);
        assert!((g.offline[0].weight - (1.0 + 1.0 / 12.0)).abs() < 1e-15);
        assert!(g.is_vertex_weighted());
    }

    #[test]
    fn er_gap_shape() {
        let g = er_gap(5, 0.3, 2);
        assert_eq!(g.offline.len(), 2);
        assert_eq!(g.online.len(), 5);
        assert_eq!(g.edges.len(), 10);
        assert!(g.edges.iter().all(|e| e.p == 0.3 && e.w == 1.0));
    }

    #[test]
    fn tiny_instances_stay_tiny() {
        let mut rng = crate::rng::root(5);
        for _ in 0..50 {
            let g = random_tiny(&mut rng, 9);
            assert!(g.edges.len() <= 9);
        }
    }
}

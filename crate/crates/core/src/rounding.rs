//! Exact randomized rounding of configuration-LP solutions.
//!
//! `vertex_round` samples a probe string whose every length-`k` prefix lands
//! on a prescribed marginal exactly: walk the prefix tree, stopping at each
//! node with the complementary pass probability and otherwise descending
//! proportionally to the child marginals. `vertex_probe` draws a string from
//! an LP distribution, probes it in order under probe-commit, and returns
//! the first active edge; over the joint randomness each edge is proposed
//! with probability exactly `p_e * x~_e`.

use crate::lp::StringMass;
use crate::model::{EdgeId, EdgeString, OnlineId, StochasticGraph};
use crate::rng::Rng;
use rand::Rng as _;
use std::collections::HashMap;
use thiserror::Error;

/// Absolute tolerance on the marginal inequality at construction.
const MARGINAL_TOL: f64 = 1e-9;
/// Conditional probabilities may exceed 1 by at most this before erroring.
const CONDITIONAL_TOL: f64 = 1e-7;
/// Allowed slack on the total mass of a probe distribution.
const MASS_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum RoundingError {
    #[error("marginal inequality violated at prefix {prefix:?}: children {children} > node {node}")]
    MarginalViolation { prefix: Vec<EdgeId>, children: f64, node: f64 },
    #[error("probe distribution mass is {0}, expected 1")]
    BadMass(f64),
    #[error("drawn string is infeasible for its vertex")]
    InfeasibleString,
    #[error("prefix probability divides by zero survival (p = 1 edge inside {prefix:?})")]
    DegeneratePrefix { prefix: Vec<EdgeId> },
}

#[derive(Debug, Clone, Default)]
struct Node {
    y: f64,
    children: Vec<EdgeId>,
}

/// Consistent prefix marginals `y_v(s)` over a finite support, with
/// `y_v(λ) = 1` and, at every prefix, the children summing to at most the
/// node's own mass.
#[derive(Debug, Clone)]
pub struct PrefixMarginals {
    pub v: OnlineId,
    nodes: HashMap<Vec<EdgeId>, Node>,
}

impl PrefixMarginals {
    /// Build from a distribution over strings (masses summing to one): the
    /// marginal of a prefix is the total mass of strings extending it.
    pub fn from_distribution(
        v: OnlineId,
        strings: &[StringMass],
    ) -> Result<Self, RoundingError> {
        let total: f64 = strings.iter().map(|s| s.x).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(RoundingError::BadMass(total));
        }
        let mut nodes: HashMap<Vec<EdgeId>, Node> = HashMap::new();
        nodes.entry(Vec::new()).or_default().y = 1.0;
        for sm in strings {
            if sm.x <= 0.0 {
                continue;
            }
            for k in 1..=sm.edges.len() {
                let prefix = sm.edges[..k].to_vec();
                let entry = nodes.entry(prefix).or_default();
                entry.y += sm.x;
            }
        }
        let mut pm = PrefixMarginals { v, nodes };
        pm.link_children();
        pm.validate()?;
        Ok(pm)
    }

    /// Build from probe-prefix probabilities `x_v(s) = P[first |s| probes
    /// are s]` via `y = x / q(s minus its last edge)`. Strings extending
    /// past a certain (p = 1) edge are pruned: their survival is zero, so
    /// any positive mass there is an input error.
    pub fn from_prefix_probabilities(
        g: &StochasticGraph,
        v: OnlineId,
        probs: &[(Vec<EdgeId>, f64)],
    ) -> Result<Self, RoundingError> {
        let mut nodes: HashMap<Vec<EdgeId>, Node> = HashMap::new();
        nodes.entry(Vec::new()).or_default().y = 1.0;
        for (s, x) in probs {
            if *x <= 0.0 || s.is_empty() {
                continue;
            }
            let q = g.q(&s[..s.len() - 1]);
            if q <= 0.0 {
                if *x > MARGINAL_TOL {
                    return Err(RoundingError::DegeneratePrefix { prefix: s.clone() });
                }
                continue;
            }
            nodes.entry(s.clone()).or_default().y = x / q;
        }
        let mut pm = PrefixMarginals { v, nodes };
        pm.link_children();
        pm.validate()?;
        Ok(pm)
    }

    /// Raw marginals, for callers that already hold `y` values.
    pub fn from_raw(v: OnlineId, y: Vec<(Vec<EdgeId>, f64)>) -> Result<Self, RoundingError> {
        let mut nodes: HashMap<Vec<EdgeId>, Node> = HashMap::new();
        nodes.entry(Vec::new()).or_default().y = 1.0;
        for (s, val) in y {
            if s.is_empty() {
                continue; // y(λ) is fixed at 1
            }
            nodes.entry(s).or_default().y = val;
        }
        let mut pm = PrefixMarginals { v, nodes };
        pm.link_children();
        pm.validate()?;
        Ok(pm)
    }

    fn link_children(&mut self) {
        let keys: Vec<Vec<EdgeId>> = self.nodes.keys().cloned().collect();
        for key in keys {
            // register the whole prefix chain, creating zero-mass
            // intermediates where the input skipped them
            for k in 1..=key.len() {
                let parent = key[..k - 1].to_vec();
                let last = key[k - 1];
                self.nodes.entry(key[..k].to_vec()).or_default();
                let entry = self.nodes.entry(parent).or_default();
                if !entry.children.contains(&last) {
                    entry.children.push(last);
                }
            }
        }
        // make traversal order deterministic
        for node in self.nodes.values_mut() {
            node.children.sort_unstable();
        }
    }

    fn validate(&self) -> Result<(), RoundingError> {
        for (prefix, node) in &self.nodes {
            let child_sum: f64 = node
                .children
                .iter()
                .map(|&e| {
                    let mut k = prefix.clone();
                    k.push(e);
                    self.nodes.get(&k).map_or(0.0, |n| n.y)
                })
                .sum();
            if child_sum > node.y + MARGINAL_TOL {
                return Err(RoundingError::MarginalViolation {
                    prefix: prefix.clone(),
                    children: child_sum,
                    node: node.y,
                });
            }
        }
        Ok(())
    }

    pub fn y(&self, prefix: &[EdgeId]) -> f64 {
        self.nodes.get(prefix).map_or(0.0, |n| n.y)
    }

    /// Sample a string: every prefix `s` of length `k` appears as the first
    /// `k` characters with probability exactly `y(s)`.
    pub fn sample(&self, rng: &mut Rng) -> Result<Vec<EdgeId>, RoundingError> {
        let mut prefix: Vec<EdgeId> = Vec::new();
        loop {
            let node = self.nodes.get(&prefix).expect("walk stays on known prefixes");
            if node.y <= 0.0 || node.children.is_empty() {
                return Ok(prefix);
            }
            let mut weights = Vec::with_capacity(node.children.len());
            let mut child_sum = 0.0;
            for &e in &node.children {
                let mut k = prefix.clone();
                k.push(e);
                let y = self.nodes.get(&k).map_or(0.0, |n| n.y);
                weights.push(y);
                child_sum += y;
            }
            let cont = child_sum / node.y;
            if cont > 1.0 + CONDITIONAL_TOL {
                return Err(RoundingError::MarginalViolation {
                    prefix,
                    children: child_sum,
                    node: node.y,
                });
            }
            let cont = cont.min(1.0);
            // exit with the pass probability 1 - cont
            let draw: f64 = rng.gen();
            if draw >= cont {
                return Ok(prefix);
            }
            // descend proportionally to child marginals
            let mut target = draw / cont * child_sum;
            let mut chosen = *node.children.last().unwrap();
            for (&e, &w) in node.children.iter().zip(&weights) {
                if target < w {
                    chosen = e;
                    break;
                }
                target -= w;
            }
            prefix.push(chosen);
        }
    }
}

/// Sample a probe string from consistent prefix marginals.
pub fn vertex_round(m: &PrefixMarginals, rng: &mut Rng) -> Result<Vec<EdgeId>, RoundingError> {
    m.sample(rng)
}

/// Outcome of probing one online vertex: the proposed edge (first active
/// probe) if any, plus the full trace of probed edges and revealed states.
#[derive(Debug, Clone)]
pub struct ProposeOutcome {
    pub proposal: Option<EdgeId>,
    pub trace: Vec<(EdgeId, bool)>,
}

/// Draw a string with probability `x_v(s)`, probe it in order, and return
/// the first active edge. Edge states come from `probe` (which receives the
/// shared RNG), so callers can feed either pre-sampled states or a live
/// sampler.
pub fn vertex_probe(
    g: &StochasticGraph,
    v: OnlineId,
    distribution: &[StringMass],
    rng: &mut Rng,
    mut probe: impl FnMut(EdgeId, &mut Rng) -> bool,
) -> Result<ProposeOutcome, RoundingError> {
    let total: f64 = distribution.iter().map(|s| s.x).sum();
    if (total - 1.0).abs() > MASS_TOL {
        return Err(RoundingError::BadMass(total));
    }
    let mut target: f64 = rng.gen::<f64>() * total;
    let mut chosen: &[EdgeId] = &[];
    for sm in distribution {
        if target < sm.x {
            chosen = &sm.edges;
            break;
        }
        target -= sm.x;
    }
    let string = EdgeString { v, edges: chosen.to_vec() };
    if !g.membership(&string).map_err(|_| RoundingError::InfeasibleString)? {
        return Err(RoundingError::InfeasibleString);
    }
    let mut trace = Vec::with_capacity(chosen.len());
    for &e in chosen {
        let st = probe(e, rng);
        trace.push((e, st));
        if st {
            return Ok(ProposeOutcome { proposal: Some(e), trace });
        }
    }
    Ok(ProposeOutcome { proposal: None, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::model::ProbingConstraint;
    use crate::rng;

    #[test]
    fn lambda_only_marginals() {
        let m = PrefixMarginals::from_raw(0, vec![]).unwrap();
        let mut r = rng::root(1);
        for _ in 0..10 {
            assert!(vertex_round(&m, &mut r).unwrap().is_empty());
        }
    }

    #[test]
    fn singleton_frequencies() {
        // y(e0) = 0.7, y(e1) = 0.3: empirical frequencies match within 3σ
        let m = PrefixMarginals::from_raw(0, vec![(vec![0], 0.7), (vec![1], 0.3)]).unwrap();
        let mut r = rng::root(2);
        let n = 100_000u64;
        let mut c0 = 0u64;
        let mut c1 = 0u64;
        for _ in 0..n {
            match vertex_round(&m, &mut r).unwrap().as_slice() {
                [0] => c0 += 1,
                [1] => c1 += 1,
                [] => panic!("marginals sum to 1, the walk must descend"),
                other => panic!("unexpected string {other:?}"),
            }
        }
        let f0 = c0 as f64 / n as f64;
        let f1 = c1 as f64 / n as f64;
        assert!((f0 - 0.7).abs() < crate::stats::three_sigma(0.7, n));
        assert!((f1 - 0.3).abs() < crate::stats::three_sigma(0.3, n));
    }

    #[test]
    fn forced_continuation() {
        // y(e0) = 0.5 and y((e0, e1)) = 0.5: after e0 the pass probability
        // is zero, so every sampled string starting with e0 continues
        let m = PrefixMarginals::from_raw(0, vec![(vec![0], 0.5), (vec![0, 1], 0.5)]).unwrap();
        let mut r = rng::root(3);
        let mut saw_long = false;
        for _ in 0..200 {
            let s = vertex_round(&m, &mut r).unwrap();
            if s.first() == Some(&0) {
                assert_eq!(s, vec![0, 1]);
                saw_long = true;
            }
        }
        assert!(saw_long);
    }

    #[test]
    fn prefix_marginals_are_exact() {
        // distribution-built marginals: prefix frequencies reproduce y(s)
        let strings = vec![
            StringMass { edges: vec![0, 1], x: 0.4 },
            StringMass { edges: vec![0], x: 0.1 },
            StringMass { edges: vec![2], x: 0.3 },
            StringMass { edges: vec![], x: 0.2 },
        ];
        let m = PrefixMarginals::from_distribution(0, &strings).unwrap();
        assert!((m.y(&[0]) - 0.5).abs() < 1e-15);
        assert!((m.y(&[0, 1]) - 0.4).abs() < 1e-15);
        let mut r = rng::root(4);
        let n = 200_000u64;
        let mut starts_e0 = 0u64;
        let mut full = 0u64;
        for _ in 0..n {
            let s = vertex_round(&m, &mut r).unwrap();
            if s.first() == Some(&0) {
                starts_e0 += 1;
            }
            if s == vec![0, 1] {
                full += 1;
            }
        }
        let f = starts_e0 as f64 / n as f64;
        assert!((f - 0.5).abs() < crate::stats::three_sigma(0.5, n), "prefix freq {f}");
        let f = full as f64 / n as f64;
        assert!((f - 0.4).abs() < crate::stats::three_sigma(0.4, n), "string freq {f}");
    }

    #[test]
    fn marginal_violation_detected() {
        let err = PrefixMarginals::from_raw(0, vec![(vec![0], 0.8), (vec![1], 0.8)]);
        assert!(matches!(err, Err(RoundingError::MarginalViolation { .. })));
    }

    #[test]
    fn prefix_probability_constructor_matches_distribution_route() {
        // take a string distribution, convert it to probe-prefix
        // probabilities x(s) = (mass extending s) * q(s minus last), and
        // check the survival-divided marginals land back on the cumulative
        // masses
        let g = generate::star_graph(
            &[(0.4, 1.0), (0.7, 1.0), (0.2, 1.0)],
            ProbingConstraint::Patience(3),
        );
        let strings = vec![
            StringMass { edges: vec![0, 1], x: 0.35 },
            StringMass { edges: vec![0], x: 0.15 },
            StringMass { edges: vec![2], x: 0.5 },
        ];
        let via_distribution = PrefixMarginals::from_distribution(0, &strings).unwrap();
        let mut prefix_probs: Vec<(Vec<EdgeId>, f64)> = Vec::new();
        for prefix in [vec![0], vec![0, 1], vec![2]] {
            let extending: f64 = strings
                .iter()
                .filter(|sm| sm.edges.len() >= prefix.len() && sm.edges[..prefix.len()] == prefix)
                .map(|sm| sm.x)
                .sum();
            prefix_probs.push((prefix.clone(), extending * g.q(&prefix[..prefix.len() - 1])));
        }
        let via_prefix = PrefixMarginals::from_prefix_probabilities(&g, 0, &prefix_probs).unwrap();
        for prefix in [vec![0], vec![0, 1], vec![2]] {
            assert!(
                (via_distribution.y(&prefix) - via_prefix.y(&prefix)).abs() < 1e-12,
                "{prefix:?}: {} vs {}",
                via_distribution.y(&prefix),
                via_prefix.y(&prefix)
            );
        }
    }

    #[test]
    fn certain_edge_prunes_or_rejects_extensions() {
        // a string extending past a p = 1 edge has zero survival: mass
        // there is an input error, zero mass is silently pruned
        let g = generate::star_graph(&[(1.0, 1.0), (0.5, 1.0)], ProbingConstraint::Patience(2));
        let err =
            PrefixMarginals::from_prefix_probabilities(&g, 0, &[(vec![0, 1], 0.25)]);
        assert!(matches!(err, Err(RoundingError::DegeneratePrefix { .. })));
        let ok = PrefixMarginals::from_prefix_probabilities(
            &g,
            0,
            &[(vec![0], 1.0), (vec![0, 1], 0.0)],
        )
        .unwrap();
        assert_eq!(ok.y(&[0, 1]), 0.0);
    }

    #[test]
    fn probe_mass_on_lambda_proposes_nothing() {
        let g = generate::star_graph(&[(0.9, 1.0)], ProbingConstraint::Patience(1));
        let dist = vec![StringMass { edges: vec![], x: 1.0 }];
        let mut r = rng::root(5);
        let out = vertex_probe(&g, 0, &dist, &mut r, |_, _| true).unwrap();
        assert!(out.proposal.is_none());
        assert!(out.trace.is_empty());
    }

    #[test]
    fn probe_certain_edge_always_proposes() {
        let g = generate::star_graph(&[(1.0, 1.0)], ProbingConstraint::Patience(1));
        let dist = vec![StringMass { edges: vec![0], x: 1.0 }];
        let mut r = rng::root(6);
        let states = g.sample_states(9);
        let out =
            vertex_probe(&g, 0, &dist, &mut r, |e, _| states.states[e]).unwrap();
        assert_eq!(out.proposal, Some(0));
    }

    #[test]
    fn two_edge_outcome_distribution_by_enumeration() {
        // mass 1 on (e0, e1) with p = (0.5, 0.5): P[e0] = 1/2, P[e1] = 1/4,
        // P[none] = 1/4, checked over the four state patterns exactly
        let g = generate::star_graph(&[(0.5, 1.0), (0.5, 1.0)], ProbingConstraint::Patience(2));
        let dist = vec![StringMass { edges: vec![0, 1], x: 1.0 }];
        let mut p = [0.0f64; 3]; // e0, e1, none
        for pattern in 0..4u32 {
            let st = |e: EdgeId| pattern & (1 << e) != 0;
            let prob: f64 = (0..2)
                .map(|e| if st(e) { g.edges[e].p } else { 1.0 - g.edges[e].p })
                .product();
            let mut r = rng::root(7);
            let out = vertex_probe(&g, 0, &dist, &mut r, |e, _| st(e)).unwrap();
            match out.proposal {
                Some(0) => p[0] += prob,
                Some(1) => p[1] += prob,
                None => p[2] += prob,
                _ => unreachable!(),
            }
            // commitment: no probes recorded past the first active edge
            let first_active = out.trace.iter().position(|&(_, s)| s);
            if let Some(k) = first_active {
                assert_eq!(k + 1, out.trace.len());
            }
        }
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!((p[1] - 0.25).abs() < 1e-15);
        assert!((p[2] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn infeasible_draw_is_guarded() {
        let g = generate::star_graph(&[(0.5, 1.0), (0.5, 1.0)], ProbingConstraint::Patience(1));
        let dist = vec![StringMass { edges: vec![0, 1], x: 1.0 }];
        let mut r = rng::root(8);
        assert!(matches!(
            vertex_probe(&g, 0, &dist, &mut r, |_, _| false),
            Err(RoundingError::InfeasibleString)
        ));
    }

    #[test]
    fn round_output_stays_on_support() {
        // distribution-built marginals only ever sample supported prefixes
        let strings = vec![
            StringMass { edges: vec![2, 0], x: 0.6 },
            StringMass { edges: vec![1], x: 0.4 },
        ];
        let m = PrefixMarginals::from_distribution(0, &strings).unwrap();
        let mut r = rng::root(9);
        for _ in 0..2000 {
            let s = vertex_round(&m, &mut r).unwrap();
            assert!(
                s.is_empty() || s == vec![2] || s == vec![2, 0] || s == vec![1],
                "off-support string {s:?}"
            );
        }
    }
}

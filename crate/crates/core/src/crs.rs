//! Contention resolution for the rank-1 (single-acceptance) matroid.
//!
//! * [`OcrsHalf`]: accepts an active arrival with probability
//!   `(1/2) / (1 - (1/2) sum_earlier z_j)`, which makes the conditional
//!   acceptance probability exactly 1/2 for every element under every
//!   arrival order.
//! * [`RcrsExp`]: under uniformly random arrival times, accepts an active
//!   element arriving at time `t` with probability `exp(-z_i t)`; each
//!   element is kept with conditional probability at least `1 - 1/e`.
//!
//! Schemes see only the marginal vector, the arrival order, and the active
//! flags — never any payload of the proposing side.

use crate::rng::Rng;
use crate::stats::{wilson, Wilson, Z99};
use rand::seq::SliceRandom;
use rand::Rng as _;
use thiserror::Error;

/// Slack allowed on `sum z <= 1`.
const POLYTOPE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CrsError {
    #[error("marginals must lie in [0,1] with sum at most 1 (sum = {0})")]
    OutsidePolytope(f64),
}

fn check_marginals(z: &[f64]) -> Result<(), CrsError> {
    let sum: f64 = z.iter().sum();
    if sum > 1.0 + POLYTOPE_TOL || z.iter().any(|&zi| !(0.0..=1.0).contains(&zi)) {
        return Err(CrsError::OutsidePolytope(sum));
    }
    Ok(())
}

/// Online CRS with exact 1/2 selectability. One instance serves one run.
#[derive(Debug, Clone)]
pub struct OcrsHalf {
    z: Vec<f64>,
    earlier_mass: f64,
    accepted: Option<usize>,
}

impl OcrsHalf {
    pub fn new(z: Vec<f64>) -> Result<Self, CrsError> {
        check_marginals(&z)?;
        Ok(OcrsHalf { z, earlier_mass: 0.0, accepted: None })
    }

    pub fn accepted(&self) -> Option<usize> {
        self.accepted
    }

    /// Process the arrival of element `i`; returns true when `i` is accepted.
    pub fn arrive(&mut self, i: usize, active: bool, rng: &mut Rng) -> bool {
        let mut took = false;
        if active && self.accepted.is_none() {
            let denom = 1.0 - 0.5 * self.earlier_mass;
            let p = 0.5 / denom;
            debug_assert!(
                (0.0..=1.0 + 1e-9).contains(&p),
                "acceptance probability {p} out of range"
            );
            if rng.gen::<f64>() < p.min(1.0) {
                self.accepted = Some(i);
                took = true;
            }
        }
        self.earlier_mass += self.z[i];
        took
    }
}

/// Random-order CRS with `exp(-z_i t)` thinning; selectability at least
/// `1 - 1/e`.
#[derive(Debug, Clone)]
pub struct RcrsExp {
    z: Vec<f64>,
    accepted: Option<usize>,
}

impl RcrsExp {
    pub fn new(z: Vec<f64>) -> Result<Self, CrsError> {
        check_marginals(&z)?;
        Ok(RcrsExp { z, accepted: None })
    }

    pub fn accepted(&self) -> Option<usize> {
        self.accepted
    }

    /// Process element `i` arriving at time `t in [0,1]`.
    pub fn arrive(&mut self, i: usize, t: f64, active: bool, rng: &mut Rng) -> bool {
        if active && self.accepted.is_none() && rng.gen::<f64>() < (-self.z[i] * t).exp() {
            self.accepted = Some(i);
            return true;
        }
        false
    }
}

/// Baseline with no thinning: accept the first active arrival. Not
/// selectable at `1 - 1/e`; kept for the verifier's negative tests.
#[derive(Debug, Clone)]
pub struct GreedyFirst {
    accepted: Option<usize>,
}

impl GreedyFirst {
    pub fn new() -> Self {
        GreedyFirst { accepted: None }
    }

    pub fn arrive(&mut self, i: usize, active: bool) -> bool {
        if active && self.accepted.is_none() {
            self.accepted = Some(i);
            return true;
        }
        false
    }
}

impl Default for GreedyFirst {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    OcrsHalf,
    RcrsExp,
    GreedyFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrivalMode {
    /// Enumerate permutations when feasible (k <= 8), otherwise sample them.
    Adversarial,
    /// OCRS under uniformly shuffled order; RCRS under uniform times.
    Random,
}

/// Per-element conditional acceptance estimates with Wilson 99% intervals.
#[derive(Debug, Clone)]
pub struct SelectabilityReport {
    pub per_element: Vec<Wilson>,
    /// Acceptances over actives pooled across elements; tight when the
    /// marginals are symmetric.
    pub pooled: Wilson,
    /// Worst permutation found in adversarial mode (by minimum conditional
    /// acceptance over elements).
    pub worst_order: Option<Vec<usize>>,
    pub worst_estimate: f64,
}

impl SelectabilityReport {
    pub fn min_lower_bound(&self) -> f64 {
        self.per_element.iter().map(|w| w.lo).fold(f64::INFINITY, f64::min)
    }

    pub fn min_estimate(&self) -> f64 {
        self.per_element.iter().map(|w| w.estimate).fold(f64::INFINITY, f64::min)
    }
}

fn pooled_wilson(counts: &[(u64, u64)]) -> Wilson {
    let active: u64 = counts.iter().map(|c| c.0).sum();
    let accepted: u64 = counts.iter().map(|c| c.1).sum();
    wilson(accepted, active, Z99)
}

fn run_order_trials(
    scheme: Scheme,
    z: &[f64],
    order: &[usize],
    trials: u64,
    rng: &mut Rng,
) -> Vec<(u64, u64)> {
    let k = z.len();
    let mut counts = vec![(0u64, 0u64); k]; // (active, accepted)
    for _ in 0..trials {
        let active: Vec<bool> = z.iter().map(|&zi| rng.gen::<f64>() < zi).collect();
        let mut accepted = None;
        match scheme {
            Scheme::OcrsHalf => {
                let mut s = OcrsHalf::new(z.to_vec()).unwrap();
                for &i in order {
                    if s.arrive(i, active[i], rng) {
                        accepted = Some(i);
                    }
                }
            }
            Scheme::GreedyFirst => {
                let mut s = GreedyFirst::new();
                for &i in order {
                    if s.arrive(i, active[i]) {
                        accepted = Some(i);
                    }
                }
            }
            Scheme::RcrsExp => {
                // adversarial orders make no sense for the RCRS; map the
                // order to evenly spaced times preserving it
                let mut s = RcrsExp::new(z.to_vec()).unwrap();
                for (pos, &i) in order.iter().enumerate() {
                    let t = (pos as f64 + 0.5) / order.len() as f64;
                    if s.arrive(i, t, active[i], rng) {
                        accepted = Some(i);
                    }
                }
            }
        }
        for i in 0..k {
            if active[i] {
                counts[i].0 += 1;
                if accepted == Some(i) {
                    counts[i].1 += 1;
                }
            }
        }
    }
    counts
}

fn run_random_trials(scheme: Scheme, z: &[f64], trials: u64, rng: &mut Rng) -> Vec<(u64, u64)> {
    let k = z.len();
    let mut counts = vec![(0u64, 0u64); k];
    let mut order: Vec<usize> = (0..k).collect();
    for _ in 0..trials {
        let active: Vec<bool> = z.iter().map(|&zi| rng.gen::<f64>() < zi).collect();
        let mut accepted = None;
        match scheme {
            Scheme::RcrsExp => {
                let mut arrivals: Vec<(f64, usize)> =
                    (0..k).map(|i| (rng.gen::<f64>(), i)).collect();
                arrivals.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut s = RcrsExp::new(z.to_vec()).unwrap();
                for &(t, i) in &arrivals {
                    if s.arrive(i, t, active[i], rng) {
                        accepted = Some(i);
                    }
                }
            }
            Scheme::OcrsHalf => {
                order.shuffle(rng);
                let mut s = OcrsHalf::new(z.to_vec()).unwrap();
                for &i in &order {
                    if s.arrive(i, active[i], rng) {
                        accepted = Some(i);
                    }
                }
            }
            Scheme::GreedyFirst => {
                let mut arrivals: Vec<(f64, usize)> =
                    (0..k).map(|i| (rng.gen::<f64>(), i)).collect();
                arrivals.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut s = GreedyFirst::new();
                for &(_, i) in &arrivals {
                    if s.arrive(i, active[i]) {
                        accepted = Some(i);
                    }
                }
            }
        }
        for i in 0..k {
            if active[i] {
                counts[i].0 += 1;
                if accepted == Some(i) {
                    counts[i].1 += 1;
                }
            }
        }
    }
    counts
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k.is_multiple_of(2) {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(k, &mut cur, &mut out);
    out
}

/// Estimate per-element conditional acceptance. In adversarial mode every
/// permutation is tried (k <= 8) or sampled, and the report carries the
/// minimizing order.
pub fn verify_selectability(
    scheme: Scheme,
    z: &[f64],
    mode: ArrivalMode,
    trials: u64,
    rng: &mut Rng,
) -> Result<SelectabilityReport, CrsError> {
    check_marginals(z)?;
    let k = z.len();
    match mode {
        ArrivalMode::Random => {
            let counts = run_random_trials(scheme, z, trials, rng);
            let per_element: Vec<Wilson> =
                counts.iter().map(|&(n, s)| wilson(s, n, Z99)).collect();
            let worst_estimate =
                per_element.iter().map(|w| w.estimate).fold(f64::INFINITY, f64::min);
            Ok(SelectabilityReport {
                per_element,
                pooled: pooled_wilson(&counts),
                worst_order: None,
                worst_estimate,
            })
        }
        ArrivalMode::Adversarial => {
            let orders: Vec<Vec<usize>> = if k <= 8 {
                permutations(k)
            } else {
                (0..1000)
                    .map(|_| {
                        let mut o: Vec<usize> = (0..k).collect();
                        o.shuffle(rng);
                        o
                    })
                    .collect()
            };
            let per_order_trials = (trials / orders.len() as u64).max(1);
            let mut worst: Option<(f64, Vec<usize>, Vec<Wilson>, Wilson)> = None;
            for order in orders {
                let counts = run_order_trials(scheme, z, &order, per_order_trials, rng);
                let per_element: Vec<Wilson> =
                    counts.iter().map(|&(n, s)| wilson(s, n, Z99)).collect();
                let min_est =
                    per_element.iter().map(|w| w.estimate).fold(f64::INFINITY, f64::min);
                if worst.as_ref().is_none_or(|(m, _, _, _)| min_est < *m) {
                    worst = Some((min_est, order, per_element, pooled_wilson(&counts)));
                }
            }
            let (worst_estimate, worst_order, per_element, pooled) = worst.unwrap();
            Ok(SelectabilityReport {
                per_element,
                pooled,
                worst_order: Some(worst_order),
                worst_estimate,
            })
        }
    }
}

//! Built-in invariant suites behind `probematch verify`.

use crate::{CliError, Suite};
use probematch::crs::{verify_selectability, ArrivalMode, Scheme};
use probematch::generate;
use probematch::lp::{solve_lp_config, solve_lp_config_full_enumeration, solve_lp_qc};
use probematch::model::ProbingConstraint;
use probematch::oracles::{
    brute_force_nonadaptive, brute_force_opt, exact_proposal_probabilities,
};
use probematch::rng;
use rand::Rng as _;

struct Checker {
    failures: usize,
}

impl Checker {
    fn check(&mut self, name: &str, pass: bool, detail: String) {
        if pass {
            println!("ok   {name}: {detail}");
        } else {
            println!("FAIL {name}: {detail}");
            self.failures += 1;
        }
    }
}

pub fn run(suite: Suite, seed: u64) -> Result<(), CliError> {
    let mut c = Checker { failures: 0 };
    match suite {
        Suite::Crs => crs_suite(&mut c, seed),
        Suite::Rounding => rounding_suite(&mut c, seed),
        Suite::LpConsistency => lp_suite(&mut c, seed),
        Suite::Benchmarks => benchmark_suite(&mut c, seed),
    }
    if c.failures > 0 {
        Err(CliError::Other(format!("{} invariant check(s) failed", c.failures)))
    } else {
        Ok(())
    }
}

fn crs_suite(c: &mut Checker, seed: u64) {
    let mut rng = rng::stream(seed, 1);
    let target = 1.0 - std::f64::consts::E.recip();
    for z in [vec![1.0], vec![0.5, 0.5], vec![0.9, 0.1]] {
        let rep = verify_selectability(Scheme::OcrsHalf, &z, ArrivalMode::Adversarial, 400_000, &mut rng)
            .unwrap();
        let ok = rep.per_element.iter().all(|w| w.lo <= 0.5 && 0.5 <= w.hi);
        c.check(
            "ocrs-exact-half",
            ok,
            format!("z={z:?} worst order {:?} min est {:.4}", rep.worst_order, rep.worst_estimate),
        );
    }
    for z in [vec![1.0], vec![0.5, 0.5], vec![0.01; 100], vec![0.9, 0.1]] {
        let rep =
            verify_selectability(Scheme::RcrsExp, &z, ArrivalMode::Random, 400_000, &mut rng)
                .unwrap();
        let observed = if z.len() > 8 { rep.pooled.estimate } else { rep.min_estimate() };
        c.check(
            "rcrs-one-minus-inv-e",
            observed >= target - 0.01,
            format!("k={} estimate {observed:.4} target {target:.4}", z.len()),
        );
    }
}

fn rounding_suite(c: &mut Checker, seed: u64) {
    let mut rng = rng::stream(seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..15 {
        let g = generate::random_tiny(&mut rng, 8);
        let sol = solve_lp_config(&g).unwrap();
        let xt = sol.edge_variables(&g);
        for v in 0..g.n_online() {
            let enumerated = exact_proposal_probabilities(&g, &sol.per_vertex[v]);
            for &e in &g.online[v].incident {
                worst = worst.max((enumerated[e] - g.edges[e].p * xt[e]).abs());
            }
        }
    }
    c.check(
        "exact-rounding",
        worst <= 1e-12,
        format!("worst |P[propose] - p*x~| = {worst:.2e}"),
    );
}

fn lp_suite(c: &mut Checker, seed: u64) {
    let mut rng = rng::stream(seed, 3);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let g = generate::random_tiny(&mut rng, 7);
        let full = solve_lp_config_full_enumeration(&g, 2000).unwrap();
        let cg = solve_lp_config(&g).unwrap().objective;
        worst = worst.max((full - cg).abs());
    }
    c.check(
        "column-generation-vs-full",
        worst <= 1e-6,
        format!("worst gap {worst:.2e} over 25 instances"),
    );

    let mut worst_qc = 0.0f64;
    for _ in 0..10 {
        let n_u = rng.gen_range(1..=4);
        let n_v = rng.gen_range(1..=3);
        let mut g = generate::random_weighted(&mut rng, n_u, n_v, false);
        for v in 0..g.n_online() {
            let deg = g.online[v].incident.len();
            g.online[v].constraint = ProbingConstraint::Patience(deg.max(1));
        }
        let qc = solve_lp_qc(&g).unwrap();
        let cfg = solve_lp_config(&g).unwrap().objective;
        worst_qc = worst_qc.max((qc - cfg).abs());
    }
    c.check(
        "qc-equivalence",
        worst_qc <= 1e-6,
        format!("worst gap {worst_qc:.2e} over 10 unbounded instances"),
    );
}

fn benchmark_suite(c: &mut Checker, seed: u64) {
    let mut rng = rng::stream(seed, 4);
    let mut lp_ok = true;
    let mut dominance_ok = true;
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..25 {
        let g = generate::random_tiny(&mut rng, 6);
        let opt = brute_force_opt(&g).unwrap();
        let lp = solve_lp_config(&g).unwrap().objective;
        worst_gap = worst_gap.max(opt - lp);
        if opt > lp + 1e-6 {
            lp_ok = false;
        }
        let nonadaptive = brute_force_nonadaptive(&g).unwrap();
        if nonadaptive > opt + 1e-9 {
            dominance_ok = false;
        }
    }
    c.check("lp-relaxes-opt", lp_ok, format!("worst OPT-LP gap {worst_gap:.2e}"));
    c.check("adaptive-dominates-nonadaptive", dominance_ok, "25 instances".into());
}

//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.
//! Every tolerance is pinned in the assertions below.

use probematch::crs::{verify_selectability, ArrivalMode, Scheme};
use probematch::generate;
use probematch::lp::{
    solve_lp_config, solve_lp_config_full_enumeration, solve_lp_config_id, solve_lp_dp,
    solve_lp_qc, ConfigIdLpSolution, ConfigLpSolution,
};
use probematch::model::{KnownIdInput, ProbingConstraint, StochasticGraph};
use probematch::online::{
    all_permutations, monte_carlo, run_greedy_dp, run_known_id, run_known_id_ocrs,
    run_known_id_rcrs, run_secretary, ArrivalModel,
};
use probematch::oracles::{adaptivity_gap_experiment, brute_force_opt, exact_greedy_dp};
use probematch::rng;
use probematch::star::{dp_opt, StarInstance};
use rand::Rng as _;
use rayon::prelude::*;

const ONE_MINUS_INV_E: f64 = 1.0 - std::f64::consts::E.recip();

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "[acceptance {id:02}] {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

use probematch::oracles::exact_proposal_probabilities as enumerate_proposals;

fn rounding_suite() -> Vec<StochasticGraph> {
    let mut rng = rng::root(0xACC1);
    let mut suite: Vec<StochasticGraph> = (0..18).map(|_| generate::random_tiny(&mut rng, 8)).collect();
    suite.push(generate::example_6_2(1.0 / 12.0));
    suite.push(generate::random_weighted(&mut rng, 3, 3, true));
    suite.push(generate::random_weighted(&mut rng, 4, 3, false));
    suite.push(generate::random_family_star(&mut rng, 5));
    suite
}

#[test]
fn acceptance_01_exact_rounding() {
    let start = std::time::Instant::now();
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for g in rounding_suite() {
        let sol = solve_lp_config(&g).unwrap();
        let support: usize = sol.per_vertex.iter().map(|s| s.len()).sum();
        assert!(support <= 200, "suite instance exceeds the support budget");
        let xt = sol.edge_variables(&g);
        for v in 0..g.n_online() {
            let enumerated = enumerate_proposals(&g, &sol.per_vertex[v]);
            for &e in &g.online[v].incident {
                let expect = g.edges[e].p * xt[e];
                worst = worst.max((enumerated[e] - expect).abs());
                checked += 1;
            }
        }
    }
    // known-i.d. exact rounding: conditional proposals hit p * x~ / r
    let mut rng = rng::root(0xACC2);
    for _ in 0..6 {
        let input = generate::random_id_input(&mut rng, 3, 2, 2, false);
        let sol = solve_lp_config_id(&input).unwrap();
        let tg = &input.type_graph;
        for i in 0..input.n_arrivals() {
            for &(b, r) in input.row(i) {
                let cond = sol.conditional(i, b);
                let enumerated = enumerate_proposals(tg, &cond);
                for &e in &tg.online[b].incident {
                    let expect = tg.edges[e].p * sol.edge_variable(tg, i, b, e) / r;
                    worst = worst.max((enumerated[e] - expect).abs());
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "exact rounding reproduces p*x~ by enumeration",
        worst <= 1e-12 && elapsed < 5.0,
        &format!("{checked} edges, worst gap {worst:.2e}, {elapsed:.2}s"),
    );
}

#[test]
fn acceptance_02_lp_relaxes_benchmark() {
    let start = std::time::Instant::now();
    let mut rng = rng::root(0xACC3);
    let mut worst_violation = f64::NEG_INFINITY;
    for _ in 0..200 {
        let g = generate::random_tiny(&mut rng, 9);
        let opt = brute_force_opt(&g).unwrap();
        let lp = solve_lp_config(&g).unwrap().objective;
        worst_violation = worst_violation.max(opt - lp);
    }
    let tiny_ok = worst_violation <= 1e-6;

    // i.d. side: Monte-Carlo E[OPT(G)] <= LPOPT_id + 3 sigma
    let mut id_ok = true;
    let mut id_detail = String::new();
    for k in 0..20 {
        let input = generate::random_id_input(&mut rng, 3, 3, 3, k % 2 == 0);
        let lp = solve_lp_config_id(&input).unwrap().objective;
        let draws = 10_000u64;
        let est = monte_carlo(draws, 0xACC4 + k, |r, _| {
            brute_force_opt(&input.draw_instance(r)).unwrap()
        });
        let slack = 3.0 * est.sd / (draws as f64).sqrt();
        if est.mean > lp + slack {
            id_ok = false;
            id_detail = format!("input {k}: E[OPT] {} > LP {} + {slack:.4}", est.mean, lp);
            break;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        "configuration LPs relax the adaptive benchmark",
        tiny_ok && id_ok && elapsed < 120.0,
        &format!(
            "worst OPT-LP gap {worst_violation:.2e}; id side {}; {elapsed:.1}s",
            if id_ok { "ok" } else { id_detail.as_str() }
        ),
    );
}

#[test]
fn acceptance_03_column_generation_equals_full_lp() {
    let start = std::time::Instant::now();
    let mut rng = rng::root(0xACC5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let g = generate::random_tiny(&mut rng, 8);
        let full = solve_lp_config_full_enumeration(&g, 2000).unwrap();
        let cg = solve_lp_config(&g).unwrap().objective;
        worst = worst.max((full - cg).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        "column generation matches full string enumeration",
        worst <= 1e-6 && elapsed < 60.0,
        &format!("100 instances, worst gap {worst:.2e}, {elapsed:.1}s"),
    );
}

#[test]
fn acceptance_04_qc_equivalence() {
    let start = std::time::Instant::now();
    let mut rng = rng::root(0xACC6);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n_u = rng.gen_range(1..=4);
        let n_v = rng.gen_range(1..=3);
        let mut g = generate::random_weighted(&mut rng, n_u, n_v, false);
        for v in 0..g.n_online() {
            let deg = g.online[v].incident.len();
            g.online[v].constraint = ProbingConstraint::Patience(deg.max(1));
        }
        assert!(g.online.iter().all(|v| v.incident.len() <= 6));
        let qc = solve_lp_qc(&g).unwrap();
        let cfg = solve_lp_config(&g).unwrap().objective;
        worst = worst.max((qc - cfg).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        "subset LP equals configuration LP under unbounded patience",
        worst <= 1e-6 && elapsed < 60.0,
        &format!("50 instances, worst gap {worst:.2e}, {elapsed:.1}s"),
    );
}

#[test]
fn acceptance_05_crs_selectability() {
    let start = std::time::Instant::now();
    let stress_ocrs: Vec<Vec<f64>> = vec![
        vec![1.0],
        vec![0.5, 0.5],
        vec![0.9, 0.1],
        vec![0.25, 0.25, 0.25, 0.25],
        vec![0.2, 0.2, 0.2, 0.2, 0.2],
    ];
    let mut rng = rng::root(0xACC7);
    let mut ocrs_ok = true;
    let mut detail = String::new();
    for z in &stress_ocrs {
        for perm in all_permutations(z.len()) {
            let trials = 1_000_000u64;
            let counts: Vec<(u64, u64)> = {
                // inline trial loop: each element's conditional acceptance
                let mut c = vec![(0u64, 0u64); z.len()];
                for _ in 0..trials {
                    let active: Vec<bool> = z.iter().map(|&p| rng.gen::<f64>() < p).collect();
                    let mut scheme = probematch::crs::OcrsHalf::new(z.clone()).unwrap();
                    let mut accepted = None;
                    for &i in &perm {
                        if scheme.arrive(i, active[i], &mut rng) {
                            accepted = Some(i);
                        }
                    }
                    for i in 0..z.len() {
                        if active[i] {
                            c[i].0 += 1;
                            if accepted == Some(i) {
                                c[i].1 += 1;
                            }
                        }
                    }
                }
                c
            };
            for (i, &(n, s)) in counts.iter().enumerate() {
                let f = s as f64 / n as f64;
                let sigma3 = 3.0 * (0.25 / n as f64).sqrt();
                if (f - 0.5).abs() > sigma3 {
                    ocrs_ok = false;
                    detail = format!(
                        "OCRS z={z:?} perm={perm:?} element {i}: {f:.4} vs 0.5 +- {sigma3:.4}"
                    );
                }
            }
        }
    }

    let stress_rcrs: Vec<Vec<f64>> =
        vec![vec![1.0], vec![0.5, 0.5], vec![0.01; 100], vec![0.9, 0.1]];
    let mut rcrs_ok = true;
    for z in &stress_rcrs {
        let rep =
            verify_selectability(Scheme::RcrsExp, z, ArrivalMode::Random, 1_000_000, &mut rng)
                .unwrap();
        // symmetric long vector: pool; small vectors: per element
        let observed = if z.len() > 8 { rep.pooled.estimate } else { rep.min_estimate() };
        if observed < ONE_MINUS_INV_E - 0.005 {
            rcrs_ok = false;
            detail = format!("RCRS z (k={}) estimate {observed:.4}", z.len());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        "OCRS is exactly 1/2-selectable and RCRS clears 1 - 1/e",
        ocrs_ok && rcrs_ok && elapsed < 120.0,
        &format!(
            "{}; {elapsed:.1}s",
            if ocrs_ok && rcrs_ok { "all stress vectors in bounds" } else { detail.as_str() }
        ),
    );
}

fn id_suite() -> Vec<KnownIdInput> {
    let mut rng = rng::root(0xACC8);
    let mut suite = Vec::new();
    for k in 0..10 {
        let n_offline = 2 + k % 2;
        let n_types = 2 + k % 2;
        let n_arrivals = 2 + k % 4; // up to 5
        suite.push(generate::random_id_input(&mut rng, n_offline, n_types, n_arrivals, false));
    }
    suite
}

#[test]
fn acceptance_06_known_id_competitive_ratios() {
    let start = std::time::Instant::now();
    let trials = 100_000u64;
    let mut ok = true;
    let mut detail = String::new();

    for (k, input) in id_suite().into_iter().enumerate() {
        let sol = solve_lp_config_id(&input).unwrap();
        let lp = sol.objective;
        let n = input.n_arrivals();

        // adversarial order with the offline-side OCRS: worst permutation
        let mut worst_mean = f64::INFINITY;
        for perm in all_permutations(n) {
            let est = monte_carlo(trials, 0xD00D + k as u64, |r, _| {
                run_known_id_ocrs(&input, &sol, &perm, r).unwrap().total_weight
            });
            if est.mean < worst_mean {
                worst_mean = est.mean;
            }
        }
        let ci = 2.5758 * 0.5 / (trials as f64).sqrt(); // weight-scale CI guard
        if worst_mean / lp < 0.5 - ci / lp {
            ok = false;
            detail = format!("instance {k}: AOM worst ratio {:.4}", worst_mean / lp);
            break;
        }

        // random order with the RCRS
        let est = monte_carlo(trials, 0xBEEF + k as u64, |r, _| {
            run_known_id_rcrs(&input, &sol, r).unwrap().total_weight
        });
        let ratio = est.mean / lp;
        if ratio < ONE_MINUS_INV_E - est.ci99 / lp {
            ok = false;
            detail = format!("instance {k}: ROM ratio {ratio:.4}");
            break;
        }
    }

    // i.i.d. inputs: plain first-free probing already clears 1 - 1/e
    if ok {
        let mut rng = rng::root(0xACC9);
        for k in 0..4 {
            let input = generate::random_id_input(&mut rng, 3, 3, 4, true);
            let sol = solve_lp_config_id(&input).unwrap();
            let order: Vec<usize> = (0..input.n_arrivals()).collect();
            let est = monte_carlo(trials, 0xF00D + k, |r, _| {
                run_known_id(&input, &sol, &order, r).unwrap().total_weight
            });
            let ratio = est.mean / sol.objective;
            if ratio < ONE_MINUS_INV_E - est.ci99 / sol.objective {
                ok = false;
                detail = format!("iid instance {k}: ratio {ratio:.4}");
                break;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        "known-i.d. ratios: 1/2 adversarial, 1-1/e random order and i.i.d.",
        ok && elapsed < 300.0,
        &format!("{}; {elapsed:.1}s", if ok { "10 + 4 instances" } else { detail.as_str() }),
    );
}

#[test]
fn acceptance_07_secretary_ratio_and_per_arrival_value() {
    let start = std::time::Instant::now();
    let n = 10usize;
    let mut gen_rng = rng::root(0xACCA);
    let g = generate::secretary_instance(&mut gen_rng, n, n);
    let lp = solve_lp_config(&g).unwrap().objective;
    let trials = 100_000u64;

    let results: Vec<(f64, Vec<f64>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::stream(0xACCB, t);
            let res = run_secretary(&g, &mut r).unwrap();
            let mut proposals = vec![0.0; n];
            for a in &res.arrivals {
                if let Some(pr) = a.probes.last() {
                    if pr.active {
                        proposals[a.position] = g.edges[pr.edge].w;
                    }
                }
            }
            (res.total_weight, proposals)
        })
        .collect();
    let weights: Vec<f64> = results.iter().map(|r| r.0).collect();
    let est = probematch::stats::Estimate::from_samples(&weights);
    let ratio = est.mean / lp;
    let target = std::f64::consts::E.recip() - 1.0 / n as f64;
    let ratio_ok = ratio >= target - est.ci99 / lp;

    // per-arrival proposal value from ceil(n/e) on: E[w(e_t)] >= LP/n
    let from = (n as f64 / std::f64::consts::E).ceil() as usize; // 1-based
    let mut arrival_ok = true;
    let mut arrival_detail = String::new();
    for t in from..=n {
        let samples: Vec<f64> = results.iter().map(|r| r.1[t - 1]).collect();
        let e = probematch::stats::Estimate::from_samples(&samples);
        let bound = lp / n as f64 - 3.0 * e.sd / (trials as f64).sqrt();
        if e.mean < bound {
            arrival_ok = false;
            arrival_detail = format!("t={t}: E[w(e_t)] {:.4} < {bound:.4}", e.mean);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        7,
        "secretary matching clears (1/e - 1/n) and the per-arrival bound",
        ratio_ok && arrival_ok && elapsed < 600.0,
        &format!(
            "ratio {ratio:.4} vs {target:.4}; {}; {elapsed:.1}s",
            if arrival_ok { "per-arrival ok" } else { arrival_detail.as_str() }
        ),
    );
}

#[test]
fn acceptance_08_greedy_dp_guarantees() {
    let start = std::time::Instant::now();
    // (a) exact expectation >= OPT/2 on every tiny instance and order
    let mut rng = rng::root(0xACCC);
    let mut worst_ratio = f64::INFINITY;
    for _ in 0..40 {
        let g = generate::random_vertex_weighted(&mut rng, 3, 3, 2);
        let opt = brute_force_opt(&g).unwrap();
        if opt <= 1e-12 {
            continue;
        }
        for order in all_permutations(g.n_online()) {
            let val = exact_greedy_dp(&g, &order).unwrap();
            worst_ratio = worst_ratio.min(val / opt);
            assert!(
                val >= 0.5 * opt - 1e-9,
                "greedy {val} below half of OPT {opt} on order {order:?}"
            );
        }
    }
    let adversarial_ok = worst_ratio >= 0.5 - 1e-9;

    // (b) rankable suites under random order vs the vertex-weighted LP
    let trials = 100_000u64;
    let mut rom_ok = true;
    let mut detail = String::new();
    let mut suites: Vec<StochasticGraph> = Vec::new();
    for _ in 0..2 {
        suites.push(generate::random_unit_patience(&mut rng, 3, 4));
        suites.push(generate::random_rankable_agreeing(&mut rng, 3, 3));
    }
    for (k, g) in suites.iter().enumerate() {
        assert!(g.online.iter().enumerate().all(|(v, _)| {
            probematch::star::is_rankable(g, v).is_some()
        }));
        let lp = solve_lp_dp(g).unwrap();
        let est = monte_carlo(trials, 0xACCD + k as u64, |r, _| {
            let order = ArrivalModel::RandomOrder.resolve(g.n_online(), r).unwrap();
            run_greedy_dp(g, &order, r).unwrap().total_weight
        });
        let ratio = est.mean / lp;
        if ratio < ONE_MINUS_INV_E - est.ci99 / lp {
            rom_ok = false;
            detail = format!("rankable suite {k}: ratio {ratio:.4}");
        }
    }

    // (c) non-rankable vanishing-probability suite
    let mut vanish_ok = true;
    for k in 0..3 {
        let g = generate::random_small_prob(&mut rng, 3, 4, 0.2, 2);
        let lp = solve_lp_dp(&g).unwrap();
        let factor: f64 = (0..g.n_online())
            .map(|v| {
                let c = g.online[v].constraint.max_probes(g.online[v].incident.len());
                let p = g
                    .online[v]
                    .incident
                    .iter()
                    .map(|&e| g.edges[e].p)
                    .fold(0.0f64, f64::max);
                (1.0 - p).powi(c as i32)
            })
            .fold(1.0f64, f64::min);
        let est = monte_carlo(trials, 0xACCE + k, |r, _| {
            let order = ArrivalModel::RandomOrder.resolve(g.n_online(), r).unwrap();
            run_greedy_dp(&g, &order, r).unwrap().total_weight
        });
        let ratio = est.mean / lp;
        let bound = factor * ONE_MINUS_INV_E;
        if ratio < bound - est.ci99 / lp {
            vanish_ok = false;
            detail = format!("vanishing suite {k}: ratio {ratio:.4} vs {bound:.4}");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        8,
        "greedy probing: exact 1/2 adversarial, 1-1/e rankable ROM, scaled bound otherwise",
        adversarial_ok && rom_ok && vanish_ok && elapsed < 300.0,
        &format!(
            "worst exact ratio {worst_ratio:.4}; {}; {elapsed:.1}s",
            if rom_ok && vanish_ok { "ROM suites ok" } else { detail.as_str() }
        ),
    );
}

#[test]
fn acceptance_09_star_dp_ground_truth() {
    let start = std::time::Instant::now();
    let mut rng = rng::root(0xACCF);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let g = generate::random_star(&mut rng, 6);
        let dp = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
        let brute = exhaustive_star(&g);
        worst = worst.max((dp.value - brute).abs());
    }
    // worked example: probe sets for both available sets
    let g = generate::example_6_2(1.0 / 12.0);
    let plan_full = dp_opt(&StarInstance::value_mode(&g, 0, |_| true));
    let mut full: Vec<usize> = plan_full.edges.iter().map(|&e| g.edges[e].u).collect();
    full.sort_unstable();
    let plan_sub = dp_opt(&StarInstance::value_mode(&g, 0, |u| u != 1));
    let mut sub: Vec<usize> = plan_sub.edges.iter().map(|&e| g.edges[e].u).collect();
    sub.sort_unstable();
    let example_ok = full == vec![0, 1]
        && sub == vec![2, 3]
        && (plan_full.value - 19.0 / 18.0).abs() < 1e-12
        && (plan_sub.value - 5.0 / 6.0).abs() < 1e-12;
    let elapsed = start.elapsed().as_secs_f64();
    report(
        9,
        "star DP equals exhaustive search and reproduces the worked example",
        worst <= 1e-12 && example_ok && elapsed < 10.0,
        &format!("1000 stars, worst gap {worst:.2e}, {elapsed:.1}s"),
    );
}

fn exhaustive_star(g: &StochasticGraph) -> f64 {
    fn rec(g: &StochasticGraph, s: &mut Vec<usize>, best: &mut f64) {
        let positions: Vec<usize> = s.iter().map(|&e| g.position_in_vertex(e)).collect();
        if !g.feasible_positions(0, &positions) {
            return;
        }
        *best = best.max(g.val(s));
        for e in 0..g.edges.len() {
            if s.contains(&e) {
                continue;
            }
            s.push(e);
            rec(g, s, best);
            s.pop();
        }
    }
    let mut best = 0.0;
    rec(g, &mut Vec::new(), &mut best);
    best
}

#[test]
fn acceptance_10_adaptivity_gap_trend() {
    let start = std::time::Instant::now();
    // p(n) = 1/(2 sqrt n), s = floor(0.9 p n): the non-adaptive ratio falls
    // toward 1 - 1/e from above as n grows
    let run = |n: usize, seed: u64| {
        let p = 0.5 / (n as f64).sqrt();
        let s = (0.9 * p * n as f64).floor() as usize;
        adaptivity_gap_experiment(n, p, s, 30_000, seed).unwrap()
    };
    let small = run(200, 0xAD01);
    let large = run(2000, 0xAD02);
    let bracket_ok = large.ratio >= 0.60 && large.ratio <= 0.68;
    let trend_ok = large.ratio <= small.ratio + 0.01;
    // the greedy adaptive certification approaches s
    let certify_ok = large.adaptive.mean >= 0.85 * large.s as f64;
    let elapsed = start.elapsed().as_secs_f64();
    report(
        10,
        "adaptivity gap trends down into [0.60, 0.68]",
        bracket_ok && trend_ok && certify_ok && elapsed < 300.0,
        &format!(
            "ratio(200) = {:.4}, ratio(2000) = {:.4}, adaptive certification {:.1}/{}; {elapsed:.1}s",
            small.ratio, large.ratio, large.adaptive.mean, large.s
        ),
    );
}

// Silence unused-import warnings for items used only in some test builds.
#[allow(dead_code)]
fn _unused(_: &ConfigLpSolution, _: &ConfigIdLpSolution) {}

use crate::{Algorithm, CliError, Format, LpKind};
use probematch::lp::{
    solve_lp_config, solve_lp_config_id, solve_lp_dp, solve_lp_qc, solve_lp_std,
    solve_lp_std_unit,
};
use probematch::model::{KnownIdInput, StochasticGraph};
use probematch::online::{
    all_permutations, monte_carlo, run_greedy_dp, run_known_graph, run_known_id,
    run_known_id_ocrs, run_known_id_rcrs, run_secretary,
};
use probematch::oracles::{adaptivity_gap_experiment, brute_force_opt, MAX_ORACLE_EDGES};
use probematch::rng;
use probematch::schema::{self, AnyInstance};
use probematch::stats::Estimate;
use rand::seq::SliceRandom;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

pub enum Loaded {
    Graph(StochasticGraph),
    Id(KnownIdInput),
}

pub fn load_instance(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)?;
    match schema::parse_any(&text)? {
        AnyInstance::Graph(j) => Ok(Loaded::Graph(schema::graph_from_json(&j)?)),
        AnyInstance::Id(j) => Ok(Loaded::Id(schema::id_input_from_json(&j)?)),
    }
}

fn instance_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| "-".into(), |s| s.to_string_lossy().into_owned())
}

/// Spec of the arrival flag: "rom", "aom:<perm>", or "aom:worst<k>".
pub enum ArrivalSpec {
    Rom,
    AomPerm(Vec<usize>),
    AomWorst(usize),
}

pub fn parse_arrival(s: &str) -> Result<ArrivalSpec, CliError> {
    if s == "rom" {
        return Ok(ArrivalSpec::Rom);
    }
    if let Some(rest) = s.strip_prefix("aom:") {
        if let Some(k) = rest.strip_prefix("worst") {
            let k: usize = k
                .parse()
                .map_err(|_| CliError::Usage(format!("bad worst-of count in {s:?}")))?;
            return Ok(ArrivalSpec::AomWorst(k.max(1)));
        }
        let perm: Result<Vec<usize>, _> = rest.split(',').map(|t| t.trim().parse()).collect();
        return Ok(ArrivalSpec::AomPerm(
            perm.map_err(|_| CliError::Usage(format!("bad permutation in {s:?}")))?,
        ));
    }
    Err(CliError::Usage(format!("bad arrival spec {s:?} (rom | aom:<perm> | aom:worst<k>)")))
}

fn check_perm(perm: &[usize], n: usize) -> Result<(), CliError> {
    let mut seen = vec![false; n];
    if perm.len() != n
        || perm.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
    {
        return Err(CliError::Usage(format!("permutation must cover 0..{n} exactly once")));
    }
    Ok(())
}

// ---------------------------------------------------------------- solve

#[derive(Serialize)]
struct SolveReport {
    instance: String,
    lp: String,
    objective: f64,
    support: Option<Vec<usize>>,
    alpha: Option<Vec<f64>>,
    beta: Option<Vec<f64>>,
}

pub fn solve(path: &Path, lp: LpKind, format: Format) -> Result<(), CliError> {
    let loaded = load_instance(path)?;
    let id = instance_id(path);
    let report = match (lp, &loaded) {
        (LpKind::Config, Loaded::Graph(g)) => {
            let sol = solve_lp_config(g)?;
            SolveReport {
                instance: id,
                lp: "LP-config".into(),
                objective: sol.objective,
                support: Some(sol.per_vertex.iter().map(|s| s.len()).collect()),
                alpha: Some(sol.alpha.clone()),
                beta: Some(sol.beta.clone()),
            }
        }
        (LpKind::Config, Loaded::Id(_)) => {
            return Err(CliError::Inapplicable(
                "LP-config needs a plain instance; use --lp config-id".into(),
            ))
        }
        (LpKind::ConfigId, loaded) => {
            let owned;
            let input = match loaded {
                Loaded::Id(input) => input,
                Loaded::Graph(g) => {
                    owned = KnownIdInput::point_mass(g.clone());
                    &owned
                }
            };
            let sol = solve_lp_config_id(input)?;
            let mut support = Vec::new();
            let mut beta = Vec::new();
            for row in &sol.per_arrival {
                for entry in row {
                    support.push(entry.strings.len());
                    beta.push(entry.beta);
                }
            }
            SolveReport {
                instance: id,
                lp: "LP-config-id".into(),
                objective: sol.objective,
                support: Some(support),
                alpha: Some(sol.alpha.clone()),
                beta: Some(beta),
            }
        }
        (kind, Loaded::Graph(g)) => {
            let (name, objective) = match kind {
                LpKind::Std => ("LP-std", solve_lp_std(g)?),
                LpKind::StdUnit => ("LP-std-unit", solve_lp_std_unit(g)?),
                LpKind::Dp => ("LP-DP", solve_lp_dp(g)?),
                LpKind::Qc => ("LP-QC", solve_lp_qc(g)?),
                LpKind::Config | LpKind::ConfigId => unreachable!(),
            };
            SolveReport {
                instance: id,
                lp: name.into(),
                objective,
                support: None,
                alpha: None,
                beta: None,
            }
        }
        (_, Loaded::Id(_)) => {
            return Err(CliError::Inapplicable(
                "comparison LPs need a plain instance".into(),
            ))
        }
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => {
            println!("{} = {}", report.lp, report.objective);
            if let Some(support) = &report.support {
                println!("support sizes: {support:?}");
            }
            if let (Some(alpha), Some(beta)) = (&report.alpha, &report.beta) {
                println!("duals alpha: {alpha:?}");
                println!("duals beta: {beta:?}");
            }
        }
    }
    Ok(())
}

// ------------------------------------------------------------- simulate

/// One output row of `simulate`; the CSV column order is fixed.
#[derive(Serialize)]
pub struct ResultRow {
    pub instance: String,
    pub algorithm: String,
    pub arrival: String,
    pub trials: u64,
    pub mean_weight: f64,
    pub ci99: f64,
    pub lp_ref: f64,
    pub brute_force: Option<f64>,
    pub ratio: f64,
}

fn write_row(row: &ResultRow, out: Option<&Path>, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let text = serde_json::to_string(row).unwrap();
            match out {
                None => println!("{text}"),
                Some(path) => {
                    let mut f = std::fs::OpenOptions::new()
                        .create(true)
                        .append(true)
                        .open(path)?;
                    writeln!(f, "{text}")?;
                }
            }
        }
        Format::Csv => {
            let header = out.is_none_or(|p| !p.exists());
            let mut wtr: csv::Writer<Box<dyn Write>> = match out {
                None => csv::WriterBuilder::new()
                    .has_headers(header)
                    .from_writer(Box::new(std::io::stdout())),
                Some(path) => csv::WriterBuilder::new().has_headers(header).from_writer(
                    Box::new(std::fs::OpenOptions::new().create(true).append(true).open(path)?),
                ),
            };
            wtr.serialize(row).map_err(|e| CliError::Other(e.to_string()))?;
            wtr.flush()?;
        }
    }
    Ok(())
}

pub fn simulate(
    path: &Path,
    algorithm: Algorithm,
    arrival: &str,
    trials: u64,
    seed: u64,
    out: Option<&Path>,
    format: Format,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let spec = parse_arrival(arrival)?;
    let loaded = load_instance(path)?;
    let algo_name = match algorithm {
        Algorithm::KnownGraph => "known-graph",
        Algorithm::KnownId => "known-id",
        Algorithm::KnownIdOcrs => "known-id-ocrs",
        Algorithm::KnownIdRcrs => "known-id-rcrs",
        Algorithm::Secretary => "secretary",
        Algorithm::GreedyDp => "greedy-dp",
    };

    // reference LP value and the trial closure per algorithm family
    let (est, lp_ref, brute): (Estimate, f64, Option<f64>) = match algorithm {
        Algorithm::KnownGraph | Algorithm::Secretary | Algorithm::GreedyDp => {
            let g = match &loaded {
                Loaded::Graph(g) => g,
                Loaded::Id(_) => {
                    return Err(CliError::Usage(format!(
                        "{algo_name} runs on a plain instance"
                    )))
                }
            };
            let n = g.n_online();
            let brute = if g.edges.iter().filter(|e| e.p > 0.0).count() <= MAX_ORACLE_EDGES {
                brute_force_opt(g).ok()
            } else {
                None
            };
            match algorithm {
                Algorithm::KnownGraph => {
                    let sol = solve_lp_config(g)?;
                    let est = run_with_arrival(&spec, n, trials, seed, |order, r| {
                        run_known_graph(g, &sol, order, r).map(|m| m.total_weight)
                    })?;
                    (est, sol.objective, brute)
                }
                Algorithm::Secretary => {
                    if !matches!(spec, ArrivalSpec::Rom) {
                        return Err(CliError::Usage(
                            "secretary is defined for random-order arrivals".into(),
                        ));
                    }
                    let lp = solve_lp_config(g)?.objective;
                    let est = monte_carlo_result(trials, seed, |r| {
                        run_secretary(g, r).map(|m| m.total_weight)
                    })?;
                    (est, lp, brute)
                }
                Algorithm::GreedyDp => {
                    let lp = solve_lp_dp(g)?;
                    let est = run_with_arrival(&spec, n, trials, seed, |order, r| {
                        run_greedy_dp(g, order, r).map(|m| m.total_weight)
                    })?;
                    (est, lp, brute)
                }
                _ => unreachable!(),
            }
        }
        Algorithm::KnownId | Algorithm::KnownIdOcrs | Algorithm::KnownIdRcrs => {
            let owned;
            let input = match &loaded {
                Loaded::Id(input) => input,
                Loaded::Graph(g) => {
                    owned = KnownIdInput::point_mass(g.clone());
                    &owned
                }
            };
            let sol = solve_lp_config_id(input)?;
            let n = input.n_arrivals();
            let est = match algorithm {
                Algorithm::KnownId => run_with_arrival(&spec, n, trials, seed, |order, r| {
                    run_known_id(input, &sol, order, r).map(|m| m.total_weight)
                })?,
                Algorithm::KnownIdOcrs => {
                    run_with_arrival(&spec, n, trials, seed, |order, r| {
                        run_known_id_ocrs(input, &sol, order, r).map(|m| m.total_weight)
                    })?
                }
                Algorithm::KnownIdRcrs => {
                    if !matches!(spec, ArrivalSpec::Rom) {
                        return Err(CliError::Usage(
                            "the random-order scheme needs rom arrivals".into(),
                        ));
                    }
                    monte_carlo_result(trials, seed, |r| {
                        run_known_id_rcrs(input, &sol, r).map(|m| m.total_weight)
                    })?
                }
                _ => unreachable!(),
            };
            (est, sol.objective, None)
        }
    };

    let row = ResultRow {
        instance: instance_id(path),
        algorithm: algo_name.into(),
        arrival: arrival.into(),
        trials,
        mean_weight: est.mean,
        ci99: est.ci99,
        lp_ref,
        brute_force: brute,
        ratio: if lp_ref > 0.0 { est.mean / lp_ref } else { 0.0 },
    };
    write_row(&row, out, format)
}

/// Monte Carlo that propagates the first trial error, if any.
fn monte_carlo_result<F>(trials: u64, seed: u64, f: F) -> Result<Estimate, CliError>
where
    F: Fn(&mut probematch::rng::Rng) -> Result<f64, probematch::online::OnlineError> + Sync,
{
    let err = std::sync::Mutex::new(None);
    let est = monte_carlo(trials, seed, |r, _| match f(r) {
        Ok(v) => v,
        Err(e) => {
            err.lock().unwrap().get_or_insert(CliError::from(e));
            0.0
        }
    });
    match err.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(est),
    }
}

fn run_with_arrival<F>(
    spec: &ArrivalSpec,
    n: usize,
    trials: u64,
    seed: u64,
    f: F,
) -> Result<Estimate, CliError>
where
    F: Fn(&[usize], &mut probematch::rng::Rng) -> Result<f64, probematch::online::OnlineError>
        + Sync,
{
    match spec {
        ArrivalSpec::Rom => monte_carlo_result(trials, seed, |r| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(r);
            f(&order, r)
        }),
        ArrivalSpec::AomPerm(perm) => {
            check_perm(perm, n)?;
            monte_carlo_result(trials, seed, |r| f(perm, r))
        }
        ArrivalSpec::AomWorst(k) => {
            // evaluate up to k permutations (all of them when n! <= k)
            let factorial: usize = (1..=n.min(10)).product();
            let perms: Vec<Vec<usize>> = if n <= 10 && factorial <= *k {
                all_permutations(n)
            } else {
                let mut r = rng::stream(seed, u64::MAX);
                (0..*k)
                    .map(|_| {
                        let mut o: Vec<usize> = (0..n).collect();
                        o.shuffle(&mut r);
                        o
                    })
                    .collect()
            };
            let mut worst: Option<Estimate> = None;
            for perm in &perms {
                let est = monte_carlo_result(trials, seed, |r| f(perm, r))?;
                if worst.as_ref().is_none_or(|w| est.mean < w.mean) {
                    worst = Some(est);
                }
            }
            Ok(worst.expect("at least one permutation"))
        }
    }
}

// ------------------------------------------------------------- generate

fn params_map(params: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for part in params.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad parameter {part:?}")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn param<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|_| CliError::Usage(format!("bad value for {key}"))))
        .transpose()
}

fn require<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T, CliError> {
    param(map, key)?.ok_or_else(|| CliError::Usage(format!("missing parameter {key}")))
}

pub fn generate(family: &str, params: &str, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    let map = params_map(params)?;
    let mut rng = rng::root(seed);
    let text = match family {
        "er-gap" => {
            let n: usize = require(&map, "n")?;
            let p: f64 = require(&map, "p")?;
            let s: usize = param(&map, "s")?
                .unwrap_or_else(|| ((0.9 * p * n as f64).floor() as usize).max(1));
            if !(0.0..=1.0).contains(&p) || n == 0 {
                return Err(CliError::Usage("need n >= 1 and p in [0, 1]".into()));
            }
            to_json(&probematch::generate::er_gap(n, p, s))
        }
        "example-6.2" => {
            let eps: f64 = param(&map, "eps")?.unwrap_or(1.0 / 12.0);
            if eps <= 0.0 || eps > 1.0 / 12.0 {
                return Err(CliError::Usage("eps must lie in (0, 1/12]".into()));
            }
            to_json(&probematch::generate::example_6_2(eps))
        }
        "random-weighted" => {
            let n: usize = param(&map, "n")?.unwrap_or(3);
            let m: usize = param(&map, "m")?.unwrap_or(3);
            let knapsack = match map.get("constraint").map(String::as_str) {
                None | Some("patience") => false,
                Some("knapsack") => true,
                Some(other) => {
                    return Err(CliError::Usage(format!("unknown constraint {other:?}")))
                }
            };
            to_json(&probematch::generate::random_weighted(&mut rng, n, m, knapsack))
        }
        "iid-types" | "id-types" => {
            let u: usize = param(&map, "u")?.unwrap_or(3);
            let b: usize = param(&map, "b")?.unwrap_or(2);
            let n: usize = param(&map, "n")?.unwrap_or(3);
            let input = probematch::generate::random_id_input(
                &mut rng,
                u,
                b,
                n,
                family == "iid-types",
            );
            serde_json::to_string_pretty(&probematch::schema::id_input_to_json(&input)).unwrap()
        }
        other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
    };
    match out {
        None => println!("{text}"),
        Some(path) => std::fs::write(path, text + "\n")?,
    }
    Ok(())
}

fn to_json(g: &StochasticGraph) -> String {
    serde_json::to_string_pretty(&probematch::schema::graph_to_json(g)).unwrap()
}

// ------------------------------------------------------------------ gap

#[derive(Serialize)]
struct GapRow {
    n: usize,
    p: f64,
    s: usize,
    trials: u64,
    adaptive_mean: f64,
    adaptive_ci99: f64,
    nonadaptive_mean: f64,
    nonadaptive_ci99: f64,
    nonadaptive_exact: f64,
    ratio: f64,
    ratio_vs_adaptive: f64,
}

pub fn gap(
    n: usize,
    p: f64,
    s: Option<usize>,
    trials: u64,
    seed: u64,
    out: Option<&Path>,
    format: Format,
) -> Result<(), CliError> {
    let s = s.unwrap_or_else(|| ((0.9 * p * n as f64).floor() as usize).max(1));
    let report = adaptivity_gap_experiment(n, p, s, trials, seed)?;
    let row = GapRow {
        n,
        p,
        s,
        trials,
        adaptive_mean: report.adaptive.mean,
        adaptive_ci99: report.adaptive.ci99,
        nonadaptive_mean: report.nonadaptive.mean,
        nonadaptive_ci99: report.nonadaptive.ci99,
        nonadaptive_exact: report.nonadaptive_exact,
        ratio: report.ratio,
        ratio_vs_adaptive: report.ratio_vs_adaptive,
    };
    match format {
        Format::Json => {
            let text = serde_json::to_string(&row).unwrap();
            match out {
                None => println!("{text}"),
                Some(path) => std::fs::write(path, text + "\n")?,
            }
        }
        Format::Csv => {
            let header = out.is_none_or(|p| !p.exists());
            let mut wtr: csv::Writer<Box<dyn Write>> = match out {
                None => csv::WriterBuilder::new()
                    .has_headers(header)
                    .from_writer(Box::new(std::io::stdout())),
                Some(path) => csv::WriterBuilder::new().has_headers(header).from_writer(
                    Box::new(std::fs::OpenOptions::new().create(true).append(true).open(path)?),
                ),
            };
            wtr.serialize(&row).map_err(|e| CliError::Other(e.to_string()))?;
            wtr.flush()?;
        }
    }
    Ok(())
}

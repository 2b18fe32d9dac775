//! Configuration LPs solved by column generation, and the comparison LPs.
//!
//! The master LP has one `<= 1` row per offline vertex and one `= 1` row per
//! online vertex (or `= r_i(b)` per arrival/type pair in the known-i.d.
//! variant). Columns are probe strings; the pricing problem — maximize
//! `val` under dual-shifted weights — is exactly the star DP, so optimality
//! is certified when no string prices out above tolerance.

use crate::model::{EdgeId, KnownIdInput, OnlineId, StochasticGraph};
use crate::simplex::{solve_dense, DenseLp, Sense, SimplexError};
use crate::star::{dp_opt, price_column, StarInstance};
use std::collections::HashSet;
use thiserror::Error;

/// Pricing tolerance: a column enters only if its reduced cost exceeds this.
pub const PRICE_TOL: f64 = 1e-7;
/// Total-column cap for one column-generation solve.
pub const COLUMN_CAP: usize = 10_000;
/// Tolerance for LP-level comparisons.
pub const LP_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum LpError {
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("column cap exceeded: primal {primal}, dual bound {dual_bound}")]
    ColumnCap { primal: f64, dual_bound: f64 },
    #[error("LP not applicable: {0}")]
    Inapplicable(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
}

/// A probe string with its LP mass.
#[derive(Debug, Clone)]
pub struct StringMass {
    pub edges: Vec<EdgeId>,
    pub x: f64,
}

/// Solution of the configuration LP for a known stochastic graph.
#[derive(Debug, Clone)]
pub struct ConfigLpSolution {
    pub objective: f64,
    /// Which online vertices participated (all of them for a full solve).
    pub active: Vec<bool>,
    /// Positive-mass strings per online vertex, the empty string included.
    pub per_vertex: Vec<Vec<StringMass>>,
    /// Dual of each offline `<= 1` row.
    pub alpha: Vec<f64>,
    /// Dual of each online `= 1` row (zero for inactive vertices).
    pub beta: Vec<f64>,
}

impl ConfigLpSolution {
    /// Edge variables `x~_e = sum_{s contains e} q(s_<e) x_v(s)`.
    pub fn edge_variables(&self, g: &StochasticGraph) -> Vec<f64> {
        let mut xt = vec![0.0; g.edges.len()];
        for strings in &self.per_vertex {
            for sm in strings {
                let mut survive = 1.0;
                for &e in &sm.edges {
                    xt[e] += survive * sm.x;
                    survive *= 1.0 - g.edges[e].p;
                }
            }
        }
        xt
    }

    /// `sum_e w_e p_e x~_e` must reproduce the LP objective.
    pub fn objective_identity_gap(&self, g: &StochasticGraph) -> f64 {
        let xt = self.edge_variables(g);
        let total: f64 = g
            .edges
            .iter()
            .zip(&xt)
            .map(|(e, x)| e.w * e.p * x)
            .sum();
        (total - self.objective).abs()
    }

    /// Distribution mass of vertex `v` (should be 1 for active vertices).
    pub fn vertex_mass(&self, v: OnlineId) -> f64 {
        self.per_vertex[v].iter().map(|s| s.x).sum()
    }

    /// Validate the solution against the LP constraints: unit mass per
    /// active vertex, offline rows within one, strings feasible.
    pub fn check_feasibility(&self, g: &StochasticGraph) -> Result<(), String> {
        for (v, active) in self.active.iter().enumerate() {
            let mass = self.vertex_mass(v);
            if *active && (mass - 1.0).abs() > LP_TOL {
                return Err(format!("vertex {v} carries mass {mass}"));
            }
            for sm in &self.per_vertex[v] {
                let s = crate::model::EdgeString { v, edges: sm.edges.clone() };
                if !g.membership(&s).map_err(|e| e.to_string())? {
                    return Err(format!("infeasible string at vertex {v}: {:?}", sm.edges));
                }
            }
        }
        let xt = self.edge_variables(g);
        let mut per_u = vec![0.0; g.n_offline()];
        for (e, edge) in g.edges.iter().enumerate() {
            per_u[edge.u] += edge.p * xt[e];
        }
        if let Some((u, &load)) =
            per_u.iter().enumerate().find(|(_, &load)| load > 1.0 + LP_TOL)
        {
            return Err(format!("offline vertex {u} loaded to {load}"));
        }
        Ok(())
    }
}

/// Reusable column pool, keyed by online vertex. Retaining it across the
/// secretary algorithm's growing subgraph solves warm-starts each master.
#[derive(Debug, Clone)]
pub struct ColumnPool {
    strings: Vec<Vec<Vec<EdgeId>>>,
    seen: Vec<HashSet<Vec<EdgeId>>>,
}

impl ColumnPool {
    pub fn new(n_online: usize) -> Self {
        ColumnPool { strings: vec![Vec::new(); n_online], seen: vec![HashSet::new(); n_online] }
    }

    /// True if the string was new.
    fn insert(&mut self, v: OnlineId, s: Vec<EdgeId>) -> bool {
        if self.seen[v].insert(s.clone()) {
            self.strings[v].push(s);
            true
        } else {
            false
        }
    }

    fn total(&self) -> usize {
        self.strings.iter().map(|s| s.len()).sum()
    }
}

/// Column coefficients in the offline rows: `p_e q(s_<e)` per contained edge.
fn offline_coeffs(g: &StochasticGraph, s: &[EdgeId]) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(s.len());
    let mut survive = 1.0;
    for &e in s {
        out.push((g.edges[e].u, g.edges[e].p * survive));
        survive *= 1.0 - g.edges[e].p;
    }
    out
}

/// Solve the configuration LP for the whole graph.
pub fn solve_lp_config(g: &StochasticGraph) -> Result<ConfigLpSolution, LpError> {
    let mut pool = ColumnPool::new(g.n_online());
    solve_lp_config_subset(g, &vec![true; g.n_online()], &mut pool)
}

/// Solve the configuration LP restricted to the `active` online vertices,
/// reusing (and extending) the supplied column pool.
pub fn solve_lp_config_subset(
    g: &StochasticGraph,
    active: &[bool],
    pool: &mut ColumnPool,
) -> Result<ConfigLpSolution, LpError> {
    let n_u = g.n_offline();
    let n_v = g.n_online();
    let active_vs: Vec<OnlineId> = (0..n_v).filter(|&v| active[v]).collect();
    // seed columns: the empty string plus the full-availability optimum
    for &v in &active_vs {
        pool.insert(v, Vec::new());
        let plan = dp_opt(&StarInstance::value_mode(g, v, |_| true));
        if !plan.edges.is_empty() {
            pool.insert(v, plan.edges);
        }
    }
    loop {
        // master over the current pool
        let mut cols: Vec<(OnlineId, usize)> = Vec::new();
        for &v in &active_vs {
            for idx in 0..pool.strings[v].len() {
                cols.push((v, idx));
            }
        }
        let row_of_v: Vec<usize> = {
            let mut map = vec![usize::MAX; n_v];
            for (i, &v) in active_vs.iter().enumerate() {
                map[v] = n_u + i;
            }
            map
        };
        let mut lp = DenseLp::new(
            cols.iter().map(|&(v, idx)| g.val(&pool.strings[v][idx])).collect(),
        );
        let m = n_u + active_vs.len();
        let mut rows = vec![vec![0.0; cols.len()]; m];
        for (j, &(v, idx)) in cols.iter().enumerate() {
            for (u, coef) in offline_coeffs(g, &pool.strings[v][idx]) {
                rows[u][j] += coef;
            }
            rows[row_of_v[v]][j] = 1.0;
        }
        for (i, coeffs) in rows.into_iter().enumerate() {
            if i < n_u {
                lp.push_row(coeffs, Sense::Le, 1.0);
            } else {
                lp.push_row(coeffs, Sense::Eq, 1.0);
            }
        }
        let sol = solve_dense(&lp)?;
        let alpha: Vec<f64> = sol.duals[..n_u].iter().map(|&y| y.max(0.0)).collect();
        let mut beta = vec![0.0; n_v];
        for (i, &v) in active_vs.iter().enumerate() {
            beta[v] = sol.duals[n_u + i];
        }
        // pricing
        let mut added = false;
        let mut best_rc_total = 0.0;
        for &v in &active_vs {
            let (plan, rc) = price_column(g, v, &alpha, beta[v]);
            if rc > PRICE_TOL {
                best_rc_total += rc;
                if pool.insert(v, plan.edges) {
                    added = true;
                }
            }
        }
        if !added {
            // assemble the solution from the final master
            let mut per_vertex: Vec<Vec<StringMass>> = vec![Vec::new(); n_v];
            for (j, &(v, idx)) in cols.iter().enumerate() {
                if sol.x[j] > 1e-12 {
                    per_vertex[v]
                        .push(StringMass { edges: pool.strings[v][idx].clone(), x: sol.x[j] });
                }
            }
            return Ok(ConfigLpSolution {
                objective: sol.objective,
                active: active.to_vec(),
                per_vertex,
                alpha,
                beta,
            });
        }
        if pool.total() > COLUMN_CAP {
            // one valid dual bound: lift each online dual by its best
            // remaining reduced cost
            let dual_bound =
                alpha.iter().sum::<f64>() + beta.iter().sum::<f64>() + best_rc_total;
            return Err(LpError::ColumnCap { primal: sol.objective, dual_bound });
        }
    }
}

/// Solution of the known-i.d. configuration LP.
#[derive(Debug, Clone)]
pub struct ConfigIdLpSolution {
    pub objective: f64,
    /// `per_arrival[i]` lists `(type, r_i(type), strings, beta)` for every
    /// positive-mass type of row `i`.
    pub per_arrival: Vec<Vec<TypeStrings>>,
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TypeStrings {
    pub b: OnlineId,
    pub r: f64,
    pub strings: Vec<StringMass>,
    pub beta: f64,
}

impl ConfigIdLpSolution {
    pub fn type_entry(&self, i: usize, b: OnlineId) -> Option<&TypeStrings> {
        self.per_arrival[i].iter().find(|t| t.b == b)
    }

    /// Conditional string distribution `x_i(. | b) / r_i(b)`; sums to one.
    pub fn conditional(&self, i: usize, b: OnlineId) -> Vec<StringMass> {
        let entry = self.type_entry(i, b).expect("type has positive mass");
        entry
            .strings
            .iter()
            .map(|s| StringMass { edges: s.edges.clone(), x: s.x / entry.r })
            .collect()
    }

    /// Edge variable `x~_{u,i}(b)` for the edge `e` of the type graph.
    pub fn edge_variable(&self, tg: &StochasticGraph, i: usize, b: OnlineId, e: EdgeId) -> f64 {
        let Some(entry) = self.type_entry(i, b) else { return 0.0 };
        let mut total = 0.0;
        for sm in &entry.strings {
            let mut survive = 1.0;
            for &f in &sm.edges {
                if f == e {
                    total += survive * sm.x;
                    break;
                }
                survive *= 1.0 - tg.edges[f].p;
            }
        }
        total
    }

    /// Proposal marginals `z_{u,i} = sum_b p_{u,b} x~_{u,i}(b)`, indexed
    /// `[u][i]`.
    pub fn proposal_marginals(&self, tg: &StochasticGraph) -> Vec<Vec<f64>> {
        let n = self.per_arrival.len();
        let mut z = vec![vec![0.0; n]; tg.n_offline()];
        for (i, row) in self.per_arrival.iter().enumerate() {
            for entry in row {
                for sm in &entry.strings {
                    let mut survive = 1.0;
                    for &e in &sm.edges {
                        let edge = &tg.edges[e];
                        z[edge.u][i] += edge.p * survive * sm.x;
                        survive *= 1.0 - edge.p;
                    }
                }
            }
        }
        z
    }
}

/// Solve the known-i.d. configuration LP by column generation: one equality
/// row per (arrival, type) pair with right-hand side `r_i(b)`.
pub fn solve_lp_config_id(input: &KnownIdInput) -> Result<ConfigIdLpSolution, LpError> {
    let tg = &input.type_graph;
    let n_u = tg.n_offline();
    let n = input.n_arrivals();
    // (arrival, type) pairs in a fixed order
    let mut pairs: Vec<(usize, OnlineId, f64)> = Vec::new();
    for i in 0..n {
        for &(b, r) in input.row(i) {
            pairs.push((i, b, r));
        }
    }
    let mut pools: Vec<Vec<Vec<EdgeId>>> = vec![Vec::new(); pairs.len()];
    let mut seen: Vec<HashSet<Vec<EdgeId>>> = vec![HashSet::new(); pairs.len()];
    for (k, &(_, b, _)) in pairs.iter().enumerate() {
        seen[k].insert(Vec::new());
        pools[k].push(Vec::new());
        let plan = dp_opt(&StarInstance::value_mode(tg, b, |_| true));
        if !plan.edges.is_empty() && seen[k].insert(plan.edges.clone()) {
            pools[k].push(plan.edges);
        }
    }
    loop {
        let mut cols: Vec<(usize, usize)> = Vec::new();
        for (k, pool) in pools.iter().enumerate() {
            for idx in 0..pool.len() {
                cols.push((k, idx));
            }
        }
        let mut lp =
            DenseLp::new(cols.iter().map(|&(k, idx)| tg.val(&pools[k][idx])).collect());
        let m = n_u + pairs.len();
        let mut rows = vec![vec![0.0; cols.len()]; m];
        for (j, &(k, idx)) in cols.iter().enumerate() {
            for (u, coef) in offline_coeffs(tg, &pools[k][idx]) {
                rows[u][j] += coef;
            }
            rows[n_u + k][j] = 1.0;
        }
        for (i, coeffs) in rows.into_iter().enumerate() {
            if i < n_u {
                lp.push_row(coeffs, Sense::Le, 1.0);
            } else {
                lp.push_row(coeffs, Sense::Eq, pairs[i - n_u].2);
            }
        }
        let sol = solve_dense(&lp)?;
        let alpha: Vec<f64> = sol.duals[..n_u].iter().map(|&y| y.max(0.0)).collect();
        let betas: Vec<f64> = (0..pairs.len()).map(|k| sol.duals[n_u + k]).collect();
        let mut added = false;
        let mut best_rc_total = 0.0;
        for (k, &(_, b, _)) in pairs.iter().enumerate() {
            let (plan, rc) = price_column(tg, b, &alpha, betas[k]);
            if rc > PRICE_TOL {
                best_rc_total += rc * pairs[k].2;
                if seen[k].insert(plan.edges.clone()) {
                    pools[k].push(plan.edges);
                    added = true;
                }
            }
        }
        if !added {
            let mut per_arrival: Vec<Vec<TypeStrings>> = vec![Vec::new(); n];
            for (k, &(i, b, r)) in pairs.iter().enumerate() {
                let mut strings = Vec::new();
                for (j, &(ck, idx)) in cols.iter().enumerate() {
                    if ck == k && sol.x[j] > 1e-12 {
                        strings.push(StringMass { edges: pools[k][idx].clone(), x: sol.x[j] });
                    }
                }
                per_arrival[i].push(TypeStrings { b, r, strings, beta: betas[k] });
            }
            return Ok(ConfigIdLpSolution { objective: sol.objective, per_arrival, alpha });
        }
        if pools.iter().map(|p| p.len()).sum::<usize>() > COLUMN_CAP {
            let dual_bound = alpha.iter().sum::<f64>()
                + pairs.iter().zip(&betas).map(|(&(_, _, r), &b)| r * b).sum::<f64>()
                + best_rc_total;
            return Err(LpError::ColumnCap { primal: sol.objective, dual_bound });
        }
    }
}

/// Enumerate every feasible probe string of `v` (the empty string included).
/// Prefix pruning is sound because set-infeasibility is inherited upward.
pub fn enumerate_strings(g: &StochasticGraph, v: OnlineId, cap: usize) -> Result<Vec<Vec<EdgeId>>, LpError> {
    let probe: Vec<EdgeId> = g.probe_edges(v).collect();
    let mut out = Vec::new();
    let mut current: Vec<EdgeId> = Vec::new();
    let mut positions: Vec<usize> = Vec::new();
    fn rec(
        g: &StochasticGraph,
        v: OnlineId,
        probe: &[EdgeId],
        current: &mut Vec<EdgeId>,
        positions: &mut Vec<usize>,
        out: &mut Vec<Vec<EdgeId>>,
        cap: usize,
    ) -> Result<(), LpError> {
        if out.len() > cap {
            return Err(LpError::TooLarge(format!("more than {cap} strings at one vertex")));
        }
        out.push(current.clone());
        for &e in probe {
            if current.contains(&e) {
                continue;
            }
            positions.push(g.position_in_vertex(e));
            if g.feasible_positions(v, positions) {
                current.push(e);
                rec(g, v, probe, current, positions, out, cap)?;
                current.pop();
            }
            positions.pop();
        }
        Ok(())
    }
    rec(g, v, &probe, &mut current, &mut positions, &mut out, cap)?;
    Ok(out)
}

/// Solve the configuration LP with every feasible string materialized as a
/// column. Only usable when `sum_v |C_v|` stays within `cap`.
pub fn solve_lp_config_full_enumeration(
    g: &StochasticGraph,
    cap: usize,
) -> Result<f64, LpError> {
    let n_u = g.n_offline();
    let n_v = g.n_online();
    let mut all: Vec<(OnlineId, Vec<EdgeId>)> = Vec::new();
    for v in 0..n_v {
        for s in enumerate_strings(g, v, cap)? {
            all.push((v, s));
        }
        if all.len() > cap {
            return Err(LpError::TooLarge(format!("more than {cap} strings in total")));
        }
    }
    let mut lp = DenseLp::new(all.iter().map(|(_, s)| g.val(s)).collect());
    let mut rows = vec![vec![0.0; all.len()]; n_u + n_v];
    for (j, (v, s)) in all.iter().enumerate() {
        for (u, coef) in offline_coeffs(g, s) {
            rows[u][j] += coef;
        }
        rows[n_u + v][j] = 1.0;
    }
    for (i, coeffs) in rows.into_iter().enumerate() {
        if i < n_u {
            lp.push_row(coeffs, Sense::Le, 1.0);
        } else {
            lp.push_row(coeffs, Sense::Eq, 1.0);
        }
    }
    Ok(solve_dense(&lp)?.objective)
}

fn patience_of(g: &StochasticGraph, v: OnlineId) -> Option<usize> {
    match g.online[v].constraint {
        crate::model::ProbingConstraint::Patience(l) => Some(l),
        _ => None,
    }
}

/// The standard edge-variable LP for graphs with patience constraints.
pub fn solve_lp_std(g: &StochasticGraph) -> Result<f64, LpError> {
    let patience: Vec<usize> = (0..g.n_online())
        .map(|v| {
            patience_of(g, v)
                .ok_or_else(|| LpError::Inapplicable("std LP needs patience constraints".into()))
        })
        .collect::<Result<_, _>>()?;
    let ne = g.edges.len();
    let mut lp = DenseLp::new(g.edges.iter().map(|e| e.w * e.p).collect());
    for u in 0..g.n_offline() {
        let mut row = vec![0.0; ne];
        for (j, e) in g.edges.iter().enumerate() {
            if e.u == u {
                row[j] = e.p;
            }
        }
        lp.push_row(row, Sense::Le, 1.0);
    }
    for v in 0..g.n_online() {
        let mut prow = vec![0.0; ne];
        let mut crow = vec![0.0; ne];
        for &e in &g.online[v].incident {
            prow[e] = g.edges[e].p;
            crow[e] = 1.0;
        }
        lp.push_row(prow, Sense::Le, 1.0);
        lp.push_row(crow, Sense::Le, patience[v] as f64);
    }
    for j in 0..ne {
        let mut row = vec![0.0; ne];
        row[j] = 1.0;
        lp.push_row(row, Sense::Le, 1.0);
    }
    Ok(solve_dense(&lp)?.objective)
}

/// The unit-patience LP (no per-edge upper bounds, probe counts at most one).
pub fn solve_lp_std_unit(g: &StochasticGraph) -> Result<f64, LpError> {
    for v in 0..g.n_online() {
        match patience_of(g, v) {
            Some(1) => {}
            _ => {
                return Err(LpError::Inapplicable(
                    "unit-patience LP needs patience exactly 1".into(),
                ))
            }
        }
    }
    let ne = g.edges.len();
    let mut lp = DenseLp::new(g.edges.iter().map(|e| e.w * e.p).collect());
    for u in 0..g.n_offline() {
        let mut row = vec![0.0; ne];
        for (j, e) in g.edges.iter().enumerate() {
            if e.u == u {
                row[j] = e.p;
            }
        }
        lp.push_row(row, Sense::Le, 1.0);
    }
    for v in 0..g.n_online() {
        let mut row = vec![0.0; ne];
        for &e in &g.online[v].incident {
            row[e] = 1.0;
        }
        lp.push_row(row, Sense::Le, 1.0);
    }
    Ok(solve_dense(&lp)?.objective)
}

/// The vertex-weighted LP whose per-set constraints cap each online vertex's
/// expected reward by the optimal star value. All `2^|U|` constraints per
/// vertex are materialized; when that would make the primal tableau too
/// tall, the transposed (dual) program is solved instead — same value by
/// strong duality.
pub fn solve_lp_dp(g: &StochasticGraph) -> Result<f64, LpError> {
    solve_lp_dp_with(g, 1_500)
}

fn solve_lp_dp_with(g: &StochasticGraph, max_primal_rows: usize) -> Result<f64, LpError> {
    let n_u = g.n_offline();
    let n_v = g.n_online();
    if n_u > 14 {
        return Err(LpError::TooLarge("LP-DP enumeration supports at most 14 offline".into()));
    }
    if !g.is_vertex_weighted() {
        return Err(LpError::Inapplicable(
            "LP-DP needs a vertex-weighted graph (w_uv = w_u)".into(),
        ));
    }
    let subsets = 1usize << n_u;
    if n_v * subsets > 400_000 {
        return Err(LpError::TooLarge("too many (vertex, subset) constraints".into()));
    }
    // OPT(v, R) for every vertex and available set
    let mut opt = vec![vec![0.0f64; subsets]; n_v];
    for v in 0..n_v {
        for mask in 0..subsets {
            let inst = StarInstance::value_mode(g, v, |u| mask & (1 << u) != 0);
            opt[v][mask] = dp_opt(&inst).value;
        }
    }
    // variables x_{u,v} laid out u * n_v + v
    let nx = n_u * n_v;
    let objective: Vec<f64> = (0..nx)
        .map(|j| {
            let (u, v) = (j / n_v, j % n_v);
            edge_of(g, u, v).map_or(0.0, |e| g.offline[u].weight * g.edges[e].p)
        })
        .collect();
    let n_rows = n_u + n_v * subsets;
    if n_rows <= max_primal_rows {
        let mut lp = DenseLp::new(objective);
        for u in 0..n_u {
            let mut row = vec![0.0; nx];
            for v in 0..n_v {
                if let Some(e) = edge_of(g, u, v) {
                    row[u * n_v + v] = g.edges[e].p;
                }
            }
            lp.push_row(row, Sense::Le, 1.0);
        }
        for v in 0..n_v {
            for mask in 0..subsets {
                let mut row = vec![0.0; nx];
                for u in 0..n_u {
                    if mask & (1 << u) != 0 {
                        if let Some(e) = edge_of(g, u, v) {
                            row[u * n_v + v] = g.offline[u].weight * g.edges[e].p;
                        }
                    }
                }
                lp.push_row(row, Sense::Le, opt[v][mask]);
            }
        }
        Ok(solve_dense(&lp)?.objective)
    } else {
        // transpose: min b'y s.t. A'y >= c, y >= 0, solved as max -b'y
        let ny = n_rows;
        let mut lp = DenseLp::new(
            (0..ny)
                .map(|i| {
                    if i < n_u {
                        -1.0
                    } else {
                        let k = i - n_u;
                        -opt[k / subsets][k % subsets]
                    }
                })
                .collect(),
        );
        for j in 0..nx {
            let (u, v) = (j / n_v, j % n_v);
            let Some(e) = edge_of(g, u, v) else { continue };
            let p = g.edges[e].p;
            if p <= 0.0 {
                continue;
            }
            let mut row = vec![0.0; ny];
            row[u] = p;
            for mask in 0..subsets {
                if mask & (1 << u) != 0 {
                    row[n_u + v * subsets + mask] = g.offline[u].weight * p;
                }
            }
            lp.push_row(row, Sense::Ge, g.offline[u].weight * p);
        }
        Ok(-solve_dense(&lp)?.objective)
    }
}

fn edge_of(g: &StochasticGraph, u: usize, v: usize) -> Option<EdgeId> {
    g.online[v].incident.iter().copied().find(|&e| g.edges[e].u == u)
}

/// The unbounded-patience LP with one constraint per subset of each online
/// vertex's edges: `sum_{e in S} p_e x_e <= 1 - prod_{e in S}(1 - p_e)`.
pub fn solve_lp_qc(g: &StochasticGraph) -> Result<f64, LpError> {
    // the constraint must allow probing the full neighbourhood
    for v in 0..g.n_online() {
        let positions: Vec<usize> =
            g.probe_edges(v).map(|e| g.position_in_vertex(e)).collect();
        if positions.len() > 14 {
            return Err(LpError::TooLarge("LP-QC enumeration supports degree <= 14".into()));
        }
        if !g.feasible_positions(v, &positions) {
            return Err(LpError::Inapplicable(
                "LP-QC is defined only for unbounded patience".into(),
            ));
        }
    }
    let ne = g.edges.len();
    let mut lp = DenseLp::new(g.edges.iter().map(|e| e.w * e.p).collect());
    for u in 0..g.n_offline() {
        let mut row = vec![0.0; ne];
        for (j, e) in g.edges.iter().enumerate() {
            if e.u == u {
                row[j] = e.p;
            }
        }
        lp.push_row(row, Sense::Le, 1.0);
    }
    for v in 0..g.n_online() {
        let probe: Vec<EdgeId> = g.probe_edges(v).collect();
        let d = probe.len();
        for mask in 1u64..(1 << d) {
            let mut row = vec![0.0; ne];
            let mut fail = 1.0;
            for (i, &e) in probe.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    row[e] = g.edges[e].p;
                    fail *= 1.0 - g.edges[e].p;
                }
            }
            lp.push_row(row, Sense::Le, 1.0 - fail);
        }
    }
    Ok(solve_dense(&lp)?.objective)
}

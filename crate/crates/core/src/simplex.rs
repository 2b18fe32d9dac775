//! Dense two-phase simplex for small linear programs.
//!
//! Maximizes `c^T x` over `x >= 0` subject to rows with `<=`, `=`, or `>=`
//! sense. Phase one drives artificial variables out; phase two prices with
//! Dantzig's rule and falls back to Bland's rule after a degeneracy stall.
//! Dual values are read off the reduced-cost row at each constraint's seed
//! column, and the primal/dual objectives are required to agree before a
//! solution is returned.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-9;
const RC_TOL: f64 = 1e-9;
const STALL_LIMIT: usize = 64;
const MAX_ITERS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A dense LP in maximization form with nonnegative variables.
#[derive(Debug, Clone, Default)]
pub struct DenseLp {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

impl DenseLp {
    pub fn new(objective: Vec<f64>) -> Self {
        DenseLp { objective, rows: Vec::new() }
    }

    pub fn push_row(&mut self, coeffs: Vec<f64>, sense: Sense, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.rows.push(Row { coeffs, sense, rhs });
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    /// One dual value per row, in the max convention: `>= 0` for `<=` rows,
    /// free for `=` rows, `<= 0` for `>=` rows.
    pub duals: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("LP is infeasible (phase-one residual {0})")]
    Infeasible(f64),
    #[error("LP is unbounded")]
    Unbounded,
    #[error("simplex iteration limit reached")]
    IterationLimit,
    #[error("primal/dual objectives disagree: {primal} vs {dual}")]
    DualityGap { primal: f64, dual: f64 },
}

struct Tableau {
    /// m x (ncols + 1); last entry of each row is the rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
    /// Column seeded as the identity for each row (slack or artificial).
    seed_col: Vec<usize>,
    artificial_from: usize,
}

impl Tableau {
    fn build(lp: &DenseLp) -> Self {
        let m = lp.rows.len();
        let n = lp.n_vars();
        // extra columns after normalization: slack/surplus for every
        // inequality, one artificial per Eq or (normalized) Ge row
        let mut n_slack = 0;
        let mut n_art = 0;
        for row in &lp.rows {
            match normalized_sense(row).0 {
                Sense::Le => n_slack += 1,
                Sense::Ge => {
                    n_slack += 1;
                    n_art += 1;
                }
                Sense::Eq => n_art += 1,
            }
        }
        let artificial_from = n + n_slack;
        let ncols = n + n_slack + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = vec![0usize; m];
        let mut seed_col = vec![0usize; m];
        let mut slack_at = n;
        let mut art_at = artificial_from;
        for (i, row) in lp.rows.iter().enumerate() {
            let mut t = vec![0.0; ncols + 1];
            let flip = row.rhs < 0.0;
            let sgn = if flip { -1.0 } else { 1.0 };
            for (j, &a) in row.coeffs.iter().enumerate() {
                t[j] = sgn * a;
            }
            t[ncols] = sgn * row.rhs;
            let (sense, _) = normalized_sense(row);
            match sense {
                Sense::Le => {
                    t[slack_at] = 1.0;
                    basis[i] = slack_at;
                    seed_col[i] = slack_at;
                    slack_at += 1;
                }
                Sense::Ge => {
                    t[slack_at] = -1.0;
                    slack_at += 1;
                    t[art_at] = 1.0;
                    basis[i] = art_at;
                    seed_col[i] = art_at;
                    art_at += 1;
                }
                Sense::Eq => {
                    t[art_at] = 1.0;
                    basis[i] = art_at;
                    seed_col[i] = art_at;
                    art_at += 1;
                }
            }
            rows.push(t);
        }
        Tableau { rows, basis, ncols, seed_col, artificial_from }
    }

    /// reduced[j] = c[j] - c_B^T T[:, j]; returns (reduced row, objective).
    fn reduced_costs(&self, costs: &[f64]) -> (Vec<f64>, f64) {
        let mut reduced = costs.to_vec();
        reduced.push(0.0);
        let mut obj = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let cb = costs[self.basis[i]];
            if cb != 0.0 {
                for j in 0..=self.ncols {
                    reduced[j] -= cb * row[j];
                }
                obj += cb * row[self.ncols];
            }
        }
        // the rhs slot accumulated -obj
        reduced[self.ncols] = 0.0;
        (reduced, obj)
    }

    fn pivot(&mut self, r: usize, c: usize, reduced: &mut [f64]) {
        let piv = self.rows[r][c];
        let inv = 1.0 / piv;
        for x in self.rows[r].iter_mut() {
            *x *= inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (x, &pr) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * pr;
                }
                row[c] = 0.0;
            }
        }
        let f = reduced[c];
        if f != 0.0 {
            for (x, &pr) in reduced.iter_mut().zip(&pivot_row) {
                *x -= f * pr;
            }
            reduced[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Run the simplex loop until no allowed column prices out.
    fn optimize(
        &mut self,
        costs: &[f64],
        allowed: impl Fn(usize) -> bool,
    ) -> Result<(Vec<f64>, f64), SimplexError> {
        let (mut reduced, _) = self.reduced_costs(costs);
        let mut bland = false;
        let mut stall = 0usize;
        let mut last_obj = f64::NEG_INFINITY;
        for _ in 0..MAX_ITERS {
            // entering column
            let mut enter = None;
            if bland {
                for j in 0..self.ncols {
                    if allowed(j) && reduced[j] > RC_TOL {
                        enter = Some(j);
                        break;
                    }
                }
            } else {
                let mut best = RC_TOL;
                for j in 0..self.ncols {
                    if allowed(j) && reduced[j] > best {
                        best = reduced[j];
                        enter = Some(j);
                    }
                }
            }
            let Some(c) = enter else {
                let obj = self.objective_of(costs);
                return Ok((reduced, obj));
            };
            // ratio test
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_TOL {
                    let ratio = row[self.ncols] / row[c];
                    let better = ratio < best_ratio - 1e-12
                        || (ratio < best_ratio + 1e-12
                            && leave.is_none_or(|l| self.basis[i] < self.basis[l]));
                    if better {
                        best_ratio = ratio;
                        leave = Some(i);
                    }
                }
            }
            let Some(r) = leave else {
                return Err(SimplexError::Unbounded);
            };
            self.pivot(r, c, &mut reduced);
            let obj = self.objective_of(costs);
            if obj > last_obj + 1e-12 {
                stall = 0;
                last_obj = obj;
            } else {
                stall += 1;
                if stall >= STALL_LIMIT {
                    bland = true;
                }
            }
        }
        Err(SimplexError::IterationLimit)
    }

    fn objective_of(&self, costs: &[f64]) -> f64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| costs[self.basis[i]] * row[self.ncols])
            .sum()
    }
}

fn normalized_sense(row: &Row) -> (Sense, f64) {
    // Negative rhs rows are negated at build time, flipping the sense.
    if row.rhs < 0.0 {
        let s = match row.sense {
            Sense::Le => Sense::Ge,
            Sense::Ge => Sense::Le,
            Sense::Eq => Sense::Eq,
        };
        (s, -row.rhs)
    } else {
        (row.sense, row.rhs)
    }
}

/// Solve the LP to optimality, returning primal values, duals, and the
/// objective.
pub fn solve_dense(lp: &DenseLp) -> Result<LpSolution, SimplexError> {
    let m = lp.rows.len();
    let mut t = Tableau::build(lp);

    // Phase one: maximize minus the sum of artificials.
    if t.artificial_from < t.ncols {
        let mut costs = vec![0.0; t.ncols];
        for c in costs.iter_mut().skip(t.artificial_from) {
            *c = -1.0;
        }
        let (_, obj) = t.optimize(&costs, |_| true)?;
        if obj < -1e-7 {
            return Err(SimplexError::Infeasible(-obj));
        }
        // drive basic artificials out where possible
        for i in 0..m {
            if t.basis[i] >= t.artificial_from {
                if let Some(c) =
                    (0..t.artificial_from).find(|&j| t.rows[i][j].abs() > PIVOT_TOL)
                {
                    let mut dummy = vec![0.0; t.ncols + 1];
                    t.pivot(i, c, &mut dummy);
                }
            }
        }
    }

    // Phase two: the real objective; artificials may not re-enter.
    let mut costs = vec![0.0; t.ncols];
    costs[..lp.n_vars()].copy_from_slice(&lp.objective);
    let artificial_from = t.artificial_from;
    let (reduced, objective) = t.optimize(&costs, move |j| j < artificial_from)?;

    let mut x = vec![0.0; lp.n_vars()];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < lp.n_vars() {
            x[b] = t.rows[i][t.ncols];
        }
    }
    // duals from the reduced-cost row at each row's seed column
    let mut duals = vec![0.0; m];
    for i in 0..m {
        let mut y = -reduced[t.seed_col[i]];
        if lp.rows[i].rhs < 0.0 {
            y = -y;
        }
        duals[i] = y;
    }
    // weak-duality certificate
    let dual_obj: f64 = duals.iter().zip(&lp.rows).map(|(y, r)| y * r.rhs).sum();
    let tol = 1e-8 * (1.0 + objective.abs());
    if (dual_obj - objective).abs() > tol {
        return Err(SimplexError::DualityGap { primal: objective, dual: dual_obj });
    }
    Ok(LpSolution { x, duals, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn single_variable_bound() {
        let mut lp = DenseLp::new(vec![1.0]);
        lp.push_row(vec![1.0], Sense::Le, 1.0);
        let s = solve_dense(&lp).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-12);
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert!((s.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_variable_budget() {
        let mut lp = DenseLp::new(vec![1.0, 1.0]);
        lp.push_row(vec![1.0, 1.0], Sense::Le, 1.0);
        let s = solve_dense(&lp).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_ge_rows() {
        // max x + 2y s.t. x + y = 1, y >= 0.25: put everything on y
        let mut lp = DenseLp::new(vec![1.0, 2.0]);
        lp.push_row(vec![1.0, 1.0], Sense::Eq, 1.0);
        lp.push_row(vec![0.0, 1.0], Sense::Ge, 0.25);
        let s = solve_dense(&lp).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-9);
        assert!((s.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        let mut lp = DenseLp::new(vec![1.0]);
        lp.push_row(vec![1.0], Sense::Le, 1.0);
        lp.push_row(vec![1.0], Sense::Ge, 2.0);
        assert!(matches!(solve_dense(&lp), Err(SimplexError::Infeasible(_))));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = DenseLp::new(vec![1.0, 0.0]);
        lp.push_row(vec![0.0, 1.0], Sense::Le, 1.0);
        assert!(matches!(solve_dense(&lp), Err(SimplexError::Unbounded)));
    }

    #[test]
    fn negative_rhs_handled() {
        // max -x s.t. -x <= -2  (i.e. x >= 2): optimum -2
        let mut lp = DenseLp::new(vec![-1.0]);
        lp.push_row(vec![-1.0], Sense::Le, -2.0);
        let s = solve_dense(&lp).unwrap();
        assert!((s.objective + 2.0).abs() < 1e-9);
    }

    #[test]
    fn assignment_lp_is_integral() {
        // 2x2 perfect matching, all weights 1: optimum 2
        let mut lp = DenseLp::new(vec![1.0; 4]); // x_uv for u,v in {0,1}
        for u in 0..2 {
            let mut row = vec![0.0; 4];
            for v in 0..2 {
                row[u * 2 + v] = 1.0;
            }
            lp.push_row(row, Sense::Le, 1.0);
        }
        for v in 0..2 {
            let mut row = vec![0.0; 4];
            for u in 0..2 {
                row[u * 2 + v] = 1.0;
            }
            lp.push_row(row, Sense::Le, 1.0);
        }
        let s = solve_dense(&lp).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-9);
    }

    /// Random LPs: verify the returned solution with an optimality
    /// certificate (primal feasibility, dual feasibility, matching
    /// objectives) rather than an external solver.
    #[test]
    fn random_lps_certified_optimal() {
        let mut rng = crate::rng::root(99);
        let mut solved = 0;
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=6);
            let mut lp = DenseLp::new((0..n).map(|_| rng.gen_range(-1.0..2.0)).collect());
            for _ in 0..m {
                let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..2.0)).collect();
                let sense = match rng.gen_range(0..3) {
                    0 => Sense::Le,
                    1 => Sense::Eq,
                    _ => Sense::Ge,
                };
                lp.push_row(coeffs, sense, rng.gen_range(-1.0..2.0));
            }
            let s = match solve_dense(&lp) {
                Ok(s) => s,
                Err(SimplexError::Infeasible(_)) | Err(SimplexError::Unbounded) => continue,
                Err(e) => panic!("solver failed on a solvable LP: {e}"),
            };
            solved += 1;
            // primal feasibility
            for row in &lp.rows {
                let lhs: f64 = row.coeffs.iter().zip(&s.x).map(|(a, x)| a * x).sum();
                match row.sense {
                    Sense::Le => assert!(lhs <= row.rhs + 1e-7),
                    Sense::Ge => assert!(lhs >= row.rhs - 1e-7),
                    Sense::Eq => assert!((lhs - row.rhs).abs() <= 1e-7),
                }
            }
            assert!(s.x.iter().all(|&x| x >= -1e-9));
            // dual feasibility: sign conventions and reduced costs <= 0
            for (y, row) in s.duals.iter().zip(&lp.rows) {
                match row.sense {
                    Sense::Le => assert!(*y >= -1e-7),
                    Sense::Ge => assert!(*y <= 1e-7),
                    Sense::Eq => {}
                }
            }
            for j in 0..n {
                let priced: f64 =
                    s.duals.iter().zip(&lp.rows).map(|(y, r)| y * r.coeffs[j]).sum();
                assert!(
                    priced >= lp.objective[j] - 1e-6,
                    "column {j} has positive reduced cost"
                );
            }
        }
        assert!(solved > 50, "only {solved} random LPs were feasible+bounded");
    }
}

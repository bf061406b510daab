//! Bounded-variable primal revised simplex, two-phase.
//!
//! Columns are kept sparse; the basis inverse is held densely and updated
//! by elementary row operations after every pivot, with a full
//! refactorization every `refactor_interval` pivots. Pricing is Dantzig's
//! rule, switching to Bland's rule after `stall_threshold` consecutive
//! degenerate pivots until progress resumes. Ratio-test ties go to the
//! lowest variable index.

use super::{
    check_solution, feasibility_tolerance, LinearProgram, LpError, LpSolution, Sense,
    SolverSettings, Status,
};

const SCALING_PASSES: usize = 8;
const TIE_EPS: f64 = 1e-12;
const DEGENERATE_STEP: f64 = 1e-12;

/// Solves `lp`. Only structurally invalid programs produce an error; the
/// outcome of the optimization itself is carried in [`LpSolution::status`].
pub fn solve(lp: &LinearProgram, settings: &SolverSettings) -> Result<LpSolution, LpError> {
    lp.check()?;
    let scaled = ScaledProblem::new(lp, settings.scaling);
    let mut simplex = Simplex::new(&scaled, settings);
    let outcome = simplex.run();
    Ok(simplex.finish(lp, &scaled, outcome))
}

fn power_of_two(s: f64) -> f64 {
    if !s.is_finite() || s <= 0.0 {
        1.0
    } else {
        2f64.powi(s.log2().round() as i32)
    }
}

/// The program after row/column equilibration, with slack columns appended.
struct ScaledProblem {
    m: usize,
    n: usize,
    /// Structural columns then one slack per inequality row.
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Normalized phase-two costs for every column.
    cost: Vec<f64>,
    b: Vec<f64>,
    /// Slack column index of each row, if any, and its coefficient.
    slack: Vec<Option<(usize, f64)>>,
    col_scale: Vec<f64>,
}

impl ScaledProblem {
    fn new(lp: &LinearProgram, scaling: bool) -> Self {
        let m = lp.rows.len();
        let n = lp.num_vars;
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
        }
        // merge duplicate (row, col) entries
        for col in &mut cols {
            col.sort_by_key(|&(i, _)| i);
            col.dedup_by(|next, prev| {
                if next.0 == prev.0 {
                    prev.1 += next.1;
                    true
                } else {
                    false
                }
            });
            col.retain(|&(_, a)| a != 0.0);
        }

        let mut row_scale = vec![1.0; m];
        let mut col_scale = vec![1.0; n];
        if scaling {
            for _ in 0..SCALING_PASSES {
                let mut rmin = vec![f64::INFINITY; m];
                let mut rmax = vec![0.0f64; m];
                for (j, col) in cols.iter().enumerate() {
                    for &(i, a) in col {
                        let v = (a * row_scale[i] * col_scale[j]).abs();
                        rmin[i] = rmin[i].min(v);
                        rmax[i] = rmax[i].max(v);
                    }
                }
                for i in 0..m {
                    if rmax[i] > 0.0 {
                        row_scale[i] /= (rmin[i] * rmax[i]).sqrt();
                    }
                }
                for (j, col) in cols.iter().enumerate() {
                    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
                    for &(i, a) in col {
                        let v = (a * row_scale[i] * col_scale[j]).abs();
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                    if hi > 0.0 {
                        col_scale[j] /= (lo * hi).sqrt();
                    }
                }
            }
            row_scale.iter_mut().for_each(|s| *s = power_of_two(*s));
            col_scale.iter_mut().for_each(|s| *s = power_of_two(*s));
        }

        for (j, col) in cols.iter_mut().enumerate() {
            for (i, a) in col.iter_mut() {
                *a *= row_scale[*i] * col_scale[j];
            }
        }
        let b: Vec<f64> = lp
            .rows
            .iter()
            .zip(&row_scale)
            .map(|(r, s)| r.rhs * s)
            .collect();
        let mut lower: Vec<f64> = lp
            .bounds
            .iter()
            .zip(&col_scale)
            .map(|(bd, s)| bd.lower / s)
            .collect();
        let mut upper: Vec<f64> = lp
            .bounds
            .iter()
            .zip(&col_scale)
            .map(|(bd, s)| bd.upper / s)
            .collect();
        let dense_c = lp.objective_dense();
        let mut cost: Vec<f64> = dense_c.iter().zip(&col_scale).map(|(c, s)| c * s).collect();
        let cmax = cost.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
        if cmax > 0.0 {
            let k = power_of_two(1.0 / cmax);
            cost.iter_mut().for_each(|c| *c *= k);
        }

        let mut slack = vec![None; m];
        for (i, row) in lp.rows.iter().enumerate() {
            let coef = match row.sense {
                Sense::Le => 1.0,
                Sense::Ge => -1.0,
                Sense::Eq => continue,
            };
            slack[i] = Some((cols.len(), coef));
            cols.push(vec![(i, coef)]);
            lower.push(0.0);
            upper.push(f64::INFINITY);
            cost.push(0.0);
        }

        Self {
            m,
            n,
            cols,
            lower,
            upper,
            cost,
            b,
            slack,
            col_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

enum PhaseOutcome {
    Optimal,
    Unbounded(Vec<usize>),
    IterationLimit,
}

enum Outcome {
    Optimal,
    Infeasible(Vec<usize>),
    Unbounded(Vec<usize>),
    IterationLimit { feasible: bool },
}

struct Simplex<'a> {
    settings: &'a SolverSettings,
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    b: Vec<f64>,
    first_artificial: usize,
    /// Basic column of each row.
    basis: Vec<usize>,
    state: Vec<VarState>,
    x: Vec<f64>,
    /// Dense row-major basis inverse.
    binv: Vec<f64>,
    since_refactor: usize,
    iterations: usize,
    max_iterations: usize,
}

impl<'a> Simplex<'a> {
    fn new(p: &ScaledProblem, settings: &'a SolverSettings) -> Self {
        let m = p.m;
        let mut cols = p.cols.clone();
        let mut lower = p.lower.clone();
        let mut upper = p.upper.clone();
        let mut cost = p.cost.clone();
        let mut state = vec![VarState::AtLower; cols.len()];
        let mut x = lower.clone();

        // residual with every structural at its lower bound
        let mut resid = p.b.clone();
        for (j, col) in p.cols.iter().enumerate().take(p.n) {
            if x[j] != 0.0 {
                for &(i, a) in col {
                    resid[i] -= a * x[j];
                }
            }
        }

        let first_artificial = cols.len();
        let mut basis = vec![0; m];
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            let r = resid[i];
            match p.slack[i] {
                Some((s, coef)) if r * coef >= 0.0 => {
                    basis[i] = s;
                    state[s] = VarState::Basic(i);
                    x[s] = r * coef;
                    binv[i * m + i] = coef;
                }
                _ => {
                    let coef = if r < 0.0 { -1.0 } else { 1.0 };
                    basis[i] = cols.len();
                    cols.push(vec![(i, coef)]);
                    lower.push(0.0);
                    upper.push(f64::INFINITY);
                    cost.push(0.0);
                    state.push(VarState::Basic(i));
                    x.push(r.abs());
                    binv[i * m + i] = coef;
                }
            }
        }
        let max_iterations = settings.max_iterations.unwrap_or(50 * (m + p.n) + 1000);
        Self {
            settings,
            m,
            cols,
            lower,
            upper,
            cost,
            b: p.b.clone(),
            first_artificial,
            basis,
            state,
            x,
            binv,
            since_refactor: 0,
            iterations: 0,
            max_iterations,
        }
    }

    fn run(&mut self) -> Outcome {
        let ncols = self.cols.len();
        if ncols > self.first_artificial {
            let mut phase_one = vec![0.0; ncols];
            phase_one[self.first_artificial..].fill(1.0);
            match self.run_phase(&phase_one) {
                PhaseOutcome::Optimal => {}
                // phase one is bounded below by zero, so only the limit can stop it early
                PhaseOutcome::IterationLimit | PhaseOutcome::Unbounded(_) => {
                    return Outcome::IterationLimit { feasible: false }
                }
            }
            let infeasibility: f64 = self.x[self.first_artificial..].iter().sum();
            let bmax = self.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if infeasibility > self.settings.primal_tol * (1.0 + bmax) {
                let y = self.duals(&phase_one);
                let rows = (0..self.m).filter(|&i| y[i].abs() > 1e-9).collect();
                return Outcome::Infeasible(rows);
            }
            for a in self.first_artificial..ncols {
                self.upper[a] = 0.0;
                if !matches!(self.state[a], VarState::Basic(_)) {
                    self.x[a] = 0.0;
                }
            }
            self.drive_out_artificials();
        }
        let cost = std::mem::take(&mut self.cost);
        let outcome = match self.run_phase(&cost) {
            PhaseOutcome::Optimal => Outcome::Optimal,
            PhaseOutcome::Unbounded(ray) => Outcome::Unbounded(ray),
            PhaseOutcome::IterationLimit => Outcome::IterationLimit { feasible: true },
        };
        self.cost = cost;
        outcome
    }

    /// Simplex multipliers `yᵀ = c_Bᵀ B⁻¹`.
    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &bv) in self.basis.iter().enumerate() {
            let cb = cost[bv];
            if cb != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yk, &v) in y.iter_mut().zip(row) {
                    *yk += cb * v;
                }
            }
        }
        y
    }

    /// `B⁻¹ a_j`.
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        for &(r, a) in &self.cols[j] {
            for (i, al) in alpha.iter_mut().enumerate() {
                *al += self.binv[i * m + r] * a;
            }
        }
        alpha
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.upper[j] - self.lower[j] <= 0.0
    }

    /// Chooses an entering column, or `None` at optimality.
    fn price(&self, cost: &[f64], y: &[f64], bland: bool) -> Option<usize> {
        let tol = self.settings.optimality_tol;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols.len() {
            let at_upper = match self.state[j] {
                VarState::Basic(_) => continue,
                VarState::AtLower => false,
                VarState::AtUpper => true,
            };
            if self.is_fixed(j) {
                continue;
            }
            let d = cost[j] - self.cols[j].iter().map(|&(r, a)| y[r] * a).sum::<f64>();
            let gain = if at_upper { d } else { -d };
            if gain > tol {
                if bland {
                    return Some(j);
                }
                if best.is_none_or(|(_, g)| gain > g) {
                    best = Some((j, gain));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn run_phase(&mut self, cost: &[f64]) -> PhaseOutcome {
        let mut stalled = 0usize;
        let mut bland = false;
        loop {
            if self.since_refactor >= self.settings.refactor_interval {
                self.refactor();
            }
            let y = self.duals(cost);
            let Some(q) = self.price(cost, &y, bland) else {
                return PhaseOutcome::Optimal;
            };
            if self.iterations >= self.max_iterations {
                return PhaseOutcome::IterationLimit;
            }
            self.iterations += 1;

            let alpha = self.ftran(q);
            let dir = if self.state[q] == VarState::AtUpper {
                -1.0
            } else {
                1.0
            };

            // ratio test: (step, leaving row or None for a bound flip, tie key)
            let mut step = self.upper[q] - self.lower[q];
            let mut leaving: Option<usize> = None;
            let mut key = q;
            for (i, &al) in alpha.iter().enumerate() {
                let a = dir * al;
                let bv = self.basis[i];
                let limit = if a > self.settings.pivot_tol {
                    (self.x[bv] - self.lower[bv]) / a
                } else if a < -self.settings.pivot_tol && self.upper[bv].is_finite() {
                    (self.upper[bv] - self.x[bv]) / -a
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                if limit < step - TIE_EPS || (limit <= step + TIE_EPS && bv < key) {
                    step = limit;
                    leaving = Some(i);
                    key = bv;
                }
            }
            if !step.is_finite() {
                let moving = alpha
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| dir * a < -self.settings.pivot_tol)
                    .map(|(i, _)| self.basis[i])
                    .collect::<Vec<_>>();
                let mut ray = vec![q];
                ray.extend(moving);
                return PhaseOutcome::Unbounded(ray);
            }

            self.x[q] += dir * step;
            for (i, &al) in alpha.iter().enumerate() {
                if al != 0.0 {
                    self.x[self.basis[i]] -= dir * step * al;
                }
            }
            match leaving {
                None => {
                    let (state, value) = if dir > 0.0 {
                        (VarState::AtUpper, self.upper[q])
                    } else {
                        (VarState::AtLower, self.lower[q])
                    };
                    self.state[q] = state;
                    self.x[q] = value;
                }
                Some(r) => {
                    let p = self.basis[r];
                    if dir * alpha[r] > 0.0 {
                        self.state[p] = VarState::AtLower;
                        self.x[p] = self.lower[p];
                    } else {
                        self.state[p] = VarState::AtUpper;
                        self.x[p] = self.upper[p];
                    }
                    self.pivot(r, q, &alpha);
                }
            }

            if step <= DEGENERATE_STEP {
                stalled += 1;
                if stalled > self.settings.stall_threshold {
                    bland = true;
                }
            } else {
                stalled = 0;
                bland = false;
            }
        }
    }

    /// Replaces the basic variable of row `r` by column `q`.
    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        for v in &mut self.binv[r * m..(r + 1) * m] {
            *v /= piv;
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, after) = rest.split_at_mut(m);
        for (i, chunk) in before
            .chunks_mut(m)
            .enumerate()
            .chain(after.chunks_mut(m).enumerate().map(|(k, c)| (r + 1 + k, c)))
        {
            let f = alpha[i];
            if f != 0.0 {
                for (v, &pv) in chunk.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[r] = q;
        self.state[q] = VarState::Basic(r);
        self.since_refactor += 1;
    }

    /// Pivots basic artificials (now fixed at zero) out of the basis where a
    /// non-artificial column can replace them.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.first_artificial {
                continue;
            }
            let m = self.m;
            let candidate = (0..self.first_artificial).find(|&j| {
                !matches!(self.state[j], VarState::Basic(_))
                    && self.cols[j]
                        .iter()
                        .map(|&(k, a)| self.binv[r * m + k] * a)
                        .sum::<f64>()
                        .abs()
                        > 1e-7
            });
            if let Some(q) = candidate {
                let alpha = self.ftran(q);
                let a = self.basis[r];
                self.state[a] = VarState::AtLower;
                self.x[a] = 0.0;
                self.pivot(r, q, &alpha);
            }
        }
        self.refactor();
    }

    /// Rebuilds the basis inverse by Gauss-Jordan elimination and recomputes
    /// the basic values from the nonbasic ones.
    fn refactor(&mut self) {
        let m = self.m;
        self.since_refactor = 0;
        if m == 0 {
            return;
        }
        let mut a = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for &(i, v) in &self.cols[j] {
                a[i * m + k] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&i, &k| {
                    a[i * m + c]
                        .abs()
                        .total_cmp(&a[k * m + c].abs())
                        .then(k.cmp(&i))
                })
                .unwrap();
            if a[p * m + c] == 0.0 {
                // singular basis; keep the product-form inverse
                return;
            }
            if p != c {
                for k in 0..m {
                    a.swap(p * m + k, c * m + k);
                    inv.swap(p * m + k, c * m + k);
                }
            }
            let d = a[c * m + c];
            for k in 0..m {
                a[c * m + k] /= d;
                inv[c * m + k] /= d;
            }
            for i in 0..m {
                if i != c {
                    let f = a[i * m + c];
                    if f != 0.0 {
                        for k in 0..m {
                            a[i * m + k] -= f * a[c * m + k];
                            inv[i * m + k] -= f * inv[c * m + k];
                        }
                    }
                }
            }
        }
        // row k of B⁻¹ corresponds to basis position k
        self.binv = inv;

        let mut rhs = self.b.clone();
        for (j, col) in self.cols.iter().enumerate() {
            if !matches!(self.state[j], VarState::Basic(_)) && self.x[j] != 0.0 {
                for &(i, v) in col {
                    rhs[i] -= v * self.x[j];
                }
            }
        }
        for k in 0..m {
            let row = &self.binv[k * m..(k + 1) * m];
            self.x[self.basis[k]] = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        }
    }

    fn finish(&self, lp: &LinearProgram, p: &ScaledProblem, outcome: Outcome) -> LpSolution {
        let x: Vec<f64> = (0..p.n).map(|j| self.x[j] * p.col_scale[j]).collect();
        let report = check_solution(lp, &x);
        let infeasibility = report.max_violation();
        let feasible_point = infeasibility <= feasibility_tolerance(lp);
        let (status, infeasible_rows, unbounded_ray, feasible) = match outcome {
            Outcome::Optimal => (Status::Optimal, Vec::new(), Vec::new(), true),
            Outcome::Infeasible(rows) => (Status::Infeasible, rows, Vec::new(), false),
            Outcome::Unbounded(ray) => (
                Status::Unbounded,
                Vec::new(),
                ray.into_iter().filter(|&j| j < p.n).collect(),
                feasible_point,
            ),
            Outcome::IterationLimit { feasible } => (
                Status::IterationLimit,
                Vec::new(),
                Vec::new(),
                feasible && feasible_point,
            ),
        };
        let objective_value = match status {
            Status::Optimal | Status::IterationLimit => report.objective,
            Status::Unbounded => f64::NEG_INFINITY,
            Status::Infeasible => f64::NAN,
        };
        LpSolution {
            status,
            x,
            objective_value,
            iterations: self.iterations,
            max_primal_infeasibility: infeasibility,
            infeasible_rows,
            unbounded_ray,
            feasible,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{Bounds, Row};

    fn settings() -> SolverSettings {
        SolverSettings::default()
    }

    #[test]
    fn single_bounded_variable() {
        let mut lp = LinearProgram::new(1).with_objective(vec![(0, -1.0)]);
        lp.set_bounds(0, 0.0, 5.0);
        let sol = solve(&lp, &settings()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.x, vec![5.0]);
        assert_eq!(sol.objective_value, -5.0);
    }

    #[test]
    fn unbounded_ray() {
        let lp = LinearProgram::new(1).with_objective(vec![(0, -1.0)]);
        let sol = solve(&lp, &settings()).unwrap();
        assert_eq!(sol.status, Status::Unbounded);
        assert_eq!(sol.unbounded_ray, vec![0]);
    }

    #[test]
    fn empty_feasible_set() {
        let mut lp = LinearProgram::new(1).with_objective(vec![(0, 1.0)]);
        lp.add_row(Row::new(vec![(0, 1.0)], Sense::Le, -1.0));
        let sol = solve(&lp, &settings()).unwrap();
        assert_eq!(sol.status, Status::Infeasible);
        assert_eq!(sol.infeasible_rows, vec![0]);
    }

    #[test]
    fn small_production_problem() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let mut lp = LinearProgram::new(2).with_objective(vec![(0, -3.0), (1, -5.0)]);
        lp.add_row(Row::new(vec![(0, 1.0)], Sense::Le, 4.0));
        lp.add_row(Row::new(vec![(1, 2.0)], Sense::Le, 12.0));
        lp.add_row(Row::new(vec![(0, 3.0), (1, 2.0)], Sense::Le, 18.0));
        let sol = solve(&lp, &settings()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective_value + 36.0).abs() < 1e-9);
        assert!((sol.x[0] - 2.0).abs() < 1e-9 && (sol.x[1] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ge_rows_need_phase_one() {
        // min x + y s.t. x + y = 3, x - y ≥ 1, x ≤ 10
        let mut lp = LinearProgram::new(2).with_objective(vec![(0, 1.0), (1, 2.0)]);
        lp.add_row(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 3.0));
        lp.add_row(Row::new(vec![(0, 1.0), (1, -1.0)], Sense::Ge, 1.0));
        lp.bounds[0] = Bounds::new(0.0, 10.0);
        let sol = solve(&lp, &settings()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective_value - 3.0).abs() < 1e-9, "{sol:?}");
    }

    #[test]
    fn nonzero_lower_bounds() {
        let mut lp = LinearProgram::new(2).with_objective(vec![(0, 1.0), (1, 1.0)]);
        lp.set_bounds(0, 2.0, 4.0);
        lp.set_bounds(1, 1.5, f64::INFINITY);
        lp.add_row(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 5.0));
        let sol = solve(&lp, &settings()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective_value - 5.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2).with_objective(vec![(0, -1.0)]);
        lp.add_row(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 2.0));
        lp.add_row(Row::new(vec![(0, 2.0), (1, 2.0)], Sense::Eq, 4.0));
        let sol = solve(&lp, &settings()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert!((sol.objective_value + 2.0).abs() < 1e-9);
    }

    #[test]
    fn iteration_limit_is_distinct() {
        let mut lp = LinearProgram::new(2).with_objective(vec![(0, -1.0), (1, -1.0)]);
        lp.add_row(Row::new(vec![(0, 1.0), (1, 2.0)], Sense::Le, 4.0));
        lp.add_row(Row::new(vec![(0, 3.0), (1, 1.0)], Sense::Le, 6.0));
        let s = SolverSettings {
            max_iterations: Some(1),
            ..settings()
        };
        let sol = solve(&lp, &s).unwrap();
        assert_eq!(sol.status, Status::IterationLimit);
        assert!(sol.feasible);
    }

    #[test]
    fn no_rows_at_all() {
        let mut lp = LinearProgram::new(3).with_objective(vec![(0, 1.0), (1, -2.0)]);
        lp.set_bounds(1, 0.0, 3.0);
        let sol = solve(&lp, &settings()).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.x, vec![0.0, 3.0, 0.0]);
    }

    #[test]
    fn deterministic() {
        let mut lp = LinearProgram::new(3).with_objective(vec![(0, -1.0), (1, -1.0), (2, -1.0)]);
        lp.add_row(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0));
        lp.add_row(Row::new(vec![(1, 1.0), (2, 1.0)], Sense::Le, 1.0));
        lp.add_row(Row::new(vec![(0, 1.0), (2, 1.0)], Sense::Le, 1.0));
        let a = solve(&lp, &settings()).unwrap();
        let b = solve(&lp, &settings()).unwrap();
        assert_eq!(
            a.x.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.x.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
        assert!((a.objective_value + 1.5).abs() < 1e-9);
    }
}

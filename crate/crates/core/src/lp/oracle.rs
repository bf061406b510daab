//! Exhaustive optimality oracle for tiny programs.
//!
//! Every vertex of the feasible polyhedron is the unique solution of some `n`
//! linearly independent active constraints, so enumerating all `n`-subsets of
//! rows and bounds finds every basic solution. Because lower bounds are
//! finite the polyhedron is pointed: it is empty iff no basic solution is
//! feasible, and the objective is unbounded iff some extreme ray of the
//! recession cone (spanned by `n − 1` active homogeneous constraints) has
//! negative cost. Nothing here shares code with the simplex solver.
//!
//! Cost grows as `C(rows + bounds, n)`; intended for a handful of variables.

use thiserror::Error;

use super::{check_solution, LinearProgram, LpError, LpSolution, Sense, Status};

pub const ORACLE_MAX_VARS: usize = 12;
pub const ORACLE_MAX_ROWS: usize = 12;

const SINGULAR_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("program too large for enumeration: {vars} variables, {rows} rows (limit {ORACLE_MAX_VARS}/{ORACLE_MAX_ROWS})")]
    TooLarge { vars: usize, rows: usize },
    #[error(transparent)]
    Invalid(#[from] LpError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Le,
    Eq,
}

/// A half-space `a·x ≤ b` or hyperplane `a·x = b`.
struct Constraint {
    a: Vec<f64>,
    b: f64,
    kind: Kind,
}

fn constraints(lp: &LinearProgram) -> Vec<Constraint> {
    let n = lp.num_vars;
    let mut out = Vec::new();
    for row in &lp.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &row.coeffs {
            a[j] += v;
        }
        match row.sense {
            Sense::Le => out.push(Constraint {
                a,
                b: row.rhs,
                kind: Kind::Le,
            }),
            Sense::Eq => out.push(Constraint {
                a,
                b: row.rhs,
                kind: Kind::Eq,
            }),
            Sense::Ge => out.push(Constraint {
                a: a.iter().map(|v| -v).collect(),
                b: -row.rhs,
                kind: Kind::Le,
            }),
        }
    }
    for (j, bd) in lp.bounds.iter().enumerate() {
        let mut a = vec![0.0; n];
        a[j] = -1.0;
        out.push(Constraint {
            a,
            b: -bd.lower,
            kind: Kind::Le,
        });
        if bd.upper.is_finite() {
            let mut a = vec![0.0; n];
            a[j] = 1.0;
            out.push(Constraint {
                a,
                b: bd.upper,
                kind: Kind::Le,
            });
        }
    }
    out
}

fn dot(a: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}

/// Solves the square system `M x = rhs` by Gaussian elimination with
/// partial pivoting; `None` if (numerically) singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    for c in 0..n {
        let p = (c..n).max_by(|&i, &k| m[i][c].abs().total_cmp(&m[k][c].abs()))?;
        if m[p][c].abs() < SINGULAR_TOL * scale {
            return None;
        }
        m.swap(p, c);
        rhs.swap(p, c);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            if f != 0.0 {
                for k in c..n {
                    m[i][k] -= f * m[c][k];
                }
                rhs[i] -= f * rhs[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| m[c][k] * x[k]).sum();
        x[c] = (rhs[c] - s) / m[c][c];
    }
    Some(x)
}

/// Direction spanning the nullspace of an `(n−1)×n` matrix of rank `n−1`.
fn null_direction(mut m: Vec<Vec<f64>>, n: usize) -> Option<Vec<f64>> {
    let rows = m.len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == rows {
            break;
        }
        let p = (r..rows).max_by(|&i, &k| m[i][c].abs().total_cmp(&m[k][c].abs()))?;
        if m[p][c].abs() < SINGULAR_TOL * scale {
            continue;
        }
        m.swap(p, r);
        let d = m[r][c];
        for k in 0..n {
            m[r][k] /= d;
        }
        for i in 0..rows {
            if i != r {
                let f = m[i][c];
                if f != 0.0 {
                    for k in 0..n {
                        m[i][k] -= f * m[r][k];
                    }
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if pivot_cols.len() != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut d = vec![0.0; n];
    d[free] = 1.0;
    for (row, &pc) in pivot_cols.iter().enumerate() {
        d[pc] = -m[row][free];
    }
    let norm = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Some(d.into_iter().map(|v| v / norm).collect())
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn feasible(cs: &[Constraint], x: &[f64]) -> bool {
    cs.iter().all(|c| {
        let ax = dot(&c.a, x);
        let tol = FEAS_TOL
            * (1.0 + c.b.abs() + c.a.iter().zip(x).map(|(a, v)| (a * v).abs()).sum::<f64>());
        match c.kind {
            Kind::Le => ax <= c.b + tol,
            Kind::Eq => (ax - c.b).abs() <= tol,
        }
    })
}

/// Finds the exact optimum of a tiny program by enumerating basic solutions.
pub fn enumerate_oracle(lp: &LinearProgram) -> Result<LpSolution, OracleError> {
    if lp.num_vars > ORACLE_MAX_VARS || lp.rows.len() > ORACLE_MAX_ROWS {
        return Err(OracleError::TooLarge {
            vars: lp.num_vars,
            rows: lp.rows.len(),
        });
    }
    lp.check()?;
    let n = lp.num_vars;
    let c = lp.objective_dense();
    let cs = constraints(lp);

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut visited = 0usize;
    for_each_subset(cs.len(), n, |subset| {
        visited += 1;
        let m = subset.iter().map(|&i| cs[i].a.clone()).collect();
        let rhs = subset.iter().map(|&i| cs[i].b).collect();
        let Some(x) = solve_square(m, rhs) else {
            return;
        };
        if !feasible(&cs, &x) {
            return;
        }
        let obj = dot(&c, &x);
        let improves = match &best {
            None => true,
            Some((b, _)) => obj < b - 1e-12 * (1.0 + b.abs()),
        };
        if improves {
            best = Some((obj, x));
        }
    });

    let Some((_, x)) = best else {
        let mut sol = LpSolution::without_point(Status::Infeasible, n);
        sol.iterations = visited;
        return Ok(sol);
    };

    // extreme rays of {d : a·d ≤ 0 (Le), a·d = 0 (Eq)}
    let cost_scale = c.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let mut ray: Option<Vec<f64>> = None;
    if n > 0 {
        let homogeneous_ok = |d: &[f64]| {
            cs.iter().all(|con| {
                let ad = dot(&con.a, d);
                let tol = FEAS_TOL * (1.0 + con.a.iter().map(|v| v.abs()).sum::<f64>());
                match con.kind {
                    Kind::Le => ad <= tol,
                    Kind::Eq => ad.abs() <= tol,
                }
            })
        };
        for_each_subset(cs.len(), n - 1, |subset| {
            if ray.is_some() {
                return;
            }
            let m = subset.iter().map(|&i| cs[i].a.clone()).collect();
            let Some(d) = null_direction(m, n) else {
                return;
            };
            for sign in [1.0, -1.0] {
                let d: Vec<f64> = d.iter().map(|v| v * sign).collect();
                if homogeneous_ok(&d) && dot(&c, &d) < -1e-9 * cost_scale {
                    ray = Some(d);
                    return;
                }
            }
        });
    }
    if let Some(d) = ray {
        let mut sol = LpSolution::without_point(Status::Unbounded, n);
        sol.unbounded_ray = (0..n).filter(|&j| d[j].abs() > 1e-12).collect();
        sol.x = x;
        sol.iterations = visited;
        sol.feasible = true;
        return Ok(sol);
    }

    let report = check_solution(lp, &x);
    Ok(LpSolution {
        status: Status::Optimal,
        objective_value: report.objective,
        max_primal_infeasibility: report.max_violation(),
        x,
        iterations: visited,
        infeasible_rows: Vec::new(),
        unbounded_ray: Vec::new(),
        feasible: true,
    })
}

//! Dense two-phase simplex with Bland's rule, for the small fixed-size
//! programs of the polytope module (at most a few dozen rows and columns).
//!
//! Solves `min c·x  s.t.  A x = b, x >= 0`.

use crate::error::{Error, Result};

pub const EPS_LP: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Entries smaller than this are treated as zero when pivoting.
    pub pivot_tol: f64,
    /// Phase-one residual above which the program is declared infeasible.
    pub feas_tol: f64,
    pub max_iter: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            pivot_tol: 1e-11,
            feas_tol: EPS_LP,
            max_iter: 5_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    Optimal { x: Vec<f64>, objective: f64 },
    /// Smallest achievable sum of constraint violations (phase-one optimum).
    Infeasible { residual: f64 },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Structural column count; artificials occupy `n..n+m`.
    n: usize,
    opts: SimplexOptions,
    iterations: usize,
}

impl Tableau {
    fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len() - 1)
    }

    fn rhs(&self, i: usize) -> f64 {
        *self.rows[i].last().expect("rhs column")
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[col] = 0.0;
            }
        }
        self.basis[r] = col;
    }

    fn reduced_cost(&self, cost: &[f64], j: usize) -> f64 {
        let mut r = cost[j];
        for (i, row) in self.rows.iter().enumerate() {
            r -= cost[self.basis[i]] * row[j];
        }
        r
    }

    fn objective(&self, cost: &[f64]) -> f64 {
        (0..self.rows.len())
            .map(|i| cost[self.basis[i]] * self.rhs(i))
            .sum()
    }

    /// Runs Bland's-rule iterations over the columns `< allowed`.
    /// Returns false if the objective is unbounded below.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<bool> {
        loop {
            if self.iterations >= self.opts.max_iter {
                return Err(Error::LpNumericalFailure(format!(
                    "no convergence within {} pivots",
                    self.opts.max_iter
                )));
            }
            let entering = (0..allowed).find(|&j| {
                !self.basis.contains(&j) && self.reduced_cost(cost, j) < -self.opts.pivot_tol
            });
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let t = self.rows[i][col];
                if t > self.opts.pivot_tol {
                    let ratio = self.rhs(i) / t;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-14
                                || (ratio <= lr + 1e-14 && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, col);
            self.iterations += 1;
        }
    }
}

pub fn solve(lp: &LinearProgram, opts: SimplexOptions) -> Result<LpStatus> {
    let m = lp.a.len();
    let n = lp.c.len();
    if lp.b.len() != m || lp.a.iter().any(|r| r.len() != n) {
        return Err(Error::LpNumericalFailure("dimension mismatch".into()));
    }
    if m == 0 {
        return if lp.c.iter().any(|&c| c < 0.0) {
            Ok(LpStatus::Unbounded)
        } else {
            Ok(LpStatus::Optimal {
                x: vec![0.0; n],
                objective: 0.0,
            })
        };
    }
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if lp.b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; n + m + 1];
        for j in 0..n {
            row[j] = sign * lp.a[i][j];
        }
        row[n + i] = 1.0;
        row[n + m] = sign * lp.b[i];
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        n,
        opts,
        iterations: 0,
    };

    // Phase one: minimize the sum of artificials.
    let mut cost1 = vec![0.0; n + m];
    for c in cost1.iter_mut().skip(n) {
        *c = 1.0;
    }
    t.optimize(&cost1, n + m)?;
    let residual = t.objective(&cost1);
    if residual > opts.feas_tol {
        return Ok(LpStatus::Infeasible { residual });
    }

    // Drive artificials out of the basis; drop rows that are redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= t.n {
            let col = (0..t.n)
                .filter(|j| !t.basis.contains(j))
                .max_by(|&p, &q| t.rows[i][p].abs().total_cmp(&t.rows[i][q].abs()))
                .filter(|&j| t.rows[i][j].abs() > opts.pivot_tol);
            match col {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let w = t.width();
    for row in t.rows.iter_mut() {
        if row[w] < 0.0 && row[w] > -opts.feas_tol {
            row[w] = 0.0;
        }
    }

    // Phase two on the structural columns only.
    let mut cost2 = vec![0.0; n + m];
    cost2[..n].copy_from_slice(&lp.c);
    if !t.optimize(&cost2, n)? {
        return Ok(LpStatus::Unbounded);
    }
    let mut x = vec![0.0; n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.rhs(i);
        }
    }
    let objective = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    Ok(LpStatus::Optimal { x, objective })
}

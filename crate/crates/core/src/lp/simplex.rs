//! Dense two-phase primal simplex with bounded variables and Bland's rule.

use crate::error::{Error, Result};

use super::{LpModel, Sense};

pub const PIVOT_TOL: f64 = 1e-10;
pub const FEAS_TOL: f64 = 1e-9;

/// Optimal point of an [`LpModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    /// One value per model variable, clamped into its bounds.
    pub values: Vec<f64>,
    pub iterations: usize,
}

struct Tableau {
    m: usize,
    cols: usize,
    a: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    basic_row: Vec<Option<usize>>,
    upper: Vec<f64>,
    at_upper: Vec<bool>,
    cost: Vec<f64>,
    d: Vec<f64>,
    iterations: usize,
    limit: usize,
}

enum Step {
    Optimal,
    Moved,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    fn reprice(&mut self) {
        self.d.clone_from(&self.cost);
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.a[i * self.cols..(i + 1) * self.cols];
                for (dj, &aij) in self.d.iter_mut().zip(row) {
                    *dj -= cb * aij;
                }
            }
        }
    }

    fn step(&mut self) -> Result<Step> {
        // Bland: lowest-index improving column.
        let entering = (0..self.cols).find(|&j| {
            self.basic_row[j].is_none()
                && self.upper[j] > 0.0
                && if self.at_upper[j] {
                    self.d[j] > FEAS_TOL
                } else {
                    self.d[j] < -FEAS_TOL
                }
        });
        let Some(j) = entering else {
            return Ok(Step::Optimal);
        };
        let s = if self.at_upper[j] { -1.0 } else { 1.0 };

        let mut theta = self.upper[j];
        let mut leave: Option<(usize, bool)> = None;
        for i in 0..self.m {
            let a = s * self.at(i, j);
            let (limit, to_upper) = if a > PIVOT_TOL {
                (self.beta[i].max(0.0) / a, false)
            } else if a < -PIVOT_TOL && self.upper[self.basis[i]].is_finite() {
                (
                    (self.upper[self.basis[i]] - self.beta[i]).max(0.0) / -a,
                    true,
                )
            } else {
                continue;
            };
            let better = match leave {
                _ if limit < theta - PIVOT_TOL => true,
                Some((r, _)) if limit <= theta + PIVOT_TOL => self.basis[i] < self.basis[r],
                _ => false,
            };
            if better {
                theta = limit.min(theta);
                leave = Some((i, to_upper));
            }
        }
        if theta.is_infinite() {
            return Err(Error::LpUnbounded);
        }

        for i in 0..self.m {
            let a = self.at(i, j);
            if a != 0.0 {
                self.beta[i] -= s * a * theta;
            }
        }
        let Some((r, to_upper)) = leave else {
            self.at_upper[j] = !self.at_upper[j];
            return Ok(Step::Moved);
        };

        let entering_value = if s > 0.0 {
            theta
        } else {
            self.upper[j] - theta
        };
        let l = self.basis[r];
        self.pivot(r, j);
        self.beta[r] = entering_value;
        self.basic_row[l] = None;
        self.at_upper[l] = to_upper;
        self.basic_row[j] = Some(r);
        self.basis[r] = j;
        self.at_upper[j] = false;
        Ok(Step::Moved)
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let p = self.at(r, j);
        for v in &mut self.a[r * cols..(r + 1) * cols] {
            *v /= p;
        }
        let (before, rest) = self.a.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for row in before
            .chunks_exact_mut(cols)
            .chain(after.chunks_exact_mut(cols))
        {
            let f = row[j];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[j] = 0.0;
            }
        }
        let f = self.d[j];
        if f != 0.0 {
            for (x, &y) in self.d.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            self.d[j] = 0.0;
        }
    }

    fn run(&mut self) -> Result<()> {
        loop {
            if self.iterations >= self.limit {
                return Err(Error::Internal(format!(
                    "simplex exceeded {} iterations",
                    self.limit
                )));
            }
            self.iterations += 1;
            if let Step::Optimal = self.step()? {
                return Ok(());
            }
        }
    }

    fn value(&self, j: usize) -> f64 {
        match self.basic_row[j] {
            Some(i) => self.beta[i],
            None if self.at_upper[j] => self.upper[j],
            None => 0.0,
        }
    }
}

/// Minimizes the model objective. Deterministic for a given model.
pub fn solve_lp(model: &LpModel) -> Result<LpSolution> {
    let nv = model.vars.len();
    let m = model.constraints.len();
    for v in &model.vars {
        if !(v.lo.is_finite() && v.hi.is_finite()) || v.hi < v.lo - FEAS_TOL {
            if v.hi < v.lo {
                return Err(Error::LpInfeasible);
            }
            return Err(Error::InvalidParameter(format!(
                "variable `{}` needs finite bounds",
                v.name
            )));
        }
    }

    // Shift to x' = x - lo and orient every row to a non-negative right side.
    struct Row {
        coef: Vec<(usize, f64)>,
        rhs: f64,
        slack: Option<f64>,
        artificial: bool,
    }
    let mut rows = Vec::with_capacity(m);
    for c in &model.constraints {
        let mut rhs = c.rhs;
        for &(k, a) in &c.terms {
            rhs -= a * model.vars[k].lo;
        }
        // slack coefficient in the original row, then the orientation sign
        let (slack, sign, artificial) = match c.sense {
            Sense::Le if rhs >= 0.0 => (Some(1.0), 1.0, false),
            Sense::Le => (Some(1.0), -1.0, true),
            Sense::Ge if rhs <= 0.0 => (Some(-1.0), -1.0, false),
            Sense::Ge => (Some(-1.0), 1.0, true),
            Sense::Eq => (None, if rhs < 0.0 { -1.0 } else { 1.0 }, true),
        };
        let slack = slack.map(|s: f64| s * sign);
        rows.push(Row {
            coef: c.terms.iter().map(|&(k, a)| (k, sign * a)).collect(),
            rhs: sign * rhs,
            slack,
            artificial,
        });
    }
    let slacks = rows.iter().filter(|r| r.slack.is_some()).count();
    let arts = rows.iter().filter(|r| r.artificial).count();
    let cols = nv + slacks + arts;

    let mut t = Tableau {
        m,
        cols,
        a: vec![0.0; m * cols],
        beta: vec![0.0; m],
        basis: vec![0; m],
        basic_row: vec![None; cols],
        upper: vec![f64::INFINITY; cols],
        at_upper: vec![false; cols],
        cost: vec![0.0; cols],
        d: vec![0.0; cols],
        iterations: 0,
        limit: 10_000 + 200 * (m + cols),
    };
    for (k, v) in model.vars.iter().enumerate() {
        t.upper[k] = (v.hi - v.lo).max(0.0);
    }
    let (mut next_slack, mut next_art) = (nv, nv + slacks);
    for (i, row) in rows.iter().enumerate() {
        for &(k, a) in &row.coef {
            t.a[i * cols + k] += a;
        }
        t.beta[i] = row.rhs;
        if let Some(s) = row.slack {
            t.a[i * cols + next_slack] = s;
            if !row.artificial {
                t.basis[i] = next_slack;
            }
            next_slack += 1;
        }
        if row.artificial {
            t.a[i * cols + next_art] = 1.0;
            t.basis[i] = next_art;
            t.cost[next_art] = 1.0;
            next_art += 1;
        }
        t.basic_row[t.basis[i]] = Some(i);
    }

    if arts > 0 {
        t.reprice();
        t.run()?;
        let infeasibility: f64 = (nv + slacks..cols).map(|j| t.value(j)).sum();
        if infeasibility > FEAS_TOL {
            return Err(Error::LpInfeasible);
        }
        for j in nv + slacks..cols {
            t.upper[j] = 0.0;
            t.cost[j] = 0.0;
            if let Some(i) = t.basic_row[j] {
                t.beta[i] = 0.0;
            }
        }
    }
    t.cost[..nv].copy_from_slice(&model.objective);
    t.reprice();
    t.run()?;

    let values: Vec<f64> = model
        .vars
        .iter()
        .enumerate()
        .map(|(k, v)| (v.lo + t.value(k)).clamp(v.lo, v.hi))
        .collect();
    let objective = values
        .iter()
        .zip(&model.objective)
        .map(|(x, c)| x * c)
        .sum();
    Ok(LpSolution {
        objective,
        values,
        iterations: t.iterations,
    })
}

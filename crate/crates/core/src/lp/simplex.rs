//! Bounded-variable primal simplex, two phases, explicit basis inverse.

use super::{LinearProgram, LpSolution, LpStatus};

/// Entering-variable rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pricing {
    /// Smallest eligible index throughout; leaving ties go to the smallest index.
    Bland,
    /// Most negative reduced cost, falling back to Bland's rule during runs of
    /// degenerate pivots.
    DantzigThenBland,
}

#[derive(Clone, Copy, Debug)]
pub struct SimplexOptions {
    pub pivot_tol: f64,
    pub feas_tol: f64,
    pub opt_tol: f64,
    /// The iteration limit is `iter_factor · (rows + cols)`.
    pub iter_factor: usize,
    pub refactor_every: usize,
    pub pricing: Pricing,
    /// Degenerate pivots in a row before Bland's rule takes over.
    pub degenerate_switch: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            pivot_tol: 1e-10,
            feas_tol: 1e-9,
            opt_tol: 1e-9,
            iter_factor: 200,
            refactor_every: 100,
            pricing: Pricing::DantzigThenBland,
            degenerate_switch: 30,
        }
    }
}

pub fn simplex_solve(lp: &LinearProgram) -> LpSolution {
    simplex_solve_with(lp, &SimplexOptions::default())
}

const NONE: usize = usize::MAX;

struct Solver {
    m: usize,
    nstruct: usize,
    col_start: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    at_upper: Vec<bool>,
    basis: Vec<usize>,
    pos: Vec<usize>,
    binv: Vec<f64>,
    b: Vec<f64>,
    opts: SimplexOptions,
    iterations: usize,
    limit: usize,
    since_refactor: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterLimit,
}

impl Solver {
    fn new(lp: &LinearProgram, opts: SimplexOptions) -> Self {
        let m = lp.rows.len();
        let nstruct = lp.num_vars();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nstruct];
        for (i, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
        }
        let mut lower: Vec<f64> = lp.lower.clone();
        let mut upper: Vec<f64> = lp.upper.iter().map(|u| u.unwrap_or(f64::INFINITY)).collect();
        let mut x = lower.clone();
        for (j, &l) in lower.iter().enumerate() {
            assert!(l.is_finite(), "variable {j} needs a finite lower bound");
        }
        let b: Vec<f64> = lp.rows.iter().map(|r| r.rhs).collect();
        let mut resid = b.clone();
        for (j, col) in cols.iter().enumerate() {
            for &(i, a) in col {
                resid[i] -= a * x[j];
            }
        }
        let mut binv = vec![0.0; m * m];
        for (i, &r) in resid.iter().enumerate() {
            let s = if r >= 0.0 { 1.0 } else { -1.0 };
            cols.push(vec![(i, s)]);
            lower.push(0.0);
            upper.push(f64::INFINITY);
            x.push(r.abs());
            binv[i * m + i] = s;
        }
        let mut col_start = vec![0];
        let mut col_row = Vec::new();
        let mut col_val = Vec::new();
        for col in &cols {
            for &(i, a) in col {
                col_row.push(i);
                col_val.push(a);
            }
            col_start.push(col_row.len());
        }
        let ntotal = nstruct + m;
        let mut pos = vec![NONE; ntotal];
        let basis: Vec<usize> = (nstruct..ntotal).collect();
        for (i, &v) in basis.iter().enumerate() {
            pos[v] = i;
        }
        let mut cost = vec![0.0; ntotal];
        for c in &mut cost[nstruct..] {
            *c = 1.0;
        }
        let limit = opts.iter_factor * (m + nstruct).max(1);
        Solver {
            m,
            nstruct,
            col_start,
            col_row,
            col_val,
            lower,
            upper,
            cost,
            x,
            at_upper: vec![false; ntotal],
            basis,
            pos,
            binv,
            b,
            opts,
            iterations: 0,
            limit,
            since_refactor: 0,
        }
    }

    fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_start[j]..self.col_start[j + 1];
        self.col_row[range.clone()]
            .iter()
            .copied()
            .zip(self.col_val[range].iter().copied())
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for i in 0..m {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yr, &v) in y.iter_mut().zip(row) {
                    *yr += cb * v;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        self.cost[j] - self.column(j).map(|(r, a)| y[r] * a).sum::<f64>()
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut alpha = vec![0.0; m];
        for (r, a) in self.column(j) {
            for (i, al) in alpha.iter_mut().enumerate() {
                *al += self.binv[i * m + r] * a;
            }
        }
        alpha
    }

    fn pivot_binv(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        for c in 0..m {
            self.binv[r * m + c] /= piv;
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, after) = rest.split_at_mut(m);
        for (i, row) in before.chunks_mut(m).chain(after.chunks_mut(m)).enumerate() {
            let idx = if i < r { i } else { i + 1 };
            let f = alpha[idx];
            if f != 0.0 {
                for (v, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * p;
                }
            }
        }
    }

    /// Recomputes the basis inverse and basic values from scratch.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        self.since_refactor = 0;
        if m == 0 {
            return true;
        }
        let mut a = vec![0.0; m * m];
        for (i, &v) in self.basis.iter().enumerate() {
            for (r, val) in self.column(v) {
                a[r * m + i] = val;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for c in 0..m {
            let p = (c..m)
                .max_by(|&i, &j| a[i * m + c].abs().total_cmp(&a[j * m + c].abs()))
                .expect("non-empty");
            if a[p * m + c].abs() < 1e-14 {
                return false;
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
        self.binv = inv;
        let mut rhs = self.b.clone();
        for j in 0..self.x.len() {
            if self.pos[j] == NONE && self.x[j] != 0.0 {
                let xj = self.x[j];
                let range = self.col_start[j]..self.col_start[j + 1];
                for k in range {
                    rhs[self.col_row[k]] -= self.col_val[k] * xj;
                }
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.x[self.basis[i]] = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        }
        true
    }

    fn choose_entering(&self, y: &[f64], bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.x.len() {
            if self.pos[j] != NONE || self.lower[j] >= self.upper[j] {
                continue;
            }
            let d = self.reduced_cost(j, y);
            let eligible = (!self.at_upper[j] && d < -self.opts.opt_tol) || (self.at_upper[j] && d > self.opts.opt_tol);
            if !eligible {
                continue;
            }
            if bland {
                return Some((j, d));
            }
            if best.is_none_or(|(_, bd)| d.abs() > bd.abs()) {
                best = Some((j, d));
            }
        }
        best
    }

    fn run(&mut self) -> Outcome {
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= self.limit {
                return Outcome::IterLimit;
            }
            if self.since_refactor >= self.opts.refactor_every {
                self.refactor();
            }
            let bland = match self.opts.pricing {
                Pricing::Bland => true,
                Pricing::DantzigThenBland => degenerate_run >= self.opts.degenerate_switch,
            };
            let y = self.duals();
            let Some((q, _)) = self.choose_entering(&y, bland) else {
                return Outcome::Optimal;
            };
            let alpha = self.ftran(q);
            let dir = if self.at_upper[q] { -1.0 } else { 1.0 };

            let flip = self.upper[q] - self.lower[q];
            let mut t_min = f64::INFINITY;
            let mut limits = Vec::new();
            for (i, &al) in alpha.iter().enumerate() {
                let delta = -dir * al;
                if delta.abs() <= self.opts.pivot_tol {
                    continue;
                }
                let v = self.basis[i];
                let (limit, to_upper) = if delta < 0.0 {
                    ((self.x[v] - self.lower[v]).max(0.0) / -delta, false)
                } else if self.upper[v].is_finite() {
                    ((self.upper[v] - self.x[v]).max(0.0) / delta, true)
                } else {
                    continue;
                };
                t_min = t_min.min(limit);
                limits.push((i, limit, to_upper));
            }
            self.iterations += 1;
            self.since_refactor += 1;

            if flip <= t_min {
                if !flip.is_finite() {
                    return Outcome::Unbounded;
                }
                for (i, &al) in alpha.iter().enumerate() {
                    let v = self.basis[i];
                    self.x[v] -= dir * al * flip;
                }
                self.at_upper[q] = !self.at_upper[q];
                self.x[q] = if self.at_upper[q] { self.upper[q] } else { self.lower[q] };
                degenerate_run = 0;
                continue;
            }

            let tie = 1e-12 * (1.0 + t_min);
            let (r, t, to_upper) = limits
                .iter()
                .filter(|&&(_, l, _)| l <= t_min + tie)
                .copied()
                .min_by(|a, b| {
                    if bland {
                        self.basis[a.0].cmp(&self.basis[b.0])
                    } else {
                        alpha[b.0]
                            .abs()
                            .total_cmp(&alpha[a.0].abs())
                            .then(self.basis[a.0].cmp(&self.basis[b.0]))
                    }
                })
                .expect("finite ratio has a row");
            if t <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            for (i, &al) in alpha.iter().enumerate() {
                let v = self.basis[i];
                self.x[v] -= dir * al * t;
            }
            self.x[q] += dir * t;
            let leaving = self.basis[r];
            self.x[leaving] = if to_upper {
                self.upper[leaving]
            } else {
                self.lower[leaving]
            };
            self.at_upper[leaving] = to_upper;
            self.pos[leaving] = NONE;
            self.basis[r] = q;
            self.pos[q] = r;
            self.at_upper[q] = false;
            self.pivot_binv(r, &alpha);
        }
    }

    /// Pivots basic artificials out where possible and fixes all artificials at zero.
    fn drop_artificials(&mut self) {
        let m = self.m;
        for r in 0..m {
            if self.basis[r] < self.nstruct {
                continue;
            }
            let row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.nstruct {
                if self.pos[j] != NONE {
                    continue;
                }
                let v: f64 = self.column(j).map(|(i, a)| row[i] * a).sum();
                if v.abs() > 1e-7 && best.is_none_or(|(_, bv)| v.abs() > bv.abs()) {
                    best = Some((j, v));
                }
            }
            if let Some((j, _)) = best {
                let alpha = self.ftran(j);
                let leaving = self.basis[r];
                self.x[leaving] = 0.0;
                self.pos[leaving] = NONE;
                self.basis[r] = j;
                self.pos[j] = r;
                self.at_upper[j] = false;
                self.pivot_binv(r, &alpha);
            }
        }
        for j in self.nstruct..self.x.len() {
            self.upper[j] = 0.0;
            self.at_upper[j] = false;
            if self.pos[j] == NONE {
                self.x[j] = 0.0;
            }
        }
    }

    fn artificial_sum(&self) -> f64 {
        self.x[self.nstruct..].iter().map(|v| v.abs()).sum()
    }
}

pub fn simplex_solve_with(lp: &LinearProgram, opts: &SimplexOptions) -> LpSolution {
    let mut s = Solver::new(lp, *opts);
    let finish = |s: &Solver, status: LpStatus| {
        let values: Vec<f64> = (0..s.nstruct)
            .map(|j| {
                let v = s.x[j];
                let v = if (v - s.lower[j]).abs() < 1e-12 { s.lower[j] } else { v };
                if s.upper[j].is_finite() && (v - s.upper[j]).abs() < 1e-12 {
                    s.upper[j]
                } else {
                    v
                }
            })
            .collect();
        LpSolution {
            status,
            objective: lp.objective(&values),
            values,
            iterations: s.iterations,
        }
    };

    match s.run() {
        Outcome::Optimal => {}
        Outcome::IterLimit => return finish(&s, LpStatus::IterLimit),
        Outcome::Unbounded => unreachable!("phase one is bounded below"),
    }
    s.refactor();
    let scale = 1.0 + s.b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if s.artificial_sum() > 100.0 * opts.feas_tol * scale {
        return finish(&s, LpStatus::Infeasible);
    }
    s.drop_artificials();
    for j in 0..s.x.len() {
        s.cost[j] = if j < s.nstruct { lp.cost[j] } else { 0.0 };
    }
    s.refactor();
    let status = match s.run() {
        Outcome::Optimal => LpStatus::Optimal,
        Outcome::Unbounded => LpStatus::Unbounded,
        Outcome::IterLimit => LpStatus::IterLimit,
    };
    if status == LpStatus::Optimal {
        s.refactor();
    }
    log::debug!(
        "simplex: {} rows, {} cols, {} iterations, {:?}",
        s.m,
        s.nstruct,
        s.iterations,
        status
    );
    finish(&s, status)
}

//! Row-sparse ADMM for `min cᵀx  s.t.  Ax = b, x ∈ K`.
//!
//! Each row `a_i` gets a local copy `z_i` of the entries of `x` it touches, and
//! `u` is a copy of `x` constrained to `K`. The problem becomes
//!
//! ```text
//! min cᵀx  s.t.  (H_i a_i)ᵀ z_i = b_i,  z_i = H_i x,  u = x,  u ∈ K
//! ```
//!
//! where `H_i` selects the support of row `i`. With multipliers `μ_i` for
//! `z_i = H_i x` and `ξ` for `u = x`, one iteration is
//!
//! 1. `x ← D⁻¹ [Σ H_iᵀ(z_i + μ_i/ρ) + u + ξ/ρ − c/ρ]`, `D = I + Σ H_iᵀH_i` diagonal;
//! 2. `z_i ← H_i x − μ_i/ρ − (H_i a_i) ω_i`, projecting onto one hyperplane;
//! 3. `u ← Π_K(x − ξ/ρ)`;
//! 4. `μ_i += ρ(z_i − H_i x)`, `ξ += ρ(u − x)`.
//!
//! No step solves a linear system larger than a scalar.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cones::project_product_in_place;
use crate::conic::ConicProgram;
use crate::error::{Error, Result};

/// Residual-balancing rule for the penalty `ρ`.
///
/// The primal side of the balance is `max(primal, constraint)`. After a
/// change, `ρ` is held for `interval` iterations so the dual residual, which
/// scales with `ρ`, can settle before it is compared again.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoAdaptation {
    pub mu: f64,
    pub tau_incr: f64,
    pub tau_decr: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub interval: usize,
}

impl Default for RhoAdaptation {
    fn default() -> Self {
        RhoAdaptation {
            mu: 10.0,
            tau_incr: 2.0,
            tau_decr: 2.0,
            rho_min: 1e-6,
            rho_max: 1e6,
            interval: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub rho_init: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// `None` keeps `ρ` fixed.
    pub adapt: Option<RhoAdaptation>,
    /// Record an [`IterationLog`] every this many iterations; 0 disables.
    pub log_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rho_init: 1.0,
            tol: 1e-4,
            max_iter: 2000,
            adapt: Some(RhoAdaptation::default()),
            log_every: 0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDimension(m.to_string()));
        if !(self.rho_init > 0.0) {
            return bad("rho_init must be positive");
        }
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1");
        }
        if let Some(a) = &self.adapt {
            if !(a.rho_min <= self.rho_init && self.rho_init <= a.rho_max) {
                return bad("rho_init must lie in [rho_min, rho_max]");
            }
            if !(a.tau_incr > 1.0 && a.tau_decr > 1.0 && a.mu > 1.0) {
                return bad("adaptation factors must exceed 1");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Solved,
    MaxIters,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub constraint: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.primal.max(self.dual).max(self.constraint)
    }
}

/// One line of the iteration log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iter: usize,
    pub rho: f64,
    pub primal: f64,
    pub dual: f64,
    pub constraint: f64,
    pub objective: f64,
}

/// Writes the log as CSV with header `iter,rho,primal,dual,constraint,objective`.
pub fn write_log_csv<W: Write>(log: &[IterationLog], mut w: W) -> std::io::Result<()> {
    writeln!(w, "iter,rho,primal,dual,constraint,objective")?;
    for l in log {
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e},{:e}",
            l.iter, l.rho, l.primal, l.dual, l.constraint, l.objective
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub x: Vec<f64>,
    /// Final cone iterate `u`, which lies in `K` exactly.
    pub u: Vec<f64>,
    pub objective: f64,
    pub status: Status,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub constraint_residual: f64,
    pub rho: f64,
    pub history: Vec<IterationLog>,
}

impl Solution {
    pub fn residuals(&self) -> Residuals {
        Residuals {
            primal: self.primal_residual,
            dual: self.dual_residual,
            constraint: self.constraint_residual,
        }
    }
}

/// All ADMM iterates. `z` and `mu` are stored flat; row `i` occupies
/// `row_offsets[i]..row_offsets[i + 1]`.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub z: Vec<f64>,
    pub mu: Vec<f64>,
    pub xi: Vec<f64>,
    pub rho: f64,
    pub d_diag: Vec<f64>,
    pub iter: usize,
    /// Iteration of the last `ρ` change.
    pub rho_changed_at: usize,
    row_offsets: Vec<usize>,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

impl SolverState {
    /// Zero iterates, `ρ = rho_init`, and `D = I + Σ H_iᵀH_i`.
    pub fn init(prog: &ConicProgram, opts: &SolverOptions) -> Result<Self> {
        prog.validate()?;
        opts.validate()?;
        let n = prog.num_vars;
        let mut d_diag = vec![1.0; n];
        let mut row_offsets = Vec::with_capacity(prog.rows.len() + 1);
        row_offsets.push(0);
        for row in &prog.rows {
            for &j in &row.indices {
                d_diag[j] += 1.0;
            }
            row_offsets.push(row_offsets.last().unwrap() + row.len());
        }
        let total = *row_offsets.last().unwrap();
        Ok(SolverState {
            x: vec![0.0; n],
            u: vec![0.0; n],
            z: vec![0.0; total],
            mu: vec![0.0; total],
            xi: vec![0.0; n],
            rho: opts.rho_init,
            d_diag,
            iter: 0,
            rho_changed_at: 0,
            row_offsets,
        })
    }

    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_offsets[i]..self.row_offsets[i + 1]
    }

    pub fn z_row(&self, i: usize) -> &[f64] {
        &self.z[self.row_range(i)]
    }

    pub fn mu_row(&self, i: usize) -> &[f64] {
        &self.mu[self.row_range(i)]
    }

    /// Exact minimizer of the augmented Lagrangian over `x`.
    pub fn x_update(&self, prog: &ConicProgram) -> Vec<f64> {
        let inv_rho = 1.0 / self.rho;
        let mut acc: Vec<f64> = self
            .u
            .iter()
            .zip(&self.xi)
            .zip(&prog.c)
            .map(|((u, xi), c)| u + (xi - c) * inv_rho)
            .collect();
        for (i, row) in prog.rows.iter().enumerate() {
            let r = self.row_range(i);
            for ((&j, z), mu) in row.indices.iter().zip(&self.z[r.clone()]).zip(&self.mu[r]) {
                acc[j] += z + mu * inv_rho;
            }
        }
        acc.iter_mut()
            .zip(&self.d_diag)
            .for_each(|(a, d)| *a /= d);
        acc
    }

    /// Projection of `H_i x − μ_i/ρ` onto `{z : (H_i a_i)ᵀz = b_i}`, using the
    /// current `x`.
    pub fn z_update_row(&self, i: usize, prog: &ConicProgram) -> Vec<f64> {
        let mut out = vec![0.0; self.row_range(i).len()];
        self.z_row_into(i, prog, &mut out);
        out
    }

    fn z_row_into(&self, i: usize, prog: &ConicProgram, out: &mut [f64]) {
        let row = &prog.rows[i];
        let mu = self.mu_row(i);
        let inv_rho = 1.0 / self.rho;
        let mut dot = 0.0;
        for (k, &j) in row.indices.iter().enumerate() {
            out[k] = self.x[j] - mu[k] * inv_rho;
            dot += row.values[k] * out[k];
        }
        let omega = (dot - prog.b[i]) / row.norm_sq();
        for (o, a) in out.iter_mut().zip(&row.values) {
            *o -= a * omega;
        }
    }

    /// `Π_K(x − ξ/ρ)` using the current `x`.
    pub fn u_update(&self, prog: &ConicProgram) -> Vec<f64> {
        let inv_rho = 1.0 / self.rho;
        let mut u: Vec<f64> = self
            .x
            .iter()
            .zip(&self.xi)
            .map(|(x, xi)| x - xi * inv_rho)
            .collect();
        project_product_in_place(&mut u, &prog.cones).expect("cones cover the variable vector");
        u
    }

    /// Gradient ascent on the multipliers.
    pub fn dual_update(&mut self, prog: &ConicProgram) {
        let rho = self.rho;
        for (i, row) in prog.rows.iter().enumerate() {
            let r = self.row_range(i);
            for ((mu, z), &j) in self.mu[r.clone()]
                .iter_mut()
                .zip(&self.z[r])
                .zip(&row.indices)
            {
                *mu += rho * (z - self.x[j]);
            }
        }
        for ((xi, u), x) in self.xi.iter_mut().zip(&self.u).zip(&self.x) {
            *xi += rho * (u - x);
        }
    }

    /// Relative ∞-norm residuals; `x_prev` is the previous `x` iterate.
    pub fn residuals(&self, prog: &ConicProgram, x_prev: &[f64]) -> Residuals {
        let scale_x = 1.0 + inf_norm(&self.x);
        let mut consensus = self
            .u
            .iter()
            .zip(&self.x)
            .fold(0.0f64, |m, (u, x)| m.max((u - x).abs()));
        for (i, row) in prog.rows.iter().enumerate() {
            for (z, &j) in self.z_row(i).iter().zip(&row.indices) {
                consensus = consensus.max((z - self.x[j]).abs());
            }
        }
        let step = self
            .x
            .iter()
            .zip(x_prev)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let violation = inf_norm(&prog.constraint_violation(&self.x));
        Residuals {
            primal: consensus / scale_x,
            dual: self.rho * step / scale_x,
            constraint: violation / (1.0 + inf_norm(&prog.b)),
        }
    }

    /// One full iteration; returns the residuals at the new iterate.
    pub fn step(&mut self, prog: &ConicProgram) -> Residuals {
        let x_new = self.x_update(prog);
        let x_prev = std::mem::replace(&mut self.x, x_new);
        let mut z = std::mem::take(&mut self.z);
        for i in 0..prog.rows.len() {
            let r = self.row_range(i);
            self.z_row_into(i, prog, &mut z[r]);
        }
        self.z = z;
        self.u = self.u_update(prog);
        self.dual_update(prog);
        self.iter += 1;
        self.residuals(prog, &x_prev)
    }

    /// Residual balancing. Multipliers are stored unscaled, so they are left
    /// untouched when `ρ` changes.
    pub fn adapt_rho(&mut self, res: &Residuals, rule: &RhoAdaptation) {
        if self.iter < self.rho_changed_at + rule.interval {
            return;
        }
        let primal = res.primal.max(res.constraint);
        let old = self.rho;
        if primal > rule.mu * res.dual {
            self.rho = (self.rho * rule.tau_incr).min(rule.rho_max);
        } else if res.dual > rule.mu * primal {
            self.rho = (self.rho / rule.tau_decr).max(rule.rho_min);
        }
        if self.rho != old {
            self.rho_changed_at = self.iter;
        }
    }
}

/// A solver bound to one program; owns its iterates.
#[derive(Debug, Clone)]
pub struct Solver<'a> {
    prog: &'a ConicProgram,
    opts: SolverOptions,
    state: SolverState,
}

impl<'a> Solver<'a> {
    pub fn new(prog: &'a ConicProgram, opts: SolverOptions) -> Result<Self> {
        let state = SolverState::init(prog, &opts)?;
        Ok(Solver { prog, opts, state })
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    /// Mutable access for seeding iterates before [`Solver::run`].
    pub fn state_mut(&mut self) -> &mut SolverState {
        &mut self.state
    }

    /// Iterates until every residual is at most `tol` or `max_iter` is hit.
    pub fn run(mut self) -> Solution {
        let mut history = Vec::new();
        let mut res = Residuals::default();
        let mut status = Status::MaxIters;
        for _ in 0..self.opts.max_iter {
            res = self.state.step(self.prog);
            let it = self.state.iter;
            if self.opts.log_every > 0 && (it % self.opts.log_every == 0 || it == 1) {
                history.push(self.log_line(&res));
            }
            if res.max() <= self.opts.tol {
                status = Status::Solved;
                break;
            }
            if let Some(rule) = &self.opts.adapt {
                self.state.adapt_rho(&res, rule);
            }
        }
        if self.opts.log_every > 0 && history.last().map(|l| l.iter) != Some(self.state.iter) {
            history.push(self.log_line(&res));
        }
        let state = self.state;
        Solution {
            objective: self.prog.objective(&state.x),
            status,
            iterations: state.iter,
            primal_residual: res.primal,
            dual_residual: res.dual,
            constraint_residual: res.constraint,
            rho: state.rho,
            history,
            x: state.x,
            u: state.u,
        }
    }

    fn log_line(&self, res: &Residuals) -> IterationLog {
        IterationLog {
            iter: self.state.iter,
            rho: self.state.rho,
            primal: res.primal,
            dual: res.dual,
            constraint: res.constraint,
            objective: self.prog.objective(&self.state.x),
        }
    }
}

/// Solves `prog` from zero iterates. Non-convergence is reported as
/// [`Status::MaxIters`], never as an error.
pub fn solve(prog: &ConicProgram, opts: &SolverOptions) -> Result<Solution> {
    Ok(Solver::new(prog, *opts)?.run())
}

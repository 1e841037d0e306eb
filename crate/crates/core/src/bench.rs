//! Random problem generators, end-to-end runs, and result reports.

use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::admm::{solve, Residuals, Solution, SolverOptions, Status};
use crate::conic::ConicProgram;
use crate::error::{Error, Result};
use crate::oracle::{check_lyapunov_sampled, verify_gram, Certificate, LyapunovSample};
use crate::poly::{monomial_basis, MultiIndex, Polynomial};
use crate::sos::{
    compile_lyapunov, compile_polymin, compile_sos_program, extract_certificate,
    quadratic_template, RationalField, SosProgram,
};

/// Post-check thresholds applied to every solved run.
pub const COEFF_RESIDUAL_FACTOR: f64 = 1e-3;
pub const GRAM_MIN_EIG_TOL: f64 = 1e-5;

/// `p = p₀ + Σ x_i^{2d}` with `p₀` having i.i.d. uniform `[−1, 1]`
/// coefficients on every monomial of degree below `2d`.
pub fn gen_random_polymin(n: usize, d: usize, seed: u64) -> Result<Polynomial> {
    if d < 1 {
        return Err(Error::InvalidDimension("d must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = monomial_basis(n, 2 * d - 1)?;
    let mut p = Polynomial::zero(n);
    for alpha in basis.entries() {
        p.add_term(alpha.clone(), rng.random_range(-1.0..=1.0));
    }
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = (2 * d) as u32;
        p.add_term(MultiIndex::new(e), 1.0);
    }
    Ok(p)
}

/// Cubic vector field `f(x) = Ax + g(x)` with a locally asymptotically stable
/// origin.
///
/// `A = B − (λ_max(B + Bᵀ)/2 + 1/2)·I` for `B` uniform on `[−1, 1]`, so the
/// symmetric part of `A` is at most `−I/2`. `g` has `3n` random quadratic or
/// cubic terms with coefficients uniform on `[−0.1, 0.1]`.
pub fn gen_random_stable_system(n: usize, seed: u64) -> Result<Vec<Polynomial>> {
    if n < 1 {
        return Err(Error::InvalidDimension("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..=1.0));
    let sym = &b + b.transpose();
    let lambda_max = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let a = b - DMatrix::identity(n, n) * (0.5 * lambda_max + 0.5);

    let mut field: Vec<Polynomial> = (0..n)
        .map(|i| {
            let mut fi = Polynomial::zero(n);
            for j in 0..n {
                fi.add_term(MultiIndex::unit(n, j), a[(i, j)]);
            }
            fi
        })
        .collect();
    for k in 0..3 * n {
        let comp = rng.random_range(0..n);
        let deg = if k == 0 { 3 } else { rng.random_range(2..=3) };
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.random_range(0..n)] += 1;
        }
        let coeff = loop {
            let c: f64 = rng.random_range(-0.1..=0.1);
            if c != 0.0 {
                break c;
            }
        };
        field[comp].add_term(MultiIndex::new(e), coeff);
    }
    Ok(field)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dims {
    /// Side length of each PSD block.
    #[serde(rename = "N")]
    pub psd_sides: Vec<usize>,
    pub m: usize,
    pub nvars: usize,
}

impl Dims {
    pub fn of(prog: &ConicProgram) -> Self {
        Dims {
            psd_sides: prog.psd_sides(),
            m: prog.num_rows(),
            nvars: prog.num_vars,
        }
    }
}

/// Oracle post-checks of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    /// Largest coefficient mismatch per constraint, from the conic rows.
    pub max_coeff_residual: f64,
    /// Largest mismatch recomputed by expanding `vᵀXv` directly.
    pub gram_expansion_residual: f64,
    pub coeff_tolerance: f64,
    pub min_gram_eig: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lyapunov: Option<LyapunovSample>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: String,
    pub dims: Dims,
    pub status: Status,
    pub iters: usize,
    pub residuals: Residuals,
    pub objective: f64,
    pub time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Everything produced by one end-to-end run.
#[derive(Debug, Clone)]
pub struct Run {
    pub report: RunReport,
    pub conic: ConicProgram,
    pub solution: Solution,
    pub certificate: Option<Certificate>,
}

fn timed_solve(conic: &ConicProgram, opts: &SolverOptions) -> Result<(Solution, f64)> {
    let start = Instant::now();
    let sol = solve(conic, opts)?;
    Ok((sol, start.elapsed().as_secs_f64()))
}

fn report(problem: &str, conic: &ConicProgram, sol: &Solution, objective: f64, time_s: f64) -> RunReport {
    RunReport {
        problem: problem.to_string(),
        dims: Dims::of(conic),
        status: sol.status,
        iters: sol.iterations,
        residuals: sol.residuals(),
        objective,
        time_s,
        certificate: None,
        verification: None,
    }
}

/// Coefficient and Gram checks for every SOS constraint of `prog`. Each
/// constraint is held to `1e-3·(1 + max|p_α|)` with its own coefficients.
fn verify_sos(prog: &SosProgram, cert: &Certificate) -> Result<Verification> {
    let mut expansion = 0.0f64;
    let mut tolerance = f64::INFINITY;
    let mut ok = true;
    for (k, (con, gram)) in prog.constraints.iter().zip(&cert.grams).enumerate() {
        let p = con.polynomial_at(&cert.params);
        let basis = monomial_basis(con.num_vars, con.half_degree)?;
        let tol = COEFF_RESIDUAL_FACTOR * (1.0 + p.max_abs_coeff());
        let exp_k = verify_gram(&p, gram, &basis)?;
        ok &= exp_k <= tol && cert.coeff_residuals[k] <= tol;
        expansion = expansion.max(exp_k);
        tolerance = tolerance.min(tol);
    }
    let max_coeff = cert.max_coeff_residual();
    let min_eig = cert.min_eig();
    Ok(Verification {
        max_coeff_residual: max_coeff,
        gram_expansion_residual: expansion,
        coeff_tolerance: tolerance,
        min_gram_eig: min_eig,
        lyapunov: None,
        passed: ok && min_eig >= -GRAM_MIN_EIG_TOL,
    })
}

/// Solves any SOS program and verifies the certificate.
pub fn run_sos(name: &str, prog: &SosProgram, opts: &SolverOptions) -> Result<Run> {
    let conic = compile_sos_program(prog)?;
    let (solution, time_s) = timed_solve(&conic, opts)?;
    let cert = extract_certificate(&solution, &conic)?;
    let objective = prog
        .objective
        .iter()
        .zip(&cert.params)
        .map(|(w, u)| w * u)
        .sum();
    let mut rep = report(name, &conic, &solution, objective, time_s);
    rep.verification = Some(verify_sos(prog, &cert)?);
    Ok(Run {
        report: rep,
        conic,
        solution,
        certificate: Some(cert),
    })
}

/// Lower bound `γ` on `min p` via `p − γ` SOS.
///
/// The reported `γ` is `p₀ − X₀₀` for the projected Gram matrix `X`, so the
/// constant coefficient of `p − γ = vᵀXv` matches exactly and the bound is
/// the one the PSD certificate supports.
pub fn run_polymin(name: &str, p: &Polynomial, opts: &SolverOptions) -> Result<Run> {
    let prog = compile_polymin(p)?;
    let mut run = run_sos(name, &prog, opts)?;
    let cert = run.certificate.as_ref().expect("run_sos extracts a certificate");
    let gamma = p.coeff(&MultiIndex::zero(p.num_vars())) - cert.grams[0][(0, 0)];
    run.report.objective = gamma;
    run.report.certificate = Some(format!("gamma = {gamma}"));
    Ok(run)
}

/// Lyapunov search plus a sampled check of the returned `V` in the ball
/// `‖x‖² ≤ check_radius_sq`.
pub struct LyapunovRun {
    pub run: Run,
    pub lyapunov: Option<Polynomial>,
}

#[allow(clippy::too_many_arguments)]
pub fn run_lyapunov(
    name: &str,
    field: &RationalField,
    template: &[MultiIndex],
    radius_sq: f64,
    eps: f64,
    check_radius_sq: f64,
    samples: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<LyapunovRun> {
    let lp = compile_lyapunov(field, template, radius_sq, eps)?;
    let mut run = run_sos(name, &lp.program, opts)?;
    let cert = run.certificate.as_ref().expect("run_sos extracts a certificate");
    let v = lp.lyapunov_function(&cert.params);
    let sample = check_lyapunov_sampled(&v, field, check_radius_sq, samples, seed)?;
    if let Some(ver) = run.report.verification.as_mut() {
        ver.passed &= sample.min_v > 0.0 && sample.max_vdot <= 1e-6;
        ver.lyapunov = Some(sample);
    }
    run.report.certificate = Some(format!("V = {v}"));
    Ok(LyapunovRun {
        run,
        lyapunov: Some(v),
    })
}

/// Runs a batch of independent jobs, in parallel when `SOSADMM_THREADS` is
/// set to more than one thread.
pub fn run_parallel<T, F>(count: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let threads = std::env::var("SOSADMM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(1)
        .max(1);
    if threads == 1 {
        return (0..count).map(job).collect();
    }
    use rayon::prelude::*;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(|| (0..count).into_par_iter().map(&job).collect())
}

/// Complete quadratic templates, used by the random stability benchmark.
pub fn full_quadratic_template(n: usize) -> Vec<MultiIndex> {
    quadratic_template(n, false)
}

/// Solved runs must pass their post-checks; unsolved runs are reported as is.
pub fn check_run(run: &Run) -> Result<()> {
    if run.report.status != Status::Solved {
        return Ok(());
    }
    match &run.report.verification {
        Some(v) if !v.passed => Err(Error::MalformedProgram(format!(
            "post-check failed for {}: {v:?}",
            run.report.problem
        ))),
        _ => Ok(()),
    }
}

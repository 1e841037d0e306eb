//! Local Lyapunov certificates for random cubic systems in the ball
//! `‖x‖² ≤ 0.1`, using an S-procedure multiplier.
//!
//! ```text
//! SOSADMM_THREADS=4 cargo run --release --example random_stability -- 8 6
//! ```

use sos_admm::bench::{full_quadratic_template, gen_random_stable_system, run_lyapunov, run_parallel};
use sos_admm::sos::{RationalField, DEFAULT_LYAPUNOV_EPS};
use sos_admm::{SolverOptions, Status};

fn main() -> sos_admm::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>());
    let n = args.next().transpose().ok().flatten().unwrap_or(6);
    let seeds = args.next().transpose().ok().flatten().unwrap_or(4);
    let rows = run_parallel(seeds, |seed| -> sos_admm::Result<String> {
        let f = RationalField::polynomial(gen_random_stable_system(n, seed as u64)?);
        let lr = run_lyapunov(
            "random",
            &f,
            &full_quadratic_template(n),
            0.1,
            DEFAULT_LYAPUNOV_EPS,
            0.1,
            10_000,
            seed as u64,
            &SolverOptions::default(),
        )?;
        let r = &lr.run.report;
        let sample = r.verification.as_ref().and_then(|v| v.lyapunov);
        Ok(match (r.status, sample) {
            (Status::Solved, Some(s)) => format!(
                "seed {seed}: solved in {:5} it, {:.2} s, A is {}x{}, max dV/dt {:.2e}",
                r.iters, r.time_s, r.dims.m, r.dims.nvars, s.max_vdot
            ),
            _ => format!("seed {seed}: {:?} after {} it", r.status, r.iters),
        })
    });
    for row in rows {
        println!("{}", row?);
    }
    Ok(())
}

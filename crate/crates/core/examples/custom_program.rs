//! Build an SOS program by hand, save it as JSON, and solve it.
//!
//! Maximize `t` such that `x⁴ + x²y² + y⁴ − t·(x² + y²)²` is SOS; the answer
//! is `3/4`, attained along `x = ±y`.

use sos_admm::bench::run_sos;
use sos_admm::sos::{SosConstraint, SosProgram};
use sos_admm::{parse_polynomial, SolverOptions};

fn main() -> sos_admm::Result<()> {
    let p = parse_polynomial("x1^4 + x1^2*x2^2 + x2^4", Some(2))?;
    let q = parse_polynomial("(x1^2 + x2^2)^2", Some(2))?;
    let mut c = SosConstraint::from_polynomial(&p, 2);
    c.add_param_polynomial(0, &q.scale(-1.0));
    let prog = SosProgram {
        num_params: 1,
        objective: vec![1.0],
        constraints: vec![c],
    };
    let json = prog.to_json();
    let prog = SosProgram::from_json(&json)?;
    let run = run_sos("ratio", &prog, &SolverOptions { tol: 1e-6, max_iter: 20_000, ..SolverOptions::default() })?;
    println!("program JSON is {} bytes", json.len());
    println!(
        "t = {:.5} ({:?}, {} iterations); expected 0.75",
        run.report.objective, run.report.status, run.report.iters
    );
    Ok(())
}

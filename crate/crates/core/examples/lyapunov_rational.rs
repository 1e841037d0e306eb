//! Global quadratic Lyapunov function for a rational vector field.
//!
//! The third component has denominator `x3² + 1`, which is cleared before
//! compilation.

use sos_admm::bench::run_lyapunov;
use sos_admm::sos::{quadratic_template, RationalField, DEFAULT_LYAPUNOV_EPS};
use sos_admm::{parse_polynomial, Polynomial, SolverOptions};

fn main() -> sos_admm::Result<()> {
    let p = |s: &str| parse_polynomial(s, Some(3));
    let field = RationalField::new(
        vec![
            p("-x1^3 - x1*x3^2")?,
            p("-x2 - x1^2*x2")?,
            p("(-x3 + 3*x1^2*x3)*(x3^2 + 1) - 3*x3")?,
        ],
        vec![
            Polynomial::constant(3, 1.0),
            Polynomial::constant(3, 1.0),
            p("x3^2 + 1")?,
        ],
    )?;
    let lr = run_lyapunov(
        "rational",
        &field,
        &quadratic_template(3, true),
        f64::INFINITY,
        DEFAULT_LYAPUNOV_EPS,
        1.0,
        10_000,
        0,
        &SolverOptions::default(),
    )?;
    let r = &lr.run.report;
    println!("{:?} after {} iterations", r.status, r.iters);
    if let Some(v) = &lr.lyapunov {
        println!("V(x) = {v}");
    }
    if let Some(s) = r.verification.as_ref().and_then(|v| v.lyapunov) {
        println!("unit ball samples: min V = {:.3e}, max dV/dt = {:.3e}", s.min_v, s.max_vdot);
    }
    Ok(())
}

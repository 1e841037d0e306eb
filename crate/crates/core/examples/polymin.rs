//! Global lower bound of a polynomial.
//!
//! ```text
//! cargo run --release --example polymin -- "x1^4 - 3*x1^2 + 2"
//! ```

use sos_admm::bench::run_polymin;
use sos_admm::oracle::univariate_min;
use sos_admm::{parse_polynomial, SolverOptions};

fn main() -> sos_admm::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "x1^4 - 3*x1^2 + 2".to_string());
    let p = parse_polynomial(&text, None)?;
    let run = run_polymin(&text, &p, &SolverOptions::default())?;
    let r = &run.report;
    println!("p(x)   = {p}");
    println!("gamma  = {:.6}  ({:?}, {} iterations)", r.objective, r.status, r.iters);
    if p.num_vars() == 1 {
        println!("oracle = {:.6}", univariate_min(&p)?);
    }
    if let Some(v) = &r.verification {
        println!(
            "coefficient residual {:.2e}, smallest Gram eigenvalue {:.2e}",
            v.max_coeff_residual, v.min_gram_eig
        );
    }
    Ok(())
}

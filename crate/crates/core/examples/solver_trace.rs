//! Iteration trace of the ADMM solver, printed as CSV.

use sos_admm::admm::write_log_csv;
use sos_admm::bench::gen_random_polymin;
use sos_admm::sos::{compile_polymin, compile_sos_program};
use sos_admm::{solve, SolverOptions};

fn main() -> sos_admm::Result<()> {
    let p = gen_random_polymin(4, 2, 1)?;
    let prog = compile_sos_program(&compile_polymin(&p)?)?;
    let opts = SolverOptions {
        log_every: 25,
        ..SolverOptions::default()
    };
    let sol = solve(&prog, &opts)?;
    write_log_csv(&sol.history, std::io::stdout().lock()).expect("stdout");
    eprintln!("{:?} after {} iterations, final rho {}", sol.status, sol.iterations, sol.rho);
    Ok(())
}

//! Solve an SDP given in SDPA sparse format.
//!
//! With no argument a small built-in problem is used:
//! minimize `X11 + X22` subject to `X12 = 1`, `X ⪰ 0` (optimum 2).

use sos_admm::sdpa::{parse_sdpa, write_sdpa};
use sos_admm::{solve, SolverOptions};

const BUILTIN: &str = "\
\"two by two\"
1 =mdim
1 =nblocks
2
1.0
0 1 1 1 -1.0
0 1 2 2 -1.0
1 1 1 2 0.5
";

fn main() -> sos_admm::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).map_err(|e| sos_admm::Error::Parse {
            line: 0,
            msg: format!("{path}: {e}"),
        })?,
        None => BUILTIN.to_string(),
    };
    let prog = parse_sdpa(&text)?;
    println!(
        "{} constraints, {} variables, blocks {:?}",
        prog.num_rows(),
        prog.num_vars,
        prog.cones
    );
    let sol = solve(&prog, &SolverOptions::default())?;
    println!(
        "{:?} after {} iterations, objective {:.6}",
        sol.status, sol.iterations, sol.objective
    );
    println!("residuals {:?}", sol.residuals());
    println!("round trip:\n{}", write_sdpa(&prog)?);
    Ok(())
}

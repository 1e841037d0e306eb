//! Sum-of-squares programming on top of a row-sparse ADMM solver.
//!
//! SOS constraints are compiled through their coefficient matching
//! conditions into a conic program whose equality rows are very sparse.
//! The solver exploits that sparsity directly: every iteration is one
//! diagonal scaling, one closed-form projection per row, and one cone
//! projection, with no matrix factorization anywhere.
//!
//! ```no_run
//! use sos_admm::{compile_polymin, compile_sos_program, parse_polynomial, solve, SolverOptions};
//!
//! let p = parse_polynomial("x1^4 - 3*x1^2 + 2", None)?;
//! let conic = compile_sos_program(&compile_polymin(&p)?)?;
//! let sol = solve(&conic, &SolverOptions::default())?;
//! println!("lower bound: {}", -sol.objective);
//! # Ok::<(), sos_admm::Error>(())
//! ```

pub mod admm;
pub mod bench;
pub mod cli;
pub mod cones;
pub mod conic;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod sdpa;
pub mod sos;

pub use admm::{solve, Solution, Solver, SolverOptions, SolverState, Status};
pub use cones::ConeSpec;
pub use conic::{ConicProgram, RowData, VarLayout};
pub use error::{Error, Result};
pub use oracle::Certificate;
pub use poly::{lie_derivative, monomial_basis, parse_polynomial, MonomialBasis, MultiIndex, Polynomial};
pub use sos::{
    compile_lyapunov, compile_polymin, compile_sos_feasibility, compile_sos_program,
    extract_certificate, RationalField, SosConstraint, SosProgram,
};

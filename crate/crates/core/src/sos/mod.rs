//! Compilation of SOS programs into vectorized conic programs.
//!
//! A constraint "`p(x)` is SOS" becomes `p(x) = v_d(x)ᵀ X v_d(x)` with
//! `X ⪰ 0`; matching the coefficient of every `x^α` gives one sparse
//! equality row per `α`.

mod certificate;
mod coeff;
mod problems;
mod program;

pub use certificate::extract_certificate;
pub use coeff::{coefficient_map, CoefficientMap};
pub use problems::{
    compile_lyapunov, compile_polymin, quadratic_template, LyapunovProgram, RationalField,
    DEFAULT_LYAPUNOV_EPS,
};
pub use program::{
    compile_sos_feasibility, compile_sos_program, AffineExpr, SosConstraint, SosProgram,
};

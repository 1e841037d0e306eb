//! Structure of the coefficient-matching constraints: orthogonal rows for a
//! plain SOS feasibility problem, non-orthogonal rows once free parameters
//! are shared between constraints, and the density of `A`.

use sos_admm::poly::binomial;
use sos_admm::sos::{compile_sos_feasibility, compile_sos_program, SosConstraint, SosProgram};
use sos_admm::{parse_polynomial, MultiIndex, Polynomial};

fn off_diagonal(g: &[Vec<f64>]) -> usize {
    (0..g.len())
        .flat_map(|i| (0..g.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && g[i][j] != 0.0)
        .count()
}

fn main() -> sos_admm::Result<()> {
    println!("density of A for SOS feasibility problems");
    println!("{:>4} {:>4} {:>6} {:>8} {:>12}", "n", "2d", "N", "m", "density");
    for d in [2, 3, 4] {
        for n in [4, 6, 8, 10] {
            let cp = compile_sos_feasibility(&Polynomial::zero(n), d)?;
            println!(
                "{n:>4} {:>4} {:>6} {:>8} {:>12.3e}",
                2 * d,
                binomial(n + d, d),
                cp.num_rows(),
                cp.density()
            );
        }
    }

    let cp = compile_sos_feasibility(&Polynomial::zero(2), 2)?;
    println!("\nfeasibility n=2, 2d=4: AAᵀ off-diagonal nonzeros = {}", off_diagonal(&cp.gram_of_rows()));

    // a·x⁴ + b·x² + x + 1 and b·x⁴ + a·x² + x + 1 both SOS.
    let mut prog = SosProgram::feasibility(2);
    for (quartic, quadratic) in [(0, 1), (1, 0)] {
        let mut c = SosConstraint::from_polynomial(&parse_polynomial("x1 + 1", Some(1))?, 2);
        c.add_param(MultiIndex::new(vec![4]), quartic, 1.0);
        c.add_param(MultiIndex::new(vec![2]), quadratic, 1.0);
        prog.constraints.push(c);
    }
    let cp = compile_sos_program(&prog)?;
    let g = cp.gram_of_rows();
    println!("shared parameters:        AAᵀ off-diagonal nonzeros = {}", off_diagonal(&g));
    for row in &g {
        let line: String = row.iter().map(|&v| if v != 0.0 { '#' } else { '.' }).collect();
        println!("  {line}");
    }
    Ok(())
}

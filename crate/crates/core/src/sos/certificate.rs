use nalgebra::DMatrix;

use crate::admm::Solution;
use crate::conic::ConicProgram;
use crate::error::{Error, Result};
use crate::oracle::{psd_check, Certificate};

/// Reads parameters and Gram matrices out of a solution, using the cone
/// iterate `u` so every Gram block is PSD up to eigensolver roundoff.
pub fn extract_certificate(sol: &Solution, prog: &ConicProgram) -> Result<Certificate> {
    let v = &sol.u;
    if v.len() != prog.num_vars {
        return Err(Error::DimensionMismatch {
            expected: prog.num_vars,
            got: v.len(),
        });
    }
    let layout = &prog.layout;
    if layout.params.end > v.len() || layout.grams.iter().any(|g| g.range().end > v.len()) {
        return Err(Error::MalformedProgram(
            "variable layout exceeds the solution vector".into(),
        ));
    }
    let params = v[layout.params.clone()].to_vec();
    let mut grams = Vec::with_capacity(layout.grams.len());
    let mut coeff_residuals = Vec::with_capacity(layout.grams.len());
    let mut min_eigs = Vec::with_capacity(layout.grams.len());
    for block in &layout.grams {
        let m = DMatrix::from_column_slice(block.side, block.side, &v[block.range()]);
        let m = (&m + m.transpose()) * 0.5;
        let residual = prog.rows[block.rows.clone()]
            .iter()
            .zip(&prog.b[block.rows.clone()])
            .map(|(row, b)| (row.dot(v) - b).abs())
            .fold(0.0, f64::max);
        min_eigs.push(psd_check(&m)?);
        coeff_residuals.push(residual);
        grams.push(m);
    }
    Ok(Certificate {
        params,
        grams,
        coeff_residuals,
        min_eigs,
    })
}

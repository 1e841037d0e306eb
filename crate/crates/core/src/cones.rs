//! Cone descriptions and Euclidean projections onto them.
//!
//! PSD blocks are stored as the full column-major `vec` of an `N×N` matrix,
//! so a `Psd(N)` block occupies `N²` consecutive entries.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "dim")]
pub enum ConeSpec {
    /// `ℝ^k`.
    Free(usize),
    /// Nonnegative orthant of dimension `k`.
    NonNeg(usize),
    /// `{(t, w) : ‖w‖ ≤ t}` of total dimension `k`.
    SecondOrder(usize),
    /// Symmetric PSD matrices of side `N`, vectorized to `N²` entries.
    Psd(usize),
}

impl ConeSpec {
    /// Length of this block in the variable vector.
    pub fn len(&self) -> usize {
        match *self {
            ConeSpec::Free(k) | ConeSpec::NonNeg(k) | ConeSpec::SecondOrder(k) => k,
            ConeSpec::Psd(n) => n * n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        match *self {
            ConeSpec::Free(k)
            | ConeSpec::NonNeg(k)
            | ConeSpec::SecondOrder(k)
            | ConeSpec::Psd(k) => k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ConeSpec::SecondOrder(k) if k < 2 => Err(Error::InvalidDimension(
                "second-order cone needs dimension >= 2".into(),
            )),
            c if c.dim() == 0 => Err(Error::InvalidDimension(format!("{c:?} has zero size"))),
            _ => Ok(()),
        }
    }

    /// Projects `v` (of length [`ConeSpec::len`]) onto this cone in place.
    pub fn project_in_place(&self, v: &mut [f64]) {
        match *self {
            ConeSpec::Free(_) => {}
            ConeSpec::NonNeg(_) => v.iter_mut().for_each(|x| *x = x.max(0.0)),
            ConeSpec::SecondOrder(_) => soc_in_place(v),
            ConeSpec::Psd(n) => psd_in_place(v, n),
        }
    }
}

pub fn project_nonneg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.max(0.0)).collect()
}

/// Projection onto the second-order cone, `v = (t, w)`.
pub fn project_soc(v: &[f64]) -> Result<Vec<f64>> {
    if v.len() < 2 {
        return Err(Error::InvalidDimension(format!(
            "second-order cone projection needs length >= 2, got {}",
            v.len()
        )));
    }
    let mut out = v.to_vec();
    soc_in_place(&mut out);
    Ok(out)
}

fn soc_in_place(v: &mut [f64]) {
    let t = v[0];
    let norm_w = v[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_w <= t {
        return;
    }
    if norm_w <= -t {
        v.iter_mut().for_each(|x| *x = 0.0);
        return;
    }
    let s = 0.5 * (t + norm_w);
    v[0] = s;
    let k = s / norm_w;
    v[1..].iter_mut().for_each(|x| *x *= k);
}

/// Nearest symmetric PSD matrix (Frobenius norm) to the `N×N` matrix whose
/// column-major `vec` is `v`. Non-symmetric input is symmetrized first.
pub fn project_psd(v: &[f64]) -> Result<Vec<f64>> {
    let n = perfect_square_side(v.len())?;
    let mut out = v.to_vec();
    psd_in_place(&mut out, n);
    Ok(out)
}

pub(crate) fn perfect_square_side(len: usize) -> Result<usize> {
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len || n == 0 {
        return Err(Error::InvalidDimension(format!(
            "length {len} is not a positive perfect square"
        )));
    }
    Ok(n)
}

fn psd_in_place(v: &mut [f64], n: usize) {
    let m = DMatrix::from_column_slice(n, n, v);
    let sym = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    if eig.eigenvalues.iter().all(|&l| l >= 0.0) {
        v.copy_from_slice(sym.as_slice());
        return;
    }
    let q = &eig.eigenvectors;
    let mut out = DMatrix::<f64>::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > 0.0 {
            let col = q.column(k);
            out.ger(lambda, &col, &col, 1.0);
        }
    }
    let out = (&out + out.transpose()) * 0.5;
    v.copy_from_slice(out.as_slice());
}

/// Blockwise projection onto a product of cones.
pub fn project_product(v: &[f64], cones: &[ConeSpec]) -> Result<Vec<f64>> {
    let mut out = v.to_vec();
    project_product_in_place(&mut out, cones)?;
    Ok(out)
}

pub fn project_product_in_place(v: &mut [f64], cones: &[ConeSpec]) -> Result<()> {
    let total: usize = cones.iter().map(ConeSpec::len).sum();
    if total != v.len() {
        return Err(Error::DimensionMismatch {
            expected: total,
            got: v.len(),
        });
    }
    let mut offset = 0;
    for cone in cones {
        let len = cone.len();
        cone.project_in_place(&mut v[offset..offset + len]);
        offset += len;
    }
    Ok(())
}

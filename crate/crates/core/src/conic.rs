//! Vectorized primal conic programs `min cᵀx  s.t.  Ax = b, x ∈ K`.
//!
//! `A` is kept row by row: each [`RowData`] stores only the support of a row
//! and the nonzero values on it, which is all the solver ever touches.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::cones::ConeSpec;
use crate::error::{Error, Result};

/// One sparse constraint row: column support and the values on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowData {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl RowData {
    /// Builds a row from unsorted `(column, value)` pairs. Duplicate columns
    /// are summed and exact zeros dropped.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> RowData {
        pairs.sort_by_key(|&(j, _)| j);
        let mut indices: Vec<usize> = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        for (j, v) in pairs {
            if indices.last() == Some(&j) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                values.push(v);
            }
        }
        let (indices, values) = indices
            .into_iter()
            .zip(values)
            .filter(|&(_, v)| v != 0.0)
            .unzip();
        RowData { indices, values }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&j, &a)| a * x[j])
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Position of one PSD (Gram) block in the variable vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramBlock {
    pub offset: usize,
    pub side: usize,
    /// Constraint rows generated for this block.
    pub rows: Range<usize>,
}

impl GramBlock {
    /// Variable index of matrix entry `(r, c)` (column-major vec).
    pub fn position(&self, r: usize, c: usize) -> usize {
        self.offset + c * self.side + r
    }

    pub fn range(&self) -> Range<usize> {
        self.offset..self.offset + self.side * self.side
    }
}

/// Where parameters and Gram blocks live in the variable vector.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VarLayout {
    pub params: Range<usize>,
    pub grams: Vec<GramBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicProgram {
    pub num_vars: usize,
    pub rows: Vec<RowData>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub cones: Vec<ConeSpec>,
    pub layout: VarLayout,
}

impl ConicProgram {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(RowData::len).sum()
    }

    /// Fraction of nonzero entries in the `m × n̂` matrix `A`.
    pub fn density(&self) -> f64 {
        self.nnz() as f64 / (self.num_rows() as f64 * self.num_vars as f64)
    }

    /// Side lengths of the PSD blocks, in order.
    pub fn psd_sides(&self) -> Vec<usize> {
        self.cones
            .iter()
            .filter_map(|c| match c {
                ConeSpec::Psd(n) => Some(*n),
                _ => None,
            })
            .collect()
    }

    /// Index range of each cone block.
    pub fn cone_ranges(&self) -> Vec<Range<usize>> {
        let mut offset = 0;
        self.cones
            .iter()
            .map(|c| {
                let r = offset..offset + c.len();
                offset += c.len();
                r
            })
            .collect()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// `Ax - b`.
    pub fn constraint_violation(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.b)
            .map(|(r, b)| r.dot(x) - b)
            .collect()
    }

    /// Dense `AAᵀ`, for structural inspection of small programs.
    pub fn gram_of_rows(&self) -> Vec<Vec<f64>> {
        let m = self.num_rows();
        let mut out = vec![vec![0.0; m]; m];
        let mut dense = vec![0.0; self.num_vars];
        for i in 0..m {
            for (&j, &v) in self.rows[i].indices.iter().zip(&self.rows[i].values) {
                dense[j] = v;
            }
            for (k, row) in self.rows.iter().enumerate().skip(i) {
                let s = row.dot(&dense);
                out[i][k] = s;
                out[k][i] = s;
            }
            for &j in &self.rows[i].indices {
                dense[j] = 0.0;
            }
        }
        out
    }

    /// Checks all structural invariants.
    pub fn validate(&self) -> Result<()> {
        let malformed = |m: String| Err(Error::MalformedProgram(m));
        if self.num_vars == 0 {
            return Err(Error::EmptyProgram);
        }
        if self.b.len() != self.rows.len() {
            return malformed(format!(
                "{} rows but b has length {}",
                self.rows.len(),
                self.b.len()
            ));
        }
        if self.c.len() != self.num_vars {
            return malformed(format!(
                "c has length {}, expected {}",
                self.c.len(),
                self.num_vars
            ));
        }
        for cone in &self.cones {
            cone.validate()?;
        }
        let total: usize = self.cones.iter().map(ConeSpec::len).sum();
        if total != self.num_vars {
            return malformed(format!(
                "cones cover {total} entries, program has {}",
                self.num_vars
            ));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.indices.is_empty() {
                return malformed(format!("row {i} is empty"));
            }
            if row.indices.len() != row.values.len() {
                return malformed(format!("row {i} has mismatched index/value lengths"));
            }
            if row.indices.windows(2).any(|w| w[0] >= w[1]) {
                return malformed(format!("row {i} indices are not strictly increasing"));
            }
            if *row.indices.last().unwrap() >= self.num_vars {
                return malformed(format!("row {i} references a column out of range"));
            }
            if row.values.iter().any(|&v| v == 0.0 || !v.is_finite()) {
                return malformed(format!("row {i} stores a zero or non-finite value"));
            }
        }
        Ok(())
    }
}

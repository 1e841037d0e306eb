use crate::error::Result;
use crate::poly::{monomial_basis, MonomialBasis, MultiIndex};

/// Partition of the `N²` Gram-matrix entries by the monomial they multiply.
///
/// Entry `(β, γ)` of `v_d(x) v_d(x)ᵀ` equals `x^(β+γ)`, so the coefficient of
/// `x^α` in `v_dᵀ X v_d` is the sum of `X[β, γ]` over the pairs listed for `α`.
#[derive(Debug, Clone)]
pub struct CoefficientMap {
    basis: MonomialBasis,
    support: MonomialBasis,
    pairs: Vec<Vec<(usize, usize)>>,
}

impl CoefficientMap {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let basis = monomial_basis(n, d)?;
        let support = monomial_basis(n, 2 * d)?;
        let mut pairs = vec![Vec::new(); support.len()];
        for (bi, beta) in basis.entries().iter().enumerate() {
            for (gi, gamma) in basis.entries().iter().enumerate() {
                let alpha = beta.add(gamma);
                let k = support
                    .index_of(&alpha)
                    .expect("sum of two degree-d monomials has degree <= 2d");
                pairs[k].push((bi, gi));
            }
        }
        Ok(CoefficientMap {
            basis,
            support,
            pairs,
        })
    }

    /// The half-degree basis `v_d`.
    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// All `α` with `|α| ≤ 2d`, in basis order.
    pub fn alphas(&self) -> &[MultiIndex] {
        self.support.entries()
    }

    pub fn support(&self) -> &MonomialBasis {
        &self.support
    }

    /// Index pairs `(β, γ)` into [`CoefficientMap::basis`] with `β + γ = α`.
    pub fn pairs(&self, alpha: &MultiIndex) -> Option<&[(usize, usize)]> {
        self.support.index_of(alpha).map(|k| self.pairs[k].as_slice())
    }

    pub fn pairs_at(&self, k: usize) -> &[(usize, usize)] {
        &self.pairs[k]
    }

    /// `n_α`, the number of Gram entries contributing to `x^α`.
    pub fn multiplicity(&self, alpha: &MultiIndex) -> usize {
        self.pairs(alpha).map_or(0, <[_]>::len)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.pairs.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &[(usize, usize)])> {
        self.support
            .entries()
            .iter()
            .zip(self.pairs.iter().map(Vec::as_slice))
    }
}

/// Builds the coefficient map for `n` variables and half-degree `d`.
pub fn coefficient_map(n: usize, d: usize) -> Result<CoefficientMap> {
    CoefficientMap::new(n, d)
}

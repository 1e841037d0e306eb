//! Independent checks used to validate solver output.
//!
//! Nothing here shares a code path with the compiler or the projections:
//! Gram expansions go through polynomial multiplication rather than the
//! coefficient map, and eigenvalues come from a cyclic Jacobi sweep rather
//! than the tridiagonal QR used for projection.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{MonomialBasis, Polynomial};
use crate::sos::RationalField;

/// Solver output repackaged as an SOS certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Free parameter values (`γ`, Lyapunov coefficients, ...).
    pub params: Vec<f64>,
    /// Symmetrized Gram matrix per SOS constraint.
    pub grams: Vec<DMatrix<f64>>,
    /// Per constraint, `max_α |⟨A_α, X⟩ − (constant + affine·u)|`.
    pub coeff_residuals: Vec<f64>,
    /// Smallest eigenvalue of each Gram matrix.
    pub min_eigs: Vec<f64>,
}

impl Certificate {
    pub fn max_coeff_residual(&self) -> f64 {
        self.coeff_residuals.iter().fold(0.0, |m, &r| m.max(r))
    }

    pub fn min_eig(&self) -> f64 {
        self.min_eigs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `max_α |[vᵀXv]_α − p_α|` with `v` the given basis, expanded term by term.
pub fn verify_gram(p: &Polynomial, x: &DMatrix<f64>, basis: &MonomialBasis) -> Result<f64> {
    let n = basis.len();
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.nrows(),
        });
    }
    if p.num_vars() != basis.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: basis.num_vars(),
            got: p.num_vars(),
        });
    }
    let monos: Vec<Polynomial> = basis
        .entries()
        .iter()
        .map(|a| Polynomial::monomial(a.clone(), 1.0))
        .collect();
    let mut expansion = Polynomial::zero(p.num_vars());
    for r in 0..n {
        for c in 0..n {
            let entry = x[(r, c)];
            if entry != 0.0 {
                expansion = &expansion + &(&monos[r] * &monos[c]).scale(entry);
            }
        }
    }
    Ok((&expansion - p).max_abs_coeff())
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sweeping
/// pivots column by column from the last column backwards.
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidDimension(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows();
    let mut a = (m + m.transpose()) * 0.5;
    let frob = a.norm();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].powi(2))
            .sum();
        if off.sqrt() <= 1e-15 * frob.max(f64::MIN_POSITIVE) {
            break;
        }
        for q in (1..n).rev() {
            for p in (0..q).rev() {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Minimum eigenvalue of a symmetric matrix; callers compare against `-tol`.
pub fn psd_check(m: &DMatrix<f64>) -> Result<f64> {
    Ok(jacobi_eigenvalues(m)?
        .first()
        .copied()
        .unwrap_or(f64::INFINITY))
}

/// Global minimum of a univariate polynomial with even degree and positive
/// leading coefficient.
///
/// All critical points lie within the Cauchy bound of `p'`; that interval is
/// sampled densely, and each sign change of `p'` from negative to positive
/// is refined by bisection.
pub fn univariate_min(p: &Polynomial) -> Result<f64> {
    if p.num_vars() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: p.num_vars(),
        });
    }
    let deg = p.degree();
    let coeffs: Vec<f64> = (0..=deg)
        .map(|k| p.coeff(&crate::poly::MultiIndex::new(vec![k as u32])))
        .collect();
    let lead = coeffs[deg];
    if deg % 2 == 1 || lead < 0.0 {
        return Err(Error::UnboundedBelow(format!(
            "degree {deg}, leading coefficient {lead}"
        )));
    }
    let eval = |x: f64| coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c);
    if deg == 0 {
        return Ok(coeffs[0]);
    }
    let dcoeffs: Vec<f64> = (1..=deg).map(|k| k as f64 * coeffs[k]).collect();
    let deval = |x: f64| dcoeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c);
    let dlead = dcoeffs[deg - 1];
    let bound = 1.0
        + dcoeffs[..deg - 1]
            .iter()
            .fold(0.0f64, |m, c| m.max((c / dlead).abs()));

    const SAMPLES: usize = 200_000;
    let h = 2.0 * bound / SAMPLES as f64;
    let mut best = eval(-bound).min(eval(bound));
    let mut prev_x = -bound;
    let mut prev_d = deval(prev_x);
    for k in 1..=SAMPLES {
        let x = -bound + k as f64 * h;
        let d = deval(x);
        best = best.min(eval(x));
        if prev_d < 0.0 && d >= 0.0 {
            let (mut lo, mut hi) = (prev_x, x);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if deval(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
                    break;
                }
            }
            best = best.min(eval(0.5 * (lo + hi)));
        }
        prev_x = x;
        prev_d = d;
    }
    Ok(best)
}

/// Extremes of `V` and `V̇` over random points in a ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSample {
    pub min_v: f64,
    pub max_vdot: f64,
}

/// Samples `samples` points uniformly from `‖x‖² ≤ radius_sq` (skipping
/// `‖x‖ < 1e-6`) with a ChaCha8 stream seeded by `seed`, and reports
/// `min V` and `max ⟨∇V, f⟩` with `f` evaluated as a rational function.
pub fn check_lyapunov_sampled(
    v: &Polynomial,
    field: &RationalField,
    radius_sq: f64,
    samples: usize,
    seed: u64,
) -> Result<LyapunovSample> {
    let n = v.num_vars();
    if field.num_vars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: field.num_vars(),
        });
    }
    if !(radius_sq > 0.0 && radius_sq.is_finite()) {
        return Err(Error::InvalidDimension(format!(
            "sampling needs a finite positive radius, got {radius_sq}"
        )));
    }
    let grad: Vec<Polynomial> = (0..n).map(|i| v.partial(i)).collect();
    let radius = radius_sq.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = LyapunovSample {
        min_v: f64::INFINITY,
        max_vdot: f64::NEG_INFINITY,
    };
    let mut taken = 0;
    while taken < samples {
        let dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
        if norm == 0.0 || r < 1e-6 {
            continue;
        }
        let x: Vec<f64> = dir.iter().map(|d| d * r / norm).collect();
        let fx = field.eval(&x)?;
        let vdot: f64 = grad
            .iter()
            .zip(&fx)
            .map(|(g, f)| g.eval(&x).map(|gv| gv * f))
            .sum::<Result<f64>>()?;
        out.min_v = out.min_v.min(v.eval(&x)?);
        out.max_vdot = out.max_vdot.max(vdot);
        taken += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{monomial_basis, parse_polynomial};
    use proptest::prelude::*;

    fn poly(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, Some(n)).unwrap()
    }

    #[test]
    fn verify_gram_examples() {
        let p = poly("x1^2 + 2*x1 + 1", 1);
        let b = monomial_basis(1, 1).unwrap();
        let ones = DMatrix::from_element(2, 2, 1.0);
        assert_eq!(verify_gram(&p, &ones, &b).unwrap(), 0.0);
        assert_eq!(verify_gram(&p, &DMatrix::identity(2, 2), &b).unwrap(), 2.0);
        assert_eq!(
            verify_gram(&Polynomial::zero(1), &DMatrix::zeros(2, 2), &b).unwrap(),
            0.0
        );
        assert!(verify_gram(&p, &DMatrix::zeros(3, 3), &b).is_err());
    }

    #[test]
    fn psd_check_examples() {
        assert!((psd_check(&DMatrix::identity(3, 3)).unwrap() - 1.0).abs() < 1e-15);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, -3.0]));
        assert!((psd_check(&d).unwrap() + 3.0).abs() < 1e-15);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!((psd_check(&m).unwrap() + 1.0).abs() < 1e-14);
        assert!(psd_check(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn univariate_min_examples() {
        assert!(univariate_min(&poly("x1^2", 1)).unwrap().abs() < 1e-12);
        assert!((univariate_min(&poly("x1^4 - 3*x1^2 + 2", 1)).unwrap() + 0.25).abs() < 1e-9);
        assert!((univariate_min(&poly("(x1 - 3)^2 + 5", 1)).unwrap() - 5.0).abs() < 1e-9);
        assert!(univariate_min(&poly("x1^3", 1)).is_err());
        assert!(univariate_min(&poly("-x1^4", 1)).is_err());
    }

    #[test]
    fn sampled_lyapunov_examples() {
        let v = poly("x1^2", 1);
        let stable = RationalField::polynomial(vec![poly("-x1", 1)]);
        let s = check_lyapunov_sampled(&v, &stable, 1.0, 1000, 7).unwrap();
        assert!(s.min_v > 0.0 && s.max_vdot < 0.0);

        let unstable = RationalField::polynomial(vec![poly("x1", 1)]);
        let s = check_lyapunov_sampled(&v, &unstable, 1.0, 1000, 7).unwrap();
        assert!(s.max_vdot > 0.0);

        let bad = RationalField::new(vec![poly("x1", 1)], vec![poly("x1", 1)]).unwrap();
        assert!(matches!(
            check_lyapunov_sampled(&v, &bad, 1.0, 100, 1),
            Err(Error::NonPositiveDenominator(_))
        ));
    }

    #[test]
    fn sampling_is_reproducible() {
        let v = poly("x1^2 + 3*x2^2", 2);
        let f = RationalField::polynomial(vec![poly("-x1 + x2", 2), poly("-x1 - x2^3", 2)]);
        let a = check_lyapunov_sampled(&v, &f, 0.5, 500, 42).unwrap();
        let b = check_lyapunov_sampled(&v, &f, 0.5, 500, 42).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        // p built as Σ λ_k (w_kᵀv)² has Gram Σ λ_k w_k w_kᵀ.
        #[test]
        fn sos_by_construction(
            n in 1usize..4,
            d in 1usize..3,
            lambdas in prop::collection::vec(0.0f64..3.0, 3),
            ws in prop::collection::vec(-2.0f64..2.0, 3 * 35),
        ) {
            let basis = monomial_basis(n, d).unwrap();
            let len = basis.len();
            let mut gram = DMatrix::<f64>::zeros(len, len);
            let mut p = Polynomial::zero(n);
            for (k, &lambda) in lambdas.iter().enumerate() {
                let w = nalgebra::DVector::from_column_slice(&ws[k * 35..k * 35 + len]);
                gram += &w * w.transpose() * lambda;
                let mut lin = Polynomial::zero(n);
                for (i, a) in basis.entries().iter().enumerate() {
                    lin.add_term(a.clone(), w[i]);
                }
                p = &p + &(&lin * &lin).scale(lambda);
            }
            prop_assert!(verify_gram(&p, &gram, &basis).unwrap() <= 1e-10 * (1.0 + p.max_abs_coeff()));
        }

        #[test]
        fn jacobi_matches_projection_output(n in 1usize..7, v in prop::collection::vec(-5.0f64..5.0, 36)) {
            let p = crate::cones::project_psd(&v[..n * n]).unwrap();
            let m = DMatrix::from_column_slice(n, n, &p);
            prop_assert!(psd_check(&m).unwrap() >= -1e-8);
        }
    }
}

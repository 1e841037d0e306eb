//! Ready-made SOS formulations: global polynomial minimization and Lyapunov
//! function search for polynomial and rational vector fields.

use crate::error::{Error, Result};
use crate::poly::{lie_derivative, monomial_basis, MultiIndex, Polynomial};

use super::program::{SosConstraint, SosProgram};

/// Default margin in `V − eps·‖x‖²` being SOS.
pub const DEFAULT_LYAPUNOV_EPS: f64 = 1e-3;

/// `maximize γ  s.t.  p(x) − γ is SOS`; `γ` is parameter 0.
pub fn compile_polymin(p: &Polynomial) -> Result<SosProgram> {
    let deg = p.degree();
    if deg % 2 == 1 {
        return Err(Error::OddDegree(deg));
    }
    let mut con = SosConstraint::from_polynomial(p, deg / 2);
    con.add_param(MultiIndex::zero(p.num_vars()), 0, -1.0);
    Ok(SosProgram {
        num_params: 1,
        objective: vec![1.0],
        constraints: vec![con],
    })
}

/// Vector field `ẋ_i = numerators[i] / denominators[i]`.
///
/// Denominators are assumed positive on the region of interest; this is not
/// checked at compile time.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalField {
    pub numerators: Vec<Polynomial>,
    pub denominators: Vec<Polynomial>,
}

impl RationalField {
    pub fn polynomial(field: Vec<Polynomial>) -> Self {
        let n = field.first().map_or(0, Polynomial::num_vars);
        let denominators = vec![Polynomial::constant(n, 1.0); field.len()];
        RationalField {
            numerators: field,
            denominators,
        }
    }

    pub fn new(numerators: Vec<Polynomial>, denominators: Vec<Polynomial>) -> Result<Self> {
        let f = RationalField {
            numerators,
            denominators,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn num_vars(&self) -> usize {
        self.numerators.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.numerators.len();
        if n == 0 {
            return Err(Error::InvalidDimension("empty vector field".into()));
        }
        if self.denominators.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.denominators.len(),
            });
        }
        for p in self.numerators.iter().chain(&self.denominators) {
            if p.num_vars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: p.num_vars(),
                });
            }
        }
        if self.denominators.iter().any(Polynomial::is_zero) {
            return Err(Error::MalformedProgram("zero denominator".into()));
        }
        Ok(())
    }

    /// Components multiplied through by the product of all denominators:
    /// `numerators[i] · Π_{k≠i} denominators[k]`.
    pub fn cleared(&self) -> Vec<Polynomial> {
        let n = self.num_vars();
        (0..n)
            .map(|i| {
                self.denominators
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .fold(self.numerators[i].clone(), |acc, (_, d)| &acc * d)
            })
            .collect()
    }

    /// Evaluates `f(x)`; errors if a denominator is not positive.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.numerators
            .iter()
            .zip(&self.denominators)
            .map(|(num, den)| {
                let d = den.eval(x)?;
                if d <= 0.0 {
                    return Err(Error::NonPositiveDenominator(d));
                }
                Ok(num.eval(x)? / d)
            })
            .collect()
    }
}

/// `{x_i²}` when `diagonal`, otherwise every monomial of degree exactly two.
pub fn quadratic_template(n: usize, diagonal: bool) -> Vec<MultiIndex> {
    if diagonal {
        (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 2;
                MultiIndex::new(e)
            })
            .collect()
    } else {
        monomial_basis(n, 2)
            .map(|b| {
                b.entries()
                    .iter()
                    .filter(|a| a.degree() == 2)
                    .cloned()
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// A Lyapunov search compiled to an [`SosProgram`].
///
/// Parameters are laid out as `[V coefficients | multiplier coefficients]`.
#[derive(Debug, Clone)]
pub struct LyapunovProgram {
    pub program: SosProgram,
    pub num_vars: usize,
    pub template: Vec<MultiIndex>,
    /// Monomials of the S-procedure multiplier σ, empty for a global search.
    pub multiplier_monomials: Vec<MultiIndex>,
}

impl LyapunovProgram {
    /// `V(x) = Σ_j u_j · template_j`.
    pub fn lyapunov_function(&self, params: &[f64]) -> Polynomial {
        let mut v = Polynomial::zero(self.num_vars);
        for (alpha, &c) in self.template.iter().zip(params) {
            v.add_term(alpha.clone(), c);
        }
        v
    }

    pub fn multiplier(&self, params: &[f64]) -> Option<Polynomial> {
        if self.multiplier_monomials.is_empty() {
            return None;
        }
        let t = self.template.len();
        let mut s = Polynomial::zero(self.num_vars);
        for (alpha, &c) in self.multiplier_monomials.iter().zip(&params[t..]) {
            s.add_term(alpha.clone(), c);
        }
        Some(s)
    }
}

/// Compiles a Lyapunov function search.
///
/// With `V = Σ u_j m_j` over `template`, the constraints are
///
/// 1. `V − eps·‖x‖²` is SOS;
/// 2. `−(Π den)·⟨∇V, f⟩ − σ(x)·(radius_sq − ‖x‖²)` is SOS;
/// 3. `σ` is SOS, with `deg σ = deg(−(Π den)·V̇) − 2`.
///
/// A non-finite `radius_sq` requests a global certificate and drops `σ`.
pub fn compile_lyapunov(
    field: &RationalField,
    template: &[MultiIndex],
    radius_sq: f64,
    eps: f64,
) -> Result<LyapunovProgram> {
    field.validate()?;
    let n = field.num_vars();
    if template.is_empty() {
        return Err(Error::InvalidDimension("empty Lyapunov template".into()));
    }
    if let Some(a) = template.iter().find(|a| a.num_vars() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.num_vars(),
        });
    }
    if template.iter().any(|a| a.degree() == 0) {
        return Err(Error::MalformedProgram(
            "template must not contain the constant monomial (V(0) = 0)".into(),
        ));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidDimension(format!("eps must be positive, got {eps}")));
    }
    let local = radius_sq.is_finite();
    if local && !(radius_sq > 0.0) {
        return Err(Error::InvalidDimension(format!(
            "radius_sq must be positive, got {radius_sq}"
        )));
    }

    let t_v = template.len();
    let norm_sq = (0..n).fold(Polynomial::zero(n), |acc, i| {
        let xi = Polynomial::var(n, i);
        &acc + &(&xi * &xi)
    });

    // V − eps‖x‖²
    let v_deg = template.iter().map(MultiIndex::degree).max().unwrap().max(2);
    if v_deg % 2 == 1 {
        return Err(Error::DegreeBookkeeping(format!(
            "template has odd degree {v_deg}"
        )));
    }
    let mut positivity = SosConstraint::new(n, v_deg / 2);
    positivity.add_polynomial(&norm_sq.scale(-eps));
    for (j, alpha) in template.iter().enumerate() {
        positivity.add_param(alpha.clone(), j, 1.0);
    }

    // −(Π den)·V̇, one polynomial per template monomial
    let cleared = field.cleared();
    let lie: Vec<Polynomial> = template
        .iter()
        .map(|alpha| {
            lie_derivative(&Polynomial::monomial(alpha.clone(), 1.0), &cleared).map(|p| -&p)
        })
        .collect::<Result<_>>()?;
    let lie_deg = lie.iter().map(Polynomial::degree).max().unwrap_or(0);
    if lie_deg % 2 == 1 {
        return Err(Error::DegreeBookkeeping(format!(
            "derivative condition has odd degree {lie_deg} after clearing denominators"
        )));
    }
    let mut decrease = SosConstraint::new(n, lie_deg / 2);
    for (j, q) in lie.iter().enumerate() {
        decrease.add_param_polynomial(j, q);
    }

    let mut constraints = vec![positivity, decrease];
    let mut multiplier_monomials = Vec::new();
    if local && lie_deg >= 2 {
        let sigma_deg = lie_deg - 2;
        multiplier_monomials = monomial_basis(n, sigma_deg)?.entries().to_vec();
        let ball = &Polynomial::constant(n, radius_sq) - &norm_sq;
        let mut sigma = SosConstraint::new(n, sigma_deg / 2);
        for (k, beta) in multiplier_monomials.iter().enumerate() {
            let param = t_v + k;
            for (gamma, g) in ball.terms() {
                constraints[1].add_param(beta.add(gamma), param, -g);
            }
            sigma.add_param(beta.clone(), param, 1.0);
        }
        constraints.push(sigma);
    }

    let num_params = t_v + multiplier_monomials.len();
    Ok(LyapunovProgram {
        program: SosProgram {
            num_params,
            objective: vec![0.0; num_params],
            constraints,
        },
        num_vars: n,
        template: template.to_vec(),
        multiplier_monomials,
    })
}

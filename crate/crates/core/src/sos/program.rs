use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cones::ConeSpec;
use crate::conic::{ConicProgram, GramBlock, RowData, VarLayout};
use crate::error::{Error, Result};
use crate::poly::{MultiIndex, Polynomial};

use super::coeff::CoefficientMap;

/// `constant + Σ_j linear_j · u_j` over the free parameters `u`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AffineExpr {
    pub constant: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub linear: Vec<(usize, f64)>,
}

impl AffineExpr {
    pub fn constant(c: f64) -> Self {
        AffineExpr {
            constant: c,
            linear: Vec::new(),
        }
    }

    pub fn eval(&self, params: &[f64]) -> f64 {
        self.constant
            + self
                .linear
                .iter()
                .map(|&(j, a)| a * params[j])
                .sum::<f64>()
    }

    fn add_linear(&mut self, j: usize, a: f64) {
        if let Some(slot) = self.linear.iter_mut().find(|(k, _)| *k == j) {
            slot.1 += a;
        } else {
            self.linear.push((j, a));
        }
    }

    fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.linear.iter().all(|&(_, a)| a == 0.0)
    }
}

/// Requires the polynomial `Σ_α coefficients[α](u) x^α` to be a sum of squares
/// of polynomials of degree at most `half_degree`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SosConstraint {
    pub num_vars: usize,
    pub half_degree: usize,
    #[serde(with = "coefficient_table")]
    pub coefficients: BTreeMap<MultiIndex, AffineExpr>,
}

impl SosConstraint {
    pub fn new(num_vars: usize, half_degree: usize) -> Self {
        SosConstraint {
            num_vars,
            half_degree,
            coefficients: BTreeMap::new(),
        }
    }

    /// Parameter-free constraint "`p` is SOS" with basis degree `half_degree`.
    pub fn from_polynomial(p: &Polynomial, half_degree: usize) -> Self {
        let mut c = SosConstraint::new(p.num_vars(), half_degree);
        c.add_polynomial(p);
        c
    }

    pub fn add_polynomial(&mut self, p: &Polynomial) {
        for (alpha, v) in p.terms() {
            self.add_constant(alpha.clone(), v);
        }
    }

    pub fn add_constant(&mut self, alpha: MultiIndex, v: f64) {
        self.coefficients.entry(alpha).or_default().constant += v;
    }

    /// Adds `a · u_param` to the coefficient of `x^alpha`.
    pub fn add_param(&mut self, alpha: MultiIndex, param: usize, a: f64) {
        self.coefficients
            .entry(alpha)
            .or_default()
            .add_linear(param, a);
    }

    /// Adds `u_param · q(x)`.
    pub fn add_param_polynomial(&mut self, param: usize, q: &Polynomial) {
        for (alpha, v) in q.terms() {
            self.add_param(alpha.clone(), param, v);
        }
    }

    /// The constrained polynomial at a given parameter value.
    pub fn polynomial_at(&self, params: &[f64]) -> Polynomial {
        let mut p = Polynomial::zero(self.num_vars);
        for (alpha, e) in &self.coefficients {
            p.add_term(alpha.clone(), e.eval(params));
        }
        p
    }

    /// Largest degree with a nonzero constant or parameter coefficient.
    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(a, _)| a.degree())
            .max()
            .unwrap_or(0)
    }

    fn validate(&self, num_params: usize) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::InvalidDimension(
                "SOS constraint needs at least one variable".into(),
            ));
        }
        for (alpha, e) in &self.coefficients {
            if alpha.num_vars() != self.num_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.num_vars,
                    got: alpha.num_vars(),
                });
            }
            if !e.is_zero() && alpha.degree() > 2 * self.half_degree {
                return Err(Error::DegreeOverflow {
                    degree: alpha.degree(),
                    max: 2 * self.half_degree,
                });
            }
            if !e.constant.is_finite() {
                return Err(Error::MalformedProgram("non-finite constant".into()));
            }
            let mut seen = Vec::with_capacity(e.linear.len());
            for &(j, a) in &e.linear {
                if j >= num_params {
                    return Err(Error::MalformedProgram(format!(
                        "affine row references parameter {j}, only {num_params} declared"
                    )));
                }
                if !a.is_finite() {
                    return Err(Error::MalformedProgram("non-finite affine coefficient".into()));
                }
                if seen.contains(&j) {
                    return Err(Error::MalformedProgram(format!(
                        "parameter {j} repeated in one affine row"
                    )));
                }
                seen.push(j);
            }
        }
        Ok(())
    }
}

/// Free parameters `u ∈ ℝ^t`, an objective `maximize objectiveᵀu`, and SOS
/// constraints whose coefficients are affine in `u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SosProgram {
    pub num_params: usize,
    pub objective: Vec<f64>,
    pub constraints: Vec<SosConstraint>,
}

impl SosProgram {
    pub fn feasibility(num_params: usize) -> Self {
        SosProgram {
            num_params,
            objective: vec![0.0; num_params],
            constraints: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_params {
            return Err(Error::MalformedProgram(format!(
                "objective has length {}, expected {}",
                self.objective.len(),
                self.num_params
            )));
        }
        if self.constraints.is_empty() {
            return Err(Error::EmptyProgram);
        }
        self.constraints
            .iter()
            .try_for_each(|c| c.validate(self.num_params))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("SosProgram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: SosProgram = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        p.validate()?;
        Ok(p)
    }
}

/// Assembles the vectorized conic program.
///
/// Variables are `[u | vec(X_1) | … | vec(X_K)]` with one full `N_k²` Gram
/// block per constraint. Each coefficient `α` of constraint `k` yields the row
/// `Σ_{β+γ=α} X_k[β,γ] − Σ_j a_j u_j = constant`, and `c = −objective` on the
/// parameter block since the solver minimizes.
pub fn compile_sos_program(prog: &SosProgram) -> Result<ConicProgram> {
    prog.validate()?;
    let t = prog.num_params;
    let mut cones = Vec::with_capacity(prog.constraints.len() + 1);
    if t > 0 {
        cones.push(ConeSpec::Free(t));
    }
    let mut maps: HashMap<(usize, usize), CoefficientMap> = HashMap::new();
    let mut rows = Vec::new();
    let mut b = Vec::new();
    let mut grams = Vec::with_capacity(prog.constraints.len());
    let mut offset = t;
    for con in &prog.constraints {
        let key = (con.num_vars, con.half_degree);
        if !maps.contains_key(&key) {
            maps.insert(key, CoefficientMap::new(con.num_vars, con.half_degree)?);
        }
        let cmap = &maps[&key];
        let side = cmap.basis().len();
        let block = GramBlock {
            offset,
            side,
            rows: rows.len()..rows.len() + cmap.alphas().len(),
        };
        let zero = AffineExpr::default();
        for (alpha, pairs) in cmap.iter() {
            let expr = con.coefficients.get(alpha).unwrap_or(&zero);
            let mut entries: Vec<(usize, f64)> = expr
                .linear
                .iter()
                .filter(|&&(_, a)| a != 0.0)
                .map(|&(j, a)| (j, -a))
                .collect();
            entries.extend(pairs.iter().map(|&(bi, gi)| (block.position(bi, gi), 1.0)));
            rows.push(RowData::from_pairs(entries));
            b.push(expr.constant);
        }
        cones.push(ConeSpec::Psd(side));
        offset += side * side;
        grams.push(block);
    }
    let mut c = vec![0.0; offset];
    for (j, &w) in prog.objective.iter().enumerate() {
        c[j] = -w;
    }
    let out = ConicProgram {
        num_vars: offset,
        rows,
        b,
        c,
        cones,
        layout: VarLayout {
            params: 0..t,
            grams,
        },
    };
    out.validate()?;
    Ok(out)
}

/// Feasibility SDP "find `X ⪰ 0` with `⟨A_α, X⟩ = p_α` for all `|α| ≤ 2d`".
pub fn compile_sos_feasibility(p: &Polynomial, d: usize) -> Result<ConicProgram> {
    if p.degree() > 2 * d {
        return Err(Error::DegreeOverflow {
            degree: p.degree(),
            max: 2 * d,
        });
    }
    let prog = SosProgram {
        num_params: 0,
        objective: Vec::new(),
        constraints: vec![SosConstraint::from_polynomial(p, d)],
    };
    compile_sos_program(&prog)
}

mod coefficient_table {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        exponents: MultiIndex,
        #[serde(flatten)]
        expr: AffineExpr,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<MultiIndex, AffineExpr>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = map
            .iter()
            .map(|(a, e)| Entry {
                exponents: a.clone(),
                expr: e.clone(),
            })
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<MultiIndex, AffineExpr>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        let mut map = BTreeMap::new();
        for e in entries {
            if map.insert(e.exponents, e.expr).is_some() {
                return Err(serde::de::Error::custom("duplicate exponent vector"));
            }
        }
        Ok(map)
    }
}

//! Sparse multivariate polynomials over `f64` and graded monomial bases.
//!
//! Monomials are ordered graded-lexicographically: by total degree first, then
//! with larger exponents of earlier variables first. For two variables up to
//! degree two this gives `1, x1, x2, x1^2, x1*x2, x2^2`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial `x^α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// The constant monomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The monomial `x_i` (zero-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Exponent-wise sum, i.e. the index of `x^self * x^other`.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exponent-wise difference, `None` if any component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Evaluates `point^self`.
    pub fn eval(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(point)
            .map(|(&e, &x)| x.powi(e as i32))
            .product()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial `Σ p_α x^α` with exactly-zero coefficients never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: f64) -> Self {
        Self::monomial(MultiIndex::zero(num_vars), c)
    }

    pub fn monomial(alpha: MultiIndex, coeff: f64) -> Self {
        let mut p = Polynomial::zero(alpha.num_vars());
        p.add_term(alpha, coeff);
        p
    }

    /// The coordinate polynomial `x_i` (zero-based `i`).
    pub fn var(num_vars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(num_vars, i), 1.0)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, collecting
    /// repeated monomials.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut p = Polynomial::zero(num_vars);
        for (alpha, c) in terms {
            if alpha.num_vars() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    got: alpha.num_vars(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    /// Adds `coeff * x^alpha` in place, removing the term if it cancels.
    pub fn add_term(&mut self, alpha: MultiIndex, coeff: f64) {
        assert_eq!(alpha.num_vars(), self.num_vars, "monomial arity");
        if coeff == 0.0 {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + coeff;
                if s == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total degree over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        self.check_point(point)?;
        Ok(self.terms.iter().map(|(a, c)| c * a.eval(point)).sum())
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        Ok(())
    }

    fn check_same_vars(&self, other: &Polynomial) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&other.scale(-1.0))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_vars(other)?;
        let mut out = Polynomial::zero(self.num_vars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let mut out = Polynomial::zero(self.num_vars);
        for (a, &c) in &self.terms {
            out.add_term(a.clone(), c * s);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.num_vars, 1.0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to `x_i` (zero-based).
    pub fn partial(&self, i: usize) -> Polynomial {
        assert!(i < self.num_vars, "variable index out of range");
        let mut out = Polynomial::zero(self.num_vars);
        for (a, &c) in &self.terms {
            let e = a.0[i];
            if e > 0 {
                let mut b = a.clone();
                b.0[i] -= 1;
                out.add_term(b, c * e as f64);
            }
        }
        out
    }

    /// Parses the text grammar `2*x1^2*x2 - 3*x3 + 1`; see [`parse_polynomial`].
    pub fn parse(text: &str, num_vars: Option<usize>) -> Result<Polynomial> {
        parse_polynomial(text, num_vars)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

/// `Σ_i (∂V/∂x_i) f_i`, the derivative of `V` along the vector field `f`.
pub fn lie_derivative(v: &Polynomial, field: &[Polynomial]) -> Result<Polynomial> {
    if field.len() != v.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: v.num_vars(),
            got: field.len(),
        });
    }
    let mut out = Polynomial::zero(v.num_vars());
    for (i, fi) in field.iter().enumerate() {
        let term = v.partial(i).try_mul(fi)?;
        out = out.try_add(&term)?;
    }
    Ok(out)
}

/// All monomials of degree at most `max_degree`, graded-lexicographically.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    num_vars: usize,
    max_degree: usize,
    entries: Vec<MultiIndex>,
    index_of: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidDimension(format!(
                "monomial basis needs at least one variable, got n = {n}"
            )));
        }
        let mut entries = Vec::with_capacity(binomial(n + d, d));
        for deg in 0..=d {
            let mut buf = vec![0u32; n];
            push_degree(&mut entries, &mut buf, 0, deg as u32);
        }
        Ok(Self::from_entries(n, d, entries))
    }

    fn from_entries(num_vars: usize, max_degree: usize, entries: Vec<MultiIndex>) -> Self {
        let index_of = entries
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        MonomialBasis {
            num_vars,
            max_degree,
            entries,
            index_of,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &MultiIndex {
        &self.entries[i]
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.index_of.get(alpha).copied()
    }
}

// Emits all exponent vectors of total degree `remaining` over variables
// `pos..`, earlier variables taking larger exponents first.
fn push_degree(out: &mut Vec<MultiIndex>, buf: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(MultiIndex(buf.to_vec()));
        buf[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        buf[pos] = e;
        push_degree(out, buf, pos + 1, remaining - e);
    }
    buf[pos] = 0;
}

/// Ordered monomial basis of all `α` with `|α| ≤ d` in `n` variables.
pub fn monomial_basis(n: usize, d: usize) -> Result<MonomialBasis> {
    MonomialBasis::new(n, d)
}

/// Binomial coefficient, exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (alpha, &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = alpha
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag:?}")?;
            } else if mag == 1.0 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag:?}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let err = |msg: String| Error::Parse { line: 1, msg };
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        match ch {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '(' => {
                out.push(Token::LParen);
                i += 1
            }
            ')' => {
                out.push(Token::RParen);
                i += 1
            }
            'x' | 'X' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(err(format!("variable at column {} needs an index", i + 1)));
                }
                let idx: usize = text[start..j]
                    .parse()
                    .map_err(|_| err(format!("bad variable index at column {}", i + 1)))?;
                if idx == 0 {
                    return Err(err("variables are numbered from x1".into()));
                }
                out.push(Token::Var(idx - 1));
                i = j;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let v: f64 = text[start..j]
                    .parse()
                    .map_err(|_| err(format!("bad number '{}'", &text[start..j])))?;
                out.push(Token::Num(v));
                i = j;
            }
            other => {
                return Err(err(format!(
                    "unexpected character '{other}' at column {}",
                    i + 1
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    num_vars: usize,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(Token::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Token::Num(e)) if e >= 0.0 && e.fract() == 0.0 => Ok(base.pow(e as u32)),
                _ => Err(self.err("exponent must be a nonnegative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Polynomial::constant(self.num_vars, v)),
            Some(Token::Var(i)) => Ok(Polynomial::var(self.num_vars, i)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(self.err("missing ')'")),
                }
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a polynomial in `x1..xn`.
///
/// Terms are separated by `+`/`-`, factors by `*`, powers use `^` with a
/// nonnegative integer exponent, and parentheses group. When `num_vars` is
/// `None` it is inferred as the largest variable index (at least 1).
pub fn parse_polynomial(text: &str, num_vars: Option<usize>) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "empty polynomial".into(),
        });
    }
    let max_var = tokens
        .iter()
        .filter_map(|t| match t {
            Token::Var(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let n = match num_vars {
        Some(n) if max_var > n => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("variable x{max_var} exceeds declared count {n}"),
            })
        }
        Some(n) => n,
        None => max_var.max(1),
    };
    let mut parser = Parser {
        tokens,
        pos: 0,
        num_vars: n,
    };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.err(format!(
            "trailing input starting at token {:?}",
            parser.tokens[parser.pos]
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, Some(n)).unwrap()
    }

    #[test]
    fn basis_two_vars_degree_two() {
        let b = monomial_basis(2, 2).unwrap();
        let got: Vec<Vec<u32>> = b.entries().iter().map(|a| a.exponents().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        for w in b.entries().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(monomial_basis(5, 0).unwrap().len(), 1);
        assert_eq!(monomial_basis(10, 2).unwrap().len(), 66);
        for n in 1..=6 {
            for d in 0..=4 {
                assert_eq!(monomial_basis(n, d).unwrap().len(), binomial(n + d, d));
            }
        }
        assert!(matches!(monomial_basis(0, 2), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("x1^2 + 2*x1 + 1", 1).eval(&[-1.0]).unwrap(), 0.0);
        assert_eq!(Polynomial::zero(3).eval(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(p("x1*x2 - 3", 2).eval(&[2.0, 5.0]).unwrap(), 7.0);
        assert!(p("x1", 1).eval(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p("x1 + 1", 1) * &p("x1 - 1", 1), p("x1^2 - 1", 1));
        let q = p("3*x1^3 - x1 + 7", 1);
        assert_eq!(&q * &Polynomial::constant(1, 1.0), q);
        let sq = &p("x1 + x2", 2) * &p("x1 + x2", 2);
        assert_eq!(sq.coeff(&MultiIndex::new(vec![2, 0])), 1.0);
        assert_eq!(sq.coeff(&MultiIndex::new(vec![1, 1])), 2.0);
        assert_eq!(sq.coeff(&MultiIndex::new(vec![0, 2])), 1.0);
        assert_eq!(sq.num_terms(), 3);
        assert!(p("x1", 1).try_mul(&p("x1", 2)).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = p("x1^2 + x2", 2);
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn lie_derivative_examples() {
        let v = p("x1^2", 1);
        assert_eq!(lie_derivative(&v, &[p("-x1", 1)]).unwrap(), p("-2*x1^2", 1));

        let v = p("x1^2 + x2^2", 2);
        let rot = [p("x2", 2), p("-x1", 2)];
        assert!(lie_derivative(&v, &rot).unwrap().is_zero());

        let v = p("x1^2", 2);
        let f = [p("-x1^3", 2), Polynomial::zero(2)];
        assert_eq!(lie_derivative(&v, &f).unwrap(), p("-2*x1^4", 2));

        assert!(lie_derivative(&v, &[p("x1", 2)]).is_err());
    }

    #[test]
    fn parse_grammar() {
        let q = p("2*x1^2*x2 - 3*x3 + 1", 3);
        assert_eq!(q.coeff(&MultiIndex::new(vec![2, 1, 0])), 2.0);
        assert_eq!(q.coeff(&MultiIndex::new(vec![0, 0, 1])), -3.0);
        assert_eq!(q.coeff(&MultiIndex::zero(3)), 1.0);
        assert_eq!(q.num_terms(), 3);

        let r = parse_polynomial("(x1^2 + x2^2 - 1)^2", None).unwrap();
        assert_eq!(r.num_vars(), 2);
        assert_eq!(r.coeff(&MultiIndex::new(vec![2, 2])), 2.0);
        assert_eq!(r.coeff(&MultiIndex::new(vec![2, 0])), -2.0);

        assert_eq!(p("1.5e-3*x1", 1).coeff(&MultiIndex::unit(1, 0)), 1.5e-3);
        assert!(parse_polynomial("x0 + 1", None).is_err());
        assert!(parse_polynomial("x1 +", None).is_err());
        assert!(parse_polynomial("x3", Some(2)).is_err());
        assert!(parse_polynomial("x1^1.5", None).is_err());
        assert!(parse_polynomial("y1", None).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["2*x1^2*x2 - 3*x3 + 1", "-x1^4 + 0.25*x1*x2*x3 - 1e-7", "0"] {
            let q = parse_polynomial(s, Some(3)).unwrap();
            let back = parse_polynomial(&q.to_string(), Some(3)).unwrap();
            assert_eq!(q, back, "{s} -> {q}");
        }
    }
}

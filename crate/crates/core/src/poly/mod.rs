//! Multivariate polynomials with complex coefficients and constant-coefficient
//! differential operators evaluated at the origin.
//!
//! Coefficients live in a `BTreeMap` keyed by multi-index, so every sum runs in
//! lexicographic order of the exponents and results are reproducible bit for bit.

pub mod chebyshev;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::ConvexBody;

pub use chebyshev::{
    chebyshev_coefficients, chebyshev_derivative_at_zero, relaxed_coefficient_bound, vam_coefficient_bound,
    MAX_EXACT_DEGREE,
};

/// Exponent vector `β ∈ Z_+^m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(m: usize) -> Self {
        Self(vec![0; m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|β| = Σ β_j`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `β! = Π β_j!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&b| (1..=b).map(f64::from).product::<f64>()).product()
    }

    /// `y^β`.
    pub fn monomial(&self, y: &[f64]) -> f64 {
        self.0.iter().zip(y).map(|(&b, &x)| x.powi(b as i32)).product()
    }

    /// All multi-indices of dimension `m` and order at most `n`, lexicographically sorted.
    pub fn up_to_total_degree(m: usize, n: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; m];
        fn rec(j: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if j == cur.len() {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for b in 0..=budget {
                cur[j] = b;
                rec(j + 1, budget - b, cur, out);
            }
            cur[j] = 0;
        }
        rec(0, n, &mut cur, &mut out);
        out
    }

    /// All multi-indices of dimension `m` with every entry at most `n`, lexicographically sorted.
    pub fn up_to_degree_per_variable(m: usize, n: u32) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(m))];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|b| {
                    (0..=n).map(move |k| {
                        let mut v = b.0.clone();
                        v.push(k);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All multi-indices of dimension `m` and order exactly `n`, lexicographically sorted.
    pub fn of_order(m: usize, n: u32) -> Vec<MultiIndex> {
        Self::up_to_total_degree(m, n).into_iter().filter(|b| b.order() == n).collect()
    }
}

/// `P(y) = Σ_{|β|≤n} c_β y^β`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    m: usize,
    n: u32,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl Polynomial {
    pub fn zero(m: usize, n: u32) -> Self {
        Self { m, n, coeffs: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: Complex64) -> Self {
        let mut p = Self::zero(m, 0);
        if c != Complex64::new(0.0, 0.0) {
            p.coeffs.insert(MultiIndex::zero(m), c);
        }
        p
    }

    /// Builds a polynomial from `(β, c_β)` pairs; repeated keys are summed.
    pub fn from_terms(m: usize, n: u32, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(m, n);
        for (beta, c) in terms {
            p.add_term(beta, c)?;
        }
        Ok(p)
    }

    /// Real coefficients given in ascending powers of a univariate polynomial.
    pub fn univariate(coeffs: &[f64]) -> Self {
        let n = coeffs.len().saturating_sub(1) as u32;
        let mut p = Self::zero(1, n);
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                p.coeffs.insert(MultiIndex(vec![k as u32]), Complex64::new(c, 0.0));
            }
        }
        p
    }

    pub fn add_term(&mut self, beta: MultiIndex, c: Complex64) -> Result<()> {
        check_dim(self.m, beta.dim())?;
        if beta.order() > self.n {
            return Err(Error::InvalidInput(format!(
                "term {:?} exceeds the total degree bound {}",
                beta.0, self.n
            )));
        }
        *self.coeffs.entry(beta).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn degree_bound(&self) -> u32 {
        self.n
    }

    pub fn coeff(&self, beta: &MultiIndex) -> Complex64 {
        self.coeffs.get(beta).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, y: &[f64]) -> Result<Complex64> {
        check_dim(self.m, y.len())?;
        Ok(self.eval_unchecked(y))
    }

    pub(crate) fn eval_unchecked(&self, y: &[f64]) -> Complex64 {
        // Power tables avoid repeated powi calls.
        let powers: Vec<Vec<f64>> = y
            .iter()
            .map(|&x| {
                let mut v = Vec::with_capacity(self.n as usize + 1);
                let mut acc = 1.0;
                for _ in 0..=self.n {
                    v.push(acc);
                    acc *= x;
                }
                v
            })
            .collect();
        self.coeffs
            .iter()
            .map(|(beta, c)| {
                let mono: f64 = beta.0.iter().enumerate().map(|(j, &b)| powers[j][b as usize]).product();
                c * mono
            })
            .sum()
    }

    /// The block `Σ_{|β|=k} c_β y^β`.
    pub fn homogeneous_part(&self, k: u32) -> Result<Polynomial> {
        if k > self.n {
            return Err(Error::InvalidInput(format!("k = {k} exceeds the degree bound {}", self.n)));
        }
        Ok(Self {
            m: self.m,
            n: self.n,
            coeffs: self.coeffs.iter().filter(|(b, _)| b.order() == k).map(|(b, c)| (b.clone(), *c)).collect(),
        })
    }

    /// `Q(y) = P(y/s)`.
    pub fn rescale(&self, s: f64) -> Result<Polynomial> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidInput(format!("rescale factor must be positive, got {s}")));
        }
        Ok(Self {
            m: self.m,
            n: self.n,
            coeffs: self.coeffs.iter().map(|(b, c)| (b.clone(), c / s.powi(b.order() as i32))).collect(),
        })
    }

    /// `D^α P`.
    pub fn differentiate(&self, alpha: &MultiIndex) -> Result<Polynomial> {
        check_dim(self.m, alpha.dim())?;
        let n = self.n.saturating_sub(alpha.order());
        let mut out = Self::zero(self.m, n);
        for (beta, c) in &self.coeffs {
            if beta.0.iter().zip(&alpha.0).any(|(b, a)| b < a) {
                continue;
            }
            let mut factor = 1.0;
            let reduced: Vec<u32> = beta
                .0
                .iter()
                .zip(&alpha.0)
                .map(|(&b, &a)| {
                    factor *= ((b - a + 1)..=b).map(f64::from).product::<f64>();
                    b - a
                })
                .collect();
            out.coeffs.insert(MultiIndex(reduced), c * factor);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Self { m: self.m, n: self.n, coeffs: self.coeffs.iter().map(|(b, c)| (b.clone(), c * s)).collect() }
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &Polynomial, b: Complex64) -> Result<Polynomial> {
        check_dim(self.m, other.m)?;
        let mut out = Self::zero(self.m, self.n.max(other.n));
        for (beta, c) in &self.coeffs {
            out.add_term(beta.clone(), a * c)?;
        }
        for (beta, c) in &other.coeffs {
            out.add_term(beta.clone(), b * c)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            m: self.m,
            n: self.n,
            terms: self
                .coeffs
                .iter()
                .map(|(b, c)| TermJson { beta: b.0.clone(), re: c.re, im: c.im })
                .collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson) -> Result<Self> {
        Self::from_terms(
            json.m,
            json.n,
            json.terms.iter().map(|t| (MultiIndex(t.beta.clone()), Complex64::new(t.re, t.im))),
        )
    }
}

/// `D_N = Σ_{|α|=N} b_α D^α`; order zero is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator {
    m: usize,
    order: u32,
    weights: BTreeMap<MultiIndex, Complex64>,
}

impl DiffOperator {
    pub fn identity(m: usize) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(MultiIndex::zero(m), Complex64::new(1.0, 0.0));
        Self { m, order: 0, weights }
    }

    /// The single partial derivative `D^α`.
    pub fn partial(alpha: MultiIndex) -> Self {
        let m = alpha.dim();
        let order = alpha.order();
        let mut weights = BTreeMap::new();
        weights.insert(alpha, Complex64::new(1.0, 0.0));
        Self { m, order, weights }
    }

    /// `d^N/dy_1^N` in dimension `m`.
    pub fn pure(m: usize, order: u32) -> Self {
        let mut alpha = vec![0; m];
        alpha[0] = order;
        Self::partial(MultiIndex(alpha))
    }

    /// The Laplacian `Σ_j ∂²/∂y_j²`.
    pub fn laplacian(m: usize) -> Self {
        let mut weights = BTreeMap::new();
        for j in 0..m {
            let mut a = vec![0; m];
            a[j] = 2;
            weights.insert(MultiIndex(a), Complex64::new(1.0, 0.0));
        }
        Self { m, order: 2, weights }
    }

    pub fn new(m: usize, order: u32, weights: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (alpha, b) in weights {
            check_dim(m, alpha.dim())?;
            if alpha.order() != order {
                return Err(Error::InvalidInput(format!(
                    "operator term {:?} has order {} but N = {order}",
                    alpha.0,
                    alpha.order()
                )));
            }
            *map.entry(alpha).or_insert(Complex64::new(0.0, 0.0)) += b;
        }
        if order == 0 && map.values().any(|b| *b != Complex64::new(1.0, 0.0)) {
            return Err(Error::InvalidInput("an order-zero operator must be the identity".into()));
        }
        if map.is_empty() {
            return Err(Error::InvalidInput("operator has no terms".into()));
        }
        Ok(Self { m, order, weights: map })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn weights(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.weights.iter()
    }

    pub fn has_real_weights(&self) -> bool {
        self.weights.values().all(|b| b.im == 0.0)
    }

    /// `D_N(P)(0) = Σ_{|α|=N} b_α α! c_α`.
    pub fn derivative_at_zero(&self, p: &Polynomial) -> Result<Complex64> {
        check_dim(self.m, p.dim())?;
        Ok(self.weights.iter().map(|(alpha, b)| b * alpha.factorial() * p.coeff(alpha)).sum())
    }

    /// `Σ b_α k^α`, the symbol of the operator without the `i^N` factor.
    pub fn symbol(&self, k: &[f64]) -> Complex64 {
        self.weights.iter().map(|(alpha, b)| b * alpha.monomial(k)).sum()
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            m: self.m,
            n: self.order,
            terms: self
                .weights
                .iter()
                .map(|(a, b)| TermJson { beta: a.0.clone(), re: b.re, im: b.im })
                .collect(),
        }
    }

    /// Reads an operator; the `n` field carries the order `N`.
    pub fn from_json(json: &PolynomialJson) -> Result<Self> {
        Self::new(
            json.m,
            json.n,
            json.terms.iter().map(|t| (MultiIndex(t.beta.clone()), Complex64::new(t.re, t.im))),
        )
    }
}

/// Convenience free function mirroring [`DiffOperator::derivative_at_zero`].
pub fn derivative_at_zero(d: &DiffOperator, p: &Polynomial) -> Result<Complex64> {
    d.derivative_at_zero(p)
}

/// Exchange format `{"m":…, "n":…, "terms":[{"beta":[…],"re":…,"im":…},…]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub m: usize,
    pub n: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub beta: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Checks the real-variable homogeneous-block bound
/// `|Σ_{|β|=k} c_β y^β| ≤ (n‖y‖_V*)^k / (k! a^k) · ‖P‖_{L∞(aV*)}`
/// with a relative slack of `1e-8`. `sup_estimate` approximates the sup norm on `aV*`.
pub fn homogeneous_bound_check(
    p: &Polynomial,
    body: &ConvexBody,
    a: f64,
    y: &[f64],
    k: u32,
    sup_estimate: f64,
) -> Result<bool> {
    let block = p.homogeneous_part(k)?.eval(y)?.norm();
    let n = f64::from(p.degree_bound());
    let dual = body.dual_norm(y)?;
    let factorial: f64 = (1..=k).map(f64::from).product();
    let bound = (n * dual / a).powi(k as i32) / factorial * sup_estimate;
    Ok(block <= bound * (1.0 + 1e-8))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn eval_examples() {
        let one = Polynomial::constant(2, c(1.0));
        assert_eq!(one.eval(&[3.0, -7.0]).unwrap(), c(1.0));
        let p = Polynomial::from_terms(2, 2, [(mi(&[1, 1]), c(1.0))]).unwrap();
        assert_eq!(p.eval(&[2.0, 3.0]).unwrap(), c(6.0));
        let t3 = Polynomial::univariate(&[0.0, -3.0, 0.0, 4.0]);
        assert_eq!(t3.eval(&[0.5]).unwrap(), c(-1.0));
        assert!(matches!(t3.eval(&[0.5, 1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn derivative_at_zero_examples() {
        let p = Polynomial::from_terms(2, 2, [(mi(&[0, 0]), c(5.0)), (mi(&[2, 0]), c(1.0))]).unwrap();
        assert_eq!(DiffOperator::identity(2).derivative_at_zero(&p).unwrap(), c(5.0));
        assert_eq!(DiffOperator::partial(mi(&[2, 0])).derivative_at_zero(&p).unwrap(), c(2.0));
        let q = Polynomial::from_terms(2, 2, [(mi(&[2, 0]), c(1.0)), (mi(&[0, 2]), c(1.0))]).unwrap();
        assert_eq!(DiffOperator::laplacian(2).derivative_at_zero(&q).unwrap(), c(4.0));
        // Operator of higher order than the polynomial reads zero.
        assert_eq!(DiffOperator::pure(2, 3).derivative_at_zero(&q).unwrap(), c(0.0));
        assert!(DiffOperator::pure(1, 1).derivative_at_zero(&q).is_err());
    }

    #[test]
    fn homogeneous_part_examples() {
        let p = Polynomial::from_terms(2, 2, [(mi(&[0, 0]), c(1.0)), (mi(&[1, 0]), c(1.0)), (mi(&[1, 1]), c(1.0))])
            .unwrap();
        let h2 = p.homogeneous_part(2).unwrap();
        assert_eq!(h2.terms().count(), 1);
        assert_eq!(h2.coeff(&mi(&[1, 1])), c(1.0));
        assert_eq!(p.homogeneous_part(0).unwrap().coeff(&mi(&[0, 0])), c(1.0));
        assert!(p.homogeneous_part(3).is_err());
        let t4 = Polynomial::univariate(&[1.0, 0.0, -8.0, 0.0, 8.0]);
        let h = t4.homogeneous_part(2).unwrap();
        assert_eq!(h.coeff(&mi(&[2])), c(-8.0));
        assert_eq!(h.terms().count(), 1);
    }

    #[test]
    fn rescale_examples() {
        let p = Polynomial::from_terms(1, 2, [(mi(&[2]), c(1.0))]).unwrap();
        assert_eq!(p.rescale(1.0).unwrap(), p);
        assert_eq!(p.rescale(2.0).unwrap().coeff(&mi(&[2])), c(0.25));
        assert!(p.rescale(0.0).is_err());
        assert!(p.rescale(-1.0).is_err());
    }

    #[test]
    fn differentiate_monomials() {
        let p = Polynomial::from_terms(2, 3, [(mi(&[2, 1]), c(3.0)), (mi(&[0, 1]), c(1.0))]).unwrap();
        let d = p.differentiate(&mi(&[1, 1])).unwrap();
        assert_eq!(d.coeff(&mi(&[1, 0])), c(6.0));
        assert_eq!(d.terms().count(), 1);
    }

    #[test]
    fn operator_validation() {
        assert!(DiffOperator::new(2, 2, [(mi(&[1, 0]), c(1.0))]).is_err());
        assert!(DiffOperator::new(2, 0, [(mi(&[0, 0]), c(2.0))]).is_err());
        assert!(DiffOperator::new(2, 1, []).is_err());
        let d = DiffOperator::new(2, 1, [(mi(&[1, 0]), c(1.0)), (mi(&[0, 1]), c(-2.0))]).unwrap();
        assert_eq!(DiffOperator::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn polynomial_json_schema() {
        let p = Polynomial::from_terms(2, 3, [(mi(&[1, 2]), Complex64::new(1.5, -0.5))]).unwrap();
        let text = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(text, r#"{"m":2,"n":3,"terms":[{"beta":[1,2],"re":1.5,"im":-0.5}]}"#);
        let back: PolynomialJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Polynomial::from_json(&back).unwrap(), p);
        let bad: PolynomialJson = serde_json::from_str(r#"{"m":1,"n":1,"terms":[{"beta":[2],"re":1}]}"#).unwrap();
        assert!(Polynomial::from_json(&bad).is_err());
    }

    #[test]
    fn multi_index_enumeration() {
        let all = MultiIndex::up_to_total_degree(2, 3);
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(MultiIndex::up_to_total_degree(3, 4).len(), 35);
        assert_eq!(MultiIndex::up_to_degree_per_variable(2, 3).len(), 16);
        assert_eq!(MultiIndex::of_order(2, 2), vec![mi(&[0, 2]), mi(&[1, 1]), mi(&[2, 0])]);
    }

    #[test]
    fn homogeneous_bound_degenerate_cases() {
        let body = ConvexBody::interval(1.0).unwrap();
        let p = Polynomial::constant(1, c(-3.0));
        assert!(homogeneous_bound_check(&p, &body, 1.0, &[0.4], 0, 3.0).unwrap());
        // Leading coefficient of T_n against n^n / n!.
        for n in 1..=12u32 {
            let coeffs: Vec<f64> = chebyshev_coefficients(n).unwrap().iter().map(|&x| x as f64).collect();
            let t = Polynomial::univariate(&coeffs);
            assert!(homogeneous_bound_check(&t, &body, 1.0, &[1.0], n, 1.0).unwrap());
        }
    }
}

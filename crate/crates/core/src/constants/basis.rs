//! Bases in which the extremal problems are solved.
//!
//! Algebraic polynomials of total degree `≤ n` are represented in the scaled
//! tensor Chebyshev basis `φ_β(y) = ∏_j T_{β_j}(y_j / s_j)`, with `s_j` the extent
//! of the domain along axis `j`. Unlike monomials this stays well conditioned for
//! high degree; monomial coefficients are produced only for export.
//! Trigonometric polynomials use the real basis `{cos k·x, sin k·x}` over half
//! of a symmetric frequency set.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::poly::{DiffOperator, MultiIndex, Polynomial};

/// A finite family of real functions on `R^m`.
pub(crate) trait Basis {
    fn dim(&self) -> usize;
    fn len(&self) -> usize;
    /// Writes every basis function's value at `x` into `out`.
    fn eval_into(&self, x: &[f64], out: &mut [f64]);
    /// `D(φ)(0)` for each basis function `φ`.
    fn functional(&self, op: &DiffOperator) -> Result<Vec<Complex64>>;
}

/// Coefficients of `T_0, …, T_n` in ascending powers, in floating point.
fn chebyshev_table(n: usize) -> Vec<Vec<f64>> {
    let mut table = vec![vec![1.0]];
    if n >= 1 {
        table.push(vec![0.0, 1.0]);
    }
    for k in 2..=n {
        let mut next = vec![0.0; k + 1];
        for (i, c) in table[k - 1].iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in table[k - 2].iter().enumerate() {
            next[i] -= c;
        }
        table.push(next);
    }
    table
}

/// Scaled tensor Chebyshev basis of total degree `≤ n`, indices in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevBasis {
    degree: u32,
    scales: Vec<f64>,
    indices: Vec<MultiIndex>,
}

impl ChebyshevBasis {
    pub fn new(degree: u32, scales: Vec<f64>) -> Result<Self> {
        Self::with_indices(degree, scales.clone(), MultiIndex::up_to_total_degree(scales.len(), degree))
    }

    /// Tensor basis of degree `≤ n` in each variable.
    pub fn per_variable(degree: u32, scales: Vec<f64>) -> Result<Self> {
        Self::with_indices(degree, scales.clone(), MultiIndex::up_to_degree_per_variable(scales.len(), degree))
    }

    fn with_indices(degree: u32, scales: Vec<f64>, indices: Vec<MultiIndex>) -> Result<Self> {
        if scales.is_empty() || scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidInput(format!("basis scales must be positive, got {scales:?}")));
        }
        Ok(Self { degree, scales, indices })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// The basis of `y ↦ φ_β(y / c)`.
    pub fn dilated(&self, c: f64) -> Self {
        Self {
            degree: self.degree,
            scales: self.scales.iter().map(|s| s * c).collect(),
            indices: self.indices.clone(),
        }
    }

    /// `Σ c_β φ_β` in monomial form. Exact in exact arithmetic; for high degree
    /// the monomial coefficients are large and evaluation from them loses accuracy.
    pub fn to_polynomial(&self, coeffs: &[Complex64]) -> Result<Polynomial> {
        check_dim(self.indices.len(), coeffs.len())?;
        let m = self.scales.len();
        let table = chebyshev_table(self.degree as usize);
        let mut poly = Polynomial::zero(m, self.degree);
        for (beta, &c) in self.indices.iter().zip(coeffs) {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            // Expand ∏_j T_{β_j}(y_j/s_j) term by term.
            let mut terms: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), 1.0)];
            for (j, &b) in beta.0.iter().enumerate() {
                let row = &table[b as usize];
                let mut next = Vec::new();
                for (gamma, v) in &terms {
                    for (k, t) in row.iter().enumerate() {
                        if *t != 0.0 {
                            let mut g = gamma.clone();
                            g.push(k as u32);
                            next.push((g, v * t / self.scales[j].powi(k as i32)));
                        }
                    }
                }
                terms = next;
            }
            for (gamma, v) in terms {
                poly.add_term(MultiIndex(gamma), c * v)?;
            }
        }
        Ok(poly)
    }
}

impl Basis for ChebyshevBasis {
    fn dim(&self) -> usize {
        self.scales.len()
    }

    fn len(&self) -> usize {
        self.indices.len()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.degree as usize;
        let mut values = Vec::with_capacity(x.len());
        for (xj, sj) in x.iter().zip(&self.scales) {
            let t = xj / sj;
            let mut v = Vec::with_capacity(n + 1);
            v.push(1.0);
            if n >= 1 {
                v.push(t);
            }
            for k in 2..=n {
                v.push(2.0 * t * v[k - 1] - v[k - 2]);
            }
            values.push(v);
        }
        for (o, beta) in out.iter_mut().zip(&self.indices) {
            *o = beta.0.iter().enumerate().map(|(j, &b)| values[j][b as usize]).product();
        }
    }

    fn functional(&self, op: &DiffOperator) -> Result<Vec<Complex64>> {
        check_dim(self.dim(), op.dim())?;
        let table = chebyshev_table(self.degree as usize);
        Ok(self
            .indices
            .iter()
            .map(|beta| {
                op.weights()
                    .map(|(alpha, b)| {
                        let d: f64 = beta
                            .0
                            .iter()
                            .zip(&alpha.0)
                            .zip(&self.scales)
                            .map(|((&bj, &aj), &sj)| {
                                let t = table[bj as usize].get(aj as usize).copied().unwrap_or(0.0);
                                let fact: f64 = (1..=aj).map(f64::from).product();
                                fact * t / sj.powi(aj as i32)
                            })
                            .product();
                        b * d
                    })
                    .sum()
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigPart {
    Cos,
    Sin,
}

/// Real trigonometric basis: `1`, and `cos k·x`, `sin k·x` for one representative of each pair `±k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigBasis {
    dim: usize,
    elements: Vec<(Vec<i64>, TrigPart)>,
}

impl TrigBasis {
    /// Builds the basis spanned by `e^{ik·x}` for the given frequency set, which must be symmetric under `k ↦ -k`.
    pub fn from_frequencies(dim: usize, freqs: &[Vec<i64>]) -> Result<Self> {
        let mut elements = Vec::new();
        for k in freqs {
            check_dim(dim, k.len())?;
            let neg: Vec<i64> = k.iter().map(|v| -v).collect();
            if !freqs.contains(&neg) {
                return Err(Error::InvalidInput(format!("frequency set is not symmetric at {k:?}")));
            }
            match k.iter().find(|v| **v != 0) {
                None => elements.push((k.clone(), TrigPart::Cos)),
                Some(v) if *v > 0 => {
                    elements.push((k.clone(), TrigPart::Cos));
                    elements.push((k.clone(), TrigPart::Sin));
                }
                Some(_) => {}
            }
        }
        if elements.is_empty() {
            return Err(Error::InvalidInput("empty frequency set".into()));
        }
        Ok(Self { dim, elements })
    }

    pub fn elements(&self) -> &[(Vec<i64>, TrigPart)] {
        &self.elements
    }

    pub fn max_frequency(&self) -> i64 {
        self.elements.iter().flat_map(|(k, _)| k.iter().map(|v| v.abs())).max().unwrap_or(0)
    }
}

impl Basis for TrigBasis {
    fn dim(&self) -> usize {
        self.dim
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, (k, part)) in out.iter_mut().zip(&self.elements) {
            let phase: f64 = k.iter().zip(x).map(|(&kj, &xj)| kj as f64 * xj).sum();
            *o = match part {
                TrigPart::Cos => phase.cos(),
                TrigPart::Sin => phase.sin(),
            };
        }
    }

    fn functional(&self, op: &DiffOperator) -> Result<Vec<Complex64>> {
        check_dim(self.dim, op.dim())?;
        let i = Complex64::new(0.0, 1.0);
        let order = op.order() as i32;
        let plus = i.powi(order);
        let minus = (-i).powi(order);
        Ok(self
            .elements
            .iter()
            .map(|(k, part)| {
                let kf: Vec<f64> = k.iter().map(|&v| v as f64).collect();
                let symbol = op.symbol(&kf);
                match part {
                    TrigPart::Cos => symbol * (plus + minus) * 0.5,
                    TrigPart::Sin => symbol * (plus - minus) / (2.0 * i),
                }
            })
            .collect())
    }
}

/// Values of every basis function at every point, one row per point.
pub(crate) fn design_matrix(basis: &dyn Basis, points: &[Vec<f64>]) -> nalgebra::DMatrix<f64> {
    let b = basis.len();
    let mut rows = vec![0.0; points.len() * b];
    for (row, x) in rows.chunks_mut(b).zip(points) {
        basis.eval_into(x, row);
    }
    nalgebra::DMatrix::from_row_slice(points.len(), b, &rows)
}

/// `Σ c_i φ_i(x)`.
pub(crate) fn eval_combination(basis: &dyn Basis, coeffs: &[Complex64], x: &[f64]) -> Complex64 {
    let mut vals = vec![0.0; basis.len()];
    basis.eval_into(x, &mut vals);
    vals.iter().zip(coeffs).map(|(v, c)| c * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_basis_functional_matches_monomial_form() {
        let basis = ChebyshevBasis::new(4, vec![1.0, 0.5]).unwrap();
        let coeffs: Vec<Complex64> =
            (0..basis.len()).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64).cos() * 0.1)).collect();
        let poly = basis.to_polynomial(&coeffs).unwrap();
        for op in [
            DiffOperator::identity(2),
            DiffOperator::laplacian(2),
            DiffOperator::partial(MultiIndex(vec![1, 2])),
        ] {
            let ell = basis.functional(&op).unwrap();
            let lc: Complex64 = ell.iter().zip(&coeffs).map(|(l, c)| l * c).sum();
            let direct = op.derivative_at_zero(&poly).unwrap();
            assert!((lc - direct).norm() < 1e-10, "{lc} vs {direct}");
        }
        let x = [0.3, -0.2];
        let direct = poly.eval(&x).unwrap();
        assert!((eval_combination(&basis, &coeffs, &x) - direct).norm() < 1e-12);
    }

    #[test]
    fn trig_basis_functional() {
        let freqs: Vec<Vec<i64>> = (-2..=2).map(|k| vec![k]).collect();
        let basis = TrigBasis::from_frequencies(1, &freqs).unwrap();
        assert_eq!(basis.len(), 5);
        let d1 = basis.functional(&DiffOperator::pure(1, 1)).unwrap();
        for ((k, part), l) in basis.elements().iter().zip(&d1) {
            let expect = match part {
                TrigPart::Cos => 0.0,
                TrigPart::Sin => k[0] as f64,
            };
            assert!((l - Complex64::new(expect, 0.0)).norm() < 1e-15);
        }
        let d2 = basis.functional(&DiffOperator::pure(1, 2)).unwrap();
        for ((k, part), l) in basis.elements().iter().zip(&d2) {
            let expect = match part {
                TrigPart::Cos => -(k[0] * k[0]) as f64,
                TrigPart::Sin => 0.0,
            };
            assert!((l - Complex64::new(expect, 0.0)).norm() < 1e-14);
        }
        assert!(TrigBasis::from_frequencies(1, &[vec![1], vec![0]]).is_err());
    }
}

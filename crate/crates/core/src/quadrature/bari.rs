//! The cosine change of variables mapping a sub-box of `[0, π]^m` onto `[0, π]^m`,
//! and the sup-versus-`L_p` comparison for even trigonometric polynomials on nested boxes.
//!
//! Both directions use half-angle forms, `sin²(t/2) = (cos a - cos u)/(cos a - cos b)`,
//! so that the map keeps full relative accuracy near the endpoints.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{lp_quasinorm, QuadratureRule};
use crate::error::{check_dim, Error, Result};
use crate::exponent::Exponent;

/// Nested boxes `∏[a1_j, b1_j] ⊂ ∏(a_j, b_j) ⊂ [0, π]^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedBoxes {
    pub outer_lo: Vec<f64>,
    pub outer_hi: Vec<f64>,
    pub inner_lo: Vec<f64>,
    pub inner_hi: Vec<f64>,
}

impl NestedBoxes {
    /// Validates `0 ≤ a_j < a1_j ≤ b1_j < b_j ≤ π`.
    pub fn new(outer_lo: Vec<f64>, outer_hi: Vec<f64>, inner_lo: Vec<f64>, inner_hi: Vec<f64>) -> Result<Self> {
        let m = outer_lo.len();
        for v in [&outer_hi, &inner_lo, &inner_hi] {
            check_dim(m, v.len())?;
        }
        for j in 0..m {
            let (a, b, a1, b1) = (outer_lo[j], outer_hi[j], inner_lo[j], inner_hi[j]);
            if !(0.0 <= a && a < a1 && a1 <= b1 && b1 < b && b <= std::f64::consts::PI) {
                return Err(Error::InvalidInput(format!(
                    "boxes must satisfy 0 <= a < a1 <= b1 < b <= pi in coordinate {j}, got ({a}, {b}, {a1}, {b1})"
                )));
            }
        }
        Ok(Self { outer_lo, outer_hi, inner_lo, inner_hi })
    }

    pub fn dim(&self) -> usize {
        self.outer_lo.len()
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a < b && b <= std::f64::consts::PI) {
        return Err(Error::InvalidInput(format!("interval must satisfy 0 <= a < b <= pi, got [{a}, {b}]")));
    }
    Ok(())
}

/// `sin((a+b)/2)·sin((b-a)/2) = (cos a - cos b)/2`.
fn half_gap(a: f64, b: f64) -> f64 {
    (0.5 * (a + b)).sin() * (0.5 * (b - a)).sin()
}

/// Maps `u ∈ ∏[a_j, b_j]` to `t ∈ [0, π]^m` with
/// `cos u_j = ((cos a_j - cos b_j)/2) cos t_j + (cos a_j + cos b_j)/2`.
pub fn bari_substitution(u: &[f64], a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check_dim(u.len(), a.len())?;
    check_dim(u.len(), b.len())?;
    u.iter()
        .zip(a.iter().zip(b))
        .map(|(&u, (&a, &b))| {
            check_interval(a, b)?;
            if !(a <= u && u <= b) {
                return Err(Error::InvalidInput(format!("point {u} lies outside [{a}, {b}]")));
            }
            let d = half_gap(a, b);
            let s2 = ((0.5 * (u + a)).sin() * (0.5 * (u - a)).sin() / d).max(0.0);
            let c2 = ((0.5 * (b + u)).sin() * (0.5 * (b - u)).sin() / d).max(0.0);
            Ok(2.0 * s2.sqrt().atan2(c2.sqrt()))
        })
        .collect()
}

/// Inverse of [`bari_substitution`].
pub fn bari_inverse(t: &[f64], a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    check_dim(t.len(), a.len())?;
    check_dim(t.len(), b.len())?;
    t.iter()
        .zip(a.iter().zip(b))
        .map(|(&t, (&a, &b))| {
            check_interval(a, b)?;
            if !(0.0..=std::f64::consts::PI).contains(&t) {
                return Err(Error::InvalidInput(format!("parameter {t} lies outside [0, pi]")));
            }
            let d = half_gap(a, b);
            let s2 = (0.5 * a).sin().powi(2) + d * (0.5 * t).sin().powi(2);
            let c2 = (0.5 * b).cos().powi(2) + d * (0.5 * t).cos().powi(2);
            Ok(2.0 * s2.sqrt().atan2(c2.sqrt()))
        })
        .collect()
}

/// `T(u) = Σ_k c_k ∏_j cos(k_j u_j)` with `0 ≤ k_j ≤ n`: even in each variable by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosinePolynomial {
    dim: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, f64)>,
}

impl CosinePolynomial {
    pub fn new(dim: usize, degree: u32, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (k, c) in &terms {
            check_dim(dim, k.len())?;
            if k.iter().any(|&kj| kj > degree) {
                return Err(Error::InvalidInput(format!("frequency {k:?} exceeds degree {degree}")));
            }
            if !c.is_finite() {
                return Err(Error::InvalidInput("coefficients must be finite".into()));
            }
        }
        Ok(Self { dim, degree, terms })
    }

    /// A single product `∏ cos(k_j u_j)`.
    pub fn monomial(freq: Vec<u32>) -> Result<Self> {
        let degree = freq.iter().copied().max().unwrap_or(0);
        Self::new(freq.len(), degree, vec![(freq, 1.0)])
    }

    /// All frequencies in `{0..n}^m` with coefficients uniform in `[-1, 1]`.
    pub fn random(dim: usize, degree: u32, rng: &mut impl Rng) -> Result<Self> {
        let side = degree as usize + 1;
        let count = side.pow(dim as u32);
        let terms = (0..count)
            .map(|idx| {
                let mut rest = idx;
                let k = (0..dim)
                    .map(|_| {
                        let v = (rest % side) as u32;
                        rest /= side;
                        v
                    })
                    .collect();
                (k, rng.gen_range(-1.0..1.0))
            })
            .collect();
        Self::new(dim, degree, terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(k, c)| c * k.iter().zip(u).map(|(&kj, &uj)| (f64::from(kj) * uj).cos()).product::<f64>())
            .sum()
    }
}

/// Measures `‖T‖_{L_∞(inner)} / (n^{m/p} ‖T‖_{L_p(outer)})`.
///
/// The sup is a uniform grid maximum with `grid` points per axis on the inner
/// box; the outer norm uses composite Gauss rules with at least `grid` nodes per axis.
pub fn bari_inequality_check(
    poly: &CosinePolynomial,
    degree: u32,
    boxes: &NestedBoxes,
    p: Exponent,
    grid: usize,
) -> Result<f64> {
    check_dim(boxes.dim(), poly.dim())?;
    if degree == 0 || poly.degree() > degree {
        return Err(Error::InvalidInput(format!(
            "degree {degree} must be positive and bound the polynomial degree {}",
            poly.degree()
        )));
    }
    let Exponent::Finite(pv) = p else {
        return Err(Error::InvalidInput("the comparison needs a finite exponent".into()));
    };
    if grid < 2 {
        return Err(Error::Config("grid must have at least two points per axis".into()));
    }
    let m = boxes.dim();
    let axes: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let (lo, hi) = (boxes.inner_lo[j], boxes.inner_hi[j]);
            if lo == hi {
                vec![lo]
            } else {
                (0..grid).map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64).collect()
            }
        })
        .collect();
    let mut sup = 0.0f64;
    let mut idx = vec![0usize; m];
    let mut pt = vec![0.0; m];
    'outer: loop {
        for j in 0..m {
            pt[j] = axes[j][idx[j]];
        }
        sup = sup.max(poly.eval(&pt).abs());
        for j in 0..m {
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                continue 'outer;
            }
            idx[j] = 0;
        }
        break;
    }
    const NODES_PER_PANEL: usize = 8;
    let panels = grid.div_ceil(NODES_PER_PANEL).max(degree as usize);
    let rule = QuadratureRule::tensor_composite(&boxes.outer_lo, &boxes.outer_hi, NODES_PER_PANEL, panels)?;
    let norm = lp_quasinorm(|u| poly.eval(u).into(), &rule, p)?.value;
    if norm == 0.0 {
        return Err(Error::InvalidInput("polynomial vanishes on the outer box".into()));
    }
    Ok(sup / (f64::from(degree).powf(m as f64 / pv) * norm))
}

//! Sharp constants of Markov–Bernstein–Nikolskii type inequalities.
//!
//! * [`polynomial_constant`]: `n^{-N-m/p} · sup_P |D(P)(0)| / ‖P‖_{L_p(V*)}` over
//!   polynomials of total degree `≤ n`.
//! * [`trigonometric_constant`]: `a^{-N-m/p} · sup_T |D(T)(0)| / ‖T‖_{L_p(torus)}` over
//!   trigonometric polynomials with frequencies in `aV ∩ Z^m`.
//! * [`different_metrics_constant`]: `n^{-μ} · sup_P ‖P‖_{L_∞(V*)} / ‖P‖_{L_p(V*)}`.
//! * [`estimate_limit`]: extrapolation of a sequence of constants as `n → ∞`.
//!
//! The supremum over polynomials is the norm of a linear functional, computed by
//! the solvers in `solver`. All reported values are ratios attained by the
//! returned extremal function on the discretized norm, i.e. lower bounds for the
//! discretized supremum; grid sensitivity is reported through a recomputation at
//! doubled resolution.

pub mod basis;
mod solver;

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::exponent::Exponent;
use crate::geometry::ConvexBody;
use crate::poly::{DiffOperator, Polynomial};
use crate::quadrature::{build_rule_body, build_rule_body_with, lp_quasinorm, NodeScheme, QuadratureRule};

pub use basis::{ChebyshevBasis, TrigBasis, TrigPart};
use basis::{design_matrix, eval_combination, Basis};
pub use solver::{Field, Method, RESTARTS};
use solver::{solve_finite, solve_sup, sup_norm, RawSolution, SupGrid};

/// Relative change under grid doubling above which a result is flagged unstable.
pub const STABILITY_TOLERANCE: f64 = 5e-3;
/// Default radial node count of body rules.
pub const DEFAULT_RADIAL: usize = 48;
/// Number of best candidate peak points re-solved exactly for `p ≠ 2`.
const PEAK_SHORTLIST: usize = 8;

/// Node counts of a body rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub radial: usize,
    pub angular: usize,
}

impl Resolution {
    /// 48 radial nodes; 256 angles in the plane, 64×64 directions in space.
    pub fn default_for(dim: usize) -> Self {
        let angular = match dim {
            1 => 0,
            2 => 256,
            _ => 64,
        };
        Self { radial: DEFAULT_RADIAL, angular }
    }

    pub fn doubled(self) -> Self {
        Self { radial: 2 * self.radial, angular: 2 * self.angular }
    }

    /// Raises the counts to what degree `n` needs: `p = 2` Gram matrices are exact
    /// with `2n + 8` radial nodes; other exponents get `4n + 16` to resolve `|P|^p`.
    /// Angular counts are at least `4n + 16`.
    pub fn floored(self, n: u32, p: Exponent, dim: usize) -> Self {
        let n = n as usize;
        let radial_floor = if p == Exponent::Finite(2.0) { 2 * n + 8 } else { 4 * n + 16 };
        let angular = if dim == 1 { self.angular } else { self.angular.max(4 * n + 16) };
        Self { radial: self.radial.max(radial_floor), angular }
    }
}

/// Discretization the reported value was computed on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "grid", rename_all = "lowercase")]
pub enum GridInfo {
    Body { radial: usize, angular: usize, scheme: NodeScheme },
    Torus { per_axis: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub grid: GridInfo,
    pub nodes: usize,
    pub iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Normalizing power of `n` (or `a`) applied to the functional norm.
    pub prefactor: f64,
    /// Relative change against the same computation at half the resolution.
    pub stability_delta: Option<f64>,
    pub unstable: bool,
}

/// Which constant a result holds; serialized as `"M"`, `"P"`, `"N"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstantKind {
    #[serde(rename = "M")]
    Polynomial,
    #[serde(rename = "P")]
    Trigonometric,
    #[serde(rename = "N")]
    DifferentMetrics,
}

impl std::fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConstantKind::Polynomial => "M",
            ConstantKind::Trigonometric => "P",
            ConstantKind::DifferentMetrics => "N",
        })
    }
}

/// The maximizer behind a constant, in the basis it was computed in.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtremalFunction {
    Algebraic { basis: ChebyshevBasis, coeffs: Vec<Complex64> },
    Trigonometric { basis: TrigBasis, coeffs: Vec<Complex64> },
}

impl ExtremalFunction {
    fn basis(&self) -> &dyn Basis {
        match self {
            Self::Algebraic { basis, .. } => basis,
            Self::Trigonometric { basis, .. } => basis,
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        match self {
            Self::Algebraic { coeffs, .. } | Self::Trigonometric { coeffs, .. } => coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis().dim()
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        check_dim(self.dim(), x.len())?;
        Ok(eval_combination(self.basis(), self.coeffs(), x))
    }

    /// `D(f)(0)`.
    pub fn derivative_at_zero(&self, op: &DiffOperator) -> Result<Complex64> {
        let ell = self.basis().functional(op)?;
        Ok(ell.iter().zip(self.coeffs()).map(|(l, c)| l * c).sum())
    }

    /// `s · f`.
    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::Algebraic { coeffs, .. } | Self::Trigonometric { coeffs, .. } => {
                coeffs.iter_mut().for_each(|c| *c *= s);
            }
        }
        out
    }

    /// `y ↦ f(y / c)` for algebraic extremals.
    pub fn dilated(&self, c: f64) -> Result<Self> {
        match self {
            Self::Algebraic { basis, coeffs } => {
                Ok(Self::Algebraic { basis: basis.dilated(c), coeffs: coeffs.clone() })
            }
            Self::Trigonometric { .. } => {
                Err(Error::Unsupported("dilation of trigonometric polynomials leaves the lattice".into()))
            }
        }
    }

    /// Monomial form of an algebraic extremal.
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        match self {
            Self::Algebraic { basis, coeffs } => basis.to_polynomial(coeffs),
            Self::Trigonometric { .. } => Err(Error::Unsupported("trigonometric extremal has no monomial form".into())),
        }
    }

    /// Polynomial exchange JSON for algebraic extremals; a list of
    /// `{"k":…, "part":"cos|sin", "re":…, "im":…}` terms for trigonometric ones.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        match self {
            Self::Algebraic { .. } => Ok(serde_json::to_value(self.to_polynomial()?.to_json())?),
            Self::Trigonometric { basis, coeffs } => {
                let terms: Vec<serde_json::Value> = basis
                    .elements()
                    .iter()
                    .zip(coeffs)
                    .map(|((k, part), c)| serde_json::json!({"k": k, "part": part, "re": c.re, "im": c.im}))
                    .collect();
                Ok(serde_json::json!({"m": basis.dim(), "terms": terms}))
            }
        }
    }
}

/// A sharp constant with the function attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpConstantResult {
    pub kind: ConstantKind,
    pub value: f64,
    pub extremal: ExtremalFunction,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

/// Candidate discretizations of a norm.
enum Discretization {
    Quadrature(QuadratureRule),
    Sup(SupGrid),
}

impl Discretization {
    fn nodes(&self) -> usize {
        match self {
            Self::Quadrature(rule) => rule.len(),
            Self::Sup(grid) => grid.points.len(),
        }
    }

    fn solve(&self, basis: &dyn Basis, ell: &[Complex64], p: Exponent, field: Field, seed: u64) -> Result<RawSolution> {
        match (self, p) {
            (Self::Quadrature(rule), Exponent::Finite(pv)) => {
                let pts: Vec<Vec<f64>> = rule.nodes().map(<[f64]>::to_vec).collect();
                solve_finite(&design_matrix(basis, &pts), rule.weights(), ell, pv, field, seed)
            }
            (Self::Sup(grid), Exponent::Infinity) => solve_sup(basis, grid, ell),
            _ => Err(Error::Internal("discretization does not match the exponent".into())),
        }
    }

    fn norm(&self, f: &ExtremalFunction, p: Exponent) -> Result<f64> {
        match self {
            Self::Quadrature(rule) => Ok(lp_quasinorm(|x| eval_combination(f.basis(), f.coeffs(), x), rule, p)?.value),
            Self::Sup(grid) => Ok(sup_norm(f.basis(), f.coeffs(), grid)),
        }
    }
}

/// Lobatto grid on `V*` plus the origin; one-dimensional grids are refined on `[-e, e]`.
fn body_sup_grid(body: &ConvexBody, res: Resolution) -> Result<SupGrid> {
    let rule = build_rule_body_with(body, res.radial, res.angular, NodeScheme::Lobatto)?;
    let mut points: Vec<Vec<f64>> = rule.nodes().map(<[f64]>::to_vec).collect();
    if !points.iter().any(|x| x.iter().all(|v| *v == 0.0)) {
        points.push(vec![0.0; body.dim()]);
    }
    let interval = if body.dim() == 1 {
        let e = body.polar_extent(0)?;
        Some((-e, e))
    } else {
        None
    };
    Ok(SupGrid { points, interval })
}

fn body_discretization(body: &ConvexBody, res: Resolution, p: Exponent) -> Result<Discretization> {
    match p {
        Exponent::Infinity => Ok(Discretization::Sup(body_sup_grid(body, res)?)),
        Exponent::Finite(_) => Ok(Discretization::Quadrature(build_rule_body(body, res.radial, res.angular)?)),
    }
}

fn torus_discretization(dim: usize, per_axis: usize, p: Exponent) -> Result<Discretization> {
    let rule = QuadratureRule::torus(dim, per_axis)?;
    match p {
        Exponent::Finite(_) => Ok(Discretization::Quadrature(rule)),
        Exponent::Infinity => Ok(Discretization::Sup(SupGrid {
            points: rule.nodes().map(<[f64]>::to_vec).collect(),
            interval: (dim == 1).then_some((-std::f64::consts::PI, std::f64::consts::PI)),
        })),
    }
}

fn polar_scales(body: &ConvexBody) -> Result<Vec<f64>> {
    (0..body.dim()).map(|j| body.polar_extent(j)).collect()
}

/// `sup_P |D(P)(0)| / ‖P‖_{L_p(V*)}` over polynomials of total degree `≤ n`.
#[derive(Debug, Clone)]
pub struct ExtremalProblem {
    p: Exponent,
    operator: DiffOperator,
    degree: u32,
    body: ConvexBody,
    resolution: Resolution,
    field: Field,
    seed: u64,
}

impl ExtremalProblem {
    pub fn new(p: Exponent, operator: DiffOperator, degree: u32, body: ConvexBody) -> Result<Self> {
        check_dim(body.dim(), operator.dim())?;
        if body.dim() > 3 {
            return Err(Error::Config(format!("dimension {} is not supported (m <= 3)", body.dim())));
        }
        let resolution = Resolution::default_for(body.dim());
        Ok(Self { p, operator, degree, body, resolution, field: Field::Complex, seed: 0 })
    }

    pub fn with_resolution(mut self, resolution: Resolution) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn operator(&self) -> &DiffOperator {
        &self.operator
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    /// Dimension `C(n+m, m)` of the polynomial space.
    pub fn basis_size(&self) -> usize {
        let (n, m) = (self.degree as usize, self.dim());
        (1..=m).fold(1usize, |acc, j| acc * (n + j) / j)
    }

    /// Resolution actually used: the configured one raised to the degree floors.
    pub fn effective_resolution(&self) -> Resolution {
        self.resolution.floored(self.degree, self.p, self.dim())
    }

    fn solve(&self, res: Resolution, prefactor: f64) -> Result<SharpConstantResult> {
        let basis = ChebyshevBasis::new(self.degree, polar_scales(&self.body)?)?;
        let ell = basis.functional(&self.operator)?;
        let disc = body_discretization(&self.body, res, self.p)?;
        let raw = disc.solve(&basis, &ell, self.p, self.field, self.seed)?;
        let extremal = ExtremalFunction::Algebraic { basis, coeffs: raw.coeffs };
        let scheme = if self.p.is_infinite() { NodeScheme::Lobatto } else { NodeScheme::Gauss };
        let value = prefactor * extremal.derivative_at_zero(&self.operator)?.norm() / disc.norm(&extremal, self.p)?;
        Ok(SharpConstantResult {
            kind: ConstantKind::Polynomial,
            value,
            extremal,
            method: raw.method,
            diagnostics: Diagnostics {
                grid: GridInfo::Body { radial: res.radial, angular: res.angular, scheme },
                nodes: disc.nodes(),
                iterations: raw.iterations,
                restarts: raw.restarts,
                seed: self.seed,
                prefactor,
                stability_delta: None,
                unstable: false,
            },
        })
    }

    fn prefactor(&self) -> f64 {
        let n = f64::from(self.degree);
        n.powf(-f64::from(self.operator.order()) - self.dim() as f64 * self.p.reciprocal())
    }

    /// Re-evaluates `prefactor · |D(P)(0)| / ‖P‖` for the extremal of `result` on its own grid.
    pub fn rayleigh_ratio(&self, result: &SharpConstantResult) -> Result<f64> {
        let GridInfo::Body { radial, angular, .. } = result.diagnostics.grid else {
            return Err(Error::InvalidInput("result was not computed on a body grid".into()));
        };
        let disc = body_discretization(&self.body, Resolution { radial, angular }, self.p)?;
        let lc = result.extremal.derivative_at_zero(&self.operator)?;
        Ok(result.diagnostics.prefactor * lc.norm() / disc.norm(&result.extremal, self.p)?)
    }
}

/// The functional norm `sup_P |D(P)(0)| / ‖P‖_{L_p(V*)}` without normalization by `n`.
pub fn functional_norm(problem: &ExtremalProblem) -> Result<SharpConstantResult> {
    problem.solve(problem.effective_resolution(), 1.0)
}

/// `n^{-N-m/p} · sup_P |D(P)(0)| / ‖P‖_{L_p(V*)}`.
pub fn polynomial_constant(problem: &ExtremalProblem) -> Result<SharpConstantResult> {
    if problem.degree == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    problem.solve(problem.effective_resolution(), problem.prefactor())
}

/// [`polynomial_constant`] recomputed at doubled resolution; the finer value is
/// reported together with the relative change.
pub fn polynomial_constant_with_stability(problem: &ExtremalProblem) -> Result<SharpConstantResult> {
    let coarse = polynomial_constant(problem)?;
    let fine_problem = problem.clone().with_resolution(problem.effective_resolution().doubled());
    let fine = polynomial_constant(&fine_problem)?;
    Ok(with_delta(fine, coarse.value))
}

fn with_delta(mut fine: SharpConstantResult, coarse: f64) -> SharpConstantResult {
    let delta = (fine.value - coarse).abs() / coarse.abs().max(f64::MIN_POSITIVE);
    fine.diagnostics.stability_delta = Some(delta);
    fine.diagnostics.unstable = delta > STABILITY_TOLERANCE;
    fine
}

/// `a^{-N-m/p} · sup_T |D(T)(0)| / ‖T‖_{L_p([-π,π]^m)}` over frequencies `k ∈ aV ∩ Z^m`.
#[derive(Debug, Clone)]
pub struct TrigProblem {
    p: Exponent,
    operator: DiffOperator,
    scale: f64,
    body: ConvexBody,
    torus_grid: Option<usize>,
    field: Field,
    seed: u64,
}

impl TrigProblem {
    pub fn new(p: Exponent, operator: DiffOperator, scale: f64, body: ConvexBody) -> Result<Self> {
        check_dim(body.dim(), operator.dim())?;
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidInput(format!("dilation must be positive, got {scale}")));
        }
        if body.dim() > 2 {
            return Err(Error::Config("trigonometric constants support m <= 2".into()));
        }
        Ok(Self { p, operator, scale, body, torus_grid: None, field: Field::Complex, seed: 0 })
    }

    pub fn with_torus_grid(mut self, per_axis: usize) -> Self {
        self.torus_grid = Some(per_axis);
        self
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Lattice points `k` with `k / a ∈ V`, lexicographically ordered.
    pub fn lattice(&self) -> Result<Vec<Vec<i64>>> {
        let m = self.body.dim();
        let bounds: Vec<i64> = (0..m)
            .map(|j| {
                let mut e = vec![0.0; m];
                e[j] = 1.0;
                self.body.dual_norm(&e).map(|h| (self.scale * h * (1.0 + 1e-12)).floor() as i64)
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        let mut k: Vec<i64> = bounds.iter().map(|b| -b).collect();
        loop {
            let t: Vec<f64> = k.iter().map(|&v| v as f64).collect();
            if self.body.gauge(&t)? <= self.scale * (1.0 + 1e-12) {
                out.push(k.clone());
            }
            let mut j = m;
            loop {
                if j == 0 {
                    return Ok(out);
                }
                j -= 1;
                if k[j] < bounds[j] {
                    k[j] += 1;
                    for (kk, b) in k.iter_mut().zip(&bounds).skip(j + 1) {
                        *kk = -b;
                    }
                    break;
                }
            }
        }
    }

    /// Grid per axis: the configured one raised to `2K + 2` (`p = 2`) or `4K + 16`, made even.
    pub fn effective_grid(&self, max_frequency: i64) -> usize {
        let k = max_frequency.max(0) as usize;
        let floor = if self.p == Exponent::Finite(2.0) { 2 * k + 2 } else { 4 * k + 16 };
        let g = self.torus_grid.unwrap_or(4 * k + 16).max(floor);
        g + g % 2
    }

    fn prefactor(&self) -> f64 {
        self.scale.powf(-f64::from(self.operator.order()) - self.body.dim() as f64 * self.p.reciprocal())
    }

    fn solve(&self, per_axis: Option<usize>) -> Result<SharpConstantResult> {
        let lattice = self.lattice()?;
        if lattice.is_empty() {
            return Err(Error::InvalidInput("the lattice aV ∩ Z^m is empty".into()));
        }
        let basis = TrigBasis::from_frequencies(self.body.dim(), &lattice)?;
        let per_axis = per_axis.unwrap_or_else(|| self.effective_grid(basis.max_frequency()));
        let ell = basis.functional(&self.operator)?;
        let disc = torus_discretization(self.body.dim(), per_axis, self.p)?;
        let raw = disc.solve(&basis, &ell, self.p, self.field, self.seed)?;
        let extremal = ExtremalFunction::Trigonometric { basis, coeffs: raw.coeffs };
        let prefactor = self.prefactor();
        let value = prefactor * extremal.derivative_at_zero(&self.operator)?.norm() / disc.norm(&extremal, self.p)?;
        Ok(SharpConstantResult {
            kind: ConstantKind::Trigonometric,
            value,
            extremal,
            method: raw.method,
            diagnostics: Diagnostics {
                grid: GridInfo::Torus { per_axis },
                nodes: disc.nodes(),
                iterations: raw.iterations,
                restarts: raw.restarts,
                seed: self.seed,
                prefactor,
                stability_delta: None,
                unstable: false,
            },
        })
    }

    pub fn rayleigh_ratio(&self, result: &SharpConstantResult) -> Result<f64> {
        let GridInfo::Torus { per_axis } = result.diagnostics.grid else {
            return Err(Error::InvalidInput("result was not computed on a torus grid".into()));
        };
        let disc = torus_discretization(self.body.dim(), per_axis, self.p)?;
        let lc = result.extremal.derivative_at_zero(&self.operator)?;
        Ok(result.diagnostics.prefactor * lc.norm() / disc.norm(&result.extremal, self.p)?)
    }
}

/// The trigonometric constant for frequencies in `aV ∩ Z^m`.
pub fn trigonometric_constant(problem: &TrigProblem) -> Result<SharpConstantResult> {
    problem.solve(None)
}

/// [`trigonometric_constant`] recomputed on a doubled torus grid.
pub fn trigonometric_constant_with_stability(problem: &TrigProblem) -> Result<SharpConstantResult> {
    let coarse = problem.solve(None)?;
    let GridInfo::Torus { per_axis } = coarse.diagnostics.grid else {
        return Err(Error::Internal("torus result without torus grid".into()));
    };
    let fine = problem.solve(Some(2 * per_axis))?;
    Ok(with_delta(fine, coarse.value))
}

/// Power of `n` normalizing the different-metrics constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthExponent {
    /// `2m/p`, the growth on polytopes and cubes.
    TwoMOverP,
    /// `(m+1)/p`, the growth on smooth bodies such as balls.
    MPlusOneOverP,
    Custom(f64),
}

impl GrowthExponent {
    pub fn value(&self, dim: usize, p: f64) -> f64 {
        match self {
            Self::TwoMOverP => 2.0 * dim as f64 / p,
            Self::MPlusOneOverP => (dim as f64 + 1.0) / p,
            Self::Custom(mu) => *mu,
        }
    }
}

/// Which polynomial space the different-metrics constant is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeStructure {
    /// Total degree `≤ n`.
    #[default]
    Total,
    /// Degree `≤ n` in each variable.
    PerVariable,
}

/// `n^{-μ} · sup_P ‖P‖_{L_∞(Ω)} / ‖P‖_{L_p(Ω)}` with `Ω = V*` of the given body.
#[derive(Debug, Clone)]
pub struct NikolskiiProblem {
    p: f64,
    degree: u32,
    body: ConvexBody,
    growth: GrowthExponent,
    structure: DegreeStructure,
    resolution: Resolution,
    seed: u64,
}

impl NikolskiiProblem {
    pub fn new(p: Exponent, degree: u32, body: ConvexBody, growth: GrowthExponent) -> Result<Self> {
        let Exponent::Finite(p) = p else {
            return Err(Error::InvalidInput("the different-metrics constant needs a finite exponent".into()));
        };
        if degree == 0 {
            return Err(Error::InvalidInput("degree must be at least 1".into()));
        }
        if body.dim() > 3 {
            return Err(Error::Config(format!("dimension {} is not supported (m <= 3)", body.dim())));
        }
        let resolution = Resolution::default_for(body.dim());
        Ok(Self { p, degree, body, growth, structure: DegreeStructure::Total, resolution, seed: 0 })
    }

    pub fn with_structure(mut self, structure: DegreeStructure) -> Self {
        self.structure = structure;
        self
    }

    pub fn with_resolution(mut self, resolution: Resolution) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn effective_resolution(&self) -> Resolution {
        let total = match self.structure {
            DegreeStructure::Total => self.degree,
            DegreeStructure::PerVariable => self.degree * self.body.dim() as u32,
        };
        self.resolution.floored(total, Exponent::Finite(self.p), self.body.dim())
    }

    fn prefactor(&self) -> f64 {
        f64::from(self.degree).powf(-self.growth.value(self.body.dim(), self.p))
    }

    fn basis(&self) -> Result<ChebyshevBasis> {
        let scales = polar_scales(&self.body)?;
        match self.structure {
            DegreeStructure::Total => ChebyshevBasis::new(self.degree, scales),
            DegreeStructure::PerVariable => ChebyshevBasis::per_variable(self.degree, scales),
        }
    }

    fn solve(&self, res: Resolution) -> Result<SharpConstantResult> {
        let basis = self.basis()?;
        let rule = build_rule_body(&self.body, res.radial, res.angular)?;
        let grid = body_sup_grid(&self.body, res)?;
        let pts: Vec<Vec<f64>> = rule.nodes().map(<[f64]>::to_vec).collect();
        let a = design_matrix(&basis, &pts);
        let phi = design_matrix(&basis, &grid.points);
        // Point-evaluation functional norms at every candidate, from the p = 2 kernel.
        let chol = Cholesky::new(gram(&a, rule.weights())).ok_or_else(|| {
            Error::DegenerateRule("Gram matrix is not positive definite; increase the resolution".into())
        })?;
        let x = chol.solve(&phi.transpose());
        let kernel: Vec<f64> = (0..grid.points.len()).map(|i| phi.row(i).transpose().dot(&x.column(i))).collect();
        let mut order: Vec<usize> = (0..kernel.len()).collect();
        order.sort_by(|&i, &j| kernel[j].total_cmp(&kernel[i]).then(i.cmp(&j)));
        let p = Exponent::Finite(self.p);
        let (coeffs, method, iterations, restarts) = if self.p == 2.0 {
            let i = order[0];
            let c: Vec<Complex64> = x.column(i).iter().map(|v| Complex64::new(v / kernel[i], 0.0)).collect();
            (c, Method::GramP2, 1, 0)
        } else {
            let mut best: Option<RawSolution> = None;
            for &i in order.iter().take(PEAK_SHORTLIST) {
                let ell: Vec<Complex64> = phi.row(i).iter().map(|v| Complex64::new(*v, 0.0)).collect();
                let raw = solve_finite(&a, rule.weights(), &ell, self.p, Field::Real, self.seed)?;
                if best.as_ref().is_none_or(|b| raw.ratio > b.ratio) {
                    best = Some(raw);
                }
            }
            let raw = best.ok_or_else(|| Error::Internal("no candidate peak points".into()))?;
            (raw.coeffs, raw.method, raw.iterations, raw.restarts)
        };
        let extremal = ExtremalFunction::Algebraic { basis, coeffs };
        let prefactor = self.prefactor();
        let disc = Discretization::Quadrature(rule);
        let value = prefactor * sup_norm(extremal.basis(), extremal.coeffs(), &grid) / disc.norm(&extremal, p)?;
        Ok(SharpConstantResult {
            kind: ConstantKind::DifferentMetrics,
            value,
            extremal,
            method,
            diagnostics: Diagnostics {
                grid: GridInfo::Body { radial: res.radial, angular: res.angular, scheme: NodeScheme::Gauss },
                nodes: disc.nodes(),
                iterations,
                restarts,
                seed: self.seed,
                prefactor,
                stability_delta: None,
                unstable: false,
            },
        })
    }

    pub fn rayleigh_ratio(&self, result: &SharpConstantResult) -> Result<f64> {
        let GridInfo::Body { radial, angular, .. } = result.diagnostics.grid else {
            return Err(Error::InvalidInput("result was not computed on a body grid".into()));
        };
        let res = Resolution { radial, angular };
        let rule = Discretization::Quadrature(build_rule_body(&self.body, radial, angular)?);
        let grid = body_sup_grid(&self.body, res)?;
        let f = &result.extremal;
        Ok(result.diagnostics.prefactor * sup_norm(f.basis(), f.coeffs(), &grid)
            / rule.norm(f, Exponent::Finite(self.p))?)
    }
}

fn gram(a: &DMatrix<f64>, w: &[f64]) -> DMatrix<f64> {
    let mut aw = a.clone();
    for (i, wi) in w.iter().enumerate() {
        aw.row_mut(i).scale_mut(*wi);
    }
    a.tr_mul(&aw)
}

/// The different-metrics constant `n^{-μ} sup ‖P‖_∞ / ‖P‖_p` on `V*`.
pub fn different_metrics_constant(problem: &NikolskiiProblem) -> Result<SharpConstantResult> {
    problem.solve(problem.effective_resolution())
}

/// [`different_metrics_constant`] recomputed at doubled resolution.
pub fn different_metrics_constant_with_stability(problem: &NikolskiiProblem) -> Result<SharpConstantResult> {
    let res = problem.effective_resolution();
    let coarse = problem.solve(res)?;
    let fine = problem.solve(res.doubled())?;
    Ok(with_delta(fine, coarse.value))
}

/// Extrapolation of `(n, value_n)` as `n → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// Intercept of the least-squares line `value ≈ limit + slope/n` over the tail half.
    pub estimate: f64,
    pub slope: f64,
    /// Value at the largest `n`.
    pub final_value: f64,
    /// Largest relative deviation of a tail value from the fitted line.
    pub oscillation: f64,
    /// `oscillation ≤ 2%`; otherwise no convergence is claimed.
    pub converged: bool,
    pub tail: Vec<(u32, f64)>,
}

/// Tail oscillation above which no convergence is claimed.
pub const CONVERGENCE_OSCILLATION: f64 = 0.02;

/// Fits `value ≈ limit + slope/n` over the last half of the sequence.
pub fn estimate_limit(values: &[(u32, f64)]) -> Result<LimitEstimate> {
    if values.len() < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 values, got {}", values.len())));
    }
    if values.windows(2).any(|w| w[0].0 >= w[1].0) || values[0].0 == 0 {
        return Err(Error::InvalidInput("degrees must be positive and strictly increasing".into()));
    }
    if values.iter().any(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidInput("values must be finite".into()));
    }
    let tail: Vec<(u32, f64)> = values[values.len() / 2..].to_vec();
    let k = tail.len() as f64;
    let xs: Vec<f64> = tail.iter().map(|(n, _)| 1.0 / f64::from(*n)).collect();
    let ys: Vec<f64> = tail.iter().map(|(_, v)| *v).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let estimate = my - slope * mx;
    let oscillation = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let fit = estimate + slope * x;
            (y - fit).abs() / fit.abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    Ok(LimitEstimate {
        estimate,
        slope,
        final_value: *ys.last().expect("tail is nonempty"),
        oscillation,
        converged: oscillation <= CONVERGENCE_OSCILLATION,
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> ConvexBody {
        ConvexBody::interval(1.0).unwrap()
    }

    #[test]
    fn gram_examples() {
        let id = DiffOperator::identity(1);
        let two = Exponent::Finite(2.0);
        let f1 = functional_norm(&ExtremalProblem::new(two, id.clone(), 1, interval()).unwrap()).unwrap();
        assert!((f1.value - 0.5f64.sqrt()).abs() < 1e-12);
        let f2 = functional_norm(&ExtremalProblem::new(two, id.clone(), 2, interval()).unwrap()).unwrap();
        assert!((f2.value - (9.0f64 / 8.0).sqrt()).abs() < 1e-12);
        let m2 = polynomial_constant(&ExtremalProblem::new(two, id, 2, interval()).unwrap()).unwrap();
        assert!((m2.value - 0.75).abs() < 1e-12);
        assert_eq!(m2.method, Method::GramP2);
    }

    #[test]
    fn sup_norm_of_evaluation_is_one() {
        for body in [interval(), ConvexBody::ball(2, 1.0).unwrap(), ConvexBody::cube(2, 1.0).unwrap()] {
            let m = body.dim();
            let prob = ExtremalProblem::new(Exponent::Infinity, DiffOperator::identity(m), 3, body).unwrap();
            let r = polynomial_constant(&prob).unwrap();
            assert!((r.value - 1.0).abs() < 1e-9, "{}", r.value);
        }
    }

    #[test]
    fn trig_examples() {
        let id = DiffOperator::identity(1);
        let two = Exponent::Finite(2.0);
        let r1 = trigonometric_constant(&TrigProblem::new(two, id.clone(), 1.0, interval()).unwrap()).unwrap();
        assert!((r1.value - (3.0 / (2.0 * std::f64::consts::PI)).sqrt()).abs() < 1e-12);
        let r2 = trigonometric_constant(&TrigProblem::new(two, id.clone(), 2.0, interval()).unwrap()).unwrap();
        assert!((r2.value - (5.0 / (2.0 * std::f64::consts::PI)).sqrt() / 2f64.sqrt()).abs() < 1e-12);
        let inf = trigonometric_constant(&TrigProblem::new(Exponent::Infinity, id, 3.0, interval()).unwrap()).unwrap();
        assert!((inf.value - 1.0).abs() < 1e-9, "{} {:?}", inf.value, inf.diagnostics);
    }

    #[test]
    fn nikolskii_example() {
        let prob = NikolskiiProblem::new(Exponent::Finite(2.0), 1, interval(), GrowthExponent::TwoMOverP).unwrap();
        let r = different_metrics_constant(&prob).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-12, "{}", r.value);
        assert!((prob.rayleigh_ratio(&r).unwrap() - r.value).abs() < 1e-12);
    }

    #[test]
    fn limit_examples() {
        let constant: Vec<(u32, f64)> = (1..=8).map(|n| (n, 0.3)).collect();
        let e = estimate_limit(&constant).unwrap();
        assert!((e.estimate - 0.3).abs() < 1e-15 && e.oscillation < 1e-15 && e.converged);
        let hyper: Vec<(u32, f64)> = (4..=64).map(|n| (n, 1.0 + 1.0 / f64::from(n))).collect();
        assert!((estimate_limit(&hyper).unwrap().estimate - 1.0).abs() < 1e-6);
        assert!(estimate_limit(&constant[..3]).is_err());
        assert!(estimate_limit(&[(1, 1.0), (3, 1.0), (2, 1.0), (4, 1.0)]).is_err());
    }

    #[test]
    fn certificate_reproduces_value() {
        let op = DiffOperator::pure(2, 1);
        for p in [Exponent::Finite(1.0), Exponent::Finite(3.0), Exponent::Infinity] {
            let prob = ExtremalProblem::new(p, op.clone(), 3, ConvexBody::ball(2, 1.0).unwrap())
                .unwrap()
                .with_resolution(Resolution { radial: 16, angular: 64 });
            let r = polynomial_constant(&prob).unwrap();
            let again = prob.rayleigh_ratio(&r).unwrap();
            assert!((again - r.value).abs() <= 1e-8 * r.value, "p = {p}");
            let lc = r.extremal.derivative_at_zero(&op).unwrap();
            assert!((lc - 1.0).norm() < 1e-10);
        }
    }
}

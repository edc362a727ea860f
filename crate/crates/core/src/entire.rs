//! Entire functions of exponential type and the limit objects of the sharp constants.
//!
//! * [`EntireSample`]: explicit functions of exponential type `V` (sinc products,
//!   Fourier transforms of indicator functions of `V`, harmonics, rescaled extremal
//!   polynomials), with derivatives and full-space norms.
//! * [`ratio_lower_bound`]: `‖D(f)‖_∞ / ‖f‖_p` for a sample, a rigorous lower bound
//!   for the limit constant because the denominator is never underestimated.
//! * [`bernstein_nikolskii_check`] and [`approx_decay_1d`]: numerical witnesses of
//!   the Bernstein/Nikolskii inequalities and of the exponential decay of polynomial
//!   approximation errors on growing intervals.
//! * [`extremal_extraction`]: the rescaled extremal polynomials `n^N P_n(y/n)` and
//!   their mutual distances on a fixed cube.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{polynomial_constant, ExtremalFunction, ExtremalProblem, Resolution};
use crate::error::{check_dim, Error, Result};
use crate::exponent::Exponent;
use crate::geometry::ConvexBody;
use crate::poly::{DiffOperator, MultiIndex};
use crate::quadrature::{build_rule_region, composite_gauss, pairwise_sum, QuadratureRule};

/// Largest relative inflation of a norm by its tail bound accepted as a "full-space" norm.
pub const TAIL_FRACTION: f64 = 0.01;
/// Points on the circle of the Cauchy-integral derivative formula.
const CAUCHY_POINTS: usize = 64;
/// Even integer exponents up to this value use the closed-form sinc integral.
const CLOSED_FORM_MAX_POWER: u32 = 24;
/// Gauss nodes per panel of the truncated 1D norm integrals.
const PANEL_NODES: usize = 10;
/// Points of the error grid in [`approx_decay_1d`].
const DECAY_GRID: usize = 10_000;
/// Half-width of the comparison cube of [`extremal_extraction`].
const EXTRACTION_HALF_WIDTH: f64 = 2.0;

/// Parameters of a sample function.
#[derive(Debug, Clone)]
pub enum SampleSpec {
    /// `∏_j (sin(σ_j x_j / k) / (σ_j x_j / k))^k`, of exponential type `∏[-σ_j, σ_j]`.
    SincProduct { scales: Vec<f64>, power: u32 },
    /// `∫_V e^{i t·x} dt` evaluated by a quadrature rule over `V`.
    BodyFourier { body: ConvexBody, radial: usize, angular: usize },
    /// `cos(ω·x − φ)`, of exponential type any `V` containing `±ω`.
    Harmonic { frequency: Vec<f64>, phase: f64 },
    /// A polynomial extremal, already rescaled.
    RescaledExtremal { function: ExtremalFunction },
}

#[derive(Debug, Clone)]
enum Inner {
    Sinc { scales: Vec<f64>, power: u32 },
    Fourier { body: ConvexBody, rule: QuadratureRule },
    Harmonic { frequency: Vec<f64>, phase: f64 },
    Rescaled { function: ExtremalFunction },
}

/// An explicit entire function of exponential type.
#[derive(Debug, Clone)]
pub struct EntireSample {
    inner: Inner,
    dim: usize,
}

/// A full-space `L_p` norm with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownNorm {
    pub p: Exponent,
    /// Never below the true norm.
    pub value: f64,
    /// `true` for a closed form, `false` for a truncated integral plus a tail bound.
    pub exact: bool,
    pub note: String,
}

/// Truncated norm integral `∫_{[-R,R]^m} |f|^p` and an upper bound of the rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBound {
    pub truncation: f64,
    /// `∫_{[-R,R]^m} |f|^p`.
    pub truncated: f64,
    /// Upper bound of `∫_{outside} |f|^p`.
    pub tail: f64,
    pub p: f64,
}

impl NormBound {
    /// Upper bound of the full-space norm.
    pub fn upper(&self) -> f64 {
        (self.truncated + self.tail).powf(1.0 / self.p)
    }

    /// Norm over the truncation box only.
    pub fn truncated_norm(&self) -> f64 {
        self.truncated.powf(1.0 / self.p)
    }

    /// Relative inflation of the norm caused by the tail bound.
    pub fn tail_fraction(&self) -> f64 {
        self.upper() / self.truncated_norm() - 1.0
    }
}

/// Builds a sample from its parameters.
pub fn make_sample(spec: SampleSpec) -> Result<EntireSample> {
    match spec {
        SampleSpec::SincProduct { scales, power } => EntireSample::sinc_product(scales, power),
        SampleSpec::BodyFourier { body, radial, angular } => EntireSample::body_fourier(&body, radial, angular),
        SampleSpec::Harmonic { frequency, phase } => EntireSample::harmonic(frequency, phase),
        SampleSpec::RescaledExtremal { function } => Ok(EntireSample::rescaled_extremal(function)),
    }
}

impl EntireSample {
    pub fn sinc_product(scales: Vec<f64>, power: u32) -> Result<Self> {
        if power < 2 {
            return Err(Error::InvalidInput(format!("sinc power must be at least 2, got {power}")));
        }
        if scales.is_empty() || scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidInput(format!("sinc scales must be positive and finite, got {scales:?}")));
        }
        let dim = scales.len();
        Ok(Self { inner: Inner::Sinc { scales, power }, dim })
    }

    pub fn body_fourier(body: &ConvexBody, radial: usize, angular: usize) -> Result<Self> {
        let rule = build_rule_region(body, radial, angular)?;
        Ok(Self { inner: Inner::Fourier { body: body.clone(), rule }, dim: body.dim() })
    }

    pub fn harmonic(frequency: Vec<f64>, phase: f64) -> Result<Self> {
        if frequency.is_empty() || frequency.iter().chain([&phase]).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("harmonic needs a finite, nonempty frequency and phase".into()));
        }
        let dim = frequency.len();
        Ok(Self { inner: Inner::Harmonic { frequency, phase }, dim })
    }

    /// `sin(x)` in one variable.
    pub fn sine() -> Self {
        Self { inner: Inner::Harmonic { frequency: vec![1.0], phase: PI / 2.0 }, dim: 1 }
    }

    /// The constant `1` in `dim` variables.
    pub fn one(dim: usize) -> Self {
        Self { inner: Inner::Harmonic { frequency: vec![0.0; dim], phase: 0.0 }, dim }
    }

    pub fn rescaled_extremal(function: ExtremalFunction) -> Self {
        let dim = function.dim();
        Self { inner: Inner::Rescaled { function }, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Short description used in reports.
    pub fn label(&self) -> String {
        match &self.inner {
            Inner::Sinc { scales, power } => format!("sinc-product(scales={scales:?}, power={power})"),
            Inner::Fourier { body, .. } => format!("body-fourier({body})"),
            Inner::Harmonic { frequency, phase } => format!("harmonic(frequency={frequency:?}, phase={phase})"),
            Inner::Rescaled { .. } => "rescaled-extremal".into(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        self.derivative(&MultiIndex::zero(self.dim), x)
    }

    /// `∂^α f(x)`.
    pub fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Result<Complex64> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, alpha.dim())?;
        match &self.inner {
            Inner::Sinc { scales, power } => Ok(Complex64::new(
                scales
                    .iter()
                    .zip(x)
                    .zip(&alpha.0)
                    .map(|((s, xj), a)| sinc_power_derivative(*s, *power, *a, *xj))
                    .product(),
                0.0,
            )),
            Inner::Fourier { rule, .. } => {
                let i_pow = Complex64::i().powu(alpha.order());
                let (mut re, mut im) = (Vec::with_capacity(rule.len()), Vec::with_capacity(rule.len()));
                for (t, w) in rule.nodes().zip(rule.weights()) {
                    let phase: f64 = t.iter().zip(x).map(|(a, b)| a * b).sum();
                    let c = w * alpha.monomial(t);
                    re.push(c * phase.cos());
                    im.push(c * phase.sin());
                }
                Ok(i_pow * Complex64::new(pairwise_sum(&re), pairwise_sum(&im)))
            }
            Inner::Harmonic { frequency, phase } => {
                let arg: f64 = frequency.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - phase;
                let shift = f64::from(alpha.order()) * PI / 2.0;
                Ok(Complex64::new(alpha.monomial(frequency) * (arg + shift).cos(), 0.0))
            }
            Inner::Rescaled { function } => {
                if alpha.order() == 0 {
                    function.eval(x)
                } else {
                    function.to_polynomial()?.differentiate(alpha)?.eval(x)
                }
            }
        }
    }

    /// `D(f)(x) = Σ b_α ∂^α f(x)`.
    pub fn apply(&self, op: &DiffOperator, x: &[f64]) -> Result<Complex64> {
        check_dim(self.dim, op.dim())?;
        op.weights().try_fold(Complex64::new(0.0, 0.0), |acc, (alpha, b)| Ok(acc + b * self.derivative(alpha, x)?))
    }

    /// Exclusive lower end of the exponents `p` for which the sample lies in `L_p(R^m)`;
    /// `None` if it is only bounded.
    pub fn p_threshold(&self) -> Option<f64> {
        match &self.inner {
            Inner::Sinc { power, .. } => Some(1.0 / f64::from(*power)),
            Inner::Fourier { .. } if self.dim == 1 => Some(1.0),
            _ => None,
        }
    }

    fn check_p(&self, p: Exponent) -> Result<()> {
        if p.is_infinite() {
            return match &self.inner {
                Inner::Rescaled { .. } => Err(Error::InvalidInput("a rescaled polynomial is not bounded on R^m".into())),
                _ => Ok(()),
            };
        }
        match self.p_threshold() {
            Some(t) if p.value() > t => Ok(()),
            Some(t) => Err(Error::InvalidInput(format!("{} lies in L_p only for p > {t}, got p = {p}", self.label()))),
            None => Err(Error::InvalidInput(format!("{} is not in L_p for finite p = {p}", self.label()))),
        }
    }

    /// Closed-form full-space norm, where one is available.
    pub fn known_norm(&self, p: Exponent) -> Option<KnownNorm> {
        self.check_p(p).ok()?;
        let exact = |value: f64, note: &str| Some(KnownNorm { p, value, exact: true, note: note.into() });
        match &self.inner {
            Inner::Sinc { scales, power } => {
                if p.is_infinite() {
                    return exact(1.0, "sup attained at the origin");
                }
                let q = f64::from(*power) * p.value();
                let even = (q / 2.0).round();
                if (q - 2.0 * even).abs() > 1e-12 || 2.0 * even > f64::from(CLOSED_FORM_MAX_POWER) {
                    return None;
                }
                let line = sinc_even_power_integral(2 * even as u32);
                let value: f64 = scales.iter().map(|s| f64::from(*power) / s * line).product();
                exact(value.powf(1.0 / p.value()), "closed-form integral of an even power of sin(u)/u")
            }
            Inner::Fourier { rule, .. } if p.is_infinite() => {
                exact(rule.total_weight(), "sup attained at the origin: the volume of V")
            }
            Inner::Harmonic { frequency, phase } if p.is_infinite() => {
                let value = if frequency.iter().all(|w| *w == 0.0) { phase.cos().abs() } else { 1.0 };
                exact(value, "sup of a cosine")
            }
            _ => None,
        }
    }

    /// `∫_{[-R,R]^m} |f|^p` by composite Gauss quadrature together with an analytic
    /// bound of the remaining integral.
    pub fn norm_bound(&self, p: Exponent, truncation: f64) -> Result<NormBound> {
        self.check_p(p)?;
        if p.is_infinite() {
            return Err(Error::InvalidInput("tail bounds apply to finite p only".into()));
        }
        if !(truncation.is_finite() && truncation > 0.0) {
            return Err(Error::InvalidInput(format!("truncation must be positive, got {truncation}")));
        }
        let pv = p.value();
        match &self.inner {
            Inner::Sinc { scales, power } => {
                let k = f64::from(*power);
                let q = k * pv;
                // Per axis: ∫ |sinc(σx/k)|^{kp} dx = (k/σ) ∫ |sin u/u|^q du.
                let mut truncated = 1.0;
                let mut full = 1.0;
                for s in scales {
                    let u_max = s * truncation / k;
                    let inner = 2.0 * abs_sinc_power_integral(q, u_max);
                    let tail = 2.0 * u_max.powf(1.0 - q) / (q - 1.0);
                    truncated *= k / s * inner;
                    full *= k / s * (inner + tail);
                }
                Ok(NormBound { truncation, truncated, tail: full - truncated, p: pv })
            }
            Inner::Fourier { .. } => {
                // m = 1, V = [-σ, σ]: |f(x)| = |2 sin(σx)/x| ≤ 2/|x|.
                let panels = panels_for(truncation * self.axis_bandwidth());
                let (xs, ws) = composite_gauss(PANEL_NODES, panels, -truncation, truncation);
                let mut terms = Vec::with_capacity(xs.len());
                for (x, w) in xs.iter().zip(&ws) {
                    terms.push(w * self.eval(&[*x])?.norm().powf(pv));
                }
                let tail = 2.0 * 2f64.powf(pv) * truncation.powf(1.0 - pv) / (pv - 1.0);
                Ok(NormBound { truncation, truncated: pairwise_sum(&terms), tail, p: pv })
            }
            _ => Err(Error::InvalidInput(format!("no tail bound for {}", self.label()))),
        }
    }

    /// A full-space norm never below the true one: the closed form if available,
    /// otherwise the truncated integral plus the tail bound, provided the tail inflates
    /// the norm by less than [`TAIL_FRACTION`].
    pub fn full_norm(&self, p: Exponent, truncation: f64) -> Result<KnownNorm> {
        self.check_p(p)?;
        if let Some(norm) = self.known_norm(p) {
            return Ok(norm);
        }
        let bound = self.norm_bound(p, truncation)?;
        if bound.tail_fraction() >= TAIL_FRACTION {
            return Err(Error::InvalidInput(format!(
                "truncation {truncation} too small: the tail bound inflates the norm by {:.2}%",
                100.0 * bound.tail_fraction()
            )));
        }
        Ok(KnownNorm {
            p,
            value: bound.upper(),
            exact: false,
            note: format!("quadrature on [-{truncation}, {truncation}]^m plus analytic tail bound"),
        })
    }

    /// Oscillation frequency of the sample along an axis, used to size quadrature panels.
    fn axis_bandwidth(&self) -> f64 {
        match &self.inner {
            Inner::Sinc { scales, .. } => scales.iter().copied().fold(0.0, f64::max),
            Inner::Fourier { body, .. } => (0..self.dim)
                .filter_map(|j| {
                    let mut e = vec![0.0; self.dim];
                    e[j] = 1.0;
                    body.dual_norm(&e).ok()
                })
                .fold(0.0, f64::max),
            Inner::Harmonic { frequency, .. } => frequency.iter().map(|w| w.abs()).fold(0.0, f64::max),
            Inner::Rescaled { .. } => 1.0,
        }
    }
}

/// `∫_R (sin u / u)^q du` for even `q ≥ 2`.
fn sinc_even_power_integral(q: u32) -> f64 {
    let n = f64::from(q);
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=q / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * (n - 2.0 * f64::from(k)).powi(q as i32 - 1);
        binom *= (n - f64::from(k)) / f64::from(k + 1);
    }
    let factorial: f64 = (1..q).map(f64::from).product();
    2.0 * PI / (2f64.powi(q as i32) * factorial) * sum
}

/// `∫_0^U |sin u / u|^q du`.
fn abs_sinc_power_integral(q: f64, upper: f64) -> f64 {
    let (us, ws) = composite_gauss(PANEL_NODES, panels_for(upper), 0.0, upper);
    let terms: Vec<f64> = us.iter().zip(&ws).map(|(u, w)| w * sinc(*u).abs().powf(q)).collect();
    pairwise_sum(&terms)
}

fn panels_for(length: f64) -> usize {
    ((length / (PI / 2.0)).ceil() as usize).max(4)
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

fn complex_sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// `d^j/dx^j (sinc(σx/k))^k` by the trapezoid rule on the Cauchy integral around `x`.
fn sinc_power_derivative(sigma: f64, power: u32, order: u32, x: f64) -> f64 {
    let g = |z: Complex64| complex_sinc(z * (sigma / f64::from(power))).powu(power);
    if order == 0 {
        return g(Complex64::new(x, 0.0)).re;
    }
    let radius = 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..CAUCHY_POINTS {
        let w = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / CAUCHY_POINTS as f64);
        acc += g(Complex64::new(x, 0.0) + w * radius) * w.powi(-(order as i32));
    }
    let factorial: f64 = (1..=order).map(f64::from).product();
    (acc * factorial / (CAUCHY_POINTS as f64 * radius.powi(order as i32))).re
}

/// Uniform grid with an odd number of points per axis on `[-R, R]^m`, so the origin is a node.
fn symmetric_grid(dim: usize, half_width: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let k = per_axis.max(3) | 1;
    let axis: Vec<f64> = (0..k).map(|i| -half_width + 2.0 * half_width * i as f64 / (k - 1) as f64).collect();
    let mut points = vec![Vec::new()];
    for _ in 0..dim {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(*a);
                    q
                })
            })
            .collect();
    }
    points
}

/// `‖D(f)‖_∞ / ‖f‖_p` with its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    /// Grid maximum of `|D(f)|`.
    pub numerator: f64,
    pub argmax: Vec<f64>,
    pub norm: KnownNorm,
}

/// A lower bound of `sup_f ‖D(f)‖_∞ / ‖f‖_p` over functions of exponential type:
/// the numerator is a grid maximum over the Euclidean ball of radius `truncation` and
/// the denominator a full-space norm that never underestimates.
pub fn ratio_lower_bound(
    f: &EntireSample,
    op: &DiffOperator,
    p: Exponent,
    truncation: f64,
    grid: usize,
) -> Result<LowerBound> {
    check_dim(f.dim(), op.dim())?;
    let norm = f.full_norm(p, truncation)?;
    if !(norm.value > 0.0) {
        return Err(Error::Domain(format!("{} has zero norm", f.label())));
    }
    let mut best = (0.0, vec![0.0; f.dim()]);
    for x in symmetric_grid(f.dim(), truncation, grid) {
        if x.iter().map(|v| v * v).sum::<f64>() > truncation * truncation * (1.0 + 1e-12) {
            continue;
        }
        let v = f.apply(op, &x)?.norm();
        if !v.is_finite() {
            return Err(Error::NonFinite { node: x, value: v });
        }
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(LowerBound { value: best.0 / norm.value, numerator: best.0, argmax: best.1, norm })
}

/// Measured Bernstein and Nikolskii ratios of a sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRatios {
    /// `‖∂^α f‖_∞ / ‖f‖_∞` on the grid.
    pub bernstein: f64,
    /// `‖f‖_∞ / ‖f‖_p` with the grid sup and a full-space norm; `None` if `f ∉ L_p`.
    pub nikolskii: Option<f64>,
}

/// Grid sups of `f` and `∂^α f` over `[-R, R]^m`, and the ratios above.
pub fn bernstein_nikolskii_check(
    f: &EntireSample,
    alpha: &MultiIndex,
    p: Exponent,
    truncation: f64,
    grid: usize,
) -> Result<InequalityRatios> {
    check_dim(f.dim(), alpha.dim())?;
    let zero = MultiIndex::zero(f.dim());
    let (mut sup_f, mut sup_d) = (0.0f64, 0.0f64);
    for x in symmetric_grid(f.dim(), truncation, grid) {
        sup_f = sup_f.max(f.derivative(&zero, &x)?.norm());
        sup_d = sup_d.max(f.derivative(alpha, &x)?.norm());
    }
    if !(sup_f > 0.0 && sup_f.is_finite() && sup_d.is_finite()) {
        return Err(Error::Domain(format!("{} has no finite nonzero sup on the grid", f.label())));
    }
    let nikolskii = match f.full_norm(p, truncation) {
        Ok(norm) => Some(sup_f / norm.value),
        Err(Error::InvalidInput(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(InequalityRatios { bernstein: sup_d / sup_f, nikolskii })
}

/// Sup errors of Chebyshev interpolation on `[-τk, τk]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayTable {
    pub tau: f64,
    /// `(k, sup error of the degree-k interpolant)`.
    pub rows: Vec<(u32, f64)>,
}

impl DecayTable {
    /// Least-squares slope of `ln(error)` against `k` over the tail half of the rows
    /// with nonzero error; `None` if fewer than two such rows exist.
    pub fn log_slope(&self) -> Option<f64> {
        let tail: Vec<(f64, f64)> = self.rows[self.rows.len() / 2..]
            .iter()
            .filter(|(_, e)| *e > 0.0)
            .map(|(k, e)| (f64::from(*k), e.ln()))
            .collect();
        if tail.len() < 2 {
            return None;
        }
        let n = tail.len() as f64;
        let mx = tail.iter().map(|t| t.0).sum::<f64>() / n;
        let my = tail.iter().map(|t| t.1).sum::<f64>() / n;
        let sxy: f64 = tail.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = tail.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        Some(sxy / sxx)
    }

    pub fn error_at(&self, k: u32) -> Option<f64> {
        self.rows.iter().find(|(kk, _)| *kk == k).map(|(_, e)| *e)
    }
}

/// For `k = 4, …, k_max`, the sup error (on a 10⁴-point grid) of the degree-`k`
/// Chebyshev interpolant of `f` on `[-τk, τk]`.
pub fn approx_decay_1d(f: &EntireSample, tau: f64, k_max: u32) -> Result<DecayTable> {
    check_dim(1, f.dim())?;
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidInput(format!("tau must lie in (0, 1), got {tau}")));
    }
    if k_max < 4 {
        return Err(Error::InvalidInput(format!("k_max must be at least 4, got {k_max}")));
    }
    let rows = (4..=k_max)
        .into_par_iter()
        .map(|k| {
            let half = tau * f64::from(k);
            let interpolant = ChebyshevInterpolant::new(|x| f.eval(&[x]).map(|v| v.re), k as usize, half)?;
            let mut err = 0.0f64;
            for i in 0..DECAY_GRID {
                let x = -half + 2.0 * half * i as f64 / (DECAY_GRID - 1) as f64;
                err = err.max((interpolant.eval(x) - f.eval(&[x])?.re).abs());
            }
            Ok((k, err))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecayTable { tau, rows })
}

/// Interpolant at the Chebyshev points of the first kind on `[-h, h]`, in barycentric form.
struct ChebyshevInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl ChebyshevInterpolant {
    fn new(f: impl Fn(f64) -> Result<f64>, degree: usize, half: f64) -> Result<Self> {
        let count = degree + 1;
        let mut nodes = Vec::with_capacity(count);
        let mut weights = Vec::with_capacity(count);
        for j in 0..count {
            let theta = (2 * j + 1) as f64 * PI / (2 * count) as f64;
            nodes.push(half * theta.cos());
            weights.push(if j % 2 == 0 { theta.sin() } else { -theta.sin() });
        }
        let values = nodes.iter().map(|x| f(*x)).collect::<Result<Vec<_>>>()?;
        Ok(Self { nodes, values, weights })
    }

    fn eval(&self, x: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for ((xj, fj), wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            if x == *xj {
                return *fj;
            }
            let t = wj / (x - xj);
            num += t * fj;
            den += t;
        }
        num / den
    }
}

/// Solver settings for [`extremal_extraction`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExtractionSettings {
    pub resolution: Option<Resolution>,
    pub seed: u64,
}

/// One rescaled extremal of an extraction run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionRow {
    pub n: u32,
    /// Sup distance to the next rescaled extremal on the comparison cube.
    pub dist_to_next: Option<f64>,
    /// `|D(Q_n)(0) − 1|` after renormalization.
    pub normalization_residual: f64,
    /// The sharp constant solved for.
    pub value: f64,
}

/// Values of the last rescaled extremal on the comparison grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCandidate {
    pub n: u32,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

/// Rescaled extremals `Q_n(y) = c · P_n(y/n)` with `D(Q_n)(0) = 1` and their distances.
#[derive(Debug, Clone, Serialize)]
pub struct ExtractionReport {
    pub rows: Vec<ExtractionRow>,
    pub limit_candidate: LimitCandidate,
    #[serde(skip)]
    extremals: Vec<ExtremalFunction>,
    #[serde(skip)]
    grid: Vec<Vec<f64>>,
}

impl ExtractionReport {
    /// The rescaled extremal for degree `n`.
    pub fn rescaled(&self, n: u32) -> Option<&ExtremalFunction> {
        self.rows.iter().position(|r| r.n == n).map(|i| &self.extremals[i])
    }

    /// `min_{s=±1} sup |Q_n − s·f|` over the comparison grid.
    pub fn distance_to(&self, n: u32, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
        let q = self.rescaled(n).ok_or_else(|| Error::InvalidInput(format!("degree {n} was not extracted")))?;
        let (mut plus, mut minus) = (0.0f64, 0.0f64);
        for y in &self.grid {
            let v = q.eval(y)?;
            let t = f(y);
            plus = plus.max((v - t).norm());
            minus = minus.max((v + t).norm());
        }
        Ok(plus.min(minus))
    }

    pub fn to_json(&self) -> Result<serde_json::Value> {
        Ok(serde_json::to_value(self)?)
    }
}

/// Points of the comparison cube `[-2, 2]^m`.
fn comparison_grid(dim: usize) -> Vec<Vec<f64>> {
    let per_axis = match dim {
        1 => 512,
        2 => 64,
        _ => 24,
    };
    let axis: Vec<f64> = (0..per_axis)
        .map(|i| -EXTRACTION_HALF_WIDTH + 2.0 * EXTRACTION_HALF_WIDTH * i as f64 / (per_axis - 1) as f64)
        .collect();
    let mut points = vec![Vec::new()];
    for _ in 0..dim {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(*a);
                    q
                })
            })
            .collect();
    }
    points
}

/// Solves the polynomial extremal problem for each `n`, rescales to `Q_n(y) = P_n(y/n)`,
/// renormalizes to `D(Q_n)(0) = 1` and compares consecutive `Q_n` on `[-2, 2]^m`.
pub fn extremal_extraction(
    p: Exponent,
    op: &DiffOperator,
    body: &ConvexBody,
    degrees: &[u32],
    settings: ExtractionSettings,
) -> Result<ExtractionReport> {
    if degrees.is_empty() || degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("degrees must be nonempty and strictly increasing".into()));
    }
    let solved = degrees
        .par_iter()
        .map(|&n| {
            let mut problem = ExtremalProblem::new(p, op.clone(), n, body.clone())?.with_seed(settings.seed);
            if let Some(res) = settings.resolution {
                problem = problem.with_resolution(res);
            }
            let result = polynomial_constant(&problem)?;
            let dilated = result.extremal.dilated(f64::from(n))?;
            let d0 = dilated.derivative_at_zero(op)?;
            if d0.norm() == 0.0 {
                return Err(Error::Internal(format!("extremal of degree {n} has D(P)(0) = 0")));
            }
            let q = dilated.scaled(d0.inv());
            let residual = (q.derivative_at_zero(op)? - 1.0).norm();
            Ok((q, residual, result.value))
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = comparison_grid(body.dim());
    let samples = solved
        .iter()
        .map(|(q, _, _)| grid.iter().map(|y| q.eval(y)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let rows = degrees
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let dist_to_next = samples.get(i + 1).map(|next| {
                samples[i].iter().zip(next).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
            });
            ExtractionRow { n, dist_to_next, normalization_residual: solved[i].1, value: solved[i].2 }
        })
        .collect();
    let last = samples.last().expect("degrees are nonempty");
    let limit_candidate = LimitCandidate {
        n: *degrees.last().expect("degrees are nonempty"),
        points: grid.clone(),
        values: last.iter().map(|v| v.re).collect(),
    };
    Ok(ExtractionReport {
        rows,
        limit_candidate,
        extremals: solved.into_iter().map(|(q, _, _)| q).collect(),
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> ConvexBody {
        ConvexBody::interval(1.0).unwrap()
    }

    #[test]
    fn sample_examples() {
        let sinc = EntireSample::sinc_product(vec![1.0], 2).unwrap();
        assert_eq!(sinc.eval(&[0.0]).unwrap().re, 1.0);
        let x = 1.3f64;
        assert!((sinc.eval(&[x]).unwrap().re - ((x / 2.0).sin() / (x / 2.0)).powi(2)).abs() < 1e-15);

        let fourier = EntireSample::body_fourier(&interval(), 48, 0).unwrap();
        assert!((fourier.eval(&[0.0]).unwrap().re - 2.0).abs() < 1e-13);
        for x in [0.3, 1.0, 2.5, 7.0] {
            let v = fourier.eval(&[x]).unwrap();
            assert!((v.re - 2.0 * x.sin() / x).abs() < 1e-12, "x = {x}");
            assert!(v.im.abs() < 1e-13);
        }
        assert!(EntireSample::sinc_product(vec![1.0], 1).is_err());
        assert!(EntireSample::sinc_product(vec![-1.0], 2).is_err());
    }

    #[test]
    fn sinc_norms() {
        let sinc = EntireSample::sinc_product(vec![1.0], 2).unwrap();
        let l1 = sinc.known_norm(Exponent::finite(1.0).unwrap()).unwrap();
        assert!((l1.value - 2.0 * PI).abs() < 1e-12);
        assert!((sinc_even_power_integral(4) - 2.0 * PI / 3.0).abs() < 1e-13);
        // Odd total power has no closed form.
        assert!(sinc.known_norm(Exponent::finite(1.5).unwrap()).is_none());
        // p = 1/k is outside L_p.
        assert!(sinc.full_norm(Exponent::finite(0.5).unwrap(), 100.0).is_err());
        let bound = sinc.norm_bound(Exponent::finite(1.0).unwrap(), 400.0).unwrap();
        assert!(bound.truncated_norm() <= l1.value && l1.value <= bound.upper());
    }

    #[test]
    fn sinc_derivatives_match_closed_form() {
        let sinc = EntireSample::sinc_product(vec![1.0], 2).unwrap();
        // f = sinc(x/2)^2 = 2(1 − cos x)/x².
        let df = |x: f64| 2.0 * (x * x.sin() - 2.0 * (1.0 - x.cos())) / x.powi(3);
        for x in [0.7, 2.0, 5.5, -3.1] {
            let d = sinc.derivative(&MultiIndex(vec![1]), &[x]).unwrap().re;
            assert!((d - df(x)).abs() < 1e-12, "x = {x}: {d} vs {}", df(x));
        }
        let d2 = sinc.derivative(&MultiIndex(vec![2]), &[0.0]).unwrap().re;
        assert!((d2 + 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_examples() {
        let d1 = DiffOperator::pure(1, 1);
        let id = DiffOperator::identity(1);
        let lb = ratio_lower_bound(&EntireSample::sine(), &d1, Exponent::Infinity, 10.0, 101).unwrap();
        assert!((lb.value - 1.0).abs() < 1e-15);
        let lb = ratio_lower_bound(&EntireSample::one(1), &id, Exponent::Infinity, 10.0, 11).unwrap();
        assert_eq!(lb.value, 1.0);
        let sinc = EntireSample::sinc_product(vec![1.0], 2).unwrap();
        let lb = ratio_lower_bound(&sinc, &id, Exponent::finite(1.0).unwrap(), 50.0, 101).unwrap();
        assert!((lb.value - 1.0 / (2.0 * PI)).abs() < 1e-14);
        // Harmonics are not integrable.
        assert!(ratio_lower_bound(&EntireSample::sine(), &id, Exponent::finite(2.0).unwrap(), 10.0, 11).is_err());
    }

    #[test]
    fn bernstein_examples() {
        let alpha = MultiIndex(vec![1]);
        let r = bernstein_nikolskii_check(&EntireSample::sine(), &alpha, Exponent::Infinity, 4.0 * PI, 1601).unwrap();
        assert!((r.bernstein - 1.0).abs() < 1e-6 && r.bernstein <= 1.0 + 1e-12);
        let r = bernstein_nikolskii_check(&EntireSample::one(1), &alpha, Exponent::Infinity, 5.0, 11).unwrap();
        assert_eq!(r.bernstein, 0.0);
        let fourier = EntireSample::body_fourier(&interval(), 64, 0).unwrap();
        let r = bernstein_nikolskii_check(&fourier, &alpha, Exponent::Infinity, 20.0, 2001).unwrap();
        assert!(r.bernstein <= 1.0 + 1e-3);
        assert_eq!(r.nikolskii, Some(1.0));
    }

    #[test]
    fn decay_examples() {
        let table = approx_decay_1d(&EntireSample::sine(), 0.5, 20).unwrap();
        let e20 = table.error_at(20).unwrap();
        assert!(e20 < 1e-5, "{e20}");
        assert!(table.log_slope().unwrap() < 0.0);
        let ones = approx_decay_1d(&EntireSample::one(1), 0.5, 10).unwrap();
        assert!(ones.rows.iter().all(|(_, e)| *e == 0.0));
        assert!(approx_decay_1d(&EntireSample::sine(), 1.0, 10).is_err());
    }

    #[test]
    fn extraction_normalizes() {
        let op = DiffOperator::identity(1);
        let report =
            extremal_extraction(Exponent::finite(2.0).unwrap(), &op, &interval(), &[3, 5, 7], Default::default())
                .unwrap();
        for row in &report.rows {
            assert!(row.normalization_residual <= 1e-10);
        }
        assert!(report.rows[2].dist_to_next.is_none());
        let json = report.to_json().unwrap();
        assert_eq!(json["rows"][0]["n"], 3);
        assert_eq!(json["limit_candidate"]["values"].as_array().unwrap().len(), 512);
    }
}

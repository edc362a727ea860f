//! Norms of linear functionals `ℓ(c) = Σ L_i c_i` on a coefficient space equipped
//! with a discretized `L_p` quasinorm `‖Ac‖_p`.
//!
//! * `p = 2`: closed form `√(Lᴴ G⁻¹ L)` with the Gram matrix `G = AᵀWA`.
//! * finite `p ≠ 2`: minimize `‖Ac‖_p` subject to `ℓ(c) = 1` by iteratively
//!   reweighted least squares; each step is the `p = 2` closed form with
//!   reweighted nodes. `p > 2` uses a damped step with backtracking; `p < 2` uses
//!   the majorize–minimize step on a smoothed objective with a shrinking
//!   smoothing parameter. For `p < 1` the problem is nonconvex and is restarted
//!   from seeded perturbations.
//! * `p = ∞`: linear programming over real coefficients with an exchange of
//!   grid nodes, plus continuous refinement of the maxima in one dimension.
//!
//! Every solution is normalized so that `ℓ(c) = 1`.

use std::fmt;

use clarabel::solver::NonnegativeConeT;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::basis::{design_matrix, eval_combination, Basis};
use crate::error::{Error, Result};
use crate::lp::Acceptance;
use crate::quadrature::quasinorm_of_values;
use crate::Exponent;

/// Coefficient field of the optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    #[default]
    Complex,
}

/// How a constant was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "gram-p2")]
    GramP2,
    #[serde(rename = "lp-infinity-LP")]
    LpInfinity,
    #[serde(rename = "irls")]
    Irls,
    #[serde(rename = "multistart")]
    Multistart,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::GramP2 => "gram-p2",
            Method::LpInfinity => "lp-infinity-LP",
            Method::Irls => "irls",
            Method::Multistart => "multistart",
        })
    }
}

/// Number of seeded restarts for `p < 1`.
pub const RESTARTS: usize = 16;
/// Relative change of the value below which iteration stops.
const STAGNATION: f64 = 1e-11;
const MAX_ITERATIONS: usize = 2000;
const STAGE_ITERATIONS: usize = 300;
/// Bound on coefficients in the sup-norm LP, far above any extremal in the scaled bases.
const COEFFICIENT_BOUNDS: [f64; 3] = [1e3, 1e5, 1e7];
const MAX_EXCHANGES: usize = 200;
const VIOLATION_TOL: f64 = 1e-10;

pub(crate) struct RawSolution {
    pub coeffs: Vec<Complex64>,
    /// `|ℓ(c)| / ‖Ac‖` on the discretization.
    pub ratio: f64,
    pub method: Method,
    pub iterations: usize,
    pub restarts: usize,
}

/// Writes `L = e^{iφ} r` with `r` real, when possible.
pub(crate) fn real_phase(ell: &[Complex64]) -> Option<(Complex64, Vec<f64>)> {
    let big = ell.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm()))?;
    if big.norm() == 0.0 {
        return Some((Complex64::new(1.0, 0.0), vec![0.0; ell.len()]));
    }
    let phase = big / big.norm();
    let rotated: Vec<Complex64> = ell.iter().map(|l| l / phase).collect();
    if rotated.iter().any(|z| z.im.abs() > 1e-12 * big.norm()) {
        return None;
    }
    Some((phase, rotated.iter().map(|z| z.re).collect()))
}

fn vanishing() -> Error {
    Error::InvalidInput("the functional vanishes on the whole space (operator order exceeds degree?)".into())
}

/// `AᵀUA`.
fn gram(a: &DMatrix<f64>, u: &[f64]) -> DMatrix<f64> {
    let mut au = a.clone();
    for (i, ui) in u.iter().enumerate() {
        au.row_mut(i).scale_mut(*ui);
    }
    a.tr_mul(&au)
}

fn cholesky(g: DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(g).ok_or_else(|| {
        Error::DegenerateRule("Gram matrix is not positive definite; increase the resolution".into())
    })
}

/// Complex coefficient vector as a pair of real vectors.
#[derive(Clone)]
struct Coeffs {
    re: DVector<f64>,
    im: DVector<f64>,
}

impl Coeffs {
    fn lerp(&self, other: &Coeffs, t: f64) -> Coeffs {
        Coeffs { re: &self.re + (&other.re - &self.re) * t, im: &self.im + (&other.im - &self.im) * t }
    }

    fn to_complex(&self, phase: Complex64) -> Vec<Complex64> {
        self.re.iter().zip(self.im.iter()).map(|(r, i)| Complex64::new(*r, *i) / phase).collect()
    }
}

/// Minimizer of `cᴴ(AᵀUA)c` subject to `(lr + i·li)·c = 1`: `c = G⁻¹ conj(L) / (Lᵀ G⁻¹ conj(L))`.
fn weighted_minimizer(a: &DMatrix<f64>, u: &[f64], lr: &DVector<f64>, li: &DVector<f64>) -> Result<Coeffs> {
    let chol = cholesky(gram(a, u))?;
    let xr = chol.solve(lr);
    let xi = chol.solve(li);
    let q = lr.dot(&xr) + li.dot(&xi);
    if !(q > 0.0) {
        return Err(vanishing());
    }
    Ok(Coeffs { re: xr / q, im: -xi / q })
}

fn magnitudes(a: &DMatrix<f64>, c: &Coeffs) -> Vec<f64> {
    let rr = a * &c.re;
    let ri = a * &c.im;
    rr.iter().zip(ri.iter()).map(|(x, y)| x.hypot(*y)).collect()
}

/// `Σ w |r|^p`.
fn objective(a: &DMatrix<f64>, w: &[f64], c: &Coeffs, p: f64) -> f64 {
    let mags = magnitudes(a, c);
    quasinorm_of_values(&mags, w, Exponent::Finite(p)).powf(p)
}

/// Solves the finite-`p` problem on the node set with design matrix `a` and weights `w`.
pub(crate) fn solve_finite(
    a: &DMatrix<f64>,
    w: &[f64],
    ell: &[Complex64],
    p: f64,
    field: Field,
    seed: u64,
) -> Result<RawSolution> {
    let b = ell.len();
    let (phase, lr, li) = match field {
        Field::Complex => (
            Complex64::new(1.0, 0.0),
            DVector::from_iterator(b, ell.iter().map(|z| z.re)),
            DVector::from_iterator(b, ell.iter().map(|z| z.im)),
        ),
        Field::Real => match real_phase(ell) {
            Some((phase, r)) => (phase, DVector::from_vec(r), DVector::zeros(b)),
            None if p == 2.0 => return real_noncollinear_p2(a, w, ell),
            None => {
                return Err(Error::Unsupported(
                    "real coefficients with a functional that is not a complex multiple of a real one".into(),
                ))
            }
        },
    };
    if lr.norm() == 0.0 && li.norm() == 0.0 {
        return Err(vanishing());
    }
    let start = weighted_minimizer(a, w, &lr, &li)?;
    let finish = |c: Coeffs, method, iterations, restarts| {
        let f = objective(a, w, &c, p);
        RawSolution { coeffs: c.to_complex(phase), ratio: f.powf(-1.0 / p), method, iterations, restarts }
    };
    if p == 2.0 {
        return Ok(finish(start, Method::GramP2, 1, 0));
    }
    let (mut best, mut iterations) = irls(a, w, &lr, &li, p, start.clone())?;
    if p >= 1.0 {
        return Ok(finish(best, Method::Irls, iterations, 0));
    }
    let mut best_f = objective(a, w, &best, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 0.5 * (start.re.norm_squared() + start.im.norm_squared()).sqrt();
    // Starting points are drawn sequentially so the result does not depend on scheduling.
    let inits: Vec<Coeffs> = (0..RESTARTS)
        .filter_map(|_| {
            let zr = DVector::from_iterator(b, (0..b).map(|_| rng.gen_range(-1.0..1.0)));
            let zi = match field {
                Field::Complex => DVector::from_iterator(b, (0..b).map(|_| rng.gen_range(-1.0..1.0))),
                Field::Real => DVector::zeros(b),
            };
            // Remove the component along the constraint: z ← z − c₀·ℓ(z).
            let (lz_re, lz_im) = (lr.dot(&zr) - li.dot(&zi), lr.dot(&zi) + li.dot(&zr));
            let pr = &zr - (&start.re * lz_re - &start.im * lz_im);
            let pi = &zi - (&start.re * lz_im + &start.im * lz_re);
            let norm = (pr.norm_squared() + pi.norm_squared()).sqrt();
            (norm > 0.0).then(|| {
                let s = scale / norm;
                Coeffs { re: &start.re + pr * s, im: &start.im + pi * s }
            })
        })
        .collect();
    let runs: Vec<(Coeffs, usize)> =
        inits.into_par_iter().map(|init| irls(a, w, &lr, &li, p, init)).collect::<Result<_>>()?;
    for (c, its) in runs {
        iterations += its;
        let f = objective(a, w, &c, p);
        if f < best_f {
            best_f = f;
            best = c;
        }
    }
    Ok(finish(best, Method::Multistart, iterations, RESTARTS))
}

/// Real coefficients at `p = 2` when `Re L` and `Im L` are independent:
/// the largest eigenvalue of the 2×2 compression of `G⁻¹(L_r L_rᵀ + L_i L_iᵀ)`.
fn real_noncollinear_p2(a: &DMatrix<f64>, w: &[f64], ell: &[Complex64]) -> Result<RawSolution> {
    let b = ell.len();
    let lr = DVector::from_iterator(b, ell.iter().map(|z| z.re));
    let li = DVector::from_iterator(b, ell.iter().map(|z| z.im));
    let chol = cholesky(gram(a, w))?;
    let xr = chol.solve(&lr);
    let xi = chol.solve(&li);
    let m = nalgebra::Matrix2::new(lr.dot(&xr), lr.dot(&xi), li.dot(&xr), li.dot(&xi));
    let eig = m.symmetric_eigen();
    let k = if eig.eigenvalues[0] >= eig.eigenvalues[1] { 0 } else { 1 };
    let v = eig.eigenvectors.column(k);
    let c = &xr * v[0] + &xi * v[1];
    let lc = Complex64::new(lr.dot(&c), li.dot(&c));
    if lc.norm() == 0.0 {
        return Err(vanishing());
    }
    // Real rescaling can fix |ℓ(c)| = 1 and the sign, not the phase.
    let sign = if lc.re > 0.0 || (lc.re == 0.0 && lc.im > 0.0) { 1.0 } else { -1.0 };
    let c = c * (sign / lc.norm());
    let coeffs: Vec<Complex64> = c.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    let norm = quasinorm_of_values(&magnitudes(a, &Coeffs { re: c, im: DVector::zeros(b) }), w, Exponent::Finite(2.0));
    Ok(RawSolution { coeffs, ratio: 1.0 / norm, method: Method::GramP2, iterations: 1, restarts: 0 })
}

/// Iteratively reweighted least squares from a feasible start.
fn irls(
    a: &DMatrix<f64>,
    w: &[f64],
    lr: &DVector<f64>,
    li: &DVector<f64>,
    p: f64,
    start: Coeffs,
) -> Result<(Coeffs, usize)> {
    let mut c = start;
    let mut iterations = 0;
    if p > 2.0 {
        let theta0 = 1.0 / (p - 1.0);
        let mut f = objective(a, w, &c, p);
        while iterations < MAX_ITERATIONS {
            iterations += 1;
            let mags = magnitudes(a, &c);
            let floor = 1e-30 * mags.iter().fold(0.0f64, |m, v| m.max(*v)).powi(2);
            let u: Vec<f64> = mags.iter().zip(w).map(|(r, wi)| wi * (r * r + floor).powf(0.5 * (p - 2.0))).collect();
            let target = weighted_minimizer(a, &u, lr, li)?;
            let mut theta = theta0;
            let mut accepted = None;
            while theta > 1e-6 {
                let trial = c.lerp(&target, theta);
                let ft = objective(a, w, &trial, p);
                if ft < f {
                    accepted = Some((trial, ft));
                    break;
                }
                theta *= 0.5;
            }
            let Some((trial, ft)) = accepted else { break };
            let rel = (f - ft) / f;
            c = trial;
            f = ft;
            if rel / p < STAGNATION {
                break;
            }
        }
        return Ok((c, iterations));
    }
    // p < 2: majorize–minimize on Σ w (|r|² + ε²)^{p/2}, shrinking ε.
    let rmax = magnitudes(a, &c).iter().fold(0.0f64, |m, v| m.max(*v));
    let mut best_f = objective(a, w, &c, p);
    let mut best = c.clone();
    let mut eps = 0.1 * rmax;
    let smoothed = |c: &Coeffs, eps: f64| -> f64 {
        let terms: Vec<f64> =
            magnitudes(a, c).iter().zip(w).map(|(r, wi)| wi * (r * r + eps * eps).powf(0.5 * p)).collect();
        crate::quadrature::pairwise_sum(&terms)
    };
    while eps > 1e-8 * rmax && iterations < MAX_ITERATIONS {
        let mut fe = smoothed(&c, eps);
        for _ in 0..STAGE_ITERATIONS {
            iterations += 1;
            let mags = magnitudes(a, &c);
            let u: Vec<f64> =
                mags.iter().zip(w).map(|(r, wi)| wi * (r * r + eps * eps).powf(0.5 * (p - 2.0))).collect();
            c = weighted_minimizer(a, &u, lr, li)?;
            let f_true = objective(a, w, &c, p);
            if f_true < best_f {
                best_f = f_true;
                best = c.clone();
            }
            let fe_new = smoothed(&c, eps);
            let rel = (fe - fe_new).abs() / fe;
            fe = fe_new;
            if rel / p < STAGNATION {
                break;
            }
        }
        eps *= 0.1;
    }
    Ok((best, iterations))
}

/// Sup-norm discretization: candidate points, and in one dimension the interval
/// on which local maxima are refined continuously.
#[derive(Debug, Clone)]
pub(crate) struct SupGrid {
    pub points: Vec<Vec<f64>>,
    pub interval: Option<(f64, f64)>,
}

/// `max |P|` over the grid, with local maxima refined by golden-section search in one dimension.
pub(crate) fn sup_norm(basis: &dyn Basis, coeffs: &[Complex64], grid: &SupGrid) -> f64 {
    let grid_max = grid.points.iter().map(|x| eval_combination(basis, coeffs, x).norm()).fold(0.0, f64::max);
    match grid.interval {
        None => grid_max,
        Some(iv) => refined_maxima(basis, coeffs, grid, iv).iter().map(|(_, v)| *v).fold(grid_max, f64::max),
    }
}

fn refined_maxima(basis: &dyn Basis, coeffs: &[Complex64], grid: &SupGrid, (lo, hi): (f64, f64)) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = grid.points.iter().map(|x| x[0]).chain([lo, hi]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let f = |x: f64| eval_combination(basis, coeffs, &[x]).norm();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < xs.len() { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] < left || vals[i] < right {
            continue;
        }
        let a = if i > 0 { xs[i - 1] } else { xs[i] };
        let b = if i + 1 < xs.len() { xs[i + 1] } else { xs[i] };
        let (x, v) = golden_max(&f, a, b);
        if v > vals[i] {
            out.push((x, v));
        } else {
            out.push((xs[i], vals[i]));
        }
    }
    out
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    if a == b {
        return (a, f(a));
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        if b - a < 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes `r·c` subject to `|a_i·c| ≤ 1` on the given rows and `|c_j| ≤ bound`.
fn lp_max(rows: &[&[f64]], r: &[f64], bound: f64) -> Result<Vec<f64>> {
    let b = r.len();
    let m = rows.len();
    // Columns of [A; -A; I; -I].
    let columns: Vec<Vec<f64>> = (0..b)
        .map(|j| {
            let mut col = vec![0.0; 2 * m + 2 * b];
            for (i, row) in rows.iter().enumerate() {
                col[i] = row[j];
                col[m + i] = -row[j];
            }
            col[2 * m + j] = 1.0;
            col[2 * m + b + j] = -1.0;
            col
        })
        .collect();
    let a = crate::lp::csc_from_columns(2 * m + 2 * b, &columns);
    let q: Vec<f64> = r.iter().map(|x| -x).collect();
    let rhs: Vec<f64> = std::iter::repeat_n(1.0, 2 * m).chain(std::iter::repeat_n(bound, 2 * b)).collect();
    crate::lp::minimize(&q, &a, &rhs, &[NonnegativeConeT(2 * m + 2 * b)], Acceptance::LastIterate, "sup-norm")
}

/// Sup-norm problem with real coefficients (up to a common phase of the functional).
/// Cutting-plane exchange: maximize the functional subject to |P| ≤ 1 on a
/// growing active subset of the grid until no grid node violates the bound.
fn exchange(basis: &dyn Basis, grid: &SupGrid, r: &[f64], bound: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>, usize)> {
    let b = basis.len();
    let mut points = grid.points.clone();
    let a = design_matrix(basis, &points);
    let mut rows: Vec<Vec<f64>> = (0..points.len()).map(|i| a.row(i).iter().copied().collect()).collect();
    let mut active = vec![false; points.len()];
    let target = (8 * b).max(64);
    let stride = (points.len() / target).max(1);
    for i in (0..points.len()).step_by(stride) {
        active[i] = true;
    }
    if let Some(origin) = points.iter().position(|x| x.iter().all(|v| *v == 0.0)) {
        active[origin] = true;
    }
    let mut c = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_EXCHANGES {
        iterations += 1;
        let active_rows: Vec<&[f64]> = rows.iter().zip(&active).filter(|(_, on)| **on).map(|(r, _)| r.as_slice()).collect();
        c = lp_max(&active_rows, r, bound)?;
        let mut violations: Vec<(usize, f64)> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| !active[*i])
            .map(|(i, row)| (i, row.iter().zip(&c).map(|(x, y)| x * y).sum::<f64>().abs()))
            .filter(|(_, v)| *v > 1.0 + VIOLATION_TOL)
            .collect();
        violations.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        let mut added = 0;
        for (i, _) in violations.into_iter().take(b.max(16)) {
            active[i] = true;
            added += 1;
        }
        if let Some(iv) = grid.interval {
            let cc: Vec<Complex64> = c.iter().map(|x| Complex64::new(*x, 0.0)).collect();
            let base = SupGrid { points: points.clone(), interval: grid.interval };
            for (x, v) in refined_maxima(basis, &cc, &base, iv) {
                if v > 1.0 + VIOLATION_TOL && !points.iter().any(|p| p[0] == x) {
                    let mut row = vec![0.0; b];
                    basis.eval_into(&[x], &mut row);
                    points.push(vec![x]);
                    rows.push(row);
                    active.push(true);
                    added += 1;
                }
            }
        }
        if added == 0 {
            break;
        }
    }
    Ok((c, rows, iterations))
}

pub(crate) fn solve_sup(basis: &dyn Basis, grid: &SupGrid, ell: &[Complex64]) -> Result<RawSolution> {
    let (phase, r) = real_phase(ell).ok_or_else(|| {
        Error::Unsupported("the sup-norm solver needs a functional that is a complex multiple of a real one".into())
    })?;
    if r.iter().all(|x| *x == 0.0) {
        return Err(vanishing());
    }
    let mut attempt = None;
    for bound in COEFFICIENT_BOUNDS {
        let (c, rows, iterations) = exchange(basis, grid, &r, bound)?;
        let saturated = c.iter().any(|x| x.abs() > 0.5 * bound);
        attempt = Some((c, rows, iterations));
        if !saturated {
            break;
        }
        attempt = None;
    }
    let (c, rows, iterations) =
        attempt.ok_or_else(|| Error::DegenerateRule("the sup grid does not determine the polynomial".into()))?;
    let certify = |c: &[f64]| -> Option<(Vec<Complex64>, f64)> {
        let value: f64 = r.iter().zip(c).map(|(x, y)| x * y).sum();
        if !(value > 0.0) {
            return None;
        }
        let coeffs: Vec<Complex64> = c.iter().map(|x| Complex64::new(x / value, 0.0) / phase).collect();
        let sup = sup_norm(basis, &coeffs, grid);
        Some((coeffs, 1.0 / sup))
    };
    let (mut coeffs, mut ratio) = certify(&c)
        .ok_or_else(|| Error::Internal("sup-norm LP returned a nonpositive value".into()))?;
    if let Some((pc, pr)) = polish(&rows, &c).and_then(|pc| certify(&pc)) {
        if pr > ratio {
            coeffs = pc;
            ratio = pr;
        }
    }
    Ok(RawSolution { coeffs, ratio, method: Method::LpInfinity, iterations, restarts: 0 })
}

/// Removes the simplex tolerance from an LP vertex: the nodes where `|P| ≈ 1`
/// are made to hold with equality by the least-norm correction of `c`.
fn polish(rows: &[Vec<f64>], c: &[f64]) -> Option<Vec<f64>> {
    const TIGHT: f64 = 1e-6;
    let tight: Vec<(&Vec<f64>, f64)> = rows
        .iter()
        .filter_map(|row| {
            let v: f64 = row.iter().zip(c).map(|(x, y)| x * y).sum();
            (v.abs() >= 1.0 - TIGHT).then_some((row, v))
        })
        .collect();
    if tight.is_empty() {
        return None;
    }
    let b = c.len();
    let a = DMatrix::from_fn(tight.len(), b, |i, j| tight[i].0[j]);
    let resid = DVector::from_iterator(tight.len(), tight.iter().map(|(_, v)| v.signum() - v));
    let delta = a.svd(true, true).solve(&resid, 1e-12).ok()?;
    Some(c.iter().zip(delta.iter()).map(|(x, d)| x + d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::basis::ChebyshevBasis;
    use crate::quadrature::{gauss_legendre, gauss_lobatto};

    fn interval_problem(n: u32, k: usize) -> (ChebyshevBasis, DMatrix<f64>, Vec<f64>) {
        let basis = ChebyshevBasis::new(n, vec![1.0]).unwrap();
        let (x, w) = gauss_legendre(k);
        let pts: Vec<Vec<f64>> = x.iter().map(|v| vec![*v]).collect();
        let a = design_matrix(&basis, &pts);
        (basis, a, w)
    }

    #[test]
    fn p2_closed_form_matches_hand_inversion() {
        let (basis, a, w) = interval_problem(2, 8);
        let ell = basis.functional(&crate::poly::DiffOperator::identity(1)).unwrap();
        let sol = solve_finite(&a, &w, &ell, 2.0, Field::Complex, 0).unwrap();
        assert!((sol.ratio - (9.0f64 / 8.0).sqrt()).abs() < 1e-13);
        let lc: Complex64 = ell.iter().zip(&sol.coeffs).map(|(l, c)| l * c).sum();
        assert!((lc - 1.0).norm() < 1e-13);
    }

    #[test]
    fn irls_reproduces_p2_and_is_monotone_in_p() {
        let (basis, a, w) = interval_problem(6, 40);
        let ell = basis.functional(&crate::poly::DiffOperator::identity(1)).unwrap();
        let closed = solve_finite(&a, &w, &ell, 2.0, Field::Complex, 0).unwrap().ratio;
        let lr = DVector::from_iterator(ell.len(), ell.iter().map(|z| z.re));
        let li = DVector::zeros(ell.len());
        let start = weighted_minimizer(&a, &w, &lr, &li).unwrap();
        let (c, _) = irls(&a, &w, &lr, &li, 2.0 + 1e-12, start).unwrap();
        let v = objective(&a, &w, &c, 2.0).powf(-0.5);
        assert!((v - closed).abs() < 1e-9 * closed);
        // ‖P‖_p·2^{-1/p} grows with p, so the normalized ratio 2^{1/p}·value decreases.
        let mut prev = f64::INFINITY;
        for p in [1.0, 1.5, 2.0, 3.0, 6.0] {
            let r = solve_finite(&a, &w, &ell, p, Field::Complex, 0).unwrap().ratio * 2f64.powf(1.0 / p);
            assert!(r <= prev * (1.0 + 1e-9), "p = {p}");
            prev = r;
        }
    }

    #[test]
    fn sup_solver_recovers_chebyshev() {
        for n in [3u32, 7, 11] {
            let basis = ChebyshevBasis::new(n, vec![1.0]).unwrap();
            let (x, _) = gauss_lobatto(4 * n as usize + 16);
            let grid = SupGrid { points: x.iter().map(|v| vec![*v]).collect(), interval: Some((-1.0, 1.0)) };
            let ell = basis.functional(&crate::poly::DiffOperator::pure(1, 1)).unwrap();
            let sol = solve_sup(&basis, &grid, &ell).unwrap();
            assert!((sol.ratio - f64::from(n)).abs() < 1e-7 * f64::from(n), "n = {n}: {}", sol.ratio);
        }
    }

    #[test]
    fn real_phase_detection() {
        let i = Complex64::new(0.0, 1.0);
        let (ph, r) = real_phase(&[i * 2.0, i * -1.0]).unwrap();
        assert!((ph - i).norm() < 1e-15);
        assert_eq!(r, vec![2.0, -1.0]);
        assert!(real_phase(&[Complex64::new(1.0, 0.0), i]).is_none());
    }
}

//! Deterministic product quadrature on `V*`, on `V`, on boxes and on the torus,
//! and `L_p` quasinorms (`0 < p ≤ ∞`) evaluated with it.
//!
//! Rules over a body are built in polar form around the origin. Polytopal
//! regions are fanned into simplices `conv(0, facet)` and each simplex is
//! integrated in collapsed coordinates `x = r·(A + s(B - A) + …)`, which is exact
//! for polynomials up to the degree of the 1D rules. Smooth regions use a
//! periodic angular grid (`m = 2`) or a Gauss-in-`cos θ` by uniform-azimuth grid
//! (`m = 3`) with a Gauss radial rule on `[0, ρ(u)]`.

pub mod bari;
pub mod gauss;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::geometry::ConvexBody;

pub use gauss::{composite_gauss, gauss_legendre, gauss_lobatto, rule_on_interval, NodeScheme};

/// Number of Monte Carlo samples used to validate the mass of a body rule.
const MC_SAMPLES: usize = 20_000;
const MC_SEED: u64 = 0x5eed_0fb0_d1e5;

/// What a rule integrates over.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RuleDomain {
    /// The polar `V*` of the named body.
    Polar { body: String },
    /// The body `V` itself.
    Body { body: String },
    /// An axis-parallel box.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// The torus `[-π, π)^m`.
    Torus { dim: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleResolution {
    pub radial: usize,
    pub angular: usize,
    pub scheme: NodeScheme,
}

/// Nodes and positive weights discretizing an integral.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: RuleDomain,
    resolution: RuleResolution,
}

impl QuadratureRule {
    /// Assembles a rule from flat node coordinates (`dim` per node); zero-weight nodes are dropped.
    pub fn from_parts(
        dim: usize,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        domain: RuleDomain,
        resolution: RuleResolution,
    ) -> Result<Self> {
        if dim == 0 || nodes.len() != dim * weights.len() {
            return Err(Error::InvalidInput(format!(
                "rule has {} coordinates for {} weights in dimension {dim}",
                nodes.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::DegenerateRule(format!("invalid weight {w}")));
        }
        let mut kept_nodes = Vec::with_capacity(nodes.len());
        let mut kept_weights = Vec::with_capacity(weights.len());
        for (x, &w) in nodes.chunks(dim).zip(&weights) {
            if w > 0.0 {
                kept_nodes.extend_from_slice(x);
                kept_weights.push(w);
            }
        }
        if kept_weights.is_empty() {
            return Err(Error::DegenerateRule("rule has no positive weights".into()));
        }
        Ok(Self { dim, nodes: kept_nodes, weights: kept_weights, domain, resolution })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> &RuleDomain {
        &self.domain
    }

    pub fn resolution(&self) -> &RuleResolution {
        &self.resolution
    }

    /// `Σ w_i`, the measure of the domain.
    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// `∫ f` over the domain.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        let terms: Vec<f64> = self.nodes().zip(&self.weights).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }

    /// Tensor rule on the box `∏[lo_j, hi_j]` with `per_axis` nodes of the given family per axis.
    pub fn tensor(lo: &[f64], hi: &[f64], per_axis: usize, scheme: NodeScheme) -> Result<Self> {
        let axes: Vec<(Vec<f64>, Vec<f64>)> =
            lo.iter().zip(hi).map(|(a, b)| rule_on_interval(scheme, per_axis, *a, *b)).collect();
        Self::from_axes(lo, hi, &axes, RuleResolution { radial: per_axis, angular: 0, scheme })
    }

    /// Composite Gauss tensor rule: `panels` panels of `k` nodes per axis.
    pub fn tensor_composite(lo: &[f64], hi: &[f64], k: usize, panels: usize) -> Result<Self> {
        let axes: Vec<(Vec<f64>, Vec<f64>)> =
            lo.iter().zip(hi).map(|(a, b)| composite_gauss(k, panels, *a, *b)).collect();
        Self::from_axes(lo, hi, &axes, RuleResolution { radial: k * panels, angular: 0, scheme: NodeScheme::Gauss })
    }

    fn from_axes(lo: &[f64], hi: &[f64], axes: &[(Vec<f64>, Vec<f64>)], resolution: RuleResolution) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidInput("box bounds must be nonempty and of equal length".into()));
        }
        if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidInput("box bounds must satisfy lo < hi".into()));
        }
        let dim = lo.len();
        let mut nodes = vec![Vec::new()];
        let mut weights = vec![1.0];
        for (x, w) in axes {
            let mut next_nodes = Vec::with_capacity(nodes.len() * x.len());
            let mut next_weights = Vec::with_capacity(nodes.len() * x.len());
            for (base, bw) in nodes.iter().zip(&weights) {
                for (xi, wi) in x.iter().zip(w) {
                    let mut p: Vec<f64> = base.clone();
                    p.push(*xi);
                    next_nodes.push(p);
                    next_weights.push(bw * wi);
                }
            }
            nodes = next_nodes;
            weights = next_weights;
        }
        Self::from_parts(
            dim,
            nodes.concat(),
            weights,
            RuleDomain::Box { lo: lo.to_vec(), hi: hi.to_vec() },
            resolution,
        )
    }

    /// Trapezoidal rule on `[-π, π)^m`, exact for trigonometric polynomials of degree below `per_axis`.
    pub fn torus(dim: usize, per_axis: usize) -> Result<Self> {
        if per_axis == 0 || dim == 0 {
            return Err(Error::InvalidInput("torus rule needs a positive grid".into()));
        }
        let h = 2.0 * std::f64::consts::PI / per_axis as f64;
        let axis: Vec<f64> = (0..per_axis).map(|j| -std::f64::consts::PI + h * j as f64).collect();
        let count = per_axis.pow(dim as u32);
        let mut nodes = Vec::with_capacity(count * dim);
        for idx in 0..count {
            let mut rest = idx;
            let mut pt = vec![0.0; dim];
            for j in (0..dim).rev() {
                pt[j] = axis[rest % per_axis];
                rest /= per_axis;
            }
            nodes.extend(pt);
        }
        Self::from_parts(
            dim,
            nodes,
            vec![h.powi(dim as i32); count],
            RuleDomain::Torus { dim },
            RuleResolution { radial: per_axis, angular: 0, scheme: NodeScheme::Gauss },
        )
    }
}

/// Region integrated by a polar-form rule.
#[derive(Clone, Copy)]
enum Region<'a> {
    Polar(&'a ConvexBody),
    Body(&'a ConvexBody),
}

impl Region<'_> {
    fn body(&self) -> &ConvexBody {
        match self {
            Region::Polar(b) | Region::Body(b) => b,
        }
    }

    /// Distance from the origin to the boundary along the unit vector `u`.
    fn radius(&self, u: &[f64]) -> Result<f64> {
        match self {
            Region::Polar(b) => b.polar_radius(u),
            Region::Body(b) => Ok(1.0 / b.gauge(u)?),
        }
    }

    fn contains(&self, x: &[f64]) -> Result<bool> {
        match self {
            Region::Polar(b) => b.polar_membership(x),
            Region::Body(b) => b.contains(x),
        }
    }

    fn axis_extent(&self, j: usize) -> Result<f64> {
        let b = self.body();
        let mut e = vec![0.0; b.dim()];
        e[j] = 1.0;
        match self {
            Region::Polar(_) => b.gauge(&e),
            Region::Body(_) => b.dual_norm(&e),
        }
    }

    fn domain(&self) -> RuleDomain {
        match self {
            Region::Polar(b) => RuleDomain::Polar { body: b.to_string() },
            Region::Body(b) => RuleDomain::Body { body: b.to_string() },
        }
    }

    /// Boundary facets as simplices when the region is a polytope the fan construction handles.
    fn facets(&self) -> Option<Vec<Vec<Vec<f64>>>> {
        let b = self.body();
        match b.dim() {
            2 => {
                let poly: Vec<[f64; 2]> = match self {
                    Region::Polar(b) => b.polar_polygon()?.to_vec(),
                    Region::Body(b) => b.hull_polygon()?,
                };
                let k = poly.len();
                Some((0..k).map(|i| vec![poly[i].to_vec(), poly[(i + 1) % k].to_vec()]).collect())
            }
            3 => {
                let inv = |s: Vec<f64>| -> Vec<f64> { s.iter().map(|x| 1.0 / x).collect() };
                match (self, b.box_scales(), b.cross_scales()) {
                    (Region::Polar(_), Some(s), _) => Some(cross_facets(&inv(s))),
                    (Region::Polar(_), _, Some(s)) => Some(box_facets(&inv(s))),
                    (Region::Body(_), Some(s), _) => Some(box_facets(&s)),
                    (Region::Body(_), _, Some(s)) => Some(cross_facets(&s)),
                    _ => None,
                }
            }
            _ => None,
        }
    }
}

fn cross_facets(h: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(8);
    for mask in 0..8u32 {
        let s = |j: u32| if mask >> j & 1 == 1 { -1.0 } else { 1.0 };
        out.push(vec![
            vec![s(0) * h[0], 0.0, 0.0],
            vec![0.0, s(1) * h[1], 0.0],
            vec![0.0, 0.0, s(2) * h[2]],
        ]);
    }
    out
}

fn box_facets(h: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(12);
    for j in 0..3 {
        let (k, l) = ((j + 1) % 3, (j + 2) % 3);
        for sign in [1.0, -1.0] {
            let corner = |a: f64, b: f64| {
                let mut p = vec![0.0; 3];
                p[j] = sign * h[j];
                p[k] = a * h[k];
                p[l] = b * h[l];
                p
            };
            let c = [corner(-1.0, -1.0), corner(1.0, -1.0), corner(1.0, 1.0), corner(-1.0, 1.0)];
            out.push(vec![c[0].clone(), c[1].clone(), c[2].clone()]);
            out.push(vec![c[0].clone(), c[2].clone(), c[3].clone()]);
        }
    }
    out
}

fn det(rows: &[Vec<f64>]) -> f64 {
    match rows.len() {
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        3 => {
            let (a, b, c) = (&rows[0], &rows[1], &rows[2]);
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
        }
        _ => unreachable!("fan facets exist only for m = 2, 3"),
    }
}

/// Polar-form rule on `V*` with Gauss nodes.
pub fn build_rule_body(body: &ConvexBody, radial_points: usize, angular_points: usize) -> Result<QuadratureRule> {
    build_rule_body_with(body, radial_points, angular_points, NodeScheme::Gauss)
}

/// Polar-form rule on `V*` with the given node family. Lobatto nodes put points on `∂(V*)`,
/// which the sup-norm grids rely on.
pub fn build_rule_body_with(
    body: &ConvexBody,
    radial_points: usize,
    angular_points: usize,
    scheme: NodeScheme,
) -> Result<QuadratureRule> {
    build_rule(Region::Polar(body), radial_points, angular_points, scheme)
}

/// Polar-form rule on the body `V` itself.
pub fn build_rule_region(body: &ConvexBody, radial_points: usize, angular_points: usize) -> Result<QuadratureRule> {
    build_rule(Region::Body(body), radial_points, angular_points, NodeScheme::Gauss)
}

fn build_rule(region: Region<'_>, radial: usize, angular: usize, scheme: NodeScheme) -> Result<QuadratureRule> {
    let m = region.body().dim();
    if m > 3 {
        return Err(Error::Config(format!("quadrature supports m <= 3, got m = {m}")));
    }
    if radial < 8 {
        return Err(Error::Config(format!("radial resolution must be at least 8, got {radial}")));
    }
    let resolution = RuleResolution { radial, angular, scheme };
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    if m == 1 {
        let e = region.axis_extent(0)?;
        let (x, mut w) = rule_on_interval(scheme, radial, -e, e);
        absorb_mass_residual(&mut w, 2.0 * e);
        return QuadratureRule::from_parts(1, x, w, region.domain(), resolution);
    }
    let (r, wr) = rule_on_interval(scheme, radial, 0.0, 1.0);
    if let Some(facets) = region.facets() {
        // Collapsed coordinates on each simplex conv(0, facet).
        let (s, ws) = rule_on_interval(scheme, radial, 0.0, 1.0);
        for facet in &facets {
            let vol = det(facet).abs();
            match m {
                2 => {
                    let (a, b) = (&facet[0], &facet[1]);
                    for (si, wsi) in s.iter().zip(&ws) {
                        let y = [a[0] + si * (b[0] - a[0]), a[1] + si * (b[1] - a[1])];
                        for (ri, wri) in r.iter().zip(&wr) {
                            nodes.extend([ri * y[0], ri * y[1]]);
                            weights.push(wri * wsi * ri * vol);
                        }
                    }
                }
                _ => {
                    let (a, b, c) = (&facet[0], &facet[1], &facet[2]);
                    for (si, wsi) in s.iter().zip(&ws) {
                        for (ti, wti) in s.iter().zip(&ws) {
                            let y: Vec<f64> =
                                (0..3).map(|j| a[j] + si * (b[j] - a[j]) + si * ti * (c[j] - b[j])).collect();
                            for (ri, wri) in r.iter().zip(&wr) {
                                nodes.extend(y.iter().map(|v| ri * v));
                                weights.push(wri * wsi * wti * ri * ri * si * vol);
                            }
                        }
                    }
                }
            }
        }
    } else if m == 2 {
        if angular < 8 {
            return Err(Error::Config(format!("angular resolution must be at least 8, got {angular}")));
        }
        let h = 2.0 * std::f64::consts::PI / angular as f64;
        for k in 0..angular {
            let th = h * k as f64;
            let u = [th.cos(), th.sin()];
            let rho = region.radius(&u)?;
            for (ri, wri) in r.iter().zip(&wr) {
                let rad = ri * rho;
                nodes.extend([rad * u[0], rad * u[1]]);
                weights.push(h * wri * rho * rad);
            }
        }
    } else {
        if angular < 8 {
            return Err(Error::Config(format!("angular resolution must be at least 8, got {angular}")));
        }
        let (z, wz) = gauss_legendre(angular);
        let h = 2.0 * std::f64::consts::PI / angular as f64;
        for (zi, wzi) in z.iter().zip(&wz) {
            let st = (1.0 - zi * zi).sqrt();
            for k in 0..angular {
                let ph = h * k as f64;
                let u = [st * ph.cos(), st * ph.sin(), *zi];
                let rho = region.radius(&u)?;
                for (ri, wri) in r.iter().zip(&wr) {
                    let rad = ri * rho;
                    nodes.extend(u.iter().map(|v| rad * v));
                    weights.push(wzi * h * wri * rho * rad * rad);
                }
            }
        }
    }
    let rule = QuadratureRule::from_parts(m, nodes, weights, region.domain(), resolution)?;
    validate_mass(&region, &rule)?;
    Ok(rule)
}

/// Moves the rounding residual of `Σ w` against the exact `mass` into the largest weight,
/// so a 1D rule reproduces the interval length to the last bit whenever that is representable.
fn absorb_mass_residual(weights: &mut [f64], mass: f64) {
    let Some(imax) = (0..weights.len()).max_by(|&i, &j| weights[i].total_cmp(&weights[j])) else {
        return;
    };
    for _ in 0..4 {
        let residual = mass - pairwise_sum(weights);
        if residual == 0.0 {
            break;
        }
        weights[imax] += residual;
    }
}

/// Compares the rule mass with an independent Monte Carlo volume estimate.
fn validate_mass(region: &Region<'_>, rule: &QuadratureRule) -> Result<()> {
    let m = rule.dim();
    let ext: Vec<f64> = (0..m).map(|j| region.axis_extent(j)).collect::<Result<_>>()?;
    let box_vol: f64 = ext.iter().map(|e| 2.0 * e).product();
    let mut rng = ChaCha8Rng::seed_from_u64(MC_SEED);
    let mut hits = 0usize;
    let mut x = vec![0.0; m];
    for _ in 0..MC_SAMPLES {
        for (xj, e) in x.iter_mut().zip(&ext) {
            *xj = rng.gen_range(-*e..*e);
        }
        if region.contains(&x)? {
            hits += 1;
        }
    }
    let frac = hits as f64 / MC_SAMPLES as f64;
    let estimate = frac * box_vol;
    let sigma = box_vol * (frac * (1.0 - frac) / MC_SAMPLES as f64).sqrt();
    let mass = rule.total_weight();
    if (mass - estimate).abs() > 5.0 * sigma + 1e-3 * mass {
        return Err(Error::DegenerateRule(format!(
            "rule mass {mass} disagrees with Monte Carlo volume {estimate} ± {sigma}"
        )));
    }
    Ok(())
}

/// `(Σ w_i |F(x_i)|^p)^{1/p}`, or `max_i |F(x_i)|` for `p = ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasinormValue {
    pub value: f64,
    pub p: Exponent,
    pub domain: RuleDomain,
    /// Difference against a coarser rule, when one was supplied.
    pub discretization_error: Option<f64>,
}

/// `L_p` quasinorm of `f` on the rule's domain. For `p = ∞` this is the grid
/// maximum, which approaches the essential supremum from below as the grid refines.
pub fn lp_quasinorm(f: impl Fn(&[f64]) -> Complex64, rule: &QuadratureRule, p: Exponent) -> Result<QuasinormValue> {
    let mut mags = Vec::with_capacity(rule.len());
    for x in rule.nodes() {
        let v = f(x).norm();
        if !v.is_finite() {
            return Err(Error::NonFinite { node: x.to_vec(), value: v });
        }
        mags.push(v);
    }
    Ok(QuasinormValue {
        value: quasinorm_of_values(&mags, rule.weights(), p),
        p,
        domain: rule.domain().clone(),
        discretization_error: None,
    })
}

/// As [`lp_quasinorm`] on `fine`, with the difference from `coarse` as the error estimate.
pub fn lp_quasinorm_checked(
    f: impl Fn(&[f64]) -> Complex64,
    coarse: &QuadratureRule,
    fine: &QuadratureRule,
    p: Exponent,
) -> Result<QuasinormValue> {
    let c = lp_quasinorm(&f, coarse, p)?;
    let mut out = lp_quasinorm(&f, fine, p)?;
    out.discretization_error = Some((out.value - c.value).abs());
    Ok(out)
}

/// Quasinorm from magnitudes at the nodes.
pub(crate) fn quasinorm_of_values(mags: &[f64], weights: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => mags.iter().cloned().fold(0.0, f64::max),
        Exponent::Finite(p) => {
            // Factor out the largest magnitude so that large exponents neither overflow
            // nor underflow.
            let top = mags.iter().cloned().fold(0.0, f64::max);
            if top == 0.0 {
                return 0.0;
            }
            let terms: Vec<f64> = mags.iter().zip(weights).map(|(v, w)| w * (v / top).powf(p)).collect();
            top * pairwise_sum(&terms).powf(1.0 / p)
        }
    }
}

/// `‖F+G‖^p̃ ≤ ‖F‖^p̃ + ‖G‖^p̃` with `p̃ = min(1, p)`, up to `1e-10`.
pub fn quasinorm_triangle_check(
    f: impl Fn(&[f64]) -> Complex64,
    g: impl Fn(&[f64]) -> Complex64,
    rule: &QuadratureRule,
    p: Exponent,
) -> Result<bool> {
    let t = p.tilde();
    let nf = lp_quasinorm(&f, rule, p)?.value;
    let ng = lp_quasinorm(&g, rule, p)?.value;
    let nfg = lp_quasinorm(|x| f(x) + g(x), rule, p)?.value;
    Ok(nfg.powf(t) <= nf.powf(t) + ng.powf(t) + 1e-10)
}

/// Pairwise (cascade) summation; the reduction order depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn one(_: &[f64]) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn body_rule_masses() {
        let disk = build_rule_body(&ConvexBody::ball(2, 1.0).unwrap(), 48, 256).unwrap();
        assert!((disk.total_weight() - PI).abs() < 1e-6);
        let cross = build_rule_body(&ConvexBody::cube(2, 1.0).unwrap(), 48, 256).unwrap();
        assert!((cross.total_weight() - 2.0).abs() < 1e-6);
        let seg = build_rule_body(&ConvexBody::interval(1.0).unwrap(), 16, 0).unwrap();
        assert_eq!(seg.total_weight(), 2.0);
        let octa = build_rule_body(&ConvexBody::cube(3, 1.0).unwrap(), 8, 0).unwrap();
        assert!((octa.total_weight() - 8.0 / 6.0).abs() < 1e-12);
        let ball3 = build_rule_body(&ConvexBody::ball(3, 2.0).unwrap(), 8, 16).unwrap();
        assert!((ball3.total_weight() - 4.0 / 3.0 * PI / 8.0).abs() < 1e-12);
        let box3 = build_rule_body(&ConvexBody::lp_ball(1.0, vec![1.0, 2.0, 4.0]).unwrap(), 8, 0).unwrap();
        assert!((box3.total_weight() - 8.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn body_rule_rejects_bad_resolution() {
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        assert!(matches!(build_rule_body(&ball, 4, 64), Err(Error::Config(_))));
        let ball4 = ConvexBody::ball(4, 1.0).unwrap();
        assert!(matches!(build_rule_body(&ball4, 16, 64), Err(Error::Config(_))));
    }

    #[test]
    fn region_rule_over_body() {
        let square = build_rule_region(&ConvexBody::cube(2, 1.0).unwrap(), 16, 0).unwrap();
        assert!((square.total_weight() - 4.0).abs() < 1e-12);
        let polygon = build_rule_region(&ConvexBody::parse("poly:1,0;0.5,1;-0.5,1", None).unwrap(), 16, 0).unwrap();
        // Hexagon with vertices (±1,0), (±0.5,±1): area 3.
        assert!((polygon.total_weight() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lp_quasinorm_examples() {
        let seg = build_rule_body(&ConvexBody::interval(1.0).unwrap(), 16, 0).unwrap();
        let two = Exponent::Finite(2.0);
        assert!((lp_quasinorm(one, &seg, two).unwrap().value - 2f64.sqrt()).abs() < 1e-14);
        let v = lp_quasinorm(|x| Complex64::new(x[0], 0.0), &seg, two).unwrap().value;
        assert!((v - (2.0f64 / 3.0).sqrt()).abs() < 1e-14);
        let c = lp_quasinorm(|_| Complex64::new(0.0, -3.5), &seg, Exponent::Infinity).unwrap().value;
        assert_eq!(c, 3.5);
        let err = lp_quasinorm(|x| Complex64::new(x[0] / 0.0, 0.0), &seg, two);
        assert!(matches!(err, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn triangle_examples() {
        let seg = build_rule_body(&ConvexBody::interval(1.0).unwrap(), 16, 0).unwrap();
        let f = |x: &[f64]| Complex64::new(1.0 + x[0] * x[0], 0.0);
        let zero = |_: &[f64]| Complex64::new(0.0, 0.0);
        assert!(quasinorm_triangle_check(f, zero, &seg, Exponent::Finite(0.5)).unwrap());
        let g = |x: &[f64]| -f(x);
        assert!(quasinorm_triangle_check(f, g, &seg, Exponent::Finite(2.0)).unwrap());
    }

    #[test]
    fn torus_rule_is_exact_for_trig() {
        let t = QuadratureRule::torus(2, 16).unwrap();
        assert!((t.total_weight() - 4.0 * PI * PI).abs() < 1e-12);
        let v = t.integrate(|x| (3.0 * x[0] + 2.0 * x[1]).cos().powi(2));
        assert!((v - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn checked_quasinorm_reports_error() {
        let body = ConvexBody::ball(2, 1.0).unwrap();
        let coarse = build_rule_body(&body, 8, 16).unwrap();
        let fine = build_rule_body(&body, 16, 32).unwrap();
        let f = |x: &[f64]| Complex64::new((3.0 * x[0]).cos(), 0.0);
        let q = lp_quasinorm_checked(f, &coarse, &fine, Exponent::Finite(2.0)).unwrap();
        assert!(q.discretization_error.unwrap() < 1e-6);
    }

    #[test]
    fn large_exponents_do_not_overflow() {
        let seg = build_rule_body(&ConvexBody::interval(1.0).unwrap(), 16, 0).unwrap();
        let v = lp_quasinorm(|_| Complex64::new(1e3, 0.0), &seg, Exponent::Finite(4096.0)).unwrap().value;
        assert!((v - 1e3 * 2f64.powf(1.0 / 4096.0)).abs() < 1e-9);
        let v = lp_quasinorm(|_| Complex64::new(1e-3, 0.0), &seg, Exponent::Finite(4096.0)).unwrap().value;
        assert!(v > 0.0);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }
}

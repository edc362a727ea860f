//! Centrally symmetric convex bodies `V`, their dual norms and polars `V*`.
//!
//! A body is stored by closed-form data (balls, boxes, `l_mu` balls) or by a
//! vertex list closed under negation. Every operation that the rest of the
//! crate needs reduces to one of two functionals:
//!
//! * the dual norm `‖y‖_V* = sup_{t∈V} |t·y|`, whose unit ball is `V*`;
//! * the gauge of `V` itself, `inf { r > 0 : t ∈ rV }`, which equals the
//!   support function of `V*`.

use std::fmt;

use clarabel::solver::{NonnegativeConeT, ZeroConeT};

use crate::error::{check_dim, Error, Result};

/// Relative tolerance used by the membership predicates.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Absolute tolerance on the ray parameter in gauge bisection.
pub const BISECTION_TOL: f64 = 1e-12;

/// Shape data of a symmetric convex body.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `{t : (Σ |t_j/σ_j|^μ)^{1/μ} ≤ 1}` with `μ ∈ [1, ∞]`.
    LpBall { mu: f64, scales: Vec<f64> },
    /// `Π^m(σ) = {t : |t_j| ≤ σ_j}`.
    Parallelepiped { scales: Vec<f64> },
    /// `Q^m(M) = [-M, M]^m`.
    Cube { edge: f64 },
    /// `B^m(M)`, the Euclidean ball of radius `M`.
    EuclideanBall { radius: f64 },
    /// Convex hull of a vertex list that contains `-v` for every `v`.
    SymmetricPolytope { vertices: Vec<Vec<f64>> },
}

/// A centrally symmetric convex body in `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    shape: Shape,
    /// Vertices of the polar polygon in counter-clockwise order (planar polytopes only).
    polar_polygon: Option<Vec<[f64; 2]>>,
}

/// A unit vector in `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        let norm = euclidean(&u);
        if u.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "direction must have unit length, got |u| = {norm}"
            )));
        }
        Ok(Self(u))
    }

    /// Normalizes a nonzero vector.
    pub fn normalize(u: &[f64]) -> Result<Self> {
        let norm = euclidean(u);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(Self(u.iter().map(|x| x / norm).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

pub(crate) fn euclidean(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_scales(scales: &[f64]) -> Result<()> {
    if scales.is_empty() {
        return Err(Error::InvalidInput("scales must be nonempty".into()));
    }
    if let Some(s) = scales.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::InvalidInput(format!("scales must be positive, got {s}")));
    }
    Ok(())
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {x}")))
    }
}

impl ConvexBody {
    pub fn lp_ball(mu: f64, scales: Vec<f64>) -> Result<Self> {
        if !(mu >= 1.0) {
            return Err(Error::InvalidInput(format!("exponent mu must lie in [1, inf], got {mu}")));
        }
        check_scales(&scales)?;
        Ok(Self { dim: scales.len(), shape: Shape::LpBall { mu, scales }, polar_polygon: None }
            .with_polar_polygon())
    }

    pub fn parallelepiped(scales: Vec<f64>) -> Result<Self> {
        check_scales(&scales)?;
        Ok(Self { dim: scales.len(), shape: Shape::Parallelepiped { scales }, polar_polygon: None }
            .with_polar_polygon())
    }

    /// The interval `[-sigma, sigma]`.
    pub fn interval(sigma: f64) -> Result<Self> {
        Self::parallelepiped(vec![sigma])
    }

    pub fn cube(dim: usize, edge: f64) -> Result<Self> {
        check_positive("cube edge", edge)?;
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(Self { dim, shape: Shape::Cube { edge }, polar_polygon: None }.with_polar_polygon())
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        check_positive("ball radius", radius)?;
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(Self { dim, shape: Shape::EuclideanBall { radius }, polar_polygon: None })
    }

    /// Builds a polytope from a vertex list, adding `-v` for every listed `v`.
    pub fn polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidInput("polytope needs at least one vertex".into()))?;
        let dim = first.len();
        if dim == 0 || dim > 3 {
            return Err(Error::Unsupported(format!("polytopes are supported for m <= 3, got m = {dim}")));
        }
        for v in &vertices {
            check_dim(dim, v.len())?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite vertex {v:?}")));
            }
        }
        let mut all: Vec<Vec<f64>> = Vec::with_capacity(2 * vertices.len());
        for v in vertices {
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            for w in [v, neg] {
                if !all.iter().any(|u| u == &w) {
                    all.push(w);
                }
            }
        }
        if !full_rank(&all, dim) {
            return Err(Error::InvalidInput("polytope vertices do not span R^m (empty interior)".into()));
        }
        Ok(Self { dim, shape: Shape::SymmetricPolytope { vertices: all }, polar_polygon: None }
            .with_polar_polygon())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Vertex list of `V` when `V` is a polytope (boxes, cubes, `μ ∈ {1, ∞}` balls, explicit polytopes).
    pub fn vertices(&self) -> Option<Vec<Vec<f64>>> {
        match &self.shape {
            Shape::SymmetricPolytope { vertices } => Some(vertices.clone()),
            Shape::Cube { edge } => Some(box_vertices(&vec![*edge; self.dim])),
            Shape::Parallelepiped { scales } => Some(box_vertices(scales)),
            Shape::LpBall { mu, scales } if mu.is_infinite() => Some(box_vertices(scales)),
            Shape::LpBall { mu, scales } if *mu == 1.0 => {
                let mut out = Vec::with_capacity(2 * scales.len());
                for (j, s) in scales.iter().enumerate() {
                    for sign in [1.0, -1.0] {
                        let mut v = vec![0.0; scales.len()];
                        v[j] = sign * s;
                        out.push(v);
                    }
                }
                Some(out)
            }
            _ => None,
        }
    }

    fn with_polar_polygon(mut self) -> Self {
        if self.dim == 2 {
            if let Some(vs) = self.vertices() {
                let pts: Vec<[f64; 2]> = vs.iter().map(|v| [v[0], v[1]]).collect();
                let hull = convex_hull_ccw(&pts);
                let k = hull.len();
                let polar = (0..k)
                    .map(|i| {
                        let a = hull[i];
                        let b = hull[(i + 1) % k];
                        let det = a[0] * b[1] - a[1] * b[0];
                        [(b[1] - a[1]) / det, (a[0] - b[0]) / det]
                    })
                    .collect();
                self.polar_polygon = Some(polar);
            }
        }
        self
    }

    /// Vertices of the polar polygon `V*` in counter-clockwise order (`m = 2` polytopes).
    pub fn polar_polygon(&self) -> Option<&[[f64; 2]]> {
        self.polar_polygon.as_deref()
    }

    /// Vertices of `V` itself in counter-clockwise order (`m = 2` polytopes).
    pub fn hull_polygon(&self) -> Option<Vec<[f64; 2]>> {
        if self.dim != 2 {
            return None;
        }
        let vs = self.vertices()?;
        Some(convex_hull_ccw(&vs.iter().map(|v| [v[0], v[1]]).collect::<Vec<_>>()))
    }

    /// `Some(σ)` when `V` is the box `Π^m(σ)` (cubes, boxes, `μ = ∞` balls).
    pub fn box_scales(&self) -> Option<Vec<f64>> {
        match &self.shape {
            Shape::Cube { edge } => Some(vec![*edge; self.dim]),
            Shape::Parallelepiped { scales } => Some(scales.clone()),
            Shape::LpBall { mu, scales } if mu.is_infinite() => Some(scales.clone()),
            _ => None,
        }
    }

    /// `Some(σ)` when `V` is the cross-polytope with vertices `±σ_j e_j` (`μ = 1` balls).
    pub fn cross_scales(&self) -> Option<Vec<f64>> {
        match &self.shape {
            Shape::LpBall { mu, scales } if *mu == 1.0 => Some(scales.clone()),
            _ => None,
        }
    }

    /// The body `cV`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        check_positive("scale factor", c)?;
        match &self.shape {
            Shape::LpBall { mu, scales } => Self::lp_ball(*mu, scales.iter().map(|s| c * s).collect()),
            Shape::Parallelepiped { scales } => Self::parallelepiped(scales.iter().map(|s| c * s).collect()),
            Shape::Cube { edge } => Self::cube(self.dim, c * edge),
            Shape::EuclideanBall { radius } => Self::ball(self.dim, c * radius),
            Shape::SymmetricPolytope { vertices } => {
                Self::polytope(vertices.iter().map(|v| v.iter().map(|x| c * x).collect()).collect())
            }
        }
    }

    /// `‖y‖_V* = sup_{t∈V} |t·y|`.
    pub fn dual_norm(&self, y: &[f64]) -> Result<f64> {
        check_dim(self.dim, y.len())?;
        Ok(match &self.shape {
            Shape::LpBall { mu, scales } => {
                let lambda = conjugate_exponent(*mu);
                lp_norm(y.iter().zip(scales).map(|(y, s)| (s * y).abs()), lambda)
            }
            Shape::Parallelepiped { scales } => y.iter().zip(scales).map(|(y, s)| s * y.abs()).sum(),
            Shape::Cube { edge } => edge * y.iter().map(|v| v.abs()).sum::<f64>(),
            Shape::EuclideanBall { radius } => radius * euclidean(y),
            Shape::SymmetricPolytope { vertices } => {
                vertices.iter().map(|v| dot(v, y).abs()).fold(0.0, f64::max)
            }
        })
    }

    /// Minkowski functional of `V`; equals the support function `h_{V*}`.
    pub fn gauge(&self, t: &[f64]) -> Result<f64> {
        check_dim(self.dim, t.len())?;
        Ok(match &self.shape {
            Shape::LpBall { mu, scales } => lp_norm(t.iter().zip(scales).map(|(t, s)| (t / s).abs()), *mu),
            Shape::Parallelepiped { scales } => {
                t.iter().zip(scales).map(|(t, s)| t.abs() / s).fold(0.0, f64::max)
            }
            Shape::Cube { edge } => t.iter().map(|v| v.abs()).fold(0.0, f64::max) / edge,
            Shape::EuclideanBall { radius } => euclidean(t) / radius,
            Shape::SymmetricPolytope { vertices } => match self.dim {
                1 => t[0].abs() / vertices.iter().map(|v| v[0].abs()).fold(0.0, f64::max),
                2 => {
                    let polar = self.polar_polygon.as_ref().expect("planar polytope has a polar polygon");
                    polar.iter().map(|w| w[0] * t[0] + w[1] * t[1]).fold(0.0, f64::max)
                }
                _ => polytope_gauge_lp(vertices, t)?,
            },
        })
    }

    /// Membership `t ∈ V`.
    pub fn contains(&self, t: &[f64]) -> Result<bool> {
        Ok(self.gauge(t)? <= 1.0 + MEMBERSHIP_TOL)
    }

    /// Membership `y ∈ V*`.
    pub fn polar_membership(&self, y: &[f64]) -> Result<bool> {
        Ok(self.dual_norm(y)? <= 1.0 + MEMBERSHIP_TOL)
    }

    /// The point `v_y = y / ‖y‖_V*` where the ray through `y` leaves `V*`.
    pub fn boundary_point(&self, y: &[f64]) -> Result<Vec<f64>> {
        let norm = self.dual_norm(y)?;
        if norm == 0.0 {
            return Err(Error::Domain("boundary point of the ray through y = 0 is undefined".into()));
        }
        Ok(y.iter().map(|v| v / norm).collect())
    }

    /// `h_{V*}(u) = sup_{y∈V*} u·y`, which is the gauge of `V` at `u`.
    pub fn support_function_polar(&self, u: &Direction) -> Result<f64> {
        self.gauge(u.as_slice())
    }

    /// Support function of `V*` obtained by bisecting the ray `{ru}` against membership in `V`.
    pub fn support_function_polar_bisection(&self, u: &Direction) -> Result<f64> {
        let u = u.as_slice();
        check_dim(self.dim, u.len())?;
        let scaled = |r: f64| -> Vec<f64> { u.iter().map(|x| r * x).collect() };
        let mut lo = 0.0;
        let mut hi = 1.0;
        while self.contains(&scaled(hi))? {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::Domain("body is unbounded along the direction".into()));
            }
        }
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if self.contains(&scaled(mid))? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(1.0 / (0.5 * (lo + hi)))
    }

    /// Grid approximation of the width `w(V*)`, converging from above as the resolution grows.
    pub fn width_polar(&self, angular_resolution: usize) -> Result<f64> {
        if angular_resolution < 64 {
            return Err(Error::Config(format!(
                "angular resolution must be at least 64, got {angular_resolution}"
            )));
        }
        let h = |u: Vec<f64>| -> Result<f64> { self.gauge(&u) };
        let min_support = match self.dim {
            1 => h(vec![1.0])?,
            2 => {
                let mut best = f64::INFINITY;
                for k in 0..angular_resolution {
                    let th = std::f64::consts::PI * k as f64 / angular_resolution as f64;
                    best = best.min(h(vec![th.cos(), th.sin()])?);
                }
                best
            }
            3 => {
                let polar_steps = angular_resolution / 2;
                let mut best = f64::INFINITY;
                for i in 0..=polar_steps {
                    let th = std::f64::consts::FRAC_PI_2 * i as f64 / polar_steps as f64;
                    for j in 0..angular_resolution {
                        let ph = 2.0 * std::f64::consts::PI * j as f64 / angular_resolution as f64;
                        best = best.min(h(vec![th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()])?);
                    }
                }
                best
            }
            m => return Err(Error::Config(format!("width is supported for m <= 3, got m = {m}"))),
        };
        Ok(2.0 * min_support)
    }

    /// Half-extent of `V*` along coordinate axis `j`.
    pub fn polar_extent(&self, j: usize) -> Result<f64> {
        let mut e = vec![0.0; self.dim];
        e[j] = 1.0;
        self.gauge(&e)
    }

    /// Distance from the origin to `∂(V*)` along a unit direction.
    pub fn polar_radius(&self, u: &[f64]) -> Result<f64> {
        Ok(1.0 / self.dual_norm(u)?)
    }

    /// Parses the config grammar `ball:M`, `cube:M`, `box:s1,...`, `lp:mu:s1,...`,
    /// `poly:v11,v12;v21,v22;...`. `dim` is required for balls and cubes.
    pub fn parse(spec: &str, dim: Option<usize>) -> Result<Self> {
        let spec = spec.trim();
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("body spec `{spec}` lacks a `kind:` prefix")))?;
        let num = |tok: &str| -> Result<f64> {
            let tok = tok.trim();
            match tok {
                "inf" | "infinity" => Ok(f64::INFINITY),
                _ => tok
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad number `{tok}` in body spec `{spec}`"))),
            }
        };
        let list = |s: &str| -> Result<Vec<f64>> { s.split(',').map(num).collect() };
        let need_dim = || dim.ok_or_else(|| Error::Config(format!("body spec `{spec}` needs the dimension m")));
        let body = match kind.trim() {
            "ball" => Self::ball(need_dim()?, num(rest)?),
            "cube" => Self::cube(need_dim()?, num(rest)?),
            "box" => Self::parallelepiped(list(rest)?),
            "lp" => {
                let (mu, scales) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Config(format!("`lp` spec `{spec}` must read lp:mu:s1,...")))?;
                Self::lp_ball(num(mu)?, list(scales)?)
            }
            "poly" => Self::polytope(rest.split(';').map(list).collect::<Result<_>>()?),
            other => return Err(Error::Config(format!("unknown body kind `{other}` in `{spec}`"))),
        }
        .map_err(|e| match e {
            Error::Config(_) => e,
            other => Error::Config(format!("body spec `{spec}`: {other}")),
        })?;
        if let Some(m) = dim {
            if body.dim != m {
                return Err(Error::Config(format!("body spec `{spec}` has dimension {} but m = {m}", body.dim)));
            }
        }
        Ok(body)
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[f64]| xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        match &self.shape {
            Shape::LpBall { mu, scales } => {
                let mu = if mu.is_infinite() { "inf".to_string() } else { format!("{mu}") };
                write!(f, "lp:{mu}:{}", join(scales))
            }
            Shape::Parallelepiped { scales } => write!(f, "box:{}", join(scales)),
            Shape::Cube { edge } => write!(f, "cube:{edge}"),
            Shape::EuclideanBall { radius } => write!(f, "ball:{radius}"),
            Shape::SymmetricPolytope { vertices } => {
                let vs: Vec<String> = vertices.iter().map(|v| join(v)).collect();
                write!(f, "poly:{}", vs.join(";"))
            }
        }
    }
}

/// `λ` with `1/μ + 1/λ = 1`.
pub fn conjugate_exponent(mu: f64) -> f64 {
    if mu == 1.0 {
        f64::INFINITY
    } else if mu.is_infinite() {
        1.0
    } else {
        mu / (mu - 1.0)
    }
}

fn lp_norm(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        let v: Vec<f64> = values.collect();
        let scale = v.iter().cloned().fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        scale * v.iter().map(|x| (x / scale).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn box_vertices(scales: &[f64]) -> Vec<Vec<f64>> {
    let m = scales.len();
    (0..1usize << m)
        .map(|mask| {
            scales
                .iter()
                .enumerate()
                .map(|(j, s)| if mask >> j & 1 == 1 { -s } else { *s })
                .collect()
        })
        .collect()
}

fn full_rank(points: &[Vec<f64>], dim: usize) -> bool {
    let mat = nalgebra::DMatrix::from_fn(points.len(), dim, |i, j| points[i][j]);
    mat.rank(1e-12 * mat.amax().max(1.0)) == dim
}

/// Andrew's monotone chain; returns the strictly convex hull in counter-clockwise order.
fn convex_hull_ccw(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Gauge of a vertex-represented polytope: `min Σλ_i` subject to `Σλ_i v_i = t`, `λ ≥ 0`.
fn polytope_gauge_lp(vertices: &[Vec<f64>], t: &[f64]) -> Result<f64> {
    if t.iter().all(|x| *x == 0.0) {
        return Ok(0.0);
    }
    let k = vertices.len();
    let d = t.len();
    // Equalities Σλ_i v_i = t, then -λ ≤ 0.
    let columns: Vec<Vec<f64>> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut col = vec![0.0; d + k];
            col[..d].copy_from_slice(v);
            col[d + i] = -1.0;
            col
        })
        .collect();
    let a = crate::lp::csc_from_columns(d + k, &columns);
    let rhs: Vec<f64> = t.iter().copied().chain(std::iter::repeat_n(0.0, k)).collect();
    let lambda = crate::lp::minimize(&vec![1.0; k], &a, &rhs, &[ZeroConeT(d), NonnegativeConeT(k)], crate::lp::Acceptance::Converged, "polytope gauge")?;
    Ok(lambda.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn dual_norm_closed_forms() {
        let ball = ConvexBody::ball(2, 3.0).unwrap();
        assert_eq!(ball.dual_norm(&[1.0, 0.0]).unwrap(), 3.0);
        let bx = ConvexBody::parallelepiped(vec![1.0, 2.0]).unwrap();
        assert_eq!(bx.dual_norm(&[1.0, 1.0]).unwrap(), 3.0);
        assert_eq!(bx.dual_norm(&[0.0, 0.0]).unwrap(), 0.0);
        let cube = ConvexBody::cube(3, 2.0).unwrap();
        assert_eq!(cube.dual_norm(&[1.0, -1.0, 0.5]).unwrap(), 5.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        assert!(matches!(ball.dual_norm(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(ball.polar_membership(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn polar_membership_examples() {
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        assert!(ball.polar_membership(&[0.0, 0.0]).unwrap());
        assert!(!ball.polar_membership(&[2.0, 0.0]).unwrap());
        for m in 1..=3 {
            let cube = ConvexBody::cube(m, 1.0).unwrap();
            let y = vec![1.0 / m as f64; m];
            assert!(cube.polar_membership(&y).unwrap());
        }
    }

    #[test]
    fn boundary_point_examples() {
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        assert_eq!(ball.boundary_point(&[2.0, 0.0]).unwrap(), vec![1.0, 0.0]);
        let bx = ConvexBody::parallelepiped(vec![1.0, 1.0]).unwrap();
        assert_eq!(bx.boundary_point(&[3.0, 3.0]).unwrap(), vec![0.5, 0.5]);
        let bx = ConvexBody::parallelepiped(vec![2.0, 1.0]).unwrap();
        assert_eq!(bx.boundary_point(&[0.0, 5.0]).unwrap(), vec![0.0, 1.0]);
        assert!(matches!(ball.boundary_point(&[0.0, 0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn support_function_examples() {
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        let u = Direction::normalize(&[0.3, -0.7]).unwrap();
        assert!(close(ball.support_function_polar(&u).unwrap(), 1.0, 1e-14));
        let cube = ConvexBody::cube(2, 1.0).unwrap();
        let e1 = Direction::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(cube.support_function_polar(&e1).unwrap(), 1.0);
        let diag = Direction::normalize(&[1.0, 1.0]).unwrap();
        assert!(close(cube.support_function_polar(&diag).unwrap(), 0.5f64.sqrt(), 1e-14));
        // Bisection route agrees with the closed form.
        let b = cube.support_function_polar_bisection(&diag).unwrap();
        assert!(close(b, 0.5f64.sqrt(), 1e-10));
    }

    #[test]
    fn direction_requires_unit_length() {
        assert!(Direction::new(vec![1.0, 1.0]).is_err());
        assert!(Direction::normalize(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn width_examples() {
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        assert!(close(ball.width_polar(64).unwrap(), 2.0, 1e-14));
        let cube = ConvexBody::cube(2, 1.0).unwrap();
        assert!(close(cube.width_polar(64).unwrap(), 2f64.sqrt(), 1e-14));
        let bx = ConvexBody::parallelepiped(vec![1.0, 1.0]).unwrap();
        assert!(close(bx.width_polar(64).unwrap(), 2f64.sqrt(), 1e-14));
        assert!(matches!(ball.width_polar(32), Err(Error::Config(_))));
        let ball4 = ConvexBody::ball(4, 1.0).unwrap();
        assert!(matches!(ball4.width_polar(64), Err(Error::Config(_))));
    }

    #[test]
    fn polar_polygon_of_square_is_diamond() {
        let cube = ConvexBody::cube(2, 1.0).unwrap();
        let mut poly: Vec<[f64; 2]> = cube.polar_polygon().unwrap().to_vec();
        poly.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [[-1.0, 0.0], [0.0, -1.0], [0.0, 1.0], [1.0, 0.0]];
        for (p, e) in poly.iter().zip(expect) {
            assert!(close(p[0], e[0], 1e-15) && close(p[1], e[1], 1e-15));
        }
    }

    #[test]
    fn polytope_matches_equivalent_box() {
        let poly = ConvexBody::parse("poly:1,2;1,-2", None).unwrap();
        let bx = ConvexBody::parallelepiped(vec![1.0, 2.0]).unwrap();
        for y in [[0.3, -0.2], [1.0, 1.0], [-2.0, 0.1]] {
            assert!(close(poly.dual_norm(&y).unwrap(), bx.dual_norm(&y).unwrap(), 1e-14));
            assert!(close(poly.gauge(&y).unwrap(), bx.gauge(&y).unwrap(), 1e-14));
        }
        let poly3 = ConvexBody::parse("poly:1,1,1;1,1,-1;1,-1,1;-1,1,1", None).unwrap();
        let cube3 = ConvexBody::cube(3, 1.0).unwrap();
        for t in [[0.3, -0.2, 0.9], [1.0, 2.0, -3.0]] {
            assert!(close(poly3.gauge(&t).unwrap(), cube3.gauge(&t).unwrap(), 1e-9));
        }
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(ConvexBody::parse("ball:2", Some(3)).unwrap(), ConvexBody::ball(3, 2.0).unwrap());
        assert_eq!(
            ConvexBody::parse("lp:inf:1,2", Some(2)).unwrap(),
            ConvexBody::lp_ball(f64::INFINITY, vec![1.0, 2.0]).unwrap()
        );
        assert!(matches!(ConvexBody::parse("ball:2", None), Err(Error::Config(_))));
        assert!(matches!(ConvexBody::parse("blob:2", Some(1)), Err(Error::Config(_))));
        assert!(matches!(ConvexBody::parse("box:1,x", Some(2)), Err(Error::Config(_))));
        assert!(matches!(ConvexBody::parse("box:1,2", Some(3)), Err(Error::Config(_))));
        assert!(matches!(ConvexBody::parse("poly:1,1;2,2", None), Err(Error::Config(_))));
        let body = ConvexBody::parse("box:1,2.5", Some(2)).unwrap();
        assert_eq!(ConvexBody::parse(&body.to_string(), Some(2)).unwrap(), body);
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(conjugate_exponent(1.0), f64::INFINITY);
        assert_eq!(conjugate_exponent(f64::INFINITY), 1.0);
        assert_eq!(conjugate_exponent(2.0), 2.0);
        assert!(close(conjugate_exponent(3.0), 1.5, 1e-15));
    }
}

//! One-dimensional Gauss–Legendre and Gauss–Lobatto rules.

use serde::{Deserialize, Serialize};

/// Which 1D node family a product rule is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeScheme {
    /// Interior Gauss–Legendre nodes, exact to degree `2k - 1`.
    Gauss,
    /// Gauss–Lobatto nodes including both endpoints, exact to degree `2k - 3`.
    Lobatto,
}

/// Legendre `P_n(x)` and `P_{n-1}(x)`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let kf = k as f64;
    for i in 0..k.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(k, x);
            let dp = kf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, pm1) = legendre_pair(k, x);
        let dp = kf * (x * p - pm1) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Lobatto nodes (ascending, including `±1`) and weights on `[-1, 1]`.
pub fn gauss_lobatto(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 2, "Lobatto rule needs at least two nodes");
    let n = k - 1;
    let nf = n as f64;
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    for i in 0..k {
        let mut x = -(std::f64::consts::PI * i as f64 / nf).cos();
        if i == 0 || i == n {
            nodes[i] = x.round();
            let (p, _) = legendre_pair(n, nodes[i]);
            weights[i] = 2.0 / (nf * (nf + 1.0) * p * p);
            continue;
        }
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(n, x);
            let dx = (x * p - pm1) / ((nf + 1.0) * p);
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, _) = legendre_pair(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / (nf * (nf + 1.0) * p * p);
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    (nodes, weights)
}

/// Nodes and weights of the chosen family mapped to `[lo, hi]`.
pub fn rule_on_interval(scheme: NodeScheme, k: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = match scheme {
        NodeScheme::Gauss => gauss_legendre(k),
        NodeScheme::Lobatto => gauss_lobatto(k.max(2)),
    };
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    (x.iter().map(|t| mid + half * t).collect(), w.iter().map(|v| v * half).collect())
}

/// Composite Gauss–Legendre on `[lo, hi]` with `panels` equal panels of `k` nodes.
pub fn composite_gauss(k: usize, panels: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(k);
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(k * panels);
    let mut weights = Vec::with_capacity(k * panels);
    for p in 0..panels {
        let a = lo + h * p as f64;
        for (t, v) in x.iter().zip(&w) {
            nodes.push(a + 0.5 * h * (t + 1.0));
            weights.push(0.5 * h * v);
        }
    }
    (nodes, weights)
}

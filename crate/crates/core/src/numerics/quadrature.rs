//! Composite Gauss-Legendre quadrature with open panels.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;
use num_traits::Zero;

pub const POINTS_PER_PANEL: usize = 32;
pub const DEFAULT_PANELS: usize = 64;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Sum with pairwise splitting, so results depend only on the input order.
pub fn pairwise_sum<T: Copy + Zero + core::ops::Add<Output = T>>(v: &[T]) -> T {
    if v.len() <= 32 {
        return v.iter().fold(T::zero(), |a, &b| a + b);
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    lo: f64,
    hi: f64,
    panels: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// `panels` equal panels of [`POINTS_PER_PANEL`] Gauss points each. No node sits
    /// on a panel edge, so integrable endpoint singularities are never sampled.
    pub fn new(lo: f64, hi: f64, panels: usize) -> Self {
        assert!(hi > lo && panels > 0, "bad quadrature interval [{lo}, {hi}] x {panels}");
        let (t, w) = gauss_legendre(POINTS_PER_PANEL);
        let h = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * POINTS_PER_PANEL);
        let mut weights = Vec::with_capacity(panels * POINTS_PER_PANEL);
        for p in 0..panels {
            let a = lo + p as f64 * h;
            for (ti, wi) in t.iter().zip(&w) {
                nodes.push(a + 0.5 * h * (ti + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        Self { lo, hi, panels, nodes, weights }
    }

    pub fn with_default_panels(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, DEFAULT_PANELS)
    }

    pub fn refined(&self) -> Self {
        Self::new(self.lo, self.hi, self.panels * 2)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f_i` for values sampled at [`Self::nodes`].
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.nodes.len(), "sample count does not match grid");
        let terms: Vec<Complex64> = values.iter().zip(&self.weights).map(|(v, w)| v * w).collect();
        pairwise_sum(&terms)
    }

    pub fn integrate_real(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.nodes.len(), "sample count does not match grid");
        let terms: Vec<f64> = values.iter().zip(&self.weights).map(|(v, w)| v * w).collect();
        pairwise_sum(&terms)
    }

    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        let v: Vec<f64> = self.nodes.iter().map(|&x| f(x)).collect();
        self.integrate_real(&v)
    }
}

/// Integrates `f` over `[lo, hi]`, doubling the panel count from `panels` until two
/// successive estimates agree to `rel_tol`. Returns the estimate and the panel count
/// used, or `None` if `max_panels` is exceeded first.
pub fn integrate_refined(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    panels: usize,
    rel_tol: f64,
    max_panels: usize,
) -> Option<(f64, usize)> {
    let mut grid = QuadratureGrid::new(lo, hi, panels);
    let mut prev = grid.integrate_fn(&f);
    while grid.panels() * 2 <= max_panels {
        grid = grid.refined();
        let cur = grid.integrate_fn(&f);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(f64::MIN_POSITIVE) {
            return Some((cur, grid.panels()));
        }
        prev = cur;
    }
    None
}

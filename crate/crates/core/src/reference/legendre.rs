//! Legendre polynomials and the Gauss quadrature rules built on them.

use std::f64::consts::PI;

/// Value and first derivative of the Legendre polynomial `P_n` at `x`.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    let (mut dp_prev, mut dp) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k holds on the whole interval, endpoints included.
        let dp_next = dp_prev + (2.0 * kf + 1.0) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp)
}

/// Evaluates `sum_n coeffs[n] * P_n(x)`.
pub fn series(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * legendre(n, x).0)
        .sum()
}

/// Evaluates the derivative of `sum_n coeffs[n] * P_n(x)`.
pub fn series_derivative(coeffs: &[f64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * legendre(n, x).1)
        .sum()
}

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Gauss-Legendre nodes (ascending) and weights for `n` points.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess, descending in i.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < NEWTON_TOL {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    nodes.reverse();
    weights.reverse();
    symmetrize(&mut nodes, &mut weights);
    (nodes, weights)
}

/// Gauss-Lobatto-Legendre nodes (ascending, endpoints included) and weights for `n >= 2` points.
pub fn gauss_lobatto(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "Gauss-Lobatto needs at least two points");
    let order = n - 1;
    let nf = order as f64;
    let mut nodes = vec![-1.0];
    // Interior nodes are the roots of P'_N, i.e. of q(x) = P_{N-1}(x) - x P_N(x).
    for i in (1..order).rev() {
        let mut x = (PI * i as f64 / nf).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (pn, dpn) = legendre(order, x);
            let (pm, dpm) = legendre(order - 1, x);
            let q = pm - x * pn;
            let dq = dpm - pn - x * dpn;
            let step = q / dq;
            x -= step;
            if step.abs() < NEWTON_TOL {
                break;
            }
        }
        nodes.push(x);
    }
    nodes.push(1.0);
    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre(order, x);
            2.0 / (nf * (nf + 1.0) * p * p)
        })
        .collect();
    symmetrize(&mut nodes, &mut weights);
    (nodes, weights)
}

// Enforce exact mirror symmetry so that left/right constructions agree bit for bit.
fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

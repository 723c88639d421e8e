//! Barycentric Lagrange interpolation on an arbitrary distinct point set.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};

/// Barycentric weights `w_m = 1 / prod_{i != m} (x_m - x_i)`.
///
/// Fails when two points coincide.
pub fn barycentric_weights(x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n == 0 {
        return Err(invalid("empty point set"));
    }
    let mut w = vec![1.0; n];
    for m in 0..n {
        for i in 0..n {
            if i != m {
                let d = x[m] - x[i];
                if d == 0.0 {
                    return Err(invalid(format!("duplicate interpolation point {}", x[m])));
                }
                w[m] /= d;
            }
        }
    }
    Ok(w)
}

/// Values of every Lagrange basis polynomial `l_m` at `t`.
pub fn basis_at(x: &[f64], w: &[f64], t: f64) -> Vec<f64> {
    if let Some(hit) = x.iter().position(|&xi| xi == t) {
        let mut out = vec![0.0; x.len()];
        out[hit] = 1.0;
        return out;
    }
    let terms: Vec<f64> = x.iter().zip(w).map(|(xi, wi)| wi / (t - xi)).collect();
    let denom: f64 = terms.iter().sum();
    terms.into_iter().map(|v| v / denom).collect()
}

/// Interpolates nodal values `u` at `t`.
pub fn interpolate(x: &[f64], w: &[f64], u: &[f64], t: f64) -> f64 {
    basis_at(x, w, t).iter().zip(u).map(|(l, v)| l * v).sum()
}

/// Derivative matrix `D[n][m] = l_m'(x_n)`.
///
/// Diagonal entries use the negative-sum trick so that rows annihilate constants to round-off.
pub fn derivative_matrix(x: &[f64]) -> Result<DMatrix<f64>> {
    let w = barycentric_weights(x)?;
    let n = x.len();
    let mut d = DMatrix::zeros(n, n);
    for r in 0..n {
        let mut diag = 0.0;
        for m in 0..n {
            if m != r {
                let v = (w[m] / w[r]) / (x[r] - x[m]);
                d[(r, m)] = v;
                diag -= v;
            }
        }
        d[(r, r)] = diag;
    }
    Ok(d)
}

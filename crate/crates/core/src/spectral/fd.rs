//! Finite-difference stencils and their modified wavenumbers.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::reference::lagrange;

/// First-derivative stencil on possibly non-uniform points.
///
/// `offsets[m] = x_m - x_j` relative to the point where the derivative is taken,
/// and `weights[m]` multiplies `u(x_m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FdStencil {
    pub offsets: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FdStencil {
    /// Lagrange-derivative weights at `x = 0` from the given relative offsets (one must be 0).
    pub fn from_offsets(offsets: &[f64]) -> Result<Self> {
        let centre = offsets
            .iter()
            .position(|&x| x == 0.0)
            .ok_or_else(|| invalid("stencil must contain the evaluation point"))?;
        let d = lagrange::derivative_matrix(offsets)?;
        Ok(Self {
            offsets: offsets.to_vec(),
            weights: (0..offsets.len()).map(|m| d[(centre, m)]).collect(),
        })
    }

    /// Centred stencil of even `order` on a uniform grid of spacing `h`.
    pub fn central(order: usize, h: f64) -> Result<Self> {
        if order == 0 || order % 2 == 1 {
            return Err(invalid(format!("central stencils need an even order, got {order}")));
        }
        let half = (order / 2) as i64;
        let offsets: Vec<f64> = (-half..=half).map(|m| m as f64 * h).collect();
        Self::from_offsets(&offsets)
    }

    /// Modified phase velocity of this stencil at wavenumber `k`.
    pub fn modified_phase_velocity(&self, k: f64) -> Result<Complex64> {
        fd_modified_wavenumber(&self.offsets, &self.weights, k)
    }
}

/// `c(k) = (1 / (i k)) sum_m b_m e^{i k (x_m - x_j)}`.
pub fn fd_modified_wavenumber(offsets: &[f64], weights: &[f64], k: f64) -> Result<Complex64> {
    if offsets.len() != weights.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} stencil offsets vs {} weights",
            offsets.len(),
            weights.len()
        )));
    }
    if !(k > 0.0) {
        return Err(invalid(format!("wavenumber must be positive, got {k}")));
    }
    let sum: Complex64 = offsets
        .iter()
        .zip(weights)
        .map(|(x, b)| b * Complex64::from_polar(1.0, k * x))
        .sum();
    Ok(sum / Complex64::new(0.0, k))
}

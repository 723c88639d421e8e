//! Geometrically stretched periodic 1D grids.

use crate::error::{invalid, Result};
use crate::reference::ReferenceElement;

/// Cells with widths `delta_{j+1} = gamma delta_j`, scaled to fill `[0, length]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StretchedGrid1D {
    /// `N + 1` flux-point coordinates.
    pub x: Vec<f64>,
    /// `N` cell widths.
    pub delta: Vec<f64>,
    /// `N` Jacobians `delta_n / 2`.
    pub jacobian: Vec<f64>,
    pub gamma: f64,
    pub length: f64,
}

impl StretchedGrid1D {
    pub fn new(n: usize, gamma: f64, length: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("need at least 2 cells, got {n}")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid(format!("expansion rate must be positive, got {gamma}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid(format!("domain length must be positive, got {length}")));
        }
        let raw: Vec<f64> = (0..n).map(|j| gamma.powi(j as i32)).collect();
        let total: f64 = raw.iter().sum();
        let delta: Vec<f64> = raw.iter().map(|d| d * length / total).collect();
        let mut x = Vec::with_capacity(n + 1);
        x.push(0.0);
        for d in &delta {
            x.push(x.last().unwrap() + d);
        }
        x[n] = length;
        let jacobian = delta.iter().map(|d| d / 2.0).collect();
        Ok(Self {
            x,
            delta,
            jacobian,
            gamma,
            length,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.delta.len()
    }

    /// Physical solution-point coordinates, cell by cell.
    pub fn solution_points(&self, element: &ReferenceElement) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_cells() * element.n_points());
        for j in 0..self.n_cells() {
            for xi in &element.xi {
                out.push(self.x[j] + 0.5 * (xi + 1.0) * self.delta[j]);
            }
        }
        out
    }

    /// Cell containing `x` (wrapped into the domain) and the matching reference coordinate.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let x = x.rem_euclid(self.length);
        let j = match self.x.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(self.n_cells() - 1),
            Err(i) => (i - 1).min(self.n_cells() - 1),
        };
        (j, 2.0 * (x - self.x[j]) / self.delta[j] - 1.0)
    }

    /// Ratio of each cell to its upwind neighbour, wrapping periodically.
    pub fn local_expansion(&self) -> Vec<f64> {
        let n = self.n_cells();
        (0..n).map(|j| self.delta[j] / self.delta[(j + n - 1) % n]).collect()
    }
}

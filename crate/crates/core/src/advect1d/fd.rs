//! Finite-difference baselines for `u_t + u_x = 0` on periodic, possibly stretched point grids.

use std::fmt;
use std::str::FromStr;

use super::grid::StretchedGrid1D;
use super::time::LinearRhs;
use crate::error::{invalid, Error, Result};
use crate::spectral::FdStencil;

/// Default Lax-Friedrichs fraction.
pub const DEFAULT_LF_BLEND: f64 = 0.01;

/// Finite-difference scheme: stencil order plus a Lax-Friedrichs admixture.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdScheme {
    /// One of 2, 3, 4, 6, 8. Order 3 is upwind-biased, the rest are central.
    pub order: usize,
    /// Fraction of first-order Lax-Friedrichs (upwind at unit speed) differencing, in `[0, 0.02]`.
    pub lf_blend: f64,
}

impl FdScheme {
    pub fn new(order: usize, lf_blend: f64) -> Result<Self> {
        if ![2, 3, 4, 6, 8].contains(&order) {
            return Err(invalid(format!("FD order must be 2, 3, 4, 6 or 8, got {order}")));
        }
        if !(0.0..=0.02).contains(&lf_blend) {
            return Err(invalid(format!("Lax-Friedrichs blend must lie in [0, 0.02], got {lf_blend}")));
        }
        Ok(Self { order, lf_blend })
    }

    /// Stencil point offsets in index space.
    pub fn offsets(&self) -> Vec<i64> {
        if self.order == 3 {
            vec![-2, -1, 0, 1]
        } else {
            let h = (self.order / 2) as i64;
            (-h..=h).collect()
        }
    }

    pub fn is_upwind(&self) -> bool {
        self.order == 3
    }
}

impl fmt::Display for FdScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_upwind() { "UW" } else { "CD" };
        write!(f, "{kind}{}", self.order)
    }
}

impl FromStr for FdScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        let digits = upper.trim_start_matches(|c: char| c.is_ascii_alphabetic());
        let order = digits
            .parse()
            .map_err(|_| invalid(format!("cannot read FD order from '{s}'")))?;
        Self::new(order, DEFAULT_LF_BLEND)
    }
}

/// Periodic FD operator on the left faces of a stretched grid's cells.
#[derive(Clone, Debug)]
pub struct FdAdvection {
    pub scheme: FdScheme,
    /// Point coordinates.
    pub x: Vec<f64>,
    pub length: f64,
    offsets: Vec<i64>,
    /// Row-major `n x stencil` weights.
    weights: Vec<f64>,
    /// `1 / (x_i - x_{i-1})` for the upwind blend.
    inv_back: Vec<f64>,
}

impl FdAdvection {
    /// Uses the `N` flux points of `grid` (the last one coincides with the first periodically).
    pub fn new(scheme: FdScheme, grid: &StretchedGrid1D) -> Result<Self> {
        let n = grid.n_cells();
        let offsets = scheme.offsets();
        if offsets.len() > n {
            return Err(invalid(format!(
                "{scheme} stencil needs {} points, grid has {n}",
                offsets.len()
            )));
        }
        let x: Vec<f64> = grid.x[..n].to_vec();
        let length = grid.length;
        let mut weights = Vec::with_capacity(n * offsets.len());
        for i in 0..n {
            let rel: Vec<f64> = offsets
                .iter()
                .map(|&o| periodic_coord(&x, length, i as i64 + o) - x[i])
                .collect();
            weights.extend(FdStencil::from_offsets(&rel)?.weights);
        }
        let inv_back = (0..n)
            .map(|i| 1.0 / (x[i] - periodic_coord(&x, length, i as i64 - 1)))
            .collect();
        Ok(Self {
            scheme,
            x,
            length,
            offsets,
            weights,
            inv_back,
        })
    }

    /// Stencil at point `i` as physical offsets and weights.
    pub fn stencil(&self, i: usize) -> FdStencil {
        let s = self.offsets.len();
        FdStencil {
            offsets: self
                .offsets
                .iter()
                .map(|&o| periodic_coord(&self.x, self.length, i as i64 + o) - self.x[i])
                .collect(),
            weights: self.weights[i * s..(i + 1) * s].to_vec(),
        }
    }

    pub fn integral(&self, u: &[f64]) -> f64 {
        let n = self.x.len();
        (0..n)
            .map(|i| {
                let next = periodic_coord(&self.x, self.length, i as i64 + 1);
                u[i] * (next - self.x[i])
            })
            .sum()
    }

    /// Periodic piecewise-linear reconstruction at `x`.
    pub fn evaluate(&self, u: &[f64], x: f64) -> f64 {
        self.interpolation_weights(x).iter().map(|&(i, w)| w * u[i]).sum()
    }

    /// The two points and weights of the linear reconstruction at `x`.
    pub fn interpolation_weights(&self, x: f64) -> [(usize, f64); 2] {
        let n = self.x.len();
        let x = x.rem_euclid(self.length);
        let i = match self.x.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let next = periodic_coord(&self.x, self.length, i as i64 + 1);
        let t = (x - self.x[i]) / (next - self.x[i]);
        [(i, 1.0 - t), ((i + 1) % n, t)]
    }
}

// Coordinate of point `i`, unwrapped across periodic copies of the domain.
fn periodic_coord(x: &[f64], length: f64, i: i64) -> f64 {
    let n = x.len() as i64;
    let wraps = i.div_euclid(n);
    x[i.rem_euclid(n) as usize] + wraps as f64 * length
}

impl LinearRhs for FdAdvection {
    fn len(&self) -> usize {
        self.x.len()
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let n = self.x.len() as i64;
        let s = self.offsets.len();
        let b = self.scheme.lf_blend;
        for i in 0..n {
            let w = &self.weights[i as usize * s..(i as usize + 1) * s];
            let du: f64 = self
                .offsets
                .iter()
                .zip(w)
                .map(|(&o, wk)| wk * u[(i + o).rem_euclid(n) as usize])
                .sum();
            let back = (u[i as usize] - u[(i - 1).rem_euclid(n) as usize]) * self.inv_back[i as usize];
            out[i as usize] = -((1.0 - b) * du + b * back);
        }
    }
}

//! Spatial slice of a wave fed into an open stretched grid.
//!
//! A sine wave enters through the left boundary of a non-periodic grid and is
//! advected with classical RK4 until it has crossed the domain. The amplitude
//! envelope over the final wave period shows how growth and decay develop as
//! the local cell width, and with it the local `k_hat` and CFL, changes.

use std::f64::consts::PI;

use super::fr::FrAdvection;
use super::grid::StretchedGrid1D;
use crate::error::{invalid, Error, Result};
use crate::reference::{CorrectionKind, ReferenceElement};

/// Settings for [`spatial_slice`].
#[derive(Clone, Debug)]
pub struct SliceConfig {
    pub p: usize,
    pub gamma: f64,
    pub cells: usize,
    pub length: f64,
    /// Wavenumber normalised by the first (smallest) cell.
    pub k_hat_inflow: f64,
    /// `tau / delta_0`.
    pub cfl: f64,
    /// Run length in domain transits.
    pub transits: f64,
}

impl Default for SliceConfig {
    fn default() -> Self {
        Self {
            p: 4,
            gamma: 1.1,
            cells: 40,
            length: 1.0,
            k_hat_inflow: 0.1 * PI,
            cfl: 0.01,
            transits: 1.2,
        }
    }
}

/// Per-cell envelope of the fed wave.
#[derive(Clone, Debug)]
pub struct SliceProfile {
    /// Cell centres.
    pub x: Vec<f64>,
    /// Largest `|u|` in each cell over the final wave period.
    pub amplitude: Vec<f64>,
    /// Local `tau / delta_j`.
    pub cfl: Vec<f64>,
    /// Local `k delta_j / (p+1)`.
    pub k_hat: Vec<f64>,
}

pub fn spatial_slice(cfg: &SliceConfig) -> Result<SliceProfile> {
    if !(cfg.cfl > 0.0 && cfg.k_hat_inflow > 0.0 && cfg.transits > 0.0) {
        return Err(invalid("CFL, inflow wavenumber and run length must be positive"));
    }
    let element = ReferenceElement::new(cfg.p, CorrectionKind::HuynhG2)?;
    let grid = StretchedGrid1D::new(cfg.cells, cfg.gamma, cfg.length)?;
    let n = element.n_points();
    let k = cfg.k_hat_inflow * n as f64 / grid.delta[0];
    let tau = cfg.cfl * grid.delta[0];
    let solver = FrAdvection::new(element, grid);
    let period = 2.0 * PI / k;
    let t_end = cfg.transits * cfg.length + period;
    let steps = (t_end / tau).ceil() as usize;
    let window_start = steps.saturating_sub((period / tau).ceil() as usize);
    let inflow = |t: f64| (-k * t).sin();

    let len = cfg.cells * n;
    let mut u = vec![0.0; len];
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut k4 = vec![0.0; len];
    let mut stage = vec![0.0; len];
    let mut envelope = vec![0.0f64; cfg.cells];
    for step in 0..steps {
        let t = step as f64 * tau;
        solver.apply_with_inflow(&u, inflow(t), &mut k1);
        axpy(&u, 0.5 * tau, &k1, &mut stage);
        solver.apply_with_inflow(&stage, inflow(t + 0.5 * tau), &mut k2);
        axpy(&u, 0.5 * tau, &k2, &mut stage);
        solver.apply_with_inflow(&stage, inflow(t + 0.5 * tau), &mut k3);
        axpy(&u, tau, &k3, &mut stage);
        solver.apply_with_inflow(&stage, inflow(t + tau), &mut k4);
        for i in 0..len {
            u[i] += tau / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: step + 1 });
        }
        if step >= window_start {
            for (j, e) in envelope.iter_mut().enumerate() {
                let m = u[j * n..(j + 1) * n].iter().fold(0.0f64, |a, v| a.max(v.abs()));
                *e = e.max(m);
            }
        }
    }
    let g = &solver.grid;
    Ok(SliceProfile {
        x: (0..cfg.cells).map(|j| 0.5 * (g.x[j] + g.x[j + 1])).collect(),
        amplitude: envelope,
        cfl: g.delta.iter().map(|d| tau / d).collect(),
        k_hat: g.delta.iter().map(|d| k * d / n as f64).collect(),
    })
}

fn axpy(u: &[f64], a: f64, k: &[f64], out: &mut [f64]) {
    for ((o, x), y) in out.iter_mut().zip(u).zip(k) {
        *o = x + a * y;
    }
}

//! FFT transfer-function measurement of modified wavenumbers.
//!
//! A periodic wave `exp(i k x)` with an integer number of wavelengths in the
//! domain is advected by the solver. At regular checkpoints the solution is
//! sampled on a uniform measurement grid and the driven FFT bin is divided by
//! the bin of the initial field. The resulting transfer `H(t)` defines the
//! modified wavenumber through `H = exp(-i k' t)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::fd::{FdAdvection, FdScheme};
use super::fr::FrAdvection;
use super::grid::StretchedGrid1D;
use super::time::{advance, LinearRhs};
use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::reference::{CorrectionKind, ReferenceElement};
use crate::spectral::{ppw_from_samples, PpwRule};
use crate::stability::RkScheme;

/// Spatial scheme driven by the harness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WaveScheme {
    Fr { p: usize, kind: CorrectionKind },
    Fd(FdScheme),
}

impl WaveScheme {
    pub fn fr(p: usize) -> Self {
        Self::Fr {
            p,
            kind: CorrectionKind::HuynhG2,
        }
    }

    /// Spatial order: `p + 1` for FR, the stencil order for FD.
    pub fn order(&self) -> usize {
        match self {
            Self::Fr { p, .. } => p + 1,
            Self::Fd(s) => s.order,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Fr { .. } => "FR".to_string(),
            Self::Fd(s) => s.to_string(),
        }
    }
}

impl fmt::Display for WaveScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fr { p, kind } => write!(f, "FR p={p} {kind}"),
            Self::Fd(s) => write!(f, "{s} (LF {})", s.lf_blend),
        }
    }
}

/// How `k'` is read off the transfer history.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Estimator {
    /// Fit `H(t)` at the checkpoints as a sum of damped exponentials and keep the
    /// one with the largest amplitude.
    #[default]
    ModalFit,
    /// `k' = i ln H(T) / T` at the final time, with the phase unwrapped across checkpoints.
    FinalRatio,
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "modal" | "modal-fit" | "pencil" => Ok(Self::ModalFit),
            "ratio" | "final" | "final-ratio" => Ok(Self::FinalRatio),
            other => Err(invalid(format!("unknown estimator '{other}'"))),
        }
    }
}

/// Settings for [`wave_transfer_function`].
#[derive(Clone, Debug)]
pub struct WaveConfig {
    pub scheme: WaveScheme,
    /// Cell expansion rate of the FR grid; FD grids use `gamma^(1/order)` per point.
    pub gamma: f64,
    /// Total degrees of freedom (solution points or FD points).
    pub dof: usize,
    pub length: f64,
    /// Integer wavelength counts `m`; `k = 2 pi m / L`.
    pub modes: Vec<usize>,
    /// `tau / h_min`, with `h_min` the smallest cell (FR) or point spacing (FD).
    pub cfl: f64,
    /// Total number of time steps; when `None` it follows from `duration`.
    pub steps: Option<usize>,
    /// Run length in mean point spacings travelled at unit speed.
    pub duration: f64,
    pub checkpoints: usize,
    pub measure_points: usize,
    pub rk: RkScheme,
    pub estimator: Estimator,
    /// Largest fraction of input energy allowed outside the driven bin.
    pub leakage_threshold: f64,
    /// Singular values below this fraction of the largest are dropped by the modal fit.
    pub pencil_tolerance: f64,
}

impl WaveConfig {
    pub fn new(scheme: WaveScheme, gamma: f64, dof: usize, modes: Vec<usize>) -> Self {
        Self {
            scheme,
            gamma,
            dof,
            length: 1.0,
            modes,
            cfl: 0.01,
            steps: None,
            duration: 8.0,
            checkpoints: 64,
            measure_points: 4096,
            rk: RkScheme::Rk44,
            estimator: Estimator::ModalFit,
            leakage_threshold: 0.5,
            pencil_tolerance: 1e-9,
        }
    }

    /// All integer modes from 1 up to the mesh-averaged Nyquist limit times `max_k_hat / pi`.
    pub fn modes_up_to(dof: usize, max_k_hat: f64) -> Vec<usize> {
        let top = (max_k_hat / PI * dof as f64 / 2.0).floor() as usize;
        (1..=top).collect()
    }
}

/// Measured modified wavenumber at one mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferPoint {
    pub mode: usize,
    /// `k L / DoF`.
    pub k_hat: f64,
    pub re_k_hat_prime: f64,
    pub im_k_hat_prime: f64,
    /// Energy fraction of the input field outside the driven bin.
    pub leakage: f64,
    /// Driven-bin transfer `H(T)` at the final time.
    pub transfer: Complex64,
}

/// Result of a transfer-function sweep.
#[derive(Clone, Debug)]
pub struct TransferTable {
    pub scheme: WaveScheme,
    pub gamma: f64,
    pub dof: usize,
    pub cfl: f64,
    pub steps: usize,
    pub points: Vec<TransferPoint>,
}

enum Solver {
    Fr(FrAdvection),
    Fd(FdAdvection),
}

impl Solver {
    fn build(cfg: &WaveConfig) -> Result<Self> {
        match cfg.scheme {
            WaveScheme::Fr { p, kind } => {
                let n = p + 1;
                if cfg.dof % n != 0 {
                    return Err(invalid(format!("DoF {} is not a multiple of p+1 = {n}", cfg.dof)));
                }
                let element = ReferenceElement::new(p, kind)?;
                let grid = StretchedGrid1D::new(cfg.dof / n, cfg.gamma, cfg.length)?;
                Ok(Self::Fr(FrAdvection::new(element, grid)))
            }
            WaveScheme::Fd(s) => {
                let ratio = cfg.gamma.powf(1.0 / s.order as f64);
                let grid = StretchedGrid1D::new(cfg.dof, ratio, cfg.length)?;
                Ok(Self::Fd(FdAdvection::new(s, &grid)?))
            }
        }
    }

    fn rhs(&self) -> &dyn LinearRhs {
        match self {
            Self::Fr(s) => s,
            Self::Fd(s) => s,
        }
    }

    fn points(&self) -> Vec<f64> {
        match self {
            Self::Fr(s) => s.points(),
            Self::Fd(s) => s.x.clone(),
        }
    }

    fn h_min(&self) -> f64 {
        match self {
            Self::Fr(s) => s.grid.delta.iter().copied().fold(f64::INFINITY, f64::min),
            Self::Fd(s) => {
                let n = s.x.len();
                (0..n)
                    .map(|i| if i + 1 < n { s.x[i + 1] - s.x[i] } else { s.length - s.x[i] })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    // Sparse rows of the map from solver state to the uniform measurement grid.
    fn sampler(&self, m: usize, length: f64) -> Vec<Vec<(usize, f64)>> {
        (0..m)
            .map(|i| {
                let x = length * i as f64 / m as f64;
                match self {
                    Self::Fr(s) => {
                        let (j, xi) = s.grid.locate(x);
                        let n = s.n_points();
                        s.element
                            .basis_at(xi)
                            .into_iter()
                            .enumerate()
                            .map(|(c, w)| (j * n + c, w))
                            .collect()
                    }
                    Self::Fd(s) => s.interpolation_weights(x).to_vec(),
                }
            })
            .collect()
    }
}

struct Probe {
    rows: Vec<Vec<(usize, f64)>>,
    fft: Arc<dyn Fft<f64>>,
}

impl Probe {
    fn spectrum(&self, re: &[f64], im: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Complex64::new(0.0, 0.0), |acc, &(c, w)| acc + Complex64::new(w * re[c], w * im[c]))
            })
            .collect();
        self.fft.process(&mut buf);
        buf
    }
}

/// Measures `k'` for every configured mode.
pub fn wave_transfer_function(cfg: &WaveConfig) -> Result<TransferTable> {
    if !(cfg.cfl > 0.0) {
        return Err(invalid(format!("CFL must be positive, got {}", cfg.cfl)));
    }
    if cfg.checkpoints < 8 {
        return Err(invalid("need at least 8 checkpoints"));
    }
    let solver = Solver::build(cfg)?;
    let tau_nominal = cfg.cfl * solver.h_min();
    let per_checkpoint = match cfg.steps {
        Some(s) => (s / cfg.checkpoints).max(1),
        None => {
            let t_end = cfg.duration * cfg.length / cfg.dof as f64;
            ((t_end / tau_nominal / cfg.checkpoints as f64).ceil() as usize).max(1)
        }
    };
    let steps = per_checkpoint * cfg.checkpoints;
    let probe_rows = solver.sampler(cfg.measure_points, cfg.length);
    let fft = FftPlanner::new().plan_fft_forward(cfg.measure_points);
    let probe = Probe {
        rows: probe_rows,
        fft,
    };
    let nyq_bins = cfg.measure_points / 2;
    if let Some(&m) = cfg.modes.iter().find(|&&m| m >= nyq_bins || 2 * m > cfg.dof) {
        return Err(invalid(format!("mode {m} is above the grid Nyquist limit")));
    }
    let points = cfg
        .modes
        .par_iter()
        .map(|&m| measure_mode(cfg, &solver, &probe, m, tau_nominal, per_checkpoint))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransferTable {
        scheme: cfg.scheme,
        gamma: cfg.gamma,
        dof: cfg.dof,
        cfl: cfg.cfl,
        steps,
        points,
    })
}

fn measure_mode(
    cfg: &WaveConfig,
    solver: &Solver,
    probe: &Probe,
    m: usize,
    tau: f64,
    per_checkpoint: usize,
) -> Result<TransferPoint> {
    let k = 2.0 * PI * m as f64 / cfg.length;
    let scale = cfg.length / cfg.dof as f64;
    let x = solver.points();
    let mut re: Vec<f64> = x.iter().map(|x| (k * x).cos()).collect();
    let mut im: Vec<f64> = x.iter().map(|x| (k * x).sin()).collect();
    let spec0 = probe.spectrum(&re, &im);
    let total: f64 = spec0.iter().map(|c| c.norm_sqr()).sum();
    let leakage = 1.0 - spec0[m].norm_sqr() / total;
    if leakage > cfg.leakage_threshold {
        return Err(Error::Leakage {
            mode: m,
            leakage,
            threshold: cfg.leakage_threshold,
        });
    }
    let f0 = spec0[m];
    let dt = tau * per_checkpoint as f64;
    let rhs = solver.rhs();
    // Transfer relative to exact advection, y_c = H(t_c) exp(i k t_c).
    let mut rel = Vec::with_capacity(cfg.checkpoints + 1);
    rel.push(Complex64::new(1.0, 0.0));
    let mut transfer = Complex64::new(1.0, 0.0);
    for c in 1..=cfg.checkpoints {
        advance(rhs, &mut re, tau, cfg.rk, per_checkpoint)?;
        advance(rhs, &mut im, tau, cfg.rk, per_checkpoint)?;
        transfer = probe.spectrum(&re, &im)[m] / f0;
        rel.push(transfer * Complex64::from_polar(1.0, k * dt * c as f64));
    }
    let k_prime = match cfg.estimator {
        Estimator::ModalFit => {
            let modes = linalg::matrix_pencil(&rel, cfg.pencil_tolerance).ok_or(Error::EigenFailure {
                k_hat: k * scale,
                tau: Some(tau),
            })?;
            let z = modes[0].z;
            Complex64::new(k - z.arg() / dt, z.norm().ln() / dt)
        }
        Estimator::FinalRatio => {
            let mut phase = 0.0;
            for w in rel.windows(2) {
                phase += (w[1] / w[0]).arg();
            }
            let t_end = dt * cfg.checkpoints as f64;
            let h_end = rel[cfg.checkpoints].norm();
            Complex64::new(k - phase / t_end, h_end.ln() / t_end)
        }
    };
    Ok(TransferPoint {
        mode: m,
        k_hat: k * scale,
        re_k_hat_prime: k_prime.re * scale,
        im_k_hat_prime: k_prime.im * scale,
        leakage,
        transfer,
    })
}

/// Measures modes `1, 2, ...` in blocks of `block` until the PPW tolerance is
/// crossed, then returns the PPW and every measured point.
///
/// Gives the same PPW as a full sweep because both rules only look at samples
/// up to the crossing, but skips the expensive high modes.
pub fn numeric_ppw_sweep(
    cfg: &WaveConfig,
    epsilon: f64,
    rule: PpwRule,
    block: usize,
) -> Result<(f64, TransferTable)> {
    let block = block.max(1);
    let top = (cfg.dof / 2).min(cfg.measure_points / 2 - 1);
    let mut table: Option<TransferTable> = None;
    let mut next = 1;
    while next <= top {
        let last = (next + block - 1).min(top);
        let mut part = cfg.clone();
        part.modes = (next..=last).collect();
        let measured = wave_transfer_function(&part)?;
        match table.as_mut() {
            Some(t) => t.points.extend(measured.points),
            None => table = Some(measured),
        }
        let t = table.as_ref().expect("table was just filled");
        let ppw = numeric_ppw(t, epsilon, rule)?;
        let k_last = t.points.last().map_or(0.0, |p| p.k_hat);
        if ppw.is_infinite() || ppw * k_last > 2.0 * PI * (1.0 + 1e-12) {
            return Ok((ppw, table.expect("table was just filled")));
        }
        next = last + 1;
    }
    let t = table.ok_or_else(|| invalid("no modes below the Nyquist limit"))?;
    Ok((numeric_ppw(&t, epsilon, rule)?, t))
}

/// Points per wavelength from measured `Re k_hat' / k_hat`.
pub fn numeric_ppw(table: &TransferTable, epsilon: f64, rule: PpwRule) -> Result<f64> {
    let pts: Vec<&TransferPoint> = table.points.iter().filter(|p| p.k_hat > 0.0).collect();
    let k: Vec<f64> = pts.iter().map(|p| p.k_hat).collect();
    let c: Vec<f64> = pts.iter().map(|p| p.re_k_hat_prime / p.k_hat).collect();
    ppw_from_samples(&k, &c, epsilon, rule)
}

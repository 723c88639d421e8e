//! Fully discrete stability of FR with explicit Runge-Kutta time stepping.
//!
//! For the linear autonomous problem every `s`-stage, order-`s` scheme
//! (`s <= 4`) and the five-stage family used here share the amplification
//! matrix `R = sum_{i=0..s} (tau Q)^i / i!`. Stability is read from the spectral
//! radius of `R` maximised over the wavenumber band.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::reference::{CorrectionKind, ReferenceElement};
use crate::spectral::SemiDiscreteOperator;

/// Explicit Runge-Kutta scheme, identified by its stage count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RkScheme {
    Rk33,
    Rk44,
    Rk55,
}

impl RkScheme {
    pub const ALL: [RkScheme; 3] = [Self::Rk33, Self::Rk44, Self::Rk55];

    pub fn stages(self) -> usize {
        match self {
            Self::Rk33 => 3,
            Self::Rk44 => 4,
            Self::Rk55 => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Rk33 => "RK33",
            Self::Rk44 => "RK44",
            Self::Rk55 => "RK55",
        }
    }

    /// Scalar amplification factor `sum_{i=0..s} z^i / i!`.
    pub fn amplification(self, z: Complex64) -> Complex64 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for i in 1..=self.stages() {
            term *= z / i as f64;
            sum += term;
        }
        sum
    }
}

impl fmt::Display for RkScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RkScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RK33" | "3" => Ok(Self::Rk33),
            "RK44" | "4" => Ok(Self::Rk44),
            "RK55" | "5" => Ok(Self::Rk55),
            other => Err(invalid(format!("unknown RK scheme '{other}' (expected RK33, RK44 or RK55)"))),
        }
    }
}

/// `R = sum_{i=0..s} (tau Q)^i / i!`.
pub fn update_matrix(q: &DMatrix<Complex64>, tau: f64, scheme: RkScheme) -> DMatrix<Complex64> {
    let n = q.nrows();
    let tq = q * Complex64::new(tau, 0.0);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    let mut sum = term.clone();
    for i in 1..=scheme.stages() {
        term = &term * &tq / Complex64::new(i as f64, 0.0);
        sum += &term;
    }
    sum
}

/// Spectral radius of `R` across a wavenumber band.
#[derive(Clone, Debug)]
pub struct RhoSweep {
    pub k_hat: Vec<f64>,
    pub rho: Vec<f64>,
    pub max: f64,
}

/// Precomputed `Q(k)` over `k_hat = pi n / k_samples`, `n = 1..=k_samples`, with unit cell width.
#[derive(Clone, Debug)]
pub struct OperatorBand {
    pub k_hat: Vec<f64>,
    pub q: Vec<DMatrix<Complex64>>,
}

impl OperatorBand {
    pub fn new(p: usize, gamma: f64, kind: CorrectionKind, k_samples: usize) -> Result<Self> {
        let element = ReferenceElement::new(p, kind)?;
        let op = SemiDiscreteOperator::new(&element, gamma, 1.0)?;
        let k_hat: Vec<f64> = (1..=k_samples)
            .map(|n| std::f64::consts::PI * n as f64 / k_samples as f64)
            .collect();
        let q = k_hat.iter().map(|&kh| op.q(op.k_from_k_hat(kh))).collect();
        Ok(Self { k_hat, q })
    }

    /// Per-wavenumber spectral radius of `R` at time step `tau` (equal to the CFL number here).
    pub fn rho(&self, tau: f64, scheme: RkScheme) -> Result<RhoSweep> {
        let rho = self
            .q
            .iter()
            .zip(&self.k_hat)
            .map(|(q, &kh)| {
                linalg::spectral_radius(&update_matrix(q, tau, scheme)).ok_or(Error::EigenFailure {
                    k_hat: kh,
                    tau: Some(tau),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let max = rho.iter().copied().fold(0.0, f64::max);
        Ok(RhoSweep {
            k_hat: self.k_hat.clone(),
            rho,
            max,
        })
    }

    fn rho_max(&self, tau: f64, scheme: RkScheme) -> Result<f64> {
        Ok(self.rho(tau, scheme)?.max)
    }
}

/// `rho(R)` over `k_hat in (0, pi]` for one time step `tau = CFL * delta_j`.
pub fn spectral_radius_sweep(
    p: usize,
    gamma: f64,
    scheme: RkScheme,
    cfl: f64,
    k_samples: usize,
) -> Result<RhoSweep> {
    if k_samples < 128 {
        return Err(invalid(format!("need at least 128 wavenumber samples, got {k_samples}")));
    }
    if !(cfl > 0.0) {
        return Err(invalid(format!("time step must be positive, got {cfl}")));
    }
    OperatorBand::new(p, gamma, CorrectionKind::HuynhG2, k_samples)?.rho(cfl, scheme)
}

/// Which rule bounded a CFL limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Detection {
    /// No weak growth at small steps; the limit is where `rho` leaves the unit band.
    ExceedsUnity,
    /// Weak growth is present; the limit is where `rho` breaks away from it.
    SharpIncrease,
}

impl Detection {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ExceedsUnity => "exceeds_unity",
            Self::SharpIncrease => "sharp_increase",
        }
    }
}

/// Search settings for [`cfl_limit_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CflSearch {
    /// Relative jump of `max rho` above the weak-growth envelope that marks instability.
    pub knee: f64,
    /// Allowance above 1 for the diagnostic unity limit.
    pub unity: f64,
    /// Small step used to measure the weak growth rate.
    pub probe: f64,
    pub scan_step: f64,
    pub max_cfl: f64,
    pub tolerance: f64,
    pub k_samples: usize,
    pub correction_kind: CorrectionKind,
}

impl Default for CflSearch {
    fn default() -> Self {
        Self {
            knee: 0.09,
            unity: 1e-3,
            probe: 1e-3,
            scan_step: 0.01,
            max_cfl: 4.0,
            tolerance: 1e-4,
            k_samples: 512,
            correction_kind: CorrectionKind::HuynhG2,
        }
    }
}

/// CFL limit together with the evidence used to find it.
#[derive(Clone, Debug)]
pub struct StabilityResult {
    pub p: usize,
    pub gamma: f64,
    pub scheme: RkScheme,
    pub cfl_limit: f64,
    pub detection: Detection,
    /// Weak growth rate per unit CFL, `max(0, ln rho(probe) / probe)`.
    pub growth_rate: f64,
    /// Last CFL with `max rho <= 1 + unity`, if any scan point satisfied it.
    pub unity_limit: Option<f64>,
    /// `(CFL, max rho)` at every scan point.
    pub rho_curve: Vec<(f64, f64)>,
}

// Growth rates below this are round-off in `rho` at the probe step.
const GROWTH_FLOOR: f64 = 1e-9;

/// CFL limit with the default search settings.
pub fn cfl_limit(p: usize, gamma: f64, scheme: RkScheme) -> Result<StabilityResult> {
    cfl_limit_with(p, gamma, scheme, &CflSearch::default())
}

/// Largest CFL before `max rho` jumps away from its weak-growth envelope.
///
/// On expanding grids `rho` exceeds one at every step size because of the
/// geometric growth of the Bloch amplitude. That growth is measured at a tiny
/// step as `G = ln rho / tau`, and the limit is the first CFL where
/// `max rho > exp(G CFL) (1 + knee)`, located by a coarse scan and bisection.
pub fn cfl_limit_with(
    p: usize,
    gamma: f64,
    scheme: RkScheme,
    search: &CflSearch,
) -> Result<StabilityResult> {
    let band = OperatorBand::new(p, gamma, search.correction_kind, search.k_samples)?;
    let mut growth_rate = (band.rho_max(search.probe, scheme)?.ln() / search.probe).max(0.0);
    if growth_rate < GROWTH_FLOOR {
        growth_rate = 0.0;
    }
    let unstable = |cfl: f64, rho: f64| rho > (growth_rate * cfl).exp() * (1.0 + search.knee);

    let mut rho_curve = Vec::new();
    let mut unity_limit = None;
    let mut unity_open = true;
    let mut lo = 0.0;
    let mut hi = None;
    let mut cfl = search.scan_step;
    while cfl <= search.max_cfl + 1e-12 {
        let rho = band.rho_max(cfl, scheme)?;
        rho_curve.push((cfl, rho));
        if unity_open && rho <= 1.0 + search.unity {
            unity_limit = Some(cfl);
        } else {
            unity_open = false;
        }
        if unstable(cfl, rho) {
            hi = Some(cfl);
            break;
        }
        lo = cfl;
        cfl += search.scan_step;
    }
    let mut hi = hi.ok_or_else(|| {
        Error::NotBracketed(format!(
            "{scheme} p={p} gamma={gamma}: no instability below CFL {}",
            search.max_cfl
        ))
    })?;
    if lo == 0.0 {
        return Err(Error::NotBracketed(format!(
            "{scheme} p={p} gamma={gamma}: unstable at the first scan point"
        )));
    }
    while hi - lo > search.tolerance {
        let mid = 0.5 * (lo + hi);
        if unstable(mid, band.rho_max(mid, scheme)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(StabilityResult {
        p,
        gamma,
        scheme,
        cfl_limit: lo,
        detection: if growth_rate > 0.0 {
            Detection::SharpIncrease
        } else {
            Detection::ExceedsUnity
        },
        growth_rate,
        unity_limit,
        rho_curve,
    })
}

/// CFL limits for every combination, computed in parallel and returned in input order.
pub fn cfl_table(
    schemes: &[RkScheme],
    orders: &[usize],
    gammas: &[f64],
    search: &CflSearch,
) -> Result<Vec<StabilityResult>> {
    let jobs: Vec<(RkScheme, usize, f64)> = schemes
        .iter()
        .flat_map(|&s| orders.iter().flat_map(move |&o| gammas.iter().map(move |&g| (s, o, g))))
        .collect();
    jobs.par_iter()
        .map(|&(s, order, g)| {
            if order < 2 {
                return Err(invalid(format!("spatial order must be at least 2, got {order}")));
            }
            cfl_limit_with(order - 1, g, s, search)
        })
        .collect()
}

/// Expansion rates of the published CFL table.
pub const TABLE_GAMMAS: [f64; 7] = [0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3];

/// Spatial orders (`p + 1`) of the published CFL table.
pub const TABLE_ORDERS: [usize; 3] = [3, 4, 5];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_step_is_identity() {
        let e = ReferenceElement::new(3, CorrectionKind::HuynhG2).unwrap();
        let op = SemiDiscreteOperator::new(&e, 1.0, 1.0).unwrap();
        let r = update_matrix(&op.q(2.0), 1e-12, RkScheme::Rk44);
        let id = DMatrix::<Complex64>::identity(4, 4);
        assert!((r - id).norm() < 1e-9);
    }

    #[test]
    fn rk33_explicit_terms() {
        let e = ReferenceElement::new(2, CorrectionKind::HuynhG2).unwrap();
        let op = SemiDiscreteOperator::new(&e, 1.1, 1.0).unwrap();
        let q = op.q(1.3);
        let tau = 0.2;
        let tq = &q * Complex64::new(tau, 0.0);
        let tq2 = &tq * &tq;
        let tq3 = &tq2 * &tq;
        let id = DMatrix::<Complex64>::identity(3, 3);
        let expect = id + &tq + tq2 / Complex64::new(2.0, 0.0) + tq3 / Complex64::new(6.0, 0.0);
        assert!((update_matrix(&q, tau, RkScheme::Rk33) - expect).norm() < 1e-13);
    }

    #[test]
    fn scalar_rk4_amplification() {
        for (lambda, tau) in [(1.0, 0.5), (-2.0, 0.7), (3.0, 0.9)] {
            let z = Complex64::new(0.0, tau * lambda);
            let q = DMatrix::from_element(1, 1, Complex64::new(0.0, lambda));
            let r = update_matrix(&q, tau, RkScheme::Rk44);
            let classical = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
            assert!((r[(0, 0)].norm() - classical.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn contracting_grid_is_stable_at_small_steps() {
        let s = spectral_radius_sweep(2, 0.9, RkScheme::Rk44, 0.01, 512).unwrap();
        assert!(s.max <= 1.0 + 1e-12, "{}", s.max);
    }

    #[test]
    fn mild_expansion_p2_has_mixed_radius() {
        let s = spectral_radius_sweep(2, 1.1, RkScheme::Rk44, 0.01, 512).unwrap();
        assert!(s.rho.iter().any(|r| *r > 1.0));
        assert!(s.rho.iter().any(|r| *r < 1.0));
    }

    #[test]
    fn mild_expansion_p3_never_decays() {
        let s = spectral_radius_sweep(3, 1.1, RkScheme::Rk44, 0.01, 512).unwrap();
        assert!(s.rho.iter().all(|r| *r >= 1.0), "{:?}", s.rho.iter().cloned().fold(f64::MAX, f64::min));
    }

    #[test]
    fn radius_is_periodic_in_element_wavenumber() {
        let e = ReferenceElement::new(3, CorrectionKind::HuynhG2).unwrap();
        let delta = 0.7;
        let op = SemiDiscreteOperator::new(&e, 1.2, delta).unwrap();
        for k in [0.3, 2.0, 7.5] {
            let a = linalg::spectral_radius(&update_matrix(&op.q(k), 0.1, RkScheme::Rk44)).unwrap();
            let b = linalg::spectral_radius(&update_matrix(
                &op.q(k + 2.0 * std::f64::consts::PI / delta),
                0.1,
                RkScheme::Rk44,
            ))
            .unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn short_sweeps_are_rejected() {
        assert!(spectral_radius_sweep(2, 1.0, RkScheme::Rk33, 0.1, 64).is_err());
        assert!(spectral_radius_sweep(2, 1.0, RkScheme::Rk33, 0.0, 256).is_err());
        assert!("RK66".parse::<RkScheme>().is_err());
    }

    #[test]
    fn table_spot_values() {
        for (s, p, g, expect) in [
            (RkScheme::Rk44, 3, 1.0, 0.288),
            (RkScheme::Rk33, 2, 0.7, 0.519),
            (RkScheme::Rk55, 4, 1.3, 0.204),
        ] {
            let r = cfl_limit(p, g, s).unwrap();
            assert!((r.cfl_limit - expect).abs() / expect < 0.05, "{s} p={p} g={g}: {}", r.cfl_limit);
        }
    }

    #[test]
    fn rho_rises_beyond_the_limit() {
        let r = cfl_limit(3, 1.0, RkScheme::Rk44).unwrap();
        let band = OperatorBand::new(3, 1.0, CorrectionKind::HuynhG2, 512).unwrap();
        let mut prev = 0.0;
        for i in 0..10 {
            let cfl = r.cfl_limit + 0.005 + 0.01 * i as f64;
            let rho = band.rho_max(cfl, RkScheme::Rk44).unwrap();
            assert!(rho >= prev);
            prev = rho;
        }
        assert_eq!(r.detection, Detection::ExceedsUnity);
        assert!(cfl_limit(3, 1.2, RkScheme::Rk44).unwrap().detection == Detection::SharpIncrease);
    }
}

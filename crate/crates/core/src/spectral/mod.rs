//! Von Neumann analysis of FR on geometrically stretched grids.
//!
//! For linear advection with unit speed and upwind interfaces, the update of
//! cell `j` couples only to its upwind neighbour `j-1`. Inserting a Bloch wave
//! gives the `(p+1)x(p+1)` operator
//!
//! ```text
//! Q(k) = -C0 / J_j - C_{-1} e^{-i k delta_j} / J_{j-1}
//! ```
//!
//! whose eigenvalues `lambda` give the modified phase velocity `c = i lambda / k`.

pub mod fd;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::reference::{CorrectionKind, ReferenceElement};

pub use fd::{fd_modified_wavenumber, FdStencil};

/// Wavenumber at which the physical branch is seeded.
pub const SEED_K_HAT: f64 = 1e-3;

/// Semi-discrete FR operator for one cell and its upwind neighbour.
#[derive(Clone, Debug)]
pub struct SemiDiscreteOperator {
    pub p: usize,
    pub c0: DMatrix<f64>,
    pub cm1: DMatrix<f64>,
    /// Jacobian of the current cell, `delta_j / 2`.
    pub jj: f64,
    /// Jacobian of the upwind cell, `delta_j / (2 gamma)`.
    pub jjm1: f64,
    pub delta_j: f64,
    pub gamma: f64,
}

impl SemiDiscreteOperator {
    pub fn new(element: &ReferenceElement, gamma: f64, delta_j: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid(format!("expansion rate must be positive, got {gamma}")));
        }
        if !(delta_j > 0.0 && delta_j.is_finite()) {
            return Err(invalid(format!("cell width must be positive, got {delta_j}")));
        }
        let c0 = &element.d - &element.hl * element.ll.transpose();
        let cm1 = &element.hl * element.lr.transpose();
        Ok(Self {
            p: element.p,
            c0,
            cm1,
            jj: delta_j / 2.0,
            jjm1: delta_j / (2.0 * gamma),
            delta_j,
            gamma,
        })
    }

    /// Physical wavenumber for a Nyquist-normalised one.
    pub fn k_from_k_hat(&self, k_hat: f64) -> f64 {
        k_hat * (self.p as f64 + 1.0) / self.delta_j
    }

    pub fn k_hat_from_k(&self, k: f64) -> f64 {
        k * self.delta_j / (self.p as f64 + 1.0)
    }

    /// `Q(k)`, the Bloch-wave operator acting on the current cell's solution points.
    pub fn q(&self, k: f64) -> DMatrix<Complex64> {
        let shift = Complex64::from_polar(1.0, -k * self.delta_j);
        let a = -1.0 / self.jj;
        let b = -1.0 / self.jjm1;
        DMatrix::from_fn(self.p + 1, self.p + 1, |r, c| {
            Complex64::new(a * self.c0[(r, c)], 0.0) + shift * (b * self.cm1[(r, c)])
        })
    }

    /// Eigenvalues of `Q(k)`, unordered.
    pub fn q_eigenvalues(&self, k: f64) -> Result<Vec<Complex64>> {
        linalg::eigenvalues(&self.q(k)).ok_or(Error::EigenFailure {
            k_hat: self.k_hat_from_k(k),
            tau: None,
        })
    }

    /// Real growth rate of the `k -> 0` branch of `Q`.
    ///
    /// Zero on a uniform grid. On stretched grids the literal Bloch ansatz picks
    /// up the geometric change in cell size, which shows up here as a non-zero
    /// rate and in `Im c ~ rate / k` at small `k`.
    pub fn metric_growth_rate(&self) -> Result<f64> {
        Ok(self.zero_branch()?.re)
    }

    fn zero_branch(&self) -> Result<Complex64> {
        let ev = linalg::eigenvalues(&self.q(0.0)).ok_or(Error::EigenFailure {
            k_hat: 0.0,
            tau: None,
        })?;
        Ok(ev
            .into_iter()
            .max_by(|a, b| a.re.total_cmp(&b.re))
            .expect("operator has at least one eigenvalue"))
    }

    /// Modified phase velocity eigenvalues at `k`, with the physical branch
    /// tracked continuously from [`SEED_K_HAT`].
    pub fn modified_phase_velocity(&self, k: f64) -> Result<SpectralSample> {
        if !(k > 0.0) {
            return Err(invalid(format!("wavenumber must be positive, got {k}")));
        }
        let target = self.k_hat_from_k(k);
        let mut tracker = Tracker::new(self)?;
        let steps = ((target / (std::f64::consts::PI / 512.0)).ceil() as usize).max(1);
        let mut out = None;
        for s in 1..=steps {
            let kh = SEED_K_HAT + (target - SEED_K_HAT) * s as f64 / steps as f64;
            out = Some(tracker.advance(self.k_from_k_hat(kh))?);
        }
        let mut sample = out.expect("at least one step");
        sample.k = k;
        sample.k_hat = target;
        Ok(sample)
    }
}

/// Modified phase velocities at one wavenumber.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSample {
    pub k: f64,
    pub k_hat: f64,
    /// All `p+1` values of `c(k)`.
    pub eigenvalues: Vec<Complex64>,
    /// Index of the physical mode in `eigenvalues`.
    pub physical: usize,
}

impl SpectralSample {
    /// Physical modified phase velocity.
    pub fn c(&self) -> Complex64 {
        self.eigenvalues[self.physical]
    }
}

/// Continuation of the physical branch along increasing `k`.
///
/// Matching is done on `i (lambda - lambda_0) / k`, which tends to 1 on the
/// physical branch for any expansion rate, and steps are subdivided whenever
/// the nearest match is not clearly separated from the runner-up.
struct Tracker<'a> {
    op: &'a SemiDiscreteOperator,
    lambda0: Complex64,
    k: f64,
    last: Option<Complex64>,
    prev: Option<(f64, Complex64)>,
}

impl<'a> Tracker<'a> {
    fn new(op: &'a SemiDiscreteOperator) -> Result<Self> {
        let lambda0 = op.zero_branch()?;
        Ok(Self {
            op,
            lambda0,
            k: 0.0,
            last: None,
            prev: None,
        })
    }

    fn compensated(&self, lambda: Complex64, k: f64) -> Complex64 {
        Complex64::i() * (lambda - self.lambda0) / k
    }

    fn advance(&mut self, k: f64) -> Result<SpectralSample> {
        if self.last.is_none() {
            let k_seed = self.op.k_from_k_hat(SEED_K_HAT).min(k);
            let ev = self.op.q_eigenvalues(k_seed)?;
            let idx = nearest(&ev.iter().map(|l| self.compensated(*l, k_seed)).collect::<Vec<_>>(), Complex64::new(1.0, 0.0)).0;
            self.last = Some(self.compensated(ev[idx], k_seed));
            self.k = k_seed;
            if k == k_seed {
                return Ok(self.sample(k, ev, idx));
            }
        }
        self.step(k, 0)
    }

    fn step(&mut self, k: f64, depth: usize) -> Result<SpectralSample> {
        let last = self.last.expect("seeded");
        let predicted = match self.prev {
            Some((kp, cp)) if self.k > kp => last + (last - cp) * ((k - self.k) / (self.k - kp)),
            _ => last,
        };
        let ev = self.op.q_eigenvalues(k)?;
        let comp: Vec<Complex64> = ev.iter().map(|l| self.compensated(*l, k)).collect();
        let (idx, best, second) = nearest(&comp, predicted);
        if best > 0.25 * second && depth < 12 {
            let mid = 0.5 * (self.k + k);
            self.step(mid, depth + 1)?;
            return self.step(k, depth + 1);
        }
        self.prev = Some((self.k, last));
        self.last = Some(comp[idx]);
        self.k = k;
        Ok(self.sample(k, ev, idx))
    }

    fn sample(&self, k: f64, ev: Vec<Complex64>, physical: usize) -> SpectralSample {
        SpectralSample {
            k,
            k_hat: self.op.k_hat_from_k(k),
            eigenvalues: ev.iter().map(|l| Complex64::i() * l / k).collect(),
            physical,
        }
    }
}

// Index of the entry nearest `target`, with the nearest and second-nearest distances.
fn nearest(values: &[Complex64], target: Complex64) -> (usize, f64, f64) {
    let mut best = (0, f64::INFINITY);
    let mut second = f64::INFINITY;
    for (i, v) in values.iter().enumerate() {
        let d = (v - target).norm();
        if d < best.1 {
            second = best.1;
            best = (i, d);
        } else if d < second {
            second = d;
        }
    }
    (best.0, best.1, second)
}

/// Tracked physical-mode phase velocities over `(0, pi]`.
#[derive(Clone, Debug)]
pub struct SpectralCurve {
    pub p: usize,
    pub gamma: f64,
    pub correction_kind: CorrectionKind,
    pub samples: Vec<SpectralSample>,
}

impl SpectralCurve {
    pub fn k_hat(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.k_hat).collect()
    }

    /// Physical-branch phase velocities.
    pub fn c(&self) -> Vec<Complex64> {
        self.samples.iter().map(SpectralSample::c).collect()
    }
}

/// Samples the physical branch at `k_hat = pi n / n_samples`, `n = 1..=n_samples`.
pub fn dispersion_curve(
    p: usize,
    gamma: f64,
    kind: CorrectionKind,
    n_samples: usize,
) -> Result<SpectralCurve> {
    if n_samples < 64 {
        return Err(invalid(format!("need at least 64 samples, got {n_samples}")));
    }
    let element = ReferenceElement::new(p, kind)?;
    let op = SemiDiscreteOperator::new(&element, gamma, 1.0)?;
    let k_hats: Vec<f64> = (1..=n_samples)
        .map(|n| std::f64::consts::PI * n as f64 / n_samples as f64)
        .collect();
    let samples = track_curve(&op, &k_hats)?;
    Ok(SpectralCurve {
        p,
        gamma,
        correction_kind: kind,
        samples,
    })
}

/// Tracks the physical branch through an ascending list of `k_hat` values.
pub fn track_curve(op: &SemiDiscreteOperator, k_hats: &[f64]) -> Result<Vec<SpectralSample>> {
    if k_hats.windows(2).any(|w| w[1] <= w[0]) || k_hats.first().is_some_and(|k| *k <= 0.0) {
        return Err(invalid("wavenumbers must be positive and strictly increasing"));
    }
    let mut tracker = Tracker::new(op)?;
    k_hats
        .iter()
        .map(|&kh| tracker.advance(op.k_from_k_hat(kh)))
        .collect()
}

/// Dispersion curves for several expansion rates in parallel.
pub fn dispersion_curves(
    p: usize,
    gammas: &[f64],
    kind: CorrectionKind,
    n_samples: usize,
) -> Result<Vec<SpectralCurve>> {
    gammas
        .par_iter()
        .map(|&g| dispersion_curve(p, g, kind, n_samples))
        .collect()
}

/// One row of an implicit filter kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelPoint {
    pub k_hat: f64,
    pub g: f64,
}

/// Implicit filter kernel `G(k_hat) = exp(t k_hat Im c)` normalised so `G(0) = 1`.
///
/// `t` is measured in solution-point spacings travelled at unit speed.
pub fn filter_kernel(curve: &SpectralCurve, t: f64) -> Result<Vec<KernelPoint>> {
    let g0 = kernel_exponent_at_zero(curve)?;
    Ok(filter_kernel_raw(curve, t)?
        .into_iter()
        .map(|kp| KernelPoint {
            k_hat: kp.k_hat,
            g: kp.g * (-t * g0).exp(),
        })
        .collect())
}

/// Kernel before normalisation, `exp(t k_hat Im c)`.
pub fn filter_kernel_raw(curve: &SpectralCurve, t: f64) -> Result<Vec<KernelPoint>> {
    if !(t > 0.0) {
        return Err(invalid(format!("kernel time must be positive, got {t}")));
    }
    Ok(curve
        .samples
        .iter()
        .map(|s| KernelPoint {
            k_hat: s.k_hat,
            g: (t * s.k_hat * s.c().im).exp(),
        })
        .collect())
}

// Limit of k_hat Im c as k_hat -> 0, i.e. the metric growth rate in solution-point units.
fn kernel_exponent_at_zero(curve: &SpectralCurve) -> Result<f64> {
    let element = ReferenceElement::new(curve.p, curve.correction_kind)?;
    let op = SemiDiscreteOperator::new(&element, curve.gamma, 1.0)?;
    Ok(op.metric_growth_rate()? * op.delta_j / (curve.p as f64 + 1.0))
}

/// Smallest sampled `k_hat` where the kernel falls to `level`, or `pi` if it never does.
pub fn kernel_cutoff(kernel: &[KernelPoint], level: f64) -> f64 {
    let mut prev: Option<KernelPoint> = None;
    for kp in kernel {
        if kp.g <= level {
            return match prev {
                Some(a) if a.g > level => {
                    a.k_hat + (kp.k_hat - a.k_hat) * (a.g - level) / (a.g - kp.g)
                }
                _ => kp.k_hat,
            };
        }
        prev = Some(*kp);
    }
    std::f64::consts::PI
}

/// How the resolved band is read off a dispersion error curve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PpwRule {
    /// Largest prefix of `k_hat` whose running RMS dispersion error stays below epsilon.
    #[default]
    CumulativeRms,
    /// Largest prefix of `k_hat` on which every pointwise error stays below epsilon.
    FirstCrossing,
}

impl std::fmt::Display for PpwRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::CumulativeRms => "rms",
            Self::FirstCrossing => "first-crossing",
        })
    }
}

impl std::str::FromStr for PpwRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rms" | "cumulative-rms" => Ok(Self::CumulativeRms),
            "first-crossing" | "sup" => Ok(Self::FirstCrossing),
            other => Err(invalid(format!("unknown PPW rule '{other}'"))),
        }
    }
}

/// Points per wavelength `2 pi / k_hat*` from paired `(k_hat, Re c)` samples.
///
/// Returns `f64::INFINITY` when even the first sample misses the tolerance.
/// The crossing is interpolated linearly between the bracketing samples.
pub fn ppw_from_samples(k_hat: &[f64], re_c: &[f64], epsilon: f64, rule: PpwRule) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if k_hat.len() != re_c.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} wavenumbers vs {} phase velocities",
            k_hat.len(),
            re_c.len()
        )));
    }
    let errors: Vec<f64> = match rule {
        PpwRule::FirstCrossing => re_c.iter().map(|c| (c - 1.0).abs()).collect(),
        PpwRule::CumulativeRms => {
            let mut acc = 0.0;
            re_c.iter()
                .enumerate()
                .map(|(n, c)| {
                    acc += (c - 1.0).powi(2);
                    (acc / (n as f64 + 1.0)).sqrt()
                })
                .collect()
        }
    };
    let mut k_star = None;
    for n in 0..errors.len() {
        if errors[n] >= epsilon {
            if n > 0 {
                let (e0, e1) = (errors[n - 1], errors[n]);
                k_star = Some(k_hat[n - 1] + (k_hat[n] - k_hat[n - 1]) * (epsilon - e0) / (e1 - e0));
            }
            break;
        }
        k_star = Some(k_hat[n]);
    }
    Ok(match k_star {
        Some(k) if k > 0.0 => 2.0 * std::f64::consts::PI / k,
        _ => f64::INFINITY,
    })
}

/// Points per wavelength for dispersion error below `epsilon`.
pub fn ppw(curve: &SpectralCurve, epsilon: f64, rule: PpwRule) -> Result<f64> {
    let re: Vec<f64> = curve.c().iter().map(|c| c.re).collect();
    ppw_from_samples(&curve.k_hat(), &re, epsilon, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn op(p: usize, gamma: f64, delta: f64) -> SemiDiscreteOperator {
        let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
        SemiDiscreteOperator::new(&e, gamma, delta).unwrap()
    }

    #[test]
    fn operator_identities() {
        for p in 1..=6 {
            let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
            let o = SemiDiscreteOperator::new(&e, 1.3, 0.7).unwrap();
            for r in 0..=p {
                for c in 0..=p {
                    let c0 = e.d[(r, c)] - e.hl[r] * e.ll[c];
                    let cm1 = e.hl[r] * e.lr[c];
                    assert!((o.c0[(r, c)] - c0).abs() < 1e-14);
                    assert!((o.cm1[(r, c)] - cm1).abs() < 1e-14);
                }
                let row_sum: f64 = (0..=p).map(|c| o.c0[(r, c)] + o.cm1[(r, c)]).sum();
                assert!(row_sum.abs() < 1e-12);
            }
            assert!((o.jj - 0.35).abs() < 1e-15);
            assert!((o.jjm1 - 0.7 / 2.6).abs() < 1e-15);
        }
        assert!(SemiDiscreteOperator::new(&ReferenceElement::new(2, CorrectionKind::Dg).unwrap(), 0.0, 1.0).is_err());
        assert!(SemiDiscreteOperator::new(&ReferenceElement::new(2, CorrectionKind::Dg).unwrap(), 1.0, -1.0).is_err());
    }

    #[test]
    fn uniform_unit_jacobian_case() {
        let o = op(3, 1.0, 2.0);
        assert_eq!(o.jj, 1.0);
        assert_eq!(o.jjm1, 1.0);
        let k = 0.4;
        let q = o.q(k);
        let shift = Complex64::from_polar(1.0, -2.0 * k);
        for r in 0..4 {
            for c in 0..4 {
                let expect = -o.c0[(r, c)] - o.cm1[(r, c)] * shift;
                assert!((q[(r, c)] - expect).norm() < 1e-14);
            }
        }
    }

    // Direct two-cell assembly: the upwind cell holds u e^{-ik delta}, each cell
    // applies D f + (f_common - f_own) h at its left face, with transformed
    // fluxes f_hat = u J so that the common flux uses the upwind cell's J.
    #[test]
    fn q_matches_two_cell_bloch_assembly() {
        let (p, gamma, delta) = (3, 1.2, 0.8);
        let e = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
        let o = SemiDiscreteOperator::new(&e, gamma, delta).unwrap();
        let jj = delta / 2.0;
        let jm = delta / (2.0 * gamma);
        let k = 3.1;
        let phase = Complex64::from_polar(1.0, -k * delta);
        let n = p + 1;
        let mut brute = DMatrix::<Complex64>::zeros(n, n);
        for m in 0..n {
            // Unit transformed-variable state at point m of the current cell.
            let mut uhat = vec![Complex64::new(0.0, 0.0); n];
            uhat[m] = Complex64::new(1.0, 0.0);
            let u: Vec<Complex64> = uhat.iter().map(|v| v / jj).collect();
            let u_up: Vec<Complex64> = uhat.iter().map(|v| v * phase / jm).collect();
            let f_own: Complex64 = (0..n).map(|i| e.ll[i] * u[i]).sum();
            let f_common: Complex64 = (0..n).map(|i| e.lr[i] * u_up[i]).sum();
            for r in 0..n {
                let df: Complex64 = (0..n).map(|i| e.d[(r, i)] * u[i]).sum();
                brute[(r, m)] = -(df + (f_common - f_own) * e.hl[r]);
            }
        }
        let q = o.q(k);
        for r in 0..n {
            for c in 0..n {
                assert!((q[(r, c)] - brute[(r, c)]).norm() < 1e-12, "{r},{c}");
            }
        }
    }

    #[test]
    fn consistency_on_uniform_grids() {
        for p in 2..=5 {
            let o = op(p, 1.0, 1.0);
            let s = o.modified_phase_velocity(o.k_from_k_hat(0.01)).unwrap();
            assert_eq!(s.eigenvalues.len(), p + 1);
            assert!((s.c() - 1.0).norm() < 1e-3);
        }
    }

    #[test]
    fn uniform_grid_is_dissipative() {
        let curve = dispersion_curve(3, 1.0, CorrectionKind::HuynhG2, 256).unwrap();
        for c in curve.c() {
            assert!(c.im <= 1e-12, "{c}");
        }
    }

    #[test]
    fn expansion_is_anti_dissipative() {
        let curve = dispersion_curve(3, 1.2, CorrectionKind::HuynhG2, 256).unwrap();
        assert!(curve
            .samples
            .iter()
            .any(|s| s.k_hat > 0.3 * PI && s.k_hat < 0.7 * PI && s.c().im > 0.0));
    }

    #[test]
    fn real_part_tends_to_one_for_all_expansion_rates() {
        for gamma in [0.6, 0.8, 1.0, 1.2, 1.6] {
            let curve = dispersion_curve(3, gamma, CorrectionKind::HuynhG2, 512).unwrap();
            assert!((curve.samples[0].c().re - 1.0).abs() < 1e-3, "gamma={gamma}");
        }
    }

    #[test]
    fn uniform_dispersion_rises_then_rolls_over() {
        let curve = dispersion_curve(3, 1.0, CorrectionKind::HuynhG2, 256).unwrap();
        let mk: Vec<f64> = curve.samples.iter().map(|s| s.c().re * s.k_hat).collect();
        let peak = mk
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(peak > 64 && peak < 255);
        assert!(mk[..peak].windows(2).all(|w| w[1] > w[0]));
        assert!(mk[255] < mk[peak]);
    }

    #[test]
    fn stretching_brackets_uniform_dispersion() {
        for p in 2..=5 {
            let at = |gamma: f64| {
                let o = op(p, gamma, 1.0);
                o.modified_phase_velocity(o.k_from_k_hat(PI / 2.0)).unwrap().c().re
            };
            let uniform = at(1.0);
            for gamma in [1.2, 1.4] {
                assert!(at(1.0 / gamma) < uniform, "p={p} gamma={gamma}");
                assert!(at(gamma) > uniform, "p={p} gamma={gamma}");
            }
        }
    }

    #[test]
    fn tracking_has_no_branch_jumps() {
        for (p, gamma) in [(2, 1.0), (3, 0.6), (3, 1.4), (4, 1.2), (5, 0.8)] {
            let curve = dispersion_curve(p, gamma, CorrectionKind::HuynhG2, 512).unwrap();
            let c = curve.c();
            for n in 2..c.len() {
                let step = (c[n] - c[n - 1]).norm();
                let secant = (c[n - 1] - c[n - 2]).norm();
                assert!(step <= 10.0 * secant + 1e-9, "p={p} gamma={gamma} n={n}");
            }
        }
    }

    #[test]
    fn result_depends_only_on_local_pair() {
        let e = ReferenceElement::new(3, CorrectionKind::HuynhG2).unwrap();
        // The same (gamma, delta) pair taken from two unrelated stretched grids.
        let a = SemiDiscreteOperator::new(&e, 1.1, 0.3 * 1.1_f64.powi(4)).unwrap();
        let b = SemiDiscreteOperator::new(&e, 1.1, 0.3 * 1.1_f64.powi(4)).unwrap();
        let k = a.k_from_k_hat(1.0);
        assert_eq!(a.modified_phase_velocity(k).unwrap(), b.modified_phase_velocity(k).unwrap());
    }

    #[test]
    fn filter_kernel_normalisation_and_time_scaling() {
        for gamma in [1.0, 1.2] {
            let curve = dispersion_curve(3, gamma, CorrectionKind::HuynhG2, 512).unwrap();
            let g = filter_kernel(&curve, 100.0).unwrap();
            assert!((g[0].g - 1.0).abs() < 1e-2, "gamma={gamma}: {}", g[0].g);
            let g1 = filter_kernel_raw(&curve, 50.0).unwrap();
            let g2 = filter_kernel_raw(&curve, 100.0).unwrap();
            for (a, b) in g1.iter().zip(&g2) {
                assert!((a.g * a.g - b.g).abs() <= 1e-12 * b.g.max(1.0));
            }
        }
    }

    #[test]
    fn filter_cutoff_diminishing_returns() {
        let cut: Vec<f64> = (2..=6)
            .map(|p| {
                let curve = dispersion_curve(p, 1.0, CorrectionKind::HuynhG2, 512).unwrap();
                kernel_cutoff(&filter_kernel(&curve, 100.0).unwrap(), 0.5)
            })
            .collect();
        for w in cut.windows(2) {
            assert!(w[1] > w[0], "{cut:?}");
        }
        let gains: Vec<f64> = cut.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(gains[2] < gains[0] && gains[3] < gains[0], "{gains:?}");
    }

    #[test]
    fn ppw_of_exact_curve_is_two() {
        let k: Vec<f64> = (1..=64).map(|n| PI * n as f64 / 64.0).collect();
        let c = vec![1.0; 64];
        for rule in [PpwRule::CumulativeRms, PpwRule::FirstCrossing] {
            assert!((ppw_from_samples(&k, &c, 0.01, rule).unwrap() - 2.0).abs() < 1e-14);
        }
        let bad = vec![0.5; 64];
        assert_eq!(ppw_from_samples(&k, &bad, 0.01, PpwRule::FirstCrossing).unwrap(), f64::INFINITY);
        assert!(ppw_from_samples(&k, &c, 0.0, PpwRule::FirstCrossing).is_err());
    }

    #[test]
    fn uniform_ppw_decreases_with_order() {
        let v: Vec<f64> = (2..=5)
            .map(|p| {
                let curve = dispersion_curve(p, 1.0, CorrectionKind::HuynhG2, 512).unwrap();
                ppw(&curve, 0.01, PpwRule::CumulativeRms).unwrap()
            })
            .collect();
        for w in v.windows(2) {
            assert!(w[1] < w[0], "{v:?}");
        }
    }

    #[test]
    fn p4_p5_crossover_under_stretching() {
        let at = |p, gamma| {
            let curve = dispersion_curve(p, gamma, CorrectionKind::HuynhG2, 512).unwrap();
            ppw(&curve, 0.01, PpwRule::CumulativeRms).unwrap()
        };
        let diffs: Vec<f64> = [0.6, 0.8, 1.0, 1.2, 1.4]
            .iter()
            .map(|&g| at(5, g) - at(4, g))
            .collect();
        assert!(diffs.iter().any(|d| *d < 0.0), "{diffs:?}");
        assert!(diffs.iter().any(|d| *d > 0.0), "{diffs:?}");
    }
}

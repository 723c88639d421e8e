use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flux_recon::advect1d::time::{advance, LinearRhs};
use flux_recon::advect1d::transfer::{
    numeric_ppw, numeric_ppw_sweep, wave_transfer_function, TransferPoint, TransferTable, WaveConfig,
    WaveScheme,
};
use flux_recon::advect1d::{spatial_slice, FdAdvection, FdScheme, FrAdvection, SliceConfig, StretchedGrid1D};
use flux_recon::spectral::fd::fd_modified_wavenumber;
use flux_recon::spectral::{dispersion_curve, ppw, PpwRule, SemiDiscreteOperator};
use flux_recon::stability::RkScheme;
use flux_recon::{CorrectionKind, ReferenceElement};

fn fr_solver(p: usize, cells: usize, gamma: f64) -> FrAdvection {
    let element = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
    FrAdvection::new(element, StretchedGrid1D::new(cells, gamma, 1.0).unwrap())
}

/// Physical eigenpair of the uniform-grid Bloch operator for wavelength count `m`.
fn physical_mode(p: usize, cells: usize, m: usize) -> (Complex64, Vec<Complex64>) {
    let element = ReferenceElement::new(p, CorrectionKind::HuynhG2).unwrap();
    let delta = 1.0 / cells as f64;
    let op = SemiDiscreteOperator::new(&element, 1.0, delta).unwrap();
    let k = 2.0 * PI * m as f64;
    let c = op.modified_phase_velocity(k).unwrap().c();
    let lambda = Complex64::new(0.0, -k) * c;
    let mut shifted = op.q(k);
    for i in 0..=p {
        shifted[(i, i)] -= lambda;
    }
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let (imin, smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    assert!(*smin < 1e-10, "no null vector, smallest singular value {smin}");
    let v: Vec<Complex64> = v_t.row(imin).iter().map(|z| z.conj()).collect();
    (lambda, v)
}

fn bloch_field(v: &[Complex64], cells: usize, m: usize) -> Vec<Complex64> {
    let k = 2.0 * PI * m as f64;
    let delta = 1.0 / cells as f64;
    (0..cells)
        .flat_map(|j| {
            let phase = Complex64::from_polar(1.0, k * j as f64 * delta);
            v.iter().map(move |vr| vr * phase)
        })
        .collect()
}

fn advance_complex(rhs: &FrAdvection, u: &[Complex64], tau: f64, steps: usize) -> Vec<Complex64> {
    let mut re: Vec<f64> = u.iter().map(|z| z.re).collect();
    let mut im: Vec<f64> = u.iter().map(|z| z.im).collect();
    advance(rhs, &mut re, tau, RkScheme::Rk44, steps).unwrap();
    advance(rhs, &mut im, tau, RkScheme::Rk44, steps).unwrap();
    re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect()
}

#[test]
fn fr_constant_field_has_zero_rhs() {
    for gamma in [1.0, 1.2, 0.8] {
        let s = fr_solver(4, 9, gamma);
        let u = vec![3.5; s.len()];
        let mut out = vec![1.0; s.len()];
        s.apply(&u, &mut out);
        assert!(out.iter().all(|v| v.abs() < 1e-12), "gamma {gamma}: {out:?}");
    }
}

#[test]
fn fr_transports_linear_data_exactly() {
    for p in 1..=5 {
        let s = fr_solver(p, 2, 1.0);
        let u = s.points();
        let mut out = vec![0.0; u.len()];
        s.apply_with_inflow(&u, 0.0, &mut out);
        for v in out {
            assert!((v + 1.0).abs() < 1e-12, "p={p}: {v}");
        }
    }
}

#[test]
fn fr_short_step_matches_analytic_mode() {
    let (p, cells, m) = (3, 10, 6);
    let s = fr_solver(p, cells, 1.0);
    assert!((2.0 * PI * m as f64 / cells as f64 / (p + 1) as f64 - 0.3 * PI).abs() < 1e-12);
    let (lambda, v) = physical_mode(p, cells, m);
    let u0 = bloch_field(&v, cells, m);
    let tau = 1e-3 / cells as f64;
    let u1 = advance_complex(&s, &u0, tau, 1);
    let num: Complex64 = u1.iter().zip(&u0).map(|(a, b)| a * b.conj()).sum();
    let den: f64 = u0.iter().map(|z| z.norm_sqr()).sum();
    let measured = (num / den).ln() / tau;
    let k = 2.0 * PI * m as f64;
    let c_measured = Complex64::new(0.0, 1.0) * measured / k;
    let c_analytic = Complex64::new(0.0, 1.0) * lambda / k;
    assert!((c_measured - c_analytic).norm() < 1e-6, "{c_measured} vs {c_analytic}");
}

#[test]
fn fr_long_run_matches_analytic_mode() {
    let (p, cells, m) = (3, 10, 4);
    let s = fr_solver(p, cells, 1.0);
    let (lambda, v) = physical_mode(p, cells, m);
    let u0 = bloch_field(&v, cells, m);
    let tau = 0.01 / cells as f64;
    let steps = 1000;
    let u = advance_complex(&s, &u0, tau, steps);
    let growth = (lambda * tau * steps as f64).exp();
    let err: f64 = u.iter().zip(&u0).map(|(a, b)| (a - growth * b).norm_sqr()).sum::<f64>().sqrt();
    let scale: f64 = u0.iter().map(|z| (growth * z).norm_sqr()).sum::<f64>().sqrt();
    assert!(err / scale < 5e-3, "relative error {}", err / scale);
}

#[test]
fn fr_conserves_the_integral() {
    let s = fr_solver(3, 12, 1.1);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut u: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let before = s.integral(&u);
    let tau = 0.01 * s.grid.delta[0];
    advance(&s, &mut u, tau, RkScheme::Rk44, 1000).unwrap();
    assert!((s.integral(&u) - before).abs() < 1e-10);
}

#[test]
fn fr_is_linear() {
    let s = fr_solver(4, 8, 1.15);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    let (mut a, mut b) = (a, b);
    let tau = 0.01 * s.grid.delta[0];
    for u in [&mut a, &mut b, &mut sum] {
        advance(&s, u, tau, RkScheme::Rk44, 200).unwrap();
    }
    for i in 0..s.len() {
        assert!((sum[i] - a[i] - b[i]).abs() < 1e-12);
    }
}

#[test]
fn fd_constant_field_has_zero_rhs() {
    for order in [2, 3, 4, 6, 8] {
        let grid = StretchedGrid1D::new(30, 1.05, 1.0).unwrap();
        let s = FdAdvection::new(FdScheme::new(order, 0.01).unwrap(), &grid).unwrap();
        let mut out = vec![1.0; s.len()];
        s.apply(&vec![2.0; s.len()], &mut out);
        assert!(out.iter().all(|v| v.abs() < 1e-11), "order {order}");
    }
}

#[test]
fn fd_rejects_a_stencil_wider_than_the_grid() {
    let grid = StretchedGrid1D::new(6, 1.0, 1.0).unwrap();
    assert!(FdAdvection::new(FdScheme::new(8, 0.0).unwrap(), &grid).is_err());
}

#[test]
fn cd4_matches_its_modified_wavenumber() {
    let n = 32;
    let grid = StretchedGrid1D::new(n, 1.0, 1.0).unwrap();
    let s = FdAdvection::new(FdScheme::new(4, 0.0).unwrap(), &grid).unwrap();
    let m = 5;
    let k = 2.0 * PI * m as f64;
    let re: Vec<f64> = s.x.iter().map(|x| (k * x).cos()).collect();
    let im: Vec<f64> = s.x.iter().map(|x| (k * x).sin()).collect();
    let (mut lre, mut lim) = (vec![0.0; n], vec![0.0; n]);
    s.apply(&re, &mut lre);
    s.apply(&im, &mut lim);
    let stencil = s.stencil(3);
    let c = fd_modified_wavenumber(&stencil.offsets, &stencil.weights, k).unwrap();
    for i in 0..n {
        let u = Complex64::new(re[i], im[i]);
        let expect = Complex64::new(0.0, -k) * c * u;
        assert!((Complex64::new(lre[i], lim[i]) - expect).norm() < 1e-9);
    }
}

#[test]
fn lax_friedrichs_blend_adds_dissipation() {
    let dof = 64;
    let mode = dof / 4;
    let blended = WaveConfig::new(WaveScheme::Fd(FdScheme::new(4, 0.01).unwrap()), 1.0, dof, vec![mode]);
    let pt = wave_transfer_function(&blended).unwrap().points[0];
    assert!((pt.k_hat - 0.5 * PI).abs() < 1e-12);
    assert!(pt.im_k_hat_prime < -1e-4, "{pt:?}");
    let pure = WaveConfig::new(WaveScheme::Fd(FdScheme::new(4, 0.0).unwrap()), 1.0, dof, vec![mode]);
    let pt = wave_transfer_function(&pure).unwrap().points[0];
    assert!(pt.im_k_hat_prime.abs() < 1e-8, "{pt:?}");
}

#[test]
fn constant_mode_transfers_unchanged() {
    for scheme in [WaveScheme::fr(3), WaveScheme::Fd(FdScheme::new(4, 0.01).unwrap())] {
        let table = wave_transfer_function(&WaveConfig::new(scheme, 1.0, 40, vec![0])).unwrap();
        let pt = table.points[0];
        assert!((pt.transfer - 1.0).norm() < 1e-12, "{scheme}: {}", pt.transfer);
        assert!(pt.re_k_hat_prime.abs() < 1e-9 && pt.im_k_hat_prime.abs() < 1e-9);
    }
}

#[test]
fn measured_wavenumber_is_cfl_invariant() {
    let dof = 64;
    let modes = vec![4, 8, 12, 16];
    let runs: Vec<TransferTable> = [0.05, 0.01, 0.005]
        .iter()
        .map(|&cfl| {
            let mut cfg = WaveConfig::new(WaveScheme::fr(3), 1.0, dof, modes.clone());
            cfg.cfl = cfl;
            wave_transfer_function(&cfg).unwrap()
        })
        .collect();
    let bin = PI / dof as f64;
    for i in 0..modes.len() {
        for r in &runs[1..] {
            assert!((r.points[i].re_k_hat_prime - runs[0].points[i].re_k_hat_prime).abs() < bin);
        }
    }
}

#[test]
fn uniform_fr_transfer_matches_analytic() {
    let dof = 40;
    let cfg = WaveConfig::new(WaveScheme::fr(3), 1.0, dof, WaveConfig::modes_up_to(dof, 0.7 * PI));
    let table = wave_transfer_function(&cfg).unwrap();
    let element = ReferenceElement::new(3, CorrectionKind::HuynhG2).unwrap();
    let op = SemiDiscreteOperator::new(&element, 1.0, 1.0).unwrap();
    for pt in &table.points {
        let c = op.modified_phase_velocity(op.k_from_k_hat(pt.k_hat)).unwrap().c();
        assert!((pt.re_k_hat_prime - c.re * pt.k_hat).abs() < 1e-6, "{pt:?}");
        assert!((pt.im_k_hat_prime - c.im * pt.k_hat).abs() < 1e-6, "{pt:?}");
    }
}

#[test]
fn identity_transfer_needs_two_points_per_wavelength() {
    let dof = 64;
    let points = (1..=dof / 2)
        .map(|m| {
            let k_hat = 2.0 * PI * m as f64 / dof as f64;
            TransferPoint {
                mode: m,
                k_hat,
                re_k_hat_prime: k_hat,
                im_k_hat_prime: 0.0,
                leakage: 0.0,
                transfer: Complex64::new(1.0, 0.0),
            }
        })
        .collect();
    let table = TransferTable {
        scheme: WaveScheme::fr(3),
        gamma: 1.0,
        dof,
        cfl: 0.01,
        steps: 0,
        points,
    };
    for rule in [PpwRule::CumulativeRms, PpwRule::FirstCrossing] {
        assert!((numeric_ppw(&table, 0.01, rule).unwrap() - 2.0).abs() < 1e-12);
    }
}

#[test]
fn fr_needs_fewer_points_than_fd_on_a_uniform_grid() {
    let rule = PpwRule::default();
    let fr = WaveConfig::new(WaveScheme::fr(4), 1.0, 180, Vec::new());
    let fd = WaveConfig::new(WaveScheme::Fd(FdScheme::new(4, 0.01).unwrap()), 1.0, 180, Vec::new());
    let (a, _) = numeric_ppw_sweep(&fr, 0.01, rule, 8).unwrap();
    let (b, _) = numeric_ppw_sweep(&fd, 0.01, rule, 8).unwrap();
    assert!(a < b, "FR {a} vs FD {b}");
}

#[test]
fn sweep_matches_a_full_measurement() {
    let rule = PpwRule::default();
    let cfg = WaveConfig::new(WaveScheme::fr(3), 1.0, 60, WaveConfig::modes_up_to(60, 0.75 * PI));
    let full = numeric_ppw(&wave_transfer_function(&cfg).unwrap(), 0.01, rule).unwrap();
    let (swept, table) = numeric_ppw_sweep(&cfg, 0.01, rule, 4).unwrap();
    assert_eq!(full, swept);
    assert!(table.points.len() < cfg.modes.len());
}

#[test]
fn stretched_numeric_ppw_exceeds_analytic() {
    let rule = PpwRule::default();
    let cfg = WaveConfig::new(WaveScheme::fr(3), 1.2, 180, Vec::new());
    let (numeric, _) = numeric_ppw_sweep(&cfg, 0.01, rule, 8).unwrap();
    let analytic = ppw(&dispersion_curve(3, 1.2, CorrectionKind::HuynhG2, 512).unwrap(), 0.01, rule).unwrap();
    assert!(numeric > analytic, "numeric {numeric} vs analytic {analytic}");
}

#[test]
fn stretched_fr_needs_a_third_of_the_fd_points() {
    let rule = PpwRule::default();
    let fr = WaveConfig::new(WaveScheme::fr(3), 1.2, 180, Vec::new());
    let fd = WaveConfig::new(WaveScheme::Fd(FdScheme::new(4, 0.01).unwrap()), 1.2, 180, Vec::new());
    let (a, _) = numeric_ppw_sweep(&fr, 0.01, rule, 8).unwrap();
    let (b, _) = numeric_ppw_sweep(&fd, 0.01, rule, 8).unwrap();
    assert!(a <= b / 3.0, "FR {a} vs FD {b}");
}

#[test]
fn slice_grows_recovers_then_decays() {
    let profile = spatial_slice(&SliceConfig::default()).unwrap();
    let a = &profile.amplitude;
    let (peak, &top) = a.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap();
    assert!(top > 1.01, "no transient growth: {a:?}");
    let recovered = (peak + 1..a.len())
        .find(|&j| (a[j] - 1.0).abs() < 0.05)
        .expect("no recovery after the peak");
    let decayed = (recovered + 1..a.len()).find(|&j| a[j] < 1e-2);
    assert!(decayed.is_some(), "no decay on the coarse cells: {a:?}");
    for w in profile.k_hat.windows(2) {
        assert!(w[1] > w[0]);
    }
}

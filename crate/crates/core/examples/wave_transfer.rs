//! Measures modified wavenumbers of FR p=3 with the transfer-function harness
//! and compares them with the analytic physical mode.

use std::f64::consts::PI;

use flux_recon::advect1d::transfer::{wave_transfer_function, WaveConfig, WaveScheme};
use flux_recon::spectral::SemiDiscreteOperator;
use flux_recon::{CorrectionKind, ReferenceElement};

fn main() -> flux_recon::Result<()> {
    let p = 3;
    let dof: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(180);
    let element = ReferenceElement::new(p, CorrectionKind::HuynhG2)?;
    for gamma in [0.9, 1.0, 1.1] {
        let mut cfg = WaveConfig::new(WaveScheme::fr(p), gamma, dof, WaveConfig::modes_up_to(dof, 0.7 * PI));
        cfg.leakage_threshold = 1.0;
        let table = wave_transfer_function(&cfg)?;
        let op = SemiDiscreteOperator::new(&element, gamma, 1.0)?;
        println!("gamma = {gamma}, {} steps", table.steps);
        println!("{:>8} {:>10} {:>10} {:>10} {:>8}", "k_hat/pi", "numeric", "analytic", "im num", "leakage");
        let mut worst: f64 = 0.0;
        for pt in &table.points {
            let analytic = op.modified_phase_velocity(op.k_from_k_hat(pt.k_hat))?.c().re * pt.k_hat;
            worst = worst.max((pt.re_k_hat_prime - analytic).abs());
            println!(
                "{:8.4} {:10.5} {:10.5} {:10.5} {:8.4}",
                pt.k_hat / PI,
                pt.re_k_hat_prime,
                analytic,
                pt.im_k_hat_prime,
                pt.leakage
            );
        }
        println!("largest |numeric - analytic| = {worst:.4}\n");
    }
    Ok(())
}

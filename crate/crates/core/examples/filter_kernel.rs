//! Implicit filter kernel of FR at several elapsed times and its half-power cutoff.

use std::f64::consts::PI;

use flux_recon::spectral::{dispersion_curve, filter_kernel, kernel_cutoff};
use flux_recon::CorrectionKind;

fn main() -> flux_recon::Result<()> {
    for p in [2, 3, 4, 5] {
        let curve = dispersion_curve(p, 1.0, CorrectionKind::HuynhG2, 512)?;
        print!("p = {p}:");
        for t in [10.0, 100.0, 1000.0] {
            let kernel = filter_kernel(&curve, t)?;
            print!("  t = {t:>6}: cutoff {:.3} pi", kernel_cutoff(&kernel, 0.5) / PI);
        }
        println!();
    }
    Ok(())
}

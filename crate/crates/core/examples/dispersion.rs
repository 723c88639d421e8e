//! Modified phase velocity of FR on uniform, contracting and expanding grids.

use std::f64::consts::PI;

use flux_recon::spectral::dispersion_curve;
use flux_recon::CorrectionKind;

fn main() -> flux_recon::Result<()> {
    let p = 3;
    let curves = [0.8, 1.0, 1.2]
        .iter()
        .map(|&g| dispersion_curve(p, g, CorrectionKind::HuynhG2, 64))
        .collect::<flux_recon::Result<Vec<_>>>()?;
    println!("p = {p}, columns Re c / Im c per gamma");
    print!("{:>8}", "k_hat/pi");
    for curve in &curves {
        print!(" {:>22}", format!("gamma = {}", curve.gamma));
    }
    println!();
    for i in (3..curves[0].samples.len()).step_by(4) {
        print!("{:>8.3}", curves[0].samples[i].k_hat / PI);
        for curve in &curves {
            let c = curve.samples[i].c();
            print!(" {:>10.5} {:>11.4e}", c.re, c.im);
        }
        println!();
    }
    Ok(())
}

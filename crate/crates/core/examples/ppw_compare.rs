//! Numeric points-per-wavelength of FR and FD at a fixed number of degrees of freedom.

use flux_recon::advect1d::transfer::{numeric_ppw_sweep, WaveConfig, WaveScheme};
use flux_recon::advect1d::FdScheme;
use flux_recon::spectral::{dispersion_curve, ppw, PpwRule};
use flux_recon::CorrectionKind;

fn main() -> flux_recon::Result<()> {
    let dof = 180;
    let eps = 0.01;
    let rule = PpwRule::default();
    println!("{:>10} {:>6} {:>10} {:>10}", "scheme", "gamma", "numeric", "analytic");
    for p in 2..=5 {
        let cfg = WaveConfig::new(WaveScheme::fr(p), 1.0, dof, Vec::new());
        let (numeric, _) = numeric_ppw_sweep(&cfg, eps, rule, 8)?;
        let analytic = ppw(&dispersion_curve(p, 1.0, CorrectionKind::HuynhG2, 512)?, eps, rule)?;
        println!("{:>10} {:>6.2} {numeric:>10.3} {analytic:>10.3}", format!("FR p={p}"), 1.0);
    }
    for gamma in [1.0, 1.2] {
        let fr = WaveConfig::new(WaveScheme::fr(3), gamma, dof, Vec::new());
        let fd = WaveConfig::new(WaveScheme::Fd(FdScheme::new(4, 0.01)?), gamma, dof, Vec::new());
        let (a, _) = numeric_ppw_sweep(&fr, eps, rule, 8)?;
        let (b, _) = numeric_ppw_sweep(&fd, eps, rule, 8)?;
        println!("{:>10} {gamma:>6.2} {a:>10.3}", "FR p=3");
        println!("{:>10} {gamma:>6.2} {b:>10.3}", "CD4");
    }
    Ok(())
}

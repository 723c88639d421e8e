//! Feeds a sine wave into an expanding FR grid and prints the amplitude envelope.

use flux_recon::advect1d::{spatial_slice, SliceConfig};

fn main() -> flux_recon::Result<()> {
    let mut cfg = SliceConfig::default();
    let mut args = std::env::args().skip(1);
    if let Some(k) = args.next().and_then(|s| s.parse::<f64>().ok()) {
        cfg.k_hat_inflow = k * std::f64::consts::PI;
    }
    if let Some(n) = args.next().and_then(|s| s.parse().ok()) {
        cfg.cells = n;
    }
    let profile = spatial_slice(&cfg)?;
    println!("{:>8} {:>10} {:>8} {:>10}", "x", "k_hat/pi", "cfl", "amplitude");
    for j in 0..profile.x.len() {
        println!(
            "{:8.4} {:10.4} {:8.5} {:10.5}",
            profile.x[j],
            profile.k_hat[j] / std::f64::consts::PI,
            profile.cfl[j],
            profile.amplitude[j]
        );
    }
    Ok(())
}

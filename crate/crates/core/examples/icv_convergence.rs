//! Isentropic convecting vortex: errors and order of accuracy for FR and FV on uniform and skewed meshes.

use flux_recon::euler2d::{convergence, IcvConfig, Scheme, Warp};

fn main() -> flux_recon::Result<()> {
    let cells = [8, 16, 32];
    for (scheme, warp) in [
        (Scheme::Fr { p: 2 }, Warp::None),
        (Scheme::Fr { p: 4 }, Warp::None),
        (Scheme::Fv, Warp::None),
        (Scheme::Fr { p: 4 }, Warp::Skew(6.0)),
        (Scheme::Fv, Warp::Skew(6.0)),
    ] {
        let cfg = IcvConfig { scheme, warp, ..Default::default() };
        let (results, order) = convergence(&cfg, &cells)?;
        println!("{scheme} {warp:?}: OOA {order:.3}");
        for r in &results {
            println!("  dof {:>6}  theta {:.4e}  skew {:.3} deg", r.error.dof, r.error.theta, r.skew);
        }
    }
    Ok(())
}

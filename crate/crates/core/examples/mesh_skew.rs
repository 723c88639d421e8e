//! Seeded mesh jitter, the resulting mean skew angle and the inverse search for a target skew.

use flux_recon::mesh::{jitter, jitter_for_skew, skew_angle, uniform_quad_mesh};

fn main() -> flux_recon::Result<()> {
    let base = uniform_quad_mesh(16, 16, 10.0)?;
    println!("{:>8} {:>12} {:>14}", "factor", "skew (deg)", "min jacobian");
    for factor in [0.0, 0.05, 0.1, 0.2, 0.4, 0.6] {
        let mesh = jitter(&base, factor, 7)?;
        println!("{factor:>8.2} {:>12.4} {:>14.4e}", skew_angle(&mesh)?.alpha, mesh.min_jacobian());
    }
    for target in [1.5, 6.0, 15.0] {
        let (mesh, factor) = jitter_for_skew(&base, target, 7, 1.5)?;
        println!("target {target:>5} deg: factor {factor:.4}, skew {:.4}", skew_angle(&mesh)?.alpha);
    }
    Ok(())
}

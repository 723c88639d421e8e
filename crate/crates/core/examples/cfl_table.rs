//! CFL limits of FR with explicit Runge-Kutta schemes on geometrically stretched grids.

use flux_recon::stability::{cfl_limit, cfl_table, CflSearch, RkScheme, TABLE_GAMMAS, TABLE_ORDERS};

fn main() -> flux_recon::Result<()> {
    let rows = cfl_table(&RkScheme::ALL, &TABLE_ORDERS, &TABLE_GAMMAS, &CflSearch::default())?;
    print!("{:>6} {:>5}", "scheme", "order");
    for g in TABLE_GAMMAS {
        print!(" {g:>7}");
    }
    println!();
    for scheme in RkScheme::ALL {
        for order in TABLE_ORDERS {
            print!("{:>6} {order:>5}", scheme.name());
            for r in rows.iter().filter(|r| r.scheme == scheme && r.p + 1 == order) {
                print!(" {:>7.4}", r.cfl_limit);
            }
            println!();
        }
    }

    let detail = cfl_limit(3, 1.1, RkScheme::Rk44)?;
    println!(
        "\nRK44, order 4, gamma 1.1: limit {:.4} ({}), metric growth rate {:.4}",
        detail.cfl_limit,
        detail.detection.as_str(),
        detail.growth_rate
    );
    println!("{:>8} {:>10}", "cfl", "max rho");
    for (cfl, rho) in detail.rho_curve.iter().step_by(4) {
        println!("{cfl:>8.3} {rho:>10.6}");
    }
    Ok(())
}

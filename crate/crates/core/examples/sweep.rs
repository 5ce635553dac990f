//! Runs a grid of scenarios in parallel and tabulates how the peak force
//! of the ideal rope follows the bound as the allowed stretch grows.
//!
//! ```text
//! cargo run --release --example sweep
//! ```

use rayon::prelude::*;
use ropesim::analysis::{make_report, Scenario};
use ropesim::constitutive::ideal_plateau_law;
use ropesim::dynamics::{simulate_fall, IntegratorConfig};

fn main() -> ropesim::Result<()> {
    let cfg = IntegratorConfig {
        max_time: 5.0,
        stop_at_arrest: true,
        ..Default::default()
    };
    let grid: Vec<(f64, f64)> = [0.5, 1.0, 2.0]
        .iter()
        .flat_map(|&dl| [0.0, 5.0, 9.0].map(move |h0| (dl, h0)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(dl, h0)| {
            let s = Scenario::new(80.0, 9.8, 10.0, dl, h0)?;
            let traj = simulate_fall(&s, ideal_plateau_law(&s)?, &cfg)?;
            Ok(((dl, h0), make_report(&traj, &s)?))
        })
        .collect::<ropesim::Result<Vec<_>>>()?;

    println!("delta_l   h0     b0 [N]   peak [N]      gap   T [s]");
    for ((dl, h0), r) in rows {
        println!(
            "{dl:7.1} {h0:4.1} {:10.1} {:10.1} {:8.1e} {:7.4}",
            r.bound_b0, r.peak_tension, r.optimality_gap, r.arrest_time_t
        );
    }
    Ok(())
}

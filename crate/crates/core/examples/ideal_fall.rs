//! Simulates a fall on the ideal plateau rope and on a linear rope storing
//! the same energy, then compares their peak forces.
//!
//! ```text
//! cargo run --release --example ideal_fall -- [trajectory.csv] [plot.svg]
//! ```

use ropesim::analysis::{lower_bound_b0, make_report, Scenario};
use ropesim::constitutive::{ideal_plateau_law, TensionCurve};
use ropesim::dynamics::{simulate_fall, IntegratorConfig};
use ropesim::plot::trajectory_svg;

fn main() -> ropesim::Result<()> {
    let mut args = std::env::args().skip(1);
    let s = Scenario::new(80.0, 9.8, 10.0, 1.0, 5.0)?;
    let cfg = IntegratorConfig {
        max_time: 2.0,
        stop_at_arrest: true,
        ..Default::default()
    };

    let ideal = simulate_fall(&s, ideal_plateau_law(&s)?, &cfg)?;
    let report = make_report(&ideal, &s)?;
    println!("ideal rope:  {}", serde_json::to_string(&report)?);

    // a linear rope that just reaches delta_l: L·k·e²/2 = mg(L + ΔL − h0) at e = ΔL/L
    let top = s.max_stretch / s.length;
    let k = 2.0 * s.weight() * (s.length + s.max_stretch - s.h0) / (s.length * top * top);
    let linear = simulate_fall(&s, TensionCurve::linear(k)?, &cfg)?;
    let report = make_report(&linear, &s)?;
    println!("linear rope: {}", serde_json::to_string(&report)?);
    println!(
        "peak ratio linear/ideal = {:.3} (bound b0 = {:.1} N)",
        linear.peak_tension() / ideal.peak_tension(),
        lower_bound_b0(&s)
    );

    if let Some(path) = args.next() {
        ideal.save_csv(&path)?;
        println!("wrote {path}");
    }
    if let Some(path) = args.next() {
        std::fs::write(&path, trajectory_svg(&ideal))?;
        println!("wrote {path}");
    }
    Ok(())
}

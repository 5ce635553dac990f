//! A rope that unloads along a lower plateau than it loads. The climber
//! bounces until the motion dies out; where it comes to rest depends on
//! whether the unloading force can carry the body weight.
//!
//! ```text
//! cargo run --release --example hysteresis
//! ```

use ropesim::analysis::{make_report, Scenario};
use ropesim::constitutive::{make_hysteresis, TensionCurve};
use ropesim::dynamics::{simulate_cycles, EventKind, IntegratorConfig};

fn main() -> ropesim::Result<()> {
    let s = Scenario::new(80.0, 9.8, 10.0, 1.0, 5.0)?;
    let loading = TensionCurve::plateau(4704.0, 1e-4, 0.1)?;
    for unloading in [1000.0, 500.0] {
        let law = make_hysteresis(loading.clone(), TensionCurve::plateau(unloading, 1e-4, 0.1)?)?;
        let traj = simulate_cycles(&s, &law, &IntegratorConfig::default())?;
        let report = make_report(&traj, &s)?;
        let turns = traj.events().filter(|p| p.event == Some(EventKind::Turn)).count();
        println!(
            "unloading plateau {unloading:6.0} N (weight {:.0} N): {turns} turns, \
             rest at {:.4} m, max {:.4} m, dissipated {:.1} J",
            s.weight(),
            report.rest_position.unwrap_or(f64::NAN),
            traj.max_position(),
            report.energy_dissipated
        );
    }
    Ok(())
}

//! A rope running over a carabiner. With the plateau law the segment above
//! the carabiner never stretches, so the peak force is the bound computed
//! for the lower segment alone.
//!
//! ```text
//! cargo run --release --example carabiner
//! ```

use ropesim::analysis::lower_bound_b0;
use ropesim::constitutive::ideal_plateau_law_with_ramp;
use ropesim::dynamics::{
    capstan_mu, simulate_carabiner_fall, solve_segment_tension, CarabinerScenario,
    IntegratorConfig,
};

fn main() -> ropesim::Result<()> {
    let cfg = IntegratorConfig {
        max_time: 2.0,
        stop_at_arrest: true,
        ..Default::default()
    };
    let alpha = std::f64::consts::FRAC_PI_2;
    println!("   k      mu   upper strain   peak [N]   b0(lower) [N]   b0(whole) [N]");
    for k in [0.0, 0.1, 0.2, 0.4, 0.8] {
        let cs = CarabinerScenario::new(80.0, 9.8, 1.0, 5.0, 4.0, 6.0, alpha, k)?;
        let lower = cs.lower_segment_scenario();
        let law = ideal_plateau_law_with_ramp(&lower, 0.0)?;
        let traj = simulate_carabiner_fall(&cs, &law, &cfg)?;
        let upper = traj
            .samples()
            .iter()
            .filter_map(|p| p.strain_upper)
            .fold(0.0, f64::max);
        println!(
            "{k:4.1} {:7.4} {upper:14.3e} {:10.1} {:15.1} {:15.1}",
            capstan_mu(alpha, k)?,
            traj.peak_tension(),
            lower_bound_b0(&lower),
            lower_bound_b0(&cs.base())
        );
    }

    // how a displacement splits between the two segments for a linear rope
    let law = ropesim::constitutive::TensionCurve::linear(2e4)?;
    println!("\n  d [m]   tension [N]   upper strain   lower strain");
    for d in [0.1, 0.2, 0.4] {
        let sol = solve_segment_tension(&law, 0.5, 4.0, 6.0, d)?;
        println!(
            "{d:7.2} {:13.2} {:14.5} {:14.5}",
            sol.tension, sol.strain_upper, sol.strain_lower
        );
    }
    Ok(())
}

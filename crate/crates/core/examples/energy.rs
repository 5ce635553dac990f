//! Energy bookkeeping along a fall on a stiffening rope: kinetic,
//! gravitational and elastic parts trade off while the total stays fixed.
//!
//! ```text
//! cargo run --release --example energy
//! ```

use ropesim::analysis::{jensen_gap, Scenario};
use ropesim::constitutive::TensionCurve;
use ropesim::dynamics::{simulate_fall, IntegratorConfig};

fn main() -> ropesim::Result<()> {
    let s = Scenario::new(80.0, 9.8, 10.0, 1.0, 5.0)?;
    let law = TensionCurve::new(vec![(0.0, 0.0), (0.02, 3000.0), (0.06, 7000.0), (0.09, 9500.0)])?;
    let cfg = IntegratorConfig {
        max_time: 0.6,
        record_every: 2000,
        ..Default::default()
    };
    let traj = simulate_fall(&s, law.clone(), &cfg)?;
    let e0 = traj.samples()[0].total_energy();
    println!("   t [s]     y [m]    E_kin     E_grav     E_el      drift");
    for p in traj.samples() {
        println!(
            "{:7.4} {:9.4} {:9.2} {:9.2} {:9.2} {:10.2e}",
            p.t,
            p.y,
            p.e_kin,
            p.e_grav,
            p.e_el,
            (p.total_energy() - e0) / e0.abs()
        );
    }

    // a uniform stretch stores less energy than any uneven one with the same mean
    let w = law.energy();
    let uneven = jensen_gap(&w, |x| 0.04 + 0.02 * (x / s.length - 0.5), &s);
    println!("\nextra energy of an uneven strain profile: {uneven:.4} J");
    Ok(())
}

//! Closed-form quantities for a lead fall: the tension bound b0 and the
//! kinematics of the ideal rope.
//!
//! ```text
//! cargo run --example bound
//! ```

use ropesim::analysis::{
    closed_form_trajectory, ideal_acceleration, ideal_arrest_time, initial_velocity,
    lower_bound_b0, Scenario,
};

fn main() -> ropesim::Result<()> {
    // 80 kg climber, 10 m of rope, 1 m of allowed stretch, clipped 5 m above the anchor
    let s = Scenario::new(80.0, 9.8, 10.0, 1.0, 5.0)?;
    println!("b0 = {:.1} N ({:.2} body weights)", lower_bound_b0(&s), lower_bound_b0(&s) / s.weight());
    println!("a0 = {:.2} m/s^2", ideal_acceleration(&s));
    println!("v0 = {:.4} m/s", initial_velocity(&s));
    let t = ideal_arrest_time(&s);
    println!("T  = {t:.4} s");

    println!("\n    t [s]      y [m]    v [m/s]");
    for i in 0..=8 {
        let ti = t * i as f64 / 8.0;
        let (y, v) = closed_form_trajectory(&s, ti)?;
        println!("{ti:9.4} {y:10.4} {v:10.4}");
    }

    // a longer allowance lowers the bound
    for dl in [0.5, 1.0, 2.0, 4.0] {
        let s = Scenario { max_stretch: dl, ..s };
        println!("delta_l = {dl:3.1} m -> b0 = {:7.1} N", lower_bound_b0(&s));
    }
    Ok(())
}

//! Searches piecewise-linear laws for the one with the smallest peak force
//! and checks how close it comes to the plateau.
//!
//! ```text
//! cargo run --release --example optimize -- [knots] [budget] [law.csv]
//! ```

use ropesim::analysis::{lower_bound_b0, Scenario};
use ropesim::design::{optimality_certificate, optimize_law};
use ropesim::io::write_curve_file;

fn main() -> ropesim::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let knots = args.first().map_or(Ok(8), |a| a.parse()).expect("knots");
    let budget = args.get(1).map_or(Ok(5000), |a| a.parse()).expect("budget");

    let s = Scenario::new(80.0, 9.8, 10.0, 1.0, 5.0)?;
    let result = optimize_law(&s, knots, budget, 0)?;
    let cert = optimality_certificate(&result.law, &s)?;
    println!(
        "{} evaluations, peak {:.1} N vs b0 {:.1} N, gap {:.2e}, plateau deviation {:.2e}",
        result.evaluations,
        result.peak_tension,
        lower_bound_b0(&s),
        cert.gap,
        cert.plateau_deviation
    );
    println!("\n  strain   tension [N]");
    for (e, b) in result.law.knots() {
        println!("{e:8.5} {b:13.1}");
    }
    if let Some(path) = args.get(2) {
        write_curve_file(&result.law, path)?;
        println!("wrote {path}");
    }
    Ok(())
}

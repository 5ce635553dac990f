//! Lower convex envelope of a double-well micro energy. Strains inside the
//! mixture interval are realized as a blend of the two wells.
//!
//! ```text
//! cargo run --example convexify -- [envelope.csv] [plot.svg]
//! ```

use ropesim::constitutive::{envelope_values, mixture_intervals, MicroEnergySamples};
use ropesim::io::write_envelope;
use ropesim::plot::envelope_svg;

fn main() -> ropesim::Result<()> {
    let mut args = std::env::args().skip(1);
    let w = MicroEnergySamples::from_fn(-0.15, 0.15, 61, |e| 1e4 * (e * e - 0.01).powi(2))?;
    let env = envelope_values(&w);

    for (a, b) in mixture_intervals(&w) {
        println!("mixture interval [{a:.3}, {b:.3}]");
    }
    println!("\n strain     W_mic    envelope");
    for (p, v) in w.points().iter().zip(&env).step_by(6) {
        println!("{:7.3} {:9.4} {:11.4}", p.0, p.1, v);
    }

    if let Some(path) = args.next() {
        write_envelope(&w, &env, std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    if let Some(path) = args.next() {
        std::fs::write(&path, envelope_svg(w.points(), &env))?;
        println!("wrote {path}");
    }
    Ok(())
}

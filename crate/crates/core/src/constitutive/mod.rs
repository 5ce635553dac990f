//! One-dimensional constitutive laws: tension curves, energy densities,
//! convexification and hysteresis.

mod convex;
mod curve;
mod energy;
mod hysteresis;

pub use convex::{convexify, envelope_values, lower_hull, mixture_intervals, MicroEnergySamples};
pub use curve::{TensionCurve, DEFAULT_RAMP};
pub use energy::{energy_of_strain, EnergyDensity, PropertyReport, Tail};
pub use hysteresis::{
    make_hysteresis, Branch, Direction, HysteresisLaw, HysteresisState,
};

use crate::analysis::{lower_bound_b0, Scenario};
use crate::error::Result;

/// Tension at `strain`; zero under compression.
pub fn tension(law: &TensionCurve, strain: f64) -> f64 {
    law.tension(strain)
}

/// Left-endpoint generalized inverse of the tension curve.
pub fn strain_of_tension(law: &TensionCurve, tension: f64) -> Result<f64> {
    law.strain_of_tension(tension)
}

pub fn check_properties(w: &EnergyDensity) -> PropertyReport {
    w.check_properties()
}

/// Constant-tension law that minimizes the peak force for `scenario`, with the
/// step at zero strain replaced by a ramp of width [`DEFAULT_RAMP`].
pub fn ideal_plateau_law(scenario: &Scenario) -> Result<TensionCurve> {
    ideal_plateau_law_with_ramp(scenario, DEFAULT_RAMP)
}

/// As [`ideal_plateau_law`] with an explicit ramp width; `ramp = 0` keeps the
/// exact step. The plateau knot is placed at the scenario's maximal strain.
pub fn ideal_plateau_law_with_ramp(scenario: &Scenario, ramp: f64) -> Result<TensionCurve> {
    scenario.validate()?;
    let b0 = lower_bound_b0(scenario);
    let end = (scenario.max_stretch / scenario.length).max(2.0 * ramp);
    TensionCurve::plateau(b0, ramp, end)
}
